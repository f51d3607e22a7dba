//! Independent numerical verification layer.
//!
//! Everything here works directly on the linear drift systems implied by the
//! Langevin equations and never touches the closed forms in [`crate::model`]
//! or [`crate::spectra`]: steady states come from `-M^{-1} b`, stability from
//! eigenvalues, spectra from transfer matrices `T(omega) = (-i omega I -
//! M)^{-1} F`, stationary covariances from the Lyapunov equation, and
//! relaxation from fixed-step RK4. Agreement between the two layers is the
//! backbone of the acceptance suite.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::max_modulus;
use crate::model::SteadyState;
use crate::params::{ModelParams, SidebandCase};

/// Eigenvalue real parts above this are treated as unstable (marginal
/// systems are conservatively reported unstable).
pub const STABILITY_TOL: f64 = 1e-12;

/// Which linear system to build.
///
/// The mean systems are 3-dimensional. The fluctuation systems use the
/// doubled basis `(dc, dA, dB, dc^dag, dA^dag, dB^dag)`: the red case is
/// block-diagonal in it, while the blue case genuinely couples `dc` to
/// `dA^dag` and `dB^dag`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DriftKind {
    MeanRed,
    MeanBlue,
    FluctRed,
    FluctBlue,
}

impl DriftKind {
    pub fn is_fluct(self) -> bool {
        matches!(self, DriftKind::FluctRed | DriftKind::FluctBlue)
    }
}

/// Mean drift kind for a sideband case.
pub fn mean_kind(case: SidebandCase) -> DriftKind {
    match case {
        SidebandCase::Red => DriftKind::MeanRed,
        SidebandCase::Blue => DriftKind::MeanBlue,
    }
}

/// Fluctuation drift kind for a sideband case.
pub fn fluct_kind(case: SidebandCase) -> DriftKind {
    match case {
        SidebandCase::Red => DriftKind::FluctRed,
        SidebandCase::Blue => DriftKind::FluctBlue,
    }
}

/// A linear dynamical system `x' = M x + b + F xi` with noise correlations
/// `<xi_j(t) xi_k^dag(t')> = C_jk delta(t - t')`.
#[derive(Debug, Clone)]
pub struct DriftSystem {
    pub kind: DriftKind,
    /// Drift matrix `M`.
    pub drift: DMatrix<C64>,
    /// Constant drive vector `b`.
    pub drive: DVector<C64>,
    /// Noise injection matrix `F`.
    pub noise_in: DMatrix<C64>,
    /// Real noise correlation matrix `C` (coefficients of the delta function).
    pub noise_corr: DMatrix<f64>,
}

impl DriftSystem {
    pub fn dim(&self) -> usize {
        self.drift.nrows()
    }
}

/// Indices of the `(A, B, vibrational)` spectra on the doubled-basis
/// diagonal. The blue-case vibrational output is the `dc^dag` component.
pub fn spectrum_indices(case: SidebandCase) -> (usize, usize, usize) {
    match case {
        SidebandCase::Red => (1, 2, 0),
        SidebandCase::Blue => (1, 2, 3),
    }
}

fn mean_drift_red(p: &ModelParams, delta: f64) -> (DMatrix<C64>, DVector<C64>) {
    let i = C64::i();
    let m = DMatrix::from_row_slice(
        3,
        3,
        &[
            -i * delta - p.kappa,
            C64::from(-p.g_a),
            C64::from(-p.g_b),
            C64::from(p.g_a),
            -i * delta - p.gamma_a,
            C64::from(0.0),
            C64::from(p.g_b),
            C64::from(0.0),
            -i * delta - p.gamma_b,
        ],
    );
    let b = DVector::from_column_slice(&[C64::from(0.0), -i * p.chi, C64::from(0.0)]);
    (m, b)
}

// Mean blue system on the basis (c, A^dag, B^dag), where the parametric
// coupling closes.
fn mean_drift_blue(p: &ModelParams, delta: f64) -> (DMatrix<C64>, DVector<C64>) {
    let i = C64::i();
    let m = DMatrix::from_row_slice(
        3,
        3,
        &[
            i * delta - p.kappa,
            C64::from(p.g_a),
            C64::from(p.g_b),
            C64::from(p.g_a),
            i * delta - p.gamma_a,
            C64::from(0.0),
            C64::from(p.g_b),
            C64::from(0.0),
            i * delta - p.gamma_b,
        ],
    );
    let b = DVector::from_column_slice(&[C64::from(0.0), i * p.chi, C64::from(0.0)]);
    (m, b)
}

/// Assemble the doubled-basis drift `[[P, Q], [conj(Q), conj(P)]]` from the
/// equations `dx' = P dx + Q dx^dag`; the conjugation symmetry of the result
/// holds by construction.
fn doubled_drift(p_block: &DMatrix<C64>, q_block: &DMatrix<C64>) -> DMatrix<C64> {
    let n = p_block.nrows();
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    for r in 0..n {
        for c in 0..n {
            m[(r, c)] = p_block[(r, c)];
            m[(r, n + c)] = q_block[(r, c)];
            m[(n + r, c)] = q_block[(r, c)].conj();
            m[(n + r, n + c)] = p_block[(r, c)].conj();
        }
    }
    m
}

fn noise_matrices(p: &ModelParams, doubled: bool) -> (DMatrix<C64>, DMatrix<f64>) {
    let amps = [
        (2.0 * p.kappa).sqrt(),
        (2.0 * p.gamma_a).sqrt(),
        (2.0 * p.gamma_b).sqrt(),
    ];
    if doubled {
        let f = DMatrix::from_diagonal(&DVector::from_iterator(
            6,
            amps.iter().chain(amps.iter()).map(|&a| C64::from(a)),
        ));
        // <X_in X_in^dag> = (N+1) delta, <X_in^dag X_in> = N delta, with
        // N(nu) for c and N(omega_eg) for A and B; baths are independent.
        let c = DMatrix::from_diagonal(&DVector::from_column_slice(&[
            p.n_vib + 1.0,
            p.n_eg + 1.0,
            p.n_eg + 1.0,
            p.n_vib,
            p.n_eg,
            p.n_eg,
        ]));
        (f, c)
    } else {
        let f = DMatrix::from_diagonal(&DVector::from_iterator(
            3,
            amps.iter().map(|&a| C64::from(a)),
        ));
        let c = DMatrix::from_diagonal(&DVector::from_column_slice(&[
            p.n_vib + 1.0,
            p.n_eg + 1.0,
            p.n_eg + 1.0,
        ]));
        (f, c)
    }
}

/// Build the requested linear system at probe detuning `delta`.
pub fn build_drift(p: &ModelParams, delta: f64, kind: DriftKind) -> DriftSystem {
    let i = C64::i();
    match kind {
        DriftKind::MeanRed => {
            let (m, b) = mean_drift_red(p, delta);
            let (f, c) = noise_matrices(p, false);
            DriftSystem {
                kind,
                drift: m,
                drive: b,
                noise_in: f,
                noise_corr: c,
            }
        }
        DriftKind::MeanBlue => {
            let (m, b) = mean_drift_blue(p, delta);
            let (f, c) = noise_matrices(p, false);
            DriftSystem {
                kind,
                drift: m,
                drive: b,
                noise_in: f,
                noise_corr: c,
            }
        }
        DriftKind::FluctRed => {
            let (m3, _) = mean_drift_red(p, delta);
            let q = DMatrix::zeros(3, 3);
            let (f, c) = noise_matrices(p, true);
            DriftSystem {
                kind,
                drift: doubled_drift(&m3, &q),
                drive: DVector::zeros(6),
                noise_in: f,
                noise_corr: c,
            }
        }
        DriftKind::FluctBlue => {
            let p_block = DMatrix::from_diagonal(&DVector::from_column_slice(&[
                i * delta - p.kappa,
                -i * delta - p.gamma_a,
                -i * delta - p.gamma_b,
            ]));
            let q_block = DMatrix::from_row_slice(
                3,
                3,
                &[
                    C64::from(0.0),
                    C64::from(p.g_a),
                    C64::from(p.g_b),
                    C64::from(p.g_a),
                    C64::from(0.0),
                    C64::from(0.0),
                    C64::from(p.g_b),
                    C64::from(0.0),
                    C64::from(0.0),
                ],
            );
            let (f, c) = noise_matrices(p, true);
            DriftSystem {
                kind,
                drift: doubled_drift(&p_block, &q_block),
                drive: DVector::zeros(6),
                noise_in: f,
                noise_corr: c,
            }
        }
    }
}

/// Eigenvalue-based stability verdict for a drift system.
#[derive(Debug, Clone)]
pub struct StabilityReport {
    pub eigenvalues: Vec<C64>,
    pub max_real_eig: f64,
    /// True iff every eigenvalue real part is below `-STABILITY_TOL`.
    pub stable: bool,
}

/// Eigenvalues of the drift matrix and the resulting stability flag.
pub fn stability(d: &DriftSystem) -> StabilityReport {
    let eig = d
        .drift
        .clone()
        .eigenvalues()
        .expect("Schur iteration failed on drift matrix");
    let eigenvalues: Vec<C64> = eig.iter().copied().collect();
    let max_real_eig = eigenvalues
        .iter()
        .map(|l| l.re)
        .fold(f64::NEG_INFINITY, f64::max);
    StabilityReport {
        eigenvalues,
        max_real_eig,
        stable: max_real_eig < -STABILITY_TOL,
    }
}

/// Relative determinant threshold below which a system counts as singular.
const SINGULARITY_TOL: f64 = 1e-12;

fn solve_linear(m: &DMatrix<C64>, rhs: &DVector<C64>, what: &str) -> Result<DVector<C64>> {
    let lu = m.clone().full_piv_lu();
    // LU is backward stable, so an exactly singular system still "solves" to
    // a huge vector through a rounding-level pivot. Gate on the determinant
    // against its Hadamard bound (the product of row norms) instead.
    let hadamard: f64 = (0..m.nrows()).map(|r| m.row(r).norm()).product();
    if lu.determinant().norm() <= SINGULARITY_TOL * hadamard {
        return Err(Error::Singular(format!("{what}: matrix is singular")));
    }
    let x = lu
        .solve(rhs)
        .ok_or_else(|| Error::Singular(format!("{what}: matrix is singular")))?;
    if !x.iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
        return Err(Error::Singular(format!("{what}: solution is not finite")));
    }
    Ok(x)
}

/// Fixed point `x_s = -M^{-1} b`, mapped back onto the mode amplitudes.
///
/// Fails with a singularity error when `M` is not invertible, which for the
/// blue mean system is exactly the steady-state pole condition.
pub fn steady_state_linear(d: &DriftSystem) -> Result<SteadyState> {
    let minus_b = d.drive.map(|v| -v);
    let x = solve_linear(&d.drift, &minus_b, "steady state solve")?;
    // Mean bases are (c, A, B) for red and (c, A^dag, B^dag) for blue; the
    // doubled fluctuation bases start with (dc, dA, dB).
    let s = match d.kind {
        DriftKind::MeanRed => SteadyState {
            a_s: x[1],
            b_s: x[2],
            c_s: x[0],
            pole: false,
        },
        DriftKind::MeanBlue => SteadyState {
            a_s: x[1].conj(),
            b_s: x[2].conj(),
            c_s: x[0],
            pole: false,
        },
        DriftKind::FluctRed | DriftKind::FluctBlue => SteadyState {
            a_s: x[1],
            b_s: x[2],
            c_s: x[0],
            pole: false,
        },
    };
    Ok(s)
}

/// RK4 trajectory of `x' = M x + b`.
#[derive(Debug, Clone)]
pub struct MeanTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<DVector<C64>>,
}

impl MeanTrajectory {
    pub fn terminal(&self) -> &DVector<C64> {
        self.states.last().expect("trajectory is never empty")
    }
}

/// Default RK4 step for a parameter set: `0.01 / max(kappa, gammas, gs)`.
pub fn default_dt(p: &ModelParams) -> f64 {
    0.01 / p
        .kappa
        .max(p.gamma_a)
        .max(p.gamma_b)
        .max(p.g_a)
        .max(p.g_b)
        .max(1e-12)
}

/// Norm blow-up factor that triggers the divergence diagnosis.
const DIVERGENCE_FACTOR: f64 = 1e12;

/// Integrate `x' = M x + b` from `x0` with fixed-step RK4 until `t_end`.
///
/// Non-finite values or norm growth beyond [`DIVERGENCE_FACTOR`] times the
/// initial scale abort with a divergence diagnosis, which is the expected
/// outcome on unstable blue-case systems.
pub fn integrate_mean(
    d: &DriftSystem,
    x0: &DVector<C64>,
    t_end: f64,
    dt: f64,
) -> Result<MeanTrajectory> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidParams(format!(
            "dt must be positive, got {dt}"
        )));
    }
    if t_end <= dt || !t_end.is_finite() {
        return Err(Error::InvalidParams(format!(
            "t_end ({t_end}) must exceed dt ({dt})"
        )));
    }
    if x0.len() != d.dim() {
        return Err(Error::InvalidParams(format!(
            "initial state has dimension {}, system has {}",
            x0.len(),
            d.dim()
        )));
    }
    let n_steps = (t_end / dt).ceil() as usize;
    let m = &d.drift;
    let b = &d.drive;
    let deriv = |x: &DVector<C64>| m * x + b;
    let limit = DIVERGENCE_FACTOR * (1.0 + max_modulus(x0.iter()) + max_modulus(b.iter()));

    let mut times = Vec::with_capacity(n_steps + 1);
    let mut states = Vec::with_capacity(n_steps + 1);
    times.push(0.0);
    states.push(x0.clone());
    let mut x = x0.clone();
    for step in 1..=n_steps {
        let k1 = deriv(&x);
        let k2 = deriv(&(&x + &k1 * C64::from(0.5 * dt)));
        let k3 = deriv(&(&x + &k2 * C64::from(0.5 * dt)));
        let k4 = deriv(&(&x + &k3 * C64::from(dt)));
        x += (k1 + k2 * C64::from(2.0) + k3 * C64::from(2.0) + k4) * C64::from(dt / 6.0);
        let t = step as f64 * dt;
        let amax = max_modulus(x.iter());
        if !amax.is_finite() || amax > limit {
            return Err(Error::Diverged(format!(
                "trajectory blew up at t = {t:.6} (|x| = {amax:.3e}); the drift system is unstable"
            )));
        }
        times.push(t);
        states.push(x.clone());
    }
    Ok(MeanTrajectory { times, states })
}

/// Per-component spectra from the transfer matrix at frequency `omega`.
///
/// `T(omega) = (-i omega I - M)^{-1} F` and the returned vector is the real
/// diagonal of `T C T^dag`, ordered as the doubled basis. Normalization is
/// anchored to the decoupled Lorentzian (`S_A` peak `2 (N+1) / gamma_a`), so
/// entries compare directly against the closed forms.
pub fn spectrum_matrix(d: &DriftSystem, omega: f64) -> Result<Vec<f64>> {
    if !d.kind.is_fluct() {
        return Err(Error::InvalidParams(
            "spectrum_matrix needs a fluctuation-kind system".into(),
        ));
    }
    let n = d.dim();
    let a = DMatrix::from_diagonal_element(n, n, C64::new(0.0, -omega)) - &d.drift;
    let hadamard: f64 = (0..n).map(|r| a.row(r).norm()).product();
    let lu = a.full_piv_lu();
    if lu.determinant().norm() <= SINGULARITY_TOL * hadamard {
        return Err(Error::Singular(format!(
            "(-i omega I - M) singular at omega = {omega}"
        )));
    }
    let t = lu
        .solve(&d.noise_in)
        .ok_or_else(|| Error::Singular(format!("(-i omega I - M) singular at omega = {omega}")))?;
    let c = d.noise_corr.map(C64::from);
    let s = &t * c * t.adjoint();
    Ok((0..n).map(|j| s[(j, j)].re).collect())
}

/// Stationary covariance `V = <dx dx^dag>` from `M V + V M^dag + F C F^dag = 0`.
///
/// Solved by vectorization: `(I (x) M + conj(M) (x) I) vec(V) = -vec(Q)`.
pub fn covariance_lyapunov(d: &DriftSystem) -> Result<DMatrix<C64>> {
    if !d.kind.is_fluct() {
        return Err(Error::InvalidParams(
            "covariance_lyapunov needs a fluctuation-kind system".into(),
        ));
    }
    let report = stability(d);
    if !report.stable {
        return Err(Error::Unstable(format!(
            "no stationary covariance: max Re(eig) = {:.6e}",
            report.max_real_eig
        )));
    }
    let n = d.dim();
    let q = &d.noise_in * d.noise_corr.map(C64::from) * d.noise_in.adjoint();
    let eye = DMatrix::<C64>::identity(n, n);
    let k = eye.kronecker(&d.drift) + d.drift.conjugate().kronecker(&eye);
    let rhs = DVector::from_iterator(n * n, q.iter().map(|v| -v));
    let v = solve_linear(&k, &rhs, "Lyapunov solve")?;
    Ok(DMatrix::from_iterator(n, n, v.iter().copied()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model;
    use crate::params::ModelParams;

    fn cvec(v: &[C64]) -> DVector<C64> {
        DVector::from_column_slice(v)
    }

    #[test]
    fn mean_red_decoupled_eigenvalues() {
        let p = ModelParams::red(0.0, 0.0, 3.0, 7.0);
        let d = build_drift(&p, 2.0, DriftKind::MeanRed);
        let mut expected = [
            C64::new(-1.0, -2.0),
            C64::new(-3.0, -2.0),
            C64::new(-7.0, -2.0),
        ];
        let mut eig = stability(&d).eigenvalues;
        let key = |z: &C64| (z.re, z.im);
        eig.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
        expected.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
        for (e, x) in eig.iter().zip(expected.iter()) {
            assert!((e - x).norm() < 1e-10);
        }
    }

    #[test]
    fn doubled_drift_conjugation_symmetry() {
        let p = ModelParams::blue(2.0, 3.0, 5.0, 7.0);
        let d = build_drift(&p, 1.3, DriftKind::FluctBlue);
        for r in 0..3 {
            for c in 0..3 {
                assert_eq!(d.drift[(r + 3, c + 3)], d.drift[(r, c)].conj());
                assert_eq!(d.drift[(r + 3, c)], d.drift[(r, c + 3)].conj());
            }
        }
    }

    #[test]
    fn stability_ledger_blue() {
        let unstable = ModelParams::blue(10.0, 10.0, 5.0, 5.0);
        let report = stability(&build_drift(&unstable, 0.0, DriftKind::FluctBlue));
        assert!(!report.stable);
        assert!(report.max_real_eig > 1.0);

        let stable = ModelParams::blue(1.0, 1.0, 5.0, 5.0);
        let report = stability(&build_drift(&stable, 0.0, DriftKind::FluctBlue));
        assert!(report.stable);
    }

    #[test]
    fn zero_matrix_is_marginal() {
        let d = DriftSystem {
            kind: DriftKind::FluctRed,
            drift: DMatrix::zeros(3, 3),
            drive: DVector::zeros(3),
            noise_in: DMatrix::zeros(3, 3),
            noise_corr: DMatrix::zeros(3, 3),
        };
        let report = stability(&d);
        assert_eq!(report.max_real_eig, 0.0);
        assert!(!report.stable);
    }

    #[test]
    fn linear_solve_matches_closed_form() {
        let p = ModelParams::red(10.0, 10.0, 3.0, 3.0);
        let d = build_drift(&p, 0.0, DriftKind::MeanRed);
        let s = steady_state_linear(&d).unwrap();
        assert!((s.a_s.norm_sqr() - 0.028604862476104196).abs() < 1e-13);
        let closed = model::steady_state(&p, 0.0);
        assert!((s.a_s - closed.a_s).norm() < 1e-12);
        assert!((s.b_s - closed.b_s).norm() < 1e-12);
        assert!((s.c_s - closed.c_s).norm() < 1e-12);
    }

    #[test]
    fn zero_drive_gives_zero_state() {
        let p = ModelParams::red(3.0, 2.0, 5.0, 5.0).with_chi(0.0);
        let d = build_drift(&p, 0.7, DriftKind::MeanRed);
        let s = steady_state_linear(&d).unwrap();
        assert_eq!(s.a_s, C64::from(0.0));
        assert_eq!(s.b_s, C64::from(0.0));
        assert_eq!(s.c_s, C64::from(0.0));
    }

    #[test]
    fn blue_pole_is_singular() {
        let p = ModelParams::blue(2.0, 1.0, 5.0, 5.0);
        let d = build_drift(&p, 0.0, DriftKind::MeanBlue);
        match steady_state_linear(&d) {
            Err(Error::Singular(_)) => {}
            other => panic!("expected singularity error, got {other:?}"),
        }
    }

    #[test]
    fn rk4_fixed_point_is_constant() {
        let p = ModelParams::red(10.0, 10.0, 3.0, 3.0);
        let d = build_drift(&p, 0.4, DriftKind::MeanRed);
        let s = steady_state_linear(&d).unwrap();
        let xs = cvec(&[s.c_s, s.a_s, s.b_s]);
        let traj = integrate_mean(&d, &xs, 1.0, 1e-3).unwrap();
        assert!(max_modulus((traj.terminal() - &xs).iter()) < 1e-9);
    }

    #[test]
    fn rk4_relaxes_to_steady_state() {
        let p = ModelParams::red(10.0, 10.0, 3.0, 3.0);
        let d = build_drift(&p, 0.0, DriftKind::MeanRed);
        let s = steady_state_linear(&d).unwrap();
        let xs = cvec(&[s.c_s, s.a_s, s.b_s]);
        let traj = integrate_mean(&d, &DVector::zeros(3), 40.0, default_dt(&p)).unwrap();
        assert!(max_modulus((traj.terminal() - &xs).iter()) < 1e-6);
    }

    #[test]
    fn rk4_diagnoses_unstable_blue() {
        let p = ModelParams::blue(10.0, 10.0, 5.0, 5.0);
        let d = build_drift(&p, 0.0, DriftKind::MeanBlue);
        match integrate_mean(&d, &DVector::zeros(3), 40.0, default_dt(&p)) {
            Err(Error::Diverged(_)) => {}
            other => panic!("expected divergence diagnosis, got {other:?}"),
        }
    }

    #[test]
    fn spectrum_anchor_decoupled() {
        let p = ModelParams::red(0.0, 0.0, 5.0, 9.0);
        let delta = 1.2;
        let d = build_drift(&p, delta, DriftKind::FluctRed);
        let s = spectrum_matrix(&d, delta).unwrap();
        assert!((s[1] - 2.0 / 5.0).abs() < 1e-12);
        assert!((s[2] - 2.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn spectrum_matrix_rejects_mean_kind() {
        let p = ModelParams::red(1.0, 1.0, 5.0, 5.0);
        let d = build_drift(&p, 0.0, DriftKind::MeanRed);
        assert!(spectrum_matrix(&d, 0.0).is_err());
    }

    #[test]
    fn vacuum_covariance() {
        let p = ModelParams::red(0.0, 0.0, 5.0, 5.0);
        let d = build_drift(&p, 0.7, DriftKind::FluctRed);
        let v = covariance_lyapunov(&d).unwrap();
        for j in 0..6 {
            let expect = if j < 3 { 1.0 } else { 0.0 };
            assert!((v[(j, j)].re - expect).abs() < 1e-12);
            assert!(v[(j, j)].im.abs() < 1e-12);
        }
    }

    #[test]
    fn covariance_is_hermitian() {
        let p = ModelParams::red(4.0, 2.0, 5.0, 3.0).with_thermal(0.3, 0.1);
        let d = build_drift(&p, 1.1, DriftKind::FluctRed);
        let v = covariance_lyapunov(&d).unwrap();
        assert!(max_modulus((&v - v.adjoint()).iter()) < 1e-12);
    }

    #[test]
    fn covariance_refuses_unstable() {
        let p = ModelParams::blue(10.0, 10.0, 5.0, 5.0);
        let d = build_drift(&p, 0.0, DriftKind::FluctBlue);
        match covariance_lyapunov(&d) {
            Err(Error::Unstable(_)) => {}
            other => panic!("expected unstable error, got {other:?}"),
        }
    }
}
