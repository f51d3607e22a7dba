//! Few-excitation level structure by exact diagonalization.
//!
//! The interaction Hamiltonians are restricted to truncated Fock bases of the
//! three modes (collective A, collective B, vibration). The red-case
//! interaction conserves total excitation number, so a cap-1 basis already
//! contains the four states relevant for the transparency interference; the
//! blue-case parametric terms create pairs, so the default cap is 2.

use std::collections::HashMap;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::params::{ModelParams, SidebandCase};

/// Occupation numbers `|m_a, m_b, n>` of collective mode A, collective mode
/// B, and the vibrational mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FockState {
    pub m_a: u32,
    pub m_b: u32,
    pub n: u32,
}

impl FockState {
    pub fn new(m_a: u32, m_b: u32, n: u32) -> Self {
        FockState { m_a, m_b, n }
    }

    pub fn total(&self) -> u32 {
        self.m_a + self.m_b + self.n
    }
}

impl std::fmt::Display for FockState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "|{} {} {}>", self.m_a, self.m_b, self.n)
    }
}

/// Default excitation cap: the smallest cap whose basis spans the states of
/// the level-diagram analysis (1 for red, 2 for blue).
pub fn default_cap(case: SidebandCase) -> u32 {
    match case {
        SidebandCase::Red => 1,
        SidebandCase::Blue => 2,
    }
}

/// All Fock states with total excitation `<= cap`, in ascending
/// lexicographic order of `(m_a, m_b, n)`.
pub fn build_basis(cap: u32) -> Vec<FockState> {
    let mut basis = Vec::new();
    for m_a in 0..=cap {
        for m_b in 0..=(cap - m_a) {
            for n in 0..=(cap - m_a - m_b) {
                basis.push(FockState::new(m_a, m_b, n));
            }
        }
    }
    basis.sort();
    basis
}

/// An interaction Hamiltonian projected onto a truncated basis.
#[derive(Debug, Clone)]
pub struct TruncatedHamiltonian {
    pub basis: Vec<FockState>,
    pub matrix: DMatrix<C64>,
}

impl TruncatedHamiltonian {
    /// Largest modulus of `H - H^dag`; zero by construction.
    pub fn hermiticity_defect(&self) -> f64 {
        crate::max_modulus((&self.matrix - self.matrix.adjoint()).iter())
    }

    /// Eigenvalues in ascending order.
    pub fn spectrum(&self) -> Vec<f64> {
        let eig = nalgebra::SymmetricEigen::new(self.matrix.clone());
        let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        vals
    }
}

// One ladder term: occupation deltas plus the sqrt factor of the matrix
// element, evaluated on a source state. Returns None when the term
// annihilates the state or leads outside the basis.
fn apply_term(s: FockState, da: i64, db: i64, dn: i64) -> Option<(FockState, f64)> {
    let shift = |occ: u32, d: i64| -> Option<(u32, f64)> {
        match d {
            0 => Some((occ, 1.0)),
            1 => Some((occ + 1, (occ as f64 + 1.0).sqrt())),
            -1 => {
                if occ == 0 {
                    None
                } else {
                    Some((occ - 1, (occ as f64).sqrt()))
                }
            }
            _ => unreachable!("single-quantum ladder terms only"),
        }
    };
    let (m_a, fa) = shift(s.m_a, da)?;
    let (m_b, fb) = shift(s.m_b, db)?;
    let (n, fn_) = shift(s.n, dn)?;
    Some((FockState::new(m_a, m_b, n), fa * fb * fn_))
}

/// Project the interaction Hamiltonian onto `basis`.
///
/// Red: `Delta (N_A + N_B + N_c) + i g_a (A^dag c - A c^dag) + i g_b (B^dag
/// c - B c^dag)`; blue: `Delta (N_A + N_B - N_c) + i g_a (A^dag c^dag - A c)
/// + i g_b (B^dag c^dag - B c)`; the drive `chi (A^dag + A)` is added iff
/// `include_drive`. Ladder targets outside the basis are dropped, i.e. the
/// result is the exact projection `P H P`, Hermitian by construction.
pub fn build_hamiltonian(
    p: &ModelParams,
    delta: f64,
    basis: &[FockState],
    include_drive: bool,
) -> TruncatedHamiltonian {
    let dim = basis.len();
    let index: HashMap<FockState, usize> = basis.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    let mut h = DMatrix::<C64>::zeros(dim, dim);

    // (coefficient, dA, dB, dn)
    let mut terms: Vec<(C64, i64, i64, i64)> = Vec::new();
    let i = C64::i();
    match p.case {
        SidebandCase::Red => {
            terms.push((i * p.g_a, 1, 0, -1)); // A^dag c
            terms.push((-i * p.g_a, -1, 0, 1)); // -A c^dag
            terms.push((i * p.g_b, 0, 1, -1)); // B^dag c
            terms.push((-i * p.g_b, 0, -1, 1)); // -B c^dag
        }
        SidebandCase::Blue => {
            terms.push((i * p.g_a, 1, 0, 1)); // A^dag c^dag
            terms.push((-i * p.g_a, -1, 0, -1)); // -A c
            terms.push((i * p.g_b, 0, 1, 1)); // B^dag c^dag
            terms.push((-i * p.g_b, 0, -1, -1)); // -B c
        }
    }
    if include_drive {
        terms.push((C64::from(p.chi), 1, 0, 0));
        terms.push((C64::from(p.chi), -1, 0, 0));
    }

    for (col, s) in basis.iter().enumerate() {
        let n_sign = match p.case {
            SidebandCase::Red => 1.0,
            SidebandCase::Blue => -1.0,
        };
        h[(col, col)] += C64::from(delta * (s.m_a as f64 + s.m_b as f64 + n_sign * s.n as f64));
        for &(coeff, da, db, dn) in &terms {
            if let Some((target, factor)) = apply_term(*s, da, db, dn) {
                if let Some(&row) = index.get(&target) {
                    h[(row, col)] += coeff * factor;
                }
            }
        }
    }

    TruncatedHamiltonian {
        basis: basis.to_vec(),
        matrix: h,
    }
}

/// The dressed pair of the vibration-coupled two-dimensional subspace.
#[derive(Debug, Clone)]
pub struct DressedPair {
    /// The two subspace basis states, in the order the columns of `states`
    /// refer to.
    pub subspace: [FockState; 2],
    /// Eigenvalues in ascending order.
    pub energies: [f64; 2],
    /// Orthonormal eigenvectors (components on `subspace`), global phase
    /// fixed by making the first nonzero component real positive.
    pub states: [[C64; 2]; 2],
}

fn phase_fixed(v: [C64; 2]) -> [C64; 2] {
    let lead = if v[0].norm() > 1e-14 { v[0] } else { v[1] };
    let phase = lead / lead.norm();
    [v[0] / phase, v[1] / phase]
}

/// Diagonalize the coupled two-level subspace.
///
/// Requires `g_a = 0`, which decouples the driven ensemble and isolates the
/// B-vibration pair: `{|010>, |001>}` for red (eigenvalues `delta +- g_b`),
/// `{|000>, |011>}` for blue (eigenvalues `+- g_b`, the parametric pair).
/// For `g_b = 0` the degenerate basis states are returned unchanged.
pub fn dressed_pair(p: &ModelParams, delta: f64) -> Result<DressedPair> {
    if p.g_a != 0.0 {
        return Err(Error::InvalidParams(format!(
            "dressed pair needs g_a = 0 to isolate the B-vibration subspace (got g_a = {})",
            p.g_a
        )));
    }
    let subspace = match p.case {
        SidebandCase::Red => [FockState::new(0, 1, 0), FockState::new(0, 0, 1)],
        SidebandCase::Blue => [FockState::new(0, 0, 0), FockState::new(0, 1, 1)],
    };
    let h = build_hamiltonian(p, delta, &subspace, false);
    let (a, b) = (h.matrix[(0, 0)].re, h.matrix[(1, 1)].re);
    let q = h.matrix[(0, 1)];

    if q.norm() == 0.0 {
        return Ok(DressedPair {
            subspace,
            energies: if a <= b { [a, b] } else { [b, a] },
            states: [
                [C64::from(1.0), C64::from(0.0)],
                [C64::from(0.0), C64::from(1.0)],
            ],
        });
    }

    let mid = 0.5 * (a + b);
    let disc = (0.25 * (a - b) * (a - b) + q.norm_sqr()).sqrt();
    let (lo, hi) = (mid - disc, mid + disc);
    // (a - lambda) v0 + q v1 = 0  =>  v = (q, lambda - a)
    let mut states = [[C64::from(0.0); 2]; 2];
    for (k, lambda) in [lo, hi].into_iter().enumerate() {
        let raw = [q, C64::from(lambda - a)];
        let norm = (raw[0].norm_sqr() + raw[1].norm_sqr()).sqrt();
        states[k] = phase_fixed([raw[0] / norm, raw[1] / norm]);
    }
    Ok(DressedPair {
        subspace,
        energies: [lo, hi],
        states,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::ModelParams;
    use proptest::prelude::*;

    #[test]
    fn red_cap1_basis_is_the_four_states() {
        let basis = build_basis(1);
        assert_eq!(
            basis,
            vec![
                FockState::new(0, 0, 0),
                FockState::new(0, 0, 1),
                FockState::new(0, 1, 0),
                FockState::new(1, 0, 0),
            ]
        );
        assert_eq!(default_cap(SidebandCase::Red), 1);
    }

    #[test]
    fn cap_zero_is_vacuum_only() {
        assert_eq!(build_basis(0), vec![FockState::new(0, 0, 0)]);
    }

    #[test]
    fn blue_cap2_contains_pair_states() {
        let basis = build_basis(default_cap(SidebandCase::Blue));
        assert!(basis.contains(&FockState::new(0, 1, 1)));
        assert!(basis.contains(&FockState::new(1, 0, 1)));
        assert_eq!(basis.len(), 10);
    }

    #[test]
    fn uncoupled_hamiltonian_is_diagonal() {
        let delta = 1.7;
        for (case, sign) in [(SidebandCase::Red, 1.0), (SidebandCase::Blue, -1.0)] {
            let p = ModelParams::new(case, 0.0, 0.0, 5.0, 5.0).with_chi(0.0);
            let basis = build_basis(2);
            let h = build_hamiltonian(&p, delta, &basis, false);
            for (j, s) in basis.iter().enumerate() {
                for k in 0..basis.len() {
                    if j == k {
                        let expect = delta * (s.m_a as f64 + s.m_b as f64 + sign * s.n as f64);
                        assert!((h.matrix[(j, j)].re - expect).abs() < 1e-14);
                    } else {
                        assert_eq!(h.matrix[(j, k)], C64::from(0.0));
                    }
                }
            }
        }
    }

    #[test]
    fn red_coupled_block_matches_hand_matrix() {
        // subspace {|010>, |001>}: [[Delta, i g_b], [-i g_b, Delta]]
        let p = ModelParams::red(0.0, 4.0, 5.0, 5.0);
        let delta = 2.0;
        let sub = [FockState::new(0, 1, 0), FockState::new(0, 0, 1)];
        let h = build_hamiltonian(&p, delta, &sub, false);
        assert!((h.matrix[(0, 0)] - C64::from(delta)).norm() < 1e-15);
        assert!((h.matrix[(1, 1)] - C64::from(delta)).norm() < 1e-15);
        assert!((h.matrix[(0, 1)] - C64::new(0.0, 4.0)).norm() < 1e-15);
        assert!((h.matrix[(1, 0)] - C64::new(0.0, -4.0)).norm() < 1e-15);
    }

    #[test]
    fn dressed_pair_splitting() {
        let p = ModelParams::red(0.0, 10.0, 5.0, 5.0);
        let pair = dressed_pair(&p, 0.0).unwrap();
        assert!((pair.energies[0] + 10.0).abs() < 1e-12);
        assert!((pair.energies[1] - 10.0).abs() < 1e-12);
        // overlap of the +g eigenvector with (|010> - i|001>)/sqrt(2)
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        let target_plus = [C64::from(inv_sqrt2), C64::new(0.0, -inv_sqrt2)];
        let target_minus = [C64::from(inv_sqrt2), C64::new(0.0, inv_sqrt2)];
        let overlap = |u: &[C64; 2], v: &[C64; 2]| (u[0].conj() * v[0] + u[1].conj() * v[1]).norm();
        assert!((overlap(&target_plus, &pair.states[1]) - 1.0).abs() < 1e-12);
        assert!((overlap(&target_minus, &pair.states[0]) - 1.0).abs() < 1e-12);
        // phase convention: leading component real positive
        for v in &pair.states {
            assert!(v[0].im.abs() < 1e-14 && v[0].re > 0.0);
        }
    }

    #[test]
    fn dressed_pair_degenerate_without_coupling() {
        let p = ModelParams::red(0.0, 0.0, 5.0, 5.0);
        let pair = dressed_pair(&p, 3.0).unwrap();
        assert_eq!(pair.energies, [3.0, 3.0]);
        assert_eq!(pair.states[0], [C64::from(1.0), C64::from(0.0)]);
    }

    #[test]
    fn dressed_pair_blue_parametric() {
        let p = ModelParams::blue(0.0, 6.0, 5.0, 5.0);
        let pair = dressed_pair(&p, 0.8).unwrap();
        // diagonal energies vanish for {|000>, |011>} (m_b - n = 0)
        assert!((pair.energies[0] + 6.0).abs() < 1e-12);
        assert!((pair.energies[1] - 6.0).abs() < 1e-12);
    }

    #[test]
    fn dressed_pair_requires_decoupled_drive_mode() {
        let p = ModelParams::red(1.0, 10.0, 5.0, 5.0);
        assert!(dressed_pair(&p, 0.0).is_err());
    }

    #[test]
    fn spectrum_invariant_under_basis_reordering() {
        let p = ModelParams::blue(3.0, 2.0, 5.0, 5.0);
        let basis = build_basis(2);
        let mut reversed = basis.clone();
        reversed.reverse();
        let s1 = build_hamiltonian(&p, 0.9, &basis, true).spectrum();
        let s2 = build_hamiltonian(&p, 0.9, &reversed, true).spectrum();
        for (a, b) in s1.iter().zip(s2.iter()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn hamiltonians_are_hermitian(
            g_a in 0.0..20.0f64,
            g_b in 0.0..20.0f64,
            chi in 0.0..10.0f64,
            delta in -10.0..10.0f64,
            cap in 1u32..4,
            drive in proptest::bool::ANY,
        ) {
            for case in [SidebandCase::Red, SidebandCase::Blue] {
                let p = ModelParams::new(case, g_a, g_b, 5.0, 5.0).with_chi(chi);
                let h = build_hamiltonian(&p, delta, &build_basis(cap), drive);
                prop_assert!(h.hermiticity_defect() <= 1e-14);
            }
        }
    }
}
