//! Closed-form steady states of the three-mode system.
//!
//! The quantum Langevin equations for the coupled modes (vibration `c`,
//! collective modes `A` and `B`) admit closed-form mean-field fixed points.
//! In the red-sideband case the beam-splitter coupling dresses the vibration
//! with an effective heating rate `kappa_eff >= kappa` and a pulled detuning
//! `delta_eff`; in the blue-sideband case the parametric coupling produces
//! the primed counterparts `kappa'_eff = 2 kappa - kappa_eff` and
//! `delta'_eff = 2 delta - delta_eff`, and `kappa'_eff` can go negative, so
//! the fixed point may be a formal one for an unstable system. Stability is
//! the oracle module's business; here every value is evaluated as written.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::params::{ModelParams, SidebandCase};

/// Steady-state denominators smaller than this fraction of `kappa` are
/// flagged as poles instead of silently returning huge amplitudes.
pub const POLE_THRESHOLD: f64 = 1e-8;

/// Derived per-detuning quantities entering the steady-state expressions.
///
/// For the blue case the fields hold the primed quantities (`kappa'_eff`,
/// `delta'_eff`, `F'_A`); the `case` tag on the originating parameters says
/// which reading applies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveQuantities {
    /// `f_a = g_a / (delta - i gamma_a)`.
    pub f_a: C64,
    /// `f_b = g_b / (delta - i gamma_b)`.
    pub f_b: C64,
    /// Modified drive-coupling factor of the driven ensemble (`F_A` / `F'_A`).
    pub coupling_factor: C64,
    /// Effective detuning of the dressed vibration (`delta_eff` / `delta'_eff`).
    pub delta_eff: f64,
    /// Effective heating rate of the dressed vibration (`kappa_eff` / `kappa'_eff`).
    pub kappa_eff: f64,
}

/// Mean amplitudes of the three bosonic modes at the fixed point.
///
/// All three components are proportional to `chi`. `pole` marks blue-case
/// parameter points where the steady-state denominator collapses below
/// [`POLE_THRESHOLD`] * kappa and the amplitudes are not meaningful.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyState {
    pub a_s: C64,
    pub b_s: C64,
    pub c_s: C64,
    pub pole: bool,
}

fn lorentzian_weights(p: &ModelParams, delta: f64) -> (f64, f64) {
    (
        p.g_a * p.g_a / (delta * delta + p.gamma_a * p.gamma_a),
        p.g_b * p.g_b / (delta * delta + p.gamma_b * p.gamma_b),
    )
}

/// Effective quantities at probe detuning `delta`.
///
/// Red case:
/// `kappa_eff = kappa + g_a^2 gamma_a/(delta^2+gamma_a^2) + g_b^2 gamma_b/(delta^2+gamma_b^2)`,
/// `delta_eff = delta (1 - g_a^2/(delta^2+gamma_a^2) - g_b^2/(delta^2+gamma_b^2))`,
/// `F_A = 1 + g_a f_a / (delta_eff - i kappa_eff)`.
/// Blue case: primed versions via `2 kappa - kappa_eff`, `2 delta - delta_eff`
/// and a minus sign in `F'_A`.
pub fn effective_quantities(p: &ModelParams, delta: f64) -> EffectiveQuantities {
    let (la, lb) = lorentzian_weights(p, delta);
    let kappa_eff_red = p.kappa + la * p.gamma_a + lb * p.gamma_b;
    let delta_eff_red = delta * (1.0 - la - lb);
    let f_a = C64::new(p.g_a, 0.0) / C64::new(delta, -p.gamma_a);
    let f_b = C64::new(p.g_b, 0.0) / C64::new(delta, -p.gamma_b);
    match p.case {
        SidebandCase::Red => {
            let denom = C64::new(delta_eff_red, -kappa_eff_red);
            EffectiveQuantities {
                f_a,
                f_b,
                coupling_factor: 1.0 + p.g_a * f_a / denom,
                delta_eff: delta_eff_red,
                kappa_eff: kappa_eff_red,
            }
        }
        SidebandCase::Blue => {
            let kappa_eff = 2.0 * p.kappa - kappa_eff_red;
            let delta_eff = 2.0 * delta - delta_eff_red;
            let denom = C64::new(delta_eff, -kappa_eff);
            EffectiveQuantities {
                f_a,
                f_b,
                coupling_factor: 1.0 - p.g_a * f_a / denom,
                delta_eff,
                kappa_eff,
            }
        }
    }
}

/// Closed-form steady state of the three modes at probe detuning `delta`.
pub fn steady_state(p: &ModelParams, delta: f64) -> SteadyState {
    let eq = effective_quantities(p, delta);
    let denom = C64::new(eq.delta_eff, -eq.kappa_eff);
    let pole = denom.norm() < POLE_THRESHOLD * p.kappa;
    let bare_a = C64::new(delta, -p.gamma_a);
    match p.case {
        SidebandCase::Red => SteadyState {
            a_s: -p.chi * eq.coupling_factor / bare_a,
            b_s: -p.chi * eq.f_a * eq.f_b / denom,
            c_s: C64::new(0.0, -p.chi) * eq.f_a / denom,
            pole,
        },
        SidebandCase::Blue => SteadyState {
            a_s: -p.chi * eq.coupling_factor / bare_a,
            b_s: p.chi * eq.f_a * eq.f_b / denom,
            c_s: C64::new(0.0, -p.chi) * eq.f_a.conj() / denom.conj(),
            pole,
        },
    }
}

/// Response intensities `(|A_s/chi|^2, |B_s/chi|^2)` of the two ensembles.
///
/// The steady state is linear in `chi`, so the normalized intensities are
/// independent of the drive strength.
pub fn response_intensity(s: &SteadyState, chi: f64) -> (f64, f64) {
    debug_assert!(chi > 0.0);
    ((s.a_s / chi).norm_sqr(), (s.b_s / chi).norm_sqr())
}

/// Number of scan points used by the pole search.
const POLE_SCAN_POINTS: usize = 4001;
/// Bisection refinement limit for pole locations.
const POLE_BISECT_ITERS: usize = 200;

fn kappa_eff_blue(p: &ModelParams, delta: f64) -> f64 {
    let (la, lb) = lorentzian_weights(p, delta);
    p.kappa - la * p.gamma_a - lb * p.gamma_b
}

fn delta_eff_blue(p: &ModelParams, delta: f64) -> f64 {
    let (la, lb) = lorentzian_weights(p, delta);
    delta * (1.0 + la + lb)
}

/// Real detunings inside `window` where the blue-case steady state diverges,
/// i.e. where `delta'_eff` and `kappa'_eff` vanish simultaneously.
///
/// Roots of `kappa'_eff` are located by sign-scan plus bisection over the
/// window and kept only when `delta'_eff` also vanishes there. The origin is
/// probed explicitly because `kappa'_eff` can touch zero at `delta = 0`
/// without a sign change.
pub fn blue_poles(p: &ModelParams, window: (f64, f64)) -> Result<Vec<f64>> {
    if p.case != SidebandCase::Blue {
        return Err(Error::InvalidParams(
            "pole search is defined for the blue-sideband case only".into(),
        ));
    }
    p.validate()?;
    let (lo, hi) = window;
    if !(lo < hi && lo.is_finite() && hi.is_finite()) {
        return Err(Error::InvalidGrid(format!(
            "pole window must satisfy lo < hi, got ({lo}, {hi})"
        )));
    }

    let tol = POLE_THRESHOLD * p.kappa;
    let mut roots: Vec<f64> = Vec::new();

    let step = (hi - lo) / (POLE_SCAN_POINTS - 1) as f64;
    let mut prev_x = lo;
    let mut prev_f = kappa_eff_blue(p, prev_x);
    for i in 1..POLE_SCAN_POINTS {
        let x = lo + step * i as f64;
        let f = kappa_eff_blue(p, x);
        if prev_f == 0.0 {
            roots.push(prev_x);
        } else if prev_f * f < 0.0 {
            let (mut a, mut b) = (prev_x, x);
            let mut fa = prev_f;
            for _ in 0..POLE_BISECT_ITERS {
                let m = 0.5 * (a + b);
                let fm = kappa_eff_blue(p, m);
                if fm == 0.0 {
                    a = m;
                    b = m;
                    break;
                }
                if fa * fm < 0.0 {
                    b = m;
                } else {
                    a = m;
                    fa = fm;
                }
            }
            roots.push(0.5 * (a + b));
        }
        prev_x = x;
        prev_f = f;
    }
    if prev_f == 0.0 {
        roots.push(prev_x);
    }
    // kappa'_eff is even in delta with its minimum at the origin, so it can
    // reach zero there tangentially, which a sign scan cannot see.
    if lo <= 0.0 && 0.0 <= hi && kappa_eff_blue(p, 0.0).abs() <= tol {
        roots.push(0.0);
    }

    let mut poles: Vec<f64> = roots
        .into_iter()
        .filter(|&d| delta_eff_blue(p, d).abs() <= tol)
        .collect();
    poles.sort_by(|a, b| a.partial_cmp(b).unwrap());
    poles.dedup_by(|a, b| (*a - *b).abs() <= tol.max(1e-12 * (hi - lo)));
    Ok(poles)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::ModelParams;
    use proptest::prelude::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
    }

    #[test]
    fn kappa_eff_at_zero_detuning() {
        // kappa_eff(0) = 1 + 100/3 + 100/3 = 203/3 and delta_eff(0) = 0
        let p = ModelParams::red(10.0, 10.0, 3.0, 3.0);
        let eq = effective_quantities(&p, 0.0);
        assert!((eq.kappa_eff - 203.0 / 3.0).abs() < 1e-12);
        assert_eq!(eq.delta_eff, 0.0);
    }

    #[test]
    fn decoupled_limit_reduces_to_bare_quantities() {
        for case in [SidebandCase::Red, SidebandCase::Blue] {
            let p = ModelParams::new(case, 0.0, 0.0, 3.0, 7.0);
            let eq = effective_quantities(&p, 2.5);
            assert_eq!(eq.f_a, C64::new(0.0, 0.0));
            assert_eq!(eq.f_b, C64::new(0.0, 0.0));
            assert_eq!(eq.coupling_factor, C64::new(1.0, 0.0));
            assert_eq!(eq.kappa_eff, p.kappa);
            assert_eq!(eq.delta_eff, 2.5);
        }
    }

    #[test]
    fn coupling_factor_strong_coupling_center() {
        // F_A(0) = 1 - g_a^2/(gamma kappa_eff(0)) = 103/203 for g=10, gamma=3
        let p = ModelParams::red(10.0, 10.0, 3.0, 3.0);
        let eq = effective_quantities(&p, 0.0);
        assert!((eq.coupling_factor.re - 103.0 / 203.0).abs() < 1e-12);
        assert!(eq.coupling_factor.im.abs() < 1e-12);
    }

    #[test]
    fn decoupled_steady_state_is_bare_lorentzian() {
        for case in [SidebandCase::Red, SidebandCase::Blue] {
            let p = ModelParams::new(case, 0.0, 0.0, 5.0, 5.0);
            for delta in [-3.0, 0.0, 1.7] {
                let s = steady_state(&p, delta);
                let expected = -C64::new(1.0, 0.0) / C64::new(delta, -5.0);
                assert!((s.a_s - expected).norm() < 1e-15);
                assert_eq!(s.b_s, C64::new(0.0, 0.0));
                assert_eq!(s.c_s, C64::new(0.0, 0.0));
                assert!(!s.pole);
            }
        }
    }

    #[test]
    fn strong_coupling_center_response() {
        // |A_s(0)|^2 = (103/203)^2 / 9, frozen from the linear-solve oracle
        let p = ModelParams::red(10.0, 10.0, 3.0, 3.0);
        let s = steady_state(&p, 0.0);
        assert!((s.a_s.norm_sqr() - 0.028604862476104196).abs() < 1e-15);
    }

    #[test]
    fn response_intensity_examples() {
        let p = ModelParams::red(0.0, 0.0, 5.0, 5.0);
        let s = steady_state(&p, 0.0);
        let (ia, ib) = response_intensity(&s, p.chi);
        assert!((ia - 0.04).abs() < 1e-15);
        assert_eq!(ib, 0.0);
    }

    #[test]
    fn response_intensity_is_chi_independent() {
        let p1 = ModelParams::red(10.0, 10.0, 3.0, 3.0);
        let p2 = p1.with_chi(2.0);
        let r1 = response_intensity(&steady_state(&p1, 0.4), p1.chi);
        let r2 = response_intensity(&steady_state(&p2, 0.4), p2.chi);
        assert!(close(r1.0, r2.0, 1e-14));
        assert!(close(r1.1, r2.1, 1e-14));
    }

    #[test]
    fn kappa_is_a_free_unit_scale() {
        // rescaling every rate, chi, and delta by the same factor leaves the
        // steady state unchanged, so kappa = 1 is purely a unit convention
        let p1 = ModelParams::red(10.0, 4.0, 3.0, 7.0);
        let lambda = 3.0;
        let p2 = ModelParams {
            g_a: lambda * p1.g_a,
            g_b: lambda * p1.g_b,
            gamma_a: lambda * p1.gamma_a,
            gamma_b: lambda * p1.gamma_b,
            kappa: lambda * p1.kappa,
            chi: lambda * p1.chi,
            ..p1
        };
        for delta in [0.0, 0.8, -4.0] {
            let s1 = steady_state(&p1, delta);
            let s2 = steady_state(&p2, lambda * delta);
            assert!((s1.a_s - s2.a_s).norm() < 1e-13);
            assert!((s1.b_s - s2.b_s).norm() < 1e-13);
            assert!((s1.c_s - s2.c_s).norm() < 1e-13);
        }
    }

    #[test]
    fn blue_pole_flag_at_critical_coupling() {
        // kappa'_eff(0) = 1 - g_a^2/5 - 1/5 vanishes exactly at g_a = 2
        let p = ModelParams::blue(2.0, 1.0, 5.0, 5.0);
        let s = steady_state(&p, 0.0);
        assert!(s.pole);
        let p_off = ModelParams::blue(1.9, 1.0, 5.0, 5.0);
        assert!(!steady_state(&p_off, 0.0).pole);
    }

    #[test]
    fn blue_poles_found_by_scan() {
        let p = ModelParams::blue(2.0, 1.0, 5.0, 5.0);
        let poles = blue_poles(&p, (-20.0, 20.0)).unwrap();
        assert_eq!(poles.len(), 1);
        assert!(poles[0].abs() < 1e-9);
    }

    #[test]
    fn blue_poles_empty_without_coupling() {
        let p = ModelParams::blue(0.0, 0.0, 5.0, 5.0);
        assert!(blue_poles(&p, (-20.0, 20.0)).unwrap().is_empty());
        // kappa'_eff(0) < 0: zeros of kappa'_eff exist but delta'_eff != 0 there
        let p = ModelParams::blue(3.0, 1.0, 5.0, 5.0);
        assert!(blue_poles(&p, (-20.0, 20.0)).unwrap().is_empty());
    }

    #[test]
    fn blue_poles_rejects_red_case() {
        let p = ModelParams::red(1.0, 1.0, 5.0, 5.0);
        assert!(blue_poles(&p, (-20.0, 20.0)).is_err());
    }

    proptest! {
        #[test]
        fn effective_identities_hold_exactly(
            g_a in 0.0..30.0f64,
            g_b in 0.0..30.0f64,
            gamma in 0.1..30.0f64,
            delta in -25.0..25.0f64,
        ) {
            let red = ModelParams::red(g_a, g_b, gamma, 2.0 * gamma);
            let blue = ModelParams { case: SidebandCase::Blue, ..red };
            let er = effective_quantities(&red, delta);
            let eb = effective_quantities(&blue, delta);
            // kappa'_eff + kappa_eff = 2 kappa and delta'_eff + delta_eff = 2 delta
            prop_assert!((er.kappa_eff + eb.kappa_eff - 2.0 * red.kappa).abs() < 1e-12 * er.kappa_eff.abs().max(1.0));
            prop_assert!((er.delta_eff + eb.delta_eff - 2.0 * delta).abs() < 1e-12 * er.delta_eff.abs().max(1.0));
            // red kappa_eff >= kappa, blue kappa'_eff <= kappa
            prop_assert!(er.kappa_eff >= red.kappa);
            prop_assert!(eb.kappa_eff <= blue.kappa);
        }

        #[test]
        fn mirror_symmetry_of_intensities(
            g_a in 0.0..30.0f64,
            g_b in 0.0..30.0f64,
            gamma_a in 0.1..30.0f64,
            gamma_b in 0.1..30.0f64,
            delta in 0.0..25.0f64,
        ) {
            for case in [SidebandCase::Red, SidebandCase::Blue] {
                let p = ModelParams::new(case, g_a, g_b, gamma_a, gamma_b);
                let plus = steady_state(&p, delta);
                let minus = steady_state(&p, -delta);
                prop_assert!(close(plus.a_s.norm_sqr(), minus.a_s.norm_sqr(), 1e-12));
                prop_assert!(close(plus.b_s.norm_sqr(), minus.b_s.norm_sqr(), 1e-12));
            }
        }

        #[test]
        fn steady_state_linear_in_chi(
            g_a in 0.0..20.0f64,
            gamma in 0.5..20.0f64,
            delta in -10.0..10.0f64,
            lambda in 0.1..10.0f64,
        ) {
            for case in [SidebandCase::Red, SidebandCase::Blue] {
                let unit = ModelParams::new(case, g_a, 1.0, gamma, gamma);
                let scaled = unit.with_chi(lambda);
                let s1 = steady_state(&unit, delta);
                let s2 = steady_state(&scaled, delta);
                for (a, b) in [(s1.a_s, s2.a_s), (s1.b_s, s2.b_s), (s1.c_s, s2.c_s)] {
                    prop_assert!((a * lambda - b).norm() <= 1e-12 * b.norm().max(1e-12));
                }
            }
        }
    }
}
