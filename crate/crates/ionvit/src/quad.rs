//! Adaptive Simpson quadrature for the spectral sum rules.

const MAX_DEPTH: u32 = 48;

fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
    h / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn recurse<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
}

/// Integrate `f` over `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let m = 0.5 * (a + b);
    let fa = f(a);
    let fm = f(m);
    let fb = f(b);
    let whole = simpson(fa, fm, fb, b - a);
    recurse(f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let i = adaptive_simpson(&|x| x * x, 0.0, 1.0, 1e-12);
        assert!((i - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn wide_lorentzian() {
        // Int 2g/(x^2+g^2) dx over [-W, W] = 4 atan(W/g)
        let g = 0.05;
        let w = 500.0;
        let i = adaptive_simpson(&|x| 2.0 * g / (x * x + g * g), -w, w, 1e-12);
        assert!((i - 4.0 * (w / g).atan()).abs() < 1e-9);
    }

    #[test]
    fn narrow_feature_off_center() {
        let g = 1e-3;
        let x0 = 17.3;
        let f = |x: f64| g / ((x - x0).powi(2) + g * g);
        let i = adaptive_simpson(&f, x0 - 100.0, x0 + 100.0, 1e-13);
        assert!((i - 2.0 * (100.0 / g).atan()).abs() < 1e-7);
    }
}
