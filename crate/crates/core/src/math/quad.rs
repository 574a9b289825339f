//! Adaptive Simpson quadrature.

use super::abs;

fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
    h / 6.0 * (fa + 4.0 * fm + fb)
}

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
    if depth == 0 || abs(delta) <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Integrate `f` over `[a, b]` to roughly `rel_tol` relative accuracy.
///
/// A 64-panel composite pass sets the absolute tolerance scale (a single
/// coarse Simpson step can miss a narrow hump entirely and drive the
/// tolerance to zero); each panel is then refined adaptively.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    const PANELS: usize = 64;
    let h = (b - a) / PANELS as f64;
    let mut nodes = [0.0; 2 * PANELS + 1];
    for (i, node) in nodes.iter_mut().enumerate() {
        *node = f(a + 0.5 * h * i as f64);
    }
    let mut coarse = 0.0;
    for p in 0..PANELS {
        coarse += simpson(nodes[2 * p], nodes[2 * p + 1], nodes[2 * p + 2], h);
    }
    let tol = (rel_tol * abs(coarse)).max(1e-300) / PANELS as f64;
    let mut total = 0.0;
    for p in 0..PANELS {
        let lo = a + h * p as f64;
        let (fa, fm, fb) = (nodes[2 * p], nodes[2 * p + 1], nodes[2 * p + 2]);
        let whole = simpson(fa, fm, fb, h);
        total += recurse(&f, lo, lo + h, fa, fm, fb, whole, tol, 40);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        // Simpson is exact for cubics.
        let v = integrate(|x| x * x * x - 2.0 * x + 1.0, 0.0, 2.0, 1e-12);
        assert!((v - (4.0 - 4.0 + 2.0)).abs() < 1e-12);
    }

    #[test]
    fn gaussian_mass() {
        let v = integrate(
            |x| (-0.5 * x * x).exp() / (2.0 * core::f64::consts::PI).sqrt(),
            -8.0,
            8.0,
            1e-12,
        );
        assert!((v - 1.0).abs() < 1e-10);
    }

    #[test]
    fn handles_steep_integrands() {
        // \int_0^1 1/sqrt(x+1e-4) dx
        let v = integrate(|x| 1.0 / (x + 1e-4).sqrt(), 0.0, 1.0, 1e-10);
        let exact = 2.0 * ((1.0f64 + 1e-4).sqrt() - (1e-4f64).sqrt());
        assert!((v - exact).abs() < 1e-8);
    }
}
