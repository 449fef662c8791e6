//! Brute-force references used by the validation suite. None of these share code
//! with the solvers or kernels they check.

use nalgebra::{DMatrix, DVector};

use crate::C64;

/// `Γ(m, z) / Γ(m)` by adaptive Simpson quadrature of
/// `e^{-z} / Γ(m) ∫_0^∞ e^{-s} (z + s)^{m-1} ds`.
pub fn upper_gamma_quadrature(m: u32, z: f64) -> f64 {
    let a = (m - 1) as f64;
    // the integrand peaks at s = max(0, m - 1 - z); beyond peak + 60 + 8 sqrt(m) its mass is negligible
    let peak = (a - z).max(0.0);
    let upper = peak + 60.0 + 8.0 * (m as f64).sqrt();
    let log_scale = if a > 0.0 { a * (z + peak).ln() - peak } else { 0.0 };
    let f = |s: f64| ((a * (z + s).ln()) - s - log_scale).exp();
    let mut total = 0.0;
    // integrate piecewise so the adaptive rule sees the peak
    let knots = [0.0, peak * 0.5, peak, peak + 0.5 * (upper - peak), upper];
    for w in knots.windows(2) {
        if w[1] > w[0] {
            total += adaptive_simpson(&f, w[0], w[1], 1e-15, 50);
        }
    }
    let ln_gamma_m: f64 = (1..m).map(|k| (k as f64).ln()).sum();
    (total.ln() + log_scale - z - ln_gamma_m).exp()
}

fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let c = 0.5 * (a + b);
    let (fa, fb, fc) = (f(a), f(b), f(c));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fc + fb);
    simpson_rec(f, a, b, fa, fb, fc, whole, tol, depth)
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec(f: &impl Fn(f64) -> f64, a: f64, b: f64, fa: f64, fb: f64, fc: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let c = 0.5 * (a + b);
    let (d, e) = (0.5 * (a + c), 0.5 * (c + b));
    let (fd, fe) = (f(d), f(e));
    let left = (c - a) / 6.0 * (fa + 4.0 * fd + fc);
    let right = (b - c) / 6.0 * (fc + 4.0 * fe + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol * (left + right).abs().max(f64::MIN_POSITIVE) {
        return left + right + delta / 15.0;
    }
    simpson_rec(f, a, c, fa, fc, fd, left, tol, depth - 1) + simpson_rec(f, c, b, fc, fb, fe, right, tol, depth - 1)
}

/// Largest `||Σ q + d||^2` over the phase grid `2π k / res` on every axis, with the
/// maximizing angles. Supports 1 to 3 elements.
pub fn grid_best_phase(sigma: &DMatrix<C64>, d: &DVector<C64>, res: usize) -> (f64, Vec<f64>) {
    let n = sigma.ncols();
    assert!((1..=3).contains(&n), "grid search supports 1 to 3 elements");
    let unit: Vec<C64> =
        (0..res).map(|k| C64::from_polar(1.0, std::f64::consts::TAU * k as f64 / res as f64)).collect();
    let cols: Vec<DVector<C64>> = (0..n).map(|j| sigma.column(j).into_owned()).collect();
    let angle = |k: usize| std::f64::consts::TAU * k as f64 / res as f64;

    // ||v + s e^{jθ}||^2 = ||v||^2 + ||s||^2 + 2 Re(e^{jθ} v^H s)
    let last = &cols[n - 1];
    let last_sq = last.norm_squared();
    let best_last = |v: &DVector<C64>| -> (f64, usize) {
        let c = v.dotc(last);
        let base = v.norm_squared() + last_sq;
        let mut best = (f64::NEG_INFINITY, 0);
        for (k, u) in unit.iter().enumerate() {
            let val = base + 2.0 * (u * c).re;
            if val > best.0 {
                best = (val, k);
            }
        }
        best
    };

    match n {
        1 => {
            let (v, k) = best_last(d);
            (v, vec![angle(k)])
        }
        2 => {
            let mut best = (f64::NEG_INFINITY, vec![]);
            for (k1, u1) in unit.iter().enumerate() {
                let v = d + &cols[0] * *u1;
                let (val, k2) = best_last(&v);
                if val > best.0 {
                    best = (val, vec![angle(k1), angle(k2)]);
                }
            }
            best
        }
        _ => {
            let mut best = (f64::NEG_INFINITY, vec![]);
            for (k1, u1) in unit.iter().enumerate() {
                let v1 = d + &cols[0] * *u1;
                for (k2, u2) in unit.iter().enumerate() {
                    let v = &v1 + &cols[1] * *u2;
                    let (val, k3) = best_last(&v);
                    if val > best.0 {
                        best = (val, vec![angle(k1), angle(k2), angle(k3)]);
                    }
                }
            }
            best
        }
    }
}

/// Central differences of a real function of a complex vector, packed in the
/// `∂/∂Re + j ∂/∂Im` convention.
pub fn finite_difference_gradient(f: impl Fn(&DVector<C64>) -> f64, q: &DVector<C64>, h: f64) -> DVector<C64> {
    DVector::from_iterator(
        q.len(),
        (0..q.len()).map(|i| {
            let partial = |dir: C64| {
                let mut p = q.clone();
                let mut m = q.clone();
                p[i] += dir * h;
                m[i] -= dir * h;
                (f(&p) - f(&m)) / (2.0 * h)
            };
            C64::new(partial(C64::new(1.0, 0.0)), partial(C64::new(0.0, 1.0)))
        }),
    )
}
