//! Conjugate-gradient descent on the row-oblique manifold
//! `{X in C^{n x p} : every row of X has unit norm}`.
//!
//! With `p = 1` this is the complex circle manifold of unit-modulus vectors. Tangent
//! vectors at `X` satisfy `Re(<v_i, x_i>) = 0` row by row; the metric is
//! `Re tr(U^H V)`. Gradients follow the `2 ∂f/∂X*` convention so that the steepest
//! descent direction in that metric is `-grad`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::C64;

/// A smooth real cost on complex matrices.
pub trait CostFunction {
    fn cost(&self, x: &DMatrix<C64>) -> f64;
    /// `2 ∂f/∂X*`.
    fn euclidean_gradient(&self, x: &DMatrix<C64>) -> DMatrix<C64>;
    /// Trial step of the first line search, used when [`CgOptions::initial_step`] is unset.
    fn initial_step(&self) -> f64 {
        1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CgOptions {
    /// Stop once the Riemannian gradient norm falls to this level.
    pub grad_tol: f64,
    pub max_iter: usize,
    /// Overrides [`CostFunction::initial_step`].
    pub initial_step: Option<f64>,
    pub contraction: f64,
    /// Armijo sufficient-decrease constant.
    pub sufficient_decrease: f64,
    pub max_backtracks: usize,
    /// Relative cost change counted as no progress.
    pub stall_tol: f64,
    /// Consecutive no-progress iterations before giving up.
    pub stall_window: usize,
}

impl Default for CgOptions {
    fn default() -> Self {
        Self {
            grad_tol: 1e-6,
            max_iter: 1000,
            initial_step: None,
            contraction: 0.5,
            sufficient_decrease: 1e-4,
            max_backtracks: 60,
            stall_tol: 1e-12,
            stall_window: 50,
        }
    }
}

/// Iterate state after an accepted step.
#[derive(Debug, Clone)]
pub struct CgState {
    /// Current point; a column vector of phases when `p = 1`.
    pub q: DMatrix<C64>,
    /// Riemannian gradient at `q`.
    pub grad: DMatrix<C64>,
    /// Search direction used for the next step.
    pub dir: DMatrix<C64>,
    /// Accepted step length of the last line search.
    pub step: f64,
    /// Polak-Ribière coefficient that produced `dir`.
    pub momentum: f64,
    pub iter: usize,
}

#[derive(Debug, Clone)]
pub struct CgOutcome {
    pub state: CgState,
    pub cost: f64,
    pub grad_norm: f64,
    /// Cost at the start and after every accepted step.
    pub trace: Vec<f64>,
    pub converged: bool,
    pub stagnated: bool,
}

impl CgOutcome {
    pub fn point(&self) -> &DMatrix<C64> {
        &self.state.q
    }

    pub fn iterations(&self) -> usize {
        self.state.iter
    }
}

/// `Re(<v_i, x_i>)` for every row.
fn row_re_inner(x: &DMatrix<C64>, v: &DMatrix<C64>) -> Vec<f64> {
    x.row_iter()
        .zip(v.row_iter())
        .map(|(xr, vr)| xr.iter().zip(vr.iter()).map(|(a, b)| (b * a.conj()).re).sum())
        .collect()
}

/// Orthogonal projection of `v` onto the tangent space at `x`.
pub fn project(x: &DMatrix<C64>, v: &DMatrix<C64>) -> DMatrix<C64> {
    let mut out = v.clone();
    for (i, r) in row_re_inner(x, v).into_iter().enumerate() {
        let xr = x.row(i) * C64::from(r);
        let mut row = out.row_mut(i);
        row -= xr;
    }
    out
}

/// Row normalization of `x + v`. A row that collapses to zero keeps its value from `x`.
pub fn retract(x: &DMatrix<C64>, v: &DMatrix<C64>) -> DMatrix<C64> {
    let mut y = x + v;
    for i in 0..y.nrows() {
        let n = y.row(i).norm();
        if n > 0.0 && n.is_finite() {
            let mut row = y.row_mut(i);
            row /= C64::from(n);
        } else {
            y.set_row(i, &x.row(i));
        }
    }
    y
}

/// Moves a tangent vector to the tangent space at `y` by projection.
pub fn transport(y: &DMatrix<C64>, v: &DMatrix<C64>) -> DMatrix<C64> {
    project(y, v)
}

/// `max_i |Re(<grad_i, x_i>)|`.
pub fn tangency_error(x: &DMatrix<C64>, v: &DMatrix<C64>) -> f64 {
    row_re_inner(x, v).into_iter().map(f64::abs).fold(0.0, f64::max)
}

fn inner(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x.conj() * y).re).sum()
}

fn riemannian_gradient<F: CostFunction + ?Sized>(f: &F, x: &DMatrix<C64>) -> Result<DMatrix<C64>> {
    let g = f.euclidean_gradient(x);
    if g.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Numerical("non-finite gradient".into()));
    }
    Ok(project(x, &g))
}

/// Minimizes `f` from `x0`, which must already have unit-norm rows.
///
/// Armijo backtracking along a Polak-Ribière (clamped at 0) direction. The first
/// trial step is the configured initial step; later searches start from the last
/// accepted step, doubled when it needed no backtracking. A direction that fails to
/// descend is reset to steepest descent. Every accepted step lowers
/// the cost, so the returned point is also the best one visited.
pub fn minimize<F: CostFunction + ?Sized>(f: &F, x0: DMatrix<C64>, opts: &CgOptions) -> Result<CgOutcome> {
    let step0 = opts.initial_step.unwrap_or_else(|| f.initial_step());
    if !(step0 > 0.0 && step0.is_finite()) {
        return Err(Error::Numerical(format!("initial step {step0} must be positive")));
    }
    let mut x = x0;
    let mut fx = f.cost(&x);
    if !fx.is_finite() {
        return Err(Error::Numerical("non-finite cost at the starting point".into()));
    }
    let mut grad = riemannian_gradient(f, &x)?;
    let mut dir = -&grad;
    let mut state_step = 0.0;
    let mut momentum = 0.0;
    let mut trace = vec![fx];
    let mut stall = 0;
    let mut trial = step0;
    let mut iter = 0;
    let mut converged = false;
    let mut stagnated = false;

    loop {
        let gnorm2 = inner(&grad, &grad);
        if gnorm2.sqrt() <= opts.grad_tol {
            converged = true;
            break;
        }
        if iter >= opts.max_iter {
            break;
        }
        let mut slope = inner(&grad, &dir);
        if slope >= 0.0 {
            dir = -&grad;
            momentum = 0.0;
            slope = -gnorm2;
        }

        let mut step = trial;
        let mut accepted = None;
        for k in 0..=opts.max_backtracks {
            let y = retract(&x, &(&dir * C64::from(step)));
            let fy = f.cost(&y);
            if fy.is_finite() && fy <= fx + opts.sufficient_decrease * step * slope {
                // grow the next trial step after a first-try acceptance
                trial = if k == 0 { 2.0 * step } else { step };
                accepted = Some((y, fy));
                break;
            }
            step *= opts.contraction;
        }
        let Some((y, fy)) = accepted else {
            if momentum != 0.0 {
                // retry once along steepest descent
                dir = -&grad;
                momentum = 0.0;
                continue;
            }
            stagnated = true;
            break;
        };

        let rel = (fx - fy).abs() / fx.abs().max(f64::MIN_POSITIVE);
        stall = if rel < opts.stall_tol { stall + 1 } else { 0 };

        let g_new = riemannian_gradient(f, &y)?;
        let g_old = transport(&y, &grad);
        let d_old = transport(&y, &dir);
        momentum = (inner(&g_new, &(&g_new - &g_old)) / gnorm2).max(0.0);
        dir = -&g_new + d_old * C64::from(momentum);
        x = y;
        fx = fy;
        grad = g_new;
        state_step = step;
        iter += 1;
        trace.push(fx);
        if stall >= opts.stall_window {
            stagnated = true;
            break;
        }
    }

    let grad_norm = inner(&grad, &grad).sqrt();
    Ok(CgOutcome {
        state: CgState { q: x, grad, dir, step: state_step, momentum, iter },
        cost: fx,
        grad_norm,
        trace,
        converged,
        stagnated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::sample_rayleigh;
    use proptest::prelude::*;

    /// `-x^H A x` on the circle: minimized by aligning with the top of `A`.
    struct Quad(DMatrix<C64>);

    impl CostFunction for Quad {
        fn cost(&self, x: &DMatrix<C64>) -> f64 {
            -(x.adjoint() * &self.0 * x).trace().re
        }
        fn euclidean_gradient(&self, x: &DMatrix<C64>) -> DMatrix<C64> {
            &self.0 * x * C64::from(-2.0)
        }
        fn initial_step(&self) -> f64 {
            1.0 / (2.0 * self.0.norm() + 1.0)
        }
    }

    fn on_manifold(n: usize, p: usize, seed: u64) -> DMatrix<C64> {
        let z = sample_rayleigh(n, p, seed, 9).unwrap();
        retract(&z, &DMatrix::zeros(n, p))
    }

    proptest! {
        #[test]
        fn projection_is_tangent(seed in 0u64..500, p in 1usize..4) {
            let x = on_manifold(6, p, seed);
            let v = sample_rayleigh(6, p, seed, 10).unwrap();
            prop_assert!(tangency_error(&x, &project(&x, &v)) <= 1e-12);
        }

        #[test]
        fn retraction_lands_on_manifold(seed in 0u64..500, scale in 0.0f64..10.0) {
            let x = on_manifold(5, 2, seed);
            let v = sample_rayleigh(5, 2, seed, 11).unwrap() * C64::from(scale);
            let y = retract(&x, &project(&x, &v));
            for r in y.row_iter() {
                prop_assert!((r.norm() - 1.0).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn retraction_fixes_manifold_points() {
        let x = on_manifold(7, 1, 3);
        let y = retract(&x, &DMatrix::zeros(7, 1));
        assert!((y - x).norm() <= 1e-15);
    }

    #[test]
    fn descends_and_converges() {
        let z = sample_rayleigh(6, 6, 4, 0).unwrap();
        let a = z.adjoint() * z;
        let f = Quad(a);
        let x0 = on_manifold(6, 1, 5);
        let out = minimize(&f, x0.clone(), &CgOptions::default()).unwrap();
        assert!(out.converged);
        assert!(out.trace.windows(2).all(|w| w[1] <= w[0]));
        assert!(out.cost <= f.cost(&x0));
        assert!(tangency_error(out.point(), &out.state.grad) <= 1e-10);
    }

    #[test]
    fn zero_cost_returns_start() {
        let f = Quad(DMatrix::zeros(4, 4));
        let x0 = on_manifold(4, 1, 1);
        let out = minimize(&f, x0.clone(), &CgOptions::default()).unwrap();
        assert_eq!(out.point(), &x0);
        assert_eq!(out.iterations(), 0);
        assert!(out.converged);
    }

    #[test]
    fn oblique_rank_two_reaches_eigen_bound() {
        // With p = n the oblique problem max tr(V^H A V) is the SDP over the elliptope;
        // for diagonal A its value is tr(A).
        let a = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![C64::from(3.0), C64::from(1.0)]));
        let out = minimize(&Quad(a), on_manifold(2, 2, 8), &CgOptions::default()).unwrap();
        assert!((out.cost + 4.0).abs() < 1e-9);
    }
}
