use nalgebra::{DMatrix, DVector};

use super::linalg::hermitian_top_eigen;
use super::riemannian::{minimize, CgOptions, CostFunction};
use super::subproblem::PhaseObjective;
use crate::error::Result;
use crate::model::{complex_normal, stream_rng, Beamformer, ChannelSet, PhaseVector, SystemConfig};
use crate::C64;

/// Lifted quadratic program `max q̂^H W q̂` over unit-modulus `q̂ = [q; l]`.
#[derive(Debug, Clone)]
pub struct SdrProblem {
    /// `[[Σ^H Σ, Σ^H d], [d^H Σ, 0]]`, `(n_s + 1)` square.
    pub w_mat: DMatrix<C64>,
    /// `Σ = G_r diag(H b)`.
    pub sigma_mat: DMatrix<C64>,
    /// `d = alpha H_b b`.
    pub direct: DVector<C64>,
    /// Constant `t` of the phase objective.
    pub t: f64,
}

impl SdrProblem {
    pub fn new(cfg: &SystemConfig, ch: &ChannelSet, bf: &Beamformer) -> Result<Self> {
        let obj = PhaseObjective::new(cfg, ch, bf)?;
        Ok(Self::from_objective(&obj))
    }

    pub fn from_objective(obj: &PhaseObjective) -> Self {
        let n = obj.sigma.ncols();
        let mut w = DMatrix::zeros(n + 1, n + 1);
        let sh = obj.sigma.adjoint();
        w.view_mut((0, 0), (n, n)).copy_from(&(&sh * &obj.sigma));
        let cross = &sh * &obj.direct;
        w.view_mut((0, n), (n, 1)).copy_from(&cross);
        w.view_mut((n, 0), (1, n)).copy_from(&cross.adjoint());
        Self { w_mat: w, sigma_mat: obj.sigma.clone(), direct: obj.direct.clone(), t: obj.t }
    }

    pub fn n_s(&self) -> usize {
        self.sigma_mat.ncols()
    }

    /// `||Σ q + d||^2 + t` for a feasible `q`.
    pub fn value(&self, q: &PhaseVector) -> f64 {
        (&self.sigma_mat * q.as_vector() + &self.direct).norm_squared() + self.t
    }

    /// Relaxed value `tr(W Q) + ||d||^2 + t` at `Q = V V^H`.
    pub fn relaxed_value(&self, v: &DMatrix<C64>) -> f64 {
        (v.adjoint() * &self.w_mat * v).trace().re + self.direct.norm_squared() + self.t
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SdrOptions {
    /// Factor width; defaults to `ceil(sqrt(2 (n_s + 1))) + 1`, capped at `n_s + 1`.
    pub rank: Option<usize>,
    /// Seed of the random starting factor.
    pub seed: u64,
    pub cg: CgOptions,
}

impl Default for SdrOptions {
    fn default() -> Self {
        Self { rank: None, seed: 0x5d12_0001, cg: CgOptions::default() }
    }
}

#[derive(Debug, Clone)]
pub struct SdrResult {
    /// Rank-one extraction with the auxiliary entry fixed to 1 and removed.
    pub phase: PhaseVector,
    /// Best relaxed objective reached: the factor's value, or the rounded point's when
    /// an unconverged factor falls short of it. Never below [`SdrResult::feasible_value`].
    pub sdp_value: f64,
    /// `||Σ q + d||^2 + t` at [`SdrResult::phase`].
    pub feasible_value: f64,
    /// Low-rank factor `V` with `Q = V V^H` as left by the solver.
    pub factor: DMatrix<C64>,
    pub converged: bool,
    pub stagnated: bool,
    pub iterations: usize,
}

struct LiftedCost<'a>(&'a DMatrix<C64>);

impl CostFunction for LiftedCost<'_> {
    fn cost(&self, v: &DMatrix<C64>) -> f64 {
        -(v.adjoint() * self.0 * v).trace().re
    }

    fn euclidean_gradient(&self, v: &DMatrix<C64>) -> DMatrix<C64> {
        self.0 * v * C64::from(-2.0)
    }

    fn initial_step(&self) -> f64 {
        1.0 / (2.0 * self.0.norm() + 1.0)
    }
}

pub fn default_rank(n_s: usize) -> usize {
    let n = n_s + 1;
    (((2 * n) as f64).sqrt().ceil() as usize + 1).min(n)
}

/// Semidefinite relaxation of the phase subproblem solved by a low-rank factorization.
pub fn sdr_phase_opt(ch: &ChannelSet, bf: &Beamformer, cfg: &SystemConfig) -> Result<SdrResult> {
    sdr_phase_opt_with(ch, bf, cfg, &SdrOptions::default())
}

pub fn sdr_phase_opt_with(ch: &ChannelSet, bf: &Beamformer, cfg: &SystemConfig, opts: &SdrOptions) -> Result<SdrResult> {
    solve_lifted(&SdrProblem::new(cfg, ch, bf)?, opts)
}

/// Solves an already-built lifted problem from a seeded random factor.
pub fn solve_lifted(problem: &SdrProblem, opts: &SdrOptions) -> Result<SdrResult> {
    solve_lifted_from(problem, opts, None)
}

/// As [`solve_lifted`], starting from `init` when its shape matches the rank in use.
/// Rows of `init` are renormalized.
pub fn solve_lifted_from(problem: &SdrProblem, opts: &SdrOptions, init: Option<&DMatrix<C64>>) -> Result<SdrResult> {
    let n = problem.n_s() + 1;
    let p = opts.rank.unwrap_or_else(|| default_rank(problem.n_s())).clamp(1, n);
    let mut v0 = match init {
        Some(v) if v.shape() == (n, p) => v.clone(),
        _ => {
            let mut rng = stream_rng(opts.seed, 0);
            DMatrix::from_fn(n, p, |_, _| complex_normal(&mut rng))
        }
    };
    for mut row in v0.row_iter_mut() {
        let norm = row.norm();
        if norm > 0.0 && norm.is_finite() {
            row /= C64::from(norm);
        } else {
            row.fill(C64::from(0.0));
            row[0] = C64::from(1.0);
        }
    }

    let out = minimize(&LiftedCost(&problem.w_mat), v0, &opts.cg)?;
    let v = out.point().clone();
    let (_, u) = hermitian_top_eigen(&(&v * v.adjoint()))?;
    let last = u[n - 1];
    let rot = if last.norm() > 0.0 { last.conj() / last.norm() } else { C64::from(1.0) };
    let q = PhaseVector::from_complex(&(u.rows(0, n - 1) * rot));

    // The rounded point lifts to a feasible relaxed point, so it bounds the relaxed
    // optimum from below too. Slow low-rank convergence onto a rank-one optimum can
    // leave the factor just short of it.
    let feasible_value = problem.value(&q);
    Ok(SdrResult {
        feasible_value,
        sdp_value: problem.relaxed_value(&v).max(feasible_value),
        phase: q,
        factor: v,
        converged: out.converged,
        stagnated: out.stagnated,
        iterations: out.iterations(),
    })
}
