use super::beamformer::optimal_beamformer;
use super::closed_form::closed_form_phase_single_bob;
use super::linalg::hermitian_top_eigen;
use super::manifold::manifold_phase_opt_with;
use super::riemannian::CgOptions;
use super::sdr::{solve_lifted_from, SdrOptions, SdrProblem};
use nalgebra::DMatrix;
use crate::C64;
use super::subproblem::{PhaseObjective, SubproblemMatrices};
use crate::analytics::{sop_from_inputs, wiretap_gamma_argument, SopInputs};
use crate::error::{dim_err, Error, Result};
use crate::model::{derive_seed, random_unit_vector, Beamformer, ChannelSet, PhaseVector, SystemConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PhaseSolver {
    Sdr,
    Manifold,
    /// Aligned phases for a single-antenna Bob.
    ClosedForm,
}

/// How the beamformer is refreshed between phase steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BeamRule {
    /// Generalized-eigenvector maximizer of the outage argument.
    #[default]
    Optimal,
    /// Maximal-ratio transmission over the current effective channel.
    Mrt,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AoOptions {
    /// Stop once `|ΔP_out|` between consecutive iterations is at most `xi`.
    pub xi: f64,
    pub iter_max: usize,
    pub beam: BeamRule,
    pub cg: CgOptions,
    pub sdr: SdrOptions,
    /// Starting phases; all-ones when `None`.
    pub q0: Option<PhaseVector>,
}

impl Default for AoOptions {
    fn default() -> Self {
        Self {
            xi: 1e-5,
            iter_max: 50,
            beam: BeamRule::Optimal,
            cg: CgOptions::default(),
            sdr: SdrOptions::default(),
            q0: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AoTraceEntry {
    pub iteration: usize,
    pub p_out: f64,
    /// Outage argument `z`; larger is better.
    pub z: f64,
}

#[derive(Debug, Clone)]
pub struct AoReport {
    /// Entry 0 is the starting point.
    pub trace: Vec<AoTraceEntry>,
    /// Best iterate seen.
    pub final_q: PhaseVector,
    pub final_b: Beamformer,
    pub p_out: f64,
    pub converged: bool,
    pub iterations_used: usize,
}

fn evaluate(cfg: &SystemConfig, ch: &ChannelSet, q: &PhaseVector, bf: &Beamformer, iteration: usize) -> Result<AoTraceEntry> {
    let inputs = SopInputs::evaluate(cfg, ch, q, bf)?;
    let z = wiretap_gamma_argument(&inputs)?;
    let p_out = sop_from_inputs(&inputs)?;
    if !p_out.is_finite() || !z.is_finite() {
        return Err(Error::Numerical(format!("non-finite outage at iteration {iteration}")));
    }
    Ok(AoTraceEntry { iteration, p_out, z })
}

fn beam_step(cfg: &SystemConfig, ch: &ChannelSet, q: &PhaseVector, rule: BeamRule) -> Result<Beamformer> {
    if cfg.n_t == 1 {
        return Beamformer::scalar(cfg.rho);
    }
    match rule {
        BeamRule::Optimal => optimal_beamformer(&SubproblemMatrices::new(cfg, ch, q)?, cfg.beta),
        BeamRule::Mrt => {
            let sub = SubproblemMatrices::new(cfg, ch, q)?;
            if sub.a1.iter().all(|z| z.norm() == 0.0) {
                return Err(Error::DegenerateChannel("MRT needs a non-zero effective channel".into()));
            }
            Beamformer::new(hermitian_top_eigen(&sub.a1)?.1, cfg.rho)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn phase_step(
    cfg: &SystemConfig,
    ch: &ChannelSet,
    bf: &Beamformer,
    q: &PhaseVector,
    solver: PhaseSolver,
    opts: &AoOptions,
    iteration: usize,
    factor: &mut Option<DMatrix<C64>>,
) -> Result<PhaseVector> {
    match solver {
        PhaseSolver::ClosedForm => closed_form_phase_single_bob(ch, bf, cfg.alpha),
        PhaseSolver::Manifold => Ok(manifold_phase_opt_with(ch, bf, cfg, q, &opts.cg)?.phase),
        PhaseSolver::Sdr => {
            let obj = PhaseObjective::new(cfg, ch, bf)?;
            let problem = SdrProblem::from_objective(&obj);
            let sdr = SdrOptions { seed: derive_seed(opts.sdr.seed, iteration as u64), ..opts.sdr };
            let r = solve_lifted_from(&problem, &sdr, factor.as_ref())?;
            *factor = Some(r.factor.clone());
            // the rounded relaxation may lose to the incumbent; keep whichever is better
            Ok(if r.feasible_value >= problem.value(q) { r.phase } else { q.clone() })
        }
    }
}

/// Alternating optimization of phases and beamformer with the default solver settings.
pub fn alternating_optimize(
    cfg: &SystemConfig,
    ch: &ChannelSet,
    solver: PhaseSolver,
    seed: u64,
    xi: f64,
    iter_max: usize,
) -> Result<AoReport> {
    alternating_optimize_with(cfg, ch, solver, seed, &AoOptions { xi, iter_max, ..AoOptions::default() })
}

pub fn alternating_optimize_with(
    cfg: &SystemConfig,
    ch: &ChannelSet,
    solver: PhaseSolver,
    seed: u64,
    opts: &AoOptions,
) -> Result<AoReport> {
    cfg.validate()?;
    ch.check(cfg)?;
    if opts.iter_max == 0 {
        return Err(Error::Domain("iter_max must be at least 1".into()));
    }
    if !(opts.xi > 0.0) {
        return Err(Error::Domain(format!("xi = {} must be positive", opts.xi)));
    }
    if solver == PhaseSolver::ClosedForm && cfg.n_r != 1 {
        return Err(dim_err(format!("closed-form phases need n_r = 1, got {}", cfg.n_r)));
    }

    let mut q = match &opts.q0 {
        Some(q0) if q0.len() != cfg.n_s => {
            return Err(dim_err(format!("initial phase has {} entries, n_s = {}", q0.len(), cfg.n_s)))
        }
        Some(q0) => q0.clone(),
        None => PhaseVector::ones(cfg.n_s),
    };
    let mut bf = if cfg.n_t == 1 {
        Beamformer::scalar(cfg.rho)?
    } else {
        Beamformer::new(random_unit_vector(cfg.n_t, seed, 0)?, cfg.rho)?
    };

    let first = evaluate(cfg, ch, &q, &bf, 0)?;
    let mut trace = vec![first];
    let mut best = (first.p_out, first.z, q.clone(), bf.clone());
    let mut converged = false;
    let mut iterations_used = 0;

    // low-rank factor of the previous relaxation, reused as the next starting point
    let mut factor = None;
    for it in 1..=opts.iter_max {
        q = phase_step(cfg, ch, &bf, &q, solver, opts, it, &mut factor)?;
        bf = beam_step(cfg, ch, &q, opts.beam)?;
        let e = evaluate(cfg, ch, &q, &bf, it)?;
        let prev = trace[trace.len() - 1].p_out;
        trace.push(e);
        iterations_used = it;
        if e.p_out < best.0 || (e.p_out == best.0 && e.z > best.1) {
            best = (e.p_out, e.z, q.clone(), bf.clone());
        }
        if cfg.n_t == 1 || (e.p_out - prev).abs() <= opts.xi {
            converged = true;
            break;
        }
    }

    Ok(AoReport { trace, final_q: best.2, final_b: best.3, p_out: best.0, converged, iterations_used })
}

/// MRT with phase search: the phase step of `solver` paired with MRT beamforming.
pub fn mrt_phase_search(cfg: &SystemConfig, ch: &ChannelSet, seed: u64, opts: &AoOptions) -> Result<AoReport> {
    let solver = if cfg.n_r == 1 { PhaseSolver::ClosedForm } else { PhaseSolver::Manifold };
    let opts = AoOptions { beam: BeamRule::Mrt, ..opts.clone() };
    alternating_optimize_with(cfg, ch, solver, seed, &opts)
}
