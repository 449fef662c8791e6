use nalgebra::DMatrix;

use super::riemannian::{minimize, CgOptions, CostFunction};
use super::subproblem::PhaseObjective;
use crate::error::{dim_err, Result};
use crate::model::{Beamformer, ChannelSet, PhaseVector, SystemConfig};
use crate::C64;

#[derive(Debug, Clone)]
pub struct ManifoldResult {
    pub phase: PhaseVector,
    /// Phase objective `f(q)` at the start and after every accepted step.
    pub trace: Vec<f64>,
    pub objective: f64,
    pub converged: bool,
    pub stagnated: bool,
    pub iterations: usize,
}

impl CostFunction for PhaseObjective {
    fn cost(&self, x: &DMatrix<C64>) -> f64 {
        self.value(&x.column(0).into_owned())
    }

    fn euclidean_gradient(&self, x: &DMatrix<C64>) -> DMatrix<C64> {
        let g = PhaseObjective::euclidean_gradient(self, &x.column(0).into_owned());
        DMatrix::from_column_slice(g.len(), 1, g.as_slice())
    }

    fn initial_step(&self) -> f64 {
        1.0 / (2.0 * self.k * self.curvature_scale() + 1.0)
    }
}

/// Riemannian CG on the complex circle for the phase objective at fixed `bf`.
pub fn manifold_phase_opt(ch: &ChannelSet, bf: &Beamformer, cfg: &SystemConfig, q0: &PhaseVector) -> Result<ManifoldResult> {
    manifold_phase_opt_with(ch, bf, cfg, q0, &CgOptions::default())
}

pub fn manifold_phase_opt_with(
    ch: &ChannelSet,
    bf: &Beamformer,
    cfg: &SystemConfig,
    q0: &PhaseVector,
    opts: &CgOptions,
) -> Result<ManifoldResult> {
    if q0.len() != cfg.n_s {
        return Err(dim_err(format!("initial phase has {} entries, n_s = {}", q0.len(), cfg.n_s)));
    }
    let obj = PhaseObjective::new(cfg, ch, bf)?;
    let x0 = DMatrix::from_column_slice(cfg.n_s, 1, q0.as_vector().as_slice());
    let out = minimize(&obj, x0, opts)?;
    let phase = if out.iterations() == 0 {
        q0.clone()
    } else {
        PhaseVector::from_complex(&out.point().column(0).into_owned())
    };
    Ok(ManifoldResult {
        phase,
        objective: out.cost,
        iterations: out.iterations(),
        converged: out.converged,
        stagnated: out.stagnated,
        trace: out.trace,
    })
}
