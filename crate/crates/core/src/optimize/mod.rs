//! Beamformer and RIS phase solvers, the alternating driver, and MRT baselines.

mod ao;
mod baseline;
mod beamformer;
mod closed_form;
pub(crate) mod linalg;
mod manifold;
pub mod riemannian;
mod sdr;
mod subproblem;

pub use ao::{
    alternating_optimize, alternating_optimize_with, mrt_phase_search, AoOptions, AoReport,
    AoTraceEntry, BeamRule, PhaseSolver,
};
pub use baseline::mrt_baseline;
pub use beamformer::{generalized_top_eigvec, optimal_beamformer};
pub use closed_form::{closed_form_phase_single_bob, single_bob_alignment_bound};
pub use manifold::{manifold_phase_opt, manifold_phase_opt_with, ManifoldResult};
pub use riemannian::{CgOptions, CgOutcome, CgState};
pub use sdr::{
    default_rank, sdr_phase_opt, sdr_phase_opt_with, solve_lifted, solve_lifted_from, SdrOptions, SdrProblem, SdrResult,
};
pub use subproblem::{PhaseObjective, SubproblemMatrices};
