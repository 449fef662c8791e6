//! Joint beamformer and phase design by alternating optimization, for each phase solver.

use ris_sop::model::{ChannelSet, SystemConfig};
use ris_sop::optimize::{alternating_optimize, PhaseSolver};

fn main() -> ris_sop::Result<()> {
    let cfg = SystemConfig { n_t: 4, n_r: 1, n_e: 2, n_s: 16, alpha: 0.5, beta: 0.5, rho: 1.0, sigma2: 1.0, sigma_e2: 1.0, r_s: 2.0 }
        .with_snr_db(5.0);
    let ch = ChannelSet::rayleigh(&cfg, 1)?;
    for solver in [PhaseSolver::ClosedForm, PhaseSolver::Manifold, PhaseSolver::Sdr] {
        let r = alternating_optimize(&cfg, &ch, solver, 1, 1e-5, 50)?;
        let first = r.trace.first().map_or(f64::NAN, |e| e.p_out);
        println!(
            "{solver:?}: sop {first:.5} -> {:.5} after {} iterations (converged {})",
            r.p_out, r.iterations_used, r.converged
        );
    }
    Ok(())
}
