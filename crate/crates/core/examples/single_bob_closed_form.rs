//! With one Bob antenna the phase subproblem has an exact solution: align every
//! reflected path with the direct path.

use ris_sop::model::{main_gain, random_unit_vector, Beamformer, ChannelSet, PhaseVector, SystemConfig};
use ris_sop::optimize::{closed_form_phase_single_bob, single_bob_alignment_bound};

fn main() -> ris_sop::Result<()> {
    let cfg = SystemConfig { n_t: 4, n_r: 1, n_e: 2, n_s: 32, alpha: 0.4, beta: 0.5, rho: 1.0, sigma2: 1.0, sigma_e2: 1.0, r_s: 1.0 };
    let ch = ChannelSet::rayleigh(&cfg, 8)?;
    let bf = Beamformer::new(random_unit_vector(cfg.n_t, 8, 1)?, 1.0)?;
    let q = closed_form_phase_single_bob(&ch, &bf, cfg.alpha)?;
    let bound = single_bob_alignment_bound(&ch, &bf, cfg.alpha);
    println!("aligned gain {:.6}, squared alignment bound {:.6}", main_gain(&cfg, &ch, &q, &bf)?, bound * bound);
    println!("random gain  {:.6}", main_gain(&cfg, &ch, &PhaseVector::random(cfg.n_s, 8, 2), &bf)?);
    Ok(())
}
