//! Semidefinite relaxation of the phase subproblem with a low-rank factor, and the
//! gap between the relaxed bound and the rounded unit-modulus solution.

use ris_sop::model::{random_unit_vector, Beamformer, ChannelSet, SystemConfig};
use ris_sop::optimize::{default_rank, sdr_phase_opt};

fn main() -> ris_sop::Result<()> {
    for n_s in [4, 8, 16, 32] {
        let cfg = SystemConfig { n_t: 2, n_r: 2, n_e: 2, n_s, alpha: 0.5, beta: 0.6, rho: 1.0, sigma2: 1.0, sigma_e2: 1.0, r_s: 1.0 }
            .with_snr_db(10.0);
        let ch = ChannelSet::rayleigh(&cfg, 13)?;
        let bf = Beamformer::new(random_unit_vector(cfg.n_t, 13, 1)?, cfg.rho)?;
        let r = sdr_phase_opt(&ch, &bf, &cfg)?;
        let gap = (r.sdp_value - r.feasible_value) / r.sdp_value.abs();
        println!("n_s {n_s:>3}  rank {:>2}  relaxed {:.5}  rounded {:.5}  relative gap {gap:.2e}", default_rank(n_s), r.sdp_value, r.feasible_value);
    }
    Ok(())
}
