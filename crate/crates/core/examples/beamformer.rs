//! Optimal transmit direction for fixed RIS phases and how it compares with
//! maximum-ratio transmission.

use ris_sop::analytics::sop_theory;
use ris_sop::model::{ChannelSet, PhaseVector, SystemConfig};
use ris_sop::optimize::{mrt_baseline, optimal_beamformer, SubproblemMatrices};

fn main() -> ris_sop::Result<()> {
    let cfg = SystemConfig { n_t: 4, n_r: 2, n_e: 2, n_s: 12, alpha: 0.5, beta: 0.7, rho: 1.0, sigma2: 1.0, sigma_e2: 1.0, r_s: 1.0 }
        .with_snr_db(10.0);
    let ch = ChannelSet::rayleigh(&cfg, 21)?;
    let q = PhaseVector::random(cfg.n_s, 21, 1);
    let sub = SubproblemMatrices::new(&cfg, &ch, &q)?;
    let opt = optimal_beamformer(&sub, cfg.beta)?;
    let mrt = mrt_baseline(&ch, &cfg, true, Some(&q))?;
    for (label, bf) in [("optimal", &opt), ("mrt", &mrt)] {
        println!("{label:>8}: ratio {:.5}, sop {:.5}", sub.ratio(bf.b(), cfg.beta), sop_theory(&cfg, &ch, &q, bf)?);
    }
    Ok(())
}
