//! Compares the closed-form outage with an empirical estimate over random
//! eavesdropper channels, and fits the wiretap gain distribution.

use ris_sop::analytics::sop_theory;
use ris_sop::model::{random_unit_vector, Beamformer, ChannelSet, PhaseVector, SystemConfig};
use ris_sop::montecarlo::{empirical_cdf_distance, empirical_gain_moments, empirical_sop};

fn main() -> ris_sop::Result<()> {
    let cfg = SystemConfig { n_t: 3, n_r: 2, n_e: 3, n_s: 8, alpha: 0.7, beta: 0.8, rho: 1.0, sigma2: 1.0, sigma_e2: 1.0, r_s: 1.5 }
        .with_snr_db(12.0);
    let ch = ChannelSet::rayleigh(&cfg, 3)?;
    let q = PhaseVector::random(cfg.n_s, 3, 1);
    let b = random_unit_vector(cfg.n_t, 3, 2)?;
    let bf = Beamformer::new(b.clone(), cfg.rho)?;
    let theory = sop_theory(&cfg, &ch, &q, &bf)?;
    let mc = empirical_sop(&cfg, &ch, &q, &bf, 200_000, 11)?;
    println!("theory {theory:.5}  empirical {:.5} ± {:.5}", mc.p_hat, mc.std_err);

    let u = &ch.h_ris * &b;
    let (mean, var) = empirical_gain_moments(cfg.beta, cfg.n_e, &u, 100_000, 5)?;
    let scale = cfg.beta * cfg.beta + u.norm_squared();
    println!("gain mean {mean:.4} (gamma {:.4}), variance {var:.4} (gamma {:.4})", cfg.n_e as f64 * scale, cfg.n_e as f64 * scale * scale);
    println!("KS distance {:.5}", empirical_cdf_distance(cfg.beta, cfg.n_e, &u, 100_000, 6)?);
    Ok(())
}
