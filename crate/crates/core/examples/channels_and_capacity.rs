//! Draws a seeded Rayleigh channel set and reports the main-link capacity for a
//! random RIS configuration against the all-ones reflection.

use ris_sop::model::{main_capacity, random_unit_vector, Beamformer, ChannelSet, PhaseVector, SystemConfig};

fn main() -> ris_sop::Result<()> {
    let cfg = SystemConfig { n_t: 4, n_r: 2, n_e: 2, n_s: 16, alpha: 0.5, beta: 0.5, rho: 1.0, sigma2: 1.0, sigma_e2: 1.0, r_s: 1.0 }
        .with_snr_db(10.0);
    let ch = ChannelSet::rayleigh(&cfg, 42)?;
    let bf = Beamformer::new(random_unit_vector(cfg.n_t, 42, 1)?, cfg.rho)?;
    for (label, q) in [("all ones", PhaseVector::ones(cfg.n_s)), ("random", PhaseVector::random(cfg.n_s, 42, 2))] {
        println!("{label:>9}: C_m = {:.4} bits/s/Hz", main_capacity(&cfg, &ch, &q, &bf)?);
    }
    println!("without RIS: C_m = {:.4}", main_capacity(&cfg, &ch.without_ris(), &PhaseVector::ones(cfg.n_s), &bf)?);
    Ok(())
}
