//! Riemannian conjugate gradient over unit-modulus RIS phases for a fixed beamformer.

use ris_sop::analytics::sop_theory;
use ris_sop::model::{random_unit_vector, Beamformer, ChannelSet, PhaseVector, SystemConfig};
use ris_sop::optimize::manifold_phase_opt;

fn main() -> ris_sop::Result<()> {
    let cfg = SystemConfig { n_t: 3, n_r: 3, n_e: 2, n_s: 24, alpha: 0.5, beta: 0.6, rho: 1.0, sigma2: 1.0, sigma_e2: 1.0, r_s: 2.0 }
        .with_snr_db(5.0);
    let ch = ChannelSet::rayleigh(&cfg, 5)?;
    let bf = Beamformer::new(random_unit_vector(cfg.n_t, 5, 1)?, cfg.rho)?;
    let q0 = PhaseVector::ones(cfg.n_s);
    let r = manifold_phase_opt(&ch, &bf, &cfg, &q0)?;
    println!("iterations {}, converged {}, stagnated {}", r.iterations, r.converged, r.stagnated);
    for (i, f) in r.trace.iter().enumerate().filter(|(i, _)| i.is_power_of_two() || *i == 0) {
        println!("  {i:>4}  objective {f:.6}");
    }
    println!("sop {:.5} -> {:.5}", sop_theory(&cfg, &ch, &q0, &bf)?, sop_theory(&cfg, &ch, &r.phase, &bf)?);
    println!("max |1 - |q_i|| = {:.2e}", r.phase.max_modulus_error());
    Ok(())
}
