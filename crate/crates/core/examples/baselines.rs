//! Outage of the reference schemes against the optimized designs on one channel draw.

use ris_sop::analytics::sop_theory;
use ris_sop::harness::{run_scheme, scenario_channels, Scheme};
use ris_sop::model::{LinkGains, SystemConfig};

fn main() -> ris_sop::Result<()> {
    let cfg = SystemConfig { n_t: 4, n_r: 1, n_e: 2, n_s: 16, alpha: 0.5, beta: 0.5, rho: 1.0, sigma2: 1.0, sigma_e2: 1.0, r_s: 2.0 }
        .with_snr_db(5.0);
    let ch = scenario_channels(3, &cfg, &LinkGains::default())?;
    for scheme in Scheme::ALL {
        let out = run_scheme(scheme, &cfg, &ch, 3)?;
        println!("{:>10}: {:.5}", scheme.as_str(), sop_theory(&cfg, &out.channels, &out.phase, &out.beamformer)?);
    }
    Ok(())
}
