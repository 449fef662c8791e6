//! Secrecy outage from the closed form as the coding rate and the eavesdropper
//! antenna count vary, with the power-independent high-SNR floor.

use ris_sop::analytics::{sop_high_snr_bound, sop_theory};
use ris_sop::model::{random_unit_vector, Beamformer, ChannelSet, PhaseVector, SystemConfig};

fn main() -> ris_sop::Result<()> {
    let base = SystemConfig { n_t: 4, n_r: 2, n_e: 1, n_s: 16, alpha: 0.6, beta: 0.6, rho: 1.0, sigma2: 1.0, sigma_e2: 1.0, r_s: 1.0 };
    let ch = ChannelSet::rayleigh(&base, 7)?;
    let q = PhaseVector::random(base.n_s, 7, 1);
    let bf = Beamformer::new(random_unit_vector(base.n_t, 7, 2)?, 1.0)?;
    println!("n_e  r_s  sop(10 dB)  sop(30 dB)  floor");
    for n_e in [1, 2, 4] {
        for r_s in [0.5, 1.0, 2.0] {
            let cfg = SystemConfig { n_e, r_s, ..base };
            let at = |snr| {
                let c = cfg.with_snr_db(snr);
                sop_theory(&c, &ch, &q, &bf.with_power(c.rho)?)
            };
            let hi = cfg.with_snr_db(30.0);
            let floor = sop_high_snr_bound(&hi, &ch, &q, &bf.with_power(hi.rho)?)?;
            println!("{n_e:>3}  {r_s:>3}  {:>10.5}  {:>10.5}  {floor:.5}", at(10.0)?, at(30.0)?);
        }
    }
    Ok(())
}
