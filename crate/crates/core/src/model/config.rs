use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Antenna counts, link scalars, power budget and noise powers of one system.
///
/// `alpha` and `beta` scale the direct Alice→Bob and Alice→Eve links. They enter
/// every formula as deterministic amplitudes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    pub n_t: usize,
    pub n_r: usize,
    pub n_e: usize,
    pub n_s: usize,
    pub alpha: f64,
    pub beta: f64,
    /// Transmit power budget (W).
    pub rho: f64,
    /// Noise power at Bob (W).
    pub sigma2: f64,
    /// Noise power at Eve (W).
    pub sigma_e2: f64,
    /// Secrecy coding rate (bits/s/Hz).
    pub r_s: f64,
}

impl SystemConfig {
    pub fn validate(&self) -> Result<()> {
        let counts = [("n_t", self.n_t), ("n_r", self.n_r), ("n_e", self.n_e), ("n_s", self.n_s)];
        for (name, v) in counts {
            if v == 0 {
                return Err(Error::Config(format!("{name} must be at least 1")));
            }
        }
        for (name, v) in [("alpha", self.alpha), ("beta", self.beta)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Config(format!("{name} = {v} is outside [0, 1]")));
            }
        }
        let positive = [
            ("rho", self.rho),
            ("sigma2", self.sigma2),
            ("sigma_e2", self.sigma_e2),
            ("r_s", self.r_s),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("{name} = {v} must be positive and finite")));
            }
        }
        Ok(())
    }

    /// Transmit SNR in dB, `10 log10(rho / sigma2)`.
    pub fn snr_db(&self) -> f64 {
        10.0 * (self.rho / self.sigma2).log10()
    }

    /// Copy with `rho` set so that `rho / sigma2` equals the given SNR.
    pub fn with_snr_db(mut self, snr_db: f64) -> Self {
        self.rho = self.sigma2 * 10f64.powf(snr_db / 10.0);
        self
    }
}
