use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Thermal noise density at 290 K in dBm/Hz.
const THERMAL_DBM_PER_HZ: f64 = -174.0;

/// Amplitude multipliers for the legitimate links (path loss). All default to 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LinkGains {
    /// Alice→Bob.
    pub direct: f64,
    /// Alice→RIS.
    pub alice_ris: f64,
    /// RIS→Bob.
    pub ris_bob: f64,
}

impl Default for LinkGains {
    fn default() -> Self {
        Self { direct: 1.0, alice_ris: 1.0, ris_bob: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseModel {
    pub bandwidth_hz: f64,
    pub noise_figure_db: f64,
    #[serde(default)]
    pub link_gains: LinkGains,
}

impl Default for NoiseModel {
    fn default() -> Self {
        Self { bandwidth_hz: 20e6, noise_figure_db: 10.0, link_gains: LinkGains::default() }
    }
}

impl NoiseModel {
    pub fn noise_power_watts(&self) -> Result<f64> {
        Ok(dbm_to_watts(noise_floor_dbm(self)?))
    }
}

/// `-174 + 10 log10(W) + NF` dBm.
pub fn noise_floor_dbm(nm: &NoiseModel) -> Result<f64> {
    if !(nm.bandwidth_hz > 0.0 && nm.bandwidth_hz.is_finite()) {
        return Err(Error::Domain(format!("bandwidth {} Hz must be positive", nm.bandwidth_hz)));
    }
    Ok(THERMAL_DBM_PER_HZ + 10.0 * nm.bandwidth_hz.log10() + nm.noise_figure_db)
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

pub fn watts_to_dbm(watts: f64) -> f64 {
    10.0 * watts.log10() + 30.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twenty_megahertz_floor() {
        let nm = NoiseModel { bandwidth_hz: 20e6, noise_figure_db: 10.0, ..Default::default() };
        let f = noise_floor_dbm(&nm).unwrap();
        assert!((f - (-90.9897)).abs() < 1e-4, "{f}");
    }

    #[test]
    fn one_hertz_is_thermal_density() {
        let nm = NoiseModel { bandwidth_hz: 1.0, noise_figure_db: 0.0, ..Default::default() };
        assert_eq!(noise_floor_dbm(&nm).unwrap(), -174.0);
    }

    #[test]
    fn bad_bandwidth() {
        for bw in [0.0, -1.0, f64::NAN] {
            let nm = NoiseModel { bandwidth_hz: bw, ..Default::default() };
            assert!(noise_floor_dbm(&nm).is_err());
        }
    }

    #[test]
    fn dbm_round_trip() {
        for dbm in [-174.0, -90.9897, 0.0, 23.0, 46.5] {
            let w = dbm_to_watts(dbm);
            let back = dbm_to_watts(watts_to_dbm(w));
            assert!(((back - w) / w).abs() < 1e-15, "{dbm}");
        }
    }
}
