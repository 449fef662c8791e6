use std::fmt;
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::model::{NoiseModel, SystemConfig};

/// Transmission scheme evaluated at each sweep point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// MRT over the direct link with the RIS absent.
    MrtNoRis,
    /// MRT over the effective channel at uniformly random phases.
    MrtRand,
    /// MRT beamforming alternated with phase optimization.
    MrtPs,
    /// Alternating optimization with closed-form phases (single-antenna Bob).
    AoCs,
    AoSdr,
    AoMan,
}

impl Scheme {
    pub const ALL: [Scheme; 6] =
        [Scheme::MrtNoRis, Scheme::MrtRand, Scheme::MrtPs, Scheme::AoCs, Scheme::AoSdr, Scheme::AoMan];

    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::MrtNoRis => "mrt_no_ris",
            Scheme::MrtRand => "mrt_rand",
            Scheme::MrtPs => "mrt_ps",
            Scheme::AoCs => "ao_cs",
            Scheme::AoSdr => "ao_sdr",
            Scheme::AoMan => "ao_man",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|x| x.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown scheme `{s}`")))
    }

    /// Whether the scheme can run on `cfg`.
    pub fn check(self, cfg: &SystemConfig) -> Result<()> {
        if self == Scheme::AoCs && cfg.n_r != 1 {
            return Err(Error::Config(format!("scheme ao_cs requires n_r = 1, got n_r = {}", cfg.n_r)));
        }
        Ok(())
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    SnrDb,
    RS,
    NE,
    NT,
    NR,
    NS,
}

impl SweepAxis {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepAxis::SnrDb => "snr_db",
            SweepAxis::RS => "r_s",
            SweepAxis::NE => "n_e",
            SweepAxis::NT => "n_t",
            SweepAxis::NR => "n_r",
            SweepAxis::NS => "n_s",
        }
    }

    fn is_count(self) -> bool {
        matches!(self, SweepAxis::NE | SweepAxis::NT | SweepAxis::NR | SweepAxis::NS)
    }

    /// `base` with this axis set to `value`. Power follows the SNR axis only.
    pub fn apply(self, base: &SystemConfig, value: f64) -> SystemConfig {
        let mut cfg = *base;
        match self {
            SweepAxis::SnrDb => cfg = cfg.with_snr_db(value),
            SweepAxis::RS => cfg.r_s = value,
            SweepAxis::NE => cfg.n_e = value as usize,
            SweepAxis::NT => cfg.n_t = value as usize,
            SweepAxis::NR => cfg.n_r = value as usize,
            SweepAxis::NS => cfg.n_s = value as usize,
        }
        cfg
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
}

/// One experiment: a base system, a one-dimensional sweep and the schemes to compare.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub system: SystemConfig,
    pub noise: NoiseModel,
    pub sweep: Sweep,
    pub schemes: Vec<Scheme>,
    /// Monte Carlo trials per cell; 0 disables simulation.
    pub trials: usize,
    pub seed: u64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SystemSection {
    n_t: usize,
    n_r: usize,
    n_e: usize,
    n_s: usize,
    alpha: f64,
    beta: f64,
    r_s: f64,
    rho: Option<f64>,
    snr_db: Option<f64>,
    sigma2: Option<f64>,
    sigma_e2: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    name: String,
    #[serde(default = "default_seed")]
    seed: u64,
    #[serde(default)]
    trials: usize,
    schemes: Vec<Scheme>,
    system: SystemSection,
    #[serde(default)]
    noise: NoiseModel,
    sweep: Option<Sweep>,
}

fn default_seed() -> u64 {
    1
}

impl Scenario {
    /// Parses TOML. Noise powers default to the thermal floor of `[noise]`, with
    /// `sigma_e2 = sigma2`; power comes from exactly one of `rho` and `snr_db`.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let file: ScenarioFile = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let s = file.system;
        let sigma2 = match s.sigma2 {
            Some(v) => v,
            None => file.noise.noise_power_watts().map_err(|e| Error::Config(e.to_string()))?,
        };
        let mut system = SystemConfig {
            n_t: s.n_t,
            n_r: s.n_r,
            n_e: s.n_e,
            n_s: s.n_s,
            alpha: s.alpha,
            beta: s.beta,
            rho: 1.0,
            sigma2,
            sigma_e2: s.sigma_e2.unwrap_or(sigma2),
            r_s: s.r_s,
        };
        system = match (s.rho, s.snr_db) {
            (Some(rho), None) => SystemConfig { rho, ..system },
            (None, Some(snr)) => system.with_snr_db(snr),
            _ => return Err(Error::Config("[system] needs exactly one of `rho` and `snr_db`".into())),
        };
        let sweep = file.sweep.unwrap_or(Sweep { axis: SweepAxis::SnrDb, values: vec![system.snr_db()] });
        let scenario = Self {
            name: file.name,
            system,
            noise: file.noise,
            sweep,
            schemes: file.schemes,
            trials: file.trials,
            seed: file.seed,
        };
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    /// System configuration at every sweep point, in grid order.
    pub fn points(&self) -> Vec<SystemConfig> {
        self.sweep.values.iter().map(|&v| self.sweep.axis.apply(&self.system, v)).collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.name.contains([',', '"', '\n']) {
            return Err(Error::Config("scenario name must not contain commas, quotes or newlines".into()));
        }
        if self.schemes.is_empty() {
            return Err(Error::Config("at least one scheme is required".into()));
        }
        let v = &self.sweep.values;
        if v.is_empty() {
            return Err(Error::Config("sweep grid is empty".into()));
        }
        if v.iter().any(|x| !x.is_finite()) || v.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Config("sweep grid must be finite and strictly increasing".into()));
        }
        if self.sweep.axis.is_count() && v.iter().any(|x| *x < 1.0 || x.fract() != 0.0) {
            return Err(Error::Config(format!("{} values must be positive integers", self.sweep.axis)));
        }
        self.system.validate()?;
        for (cfg, value) in self.points().iter().zip(v) {
            cfg.validate()?;
            for s in &self.schemes {
                s.check(cfg).map_err(|e| match e {
                    Error::Config(m) => Error::Config(format!("{m} (at {} = {value})", self.sweep.axis)),
                    other => other,
                })?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"
name = "t"
seed = 7
schemes = ["mrt_no_ris", "ao_man"]
[system]
n_t = 4
n_r = 2
n_e = 2
n_s = 8
alpha = 0.8
beta = 0.8
r_s = 2.0
snr_db = 9.0
[sweep]
axis = "snr_db"
values = [0.0, 5.0, 10.0]
"#;

    #[test]
    fn parses_and_derives_noise() {
        let s = Scenario::from_toml_str(BASE).unwrap();
        assert_eq!(s.seed, 7);
        assert_eq!(s.trials, 0);
        assert_eq!(s.schemes, vec![Scheme::MrtNoRis, Scheme::AoMan]);
        let floor = NoiseModel::default().noise_power_watts().unwrap();
        assert!((s.system.sigma2 - floor).abs() <= 1e-30);
        assert_eq!(s.system.sigma_e2, s.system.sigma2);
        assert!((s.system.snr_db() - 9.0).abs() < 1e-12);
        let pts = s.points();
        assert!((pts[2].snr_db() - 10.0).abs() < 1e-12);
    }

    #[test]
    fn unknown_keys_rejected() {
        let bad = BASE.replace("alpha = 0.8", "alpah = 0.8");
        assert!(matches!(Scenario::from_toml_str(&bad), Err(Error::Config(_))));
        let bad = BASE.replace("seed = 7", "seed = 7\nextra = 1");
        assert!(Scenario::from_toml_str(&bad).is_err());
    }

    #[test]
    fn grid_must_increase() {
        let bad = BASE.replace("[0.0, 5.0, 10.0]", "[0.0, 10.0, 5.0]");
        assert!(Scenario::from_toml_str(&bad).is_err());
        let bad = BASE.replace("[0.0, 5.0, 10.0]", "[]");
        assert!(Scenario::from_toml_str(&bad).is_err());
    }

    #[test]
    fn ao_cs_needs_single_bob_everywhere() {
        let bad = BASE.replace("\"ao_man\"", "\"ao_cs\"");
        let err = Scenario::from_toml_str(&bad).unwrap_err().to_string();
        assert!(err.contains("ao_cs") && err.contains("n_r"), "{err}");
        let swept = bad
            .replace("n_r = 2", "n_r = 1")
            .replace("axis = \"snr_db\"", "axis = \"n_r\"")
            .replace("[0.0, 5.0, 10.0]", "[1, 2]");
        let err = Scenario::from_toml_str(&swept).unwrap_err().to_string();
        assert!(err.contains("n_r = 2"), "{err}");
    }

    #[test]
    fn power_must_be_given_once() {
        let both = BASE.replace("snr_db = 9.0", "snr_db = 9.0\nrho = 1.0");
        assert!(Scenario::from_toml_str(&both).is_err());
        let none = BASE.replace("snr_db = 9.0\n", "");
        assert!(Scenario::from_toml_str(&none).is_err());
    }

    #[test]
    fn missing_sweep_is_single_point() {
        let s = Scenario::from_toml_str(&BASE[..BASE.find("[sweep]").unwrap()]).unwrap();
        assert_eq!(s.sweep.values.len(), 1);
        assert!((s.sweep.values[0] - 9.0).abs() < 1e-12);
    }
}
