use super::gamma::reg_upper_gamma;
use crate::error::{dim_err, Error, Result};
use crate::model::{main_capacity, main_gain, Beamformer, ChannelSet, PhaseVector, SystemConfig};
use crate::C64;

/// Everything the closed form needs once the legitimate channels are fixed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SopInputs {
    pub cfg: SystemConfig,
    /// Main channel capacity (bits/s/Hz).
    pub c_m: f64,
    /// `||diag(q) H b||^2`.
    pub phase_gain: f64,
    /// Transmit power.
    pub p: f64,
}

impl SopInputs {
    pub fn evaluate(cfg: &SystemConfig, ch: &ChannelSet, phase: &PhaseVector, bf: &Beamformer) -> Result<Self> {
        let c_m = main_capacity(cfg, ch, phase, bf)?;
        let hb = &ch.h_ris * bf.b();
        let phase_gain: f64 = hb
            .iter()
            .zip(phase.as_vector().iter())
            .map(|(m, q)| (q * m).norm_sqr())
            .sum();
        debug_assert!(
            (phase_gain - hb.norm_squared()).abs() <= 1e-12 * (1.0 + phase_gain),
            "unit-modulus phases must leave ||Hb|| unchanged"
        );
        Ok(Self { cfg: *cfg, c_m, phase_gain, p: bf.p() })
    }

    /// `phi_1 = sigma_e^2 (2^{C_m - R_s} - 1) / P`.
    pub fn phi(&self) -> f64 {
        let excess = (self.c_m - self.cfg.r_s) * std::f64::consts::LN_2;
        self.cfg.sigma_e2 * excess.exp_m1() / self.p
    }

    /// Gamma scale `beta^2 + ||diag(q) H b||^2`.
    pub fn scale(&self) -> Result<f64> {
        let s = self.cfg.beta * self.cfg.beta + self.phase_gain;
        if s > 0.0 {
            Ok(s)
        } else {
            Err(Error::DegenerateChannel(
                "beta = 0 and H b = 0: the wiretap-gain channel (beta H_e + G_e diag(q) H) b is zero".into(),
            ))
        }
    }
}

/// Argument `z = phi_1 / (beta^2 + ||diag(q) H b||^2)` of the outage expression.
/// Non-positive values mean the rate target is not supported and outage is certain.
pub fn wiretap_gamma_argument(inputs: &SopInputs) -> Result<f64> {
    Ok(inputs.phi() / inputs.scale()?)
}

pub fn sop_from_inputs(inputs: &SopInputs) -> Result<f64> {
    let z = wiretap_gamma_argument(inputs)?;
    if z <= 0.0 {
        return Ok(1.0);
    }
    reg_upper_gamma(eve_antennas(&inputs.cfg)?, z)
}

/// Closed-form secrecy outage probability `Γ(N_e, z) / Γ(N_e)`.
pub fn sop_theory(cfg: &SystemConfig, ch: &ChannelSet, phase: &PhaseVector, bf: &Beamformer) -> Result<f64> {
    sop_from_inputs(&SopInputs::evaluate(cfg, ch, phase, bf)?)
}

/// Power-independent lower bound reached as `P / sigma_e^2 → ∞`.
pub fn sop_high_snr_bound(cfg: &SystemConfig, ch: &ChannelSet, phase: &PhaseVector, bf: &Beamformer) -> Result<f64> {
    let inputs = SopInputs::evaluate(cfg, ch, phase, bf)?;
    let g = main_gain(cfg, ch, phase, bf)?;
    let z = cfg.sigma_e2 * g / (cfg.sigma2 * cfg.r_s.exp2() * inputs.scale()?);
    reg_upper_gamma(eve_antennas(cfg)?, z)
}

/// Single-antenna Alice (`n_t = 1`), transmitting at power `p`.
pub fn sop_single_alice(cfg: &SystemConfig, ch: &ChannelSet, phase: &PhaseVector, p: f64) -> Result<f64> {
    if cfg.n_t != 1 {
        return Err(dim_err(format!("single-Alice outage needs n_t = 1, got {}", cfg.n_t)));
    }
    let bf = Beamformer::new(nalgebra::DVector::from_element(1, C64::new(1.0, 0.0)), p)?;
    sop_theory(cfg, ch, phase, &bf)
}

/// Single-antenna Eve (`n_e = 1`): `exp(-z)`.
pub fn sop_single_eve(cfg: &SystemConfig, ch: &ChannelSet, phase: &PhaseVector, bf: &Beamformer) -> Result<f64> {
    if cfg.n_e != 1 {
        return Err(dim_err(format!("single-Eve outage needs n_e = 1, got {}", cfg.n_e)));
    }
    let z = wiretap_gamma_argument(&SopInputs::evaluate(cfg, ch, phase, bf)?)?;
    Ok(if z <= 0.0 { 1.0 } else { (-z).exp() })
}

fn eve_antennas(cfg: &SystemConfig) -> Result<u32> {
    u32::try_from(cfg.n_e).map_err(|_| Error::Domain(format!("n_e = {} is too large", cfg.n_e)))
}
