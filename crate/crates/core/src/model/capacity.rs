use nalgebra::DMatrix;

use super::channel::{Beamformer, ChannelSet, PhaseVector};
use super::config::SystemConfig;
use crate::error::{dim_err, Result};
use crate::C64;

fn check_all(cfg: &SystemConfig, ch: &ChannelSet, phase: &PhaseVector) -> Result<()> {
    ch.check(cfg)?;
    if phase.len() != cfg.n_s {
        return Err(dim_err(format!("phase vector has {} entries, n_s = {}", phase.len(), cfg.n_s)));
    }
    Ok(())
}

/// Main channel `alpha H_b + G_r diag(q) H`, `n_r x n_t`.
pub fn effective_channel(cfg: &SystemConfig, ch: &ChannelSet, phase: &PhaseVector) -> Result<DMatrix<C64>> {
    check_all(cfg, ch, phase)?;
    let mut reflected = ch.h_ris.clone();
    for (mut row, q) in reflected.row_iter_mut().zip(phase.as_vector().iter()) {
        row *= *q;
    }
    Ok(&ch.h_b * C64::from(cfg.alpha) + &ch.g_r * reflected)
}

/// Received signal energy `||(alpha H_b + G_r diag(q) H) b||^2` per unit power.
pub fn main_gain(cfg: &SystemConfig, ch: &ChannelSet, phase: &PhaseVector, bf: &Beamformer) -> Result<f64> {
    bf.check(cfg)?;
    let m = effective_channel(cfg, ch, phase)?;
    Ok((m * bf.b()).norm_squared())
}

/// Main channel capacity `log2(1 + ||(alpha H_b + G_r diag(q) H) w||^2 / sigma^2)`.
pub fn main_capacity(cfg: &SystemConfig, ch: &ChannelSet, phase: &PhaseVector, bf: &Beamformer) -> Result<f64> {
    let g = main_gain(cfg, ch, phase, bf)?;
    Ok((bf.p() * g / cfg.sigma2).ln_1p() / std::f64::consts::LN_2)
}

/// Capacity with a single-antenna Alice and MRC at Bob.
pub fn main_capacity_single_alice(cfg: &SystemConfig, ch: &ChannelSet, phase: &PhaseVector, p: f64) -> Result<f64> {
    if cfg.n_t != 1 {
        return Err(dim_err(format!("single-Alice capacity needs n_t = 1, got {}", cfg.n_t)));
    }
    main_capacity(cfg, ch, phase, &Beamformer::scalar(p)?)
}

/// Capacity with a single-antenna Bob: `log2(1 + P/sigma^2 |(alpha h_b^H + h^H diag(q) H) b|^2)`.
pub fn main_capacity_single_bob(cfg: &SystemConfig, ch: &ChannelSet, phase: &PhaseVector, bf: &Beamformer) -> Result<f64> {
    if cfg.n_r != 1 {
        return Err(dim_err(format!("single-Bob capacity needs n_r = 1, got {}", cfg.n_r)));
    }
    bf.check(cfg)?;
    check_all(cfg, ch, phase)?;
    // Row-vector form of the same product.
    let mut s = C64::new(0.0, 0.0);
    let hb = ch.h_ris.clone() * bf.b();
    for n in 0..cfg.n_s {
        s += ch.g_r[(0, n)] * phase.as_vector()[n] * hb[n];
    }
    s += (ch.h_b.row(0) * bf.b())[0] * cfg.alpha;
    Ok((bf.p() * s.norm_sqr() / cfg.sigma2).ln_1p() / std::f64::consts::LN_2)
}
