use nalgebra::{DMatrix, DVector};

use crate::error::Result;
use crate::model::{effective_channel, Beamformer, ChannelSet, PhaseVector, SystemConfig};
use crate::C64;

/// Quadratic-form data of the beamforming subproblem at a fixed phase vector.
///
/// With `P = rho` the outage argument becomes
/// `c (b^H A1 b + t) / (b^H A2 b + beta^2)` for unit `b`.
#[derive(Debug, Clone)]
pub struct SubproblemMatrices {
    /// `(alpha H_b + G_r diag(q) H)^H (alpha H_b + G_r diag(q) H)`.
    pub a1: DMatrix<C64>,
    /// `H^H H`.
    pub a2: DMatrix<C64>,
    /// Single-antenna-Bob form of `a1` (rank one), present when `n_r = 1`.
    pub a3: Option<DMatrix<C64>>,
    /// `sigma_e^2 / (sigma^2 2^{R_s})`.
    pub c: f64,
    /// `sigma^2 (1 - 2^{R_s}) / rho`.
    pub t: f64,
    pub rho: f64,
}

impl SubproblemMatrices {
    pub fn new(cfg: &SystemConfig, ch: &ChannelSet, phase: &PhaseVector) -> Result<Self> {
        let m = effective_channel(cfg, ch, phase)?;
        let a1 = m.adjoint() * &m;
        let a3 = (cfg.n_r == 1).then(|| {
            let row = m.row(0);
            row.adjoint() * row
        });
        Ok(Self {
            a1,
            a2: ch.h_ris.adjoint() * &ch.h_ris,
            a3,
            c: cfg.sigma_e2 / (cfg.sigma2 * cfg.r_s.exp2()),
            t: cfg.sigma2 * (1.0 - cfg.r_s.exp2()) / cfg.rho,
            rho: cfg.rho,
        })
    }

    /// Numerator matrix used by the beamformer: `a3` in single-Bob mode, else `a1`.
    pub fn numerator(&self) -> &DMatrix<C64> {
        self.a3.as_ref().unwrap_or(&self.a1)
    }

    /// `c (b^H (A1 + tI) b) / (b^H (A2 + beta^2 I) b)` for `b` normalized internally.
    pub fn ratio(&self, b: &DVector<C64>, beta: f64) -> f64 {
        let b = b / C64::from(b.norm());
        let num = super::linalg::quad_form(self.numerator(), &b) + self.t;
        let den = super::linalg::quad_form(&self.a2, &b) + beta * beta;
        self.c * num / den
    }
}

/// Phase subproblem at a fixed beamformer, written as a function of `q`:
///
/// `f(q) = -k (||Sigma q + d||^2 + t)` with `Sigma = G_r diag(H b)`, `d = alpha H_b b`
/// and `k = c / (beta^2 + ||H b||^2)`. Minimizing `f` maximizes the outage argument,
/// and `-f(q)` equals it exactly.
#[derive(Debug, Clone)]
pub struct PhaseObjective {
    pub sigma: DMatrix<C64>,
    pub direct: DVector<C64>,
    pub k: f64,
    pub t: f64,
}

impl PhaseObjective {
    pub fn new(cfg: &SystemConfig, ch: &ChannelSet, bf: &Beamformer) -> Result<Self> {
        ch.check(cfg)?;
        bf.check(cfg)?;
        let hb = &ch.h_ris * bf.b();
        let mut sigma = ch.g_r.clone();
        for (mut col, m) in sigma.column_iter_mut().zip(hb.iter()) {
            col *= *m;
        }
        let c = cfg.sigma_e2 / (cfg.sigma2 * cfg.r_s.exp2());
        Ok(Self {
            sigma,
            direct: &ch.h_b * bf.b() * C64::from(cfg.alpha),
            k: c / (cfg.beta * cfg.beta + hb.norm_squared()),
            t: cfg.sigma2 * (1.0 - cfg.r_s.exp2()) / cfg.rho,
        })
    }

    pub fn value(&self, q: &DVector<C64>) -> f64 {
        -self.k * ((&self.sigma * q + &self.direct).norm_squared() + self.t)
    }

    /// Euclidean gradient `-2k Sigma^H Sigma q - 2k Sigma^H d` (the `2 ∂f/∂q*` convention).
    pub fn euclidean_gradient(&self, q: &DVector<C64>) -> DVector<C64> {
        self.sigma.adjoint() * (&self.sigma * q + &self.direct) * C64::from(-2.0 * self.k)
    }

    /// `||Sigma^H Sigma||_F`, used to size the first trial step.
    pub fn curvature_scale(&self) -> f64 {
        (self.sigma.adjoint() * &self.sigma).norm()
    }
}
