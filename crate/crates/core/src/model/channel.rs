use nalgebra::{DMatrix, DVector};
use rand::Rng;

use super::config::SystemConfig;
use super::noise::LinkGains;
use super::rng::{rayleigh_from, sample_rayleigh, stream_rng};
use super::UNIT_TOL;
use crate::error::{dim_err, Error, Result};
use crate::C64;

/// Instantaneous legitimate channels known to Alice, Bob and the RIS controller.
///
/// Single-antenna cases are one-row or one-column instances of the same type:
/// with `n_t = 1`, `h_b` is Alice→Bob vector `h_b` and `h_ris` is `h_0`; with
/// `n_r = 1`, the rows of `h_b` and `g_r` are `h_b^H` and `h^H`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSet {
    /// Alice→Bob, `n_r x n_t`.
    pub h_b: DMatrix<C64>,
    /// Alice→RIS, `n_s x n_t`.
    pub h_ris: DMatrix<C64>,
    /// RIS→Bob, `n_r x n_s`.
    pub g_r: DMatrix<C64>,
}

impl ChannelSet {
    pub fn new(h_b: DMatrix<C64>, h_ris: DMatrix<C64>, g_r: DMatrix<C64>) -> Result<Self> {
        let (n_r, n_t) = h_b.shape();
        let (n_s, n_t2) = h_ris.shape();
        if n_t != n_t2 || g_r.shape() != (n_r, n_s) {
            return Err(dim_err(format!(
                "inconsistent channels: H_b {:?}, H {:?}, G_r {:?}",
                h_b.shape(),
                h_ris.shape(),
                g_r.shape()
            )));
        }
        if n_r == 0 || n_t == 0 || n_s == 0 {
            return Err(dim_err("channel matrices must be non-empty"));
        }
        let finite = |m: &DMatrix<C64>| m.iter().all(|z| z.re.is_finite() && z.im.is_finite());
        if !(finite(&h_b) && finite(&h_ris) && finite(&g_r)) {
            return Err(Error::Numerical("channel entries must be finite".into()));
        }
        Ok(Self { h_b, h_ris, g_r })
    }

    /// Rayleigh-faded channels with unit-variance entries, streams 0..=2 of `seed`.
    pub fn rayleigh(cfg: &SystemConfig, seed: u64) -> Result<Self> {
        Self::rayleigh_scaled(cfg, seed, &LinkGains::default())
    }

    /// As [`ChannelSet::rayleigh`], with per-link amplitude multipliers applied.
    pub fn rayleigh_scaled(cfg: &SystemConfig, seed: u64, gains: &LinkGains) -> Result<Self> {
        let h_b = sample_rayleigh(cfg.n_r, cfg.n_t, seed, 0)? * C64::from(gains.direct);
        let h_ris = sample_rayleigh(cfg.n_s, cfg.n_t, seed, 1)? * C64::from(gains.alice_ris);
        let g_r = sample_rayleigh(cfg.n_r, cfg.n_s, seed, 2)? * C64::from(gains.ris_bob);
        Self::new(h_b, h_ris, g_r)
    }

    pub fn n_t(&self) -> usize {
        self.h_b.ncols()
    }

    pub fn n_r(&self) -> usize {
        self.h_b.nrows()
    }

    pub fn n_s(&self) -> usize {
        self.h_ris.nrows()
    }

    /// Same direct link with both RIS links set to zero.
    pub fn without_ris(&self) -> Self {
        Self {
            h_b: self.h_b.clone(),
            h_ris: DMatrix::zeros(self.n_s(), self.n_t()),
            g_r: DMatrix::zeros(self.n_r(), self.n_s()),
        }
    }

    pub fn check(&self, cfg: &SystemConfig) -> Result<()> {
        if (cfg.n_r, cfg.n_t, cfg.n_s) != (self.n_r(), self.n_t(), self.n_s()) {
            return Err(dim_err(format!(
                "channels are (n_r, n_t, n_s) = ({}, {}, {}) but the system has ({}, {}, {})",
                self.n_r(),
                self.n_t(),
                self.n_s(),
                cfg.n_r,
                cfg.n_t,
                cfg.n_s
            )));
        }
        Ok(())
    }
}

/// One realization of the eavesdropper channels. Only drawn inside Monte Carlo sampling.
#[derive(Debug, Clone)]
pub struct EveChannels {
    /// Alice→Eve, `n_e x n_t`.
    pub h_e: DMatrix<C64>,
    /// RIS→Eve, `n_e x n_s`.
    pub g_e: DMatrix<C64>,
}

impl EveChannels {
    pub(crate) fn sample<R: Rng + ?Sized>(n_e: usize, n_t: usize, n_s: usize, rng: &mut R) -> Self {
        let h_e = rayleigh_from(n_e, n_t, rng);
        let g_e = rayleigh_from(n_e, n_s, rng);
        Self { h_e, g_e }
    }
}

/// RIS reflection coefficients `q` with `Phi = diag(q)`; every entry has unit modulus.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseVector(DVector<C64>);

impl PhaseVector {
    pub fn ones(n: usize) -> Self {
        Self(DVector::from_element(n, C64::new(1.0, 0.0)))
    }

    pub fn from_angles(angles: &[f64]) -> Self {
        Self(DVector::from_iterator(angles.len(), angles.iter().map(|&a| C64::from_polar(1.0, a))))
    }

    /// Projects arbitrary complex entries onto the unit circle. Zero entries map to 1.
    pub fn from_complex(v: &DVector<C64>) -> Self {
        Self(v.map(|z| unit_or_one(&z)))
    }

    /// Validates that `v` already lies on the unit circle.
    pub fn try_from_unit(v: DVector<C64>) -> Result<Self> {
        let dev = max_modulus_deviation(&v);
        if dev > UNIT_TOL {
            return Err(Error::Domain(format!("phase entries deviate from unit modulus by {dev:e}")));
        }
        Ok(Self(v))
    }

    /// Independent uniform phases in [0, 2π) from stream `stream` of `seed`.
    pub fn random(n: usize, seed: u64, stream: u64) -> Self {
        let mut rng = stream_rng(seed, stream);
        let angles: Vec<f64> =
            (0..n).map(|_| rng.random::<f64>() * std::f64::consts::TAU).collect();
        Self::from_angles(&angles)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_vector(&self) -> &DVector<C64> {
        &self.0
    }

    /// Phases `theta_n = arg(q_n)` in (-π, π].
    pub fn angles(&self) -> Vec<f64> {
        self.0.iter().map(|z| z.arg()).collect()
    }

    /// Largest `| |q_i| - 1 |`.
    pub fn max_modulus_error(&self) -> f64 {
        max_modulus_deviation(&self.0)
    }

    /// `e^{jψ} q`.
    pub fn rotated(&self, psi: f64) -> Self {
        Self::from_complex(&(&self.0 * C64::from_polar(1.0, psi)))
    }
}

pub(crate) fn unit_or_one(z: &C64) -> C64 {
    let r = z.norm();
    if r > 0.0 && r.is_finite() {
        z / r
    } else {
        C64::new(1.0, 0.0)
    }
}

fn max_modulus_deviation(v: &DVector<C64>) -> f64 {
    v.iter().map(|z| (z.norm() - 1.0).abs()).fold(0.0, f64::max)
}

/// Transmit beamformer `w = sqrt(p) b` with unit-norm direction `b`.
#[derive(Debug, Clone, PartialEq)]
pub struct Beamformer {
    b: DVector<C64>,
    p: f64,
}

impl Beamformer {
    /// Normalizes `direction` to unit norm.
    pub fn new(direction: DVector<C64>, p: f64) -> Result<Self> {
        if direction.is_empty() {
            return Err(dim_err("beamformer needs at least one antenna"));
        }
        if !(p > 0.0 && p.is_finite()) {
            return Err(Error::Domain(format!("transmit power {p} must be positive")));
        }
        let norm = direction.norm();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::Domain("beamformer direction is zero or non-finite".into()));
        }
        Ok(Self { b: direction / C64::from(norm), p })
    }

    /// Single-antenna transmitter, `b = (1)`.
    pub fn scalar(p: f64) -> Result<Self> {
        Self::new(DVector::from_element(1, C64::new(1.0, 0.0)), p)
    }

    pub fn b(&self) -> &DVector<C64> {
        &self.b
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// `w = sqrt(p) b`.
    pub fn w(&self) -> DVector<C64> {
        &self.b * C64::from(self.p.sqrt())
    }

    pub fn with_power(&self, p: f64) -> Result<Self> {
        Self::new(self.b.clone(), p)
    }

    pub fn check(&self, cfg: &SystemConfig) -> Result<()> {
        if self.b.len() != cfg.n_t {
            return Err(dim_err(format!(
                "beamformer has {} entries but n_t = {}",
                self.b.len(),
                cfg.n_t
            )));
        }
        if self.p > cfg.rho * (1.0 + 1e-12) {
            return Err(Error::Domain(format!(
                "transmit power {} exceeds the budget {}",
                self.p, cfg.rho
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn channel_shapes_are_checked() {
        let ok = ChannelSet::new(DMatrix::zeros(2, 3), DMatrix::zeros(4, 3), DMatrix::zeros(2, 4));
        assert!(ok.is_ok());
        let bad = ChannelSet::new(DMatrix::zeros(2, 3), DMatrix::zeros(4, 2), DMatrix::zeros(2, 4));
        assert!(matches!(bad, Err(Error::Dimension(_))));
        let mut nan = DMatrix::zeros(2, 3);
        nan[(0, 0)] = C64::new(f64::NAN, 0.0);
        assert!(ChannelSet::new(nan, DMatrix::zeros(4, 3), DMatrix::zeros(2, 4)).is_err());
    }

    #[test]
    fn beamformer_rejects_zero_direction_and_power() {
        assert!(Beamformer::new(DVector::zeros(3), 1.0).is_err());
        assert!(Beamformer::new(DVector::from_element(3, C64::new(1.0, 0.0)), 0.0).is_err());
        let bf = Beamformer::new(DVector::from_element(3, C64::new(2.0, -1.0)), 4.0).unwrap();
        assert!((bf.b().norm() - 1.0).abs() < UNIT_TOL);
        assert!((bf.w().norm() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn zero_entries_project_to_one() {
        let v = DVector::from_vec(vec![C64::new(0.0, 0.0), C64::new(0.0, 3.0)]);
        let q = PhaseVector::from_complex(&v);
        assert_eq!(q.as_vector()[0], C64::new(1.0, 0.0));
        assert!((q.as_vector()[1] - C64::new(0.0, 1.0)).norm() < 1e-15);
        assert!(PhaseVector::try_from_unit(v).is_err());
    }

    proptest! {
        #[test]
        fn constructed_phases_are_unit_modulus(
            angles in proptest::collection::vec(-10.0f64..10.0, 1..40),
            psi in -7.0f64..7.0,
        ) {
            let q = PhaseVector::from_angles(&angles);
            prop_assert!(q.max_modulus_error() <= UNIT_TOL);
            prop_assert!(q.rotated(psi).max_modulus_error() <= UNIT_TOL);
            for a in q.angles() {
                prop_assert!(a > -std::f64::consts::PI - 1e-15 && a <= std::f64::consts::PI);
            }
        }

        #[test]
        fn projection_is_unit_modulus(re in proptest::collection::vec(-5.0f64..5.0, 1..20), scale in 1e-6f64..1e6) {
            let v = DVector::from_iterator(re.len(), re.iter().enumerate().map(|(i, &x)| C64::new(x, (i as f64) - 3.0) * scale));
            prop_assert!(PhaseVector::from_complex(&v).max_modulus_error() <= UNIT_TOL);
        }
    }
}
