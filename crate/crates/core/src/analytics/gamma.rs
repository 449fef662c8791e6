use crate::error::{Error, Result};

/// Regularized upper incomplete gamma `Γ(m, z) / Γ(m)` for integer shape `m >= 1`.
///
/// For `z >= m` uses the finite Poisson series `e^{-z} Σ_{k<m} z^k / k!`, summed in
/// log space so that large `m` or `z` neither overflow nor lose the leading terms.
/// Below the mode it returns one minus the complementary series. Non-positive `z`
/// gives 1.
pub fn reg_upper_gamma(m: u32, z: f64) -> Result<f64> {
    if m == 0 {
        return Err(Error::Domain("gamma shape must be a positive integer".into()));
    }
    if z.is_nan() {
        return Err(Error::Domain("gamma argument is NaN".into()));
    }
    if z <= 0.0 {
        return Ok(1.0);
    }
    if z.is_infinite() {
        return Ok(0.0);
    }
    let ln_z = z.ln();
    if z < f64::from(m) {
        return Ok((1.0 - lower_tail(m, z, ln_z)).clamp(0.0, 1.0));
    }
    let mut log_terms = Vec::with_capacity(m as usize);
    let mut ln_fact = 0.0;
    for k in 0..m {
        if k > 0 {
            ln_fact += f64::from(k).ln();
        }
        log_terms.push(f64::from(k) * ln_z - z - ln_fact);
    }
    let max = log_terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = log_terms.iter().map(|t| (t - max).exp()).sum();
    Ok((max + sum.ln()).exp().clamp(0.0, 1.0))
}

/// `e^{-z} Σ_{k>=m} z^k / k!` for `z < m`, where the terms decrease geometrically.
/// Summing the small tail directly keeps `1 - P` exact to rounding when `Q` is near 1.
fn lower_tail(m: u32, z: f64, ln_z: f64) -> f64 {
    let ln_fact: f64 = (2..=m).map(|k| f64::from(k).ln()).sum();
    let mut term = (f64::from(m) * ln_z - z - ln_fact).exp();
    let mut sum = 0.0;
    let mut k = f64::from(m);
    while term > 1e-17 * sum || sum == 0.0 {
        sum += term;
        k += 1.0;
        term *= z / k;
        if term == 0.0 {
            break;
        }
    }
    sum
}

/// Gamma law of the wiretap gain `x = ||beta a + C u||^2` with `a ~ CN(0, I_m)`,
/// `C ~ CN(0, I_m ⊗ I_n)`: shape `m`, scale `beta^2 + ||u||^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaFit {
    pub shape: u32,
    pub scale: f64,
}

impl GammaFit {
    pub fn new(beta: f64, m: u32, u_norm2: f64) -> Result<Self> {
        if m == 0 {
            return Err(Error::Domain("gamma shape must be a positive integer".into()));
        }
        if u_norm2 < 0.0 || !u_norm2.is_finite() {
            return Err(Error::Domain(format!("||u||^2 = {u_norm2} must be non-negative")));
        }
        let scale = beta * beta + u_norm2;
        if !(scale > 0.0) {
            return Err(Error::DegenerateChannel(
                "beta = 0 and u = 0: the wiretap gain is identically zero".into(),
            ));
        }
        Ok(Self { shape: m, scale })
    }

    pub fn mean(&self) -> f64 {
        f64::from(self.shape) * self.scale
    }

    pub fn variance(&self) -> f64 {
        f64::from(self.shape) * self.scale * self.scale
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        // shape validated at construction
        1.0 - reg_upper_gamma(self.shape, x / self.scale).unwrap_or(1.0)
    }

    /// `P(X >= x)`.
    pub fn sf(&self, x: f64) -> f64 {
        reg_upper_gamma(self.shape, x / self.scale).unwrap_or(1.0)
    }
}

/// CDF of the wiretap gain, `1 - Γ(m, x / (beta^2 + ||u||^2)) / Γ(m)`.
pub fn gain_cdf(beta: f64, m: u32, u_norm2: f64, x: f64) -> Result<f64> {
    if x < 0.0 || x.is_nan() {
        return Err(Error::Domain(format!("gain CDF evaluated at x = {x}")));
    }
    Ok(GammaFit::new(beta, m, u_norm2)?.cdf(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn known_values() {
        assert!((reg_upper_gamma(1, 0.5).unwrap() - (-0.5f64).exp()).abs() < 1e-16);
        assert!((reg_upper_gamma(1, 0.5).unwrap() - 0.6065307).abs() < 1e-7);
        assert_eq!(reg_upper_gamma(3, 0.0).unwrap(), 1.0);
        assert_eq!(reg_upper_gamma(3, -2.0).unwrap(), 1.0);
        // 2 e^{-1}
        assert!((reg_upper_gamma(2, 1.0).unwrap() - 0.7357589).abs() < 1e-7);
        assert!(reg_upper_gamma(0, 1.0).is_err());
    }

    #[test]
    fn no_overflow_for_large_arguments() {
        let v = reg_upper_gamma(200, 5000.0).unwrap();
        assert!((0.0..1e-300).contains(&v));
        let w = reg_upper_gamma(500, 10.0).unwrap();
        assert!((w - 1.0).abs() < 1e-12);
        assert_eq!(reg_upper_gamma(4, f64::INFINITY).unwrap(), 0.0);
    }

    #[test]
    fn cdf_examples() {
        assert_eq!(gain_cdf(1.0, 1, 0.0, 0.0).unwrap(), 0.0);
        assert!((gain_cdf(1.0, 1, 0.0, 2f64.ln()).unwrap() - 0.5).abs() < 1e-15);
        let expected = 1.0 - 2.0 * (-1f64).exp();
        assert!((gain_cdf(0.0, 2, 1.0, 1.0).unwrap() - expected).abs() < 1e-15);
        assert!((expected - 0.2642411).abs() < 1e-7);
        assert!(matches!(gain_cdf(0.0, 2, 0.0, 1.0), Err(Error::DegenerateChannel(_))));
        assert!(gain_cdf(1.0, 2, 0.0, -1.0).is_err());
    }

    #[test]
    fn fit_moments() {
        let fit = GammaFit::new(0.8, 3, 2.0).unwrap();
        assert!((fit.mean() - 3.0 * 2.64).abs() < 1e-12);
        assert!((fit.variance() - 3.0 * 2.64 * 2.64).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn probability_range_and_monotone(m in 1u32..60, z1 in 0.0f64..200.0, dz in 0.0f64..50.0) {
            let a = reg_upper_gamma(m, z1).unwrap();
            let b = reg_upper_gamma(m, z1 + dz).unwrap();
            prop_assert!((0.0..=1.0).contains(&a));
            prop_assert!(b <= a + 1e-15);
            // more shape, more tail mass
            prop_assert!(reg_upper_gamma(m + 1, z1).unwrap() >= a - 1e-15);
        }

        #[test]
        fn cdf_nondecreasing(beta in 0.0f64..1.0, m in 1u32..10, u2 in 0.01f64..20.0, x in 0.0f64..100.0, dx in 0.0f64..10.0) {
            let f1 = gain_cdf(beta, m, u2, x).unwrap();
            let f2 = gain_cdf(beta, m, u2, x + dx).unwrap();
            prop_assert!((0.0..=1.0).contains(&f1));
            prop_assert!(f2 >= f1 - 1e-15);
        }
    }
}
