use crate::error::{dim_err, Result};
use crate::model::{Beamformer, ChannelSet, PhaseVector};
use crate::C64;

/// Phase vector aligning every reflected path with the direct path at a single-antenna Bob.
///
/// With `m = H b` and `theta_0 = arg(h_b^H b)`, element `n` gets
/// `theta_n = theta_0 - arg(h^H_n) - arg(m_n)`. `theta_0` is 0 when `alpha = 0` or
/// the direct product vanishes.
pub fn closed_form_phase_single_bob(ch: &ChannelSet, bf: &Beamformer, alpha: f64) -> Result<PhaseVector> {
    if ch.n_r() != 1 {
        return Err(dim_err(format!("closed-form phases need n_r = 1, got {}", ch.n_r())));
    }
    if bf.b().len() != ch.n_t() {
        return Err(dim_err("beamformer length differs from n_t"));
    }
    let direct = (ch.h_b.row(0) * bf.b())[0];
    let theta0 = if alpha == 0.0 || direct.norm() == 0.0 { 0.0 } else { direct.arg() };
    let m = &ch.h_ris * bf.b();
    let angles: Vec<f64> = (0..ch.n_s())
        .map(|n| theta0 - ch.g_r[(0, n)].arg() - m[n].arg())
        .collect();
    Ok(PhaseVector::from_angles(&angles))
}

/// `|alpha h_b^H b| + Σ_n |h^H_n| |m_n|`, the magnitude reached by the aligned phases.
pub fn single_bob_alignment_bound(ch: &ChannelSet, bf: &Beamformer, alpha: f64) -> f64 {
    let direct: C64 = (ch.h_b.row(0) * bf.b())[0] * alpha;
    let m = &ch.h_ris * bf.b();
    direct.norm() + (0..ch.n_s()).map(|n| ch.g_r[(0, n)].norm() * m[n].norm()).sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{effective_channel, random_unit_vector, SystemConfig};
    use nalgebra::{DMatrix, DVector};
    use std::f64::consts::PI;

    fn achieved(ch: &ChannelSet, q: &PhaseVector, bf: &Beamformer, alpha: f64) -> f64 {
        let cfg = SystemConfig { n_t: ch.n_t(), n_r: 1, n_e: 1, n_s: ch.n_s(), alpha, beta: 1.0, rho: 1.0, sigma2: 1.0, sigma_e2: 1.0, r_s: 1.0 };
        (effective_channel(&cfg, ch, q).unwrap() * bf.b()).norm()
    }

    #[test]
    fn aligned_real_channels_need_no_shift() {
        let ch = ChannelSet::new(
            DMatrix::from_element(1, 2, C64::from(0.5)),
            DMatrix::from_element(3, 2, C64::from(1.0)),
            DMatrix::from_element(1, 3, C64::from(2.0)),
        )
        .unwrap();
        let bf = Beamformer::new(DVector::from_element(2, C64::from(1.0)), 1.0).unwrap();
        let q = closed_form_phase_single_bob(&ch, &bf, 0.8).unwrap();
        for z in q.as_vector().iter() {
            assert!((z - C64::from(1.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn one_element_by_hand_and_grid() {
        // h^H = e^{-jπ/3}, m = e^{jπ/6}, no direct path.
        let ch = ChannelSet::new(
            DMatrix::zeros(1, 1),
            DMatrix::from_element(1, 1, C64::from_polar(1.0, PI / 6.0)),
            DMatrix::from_element(1, 1, C64::from_polar(1.0, -PI / 3.0)),
        )
        .unwrap();
        let bf = Beamformer::scalar(1.0).unwrap();
        let q = closed_form_phase_single_bob(&ch, &bf, 0.0).unwrap();
        assert!((q.angles()[0] - PI / 6.0).abs() < 1e-14);

        // 4096-point grid on theta_1 with a direct path at phase 0.3
        let mut ch2 = ch.clone();
        ch2.h_b = DMatrix::from_element(1, 1, C64::from_polar(0.7, 0.3));
        let q2 = closed_form_phase_single_bob(&ch2, &bf, 1.0).unwrap();
        let (best_theta, _) = (0..4096)
            .map(|i| {
                let th = 2.0 * PI * i as f64 / 4096.0;
                (th, achieved(&ch2, &PhaseVector::from_angles(&[th]), &bf, 1.0))
            })
            .fold((0.0, f64::MIN), |a, b| if b.1 > a.1 { b } else { a });
        let diff = (q2.angles()[0] - best_theta).rem_euclid(2.0 * PI);
        assert!(diff.min(2.0 * PI - diff) <= 2.0 * PI / 4096.0);
    }

    #[test]
    fn alignment_identity_on_random_instances() {
        for seed in 0..100 {
            let cfg = SystemConfig { n_t: 4, n_r: 1, n_e: 1, n_s: 12, alpha: 0.8, beta: 0.8, rho: 1.0, sigma2: 1.0, sigma_e2: 1.0, r_s: 1.0 };
            let ch = ChannelSet::rayleigh(&cfg, seed).unwrap();
            let bf = Beamformer::new(random_unit_vector(4, seed, 1).unwrap(), 1.0).unwrap();
            let q = closed_form_phase_single_bob(&ch, &bf, cfg.alpha).unwrap();
            let lhs = achieved(&ch, &q, &bf, cfg.alpha);
            let rhs = single_bob_alignment_bound(&ch, &bf, cfg.alpha);
            assert!((lhs - rhs).abs() <= 1e-10, "{lhs} vs {rhs}");
        }
    }

    #[test]
    fn multi_antenna_bob_rejected() {
        let cfg = SystemConfig { n_t: 2, n_r: 2, n_e: 1, n_s: 3, alpha: 0.8, beta: 0.8, rho: 1.0, sigma2: 1.0, sigma_e2: 1.0, r_s: 1.0 };
        let ch = ChannelSet::rayleigh(&cfg, 0).unwrap();
        let bf = Beamformer::new(random_unit_vector(2, 0, 1).unwrap(), 1.0).unwrap();
        assert!(closed_form_phase_single_bob(&ch, &bf, 0.8).is_err());
    }
}
