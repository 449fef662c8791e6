use nalgebra::DVector;

use super::linalg::{fix_phase, hermitian_top_eigen};
use crate::error::{Error, Result};
use crate::model::{effective_channel, Beamformer, ChannelSet, PhaseVector, SystemConfig};
use crate::C64;

/// Maximal-ratio transmission at full power.
///
/// Without the RIS the direction is the top eigenvector of `H_b^H H_b`; with it, of
/// the effective channel's Gram matrix at `phase` (all-ones when `None`). For a
/// single-antenna Bob this is the matched vector `h^H / ||h||`.
pub fn mrt_baseline(ch: &ChannelSet, cfg: &SystemConfig, with_ris: bool, phase: Option<&PhaseVector>) -> Result<Beamformer> {
    ch.check(cfg)?;
    let m = if with_ris {
        let ones = PhaseVector::ones(cfg.n_s);
        effective_channel(cfg, ch, phase.unwrap_or(&ones))?
    } else {
        ch.h_b.clone()
    };
    if m.iter().all(|z| z.norm() == 0.0) {
        return Err(Error::DegenerateChannel("MRT needs a non-zero main channel".into()));
    }
    let b = if m.nrows() == 1 {
        let h: DVector<C64> = m.row(0).adjoint();
        fix_phase(&h / C64::from(h.norm()))
    } else {
        hermitian_top_eigen(&(m.adjoint() * &m))?.1
    };
    Beamformer::new(b, cfg.rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{main_capacity, random_unit_vector};
    use nalgebra::DMatrix;

    fn cfg(n_t: usize, n_r: usize, n_s: usize, alpha: f64) -> SystemConfig {
        SystemConfig { n_t, n_r, n_e: 2, n_s, alpha, beta: 0.8, rho: 5.0, sigma2: 1.0, sigma_e2: 1.0, r_s: 1.0 }
    }

    #[test]
    fn matched_filter_for_single_bob() {
        let c = cfg(3, 1, 2, 1.0);
        let hb = DMatrix::from_row_slice(1, 3, &[C64::from(1.0), C64::from(2.0), C64::from(2.0)]);
        let ch = ChannelSet::new(hb, DMatrix::zeros(2, 3), DMatrix::zeros(1, 2)).unwrap();
        let bf = mrt_baseline(&ch, &c, false, None).unwrap();
        let expect = [1.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0];
        for (z, e) in bf.b().iter().zip(expect) {
            assert!((z - C64::from(e)).norm() < 1e-14);
        }
        assert_eq!(bf.p(), c.rho);
    }

    #[test]
    fn beats_random_unit_vectors() {
        let c = cfg(4, 3, 6, 0.8);
        let ch = ChannelSet::rayleigh(&c, 2).unwrap();
        let q = PhaseVector::random(6, 2, 1);
        let bf = mrt_baseline(&ch, &c, true, Some(&q)).unwrap();
        let best = main_capacity(&c, &ch, &q, &bf).unwrap();
        for s in 0..10_000 {
            let v = Beamformer::new(random_unit_vector(4, 5, s).unwrap(), c.rho).unwrap();
            assert!(main_capacity(&c, &ch, &q, &v).unwrap() <= best + 1e-12);
        }
    }

    #[test]
    fn zero_effective_channel_is_an_error() {
        let c = cfg(2, 2, 3, 0.0);
        let ch = ChannelSet::new(DMatrix::from_element(2, 2, C64::from(1.0)), DMatrix::zeros(3, 2), DMatrix::from_element(2, 3, C64::from(1.0))).unwrap();
        assert!(matches!(mrt_baseline(&ch, &c, true, None), Err(Error::DegenerateChannel(_))));
        let _ = random_unit_vector(2, 0, 0);
    }
}
