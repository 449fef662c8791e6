use nalgebra::{DMatrix, DVector};

use super::linalg::{fix_phase, hermitian_part, hermitian_top_eigen};
use super::subproblem::SubproblemMatrices;
use crate::error::{Error, Result};
use crate::model::Beamformer;
use crate::C64;

/// Top generalized eigenpair of the Hermitian pencil `(num, den)`, `den` positive definite.
///
/// Reduces to a standard problem with `den = L L^H`: the eigenvectors `y` of
/// `L^{-1} num L^{-H}` map back through `x = L^{-H} y`. The returned vector has unit
/// Euclidean norm and the crate-wide phase convention.
pub fn generalized_top_eigvec(num: &DMatrix<C64>, den: &DMatrix<C64>) -> Result<(f64, DVector<C64>)> {
    let n = num.nrows();
    if num.shape() != (n, n) || den.shape() != (n, n) {
        return Err(Error::Dimension("pencil matrices must be square and equally sized".into()));
    }
    let chol = hermitian_part(den)
        .cholesky()
        .ok_or_else(|| Error::Numerical("pencil denominator is not positive definite".into()))?;
    let l = chol.l();
    let l_inv_num = l
        .solve_lower_triangular(num)
        .ok_or_else(|| Error::Numerical("singular Cholesky factor".into()))?;
    // L^{-1} num L^{-H} = (L^{-1} (L^{-1} num)^H)^H
    let reduced = l
        .solve_lower_triangular(&l_inv_num.adjoint())
        .ok_or_else(|| Error::Numerical("singular Cholesky factor".into()))?
        .adjoint();
    let (lambda, y) = hermitian_top_eigen(&reduced)?;
    let x = l
        .adjoint()
        .solve_upper_triangular(&y)
        .ok_or_else(|| Error::Numerical("singular Cholesky factor".into()))?;
    let norm = x.norm();
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(Error::Numerical("generalized eigenvector vanished".into()));
    }
    Ok((lambda, fix_phase(x / C64::from(norm))))
}

/// Ridge added to `H^H H` when `beta = 0` leaves the denominator singular.
fn ridge(a2: &DMatrix<C64>) -> f64 {
    let n = a2.nrows() as f64;
    1e-10 * (1.0 + a2.trace().re / n)
}

fn needs_ridge(den: &DMatrix<C64>) -> bool {
    match hermitian_part(den).cholesky() {
        None => true,
        Some(ch) => {
            let d: Vec<f64> = ch.l().diagonal().iter().map(|z| z.re * z.re).collect();
            let max = d.iter().copied().fold(0.0, f64::max);
            let min = d.iter().copied().fold(f64::INFINITY, f64::min);
            !(min > 1e-14 * max)
        }
    }
}

/// Secrecy-optimal beamformer at a fixed phase vector: the top generalized
/// eigenvector of `(A1 + tI, A2 + beta^2 I)`, transmitted at full power `rho`.
pub fn optimal_beamformer(sub: &SubproblemMatrices, beta: f64) -> Result<Beamformer> {
    let n = sub.a2.nrows();
    let eye = DMatrix::<C64>::identity(n, n);
    let num = sub.numerator() + &eye * C64::from(sub.t);
    let mut den = &sub.a2 + &eye * C64::from(beta * beta);
    if beta == 0.0 && needs_ridge(&den) {
        den += &eye * C64::from(ridge(&sub.a2));
    }
    let (_, b) = generalized_top_eigvec(&num, &den)?;
    Beamformer::new(b, sub.rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{random_unit_vector, ChannelSet, PhaseVector, SystemConfig};

    fn sub_from(a1: DMatrix<C64>, a2: DMatrix<C64>, t: f64) -> SubproblemMatrices {
        SubproblemMatrices { a1, a2, a3: None, c: 1.0, t, rho: 1.0 }
    }

    fn diag(v: &[f64]) -> DMatrix<C64> {
        DMatrix::from_diagonal(&DVector::from_iterator(v.len(), v.iter().map(|&x| C64::from(x))))
    }

    #[test]
    fn single_antenna_is_trivial() {
        let bf = optimal_beamformer(&sub_from(diag(&[3.0]), diag(&[2.0]), -1.0), 0.5).unwrap();
        assert!((bf.b()[0] - C64::from(1.0)).norm() < 1e-12);
    }

    #[test]
    fn diagonal_pencil_picks_top_coordinate() {
        let bf = optimal_beamformer(&sub_from(diag(&[5.0, 1.0]), diag(&[0.0, 0.0]), 0.0), 1.0).unwrap();
        assert!((bf.b()[0] - C64::from(1.0)).norm() < 1e-12);
        assert!(bf.b()[1].norm() < 1e-12);
    }

    #[test]
    fn singular_denominator_gets_ridge() {
        // beta = 0 and a rank-deficient H^H H
        let a2 = diag(&[1.0, 0.0]);
        let bf = optimal_beamformer(&sub_from(diag(&[1.0, 2.0]), a2, 0.0), 0.0).unwrap();
        assert!((bf.b().norm() - 1.0).abs() < 1e-12);
        assert!(bf.b()[1].norm() > 0.99);
    }

    #[test]
    fn beats_random_directions() {
        let cfg = SystemConfig { n_t: 3, n_r: 2, n_e: 2, n_s: 5, alpha: 0.8, beta: 0.8, rho: 4.0, sigma2: 1.0, sigma_e2: 1.0, r_s: 1.5 };
        let ch = ChannelSet::rayleigh(&cfg, 17).unwrap();
        let q = PhaseVector::random(5, 17, 3);
        let sub = SubproblemMatrices::new(&cfg, &ch, &q).unwrap();
        let bf = optimal_beamformer(&sub, cfg.beta).unwrap();
        let best = sub.ratio(bf.b(), cfg.beta);
        for s in 0..5000 {
            let v = random_unit_vector(3, 99, s).unwrap();
            assert!(sub.ratio(&v, cfg.beta) <= best + 1e-9);
        }
    }

    #[test]
    fn phase_convention_holds() {
        let cfg = SystemConfig { n_t: 4, n_r: 3, n_e: 2, n_s: 6, alpha: 0.8, beta: 0.8, rho: 4.0, sigma2: 1.0, sigma_e2: 1.0, r_s: 1.5 };
        let ch = ChannelSet::rayleigh(&cfg, 5).unwrap();
        let sub = SubproblemMatrices::new(&cfg, &ch, &PhaseVector::ones(6)).unwrap();
        let b = optimal_beamformer(&sub, cfg.beta).unwrap();
        let first = b.b().iter().find(|z| z.norm() > 1e-8).unwrap();
        assert!(first.im.abs() < 1e-12 && first.re > 0.0);
    }
}
