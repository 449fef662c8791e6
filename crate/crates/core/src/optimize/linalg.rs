use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::C64;

/// Components below this magnitude are skipped when fixing an eigenvector's phase.
const SIGNIFICANT: f64 = 1e-8;

/// Rotates `v` so its first component with magnitude above 1e-8 is real positive.
pub(crate) fn fix_phase(mut v: DVector<C64>) -> DVector<C64> {
    if let Some(z) = v.iter().find(|z| z.norm() > SIGNIFICANT).copied() {
        let rot = z.conj() / z.norm();
        v *= rot;
    }
    v
}

pub(crate) fn hermitian_part(m: &DMatrix<C64>) -> DMatrix<C64> {
    (m + m.adjoint()) * C64::from(0.5)
}

/// Largest eigenvalue and its unit eigenvector (phase-normalized) of a Hermitian matrix.
pub(crate) fn hermitian_top_eigen(m: &DMatrix<C64>) -> Result<(f64, DVector<C64>)> {
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Numerical("eigenproblem has non-finite entries".into()));
    }
    let eig = hermitian_part(m).symmetric_eigen();
    let (idx, lambda) = eig
        .eigenvalues
        .iter()
        .copied()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .ok_or_else(|| Error::Numerical("empty eigenproblem".into()))?;
    let v = eig.eigenvectors.column(idx).into_owned();
    let norm = v.norm();
    Ok((lambda, fix_phase(v / C64::from(norm))))
}

/// `x^H A x` for Hermitian `A` (imaginary round-off dropped).
pub(crate) fn quad_form(a: &DMatrix<C64>, x: &DVector<C64>) -> f64 {
    x.dotc(&(a * x)).re
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phase_convention() {
        let v = DVector::from_vec(vec![C64::new(0.0, 1e-10), C64::new(0.0, -2.0), C64::new(1.0, 1.0)]);
        let w = fix_phase(v);
        assert!(w[1].im.abs() < 1e-15 && w[1].re > 0.0);
    }

    #[test]
    fn top_eigen_of_diagonal() {
        let m = DMatrix::from_diagonal(&DVector::from_vec(vec![C64::from(1.0), C64::from(5.0), C64::from(2.0)]));
        let (l, v) = hermitian_top_eigen(&m).unwrap();
        assert!((l - 5.0).abs() < 1e-12);
        assert!((v[1] - C64::from(1.0)).norm() < 1e-12);
    }
}
