use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{dim_err, Result};
use crate::C64;

/// Counter-based generator: one independent ChaCha stream per `(seed, stream)` pair.
pub type StreamRng = ChaCha8Rng;

pub fn stream_rng(seed: u64, stream: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// SplitMix64 finalizer over `seed ^ tag`, used to give each experiment cell its own seed.
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    let mut z = seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// One CN(0, 1) draw: real and imaginary parts each N(0, 1/2).
pub(crate) fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Fills a `rows x cols` matrix in row-major order from `rng`.
pub(crate) fn rayleigh_from<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> DMatrix<C64> {
    let data: Vec<C64> = (0..rows * cols).map(|_| complex_normal(rng)).collect();
    DMatrix::from_row_slice(rows, cols, &data)
}

/// I.i.d. circularly-symmetric complex Gaussian matrix with unit per-entry variance.
///
/// Identical `(rows, cols, seed, stream)` always reproduce the identical matrix.
pub fn sample_rayleigh(rows: usize, cols: usize, seed: u64, stream: u64) -> Result<DMatrix<C64>> {
    if rows == 0 || cols == 0 {
        return Err(dim_err(format!("Rayleigh matrix must be non-empty, got {rows}x{cols}")));
    }
    Ok(rayleigh_from(rows, cols, &mut stream_rng(seed, stream)))
}

/// Uniformly distributed unit vector in C^n (normalized complex Gaussian).
pub fn random_unit_vector(n: usize, seed: u64, stream: u64) -> Result<DVector<C64>> {
    if n == 0 {
        return Err(dim_err("unit vector needs at least one entry"));
    }
    let mut rng = stream_rng(seed, stream);
    loop {
        let v = DVector::from_fn(n, |_, _| complex_normal(&mut rng));
        let norm = v.norm();
        if norm > 1e-300 {
            return Ok(v / C64::from(norm));
        }
    }
}
