//! Seeded sampling of frames, subspaces and matrices.

use nalgebra::DMatrix;
use num::{BigInt, BigRational, Complex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::angles::Subspace;
use crate::grassmann::{C64, QC};

/// Default seed for every randomized suite.
pub const DEFAULT_SEED: u64 = 0xDE7C0C1;

/// Independent generator for `(seed, stream)`; each trial of a suite uses its
/// own stream so that a single trial can be replayed in isolation.
pub fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn gaussian_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

pub fn complex_gaussian<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> DMatrix<C64> {
    DMatrix::from_fn(rows, cols, |_, _| {
        Complex::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// Uniformly distributed subspace of the given dimension.
pub fn subspace<R: Rng>(rng: &mut R, ambient_dim: usize, dim: usize) -> Subspace {
    loop {
        if let Ok(s) = Subspace::from_columns(&gaussian_matrix(rng, ambient_dim, dim)) {
            return s;
        }
    }
}

/// Haar-distributed orthogonal matrix (QR of a Gaussian matrix with the
/// signs of `R`'s diagonal absorbed into `Q`).
pub fn orthogonal<R: Rng>(rng: &mut R, n: usize) -> DMatrix<f64> {
    let qr = gaussian_matrix(rng, n, n).qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

/// Complex rational matrix with integer parts drawn from `-bound..=bound`.
pub fn integer_complex_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, bound: i64) -> DMatrix<QC> {
    DMatrix::from_fn(rows, cols, |_, _| {
        let re = rng.random_range(-bound..=bound);
        let im = rng.random_range(-bound..=bound);
        Complex::new(
            BigRational::from_integer(BigInt::from(re)),
            BigRational::from_integer(BigInt::from(im)),
        )
    })
}
