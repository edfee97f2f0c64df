//! Shared fixtures for the kernel benchmarks.

use ndarray::Array2;
use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

/// Dense random Hermitian matrix with standard-normal entries.
pub fn random_hermitian(n: usize, seed: u64) -> Array2<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Array2::<Complex64>::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            g[[i, j]] = Complex64::new(
                rng.sample(rand_distr::StandardNormal),
                rng.sample(rand_distr::StandardNormal),
            );
        }
    }
    let mut h = Array2::<Complex64>::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            h[[i, j]] = (g[[i, j]] + g[[j, i]].conj()) * 0.5;
        }
    }
    h
}
