use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::stiefel::{Mat, StiefelPoint};

/// Standard Gaussian `n×r` matrix drawn from a seeded ChaCha8 stream.
pub fn random_gaussian(n: usize, r: usize, seed: u64) -> Mat {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // fill row by row so the stream order does not depend on storage layout
    let mut m = Mat::zeros(n, r);
    for i in 0..n {
        for j in 0..r {
            m[(i, j)] = StandardNormal.sample(&mut rng);
        }
    }
    m
}

/// Q-factor of a seeded Gaussian draw.
///
/// # Panics
/// If `r == 0` or `r > n`.
pub fn random_stiefel_start(n: usize, r: usize, seed: u64) -> StiefelPoint {
    assert!(r >= 1 && r <= n, "need 1 <= r <= n, got n={n}, r={r}");
    // a Gaussian draw is full rank with probability one; redraw on the
    // measure-zero failure
    let mut s = seed;
    loop {
        if let Ok(p) = StiefelPoint::orthonormalize(&random_gaussian(n, r, s)) {
            return p;
        }
        s = s.wrapping_add(0x9E37_79B9_7F4A_7C15);
    }
}

/// `|G|` with unit-norm columns for a seeded Gaussian `G`.
///
/// Orthonormal only when the column supports happen to be disjoint (always
/// the case for `r = 1`).
pub fn nonneg_start(n: usize, r: usize, seed: u64) -> Mat {
    let mut m = random_gaussian(n, r, seed).abs();
    for mut col in m.column_iter_mut() {
        let nrm = col.norm();
        if nrm > 0.0 {
            col /= nrm;
        }
    }
    m
}
