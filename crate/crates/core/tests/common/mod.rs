#![allow(dead_code)]

use nnorth::problems::{random_gaussian, AffinityInstance, QapInstance};
use nnorth::stiefel::Mat;
use nnorth::Objective;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Central differences of `f.value` at `x`, entry by entry.
pub fn fd_gradient(f: &dyn Objective, x: &Mat, h: f64) -> Mat {
    let mut g = Mat::zeros(x.nrows(), x.ncols());
    for i in 0..x.nrows() {
        for j in 0..x.ncols() {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[(i, j)] += h;
            xm[(i, j)] -= h;
            g[(i, j)] = (f.value(&xp) - f.value(&xm)) / (2.0 * h);
        }
    }
    g
}

pub fn rel_err(a: &Mat, b: &Mat) -> f64 {
    (a - b).norm() / b.norm().max(1e-12)
}

/// Moves entries within `margin` of a kink (0 or −γ) out of that neighbourhood.
pub fn avoid_kinks(x: &Mat, gamma: f64, margin: f64) -> Mat {
    x.map(|v| {
        let mut v = v;
        for k in [0.0, -gamma] {
            if (v - k).abs() < margin {
                v = k + 2.0 * margin.copysign(v - k);
            }
        }
        v
    })
}

/// Random `n×n` QAP with integer entries in `0..10` and zero diagonals.
pub fn random_qap(n: usize, seed: u64) -> QapInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = || Mat::from_fn(n, n, |i, j| if i == j { 0.0 } else { rng.random_range(0..10) as f64 });
    let (a, b) = (m(), m());
    QapInstance::new(format!("rand{n}_{seed}"), a, b).unwrap()
}

pub fn random_affinity(n: usize, seed: u64) -> AffinityInstance {
    let k = random_gaussian(n * n, n * n, seed).abs();
    AffinityInstance::new(n, k).unwrap()
}

pub fn is_permutation(x: &Mat) -> bool {
    x.iter().all(|&v| v == 0.0 || v == 1.0)
        && x.row_iter().all(|r| r.sum() == 1.0)
        && x.column_iter().all(|c| c.sum() == 1.0)
}
