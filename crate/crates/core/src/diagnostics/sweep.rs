use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};
use rayon::prelude::*;

use super::{brute_force_dist_splus, kappa};
use crate::error::Result;
use crate::stiefel::{dist_to_stiefel, Mat, StiefelPoint};

/// Absolute slack allowed when testing the error-bound inequality.
pub const HOLDS_SLACK: f64 = 1e-12;

/// One probe of `dist(X, S₊) ≤ (κ + 1)[dist(X, ℝ₊) + dist(X, St)]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorBoundSample {
    pub x: Mat,
    pub dist_splus: f64,
    pub dist_cone: f64,
    pub dist_st: f64,
    pub kappa: f64,
    pub holds: bool,
}

/// Evaluates every distance at `x` for a given `kappa`.
pub fn error_bound_sample(x: Mat, kappa: f64) -> Result<ErrorBoundSample> {
    let (dist_splus, _) = brute_force_dist_splus(&x)?;
    let dist_cone = x.iter().map(|&v| v.min(0.0).powi(2)).sum::<f64>().sqrt();
    let dist_st = dist_to_stiefel(&x);
    let holds = dist_splus <= (kappa + 1.0) * (dist_cone + dist_st) + HOLDS_SLACK;
    Ok(ErrorBoundSample {
        x,
        dist_splus,
        dist_cone,
        dist_st,
        kappa,
        holds,
    })
}

fn ball_point(center: &Mat, delta: f64, seed: u64) -> Mat {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (n, r) = center.shape();
    let mut dir = Mat::zeros(n, r);
    for v in dir.iter_mut() {
        *v = StandardNormal.sample(&mut rng);
    }
    let nrm = dir.norm();
    let u: f64 = Uniform::new(0.0, 1.0).expect("valid range").sample(&mut rng);
    let radius = delta * u.powf(1.0 / (n * r) as f64);
    center + dir * (radius / nrm)
}

/// Samples `num_samples` points uniformly in the Frobenius `delta`-ball
/// around `xbar` and evaluates the error bound with `κ = kappa(xbar)`.
///
/// Sample `i` is drawn from its own stream seeded with `seed ^ i`, so the
/// output does not depend on thread scheduling.
pub fn error_bound_sweep(
    xbar: &StiefelPoint,
    delta: f64,
    num_samples: usize,
    seed: u64,
) -> Result<Vec<ErrorBoundSample>> {
    let k = kappa(xbar)?;
    brute_force_dist_splus(xbar.mat())?;
    (0..num_samples)
        .into_par_iter()
        .map(|i| error_bound_sample(ball_point(xbar.mat(), delta, seed ^ i as u64), k))
        .collect()
}

/// CSV with one row per sample; `x` is written row-major with `;` separators.
pub fn write_samples_csv<W: Write>(samples: &[ErrorBoundSample], mut w: W) -> std::io::Result<()> {
    writeln!(w, "x,dist_splus,dist_cone,dist_st,kappa,holds")?;
    for s in samples {
        let mut xs = Vec::with_capacity(s.x.len());
        for i in 0..s.x.nrows() {
            for j in 0..s.x.ncols() {
                xs.push(format!("{:.16e}", s.x[(i, j)]));
            }
        }
        writeln!(
            w,
            "{},{:.16e},{:.16e},{:.16e},{:.16e},{}",
            xs.join(";"),
            s.dist_splus,
            s.dist_cone,
            s.dist_st,
            s.kappa,
            s.holds
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_lie_in_the_ball() {
        let c = Mat::from_element(3, 2, 0.5);
        for seed in 0..100 {
            assert!((ball_point(&c, 0.05, seed) - &c).norm() <= 0.05 + 1e-15);
        }
    }

    #[test]
    fn csv_shape() {
        let s = error_bound_sample(Mat::from_column_slice(2, 1, &[3.0, 4.0]), 1.0).unwrap();
        let mut buf = Vec::new();
        write_samples_csv(&[s], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[1].split(',').count(), 6);
        assert!(lines[1].ends_with("true"));
    }
}
