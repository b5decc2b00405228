use super::check_shape;
use crate::error::{Error, Result};
use crate::objective::Objective;
use crate::solvers::{round_to_feasible, solve, AlmConfig, PenaltyConfig, SolverKind};
use crate::stiefel::{Mat, StiefelPoint};

/// Data matrix `A ≥ 0` (rows are samples) and a cluster count `r`.
#[derive(Debug, Clone, PartialEq)]
pub struct OnmfInstance {
    pub a: Mat,
    pub r: usize,
}

impl OnmfInstance {
    pub fn new(a: Mat, r: usize) -> Result<Self> {
        if r == 0 || r > a.nrows() {
            return Err(Error::Input(format!(
                "cluster count must be in 1..={}, got {r}",
                a.nrows()
            )));
        }
        if a.iter().any(|&v| !(v >= 0.0) || !v.is_finite()) {
            return Err(Error::Input("ONMF data must be finite and nonnegative".into()));
        }
        Ok(Self { a, r })
    }

    /// `‖A − XYᵀ‖²_F`.
    pub fn residual(&self, x: &Mat, y: &Mat) -> f64 {
        (&self.a - x * y.transpose()).norm_squared()
    }

    /// Deterministic start: farthest-point seeding on the normalized rows of
    /// `A`, each row joining its nearest seed, columns normalized.
    pub fn farthest_point_start(&self) -> Result<StiefelPoint> {
        let (n, _) = self.a.shape();
        let rows: Vec<_> = self
            .a
            .row_iter()
            .map(|row| {
                let nrm = row.norm();
                if nrm > 0.0 { row / nrm } else { row.into_owned() }
            })
            .collect();
        let mut seeds = vec![(0..n)
            .max_by(|&i, &j| self.a.row(i).norm().total_cmp(&self.a.row(j).norm()))
            .unwrap_or(0)];
        let dist = |i: usize, s: usize| (&rows[i] - &rows[s]).norm();
        while seeds.len() < self.r {
            let next = (0..n)
                .max_by(|&i, &j| {
                    let di = seeds.iter().map(|&s| dist(i, s)).fold(f64::INFINITY, f64::min);
                    let dj = seeds.iter().map(|&s| dist(j, s)).fold(f64::INFINITY, f64::min);
                    di.total_cmp(&dj).then(j.cmp(&i))
                })
                .unwrap_or(0);
            seeds.push(next);
        }
        let mut x = Mat::zeros(n, self.r);
        for i in 0..n {
            let mut best = 0;
            for k in 1..self.r {
                if dist(i, seeds[k]) < dist(i, seeds[best]) {
                    best = k;
                }
            }
            x[(i, best)] = 1.0;
        }
        round_to_feasible(&x)
    }
}

/// `max(0, AᵀX(XᵀX)⁻¹)`.
pub fn onmf_y_update(a: &Mat, x: &Mat) -> Result<Mat> {
    let gram = x.tr_mul(x);
    let inv = gram
        .try_inverse()
        .ok_or_else(|| Error::Input("XᵀX is singular".into()))?;
    Ok((a.tr_mul(x) * inv).map(|v| v.max(0.0)))
}

/// `X ↦ ‖A − XYᵀ‖²_F` for fixed `Y`.
#[derive(Debug, Clone, Copy)]
pub struct OnmfSubproblem<'a> {
    pub a: &'a Mat,
    pub y: &'a Mat,
}

impl Objective for OnmfSubproblem<'_> {
    fn shape(&self) -> (usize, usize) {
        (self.a.nrows(), self.y.ncols())
    }

    fn value(&self, x: &Mat) -> f64 {
        (self.a - x * self.y.transpose()).norm_squared()
    }

    fn gradient(&self, x: &Mat) -> Mat {
        (x * self.y.transpose() - self.a) * self.y * 2.0
    }

    fn value_grad(&self, x: &Mat) -> (f64, Mat) {
        let resid = x * self.y.transpose() - self.a;
        (resid.norm_squared(), resid * self.y * 2.0)
    }

    fn hessian_vec(&self, _x: &Mat, h: &Mat) -> Mat {
        h * self.y.tr_mul(self.y) * 2.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OnmfConfig {
    pub solver: SolverKind,
    pub penalty: PenaltyConfig,
    pub alm: AlmConfig,
    pub max_alternations: usize,
    /// Stop once the relative change of the residual falls to this level.
    pub rel_tol: f64,
}

impl Default for OnmfConfig {
    fn default() -> Self {
        Self {
            solver: SolverKind::SeppgPlus,
            penalty: PenaltyConfig::seppg_plus(),
            alm: AlmConfig::default(),
            max_alternations: 100,
            rel_tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone)]
pub struct OnmfOutput {
    pub x: StiefelPoint,
    pub y: Mat,
    /// `‖A − XYᵀ‖²_F` at the start and after every alternation.
    pub history: Vec<f64>,
    /// Cluster of each row of `A`, 1-based (argmax of the row of `X`).
    pub labels: Vec<usize>,
}

/// Alternating minimization: exact `Y`-step for orthonormal `X`, then an
/// `X`-step with the configured solver on `‖A − XYᵀ‖²_F`. The `X`-step result
/// is rounded onto the feasible set and kept only if it does not increase the
/// residual.
pub fn onmf_alternate(inst: &OnmfInstance, x0: &StiefelPoint, cfg: &OnmfConfig) -> Result<OnmfOutput> {
    check_shape((inst.a.nrows(), inst.r), x0.mat())?;
    let mut x = x0.clone();
    let mut y = onmf_y_update(&inst.a, x.mat())?;
    let mut res = inst.residual(x.mat(), &y);
    let mut history = vec![res];

    for _ in 0..cfg.max_alternations {
        let sub = OnmfSubproblem { a: &inst.a, y: &y };
        let report = solve(cfg.solver, &sub, &x, &cfg.penalty, &cfg.alm)?;
        let candidate = report.x_rounded.unwrap_or(report.x_final);
        let y_new = onmf_y_update(&inst.a, candidate.mat())?;
        let res_new = inst.residual(candidate.mat(), &y_new);
        if res_new > res {
            break;
        }
        let change = (res - res_new) / res.max(f64::MIN_POSITIVE);
        x = candidate;
        y = y_new;
        res = res_new;
        history.push(res);
        if change <= cfg.rel_tol {
            break;
        }
    }

    let labels = x
        .mat()
        .row_iter()
        .map(|row| {
            let mut best = 0;
            for j in 1..row.len() {
                if row[j] > row[best] {
                    best = j;
                }
            }
            best + 1
        })
        .collect();
    Ok(OnmfOutput { x, y, history, labels })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::random_stiefel_start;

    fn planted() -> (Mat, Mat) {
        let s = 1.0 / 2f64.sqrt();
        let x = Mat::from_row_slice(4, 2, &[s, 0.0, 0.0, s, s, 0.0, 0.0, s]);
        let y = Mat::from_row_slice(3, 2, &[1.0, 0.0, 2.0, 1.0, 0.0, 3.0]);
        (x, y)
    }

    #[test]
    fn y_update_reduces_to_clamped_projection_for_orthonormal_x() {
        let x = random_stiefel_start(6, 2, 4);
        let a = crate::problems::random_gaussian(6, 3, 5).abs();
        let y = onmf_y_update(&a, x.mat()).unwrap();
        let direct = a.tr_mul(x.mat()).map(|v| v.max(0.0));
        assert!((y - direct).norm() < 1e-12);
    }

    #[test]
    fn planted_start_is_a_fixed_point() {
        let (xs, ys) = planted();
        let inst = OnmfInstance::new(&xs * ys.transpose(), 2).unwrap();
        let x0 = StiefelPoint::new(xs.clone()).unwrap();
        let out = onmf_alternate(&inst, &x0, &OnmfConfig::default()).unwrap();
        assert!(out.history[0] < 1e-24);
        assert!(*out.history.last().unwrap() < 1e-20);
        assert_eq!(out.labels, vec![1, 2, 1, 2]);
    }

    #[test]
    fn rejects_negative_data() {
        assert!(OnmfInstance::new(Mat::from_element(3, 2, -1.0), 2).is_err());
        assert!(OnmfInstance::new(Mat::from_element(3, 2, 1.0), 4).is_err());
    }
}
