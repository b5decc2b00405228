use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::objective::Objective;
use crate::penalty::vartheta;
use crate::stiefel::{proj_tangent_raw, Mat, StiefelPoint};

/// Entries below this count as zero when building the normal cone.
const ZERO_ENTRY: f64 = 1e-8;
/// Default feasibility precondition, `5ε` with `ε = 1e-6`.
const DEFAULT_FEAS_TOL: f64 = 5e-6;
/// Outer active-set iterations per variable.
const MAX_OUTER: usize = 3;

/// `min_{G ∈ N(X)} ‖Proj_T(∇f(X) + G)‖_F` where `N(X)` is the normal cone
/// of the nonnegative orthant at `X`: `G ≤ 0` on the zero pattern of `X`,
/// `G = 0` elsewhere.
pub fn stationarity_residual<F: Objective + ?Sized>(f: &F, x: &StiefelPoint) -> Result<f64> {
    stationarity_residual_with_tol(f, x, DEFAULT_FEAS_TOL)
}

/// As [`stationarity_residual`] with an explicit bound on `ϑ(x)`.
pub fn stationarity_residual_with_tol<F: Objective + ?Sized>(
    f: &F,
    x: &StiefelPoint,
    feas_tol: f64,
) -> Result<f64> {
    if f.shape() != x.shape() {
        return Err(Error::dim(f.shape(), x.shape()));
    }
    let th = vartheta(x.mat());
    if th > feas_tol {
        return Err(Error::Precondition(format!(
            "stationarity needs a feasible point, but vartheta = {th:e} > {feas_tol:e}"
        )));
    }
    let g = f.gradient(x.mat());
    let b = proj_tangent_raw(x.mat(), &g);
    let zeros: Vec<(usize, usize)> = (0..x.ncols())
        .flat_map(|j| (0..x.nrows()).map(move |i| (i, j)))
        .filter(|&(i, j)| x.mat()[(i, j)] < ZERO_ENTRY)
        .collect();
    if zeros.is_empty() {
        return Ok(b.norm());
    }
    // G = −Σ u_k E_k with u ≥ 0, so the residual is ‖b − Σ u_k P(E_k)‖
    let (n, r) = x.shape();
    let mut m = DMatrix::zeros(n * r, zeros.len());
    for (k, &(i, j)) in zeros.iter().enumerate() {
        let mut e = Mat::zeros(n, r);
        e[(i, j)] = 1.0;
        m.set_column(k, &DVector::from_column_slice(proj_tangent_raw(x.mat(), &e).as_slice()));
    }
    let bv = DVector::from_column_slice(b.as_slice());
    let u = nnls(&m, &bv);
    Ok((&bv - &m * u).norm())
}

/// Lawson–Hanson active-set solver for `min ‖Mu − b‖` subject to `u ≥ 0`.
fn nnls(m: &DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    let k = m.ncols();
    let tol = 1e-12 * (1.0 + m.norm() * b.norm());
    let mut u = DVector::zeros(k);
    let mut passive = vec![false; k];
    for _ in 0..MAX_OUTER * k.max(1) {
        let w = m.tr_mul(&(b - m * &u));
        let Some(enter) = (0..k).filter(|&j| !passive[j] && w[j] > tol).max_by(|&a, &c| w[a].total_cmp(&w[c]))
        else {
            break;
        };
        passive[enter] = true;
        loop {
            let s = passive_lstsq(m, b, &passive);
            if (0..k).all(|j| !passive[j] || s[j] > 0.0) {
                u = s;
                break;
            }
            let alpha = (0..k)
                .filter(|&j| passive[j] && s[j] <= 0.0)
                .map(|j| u[j] / (u[j] - s[j]))
                .fold(f64::INFINITY, f64::min);
            u += (&s - &u) * alpha;
            for j in 0..k {
                if passive[j] && u[j] <= tol {
                    passive[j] = false;
                    u[j] = 0.0;
                }
            }
            if !passive.iter().any(|&p| p) {
                break;
            }
        }
    }
    u
}

/// Unconstrained least squares on the passive columns, zero elsewhere.
fn passive_lstsq(m: &DMatrix<f64>, b: &DVector<f64>, passive: &[bool]) -> DVector<f64> {
    let cols: Vec<usize> = (0..passive.len()).filter(|&j| passive[j]).collect();
    let sub = m.select_columns(&cols);
    let sol = sub
        .svd(true, true)
        .solve(b, 1e-12)
        .unwrap_or_else(|_| DVector::zeros(cols.len()));
    let mut s = DVector::zeros(passive.len());
    for (c, &j) in cols.iter().enumerate() {
        s[j] = sol[c];
    }
    s
}
