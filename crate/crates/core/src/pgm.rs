//! Nonmonotone line-search proximal gradient method on `St(n, r)`.
//!
//! Each iteration takes `V = −t · grad Θ(X)`, retracts with QR and shrinks
//! `t ← ηt` until
//!
//! ```text
//! Θ(R_X(V)) ≤ max_{j = k−m..k} Θ(X^j) − (α / 2t) ‖V‖²_F
//! ```
//!
//! The trial step comes from the Barzilai–Borwein rule applied to successive
//! iterates and Riemannian gradients.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};
use crate::objective::Objective;
use crate::stiefel::{inner, proj_tangent_raw, qr_positive, Mat, StiefelPoint};

/// Tunables of the inner solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PgmConfig {
    /// Backtracking shrink factor, in (0, 1).
    pub eta: f64,
    /// Sufficient-decrease constant.
    pub alpha: f64,
    /// Nonmonotone window length `m`; `0` gives a monotone method.
    pub memory: usize,
    pub t_min: f64,
    pub t_max: f64,
    /// Stop once `‖grad Θ‖_F ≤ grad_tol`.
    pub grad_tol: f64,
    pub max_iters: usize,
    pub max_backtracks: usize,
}

impl Default for PgmConfig {
    fn default() -> Self {
        Self {
            eta: 0.1,
            alpha: 1e-4,
            memory: 5,
            t_min: 1e-12,
            t_max: 1e12,
            grad_tol: 1e-6,
            max_iters: 5000,
            max_backtracks: 50,
        }
    }
}

impl PgmConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.eta > 0.0 && self.eta < 1.0) {
            return Err(Error::Parameter(format!("eta must lie in (0,1), got {}", self.eta)));
        }
        if !(self.alpha > 0.0) {
            return Err(Error::Parameter(format!("alpha must be > 0, got {}", self.alpha)));
        }
        if !(self.t_min > 0.0 && self.t_min <= self.t_max && self.t_max.is_finite()) {
            return Err(Error::Parameter(format!(
                "need 0 < t_min <= t_max, got [{}, {}]",
                self.t_min, self.t_max
            )));
        }
        if !(self.grad_tol > 0.0) {
            return Err(Error::Parameter("grad_tol must be > 0".into()));
        }
        if self.max_iters == 0 || self.max_backtracks == 0 {
            return Err(Error::Parameter("iteration caps must be positive".into()));
        }
        Ok(())
    }

    fn clamp_step(&self, t: f64) -> f64 {
        t.max(self.t_min).min(self.t_max)
    }
}

/// One accepted iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PgmRecord {
    /// `Θ(X^{k+1})`.
    pub value: f64,
    /// `‖V^k‖_F`.
    pub v_norm: f64,
    /// Accepted step `t_k`.
    pub step: f64,
    pub backtracks: usize,
    /// `Θ(X^{ℓ(k+1)})`, the window maximum including the new iterate.
    pub window_max: f64,
    /// `sqrt(Θ(X^{ℓ(k+1)}) − Θ(X^{k+1}))`, the nonmonotonicity summand.
    pub nonmonotone_gap: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PgmTrace {
    pub initial_value: f64,
    pub records: Vec<PgmRecord>,
}

impl PgmTrace {
    pub fn iterations(&self) -> usize {
        self.records.len()
    }

    /// Whether `Θ(X^{ℓ(k)})` never increases along the trace.
    pub fn window_max_nonincreasing(&self) -> bool {
        let mut prev = self.initial_value;
        for r in &self.records {
            if r.window_max > prev {
                return false;
            }
            prev = r.window_max;
        }
        true
    }

    pub fn final_v_norm(&self) -> Option<f64> {
        self.records.last().map(|r| r.v_norm)
    }
}

/// Result of a completed inner solve.
#[derive(Debug, Clone)]
pub struct PgmOutput {
    pub x: StiefelPoint,
    pub value: f64,
    /// `‖grad Θ(x)‖_F` at the returned point.
    pub grad_norm: f64,
    /// `true` when `grad_norm ≤ grad_tol`; `false` after hitting `max_iters`.
    pub converged: bool,
    pub trace: PgmTrace,
}

/// A failed inner solve, with everything computed up to the failure.
#[derive(Debug, Clone)]
pub struct PgmFailure {
    pub error: Error,
    pub x_last: StiefelPoint,
    pub trace: PgmTrace,
}

impl fmt::Display for PgmFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} after {} iterations", self.error, self.trace.iterations())
    }
}

impl std::error::Error for PgmFailure {}

/// Barzilai–Borwein step clamped to `[t_min, t_max]`.
///
/// Falls back to `clamp(fallback)` when `⟨ΔX, ΔY⟩` vanishes relative to
/// `‖ΔX‖‖ΔY‖` or `ΔY = 0`.
pub fn bb_stepsize(dx: &Mat, dy: &Mat, t_min: f64, t_max: f64, fallback: f64) -> f64 {
    let clamp = |t: f64| t.min(t_max).max(t_min);
    let sxy = inner(dx, dy).abs();
    let sxx = dx.norm_squared();
    let syy = dy.norm_squared();
    if syy == 0.0 || !(sxy >= 1e-16 * (sxx * syy).sqrt()) || sxy == 0.0 {
        return clamp(fallback);
    }
    let t = (sxx / sxy).min(sxy / syy);
    if t.is_finite() {
        clamp(t)
    } else {
        clamp(fallback)
    }
}

/// Outcome of a single line-search step.
#[derive(Debug, Clone)]
pub struct PgmStep {
    pub x: StiefelPoint,
    pub value: f64,
    pub step: f64,
    pub v: Mat,
    pub backtracks: usize,
}

/// One iteration of the method from `x` with Riemannian gradient `rgrad`.
///
/// A trial whose retraction fails counts as a rejected trial.
pub fn pgm_step<F: Objective + ?Sized>(
    obj: &F,
    x: &StiefelPoint,
    rgrad: &Mat,
    t_init: f64,
    window_max: f64,
    cfg: &PgmConfig,
) -> Result<PgmStep> {
    if rgrad.shape() != x.shape() {
        return Err(Error::dim(x.shape(), rgrad.shape()));
    }
    if rgrad.iter().all(|&g| g == 0.0) {
        return Ok(PgmStep {
            x: x.clone(),
            value: obj.value(x.mat()),
            step: t_init,
            v: Mat::zeros(x.nrows(), x.ncols()),
            backtracks: 0,
        });
    }
    let g2 = rgrad.norm_squared();
    let mut t = t_init;
    for backtracks in 0..=cfg.max_backtracks {
        let v = rgrad * (-t);
        // ‖V‖² / (2t) = t‖g‖²/2
        let target = window_max - cfg.alpha * 0.5 * t * g2;
        if let Ok(q) = qr_positive(&(x.mat() + &v)) {
            let value = obj.value(&q);
            if value <= target {
                return Ok(PgmStep {
                    x: StiefelPoint::new(q)?,
                    value,
                    step: t,
                    v,
                    backtracks,
                });
            }
        }
        if backtracks < cfg.max_backtracks {
            t *= cfg.eta;
        }
    }
    Err(Error::LineSearchFailure {
        backtracks: cfg.max_backtracks,
        step: t,
    })
}

struct Window {
    values: VecDeque<f64>,
    cap: usize,
}

impl Window {
    fn new(memory: usize, first: f64) -> Self {
        let mut values = VecDeque::with_capacity(memory + 1);
        values.push_back(first);
        Self {
            values,
            cap: memory + 1,
        }
    }

    fn push(&mut self, v: f64) {
        if self.values.len() == self.cap {
            self.values.pop_front();
        }
        self.values.push_back(v);
    }

    fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Minimizes `obj` over `St(n, r)` from `x0` until `‖grad‖_F ≤ cfg.grad_tol`.
///
/// After `max_iters` iterations without reaching the tolerance, the iterate
/// with the lowest objective value is returned with `converged = false`.
pub fn pgm_solve<F: Objective + ?Sized>(
    obj: &F,
    x0: &StiefelPoint,
    cfg: &PgmConfig,
) -> std::result::Result<PgmOutput, PgmFailure> {
    let fail = |error: Error, x: &StiefelPoint, trace: PgmTrace| PgmFailure {
        error,
        x_last: x.clone(),
        trace,
    };
    if let Err(e) = cfg.validate() {
        return Err(fail(e, x0, PgmTrace::default()));
    }
    if obj.shape() != x0.shape() {
        return Err(fail(Error::dim(obj.shape(), x0.shape()), x0, PgmTrace::default()));
    }

    let mut x = x0.clone();
    let (mut value, egrad) = obj.value_grad(x.mat());
    let mut rgrad = proj_tangent_raw(x.mat(), &egrad);
    let mut gnorm = rgrad.norm();
    let mut trace = PgmTrace {
        initial_value: value,
        records: Vec::new(),
    };
    if !value.is_finite() {
        return Err(fail(
            Error::Input("objective is not finite at the starting point".into()),
            &x,
            trace,
        ));
    }
    if gnorm <= cfg.grad_tol {
        return Ok(PgmOutput {
            x,
            value,
            grad_norm: gnorm,
            converged: true,
            trace,
        });
    }

    let mut window = Window::new(cfg.memory, value);
    let mut best = (value, x.clone(), gnorm);
    let mut t = cfg.clamp_step(1.0 / gnorm);

    for _ in 0..cfg.max_iters {
        let step = match pgm_step(obj, &x, &rgrad, t, window.max(), cfg) {
            Ok(s) => s,
            Err(e) => return Err(fail(e, &x, trace)),
        };
        let v_norm = step.v.norm();
        let accepted = step.step;

        let (new_value, new_egrad) = obj.value_grad(step.x.mat());
        let new_rgrad = proj_tangent_raw(step.x.mat(), &new_egrad);
        let dx = step.x.mat() - x.mat();
        let dy = &new_rgrad - &rgrad;

        window.push(new_value);
        let wmax = window.max();
        trace.records.push(PgmRecord {
            value: new_value,
            v_norm,
            step: step.step,
            backtracks: step.backtracks,
            window_max: wmax,
            nonmonotone_gap: (wmax - new_value).max(0.0).sqrt(),
        });

        x = step.x;
        value = new_value;
        rgrad = new_rgrad;
        gnorm = rgrad.norm();
        if value < best.0 {
            best = (value, x.clone(), gnorm);
        }
        if gnorm <= cfg.grad_tol {
            return Ok(PgmOutput {
                x,
                value,
                grad_norm: gnorm,
                converged: true,
                trace,
            });
        }
        t = bb_stepsize(&dx, &dy, cfg.t_min, cfg.t_max, accepted);
    }

    let (value, x, grad_norm) = best;
    Ok(PgmOutput {
        x,
        value,
        grad_norm,
        converged: false,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(v: &[f64]) -> Mat {
        Mat::from_row_slice(1, v.len(), v)
    }

    #[test]
    fn bb_equal_differences_give_unit_step() {
        let d = Mat::from_row_slice(2, 2, &[1.0, -2.0, 0.5, 3.0]);
        assert!((bb_stepsize(&d, &d, 1e-12, 1e12, 7.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn bb_takes_the_smaller_ratio() {
        let t = bb_stepsize(&row(&[1.0, 0.0]), &row(&[2.0, 0.0]), 1e-12, 1e12, 1.0);
        assert_eq!(t, 0.5);
    }

    #[test]
    fn bb_degenerate_inner_product_falls_back() {
        let t = bb_stepsize(&row(&[1.0, 0.0]), &row(&[0.0, 1.0]), 1e-12, 1e12, 1.0);
        assert_eq!(t, 1.0);
        let t = bb_stepsize(&row(&[1.0, 0.0]), &row(&[0.0, 0.0]), 1e-3, 1e3, 1e9);
        assert_eq!(t, 1e3);
    }

    #[test]
    fn bb_result_is_clamped() {
        let t = bb_stepsize(&row(&[1.0]), &row(&[1e-20]), 1e-12, 1e12, 1.0);
        assert_eq!(t, 1e12);
    }

    #[test]
    fn config_validation() {
        assert!(PgmConfig::default().validate().is_ok());
        let bad = PgmConfig {
            eta: 1.0,
            ..PgmConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = PgmConfig {
            t_min: 2.0,
            t_max: 1.0,
            ..PgmConfig::default()
        };
        assert!(bad.validate().is_err());
    }
}
