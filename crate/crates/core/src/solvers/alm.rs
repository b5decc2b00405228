use std::time::Instant;

use super::{OuterRecord, SolveReport, SolveStatus};
use crate::error::{Error, Result};
use crate::objective::Objective;
use crate::penalty::vartheta;
use crate::pgm::{pgm_solve, PgmConfig};
use crate::solvers::round::round_to_feasible;
use crate::stiefel::{Mat, StiefelPoint};

/// Tunables of the augmented Lagrangian baseline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlmConfig {
    /// Initial `μ`. `None` means `c0·|f(X⁰)|/ϑ(X⁰)` (or 1 if `ϑ(X⁰) = 0`).
    pub mu0: Option<f64>,
    pub c0: f64,
    /// Multiplicative update `μ ← growth·μ`.
    pub growth: f64,
    /// Upper bound on `μ`.
    pub mu_max: f64,
    pub epsilon: f64,
    pub max_outer: usize,
    /// Inner solver settings; `grad_tol` is the subproblem tolerance.
    pub pgm: PgmConfig,
}

impl Default for AlmConfig {
    fn default() -> Self {
        Self {
            mu0: None,
            c0: 0.1,
            growth: 1.2,
            mu_max: 1e10,
            epsilon: 1e-6,
            max_outer: 1000,
            pgm: PgmConfig {
                grad_tol: 1e-6,
                ..PgmConfig::default()
            },
        }
    }
}

impl AlmConfig {
    pub fn validate(&self) -> Result<()> {
        if let Some(m) = self.mu0 {
            if !(m > 0.0 && m.is_finite()) {
                return Err(Error::Parameter(format!("mu0 must be > 0, got {m}")));
            }
        }
        if !(self.growth > 1.0 && self.mu_max > 0.0 && self.epsilon > 0.0 && self.c0 > 0.0) {
            return Err(Error::Parameter("invalid ALM parameters".into()));
        }
        if self.max_outer == 0 {
            return Err(Error::Parameter("max_outer must be positive".into()));
        }
        self.pgm.validate()
    }
}

/// `L_μ(X, Λ) = f(X) + (μ/2)‖min(0, X − Λ/μ)‖²_F − ‖Λ‖²_F/(2μ)`.
#[derive(Debug, Clone)]
pub struct AugLagrangian<'a, F: ?Sized> {
    pub f: &'a F,
    pub lambda: Mat,
    pub mu: f64,
}

impl<F: Objective + ?Sized> AugLagrangian<'_, F> {
    fn shifted(&self, x: &Mat) -> Mat {
        x.zip_map(&self.lambda, |xv, lv| (xv - lv / self.mu).min(0.0))
    }
}

impl<F: Objective + ?Sized> Objective for AugLagrangian<'_, F> {
    fn shape(&self) -> (usize, usize) {
        self.f.shape()
    }

    fn value(&self, x: &Mat) -> f64 {
        self.f.value(x) + 0.5 * self.mu * self.shifted(x).norm_squared()
            - self.lambda.norm_squared() / (2.0 * self.mu)
    }

    fn gradient(&self, x: &Mat) -> Mat {
        self.value_grad(x).1
    }

    fn value_grad(&self, x: &Mat) -> (f64, Mat) {
        let (fv, fg) = self.f.value_grad(x);
        let s = self.shifted(x);
        let v = fv + 0.5 * self.mu * s.norm_squared() - self.lambda.norm_squared() / (2.0 * self.mu);
        (v, fg + s * self.mu)
    }
}

/// Augmented Lagrangian method with multiplier update `Λ ← max(Λ − μX, 0)`
/// and `μ ← 1.2μ`, starting from `Λ = 0`.
pub fn alm_solve<F: Objective + ?Sized>(
    f: &F,
    x0: &StiefelPoint,
    cfg: &AlmConfig,
) -> Result<SolveReport> {
    cfg.validate()?;
    if f.shape() != x0.shape() {
        return Err(Error::dim(f.shape(), x0.shape()));
    }
    let mut stationarity = f64::NAN;
    let clock = Instant::now();
    let (n, r) = x0.shape();
    let mut mu = match cfg.mu0 {
        Some(m) => m,
        None => {
            let th = vartheta(x0.mat());
            let m = if th > 0.0 { cfg.c0 * f.value(x0.mat()).abs() / th } else { 1.0 };
            if m > 0.0 && m.is_finite() { m } else { 1.0 }
        }
    }
    .min(cfg.mu_max);
    let mut lambda = Mat::zeros(n, r);
    let mut x = x0.clone();
    let mut trace = Vec::new();
    let mut inner_traces = Vec::new();
    let mut inner_total = 0;
    let mut flagged = false;
    let mut status = SolveStatus::MaxOuter;

    for _ in 0..cfg.max_outer {
        let lag = AugLagrangian {
            f,
            lambda: lambda.clone(),
            mu,
        };
        let upsilon = lag.value(x.mat());
        let out = match pgm_solve(&lag, &x, &cfg.pgm) {
            Ok(o) => o,
            Err(fail) => {
                inner_total += fail.trace.iterations();
                inner_traces.push(fail.trace);
                x = fail.x_last;
                status = SolveStatus::InnerFailure(fail.error);
                break;
            }
        };
        inner_total += out.trace.iterations();
        stationarity = out.grad_norm;
        x = out.x;
        flagged |= !out.converged;
        let th = vartheta(x.mat());
        trace.push(OuterRecord {
            rho: mu,
            tau: cfg.pgm.grad_tol,
            vartheta: th,
            f: f.value(x.mat()),
            upsilon,
            inner_value: out.value,
            inner_grad_norm: out.grad_norm,
            inner_iters: out.trace.iterations(),
            inner_ok: out.converged,
            rounded_warm_start: false,
        });
        inner_traces.push(out.trace);

        lambda = lambda.zip_map(x.mat(), |l, xv| (l - mu * xv).max(0.0));
        mu = (cfg.growth * mu).min(cfg.mu_max);
        if th <= cfg.epsilon {
            status = SolveStatus::Feasible;
            break;
        }
    }

    Ok(SolveReport {
        x_rounded: round_to_feasible(x.mat()).ok(),
        f_final: f.value(x.mat()),
        ninf: vartheta(x.mat()),
        orth_residual: x.orth_residual(),
        stationarity,
        outer_iters: trace.len().max(inner_traces.len()),
        inner_iters_total: inner_total,
        wall_time: clock.elapsed().as_secs_f64(),
        status,
        flagged,
        trace,
        inner_traces,
        x_final: x,
    })
}
