use std::time::Instant;

use super::{OuterRecord, PenaltyConfig, SolveReport, SolveStatus};
use crate::error::{Error, Result};
use crate::objective::Objective;
use crate::penalty::{vartheta, Penalized, PenaltyParams};
use crate::pgm::{pgm_solve, PgmConfig};
use crate::solvers::round::round_to_feasible;
use crate::stiefel::StiefelPoint;

/// Outer iterations spanned by the `f`-stagnation test.
const STAGNATION_LAG: usize = 9;

/// `ρ₀`: the configured value, else `c0·|f(X⁰)|/ϑ(X⁰)` (1 when that is not
/// a positive finite number).
pub fn initial_rho<F: Objective + ?Sized>(f: &F, x0: &StiefelPoint, cfg: &PenaltyConfig) -> f64 {
    let rho = match cfg.rho0 {
        Some(r) => r,
        None => {
            let th = vartheta(x0.mat());
            if th > 0.0 {
                cfg.c0 * f.value(x0.mat()).abs() / th
            } else {
                1.0
            }
        }
    };
    let rho = if rho > 0.0 && rho.is_finite() { rho } else { 1.0 };
    rho.min(cfg.rho_max)
}

/// Penalty method: minimize `Θ_{ρ_l,γ}` over `St(n, r)` for an increasing
/// sequence `ρ_l`, warm-starting each subproblem from the previous solution
/// or its rounded feasible counterpart.
pub fn seppg_solve<F: Objective + ?Sized>(
    f: &F,
    x0: &StiefelPoint,
    cfg: &PenaltyConfig,
) -> Result<SolveReport> {
    cfg.validate()?;
    if f.shape() != x0.shape() {
        return Err(Error::dim(f.shape(), x0.shape()));
    }
    let mut stationarity = f64::NAN;
    let clock = Instant::now();

    let mut rho = initial_rho(f, x0, cfg);
    let mut tau = cfg.tau0;
    let mut start = x0.clone();
    let mut upsilon = Penalized::new(f, PenaltyParams::new(rho, cfg.gamma)?).value(x0.mat());

    let mut trace = Vec::new();
    let mut inner_traces = Vec::new();
    let mut f_hist: Vec<f64> = Vec::new();
    let mut inner_total = 0;
    let mut flagged = false;
    let mut status = SolveStatus::MaxOuter;
    let mut x = x0.clone();

    for _ in 0..cfg.l_max {
        let theta = Penalized::new(f, PenaltyParams::new(rho, cfg.gamma)?);
        let pcfg = PgmConfig {
            grad_tol: tau,
            ..cfg.pgm
        };
        let out = match pgm_solve(&theta, &start, &pcfg) {
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
        let inner_ok = out.converged && out.value <= upsilon;
        flagged |= !inner_ok;

        let th = vartheta(x.mat());
        let fx = f.value(x.mat());
        f_hist.push(fx);
        let mut record = OuterRecord {
            rho,
            tau,
            vartheta: th,
            f: fx,
            upsilon,
            inner_value: out.value,
            inner_grad_norm: out.grad_norm,
            inner_iters: out.trace.iterations(),
            inner_ok,
            rounded_warm_start: false,
        };
        inner_traces.push(out.trace);

        if th <= cfg.epsilon {
            trace.push(record);
            status = SolveStatus::Feasible;
            break;
        }
        if th <= 5.0 * cfg.epsilon && f_hist.len() > STAGNATION_LAG {
            let old = f_hist[f_hist.len() - 1 - STAGNATION_LAG];
            if (fx - old).abs() / (1.0 + fx.abs()) <= 1e-8 {
                trace.push(record);
                status = SolveStatus::Stagnated;
                break;
            }
        }

        let rho_next = (cfg.sigma_rho(rho) * rho).min(cfg.rho_max);
        tau = (cfg.sigma_tau * tau).max(cfg.tau_min);
        let next = Penalized::new(f, PenaltyParams::new(rho_next, cfg.gamma)?);
        let theta_x = next.value(x.mat());
        start = x.clone();
        upsilon = theta_x;
        if rho >= cfg.rho_feas_threshold {
            if let Ok(xt) = round_to_feasible(x.mat()) {
                let theta_t = next.value(xt.mat());
                if theta_t < theta_x {
                    start = xt;
                    upsilon = theta_t;
                    record.rounded_warm_start = true;
                }
            }
        }
        trace.push(record);
        rho = rho_next;
    }

    let ninf = vartheta(x.mat());
    Ok(SolveReport {
        x_rounded: round_to_feasible(x.mat()).ok(),
        f_final: f.value(x.mat()),
        ninf,
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
