use crate::error::{Error, Result};
use crate::solvers::{AlmConfig, PenaltyConfig};

/// Applies `key = value` lines (`#` starts a comment) to the solver configs.
///
/// Inner-solver keys (`eta`, `alpha`, `memory`, `t_min`, `t_max`, `grad_tol`,
/// `max_iters`, `max_backtracks`) are applied to both configs.
pub fn apply_overrides(text: &str, penalty: &mut PenaltyConfig, alm: &mut AlmConfig) -> Result<()> {
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        let content = line.split('#').next().unwrap_or("").trim();
        if !content.is_empty() {
            let err = |message: String| Error::Parse { offset, message };
            let (key, val) = content
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| err(format!("expected 'key = value', found '{content}'")))?;
            let num = || -> Result<f64> {
                val.parse::<f64>()
                    .map_err(|_| err(format!("malformed value '{val}' for '{key}'")))
            };
            let int = || -> Result<usize> {
                val.parse::<usize>()
                    .map_err(|_| err(format!("expected a nonnegative integer for '{key}', found '{val}'")))
            };
            match key {
                "gamma" => penalty.gamma = num()?,
                "rho0" => penalty.rho0 = Some(num()?),
                "c0" => {
                    penalty.c0 = num()?;
                    alm.c0 = penalty.c0;
                }
                "rho_max" => penalty.rho_max = num()?,
                "sigma_rho_small" => penalty.sigma_rho_small = num()?,
                "sigma_rho_large" => penalty.sigma_rho_large = num()?,
                "tau0" => penalty.tau0 = num()?,
                "tau_min" => penalty.tau_min = num()?,
                "sigma_tau" => penalty.sigma_tau = num()?,
                "epsilon" => {
                    penalty.epsilon = num()?;
                    alm.epsilon = penalty.epsilon;
                }
                "l_max" => penalty.l_max = int()?,
                "rho_feas_threshold" => penalty.rho_feas_threshold = num()?,
                "mu0" => alm.mu0 = Some(num()?),
                "mu_growth" => alm.growth = num()?,
                "mu_max" => alm.mu_max = num()?,
                "alm_max_outer" => alm.max_outer = int()?,
                "alm_grad_tol" => alm.pgm.grad_tol = num()?,
                "eta" | "alpha" | "t_min" | "t_max" | "grad_tol" => {
                    let v = num()?;
                    for pgm in [&mut penalty.pgm, &mut alm.pgm] {
                        match key {
                            "eta" => pgm.eta = v,
                            "alpha" => pgm.alpha = v,
                            "t_min" => pgm.t_min = v,
                            "t_max" => pgm.t_max = v,
                            _ => pgm.grad_tol = v,
                        }
                    }
                }
                "memory" | "max_iters" | "max_backtracks" => {
                    let v = int()?;
                    for pgm in [&mut penalty.pgm, &mut alm.pgm] {
                        match key {
                            "memory" => pgm.memory = v,
                            "max_iters" => pgm.max_iters = v,
                            _ => pgm.max_backtracks = v,
                        }
                    }
                }
                other => return Err(err(format!("unknown configuration key '{other}'"))),
            }
        }
        offset += line.len();
    }
    penalty.validate()?;
    alm.validate()
}
