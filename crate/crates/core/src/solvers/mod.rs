//! Outer drivers: the smooth exact-penalty method (Moreau-envelope and
//! quadratic variants), the augmented Lagrangian baseline, feasibility
//! rounding and the stationarity measure used to judge their output.

mod alm;
mod config;
mod report;
mod round;
mod seppg;
mod stationarity;

pub use alm::{alm_solve, AlmConfig, AugLagrangian};
pub use config::PenaltyConfig;
pub use report::{OuterRecord, SolveReport, SolveStatus};
pub use round::{is_nonneg_orthogonal, round_to_feasible};
pub use seppg::{initial_rho, seppg_solve};
pub use stationarity::{stationarity_residual, stationarity_residual_with_tol};

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::objective::Objective;
use crate::stiefel::StiefelPoint;

/// Which outer driver to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolverKind {
    /// Penalty method on `f + ρ e_γϑ` with `γ > 0`.
    SeppgPlus,
    /// Penalty method on `f + ρ‖max(0, −X)‖²_F`.
    SeppgZero,
    /// Augmented Lagrangian baseline.
    Alm,
}

impl SolverKind {
    pub const ALL: [SolverKind; 3] = [SolverKind::SeppgPlus, SolverKind::SeppgZero, SolverKind::Alm];

    pub fn name(self) -> &'static str {
        match self {
            SolverKind::SeppgPlus => "seppg_plus",
            SolverKind::SeppgZero => "seppg_zero",
            SolverKind::Alm => "alm",
        }
    }

    /// Default penalty configuration for the penalty variants.
    pub fn default_penalty_config(self) -> PenaltyConfig {
        match self {
            SolverKind::SeppgZero => PenaltyConfig::seppg_zero(),
            _ => PenaltyConfig::seppg_plus(),
        }
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SolverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "seppg_plus" | "seppg+" => Ok(SolverKind::SeppgPlus),
            "seppg_zero" | "seppg0" => Ok(SolverKind::SeppgZero),
            "alm" => Ok(SolverKind::Alm),
            other => Err(Error::Input(format!("unknown solver '{other}'"))),
        }
    }
}

/// Runs `kind` on `f` from `x0`. The penalty config is used by the penalty
/// variants, the ALM config by the baseline.
pub fn solve<F: Objective + ?Sized>(
    kind: SolverKind,
    f: &F,
    x0: &StiefelPoint,
    penalty: &PenaltyConfig,
    alm: &AlmConfig,
) -> Result<SolveReport> {
    match kind {
        SolverKind::SeppgPlus | SolverKind::SeppgZero => seppg_solve(f, x0, penalty),
        SolverKind::Alm => alm_solve(f, x0, alm),
    }
}
