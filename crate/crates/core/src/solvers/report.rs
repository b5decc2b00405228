use crate::error::Error;
use crate::pgm::PgmTrace;
use crate::stiefel::StiefelPoint;

/// How an outer solve ended.
#[derive(Debug, Clone, PartialEq)]
pub enum SolveStatus {
    /// `ϑ(X) ≤ ε`.
    Feasible,
    /// `ϑ(X) ≤ 5ε` and `f` stagnated over the last nine outer iterations.
    Stagnated,
    /// Outer iteration cap reached.
    MaxOuter,
    /// The inner solver failed; the report holds its last iterate.
    InnerFailure(Error),
}

impl SolveStatus {
    pub fn is_failure(&self) -> bool {
        matches!(self, SolveStatus::InnerFailure(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            SolveStatus::Feasible => "feasible",
            SolveStatus::Stagnated => "stagnated",
            SolveStatus::MaxOuter => "max_outer",
            SolveStatus::InnerFailure(_) => "inner_failure",
        }
    }
}

/// One outer iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OuterRecord {
    /// Penalty weight (ρ for the penalty method, μ for ALM).
    pub rho: f64,
    /// Inner stationarity target.
    pub tau: f64,
    pub vartheta: f64,
    pub f: f64,
    /// Upper bound `υ` the inner solution had to respect.
    pub upsilon: f64,
    /// Inner objective value at the inner solution.
    pub inner_value: f64,
    pub inner_grad_norm: f64,
    pub inner_iters: usize,
    /// Both inner acceptance conditions held.
    pub inner_ok: bool,
    /// The next inner solve starts from the rounded feasible point.
    pub rounded_warm_start: bool,
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub x_final: StiefelPoint,
    /// `x_final` rounded onto the feasible set, when rounding succeeds.
    pub x_rounded: Option<StiefelPoint>,
    pub f_final: f64,
    /// `ϑ(x_final)`.
    pub ninf: f64,
    pub orth_residual: f64,
    /// `‖Proj_T ∇Θ‖_F` at exit (inner objective of the last outer iteration).
    pub stationarity: f64,
    pub outer_iters: usize,
    pub inner_iters_total: usize,
    pub wall_time: f64,
    pub status: SolveStatus,
    /// Some outer iteration missed an inner acceptance condition.
    pub flagged: bool,
    pub trace: Vec<OuterRecord>,
    pub inner_traces: Vec<PgmTrace>,
}
