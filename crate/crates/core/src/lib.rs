//! Optimization over nonnegative matrices with orthonormal columns,
//! `S₊ = {X ∈ ℝⁿˣʳ : XᵀX = I, X ≥ 0}`.
//!
//! Feasibility of the orthogonality constraint is kept by retraction on the
//! Stiefel manifold while nonnegativity is enforced by a smooth exact penalty
//! (the Moreau envelope of `Σ max(0, −Xᵢⱼ)`) or a quadratic penalty, each
//! subproblem solved by a nonmonotone Riemannian gradient method.
//!
//! ```
//! use nnorth::problems::{random_stiefel_start, ProjectionProblem};
//! use nnorth::solvers::{seppg_solve, PenaltyConfig};
//! use nnorth::stiefel::Mat;
//!
//! let c = Mat::from_row_slice(3, 2, &[0.9, 0.1, 0.2, 0.8, -0.1, 0.3]);
//! let x0 = random_stiefel_start(3, 2, 7);
//! let report = seppg_solve(&ProjectionProblem::new(c), &x0, &PenaltyConfig::seppg_plus()).unwrap();
//! assert!(report.ninf <= 1e-6);
//! ```

pub mod bench;
pub mod diagnostics;
pub mod error;
pub mod objective;
pub mod penalty;
pub mod pgm;
pub mod problems;
pub mod solvers;
pub mod stiefel;

pub use error::{Error, Result};
pub use objective::Objective;
pub use solvers::{solve, SolveReport, SolveStatus, SolverKind};
pub use stiefel::{Mat, StiefelPoint};
