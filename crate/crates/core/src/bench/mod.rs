//! Benchmark harness: instance files, metrics and multi-start experiments.

mod experiment;
mod io;
mod metrics;
mod overrides;

pub use experiment::{
    run_experiment, run_problem, write_starts_csv, write_summary_csv, ExperimentOutput,
    ExperimentSpec, MetricsRow, Problem, ProblemKind, RunSettings, StartRecord,
};
pub use io::{
    emit_qaplib, load_best_known, parse_dense_matrix, parse_labels, parse_qaplib, parse_qaplib_str,
    read_dense_matrix, write_dense_matrix,
};
pub use metrics::{clustering_metrics, median, relgap, ClusteringScores};
pub use overrides::apply_overrides;

/// Formats a float with 17 significant digits.
pub(crate) fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}
