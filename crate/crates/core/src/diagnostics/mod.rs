//! Empirical checks of the error-bound and second-order theory behind the
//! penalty method: the error-bound constant `κ`, a brute-force projection
//! oracle onto `S₊`, a sampler for the local error bound, and a sampled
//! second-order sufficiency probe.

mod kappa;
mod oracle;
mod sosc;
mod sweep;

pub use kappa::{kappa, kappa_formula, smallest_nonzero_entry};
pub use oracle::{brute_force_dist_splus, ORACLE_LIMIT};
pub use sosc::{sosc_form, sosc_probe, SoscReport};
pub use sweep::{
    error_bound_sample, error_bound_sweep, write_samples_csv, ErrorBoundSample, HOLDS_SLACK,
};
