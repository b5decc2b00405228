mod common;

use common::random_qap;
use nnorth::error::Error;
use nnorth::penalty::{Penalized, PenaltyParams};
use nnorth::pgm::{pgm_solve, pgm_step, PgmConfig};
use nnorth::problems::{random_stiefel_start, ProjectionProblem};
use nnorth::stiefel::{proj_tangent_raw, rect_identity, Mat};
use nnorth::Objective;

fn proj_target() -> ProjectionProblem {
    ProjectionProblem::new(rect_identity(4, 2))
}

#[test]
fn projection_converges_quickly_to_the_polar_factor() {
    let f = proj_target();
    let cfg = PgmConfig { grad_tol: 1e-8, ..PgmConfig::default() };
    for seed in 0..10 {
        let x0 = random_stiefel_start(4, 2, seed);
        let out = pgm_solve(&f, &x0, &cfg).unwrap();
        assert!(out.converged, "seed {seed}");
        assert!(out.trace.iterations() < 200, "seed {seed}: {} iterations", out.trace.iterations());
        assert!(out.grad_norm <= 1e-8);
        // the global minimizer is the polar factor of C, here C itself
        let dist = (out.x.mat() - rect_identity(4, 2)).norm();
        assert!(dist <= 1e-7, "seed {seed}: {dist:e}");
    }
}

#[test]
fn window_max_never_increases_and_values_stay_below_the_start() {
    for seed in 0..10 {
        let q = random_qap(6, seed);
        let theta = Penalized::new(&q, PenaltyParams::new(10.0, 0.05).unwrap());
        let x0 = random_stiefel_start(6, 6, seed);
        let cfg = PgmConfig { grad_tol: 1e-6, ..PgmConfig::default() };
        let out = pgm_solve(&theta, &x0, &cfg).unwrap();
        assert!(out.trace.window_max_nonincreasing());
        let v0 = out.trace.initial_value;
        assert!(out.trace.records.iter().all(|r| r.value <= v0));
        assert!(out.value <= v0);
        assert!(out.x.orth_residual() <= 1e-10);
    }
}

#[test]
fn zero_memory_gives_monotone_sufficient_decrease() {
    let q = random_qap(5, 3);
    let theta = Penalized::new(&q, PenaltyParams::new(1.0, 0.0).unwrap());
    let cfg = PgmConfig { memory: 0, grad_tol: 1e-4, ..PgmConfig::default() };
    let out = pgm_solve(&theta, &random_stiefel_start(5, 5, 1), &cfg).unwrap();
    let mut prev = out.trace.initial_value;
    for r in &out.trace.records {
        assert!(r.value <= prev - cfg.alpha / (2.0 * r.step) * r.v_norm * r.v_norm);
        prev = r.value;
    }
}

#[test]
fn first_step_is_inside_the_bounds() {
    let f = proj_target();
    let cfg = PgmConfig { t_min: 1e-3, t_max: 1e-2, ..PgmConfig::default() };
    let out = pgm_solve(&f, &random_stiefel_start(4, 2, 2), &cfg).unwrap();
    let t0 = out.trace.records[0].step;
    // accepted after b backtracks from a clamped initial step
    let t_init = t0 / cfg.eta.powi(out.trace.records[0].backtracks as i32);
    assert!((cfg.t_min..=cfg.t_max * (1.0 + 1e-12)).contains(&t_init));
}

#[test]
fn stationary_start_takes_no_steps() {
    let f = proj_target();
    let x0 = nnorth::StiefelPoint::new(rect_identity(4, 2)).unwrap();
    let out = pgm_solve(&f, &x0, &PgmConfig::default()).unwrap();
    assert_eq!(out.trace.iterations(), 0);
    assert_eq!(out.x, x0);
}

#[test]
fn zero_gradient_step_is_accepted_in_place() {
    let f = proj_target();
    let x = nnorth::StiefelPoint::new(rect_identity(4, 2)).unwrap();
    let g = Mat::zeros(4, 2);
    let step = pgm_step(&f, &x, &g, 1.0, f.value(x.mat()), &PgmConfig::default()).unwrap();
    assert_eq!(step.x, x);
    assert_eq!(step.backtracks, 0);
}

#[test]
fn accepted_steps_satisfy_the_acceptance_test() {
    let q = random_qap(5, 8);
    let x = random_stiefel_start(5, 5, 8);
    let g = proj_tangent_raw(x.mat(), &q.gradient(x.mat()));
    let cfg = PgmConfig::default();
    let wmax = q.value(x.mat()) + 3.0;
    let step = pgm_step(&q, &x, &g, 1.0, wmax, &cfg).unwrap();
    assert!(step.value <= wmax - cfg.alpha / (2.0 * step.step) * step.v.norm_squared());
    assert_eq!(step.value, q.value(step.x.mat()));
}

/// Gradient with the wrong sign: every trial step increases the objective.
struct WrongGradient(ProjectionProblem);

impl Objective for WrongGradient {
    fn shape(&self) -> (usize, usize) {
        self.0.shape()
    }
    fn value(&self, x: &Mat) -> f64 {
        self.0.value(x)
    }
    fn gradient(&self, x: &Mat) -> Mat {
        -self.0.gradient(x)
    }
}

#[test]
fn wrong_gradient_is_a_line_search_failure() {
    let f = WrongGradient(proj_target());
    let cfg = PgmConfig { max_backtracks: 10, memory: 0, ..PgmConfig::default() };
    let err = pgm_solve(&f, &random_stiefel_start(4, 2, 4), &cfg).unwrap_err();
    assert!(matches!(err.error, Error::LineSearchFailure { backtracks: 10, .. }), "{err}");
    assert!(err.x_last.orth_residual() <= 1e-10);
}

#[test]
fn iteration_cap_returns_best_iterate_unconverged() {
    let q = random_qap(6, 2);
    let cfg = PgmConfig { max_iters: 3, grad_tol: 1e-14, ..PgmConfig::default() };
    let out = pgm_solve(&q, &random_stiefel_start(6, 6, 2), &cfg).unwrap();
    assert!(!out.converged);
    assert_eq!(out.trace.iterations(), 3);
    let best = out.trace.records.iter().map(|r| r.value).fold(f64::INFINITY, f64::min);
    assert_eq!(out.value, best.min(out.trace.initial_value));
}
