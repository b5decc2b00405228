mod common;

use common::{fd_gradient, is_permutation, random_qap, rel_err};
use nnorth::error::Error;
use nnorth::penalty::vartheta;
use nnorth::problems::{random_gaussian, random_stiefel_start, ProjectionProblem};
use nnorth::solvers::{
    alm_solve, round_to_feasible, seppg_solve, stationarity_residual, AlmConfig, AugLagrangian,
    PenaltyConfig, SolveStatus,
};
use nnorth::stiefel::{riemannian_grad, Mat, StiefelPoint};
use nnorth::{Objective, SolverKind};

fn c42() -> Mat {
    Mat::from_row_slice(4, 2, &[0.6, 0.0, 0.0, 1.0, 0.8, 0.0, 0.0, 0.0])
}

/// Start used for projection problems: the rounded target.
fn rounded_start(c: &Mat) -> StiefelPoint {
    round_to_feasible(c).unwrap()
}

#[test]
fn penalty_solvers_recover_a_feasible_target() {
    let c = c42();
    let f = ProjectionProblem::new(c.clone());
    for kind in [SolverKind::SeppgPlus, SolverKind::SeppgZero] {
        let cfg = PenaltyConfig { rho0: Some(1.0 / c.norm()), ..kind.default_penalty_config() };
        let rep = seppg_solve(&f, &rounded_start(&c), &cfg).unwrap();
        assert!(rep.ninf <= 1e-6, "{kind}");
        assert!(rep.f_final <= 1e-8, "{kind}");
        assert!((rep.x_final.mat() - &c).norm() <= 1e-4, "{kind}");
        assert!(rep.orth_residual <= 1e-10);
    }
}

#[test]
fn feasible_stationary_start_stops_at_the_first_outer_iteration() {
    let c = c42();
    let f = ProjectionProblem::new(c.clone());
    let x0 = StiefelPoint::new(c).unwrap();
    let rep = seppg_solve(&f, &x0, &PenaltyConfig::seppg_plus()).unwrap();
    assert_eq!(rep.outer_iters, 1);
    assert_eq!(rep.inner_iters_total, 0);
    assert_eq!(rep.status, SolveStatus::Feasible);
    assert_eq!(rep.ninf, 0.0);
    assert_eq!(rep.x_final, x0);
}

#[test]
fn schedules_are_monotone_and_bounded() {
    let q = random_qap(6, 11);
    let cfg = PenaltyConfig::seppg_zero();
    let rep = seppg_solve(&q, &random_stiefel_start(6, 6, 11), &cfg).unwrap();
    for w in rep.trace.windows(2) {
        assert!(w[1].rho >= w[0].rho && w[1].rho <= cfg.rho_max);
        assert!(w[1].tau <= w[0].tau && w[1].tau >= cfg.tau_min);
        let expect = (w[0].rho * cfg.sigma_rho(w[0].rho)).min(cfg.rho_max);
        assert_eq!(w[1].rho, expect);
    }
    assert_eq!(rep.trace.len(), rep.outer_iters);
    assert_eq!(rep.inner_traces.len(), rep.outer_iters);
    let inner: usize = rep.trace.iter().map(|r| r.inner_iters).sum();
    assert_eq!(inner, rep.inner_iters_total);
    assert_eq!(rep.flagged, rep.trace.iter().any(|r| !r.inner_ok));
}

#[test]
fn small_qap_rounds_to_a_permutation_no_better_than_the_optimum() {
    for seed in 0..4 {
        let q = random_qap(5, seed);
        let (opt, _) = q.brute_force_optimum();
        let rep = seppg_solve(&q, &random_stiefel_start(5, 5, seed), &PenaltyConfig::seppg_zero()).unwrap();
        let xr = rep.x_rounded.expect("square rounding succeeds");
        assert!(is_permutation(xr.mat()));
        assert_eq!(vartheta(xr.mat()), 0.0);
        assert!(q.value(xr.mat()) >= opt - 1e-9);
        assert!(rep.orth_residual <= 1e-10);
    }
}

#[test]
fn mismatched_start_is_a_dimension_error() {
    let f = ProjectionProblem::new(c42());
    let x0 = random_stiefel_start(5, 2, 0);
    assert!(matches!(seppg_solve(&f, &x0, &PenaltyConfig::seppg_plus()), Err(Error::Dimension { .. })));
    assert!(matches!(alm_solve(&f, &x0, &AlmConfig::default()), Err(Error::Dimension { .. })));
}

#[test]
fn invalid_config_is_rejected_before_solving() {
    let f = ProjectionProblem::new(c42());
    let cfg = PenaltyConfig { sigma_tau: 1.5, ..PenaltyConfig::seppg_plus() };
    assert!(matches!(seppg_solve(&f, &random_stiefel_start(4, 2, 0), &cfg), Err(Error::Parameter(_))));
}

#[test]
fn alm_recovers_a_feasible_target_from_random_starts() {
    let c = c42();
    let f = ProjectionProblem::new(c.clone());
    let cfg = AlmConfig { mu0: Some(1.0 / c.norm()), ..AlmConfig::default() };
    for seed in 0..5 {
        let rep = alm_solve(&f, &random_stiefel_start(4, 2, seed), &cfg).unwrap();
        assert!(rep.ninf <= 1e-6, "seed {seed}");
        assert!((rep.x_final.mat() - &c).norm() <= 1e-4, "seed {seed}");
        assert!(rep.orth_residual <= 1e-10);
    }
}

#[test]
fn alm_feasible_stationary_start_is_kept() {
    let c = c42();
    let f = ProjectionProblem::new(c.clone());
    let x0 = StiefelPoint::new(c).unwrap();
    let rep = alm_solve(&f, &x0, &AlmConfig::default()).unwrap();
    assert_eq!(rep.outer_iters, 1);
    assert_eq!(rep.x_final, x0);
    assert_eq!(rep.status, SolveStatus::Feasible);
}

#[test]
fn augmented_lagrangian_gradient_matches_differences() {
    let q = random_qap(4, 6);
    for seed in 0..10 {
        let x = random_gaussian(4, 4, seed);
        let lambda = random_gaussian(4, 4, seed + 100).abs();
        let lag = AugLagrangian { f: &q, lambda, mu: 0.5 + seed as f64 };
        let g = lag.gradient(&x);
        assert!(rel_err(&fd_gradient(&lag, &x, 1e-6), &g) <= 1e-6);
        let (v, g2) = lag.value_grad(&x);
        assert_eq!(v, lag.value(&x));
        assert_eq!(g2, g);
    }
}

#[test]
fn stationarity_vanishes_at_the_projection_minimizer() {
    let c = c42();
    let f = ProjectionProblem::new(c.clone());
    let res = stationarity_residual(&f, &StiefelPoint::new(c).unwrap()).unwrap();
    assert!(res <= 1e-6);
}

#[test]
fn stationarity_with_a_positive_vector_is_the_riemannian_gradient() {
    let x = StiefelPoint::orthonormalize(&Mat::from_column_slice(4, 1, &[1.0, 2.0, 3.0, 4.0])).unwrap();
    let f = ProjectionProblem::new(Mat::from_column_slice(4, 1, &[0.3, -1.0, 2.0, 0.5]));
    let res = stationarity_residual(&f, &x).unwrap();
    let rg = riemannian_grad(&x, &f.gradient(x.mat())).unwrap();
    assert!((res - rg.dir().norm()).abs() <= 1e-14);
    assert!(res > 0.1);
}

#[test]
fn normal_cone_absorbs_pushes_into_zero_entries() {
    // gradient pushing X(2,0) negative is cancelled by a normal-cone element
    let x = StiefelPoint::new(Mat::from_row_slice(3, 1, &[1.0, 0.0, 0.0])).unwrap();
    let f = ProjectionProblem::new(Mat::from_row_slice(3, 1, &[1.0, 0.0, -2.0]));
    assert!(stationarity_residual(&f, &x).unwrap() <= 1e-10);
    // the opposite push cannot be cancelled
    let g = ProjectionProblem::new(Mat::from_row_slice(3, 1, &[1.0, 0.0, 2.0]));
    assert!((stationarity_residual(&g, &x).unwrap() - 4.0).abs() <= 1e-9);
}

#[test]
fn seppg_zero_qap_output_is_nearly_stationary() {
    let q = random_qap(5, 21);
    let rep = seppg_solve(&q, &random_stiefel_start(5, 5, 21), &PenaltyConfig::seppg_zero()).unwrap();
    assert!(rep.ninf <= 5e-6);
    let res = stationarity_residual(&q, &rep.x_final).unwrap();
    assert!(res <= 1e-4, "{res:e}");
}

#[test]
fn stationarity_rejects_infeasible_points() {
    let f = ProjectionProblem::new(c42());
    let x = random_stiefel_start(4, 2, 3);
    assert!(vartheta(x.mat()) > 1e-3);
    assert!(matches!(stationarity_residual(&f, &x), Err(Error::Precondition(_))));
}
