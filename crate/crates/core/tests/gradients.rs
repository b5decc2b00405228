mod common;

use common::{avoid_kinks, fd_gradient, random_affinity, random_qap, rel_err};
use nnorth::penalty::{Penalized, PenaltyParams};
use nnorth::problems::{random_gaussian, OnmfSubproblem, ProjectionProblem};
use nnorth::solvers::AugLagrangian;
use nnorth::stiefel::Mat;
use nnorth::Objective;

const H: f64 = 1e-6;

fn check(f: &dyn Objective, x: &Mat, tol: f64, label: &str) {
    let err = rel_err(&fd_gradient(f, x, H), &f.gradient(x));
    assert!(err <= tol, "{label}: relative error {err:e}");
    let (v, g) = f.value_grad(x);
    assert_eq!(v, f.value(x), "{label}");
    assert!(rel_err(&g, &f.gradient(x)) <= 1e-14, "{label}");
}

#[test]
fn lifted_qap() {
    for s in 0..20 {
        let q = random_qap(5, s);
        check(&q, &random_gaussian(5, 5, 100 + s), 1e-5, "qap");
    }
}

#[test]
fn graph_matching() {
    for s in 0..20 {
        let k = random_affinity(3, s);
        check(&k, &random_gaussian(3, 3, 200 + s), 1e-5, "gm");
    }
}

#[test]
fn projection() {
    for s in 0..20 {
        let p = ProjectionProblem::new(random_gaussian(6, 3, 300 + s));
        check(&p, &random_gaussian(6, 3, 400 + s), 1e-5, "proj");
    }
}

#[test]
fn onmf_subproblem() {
    for s in 0..20 {
        let a = random_gaussian(8, 5, 500 + s).abs();
        let y = random_gaussian(5, 3, 600 + s).abs();
        let f = OnmfSubproblem { a: &a, y: &y };
        check(&f, &random_gaussian(8, 3, 700 + s), 1e-5, "onmf");
    }
}

#[test]
fn penalized_objectives() {
    let q = random_qap(4, 9);
    for gamma in [0.0, 0.05] {
        for rho in [1.0, 1e3] {
            let theta = Penalized::new(&q, PenaltyParams::new(rho, gamma).unwrap());
            for s in 0..20 {
                let x = avoid_kinks(&(random_gaussian(4, 4, 800 + s) * 0.2), gamma, 1e-4);
                check(&theta, &x, 1e-5, &format!("theta rho={rho} gamma={gamma}"));
            }
        }
    }
}

#[test]
fn moreau_penalty_at_rho_three() {
    let p = ProjectionProblem::new(random_gaussian(5, 2, 1));
    let theta = Penalized::new(&p, PenaltyParams::new(3.0, 0.05).unwrap());
    for s in 0..20 {
        let x = avoid_kinks(&(random_gaussian(5, 2, 900 + s) * 0.1), 0.05, 1e-4);
        check(&theta, &x, 1e-6, "theta rho=3");
    }
}

/// `∇L_μ = ∇f + μ·min(0, X − Λ/μ)`; kinks sit where `X = Λ/μ`.
#[test]
fn augmented_lagrangian() {
    let p = ProjectionProblem::new(random_gaussian(5, 3, 2));
    for s in 0..20 {
        let lambda = random_gaussian(5, 3, 1000 + s).abs();
        let mu = 0.5 + s as f64;
        let x = random_gaussian(5, 3, 1100 + s);
        let x = x.zip_map(&lambda, |v, l| {
            let k = l / mu;
            if (v - k).abs() < 1e-4 { k + 2e-4 } else { v }
        });
        let lag = AugLagrangian { f: &p, lambda: lambda.clone(), mu };
        check(&lag, &x, 1e-6, "alm");
        let direct = p.gradient(&x) + (&x - &lambda / mu).map(|v| v.min(0.0)) * mu;
        assert!(rel_err(&lag.gradient(&x), &direct) <= 1e-14);
    }
}

/// Exact Hessian-vector products against differences of the gradient.
#[test]
fn hessian_vector_products() {
    let k = random_affinity(3, 4);
    let p = ProjectionProblem::new(random_gaussian(3, 3, 5));
    let q = random_qap(3, 6);
    let fs: [&dyn Objective; 3] = [&k, &p, &q];
    for f in fs {
        for s in 0..5 {
            let x = random_gaussian(3, 3, 1200 + s);
            let h = random_gaussian(3, 3, 1300 + s);
            let fd = (f.gradient(&(&x + &h * H)) - f.gradient(&(&x - &h * H))) / (2.0 * H);
            assert!(rel_err(&fd, &f.hessian_vec(&x, &h)) <= 1e-5);
        }
    }
}
