//! Nonnegativity-violation measures and the penalized objectives built on them.
//!
//! `ϑ(X) = Σ max(0, −X_ij)` is the elementwise ℓ1 distance to the nonnegative
//! orthant. Its Moreau envelope `e_γϑ` is C¹ with gradient `γ⁻¹(X − P_γϑ(X))`,
//! and `Θ_{ρ,γ} = f + ρ e_γϑ`. The value `γ = 0` selects the quadratic penalty
//! `f + ρ‖max(0, −X)‖²_F` instead.

use crate::error::{Error, Result};
use crate::objective::Objective;
use crate::stiefel::Mat;

/// Penalty weight `rho` and Moreau parameter `gamma` (`gamma = 0` means quadratic).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PenaltyParams {
    rho: f64,
    gamma: f64,
}

impl PenaltyParams {
    pub fn new(rho: f64, gamma: f64) -> Result<Self> {
        // rho = 0 is allowed so that Θ can collapse to f.
        if !(rho >= 0.0 && rho.is_finite()) {
            return Err(Error::Parameter(format!("rho must be >= 0, got {rho}")));
        }
        if !(gamma >= 0.0 && gamma.is_finite()) {
            return Err(Error::Parameter(format!("gamma must be >= 0, got {gamma}")));
        }
        Ok(Self { rho, gamma })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma.is_finite() {
        Ok(())
    } else {
        Err(Error::Parameter(format!("gamma must be > 0, got {gamma}")))
    }
}

/// `ϑ(X) = ⟨E, max(0, −X)⟩`.
pub fn vartheta(x: &Mat) -> f64 {
    x.iter().map(|&v| (-v).max(0.0)).sum()
}

/// `P_γϑ(X) = min(X + γ, max(X, 0))` entrywise.
pub fn prox_vartheta(x: &Mat, gamma: f64) -> Result<Mat> {
    check_gamma(gamma)?;
    Ok(x.map(|v| prox_scalar(v, gamma)))
}

#[inline]
fn prox_scalar(v: f64, gamma: f64) -> f64 {
    (v + gamma).min(v.max(0.0))
}

/// Moreau envelope `e_γϑ(X)`.
pub fn moreau_env_vartheta(x: &Mat, gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    Ok(x.iter().map(|&v| env_scalar(v, gamma)).sum())
}

#[inline]
fn env_scalar(v: f64, gamma: f64) -> f64 {
    if v >= 0.0 {
        0.0
    } else if v >= -gamma {
        v * v / (2.0 * gamma)
    } else {
        -v - gamma / 2.0
    }
}

/// `∇e_γϑ(X) = γ⁻¹(X − P_γϑ(X))`.
pub fn grad_moreau(x: &Mat, gamma: f64) -> Result<Mat> {
    check_gamma(gamma)?;
    Ok(x.map(|v| (v - prox_scalar(v, gamma)) / gamma))
}

/// `‖max(0, −X)‖²_F`.
pub fn quad_penalty(x: &Mat) -> f64 {
    x.iter().map(|&v| v.min(0.0).powi(2)).sum()
}

/// Gradient of [`quad_penalty`]: `2·min(X, 0)`.
pub fn grad_quad_penalty(x: &Mat) -> Mat {
    x.map(|v| 2.0 * v.min(0.0))
}

fn penalty_value_grad(x: &Mat, gamma: f64) -> (f64, Mat) {
    if gamma > 0.0 {
        let mut val = 0.0;
        let g = x.map(|v| {
            val += env_scalar(v, gamma);
            (v - prox_scalar(v, gamma)) / gamma
        });
        (val, g)
    } else {
        (quad_penalty(x), grad_quad_penalty(x))
    }
}

fn penalty_value(x: &Mat, gamma: f64) -> f64 {
    if gamma > 0.0 {
        x.iter().map(|&v| env_scalar(v, gamma)).sum()
    } else {
        quad_penalty(x)
    }
}

/// `(Θ_{ρ,γ}(X), ∇Θ_{ρ,γ}(X))`.
pub fn theta_value_grad<F: Objective + ?Sized>(
    f: &F,
    x: &Mat,
    p: PenaltyParams,
) -> Result<(f64, Mat)> {
    if x.shape() != f.shape() {
        return Err(Error::dim(f.shape(), x.shape()));
    }
    let (fv, fg) = f.value_grad(x);
    if p.rho == 0.0 {
        return Ok((fv, fg));
    }
    let (pv, pg) = penalty_value_grad(x, p.gamma);
    Ok((fv + p.rho * pv, fg + pg * p.rho))
}

/// `Θ_{ρ,γ}` packaged as an [`Objective`] so the inner solver can minimize it.
#[derive(Debug, Clone, Copy)]
pub struct Penalized<'a, F: ?Sized> {
    pub f: &'a F,
    pub params: PenaltyParams,
}

impl<'a, F: Objective + ?Sized> Penalized<'a, F> {
    pub fn new(f: &'a F, params: PenaltyParams) -> Self {
        Self { f, params }
    }
}

impl<F: Objective + ?Sized> Objective for Penalized<'_, F> {
    fn shape(&self) -> (usize, usize) {
        self.f.shape()
    }

    fn value(&self, x: &Mat) -> f64 {
        let fv = self.f.value(x);
        if self.params.rho == 0.0 {
            fv
        } else {
            fv + self.params.rho * penalty_value(x, self.params.gamma)
        }
    }

    fn gradient(&self, x: &Mat) -> Mat {
        self.value_grad(x).1
    }

    fn value_grad(&self, x: &Mat) -> (f64, Mat) {
        let (fv, fg) = self.f.value_grad(x);
        if self.params.rho == 0.0 {
            return (fv, fg);
        }
        let (pv, pg) = penalty_value_grad(x, self.params.gamma);
        (fv + self.params.rho * pv, fg + pg * self.params.rho)
    }
}
