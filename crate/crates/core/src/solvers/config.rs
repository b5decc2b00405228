use crate::error::{Error, Result};
use crate::pgm::PgmConfig;

/// Tunables of the outer penalty loop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PenaltyConfig {
    /// Moreau parameter; `0` selects the quadratic penalty.
    pub gamma: f64,
    /// Initial penalty weight. `None` means `c0·|f(X⁰)|/ϑ(X⁰)` (or 1 if `ϑ(X⁰) = 0`).
    pub rho0: Option<f64>,
    pub c0: f64,
    pub rho_max: f64,
    /// Growth factor while `ρ ≤ 1`.
    pub sigma_rho_small: f64,
    /// Growth factor once `ρ > 1`.
    pub sigma_rho_large: f64,
    pub tau0: f64,
    pub tau_min: f64,
    pub sigma_tau: f64,
    /// Feasibility target on `ϑ`.
    pub epsilon: f64,
    pub l_max: usize,
    /// Rounded warm starts are considered only once `ρ ≥ rho_feas_threshold`.
    pub rho_feas_threshold: f64,
    pub pgm: PgmConfig,
}

impl PenaltyConfig {
    /// Moreau-envelope variant: `γ = 0.05`, `τ₀ = 1`.
    pub fn seppg_plus() -> Self {
        Self {
            gamma: 0.05,
            rho0: None,
            c0: 0.1,
            rho_max: 1e10,
            sigma_rho_small: 1.05,
            sigma_rho_large: 1.1,
            tau0: 1.0,
            tau_min: 1e-5,
            sigma_tau: 0.95,
            epsilon: 1e-6,
            l_max: 2000,
            rho_feas_threshold: 1e3,
            pgm: PgmConfig::default(),
        }
    }

    /// Quadratic-penalty variant: `γ = 0`, `τ₀ = 0.005`.
    pub fn seppg_zero() -> Self {
        Self {
            gamma: 0.0,
            tau0: 0.005,
            ..Self::seppg_plus()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Parameter(m));
        if !(self.gamma >= 0.0 && self.gamma.is_finite()) {
            return bad(format!("gamma must be >= 0, got {}", self.gamma));
        }
        if let Some(r) = self.rho0 {
            if !(r > 0.0 && r.is_finite()) {
                return bad(format!("rho0 must be > 0, got {r}"));
            }
        }
        if !(self.c0 > 0.0) {
            return bad(format!("c0 must be > 0, got {}", self.c0));
        }
        if !(self.rho_max > 0.0) {
            return bad("rho_max must be > 0".into());
        }
        if !(self.sigma_rho_small > 1.0 && self.sigma_rho_large > 1.0) {
            return bad("penalty growth factors must exceed 1".into());
        }
        if !(self.tau0 > 0.0 && self.tau_min > 0.0) {
            return bad("tau0 and tau_min must be > 0".into());
        }
        if !(self.sigma_tau > 0.0 && self.sigma_tau < 1.0) {
            return bad(format!("sigma_tau must lie in (0,1), got {}", self.sigma_tau));
        }
        if !(self.epsilon > 0.0) {
            return bad("epsilon must be > 0".into());
        }
        if self.l_max == 0 {
            return bad("l_max must be positive".into());
        }
        if !(self.rho_feas_threshold > 0.0) {
            return bad("rho_feas_threshold must be > 0".into());
        }
        self.pgm.validate()
    }

    /// Growth factor applied to `rho`.
    pub fn sigma_rho(&self, rho: f64) -> f64 {
        if rho <= 1.0 {
            self.sigma_rho_small
        } else {
            self.sigma_rho_large
        }
    }
}

impl Default for PenaltyConfig {
    fn default() -> Self {
        Self::seppg_plus()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let p = PenaltyConfig::seppg_plus();
        assert_eq!((p.gamma, p.tau0), (0.05, 1.0));
        assert_eq!((p.l_max, p.epsilon, p.rho_max, p.tau_min, p.sigma_tau), (2000, 1e-6, 1e10, 1e-5, 0.95));
        let z = PenaltyConfig::seppg_zero();
        assert_eq!((z.gamma, z.tau0), (0.0, 0.005));
        assert!(p.validate().is_ok() && z.validate().is_ok());
        assert_eq!((p.pgm.eta, p.pgm.alpha, p.pgm.memory), (0.1, 1e-4, 5));
        assert_eq!((p.pgm.t_min, p.pgm.t_max), (1e-12, 1e12));
    }

    #[test]
    fn growth_switches_above_one() {
        let p = PenaltyConfig::default();
        assert_eq!(p.sigma_rho(1.0), 1.05);
        assert_eq!(p.sigma_rho(1.0 + 1e-12), 1.1);
    }

    #[test]
    fn rejects_bad_values() {
        let mut p = PenaltyConfig::default();
        p.sigma_tau = 1.0;
        assert!(p.validate().is_err());
        let mut p = PenaltyConfig::default();
        p.rho0 = Some(0.0);
        assert!(p.validate().is_err());
    }
}
