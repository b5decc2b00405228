use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::objective::Objective;
use crate::solvers::stationarity_residual_with_tol;
use crate::stiefel::{inner, proj_tangent_raw, Mat, StiefelPoint};

/// Entries of `X̄` at or below this count as zero for the cone test.
const ZERO_ENTRY: f64 = 1e-10;
const CONE_TOL: f64 = 1e-10;
/// Sampled forms above this count as strictly positive.
const STRICT_TOL: f64 = 1e-10;

/// Summary of a sampled second-order check.
#[derive(Debug, Clone, PartialEq)]
pub struct SoscReport {
    pub sampled: usize,
    /// Directions that passed the critical-cone and tangent-cone filters.
    pub survivors: usize,
    pub min_form: Option<f64>,
    pub max_form: Option<f64>,
    /// Every surviving direction gave a positive form.
    pub strict: bool,
}

impl SoscReport {
    pub fn inconclusive(&self) -> bool {
        self.survivors == 0
    }
}

/// `⟨H, ∇²f(X̄)H⟩ − ⟨HᵀH, X̄ᵀ∇f(X̄)⟩`.
pub fn sosc_form<F: Objective + ?Sized>(f: &F, xbar: &Mat, h: &Mat) -> f64 {
    let g = f.gradient(xbar);
    inner(h, &f.hessian_vec(xbar, h)) - inner(&h.tr_mul(h), &xbar.tr_mul(&g))
}

/// Samples random unit directions of the critical cone at a stationary
/// feasible `xbar`, keeps those with `−X̄HᵀH` in the tangent cone of the
/// nonnegative orthant, and reports the extreme values of the form.
///
/// A positive minimum is evidence for, not a proof of, a strict local minimum.
pub fn sosc_probe<F: Objective + ?Sized>(
    f: &F,
    xbar: &StiefelPoint,
    num_dirs: usize,
    seed: u64,
) -> Result<SoscReport> {
    let res = stationarity_residual_with_tol(f, xbar, 1e-10)?;
    if res > 1e-6 {
        return Err(Error::Precondition(format!(
            "probe needs a stationary point, residual is {res:e}"
        )));
    }
    let x = xbar.mat();
    let (n, r) = x.shape();
    let g_t = proj_tangent_raw(x, &f.gradient(x));
    let g_t2 = g_t.norm_squared();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut forms = Vec::new();

    for _ in 0..num_dirs {
        let z = Mat::from_fn(n, r, |_, _| StandardNormal.sample(&mut rng));
        let mut h = proj_tangent_raw(x, &z);
        if g_t2 > 1e-28 {
            let c = inner(&h, &g_t) / g_t2;
            h -= &g_t * c;
        }
        let hn = h.norm();
        if hn < 1e-12 {
            continue;
        }
        h /= hn;
        let m = x * h.tr_mul(&h);
        let in_cone = x
            .iter()
            .zip(m.iter())
            .all(|(&xv, &mv)| xv > ZERO_ENTRY || -mv >= -CONE_TOL);
        if in_cone {
            forms.push(sosc_form(f, x, &h));
        }
    }

    let min_form = forms.iter().copied().reduce(f64::min);
    let max_form = forms.iter().copied().reduce(f64::max);
    Ok(SoscReport {
        sampled: num_dirs,
        survivors: forms.len(),
        min_form,
        max_form,
        strict: min_form.is_some_and(|m| m > STRICT_TOL),
    })
}
