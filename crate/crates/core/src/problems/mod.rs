//! Objective families: lifted QAP, graph matching, projection onto the
//! feasible set, and orthogonal nonnegative matrix factorization.

mod gm;
mod onmf;
mod proj;
mod qap;
mod start;

pub use gm::{gm_grad, gm_value, AffinityInstance};
pub use onmf::{onmf_alternate, onmf_y_update, OnmfConfig, OnmfInstance, OnmfOutput, OnmfSubproblem};
pub use proj::{proj_grad, proj_value, ProjectionProblem};
pub use qap::{qap_lifted_grad, qap_lifted_value, QapInstance};
pub use start::{nonneg_start, random_gaussian, random_stiefel_start};

use crate::error::{Error, Result};
use crate::stiefel::Mat;

pub(crate) fn check_shape(expected: (usize, usize), x: &Mat) -> Result<()> {
    if x.shape() == expected {
        Ok(())
    } else {
        Err(Error::dim(expected, x.shape()))
    }
}
