use super::check_shape;
use crate::error::{Error, Result};
use crate::objective::Objective;
use crate::stiefel::Mat;

/// Graph-matching instance with an `n²×n²` affinity matrix `K`.
///
/// `vec` stacks columns, so `vec(X)[i + n·j] = X[i, j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffinityInstance {
    n: usize,
    k: Mat,
}

impl AffinityInstance {
    /// Symmetrizes `k` as `(K + Kᵀ)/2`.
    pub fn new(n: usize, k: Mat) -> Result<Self> {
        if n == 0 || k.shape() != (n * n, n * n) {
            return Err(Error::Input(format!(
                "affinity matrix must be {0}x{0}, got {1}x{2}",
                n * n,
                k.nrows(),
                k.ncols()
            )));
        }
        if k.iter().any(|v| !v.is_finite()) {
            return Err(Error::Input("affinity matrix has non-finite entries".into()));
        }
        let k = (&k + k.transpose()) * 0.5;
        Ok(Self { n, k })
    }

    /// Infers `n` from a square `n²×n²` matrix.
    pub fn from_matrix(k: Mat) -> Result<Self> {
        let m = k.nrows();
        let n = (m as f64).sqrt().round() as usize;
        if n * n != m {
            return Err(Error::Input(format!("affinity size {m} is not a perfect square")));
        }
        Self::new(n, k)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> &Mat {
        &self.k
    }

    fn kx(&self, x: &Mat) -> Mat {
        let v = nalgebra::DVector::from_column_slice(x.as_slice());
        let kv = &self.k * v;
        Mat::from_column_slice(self.n, self.n, kv.as_slice())
    }
}

/// `−vec(X)ᵀ K vec(X)`.
pub fn gm_value(inst: &AffinityInstance, x: &Mat) -> Result<f64> {
    check_shape((inst.n, inst.n), x)?;
    Ok(inst.value(x))
}

/// `−2 unvec(K vec(X))`.
pub fn gm_grad(inst: &AffinityInstance, x: &Mat) -> Result<Mat> {
    check_shape((inst.n, inst.n), x)?;
    Ok(inst.gradient(x))
}

impl Objective for AffinityInstance {
    fn shape(&self) -> (usize, usize) {
        (self.n, self.n)
    }

    fn value(&self, x: &Mat) -> f64 {
        -x.dot(&self.kx(x))
    }

    fn gradient(&self, x: &Mat) -> Mat {
        self.kx(x) * -2.0
    }

    fn value_grad(&self, x: &Mat) -> (f64, Mat) {
        let kx = self.kx(x);
        (-x.dot(&kx), kx * -2.0)
    }

    fn hessian_vec(&self, _x: &Mat, h: &Mat) -> Mat {
        self.kx(h) * -2.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::random_stiefel_start;

    #[test]
    fn identity_affinity_on_orthogonal_matrices() {
        let inst = AffinityInstance::new(3, Mat::identity(9, 9)).unwrap();
        let x = random_stiefel_start(3, 3, 5);
        assert!((gm_value(&inst, x.mat()).unwrap() + 3.0).abs() < 1e-13);
    }

    #[test]
    fn zero_affinity() {
        let inst = AffinityInstance::new(2, Mat::zeros(4, 4)).unwrap();
        let x = random_stiefel_start(2, 2, 1);
        assert_eq!(gm_value(&inst, x.mat()).unwrap(), 0.0);
        assert_eq!(gm_grad(&inst, x.mat()).unwrap(), Mat::zeros(2, 2));
    }

    #[test]
    fn symmetrizes_on_ingestion() {
        let mut k = Mat::zeros(4, 4);
        k[(0, 1)] = 2.0;
        let inst = AffinityInstance::from_matrix(k).unwrap();
        assert_eq!(inst.k()[(0, 1)], 1.0);
        assert_eq!(inst.k()[(1, 0)], 1.0);
        assert!(AffinityInstance::from_matrix(Mat::zeros(5, 5)).is_err());
    }
}
