use super::check_shape;
use crate::error::Result;
use crate::objective::Objective;
use crate::stiefel::Mat;

/// `‖X − C‖²_F` for a fixed target `C`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionProblem {
    pub c: Mat,
}

impl ProjectionProblem {
    pub fn new(c: Mat) -> Self {
        Self { c }
    }
}

pub fn proj_value(c: &Mat, x: &Mat) -> Result<f64> {
    check_shape(c.shape(), x)?;
    Ok((x - c).norm_squared())
}

pub fn proj_grad(c: &Mat, x: &Mat) -> Result<Mat> {
    check_shape(c.shape(), x)?;
    Ok((x - c) * 2.0)
}

impl Objective for ProjectionProblem {
    fn shape(&self) -> (usize, usize) {
        self.c.shape()
    }

    fn value(&self, x: &Mat) -> f64 {
        (x - &self.c).norm_squared()
    }

    fn gradient(&self, x: &Mat) -> Mat {
        (x - &self.c) * 2.0
    }

    fn hessian_vec(&self, _x: &Mat, h: &Mat) -> Mat {
        h * 2.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::random_stiefel_start;

    #[test]
    fn value_and_gradient_vanish_at_target() {
        let c = random_stiefel_start(5, 2, 1).into_inner();
        assert_eq!(proj_value(&c, &c).unwrap(), 0.0);
        assert_eq!(proj_grad(&c, &c).unwrap(), Mat::zeros(5, 2));
    }

    #[test]
    fn zero_target_gives_column_count() {
        let x = random_stiefel_start(6, 3, 2);
        let v = proj_value(&Mat::zeros(6, 3), x.mat()).unwrap();
        assert!((v - 3.0).abs() < 1e-13);
    }

    #[test]
    fn shape_mismatch() {
        assert!(proj_value(&Mat::zeros(3, 2), &Mat::zeros(2, 2)).is_err());
    }
}
