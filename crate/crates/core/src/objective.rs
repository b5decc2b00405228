use crate::stiefel::Mat;

/// A smooth function on `ℝ^{n×r}` with its Euclidean gradient.
///
/// Lipschitz constants are never needed: the inner solver's line search
/// adapts the step size instead.
pub trait Objective: Sync {
    /// Expected `(rows, cols)` of the argument.
    fn shape(&self) -> (usize, usize);

    fn value(&self, x: &Mat) -> f64;

    fn gradient(&self, x: &Mat) -> Mat;

    fn value_grad(&self, x: &Mat) -> (f64, Mat) {
        (self.value(x), self.gradient(x))
    }

    /// Hessian-vector product `∇²f(x)[h]`. The default is a central
    /// difference of the gradient with step `1e-5·(1 + ‖x‖_F)/‖h‖_F`.
    fn hessian_vec(&self, x: &Mat, h: &Mat) -> Mat {
        let hn = h.norm();
        if hn == 0.0 {
            return Mat::zeros(h.nrows(), h.ncols());
        }
        let step = 1e-5 * (1.0 + x.norm()) / hn;
        let g1 = self.gradient(&(x + h * step));
        let g0 = self.gradient(&(x - h * step));
        (g1 - g0) / (2.0 * step)
    }
}

impl<T: Objective + ?Sized> Objective for &T {
    fn shape(&self) -> (usize, usize) {
        (**self).shape()
    }
    fn value(&self, x: &Mat) -> f64 {
        (**self).value(x)
    }
    fn gradient(&self, x: &Mat) -> Mat {
        (**self).gradient(x)
    }
    fn value_grad(&self, x: &Mat) -> (f64, Mat) {
        (**self).value_grad(x)
    }
    fn hessian_vec(&self, x: &Mat, h: &Mat) -> Mat {
        (**self).hessian_vec(x, h)
    }
}

impl<T: Objective + ?Sized> Objective for Box<T> {
    fn shape(&self) -> (usize, usize) {
        (**self).shape()
    }
    fn value(&self, x: &Mat) -> f64 {
        (**self).value(x)
    }
    fn gradient(&self, x: &Mat) -> Mat {
        (**self).gradient(x)
    }
    fn value_grad(&self, x: &Mat) -> (f64, Mat) {
        (**self).value_grad(x)
    }
    fn hessian_vec(&self, x: &Mat, h: &Mat) -> Mat {
        (**self).hessian_vec(x, h)
    }
}
