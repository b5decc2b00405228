//! Dense primitives for the Stiefel manifold `St(n, r) = {X : XᵀX = I_r}`.
//!
//! The tangent space at `X` is `{H : XᵀH + HᵀX = 0}` and the normal space is
//! `{XS : S symmetric}`. Projections, retractions and distances below all work
//! on `nalgebra` dense matrices.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Real dense matrix, the numeric carrier for everything in this crate.
pub type Mat = DMatrix<f64>;

/// Tolerance on `‖XᵀX − I‖_F` accepted by [`StiefelPoint::new`].
pub const ORTH_TOL: f64 = 1e-10;

/// Relative tolerance on `‖A_X(H)‖_F` accepted by [`TangentVector::new`].
pub const TANGENT_TOL: f64 = 1e-10;

/// `A_X(H) = XᵀH + HᵀX`.
pub fn a_op(x: &Mat, h: &Mat) -> Mat {
    let xth = x.tr_mul(h);
    &xth + xth.transpose()
}

/// `‖XᵀX − I‖_F`.
pub fn orth_residual(x: &Mat) -> f64 {
    let mut g = x.tr_mul(x);
    for i in 0..g.nrows() {
        g[(i, i)] -= 1.0;
    }
    g.norm()
}

/// Singular values in nonincreasing order.
pub fn singular_values(x: &Mat) -> Vec<f64> {
    let mut s: Vec<f64> = x.clone().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Frobenius distance from `x` to `St(n, r)`: `sqrt(Σ (σᵢ − 1)²)`.
pub fn dist_to_stiefel(x: &Mat) -> f64 {
    singular_values(x)
        .iter()
        .map(|s| (s - 1.0) * (s - 1.0))
        .sum::<f64>()
        .sqrt()
}

/// A matrix with orthonormal columns, certified at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct StiefelPoint {
    mat: Mat,
    orth_residual: f64,
}

impl StiefelPoint {
    /// Wraps `mat`, rejecting it unless `‖XᵀX − I‖_F ≤ ORTH_TOL`.
    pub fn new(mat: Mat) -> Result<Self> {
        check_shape(&mat)?;
        let res = orth_residual(&mat);
        if !(res <= ORTH_TOL) {
            return Err(Error::NotOrthonormal(res));
        }
        Ok(Self {
            mat,
            orth_residual: res,
        })
    }

    /// Q-factor (positive-diagonal convention) of `mat`.
    pub fn orthonormalize(mat: &Mat) -> Result<Self> {
        check_shape(mat)?;
        let q = qr_positive(mat)?;
        Self::new(q)
    }

    pub fn mat(&self) -> &Mat {
        &self.mat
    }

    pub fn into_inner(self) -> Mat {
        self.mat
    }

    pub fn orth_residual(&self) -> f64 {
        self.orth_residual
    }

    pub fn nrows(&self) -> usize {
        self.mat.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.mat.ncols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.mat.shape()
    }
}

fn check_shape(mat: &Mat) -> Result<()> {
    let (n, r) = mat.shape();
    if r == 0 || n < r {
        return Err(Error::Parameter(format!(
            "a Stiefel point needs rows >= cols >= 1, got {n}x{r}"
        )));
    }
    if mat.iter().any(|v| !v.is_finite()) {
        return Err(Error::Parameter("matrix has non-finite entries".into()));
    }
    Ok(())
}

/// A direction in the tangent space at `base`.
#[derive(Debug, Clone)]
pub struct TangentVector<'a> {
    base: &'a StiefelPoint,
    dir: Mat,
}

impl<'a> TangentVector<'a> {
    /// Checks tangency: `‖XᵀH + HᵀX‖_F ≤ TANGENT_TOL · max(1, ‖H‖_F)`.
    pub fn new(base: &'a StiefelPoint, dir: Mat) -> Result<Self> {
        if dir.shape() != base.shape() {
            return Err(Error::dim(base.shape(), dir.shape()));
        }
        let defect = a_op(base.mat(), &dir).norm();
        if defect > TANGENT_TOL * dir.norm().max(1.0) {
            return Err(Error::Precondition(format!(
                "direction is not tangent: ||A_X(H)||_F = {defect:e}"
            )));
        }
        Ok(Self { base, dir })
    }

    pub fn zero(base: &'a StiefelPoint) -> Self {
        let (n, r) = base.shape();
        Self {
            base,
            dir: Mat::zeros(n, r),
        }
    }

    pub fn base(&self) -> &'a StiefelPoint {
        self.base
    }

    pub fn dir(&self) -> &Mat {
        &self.dir
    }

    pub fn into_dir(self) -> Mat {
        self.dir
    }

    /// `s · H`, still tangent at the same base.
    pub fn scale(&self, s: f64) -> Self {
        Self {
            base: self.base,
            dir: &self.dir * s,
        }
    }
}

/// Raw tangent projection `Z − ½ X A_X(Z)`.
pub fn proj_tangent_raw(x: &Mat, z: &Mat) -> Mat {
    let a = a_op(x, z);
    z - x * a * 0.5
}

/// Orthogonal projection of `z` onto the tangent space at `x`.
pub fn proj_tangent<'a>(x: &'a StiefelPoint, z: &Mat) -> Result<TangentVector<'a>> {
    if z.shape() != x.shape() {
        return Err(Error::dim(x.shape(), z.shape()));
    }
    Ok(TangentVector {
        base: x,
        dir: proj_tangent_raw(x.mat(), z),
    })
}

/// Riemannian gradient under the embedded metric.
pub fn riemannian_grad<'a>(x: &'a StiefelPoint, euclid_grad: &Mat) -> Result<TangentVector<'a>> {
    proj_tangent(x, euclid_grad)
}

/// Thin Q-factor of `m` with `diag(R) > 0`.
pub(crate) fn qr_positive(m: &Mat) -> Result<Mat> {
    let (n, r) = m.shape();
    let qr = m.clone().qr();
    let mut q = qr.q();
    let rr = qr.r();
    let scale = m.norm().max(f64::MIN_POSITIVE);
    let tol = f64::EPSILON * (n.max(r) as f64) * scale;
    for j in 0..r {
        let d = rr[(j, j)];
        if !(d.abs() > tol) {
            return Err(Error::RetractionFailure);
        }
        if d < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    Ok(q)
}

/// Polar factor `UVᵀ` of `m`.
pub(crate) fn polar_factor(m: &Mat) -> Result<Mat> {
    let (n, r) = m.shape();
    let svd = m.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if !(smin > f64::EPSILON * (n.max(r) as f64) * smax.max(f64::MIN_POSITIVE)) {
        return Err(Error::RetractionFailure);
    }
    let u = svd.u.ok_or(Error::RetractionFailure)?;
    let vt = svd.v_t.ok_or(Error::RetractionFailure)?;
    Ok(u * vt)
}

fn check_base(x: &StiefelPoint, v: &TangentVector<'_>) -> Result<()> {
    if std::ptr::eq(x, v.base) || x.mat == v.base.mat {
        Ok(())
    } else {
        Err(Error::Precondition(
            "tangent vector is attached to a different base point".into(),
        ))
    }
}

/// QR retraction `qf(X + V)`; `V = 0` returns `X` exactly.
pub fn retract_qr(x: &StiefelPoint, v: &TangentVector<'_>) -> Result<StiefelPoint> {
    check_base(x, v)?;
    if v.dir.iter().all(|&e| e == 0.0) {
        return Ok(x.clone());
    }
    StiefelPoint::new(qr_positive(&(x.mat() + v.dir()))?)
}

/// Polar retraction `UVᵀ` where `X + V = UΣVᵀ`; `V = 0` returns `X` exactly.
pub fn retract_polar(x: &StiefelPoint, v: &TangentVector<'_>) -> Result<StiefelPoint> {
    check_base(x, v)?;
    if v.dir.iter().all(|&e| e == 0.0) {
        return Ok(x.clone());
    }
    StiefelPoint::new(polar_factor(&(x.mat() + v.dir()))?)
}

/// `I_{n×r}`.
pub fn rect_identity(n: usize, r: usize) -> Mat {
    Mat::from_fn(n, r, |i, j| if i == j { 1.0 } else { 0.0 })
}

/// Frobenius inner product.
pub fn inner(a: &Mat, b: &Mat) -> f64 {
    a.dot(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::random_stiefel_start;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn gaussian(n: usize, r: usize, seed: u64) -> Mat {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Mat::from_fn(n, r, |_, _| StandardNormal.sample(&mut rng))
    }

    #[test]
    fn normal_directions_project_to_zero() {
        let x = StiefelPoint::new(rect_identity(3, 2)).unwrap();
        let s = Mat::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 3.0]);
        let z = x.mat() * s;
        let p = proj_tangent(&x, &z).unwrap();
        assert!(p.dir().norm() < 1e-15);
        let g = riemannian_grad(&x, &z).unwrap();
        assert!(g.dir().norm() < 1e-15);
    }

    #[test]
    fn tangent_directions_are_fixed() {
        let x = random_stiefel_start(5, 3, 1);
        let h = proj_tangent(&x, &gaussian(5, 3, 2)).unwrap().into_dir();
        let p = proj_tangent(&x, &h).unwrap();
        assert!((p.dir() - &h).norm() < 1e-14);
    }

    #[test]
    fn projection_is_idempotent_and_orthogonal() {
        let x = random_stiefel_start(8, 3, 7);
        let z = gaussian(8, 3, 8);
        let p1 = proj_tangent(&x, &z).unwrap().into_dir();
        let p2 = proj_tangent(&x, &p1).unwrap().into_dir();
        assert!((&p1 - &p2).norm() < 1e-12);
        assert!(a_op(x.mat(), &p1).norm() < 1e-12);
        let h = proj_tangent(&x, &gaussian(8, 3, 9)).unwrap().into_dir();
        assert!(inner(&(&z - &p1), &h).abs() < 1e-10);
    }

    #[test]
    fn riemannian_grad_is_the_projection() {
        let x = random_stiefel_start(6, 2, 3);
        let g = gaussian(6, 2, 4);
        let a = riemannian_grad(&x, &g).unwrap().into_dir();
        let b = proj_tangent(&x, &g).unwrap().into_dir();
        assert_eq!(a, b);
    }

    #[test]
    fn shape_mismatch_is_a_dimension_error() {
        let x = random_stiefel_start(4, 2, 0);
        assert!(matches!(
            proj_tangent(&x, &Mat::zeros(3, 2)),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn zero_step_retracts_to_base_exactly() {
        let x = random_stiefel_start(7, 3, 11);
        let v = TangentVector::zero(&x);
        assert_eq!(retract_qr(&x, &v).unwrap(), x);
        assert_eq!(retract_polar(&x, &v).unwrap(), x);
    }

    #[test]
    fn polar_retraction_of_unit_vector() {
        let x = StiefelPoint::new(rect_identity(2, 1)).unwrap();
        let v = TangentVector::new(&x, Mat::from_column_slice(2, 1, &[0.0, 1.0])).unwrap();
        let y = retract_polar(&x, &v).unwrap();
        let h = 1.0 / 2f64.sqrt();
        assert!((y.mat()[(0, 0)] - h).abs() < 1e-15);
        assert!((y.mat()[(1, 0)] - h).abs() < 1e-15);
        let yq = retract_qr(&x, &v).unwrap();
        assert!((yq.mat() - y.mat()).norm() < 1e-15);
    }

    #[test]
    fn qr_retraction_is_first_order() {
        let x = random_stiefel_start(6, 3, 21);
        let mut xi = proj_tangent(&x, &gaussian(6, 3, 22)).unwrap().into_dir();
        xi /= xi.norm();
        let ratios: Vec<f64> = [1e-1, 1e-2, 1e-3]
            .iter()
            .map(|&t| {
                let v = TangentVector::new(&x, &xi * t).unwrap();
                let y = retract_qr(&x, &v).unwrap();
                (y.mat() - (x.mat() + v.dir())).norm() / t
            })
            .collect();
        // ratio ~ c·t: each tenfold shrink of t shrinks the ratio about tenfold
        for w in ratios.windows(2) {
            let q = w[0] / w[1];
            assert!(q > 5.0 && q < 20.0, "ratios {ratios:?}");
        }
    }

    #[test]
    fn retraction_rejects_rank_deficient_input() {
        assert_eq!(
            qr_positive(&Mat::from_column_slice(3, 2, &[1.0, 0.0, 0.0, 2.0, 0.0, 0.0])),
            Err(Error::RetractionFailure)
        );
        assert_eq!(
            polar_factor(&Mat::from_column_slice(3, 2, &[1.0, 0.0, 0.0, 2.0, 0.0, 0.0])),
            Err(Error::RetractionFailure)
        );
    }

    #[test]
    fn dist_to_stiefel_values() {
        let x = random_stiefel_start(5, 2, 5);
        assert!(dist_to_stiefel(x.mat()) <= 1e-12);
        let two = rect_identity(4, 2) * 2.0;
        assert!((dist_to_stiefel(&two) - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn orthonormalize_rejects_bad_shapes() {
        assert!(StiefelPoint::orthonormalize(&Mat::zeros(2, 3)).is_err());
        assert!(StiefelPoint::new(rect_identity(3, 2) * 2.0).is_err());
    }

    #[test]
    fn non_tangent_direction_rejected() {
        let x = StiefelPoint::new(rect_identity(3, 2)).unwrap();
        assert!(TangentVector::new(&x, rect_identity(3, 2)).is_err());
    }
}
