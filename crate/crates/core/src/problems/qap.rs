use super::check_shape;
use crate::error::{Error, Result};
use crate::objective::Objective;
use crate::stiefel::Mat;

/// A quadratic assignment instance `min ⟨A, PBPᵀ⟩` over permutations.
#[derive(Debug, Clone, PartialEq)]
pub struct QapInstance {
    pub name: String,
    pub a: Mat,
    pub b: Mat,
    pub best_known: Option<f64>,
}

impl QapInstance {
    pub fn new(name: impl Into<String>, a: Mat, b: Mat) -> Result<Self> {
        if !a.is_square() || a.shape() != b.shape() || a.nrows() == 0 {
            return Err(Error::Input(format!(
                "QAP matrices must be square with matching size, got {:?} and {:?}",
                a.shape(),
                b.shape()
            )));
        }
        Ok(Self {
            name: name.into(),
            a,
            b,
            best_known: None,
        })
    }

    pub fn n(&self) -> usize {
        self.a.nrows()
    }

    /// Classical objective `⟨A, PBPᵀ⟩` for the permutation `perm`, where
    /// `P[i, perm[i]] = 1`.
    pub fn permutation_cost(&self, perm: &[usize]) -> f64 {
        let n = self.n();
        let mut s = 0.0;
        for i in 0..n {
            for k in 0..n {
                s += self.a[(i, k)] * self.b[(perm[i], perm[k])];
            }
        }
        s
    }

    /// Exhaustive minimum over all `n!` permutations (small `n` only).
    pub fn brute_force_optimum(&self) -> (f64, Vec<usize>) {
        let n = self.n();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut best = (self.permutation_cost(&perm), perm.clone());
        // Heap's algorithm
        let mut c = vec![0usize; n];
        let mut i = 0;
        while i < n {
            if c[i] < i {
                if i % 2 == 0 {
                    perm.swap(0, i);
                } else {
                    perm.swap(c[i], i);
                }
                let v = self.permutation_cost(&perm);
                if v < best.0 {
                    best = (v, perm.clone());
                }
                c[i] += 1;
                i = 0;
            } else {
                c[i] = 0;
                i += 1;
            }
        }
        best
    }

    fn hadamard_sq(x: &Mat) -> Mat {
        x.component_mul(x)
    }

    fn lifted_value(&self, x: &Mat) -> f64 {
        let w = Self::hadamard_sq(x);
        self.a.dot(&(&w * &self.b * w.transpose()))
    }

    fn lifted_grad(&self, x: &Mat) -> Mat {
        let w = Self::hadamard_sq(x);
        let inner = &self.a * &w * self.b.transpose() + self.a.tr_mul(&w) * &self.b;
        x.component_mul(&inner) * 2.0
    }
}

/// `⟨A, W B Wᵀ⟩` with `W = X ∘ X`.
pub fn qap_lifted_value(inst: &QapInstance, x: &Mat) -> Result<f64> {
    check_shape((inst.n(), inst.n()), x)?;
    Ok(inst.lifted_value(x))
}

/// `2 X ∘ (A W Bᵀ + Aᵀ W B)` with `W = X ∘ X`.
pub fn qap_lifted_grad(inst: &QapInstance, x: &Mat) -> Result<Mat> {
    check_shape((inst.n(), inst.n()), x)?;
    Ok(inst.lifted_grad(x))
}

impl Objective for QapInstance {
    fn shape(&self) -> (usize, usize) {
        (self.n(), self.n())
    }

    fn value(&self, x: &Mat) -> f64 {
        self.lifted_value(x)
    }

    fn gradient(&self, x: &Mat) -> Mat {
        self.lifted_grad(x)
    }

    fn hessian_vec(&self, x: &Mat, h: &Mat) -> Mat {
        let w = x.component_mul(x);
        let dw = x.component_mul(h) * 2.0;
        let m = &self.a * &w * self.b.transpose() + self.a.transpose() * &w * &self.b;
        let dm = &self.a * &dw * self.b.transpose() + self.a.transpose() * &dw * &self.b;
        (h.component_mul(&m) + x.component_mul(&dm)) * 2.0
    }
}
