use crate::error::{Error, Result};
use crate::stiefel::StiefelPoint;

/// Rows with norm at or below this count as zero rows.
const ZERO_ROW: f64 = 1e-8;
/// Entries at or below this count as zero.
const ZERO_ENTRY: f64 = 1e-8;

/// Smallest entry of `x` above the zero threshold.
pub fn smallest_nonzero_entry(x: &StiefelPoint) -> Option<f64> {
    x.mat()
        .iter()
        .copied()
        .filter(|&v| v > ZERO_ENTRY)
        .min_by(f64::total_cmp)
}

/// The piecewise constant without any hypothesis check:
/// `2.1√n` if `n = r`, `1` if `n > r = 1`, else `2.1√r(1 + 3r(n − r))/x_min`.
pub fn kappa_formula(n: usize, r: usize, smallest_nonzero: f64) -> f64 {
    if n == r {
        2.1 * (n as f64).sqrt()
    } else if r == 1 {
        1.0
    } else {
        2.1 * (r as f64).sqrt() * (1.0 + 3.0 * (r * (n - r)) as f64) / smallest_nonzero
    }
}

/// Error-bound constant at a feasible point `xbar`.
///
/// For `n > r > 1` the bound needs `xbar` to have no zero rows; otherwise a
/// precondition error is returned.
pub fn kappa(xbar: &StiefelPoint) -> Result<f64> {
    let (n, r) = xbar.shape();
    let m = xbar.mat();
    if m.iter().any(|&v| v < -1e-12)
        || m.row_iter().any(|row| row.iter().filter(|v| v.abs() > ZERO_ENTRY).count() > 1)
    {
        return Err(Error::Precondition("point is not in the nonnegative orthogonal set".into()));
    }
    if n > r && r > 1 && m.row_iter().any(|row| row.norm() <= ZERO_ROW) {
        return Err(Error::Precondition(
            "the error-bound constant needs a point without zero rows when n > r > 1".into(),
        ));
    }
    let xmin = smallest_nonzero_entry(xbar)
        .ok_or_else(|| Error::Precondition("point has no nonzero entry".into()))?;
    Ok(kappa_formula(n, r, xmin))
}
