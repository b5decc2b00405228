//! Rounding an approximate solution onto `S₊ = St(n, r) ∩ ℝ₊^{n×r}`.
//!
//! Every point of `S₊` has at most one nonzero per row, so rounding picks a
//! column for each row and renormalizes.
//!
//! * `n > r`: each row goes to its argmax column (ties to the smallest index).
//!   An empty column `j` is filled with the row `i` maximizing `x_ij` among
//!   rows whose column keeps at least two rows. Kept entries are clamped at 0
//!   and columns normalized.
//! * `n = r`: greedy crossing-out. The largest remaining entry fixes a
//!   row/column pair until a permutation matrix is built.

use crate::error::{Error, Result};
use crate::stiefel::{orth_residual, Mat, StiefelPoint};

/// Membership test for `S₊` up to `tol` on orthonormality.
pub fn is_nonneg_orthogonal(x: &Mat, tol: f64) -> bool {
    x.iter().all(|&v| v >= 0.0)
        && x.row_iter().all(|row| row.iter().filter(|&&v| v != 0.0).count() <= 1)
        && orth_residual(x) <= tol
}

pub fn round_to_feasible(x: &Mat) -> Result<StiefelPoint> {
    let (n, r) = x.shape();
    if r == 0 || n < r {
        return Err(Error::RoundingFailure(format!("need n >= r >= 1, got {n}x{r}")));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::RoundingFailure("non-finite entries".into()));
    }
    let out = if n == r { greedy_permutation(x) } else { assign_rows(x)? };
    StiefelPoint::new(out).map_err(|e| Error::RoundingFailure(e.to_string()))
}

fn greedy_permutation(x: &Mat) -> Mat {
    let n = x.nrows();
    let mut entries: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    // stable sort keeps row-major order among ties
    entries.sort_by(|a, b| x[*b].total_cmp(&x[*a]));
    let mut row_used = vec![false; n];
    let mut col_used = vec![false; n];
    let mut p = Mat::zeros(n, n);
    let mut placed = 0;
    for (i, j) in entries {
        if !row_used[i] && !col_used[j] {
            row_used[i] = true;
            col_used[j] = true;
            p[(i, j)] = 1.0;
            placed += 1;
            if placed == n {
                break;
            }
        }
    }
    p
}

fn assign_rows(x: &Mat) -> Result<Mat> {
    let (n, r) = x.shape();
    let mut col_of: Vec<usize> = (0..n)
        .map(|i| {
            let mut best = 0;
            for j in 1..r {
                if x[(i, j)] > x[(i, best)] {
                    best = j;
                }
            }
            best
        })
        .collect();
    let mut counts = vec![0usize; r];
    for &c in &col_of {
        counts[c] += 1;
    }
    for j in 0..r {
        if counts[j] > 0 {
            continue;
        }
        let mut pick: Option<usize> = None;
        for i in 0..n {
            if counts[col_of[i]] >= 2 && pick.is_none_or(|p| x[(i, j)] > x[(p, j)]) {
                pick = Some(i);
            }
        }
        let i = pick.ok_or_else(|| Error::RoundingFailure(format!("cannot fill column {j}")))?;
        counts[col_of[i]] -= 1;
        col_of[i] = j;
        counts[j] = 1;
    }

    let mut z = Mat::zeros(n, r);
    for (i, &j) in col_of.iter().enumerate() {
        z[(i, j)] = x[(i, j)].max(0.0);
    }
    for (j, mut col) in z.column_iter_mut().enumerate() {
        let nrm = col.norm();
        if nrm == 0.0 {
            return Err(Error::RoundingFailure(format!("column {j} has no positive entry")));
        }
        if (nrm - 1.0).abs() > 4.0 * f64::EPSILON {
            col /= nrm;
        }
    }
    Ok(z)
}
