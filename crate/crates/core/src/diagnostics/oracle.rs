use crate::error::{Error, Result};
use crate::stiefel::Mat;

/// Largest number of support patterns `(r + 1)^n` the oracle will enumerate.
pub const ORACLE_LIMIT: usize = 1_000_000;

/// Exact distance from `x` to `S₊` (and a nearest point) by enumerating
/// every assignment of rows to a column or to nothing.
///
/// For a fixed pattern the nearest feasible point puts, in each column, the
/// normalized positive part of `x` on its rows; if a column's rows carry no
/// positive mass, its unit mass goes on the largest entry. Patterns with an
/// empty column are infeasible.
pub fn brute_force_dist_splus(x: &Mat) -> Result<(f64, Mat)> {
    let (n, r) = x.shape();
    let patterns = ((r + 1) as f64).powi(n as i32);
    if r == 0 || n < r || patterns > ORACLE_LIMIT as f64 {
        return Err(Error::OracleSize {
            patterns,
            limit: ORACLE_LIMIT,
        });
    }
    let total = patterns as usize;
    let mut assign = vec![0usize; n];
    let mut best: Option<(f64, Mat)> = None;
    let mut z = Mat::zeros(n, r);

    for code in 0..total {
        let mut c = code;
        for a in assign.iter_mut() {
            *a = c % (r + 1);
            c /= r + 1;
        }
        if !fill_candidate(x, &assign, &mut z) {
            continue;
        }
        let d = (x - &z).norm();
        if best.as_ref().is_none_or(|(bd, _)| d < *bd) {
            best = Some((d, z.clone()));
        }
    }
    best.ok_or_else(|| Error::Input("no feasible support pattern".into()))
}

fn fill_candidate(x: &Mat, assign: &[usize], z: &mut Mat) -> bool {
    let (n, r) = x.shape();
    z.fill(0.0);
    for j in 0..r {
        let mut any = false;
        let mut pos2 = 0.0;
        let mut top: Option<usize> = None;
        for i in 0..n {
            if assign[i] != j {
                continue;
            }
            any = true;
            let v = x[(i, j)];
            if v > 0.0 {
                pos2 += v * v;
            }
            if top.is_none_or(|t| v > x[(t, j)]) {
                top = Some(i);
            }
        }
        if !any {
            return false;
        }
        if pos2 > 0.0 {
            let nrm = pos2.sqrt();
            for i in 0..n {
                if assign[i] == j && x[(i, j)] > 0.0 {
                    z[(i, j)] = x[(i, j)] / nrm;
                }
            }
        } else if let Some(t) = top {
            z[(t, j)] = 1.0;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::is_nonneg_orthogonal;

    #[test]
    fn feasible_points_have_distance_zero() {
        let s = 1.0 / 2f64.sqrt();
        let x = Mat::from_row_slice(3, 2, &[s, 0.0, 0.0, 1.0, s, 0.0]);
        let (d, z) = brute_force_dist_splus(&x).unwrap();
        assert!(d < 1e-15);
        assert!((z - x).norm() < 1e-15);
    }

    #[test]
    fn nonnegative_sphere_projection() {
        let x = Mat::from_column_slice(2, 1, &[3.0, 4.0]);
        let (d, z) = brute_force_dist_splus(&x).unwrap();
        assert!((d - 4.0).abs() < 1e-14);
        assert!((z[(0, 0)] - 0.6).abs() < 1e-15 && (z[(1, 0)] - 0.8).abs() < 1e-15);
    }

    #[test]
    fn zero_row_sequence_stays_far() {
        let k = 10.0;
        let x = Mat::from_row_slice(3, 2, &[1.0, 0.0, 0.0, 1.0, 1.0 / k, 1.0 / k]);
        let (d, z) = brute_force_dist_splus(&x).unwrap();
        assert!(d >= 1.0 / k);
        assert!(is_nonneg_orthogonal(&z, 1e-12));
    }

    #[test]
    fn nonpositive_column_uses_largest_entry() {
        let x = Mat::from_column_slice(3, 1, &[-0.5, -0.1, -2.0]);
        let (d, z) = brute_force_dist_splus(&x).unwrap();
        assert_eq!(z[(1, 0)], 1.0);
        let expect = (0.25 + 1.1f64.powi(2) + 4.0f64).sqrt();
        assert!((d - expect).abs() < 1e-14);
    }

    #[test]
    fn size_guard() {
        assert!(matches!(
            brute_force_dist_splus(&Mat::zeros(20, 1)),
            Err(Error::OracleSize { .. })
        ));
        assert!(brute_force_dist_splus(&Mat::from_element(12, 1, 1.0)).is_ok());
    }
}
