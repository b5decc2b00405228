use crate::error::{Error, Result};

/// `(f − best)/best × 100`.
pub fn relgap(f_final: f64, best: f64) -> Result<f64> {
    if best == 0.0 {
        return Err(Error::UndefinedGap);
    }
    Ok((f_final - best) / best * 100.0)
}

/// Median of a nonempty slice (mean of the two middle values for even length).
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    Some(if v.len() % 2 == 1 { v[m] } else { 0.5 * (v[m - 1] + v[m]) })
}

/// Purity, entropy and normalized mutual information of a clustering.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusteringScores {
    pub purity: f64,
    pub entropy: f64,
    pub nmi: f64,
}

/// Scores `pred` against `truth`; labels are `1..=r`.
///
/// With `r = 1` the entropy normalizer `log₂ r` vanishes and entropy is
/// reported as 0; NMI is 1 when both clusterings are trivial.
pub fn clustering_metrics(truth: &[usize], pred: &[usize], r: usize) -> Result<ClusteringScores> {
    if truth.len() != pred.len() || truth.is_empty() {
        return Err(Error::Input(format!(
            "label vectors must be nonempty and of equal length ({} vs {})",
            truth.len(),
            pred.len()
        )));
    }
    if let Some(&bad) = truth.iter().chain(pred).find(|&&l| l == 0 || l > r) {
        return Err(Error::Input(format!("label {bad} outside 1..={r}")));
    }
    let n = truth.len() as f64;
    // counts[i][j] = |truth cluster i ∩ predicted cluster j|
    let mut counts = vec![vec![0usize; r]; r];
    for (&t, &p) in truth.iter().zip(pred) {
        counts[t - 1][p - 1] += 1;
    }
    let n_truth: Vec<f64> = (0..r).map(|i| counts[i].iter().sum::<usize>() as f64).collect();
    let n_pred: Vec<f64> = (0..r).map(|j| (0..r).map(|i| counts[i][j]).sum::<usize>() as f64).collect();

    let purity = (0..r)
        .map(|j| (0..r).map(|i| counts[i][j]).max().unwrap_or(0) as f64)
        .sum::<f64>()
        / n;

    let mut ent = 0.0;
    for j in 0..r {
        for i in 0..r {
            let c = counts[i][j] as f64;
            if c > 0.0 {
                ent -= c * (c / n_pred[j]).log2();
            }
        }
    }
    let entropy = if r > 1 { ent / (n * (r as f64).log2()) } else { 0.0 };

    let lp = |c: f64| (c / n).log2();
    let h = |sizes: &[f64]| -> f64 {
        sizes
            .iter()
            .filter(|&&s| s > 0.0)
            .map(|&s| -(s / n) * lp(s))
            .sum()
    };
    let mut mi = 0.0;
    for i in 0..r {
        for j in 0..r {
            let c = counts[i][j] as f64;
            if c > 0.0 {
                mi += (c / n) * (lp(c) - lp(n_truth[i]) - lp(n_pred[j]));
            }
        }
    }
    let hmax = h(&n_truth).max(h(&n_pred));
    let nmi = if hmax > 0.0 { mi / hmax } else { 1.0 };
    Ok(ClusteringScores { purity, entropy, nmi })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gap_values() {
        assert_eq!(relgap(10.0, 10.0).unwrap(), 0.0);
        assert!((relgap(105.0, 100.0).unwrap() - 5.0).abs() < 1e-12);
        assert_eq!(relgap(1.0, 0.0), Err(Error::UndefinedGap));
    }

    #[test]
    fn median_matches_sort() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), Some(2.0));
        assert_eq!(median(&[4.0, 1.0, 3.0, 2.0]), Some(2.5));
        assert_eq!(median(&[]), None);
    }

    #[test]
    fn perfect_clustering_is_exact() {
        let t = [1, 1, 2, 3, 3, 3, 2];
        let s = clustering_metrics(&t, &t, 3).unwrap();
        assert_eq!((s.purity, s.entropy, s.nmi), (1.0, 0.0, 1.0));
    }

    #[test]
    fn single_predicted_cluster() {
        let s = clustering_metrics(&[1, 1, 2, 2], &[1, 1, 1, 1], 2).unwrap();
        assert_eq!(s.purity, 0.5);
        assert_eq!(s.nmi, 0.0);
        assert_eq!(s.entropy, 1.0);
    }

    #[test]
    fn relabeling_invariance() {
        let t = [1, 2, 2, 3, 1, 3, 3, 2];
        let p = [2, 2, 3, 1, 2, 1, 3, 3];
        let q: Vec<usize> = p.iter().map(|&l| [3, 1, 2][l - 1]).collect();
        let a = clustering_metrics(&t, &p, 3).unwrap();
        let b = clustering_metrics(&t, &q, 3).unwrap();
        assert!((a.purity - b.purity).abs() < 1e-15);
        assert!((a.entropy - b.entropy).abs() < 1e-15);
        assert!((a.nmi - b.nmi).abs() < 1e-15);
    }

    #[test]
    fn out_of_range_labels() {
        assert!(clustering_metrics(&[1, 4], &[1, 1], 3).is_err());
        assert!(clustering_metrics(&[0, 1], &[1, 1], 3).is_err());
        assert!(clustering_metrics(&[1], &[1, 1], 3).is_err());
    }
}
