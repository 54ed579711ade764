//! Nonparametric comparison of methods over multiple cases: average ranks,
//! Friedman test (with the Iman-Davenport F variant), Nemenyi post-hoc
//! critical distance and the Wilcoxon signed-ranks test.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF, FisherSnedecor, Normal};

use crate::error::{Error, Result};

/// N cases (datasets or targets) x K methods of error scores, lower better.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreMatrix {
    pub case_labels: Vec<String>,
    pub method_labels: Vec<String>,
    /// Row-major, `case_labels.len()` x `method_labels.len()`.
    pub scores: Vec<Vec<f64>>,
}

impl ScoreMatrix {
    pub fn new(
        case_labels: Vec<String>,
        method_labels: Vec<String>,
        scores: Vec<Vec<f64>>,
    ) -> Result<Self> {
        if scores.len() != case_labels.len()
            || scores.iter().any(|r| r.len() != method_labels.len())
        {
            return Err(Error::DimensionMismatch(
                "score matrix shape does not match labels".into(),
            ));
        }
        if scores.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(
                "score matrix contains non-finite entries".into(),
            ));
        }
        Ok(ScoreMatrix {
            case_labels,
            method_labels,
            scores,
        })
    }

    pub fn n(&self) -> usize {
        self.scores.len()
    }

    pub fn k(&self) -> usize {
        self.method_labels.len()
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.scores.iter().map(|r| r[j]).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WilcoxonResult {
    pub method_a: String,
    pub method_b: String,
    pub w_plus: f64,
    pub w_minus: f64,
    pub dropped_zeros: usize,
    pub p_two_sided: f64,
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsResult {
    pub method_labels: Vec<String>,
    pub avg_ranks: Vec<f64>,
    pub friedman_chi2: f64,
    pub friedman_p: f64,
    pub iman_davenport_f: f64,
    pub iman_davenport_p: f64,
    pub alpha: f64,
    pub nemenyi_cd: f64,
    /// Index pairs (i, j), i < j, whose average-rank gap exceeds the CD.
    pub significant_pairs: Vec<(usize, usize)>,
    /// Maximal groups of methods that are not significantly different,
    /// as index sets sorted by rank.
    pub groups: Vec<Vec<usize>>,
    pub wilcoxon: Vec<WilcoxonResult>,
}

/// Fractional ranking of one row: rank 1 is the smallest score, ties receive
/// the mean of the positions they straddle.
pub fn rank_row(scores: &[f64]) -> Vec<f64> {
    let k = scores.len();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    let mut ranks = vec![0.0; k];
    let mut i = 0;
    while i < k {
        let mut j = i;
        while j + 1 < k && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            ranks[idx] = avg;
        }
        i = j + 1;
    }
    ranks
}

/// Column means of per-row fractional ranks.
pub fn average_ranks(matrix: &ScoreMatrix) -> Result<Vec<f64>> {
    if matrix.n() == 0 {
        return Err(Error::InvalidArgument("empty score matrix".into()));
    }
    let k = matrix.k();
    let mut sums = vec![0.0; k];
    for row in &matrix.scores {
        for (j, r) in rank_row(row).into_iter().enumerate() {
            sums[j] += r;
        }
    }
    Ok(sums.into_iter().map(|s| s / matrix.n() as f64).collect())
}

/// Friedman chi-square over average ranks plus the Iman-Davenport F
/// correction.
pub fn friedman_test(matrix: &ScoreMatrix) -> Result<(f64, f64, f64, f64)> {
    let n = matrix.n() as f64;
    let k = matrix.k() as f64;
    if matrix.n() < 2 || matrix.k() < 2 {
        return Err(Error::InvalidArgument(
            "friedman test needs N >= 2 and K >= 2".into(),
        ));
    }
    let ranks = average_ranks(matrix)?;
    let sum_sq: f64 = ranks.iter().map(|r| r * r).sum();
    let chi2 = 12.0 * n / (k * (k + 1.0)) * (sum_sq - k * (k + 1.0) * (k + 1.0) / 4.0);
    let chi2 = chi2.max(0.0);
    let chi_p = if chi2 == 0.0 {
        1.0
    } else {
        1.0 - ChiSquared::new(k - 1.0).unwrap().cdf(chi2)
    };
    // F_F = (N-1) chi2 / (N(K-1) - chi2)
    let denom = n * (k - 1.0) - chi2;
    let (f_stat, f_p) = if denom <= 0.0 {
        (f64::INFINITY, 0.0)
    } else {
        let f_stat = (n - 1.0) * chi2 / denom;
        let dist = FisherSnedecor::new(k - 1.0, (k - 1.0) * (n - 1.0)).unwrap();
        let p = if f_stat == 0.0 { 1.0 } else { 1.0 - dist.cdf(f_stat) };
        (f_stat, p)
    };
    Ok((chi2, chi_p, f_stat, f_p))
}

/// Critical values q_alpha for the Nemenyi test (studentized range over
/// sqrt(2), infinite degrees of freedom), K = 2..=20.
const Q_05: [f64; 19] = [
    1.960, 2.343, 2.569, 2.728, 2.850, 2.949, 3.031, 3.102, 3.164, 3.219, 3.268, 3.313, 3.354,
    3.391, 3.426, 3.458, 3.489, 3.517, 3.544,
];
const Q_10: [f64; 19] = [
    1.645, 2.052, 2.291, 2.460, 2.589, 2.693, 2.780, 2.855, 2.920, 2.978, 3.030, 3.077, 3.120,
    3.159, 3.196, 3.230, 3.261, 3.291, 3.319,
];

/// Nemenyi critical distance `q_alpha(K) * sqrt(K(K+1)/(6N))`.
pub fn nemenyi_cd(k: usize, n: usize, alpha: f64) -> Result<f64> {
    if !(2..=20).contains(&k) {
        return Err(Error::InvalidArgument(format!(
            "no tabulated q value for K={k}"
        )));
    }
    if n < 1 {
        return Err(Error::InvalidArgument("N must be >= 1".into()));
    }
    let q = if (alpha - 0.05).abs() < 1e-12 {
        Q_05[k - 2]
    } else if (alpha - 0.10).abs() < 1e-12 {
        Q_10[k - 2]
    } else {
        return Err(Error::InvalidArgument(format!(
            "unsupported alpha {alpha}; use 0.05 or 0.10"
        )));
    };
    Ok(q * ((k * (k + 1)) as f64 / (6.0 * n as f64)).sqrt())
}

/// Pairs whose rank gap exceeds the CD, and the maximal groups of mutually
/// non-significant methods (the connecting bars of a CD diagram).
pub fn classify_pairs(avg_ranks: &[f64], cd: f64) -> (Vec<(usize, usize)>, Vec<Vec<usize>>) {
    let k = avg_ranks.len();
    let mut pairs = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            if (avg_ranks[i] - avg_ranks[j]).abs() > cd {
                pairs.push((i, j));
            }
        }
    }
    // rank differences define an interval structure over the sorted order
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| avg_ranks[a].total_cmp(&avg_ranks[b]));
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for start in 0..k {
        let mut end = start;
        while end + 1 < k && avg_ranks[order[end + 1]] - avg_ranks[order[start]] <= cd {
            end += 1;
        }
        let group: Vec<usize> = order[start..=end].to_vec();
        // keep only maximal groups
        if groups
            .last()
            .is_none_or(|prev| !group.iter().all(|g| prev.contains(g)))
        {
            groups.push(group);
        }
    }
    (pairs, groups)
}

/// Wilcoxon signed-ranks test for paired samples. Zero differences are
/// dropped (count reported). Exact conditional distribution for N <= 20,
/// normal approximation without continuity correction above that; `exact`
/// may force either path.
pub fn wilcoxon_signed_ranks(
    a: &[f64],
    b: &[f64],
    exact: Option<bool>,
) -> Result<(f64, f64, f64, usize, bool)> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch(
            "paired series of different lengths".into(),
        ));
    }
    let diffs: Vec<f64> = a
        .iter()
        .zip(b)
        .map(|(&x, &y)| x - y)
        .filter(|d| *d != 0.0)
        .collect();
    let dropped = a.len() - diffs.len();
    let n = diffs.len();
    if n == 0 {
        return Err(Error::InvalidArgument(
            "all paired differences are zero".into(),
        ));
    }
    let abs: Vec<f64> = diffs.iter().map(|d| d.abs()).collect();
    let ranks = rank_row(&abs);
    let w_plus: f64 = diffs
        .iter()
        .zip(&ranks)
        .filter(|(d, _)| **d > 0.0)
        .map(|(_, r)| r)
        .sum();
    let w_minus: f64 = diffs
        .iter()
        .zip(&ranks)
        .filter(|(d, _)| **d < 0.0)
        .map(|(_, r)| r)
        .sum();
    let use_exact = exact.unwrap_or(n <= 20);
    let p = if use_exact {
        exact_p(&ranks, w_plus.min(w_minus))
    } else {
        let nf = n as f64;
        let mean = nf * (nf + 1.0) / 4.0;
        let sd = (nf * (nf + 1.0) * (2.0 * nf + 1.0) / 24.0).sqrt();
        let z = (w_plus.min(w_minus) - mean) / sd;
        let normal = Normal::new(0.0, 1.0).unwrap();
        (2.0 * normal.cdf(z)).min(1.0)
    };
    Ok((w_plus, w_minus, p, dropped, use_exact))
}

/// Exact two-sided p conditional on the observed (possibly tied) ranks:
/// enumerate the 2^N sign assignments by dynamic programming over doubled
/// ranks (ties produce half-integer ranks).
fn exact_p(ranks: &[f64], w_min: f64) -> f64 {
    let doubled: Vec<usize> = ranks.iter().map(|r| (2.0 * r).round() as usize).collect();
    let total: usize = doubled.iter().sum();
    let mut counts = vec![0.0f64; total + 1];
    counts[0] = 1.0;
    let mut reach = 0usize;
    for &r in &doubled {
        reach += r;
        for s in (r..=reach).rev() {
            counts[s] += counts[s - r];
        }
    }
    let w2 = (2.0 * w_min).round() as usize;
    let below: f64 = counts[..=w2.min(total)].iter().sum();
    let all = f64_total(ranks.len());
    (2.0 * below / all).min(1.0)
}

fn f64_total(n: usize) -> f64 {
    (n as f64).exp2()
}

pub struct StatsOptions {
    pub alpha: f64,
    /// Pairs of method labels to compare with Wilcoxon.
    pub wilcoxon_pairs: Vec<(String, String)>,
    /// Force exact/approximate Wilcoxon; `None` picks by N <= 20.
    pub wilcoxon_exact: Option<bool>,
}

impl Default for StatsOptions {
    fn default() -> Self {
        StatsOptions {
            alpha: 0.05,
            wilcoxon_pairs: Vec::new(),
            wilcoxon_exact: None,
        }
    }
}

/// Full comparison pipeline over a score matrix.
///
/// `analyze` runs ranks, Friedman, Nemenyi and any requested Wilcoxon pairs.
pub fn analyze(matrix: &ScoreMatrix, options: &StatsOptions) -> Result<StatsResult> {
    let avg_ranks = average_ranks(matrix)?;
    let (chi2, chi_p, f_stat, f_p) = friedman_test(matrix)?;
    let cd = nemenyi_cd(matrix.k(), matrix.n(), options.alpha)?;
    let (significant_pairs, groups) = classify_pairs(&avg_ranks, cd);
    let mut wilcoxon = Vec::new();
    for (la, lb) in &options.wilcoxon_pairs {
        let ia = matrix
            .method_labels
            .iter()
            .position(|l| l == la)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown method `{la}`")))?;
        let ib = matrix
            .method_labels
            .iter()
            .position(|l| l == lb)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown method `{lb}`")))?;
        let (w_plus, w_minus, p, dropped, exact) = wilcoxon_signed_ranks(
            &matrix.column(ia),
            &matrix.column(ib),
            options.wilcoxon_exact,
        )?;
        wilcoxon.push(WilcoxonResult {
            method_a: la.clone(),
            method_b: lb.clone(),
            w_plus,
            w_minus,
            dropped_zeros: dropped,
            p_two_sided: p,
            exact,
        });
    }
    Ok(StatsResult {
        method_labels: matrix.method_labels.clone(),
        avg_ranks,
        friedman_chi2: chi2,
        friedman_p: chi_p,
        iman_davenport_f: f_stat,
        iman_davenport_p: f_p,
        alpha: options.alpha,
        nemenyi_cd: cd,
        significant_pairs,
        groups,
        wilcoxon,
    })
}
