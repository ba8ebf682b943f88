//! External clustering evaluation: NMI, Rand index, and pairwise precision.
//!
//! All three indices compare a predicted hard partition against ground-truth
//! class labels through the contingency table `n_ij = |class i ∩ cluster j|`.
//! Logarithms are natural throughout; NMI is base-invariant because its
//! numerator and denominator scale together.

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Cross-tabulation of classes against clusters with its marginals.
#[derive(Debug, Clone, PartialEq)]
pub struct ContingencyTable {
    /// `n_ij`, shape `C_true x C_pred`.
    pub counts: Array2<u64>,
    /// Row sums `n_i` (per class).
    pub class_sizes: Vec<u64>,
    /// Column sums `n_j` (per cluster).
    pub cluster_sizes: Vec<u64>,
    /// Total sample count.
    pub total: u64,
}

impl ContingencyTable {
    pub fn n_classes(&self) -> usize {
        self.counts.nrows()
    }

    pub fn n_clusters(&self) -> usize {
        self.counts.ncols()
    }
}

/// Build the contingency table of two equal-length labelings whose values
/// are contiguous from 0.
pub fn contingency(labels: &[usize], assignment: &[usize]) -> Result<ContingencyTable> {
    if labels.len() != assignment.len() {
        return Err(Error::ShapeMismatch {
            context: format!(
                "labels cover {} samples but the assignment covers {}",
                labels.len(),
                assignment.len()
            ),
        });
    }
    let classes = labels.iter().max().map_or(0, |&m| m + 1);
    let clusters = assignment.iter().max().map_or(0, |&m| m + 1);
    let mut counts = Array2::<u64>::zeros((classes, clusters));
    for (&class, &cluster) in labels.iter().zip(assignment) {
        counts[[class, cluster]] += 1;
    }
    let class_sizes = counts.rows().into_iter().map(|r| r.sum()).collect();
    let cluster_sizes = counts.columns().into_iter().map(|c| c.sum()).collect();
    Ok(ContingencyTable {
        counts,
        class_sizes,
        cluster_sizes,
        total: labels.len() as u64,
    })
}

/// Pairwise agreement counts between two partitions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairCounts {
    /// Pairs in the same class and the same cluster.
    pub f11: u64,
    /// Pairs in different classes and different clusters.
    pub f00: u64,
    /// `N (N - 1) / 2`.
    pub total_pairs: u64,
}

fn choose2(n: u64) -> u64 {
    n * (n.saturating_sub(1)) / 2
}

/// Count agreeing pairs from the contingency table in closed form.
pub fn pair_counts(labels: &[usize], assignment: &[usize]) -> Result<PairCounts> {
    let table = contingency(labels, assignment)?;
    pair_counts_from_table(&table)
}

/// Closed-form pair counts:
/// `f11 = sum_ij C(n_ij, 2)` and
/// `f00 = C(N, 2) - sum_i C(n_i, 2) - sum_j C(n_j, 2) + f11`.
pub fn pair_counts_from_table(table: &ContingencyTable) -> Result<PairCounts> {
    if table.total < 2 {
        return Err(Error::InvalidParam {
            name: "labels",
            reason: format!(
                "pair counting needs at least 2 samples, got {}",
                table.total
            ),
        });
    }
    let f11: u64 = table.counts.iter().map(|&n| choose2(n)).sum();
    let same_class: u64 = table.class_sizes.iter().map(|&n| choose2(n)).sum();
    let same_cluster: u64 = table.cluster_sizes.iter().map(|&n| choose2(n)).sum();
    let total_pairs = choose2(table.total);
    // grouped so the intermediate value never dips below zero
    let f00 = (total_pairs + f11) - same_class - same_cluster;
    Ok(PairCounts {
        f11,
        f00,
        total_pairs,
    })
}

/// Normalized mutual information with its degeneracy flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NmiScore {
    /// Value in `[0, 1]`; defined as 0 when degenerate.
    pub value: f64,
    /// True when either partition has a single block, which makes the
    /// normalizer vanish.
    pub degenerate: bool,
}

/// Normalized mutual information of a contingency table:
///
/// ```text
/// sum_ij n_ij ln(N n_ij / (n_i n_j))
/// -----------------------------------------------------
/// sqrt( (sum_i n_i ln(n_i / N)) (sum_j n_j ln(n_j / N)) )
/// ```
///
/// with `0 ln 0 := 0`. A single-class or single-cluster table is flagged
/// degenerate and scored 0.
pub fn nmi(table: &ContingencyTable) -> NmiScore {
    if table.n_classes() < 2 || table.n_clusters() < 2 {
        return NmiScore {
            value: 0.0,
            degenerate: true,
        };
    }
    let n = table.total as f64;
    let mut numerator = 0.0;
    for ((i, j), &count) in table.counts.indexed_iter() {
        if count == 0 {
            continue;
        }
        let nij = count as f64;
        let ni = table.class_sizes[i] as f64;
        let nj = table.cluster_sizes[j] as f64;
        numerator += nij * (n * nij / (ni * nj)).ln();
    }
    let class_entropy: f64 = table
        .class_sizes
        .iter()
        .filter(|&&ni| ni > 0)
        .map(|&ni| {
            let ni = ni as f64;
            ni * (ni / n).ln()
        })
        .sum();
    let cluster_entropy: f64 = table
        .cluster_sizes
        .iter()
        .filter(|&&nj| nj > 0)
        .map(|&nj| {
            let nj = nj as f64;
            nj * (nj / n).ln()
        })
        .sum();
    let denominator = (class_entropy * cluster_entropy).sqrt();
    if denominator == 0.0 {
        return NmiScore {
            value: 0.0,
            degenerate: true,
        };
    }
    NmiScore {
        value: numerator / denominator,
        degenerate: false,
    }
}

/// Rand index `(f00 + f11) / (N (N - 1) / 2)`.
pub fn rand_index(pairs: &PairCounts) -> f64 {
    (pairs.f00 + pairs.f11) as f64 / pairs.total_pairs as f64
}

/// Pairwise precision in the form `f11 / (f00 + f11)`.
///
/// Note this differs from the conventional pairwise precision
/// `f11 / #same-cluster-pairs`; see [`precision_conventional`] for that
/// definition. Errors when `f00 + f11 = 0`, where the ratio is undefined.
pub fn precision_pairs(pairs: &PairCounts) -> Result<f64> {
    let agreeing = pairs.f00 + pairs.f11;
    if agreeing == 0 {
        return Err(Error::UndefinedMetric {
            reason: "no agreeing pairs: f00 + f11 = 0".to_string(),
        });
    }
    Ok(pairs.f11 as f64 / agreeing as f64)
}

/// Conventional pairwise precision `f11 / #same-cluster-pairs`. Provided for
/// comparison; never used in the parity reports.
pub fn precision_conventional(table: &ContingencyTable) -> Result<f64> {
    let f11: u64 = table.counts.iter().map(|&n| choose2(n)).sum();
    let same_cluster: u64 = table.cluster_sizes.iter().map(|&n| choose2(n)).sum();
    if same_cluster == 0 {
        return Err(Error::UndefinedMetric {
            reason: "no same-cluster pairs".to_string(),
        });
    }
    Ok(f11 as f64 / same_cluster as f64)
}

/// The three external indices for one fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub nmi: f64,
    pub rand_index: f64,
    pub precision: f64,
}

/// Evaluate an assignment against ground-truth labels.
pub fn evaluate(labels: &[usize], assignment: &[usize]) -> Result<MetricReport> {
    let table = contingency(labels, assignment)?;
    let pairs = pair_counts_from_table(&table)?;
    Ok(MetricReport {
        nmi: nmi(&table).value,
        rand_index: rand_index(&pairs),
        precision: precision_pairs(&pairs)?,
    })
}
