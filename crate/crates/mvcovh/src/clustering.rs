//! Baseline k-means and the visible/hidden collaborative clustering fit.
//!
//! MV-Co-VH clusters the samples of a multi-view dataset with hard
//! assignments over a composite distance that blends the shared hidden view
//! with the visible views,
//!
//! ```text
//! D_s(j) = beta * ||h_j - vh_s||^2 + (1 - beta) * sum_k w_k ||x^k_j - v^k_s||^2
//! ```
//!
//! and minimizes
//!
//! ```text
//! J = beta * sum_ij u_ij ||h_j - vh_i||^2
//!   + (1 - beta) * sum_k w_k sum_ij u_ij ||x^k_j - v^k_i||^2
//!   + eta * sum_k w_k ln w_k
//! ```
//!
//! by alternating the assignment, the per-view and hidden centers (cluster
//! means), and the closed-form entropy view weights. Every sub-step is the
//! exact minimizer of its subproblem, so the objective never increases.

use ndarray::Array2;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factorization::{shd_nmf, HiddenSpaceModel};
use crate::mvdata::MultiViewDataset;
use crate::seed::stage_seeds;
use crate::util::{rel_change, softmin_weights, weighted_log_sum};

/// Default convergence threshold for clustering fits.
pub const DEFAULT_EPSILON: f64 = 1e-6;
/// Default iteration cap for clustering fits.
pub const DEFAULT_MAX_ITER: usize = 100;

/// Hyperparameters for the full pipeline: hidden-view extraction followed by
/// the collaborative clustering fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HyperParams {
    /// Number of clusters C, `2 <= C <= N`.
    pub clusters: usize,
    /// Hidden dimension r, `1 <= r <= min_k m_k`.
    pub hidden_dim: usize,
    /// Collaboration coefficient in `[0, 1]`; 0 uses only visible views, 1
    /// only the hidden view.
    pub beta: f64,
    /// Entropy regularizer for the clustering view weights; positive.
    pub eta: f64,
    /// Entropy regularizer for the extraction-stage view weights; positive.
    pub lambda: f64,
    /// Relative objective-change threshold for both stages.
    pub epsilon: f64,
    /// Iteration cap for both stages.
    pub max_iter: usize,
    /// Master seed; the two stage seeds are derived from it.
    pub seed: u64,
}

impl Default for HyperParams {
    fn default() -> Self {
        Self {
            clusters: 2,
            hidden_dim: 2,
            beta: 0.5,
            eta: 1.0,
            lambda: 1.0,
            epsilon: DEFAULT_EPSILON,
            max_iter: DEFAULT_MAX_ITER,
            seed: 0,
        }
    }
}

impl HyperParams {
    /// Check the parameter ranges against a dataset's shape.
    pub fn validate(&self, dataset: &MultiViewDataset) -> Result<()> {
        let n = dataset.n_samples();
        if self.clusters < 2 || self.clusters > n {
            return Err(Error::InvalidParam {
                name: "clusters",
                reason: format!("clusters = {} must satisfy 2 <= C <= {n}", self.clusters),
            });
        }
        let min_dim = dataset.min_feature_dim();
        if self.hidden_dim < 1 || self.hidden_dim > min_dim {
            return Err(Error::InvalidParam {
                name: "hidden_dim",
                reason: format!(
                    "hidden_dim = {} must satisfy 1 <= r <= {min_dim}",
                    self.hidden_dim
                ),
            });
        }
        if !self.beta.is_finite() || !(0.0..=1.0).contains(&self.beta) {
            return Err(Error::InvalidParam {
                name: "beta",
                reason: format!("beta = {} must lie in [0, 1]", self.beta),
            });
        }
        if self.eta <= 0.0 || !self.eta.is_finite() {
            return Err(Error::InvalidParam {
                name: "eta",
                reason: format!("eta = {} must be positive", self.eta),
            });
        }
        if self.lambda <= 0.0 || !self.lambda.is_finite() {
            return Err(Error::InvalidParam {
                name: "lambda",
                reason: format!("lambda = {} must be positive", self.lambda),
            });
        }
        if self.epsilon.is_nan() || self.epsilon < 0.0 {
            return Err(Error::InvalidParam {
                name: "epsilon",
                reason: format!("epsilon = {} must be non-negative", self.epsilon),
            });
        }
        Ok(())
    }
}

/// Result of one collaborative clustering fit.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterState {
    /// Cluster index per sample; the dense encoding of the hard partition.
    pub assignment: Vec<usize>,
    /// Per-view center matrices, each `m_k x C`.
    pub visible_centers: Vec<Array2<f64>>,
    /// Hidden-view center matrix, `r x C`.
    pub hidden_centers: Array2<f64>,
    /// Entropy view weights; sums to 1.
    pub view_weights: Vec<f64>,
    /// Objective at initialization and after every iteration.
    pub objective_trace: Vec<f64>,
}

impl ClusterState {
    /// Number of clusters.
    pub fn n_clusters(&self) -> usize {
        self.hidden_centers.ncols()
    }

    /// Iterations actually performed (the trace holds one extra entry for
    /// the initialization).
    pub fn iterations(&self) -> usize {
        self.objective_trace.len().saturating_sub(1)
    }
}

/// Squared Euclidean distance between two columns.
fn squared_distance(a: ndarray::ArrayView1<f64>, b: ndarray::ArrayView1<f64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| {
            let d = x - y;
            d * d
        })
        .sum()
}

/// Assign each column of `x` to its nearest center column, ties going to the
/// lowest cluster index.
pub fn kmeans_assign(x: &Array2<f64>, centers: &Array2<f64>) -> Result<Vec<usize>> {
    if x.nrows() != centers.nrows() || centers.ncols() == 0 {
        return Err(Error::ShapeMismatch {
            context: format!(
                "data is {}x{} but centers are {}x{}",
                x.nrows(),
                x.ncols(),
                centers.nrows(),
                centers.ncols()
            ),
        });
    }
    let c = centers.ncols();
    Ok((0..x.ncols())
        .map(|j| {
            let col = x.column(j);
            let mut best = 0;
            let mut best_dist = squared_distance(col, centers.column(0));
            for i in 1..c {
                let dist = squared_distance(col, centers.column(i));
                if dist < best_dist {
                    best = i;
                    best_dist = dist;
                }
            }
            best
        })
        .collect())
}

/// Cluster means over the columns of `x`, with empty-cluster repair.
///
/// An empty cluster is re-seeded to the sample farthest (in this space) from
/// its own cluster's freshly computed mean; with several empty clusters, each
/// re-seed takes the farthest sample not already used. Panics if the
/// assignment length or its values do not match `x` and `c`.
pub fn kmeans_centers(x: &Array2<f64>, assignment: &[usize], c: usize) -> Array2<f64> {
    assert_eq!(
        assignment.len(),
        x.ncols(),
        "assignment length must match the sample count"
    );
    assert!(
        assignment.iter().all(|&a| a < c),
        "assignment values must lie in [0, C)"
    );
    let d = x.nrows();
    let mut centers = Array2::<f64>::zeros((d, c));
    let mut counts = vec![0usize; c];
    for (j, &a) in assignment.iter().enumerate() {
        counts[a] += 1;
        let col = x.column(j);
        for (i, &v) in col.iter().enumerate() {
            centers[[i, a]] += v;
        }
    }
    for (a, &count) in counts.iter().enumerate() {
        if count > 0 {
            let scale = 1.0 / count as f64;
            for i in 0..d {
                centers[[i, a]] *= scale;
            }
        }
    }

    let empties: Vec<usize> = (0..c).filter(|&a| counts[a] == 0).collect();
    if !empties.is_empty() {
        let distances: Vec<f64> = (0..x.ncols())
            .map(|j| squared_distance(x.column(j), centers.column(assignment[j])))
            .collect();
        let mut used: Vec<usize> = Vec::new();
        for empty in empties {
            let far = (0..x.ncols())
                .filter(|j| !used.contains(j))
                .max_by(|&a, &b| distances[a].total_cmp(&distances[b]))
                .expect("dataset has at least one sample");
            used.push(far);
            for i in 0..d {
                centers[[i, empty]] = x[[i, far]];
            }
        }
    }
    centers
}

fn kmeans_objective(x: &Array2<f64>, assignment: &[usize], centers: &Array2<f64>) -> f64 {
    assignment
        .iter()
        .enumerate()
        .map(|(j, &a)| squared_distance(x.column(j), centers.column(a)))
        .sum()
}

/// K-means fit and its objective trace.
#[derive(Debug, Clone)]
pub struct KmeansFit {
    pub assignment: Vec<usize>,
    pub centers: Array2<f64>,
    pub objective_trace: Vec<f64>,
}

/// Draw `c` distinct sample indices from a seeded generator.
fn init_indices(rng: &mut ChaCha8Rng, n: usize, c: usize) -> Vec<usize> {
    rand::seq::index::sample(rng, n, c).into_vec()
}

fn columns_at(x: &Array2<f64>, indices: &[usize]) -> Array2<f64> {
    let d = x.nrows();
    let mut out = Array2::<f64>::zeros((d, indices.len()));
    for (dst, &src) in indices.iter().enumerate() {
        out.column_mut(dst).assign(&x.column(src));
    }
    out
}

/// Classical k-means over the columns of `x`, started from `c` distinct
/// seeded sample columns.
pub fn kmeans_fit(
    x: &Array2<f64>,
    c: usize,
    epsilon: f64,
    max_iter: usize,
    seed: u64,
) -> Result<KmeansFit> {
    let n = x.ncols();
    if c < 2 || c > n {
        return Err(Error::InvalidParam {
            name: "clusters",
            reason: format!("clusters = {c} must satisfy 2 <= C <= {n}"),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let indices = init_indices(&mut rng, n, c);
    let mut centers = columns_at(x, &indices);
    let mut assignment = kmeans_assign(x, &centers)?;
    repair_kmeans_state(x, &mut centers, &mut assignment, c)?;

    let initial = kmeans_objective(x, &assignment, &centers);
    if !initial.is_finite() {
        return Err(Error::NonFiniteObjective { iteration: 0 });
    }
    let mut trace = vec![initial];
    for iteration in 1..=max_iter {
        assignment = kmeans_assign(x, &centers)?;
        repair_kmeans_state(x, &mut centers, &mut assignment, c)?;
        centers = kmeans_centers(x, &assignment, c);
        let objective = kmeans_objective(x, &assignment, &centers);
        if !objective.is_finite() {
            return Err(Error::NonFiniteObjective { iteration });
        }
        let change = rel_change(trace[trace.len() - 1], objective);
        trace.push(objective);
        if change < epsilon {
            break;
        }
    }
    Ok(KmeansFit {
        assignment,
        centers,
        objective_trace: trace,
    })
}

/// If the assignment leaves clusters empty, re-seed those centers to the
/// farthest samples and re-assign once.
fn repair_kmeans_state(
    x: &Array2<f64>,
    centers: &mut Array2<f64>,
    assignment: &mut Vec<usize>,
    c: usize,
) -> Result<()> {
    let mut counts = vec![0usize; c];
    for &a in assignment.iter() {
        counts[a] += 1;
    }
    if counts.iter().all(|&count| count > 0) {
        return Ok(());
    }
    let distances: Vec<f64> = (0..x.ncols())
        .map(|j| squared_distance(x.column(j), centers.column(assignment[j])))
        .collect();
    let mut used: Vec<usize> = Vec::new();
    for empty in (0..c).filter(|&a| counts[a] == 0) {
        let far = (0..x.ncols())
            .filter(|j| !used.contains(j))
            .max_by(|&a, &b| distances[a].total_cmp(&distances[b]))
            .expect("dataset has at least one sample");
        used.push(far);
        let col = x.column(far).to_owned();
        centers.column_mut(empty).assign(&col);
    }
    *assignment = kmeans_assign(x, centers)?;
    Ok(())
}

fn check_hidden_shape(dataset: &MultiViewDataset, hidden: &Array2<f64>) -> Result<()> {
    if hidden.ncols() != dataset.n_samples() {
        return Err(Error::ShapeMismatch {
            context: format!(
                "hidden matrix has {} columns but the dataset has {} samples",
                hidden.ncols(),
                dataset.n_samples()
            ),
        });
    }
    Ok(())
}

fn check_state_shapes(
    dataset: &MultiViewDataset,
    state: &ClusterState,
    hidden: Option<&Array2<f64>>,
) -> Result<()> {
    let k = dataset.n_views();
    if state.visible_centers.len() != k || state.view_weights.len() != k {
        return Err(Error::ShapeMismatch {
            context: format!(
                "state has {} center matrices and {} weights for a {k}-view dataset",
                state.visible_centers.len(),
                state.view_weights.len()
            ),
        });
    }
    let c = state.n_clusters();
    for (idx, centers) in state.visible_centers.iter().enumerate() {
        let expected = dataset.view(idx).feature_dim();
        if centers.nrows() != expected || centers.ncols() != c {
            return Err(Error::ShapeMismatch {
                context: format!(
                    "centers for view {idx} are {}x{}; expected {expected}x{c}",
                    centers.nrows(),
                    centers.ncols()
                ),
            });
        }
    }
    if state.assignment.len() != dataset.n_samples() {
        return Err(Error::ShapeMismatch {
            context: format!(
                "assignment covers {} samples but the dataset has {}",
                state.assignment.len(),
                dataset.n_samples()
            ),
        });
    }
    if let Some(hidden) = hidden {
        check_hidden_shape(dataset, hidden)?;
        if hidden.nrows() != state.hidden_centers.nrows() {
            return Err(Error::ShapeMismatch {
                context: format!(
                    "hidden matrix has {} rows but hidden centers have {}",
                    hidden.nrows(),
                    state.hidden_centers.nrows()
                ),
            });
        }
    }
    Ok(())
}

/// Composite distance of sample `j` to cluster `s`.
fn composite_distance(
    dataset: &MultiViewDataset,
    hidden: &Array2<f64>,
    state: &ClusterState,
    beta: f64,
    j: usize,
    s: usize,
) -> f64 {
    let hidden_term = squared_distance(hidden.column(j), state.hidden_centers.column(s));
    let mut visible_term = 0.0;
    for (k, view) in dataset.views().iter().enumerate() {
        visible_term += state.view_weights[k]
            * squared_distance(view.data.column(j), state.visible_centers[k].column(s));
    }
    beta * hidden_term + (1.0 - beta) * visible_term
}

/// Hard assignment over the composite visible+hidden distance, ties going to
/// the lowest cluster index.
pub fn mvcovh_assign(
    dataset: &MultiViewDataset,
    hidden: &Array2<f64>,
    state: &ClusterState,
    beta: f64,
) -> Result<Vec<usize>> {
    check_state_shapes(dataset, state, Some(hidden))?;
    let c = state.n_clusters();
    Ok((0..dataset.n_samples())
        .map(|j| {
            let mut best = 0;
            let mut best_dist = composite_distance(dataset, hidden, state, beta, j, 0);
            for s in 1..c {
                let dist = composite_distance(dataset, hidden, state, beta, j, s);
                if dist < best_dist {
                    best = s;
                    best_dist = dist;
                }
            }
            best
        })
        .collect())
}

/// Per-view cluster means. Each view is handled by [`kmeans_centers`], so a
/// standalone call repairs empty clusters within each view's own space; the
/// fit repairs empties with the composite distance before this runs.
pub fn mvcovh_visible_centers(
    dataset: &MultiViewDataset,
    assignment: &[usize],
    c: usize,
) -> Vec<Array2<f64>> {
    dataset
        .views()
        .iter()
        .map(|view| kmeans_centers(&view.data, assignment, c))
        .collect()
}

/// Hidden-view cluster means; same per-space repair as [`kmeans_centers`].
pub fn mvcovh_hidden_centers(hidden: &Array2<f64>, assignment: &[usize], c: usize) -> Array2<f64> {
    kmeans_centers(hidden, assignment, c)
}

/// Within-cluster dispersion of each view under the given state.
pub fn per_view_dispersions(dataset: &MultiViewDataset, state: &ClusterState) -> Vec<f64> {
    dataset
        .views()
        .iter()
        .zip(&state.visible_centers)
        .map(|(view, centers)| kmeans_objective(&view.data, &state.assignment, centers))
        .collect()
}

/// Closed-form entropy view weights: softmin of `(1 - beta) * D_k` at
/// temperature `eta`, computed with max-subtraction.
pub fn mvcovh_weights(
    dataset: &MultiViewDataset,
    state: &ClusterState,
    beta: f64,
    eta: f64,
) -> Result<Vec<f64>> {
    if eta.is_nan() || eta <= 0.0 {
        return Err(Error::InvalidParam {
            name: "eta",
            reason: format!("weight update needs eta > 0, got {eta}"),
        });
    }
    check_state_shapes(dataset, state, None)?;
    let dispersions = per_view_dispersions(dataset, state);
    let costs: Vec<f64> = dispersions.iter().map(|d| (1.0 - beta) * d).collect();
    Ok(softmin_weights(&costs, eta))
}

/// The blended clustering objective for a full state.
pub fn mvcovh_objective(
    dataset: &MultiViewDataset,
    hidden: &Array2<f64>,
    state: &ClusterState,
    beta: f64,
    eta: f64,
) -> Result<f64> {
    check_state_shapes(dataset, state, Some(hidden))?;
    let hidden_term = kmeans_objective(hidden, &state.assignment, &state.hidden_centers);
    let visible_term: f64 = per_view_dispersions(dataset, state)
        .iter()
        .zip(&state.view_weights)
        .map(|(d, w)| w * d)
        .sum();
    Ok(beta * hidden_term
        + (1.0 - beta) * visible_term
        + eta * weighted_log_sum(&state.view_weights))
}

/// Re-seed empty clusters to the samples with the largest composite distance
/// to their current centers (both the visible and hidden center columns are
/// replaced from the same sample), then re-assign once.
fn repair_composite_state(
    dataset: &MultiViewDataset,
    hidden: &Array2<f64>,
    state: &mut ClusterState,
    beta: f64,
) -> Result<()> {
    let c = state.n_clusters();
    let mut counts = vec![0usize; c];
    for &a in &state.assignment {
        counts[a] += 1;
    }
    if counts.iter().all(|&count| count > 0) {
        return Ok(());
    }
    let distances: Vec<f64> = (0..dataset.n_samples())
        .map(|j| composite_distance(dataset, hidden, state, beta, j, state.assignment[j]))
        .collect();
    let mut used: Vec<usize> = Vec::new();
    for empty in (0..c).filter(|&s| counts[s] == 0) {
        let far = (0..dataset.n_samples())
            .filter(|j| !used.contains(j))
            .max_by(|&a, &b| distances[a].total_cmp(&distances[b]))
            .expect("dataset has at least one sample");
        used.push(far);
        for (k, view) in dataset.views().iter().enumerate() {
            let col = view.data.column(far).to_owned();
            state.visible_centers[k].column_mut(empty).assign(&col);
        }
        let col = hidden.column(far).to_owned();
        state.hidden_centers.column_mut(empty).assign(&col);
    }
    state.assignment = mvcovh_assign(dataset, hidden, state, beta)?;
    Ok(())
}

/// Collaborative clustering over the visible views and a fixed hidden view.
///
/// Center initialization draws `C` distinct sample indices from the seeded
/// generator and uses the same indices for every visible view and the hidden
/// view; weights start uniform. Each iteration assigns samples by composite
/// distance, recomputes visible and hidden centers as cluster means, and
/// refreshes the weights in closed form, until the relative objective change
/// drops below `epsilon` or `max_iter` iterations have run. `max_iter == 0`
/// returns the initial state (with its induced assignment) after a single
/// objective evaluation.
pub fn mvcovh_fit(
    dataset: &MultiViewDataset,
    hidden: &Array2<f64>,
    params: &HyperParams,
) -> Result<ClusterState> {
    params.validate(dataset)?;
    check_hidden_shape(dataset, hidden)?;
    let c = params.clusters;
    let n = dataset.n_samples();
    let k = dataset.n_views();

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let indices = init_indices(&mut rng, n, c);
    let mut state = ClusterState {
        assignment: vec![0; n],
        visible_centers: dataset
            .views()
            .iter()
            .map(|view| columns_at(&view.data, &indices))
            .collect(),
        hidden_centers: columns_at(hidden, &indices),
        view_weights: vec![1.0 / k as f64; k],
        objective_trace: Vec::new(),
    };
    state.assignment = mvcovh_assign(dataset, hidden, &state, params.beta)?;
    repair_composite_state(dataset, hidden, &mut state, params.beta)?;

    let mut objective = mvcovh_objective(dataset, hidden, &state, params.beta, params.eta)?;
    if !objective.is_finite() {
        return Err(Error::NonFiniteObjective { iteration: 0 });
    }
    state.objective_trace.push(objective);
    for iteration in 1..=params.max_iter {
        state.assignment = mvcovh_assign(dataset, hidden, &state, params.beta)?;
        repair_composite_state(dataset, hidden, &mut state, params.beta)?;
        state.visible_centers = mvcovh_visible_centers(dataset, &state.assignment, c);
        state.hidden_centers = mvcovh_hidden_centers(hidden, &state.assignment, c);
        state.view_weights = mvcovh_weights(dataset, &state, params.beta, params.eta)?;
        let next = mvcovh_objective(dataset, hidden, &state, params.beta, params.eta)?;
        if !next.is_finite() {
            return Err(Error::NonFiniteObjective { iteration });
        }
        let change = rel_change(objective, next);
        objective = next;
        state.objective_trace.push(objective);
        if change < params.epsilon {
            break;
        }
    }
    Ok(state)
}

/// Normalize, extract the shared hidden view, then run the collaborative
/// clustering fit. The two stage seeds are derived deterministically from
/// `params.seed`, so one seed reproduces the whole pipeline.
pub fn fit_pipeline(
    dataset: &MultiViewDataset,
    params: &HyperParams,
) -> Result<(HiddenSpaceModel, ClusterState)> {
    let normalized = dataset.normalized()?;
    params.validate(&normalized)?;
    let (factor_seed, cluster_seed) = stage_seeds(params.seed);
    let model = shd_nmf(
        &normalized,
        params.hidden_dim,
        params.lambda,
        params.epsilon,
        params.max_iter,
        factor_seed,
    )?;
    let mut cluster_params = params.clone();
    cluster_params.seed = cluster_seed;
    let state = mvcovh_fit(&normalized, &model.hidden, &cluster_params)?;
    Ok((model, state))
}
