//! Non-negative matrix factorization and shared-hidden-view extraction.
//!
//! Plain NMF approximates one non-negative matrix as `X ~ W H` by alternating
//! multiplicative updates. SHD-NMF extends this to a multi-view dataset: all
//! views share one hidden matrix `H`, each view gets its own mapping matrix
//! `W^k`, and the views are fused through maximum-entropy weights `q` that
//! softmin the per-view reconstruction errors. The minimized objective is
//!
//! ```text
//! O = sum_k q_k ||X^k - W^k H||_F^2 + lambda * sum_k q_k ln q_k
//! ```
//!
//! subject to `sum_k q_k = 1`, `q_k in [0, 1]`, and `W^k, H >= 0`.

use std::path::Path;

use ndarray::{Array2, Zip};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mvdata::{write_matrix_csv, MultiViewDataset};
use crate::util::{rel_change, softmin_weights, weighted_log_sum};

/// Guard added to every multiplicative-update denominator. Small enough to
/// keep the zero-locking property of the updates, large enough to avoid 0/0.
pub const EPS_DIV: f64 = 1e-12;

/// Default convergence threshold for factorization fits.
pub const DEFAULT_EPSILON: f64 = 1e-6;
/// Default iteration cap for factorization fits.
pub const DEFAULT_MAX_ITER: usize = 200;

/// Result of a plain NMF fit: `x ~ w.dot(h)` with `w: m x r`, `h: r x N`.
#[derive(Debug, Clone)]
pub struct NmfFactors {
    /// Basis matrix, `m x r`.
    pub w: Array2<f64>,
    /// Coefficient matrix, `r x N`.
    pub h: Array2<f64>,
}

/// Shared hidden view extracted from a multi-view dataset.
#[derive(Debug, Clone)]
pub struct HiddenSpaceModel {
    /// Shared hidden view, `r x N`, non-negative.
    pub hidden: Array2<f64>,
    /// Per-view mapping matrices, `m_k x r`, non-negative.
    pub mappings: Vec<Array2<f64>>,
    /// Maximum-entropy view weights; sums to 1.
    pub view_weights: Vec<f64>,
    /// Entropy regularizer the model was fitted with.
    pub lambda: f64,
    /// Objective value at initialization and after each iteration.
    pub objective_trace: Vec<f64>,
}

impl HiddenSpaceModel {
    /// Hidden dimension `r`.
    pub fn hidden_dim(&self) -> usize {
        self.hidden.nrows()
    }
}

/// `||x - w.dot(h)||_F^2`.
pub fn reconstruction_error(x: &Array2<f64>, w: &Array2<f64>, h: &Array2<f64>) -> f64 {
    let approx = w.dot(h);
    Zip::from(x).and(&approx).fold(0.0, |acc, &a, &b| {
        let d = a - b;
        acc + d * d
    })
}

fn check_factor_shapes(x: &Array2<f64>, w: &Array2<f64>, h: &Array2<f64>) -> Result<()> {
    let (m, n) = x.dim();
    let (wm, wr) = w.dim();
    let (hr, hn) = h.dim();
    if wm != m || hn != n || wr != hr {
        return Err(Error::ShapeMismatch {
            context: format!(
                "x is {m}x{n}, w is {wm}x{wr}, h is {hr}x{hn}; expected w: {m}xr, h: rx{n}"
            ),
        });
    }
    Ok(())
}

/// Elementwise `base * numer / (denom + EPS_DIV)`; zeros in `base` stay zero.
fn multiplicative_update(
    base: &Array2<f64>,
    numer: &Array2<f64>,
    denom: &Array2<f64>,
) -> Array2<f64> {
    let mut out = base.clone();
    Zip::from(&mut out)
        .and(numer)
        .and(denom)
        .for_each(|o, &n, &d| *o *= n / (d + EPS_DIV));
    out
}

/// Coefficient update `h * (w^T x) / (w^T w h)`.
pub fn nmf_update_h(x: &Array2<f64>, w: &Array2<f64>, h: &Array2<f64>) -> Result<Array2<f64>> {
    check_factor_shapes(x, w, h)?;
    let numer = w.t().dot(x);
    let denom = w.t().dot(w).dot(h);
    Ok(multiplicative_update(h, &numer, &denom))
}

/// Basis update `w * (x h^T) / (w h h^T)`.
pub fn nmf_update_w(x: &Array2<f64>, w: &Array2<f64>, h: &Array2<f64>) -> Result<Array2<f64>> {
    check_factor_shapes(x, w, h)?;
    let numer = x.dot(&h.t());
    let denom = w.dot(&h.dot(&h.t()));
    Ok(multiplicative_update(w, &numer, &denom))
}

fn check_non_negative(x: &Array2<f64>, context: &str) -> Result<()> {
    for ((i, j), &v) in x.indexed_iter() {
        if !v.is_finite() {
            return Err(Error::NonFiniteInput {
                context: context.to_string(),
                row: i,
                col: j,
            });
        }
        if v < 0.0 {
            return Err(Error::NegativeInput {
                context: context.to_string(),
                row: i,
                col: j,
            });
        }
    }
    Ok(())
}

/// Matrix with entries drawn i.i.d. uniform on `(0.01, 1]`, filled row-major.
fn seeded_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Array2<f64> {
    let data: Vec<f64> = (0..rows * cols)
        .map(|_| 1.0 - 0.99 * rng.random::<f64>())
        .collect();
    Array2::from_shape_vec((rows, cols), data).expect("row-major fill matches shape")
}

/// Factorize a non-negative matrix by alternating the basis and coefficient
/// updates until the relative objective change drops below `epsilon` or
/// `max_iter` iterations have run. Each iteration updates the basis first.
/// `max_iter == 0` returns the seeded initialization unchanged.
pub fn nmf_factorize(
    x: &Array2<f64>,
    r: usize,
    epsilon: f64,
    max_iter: usize,
    seed: u64,
) -> Result<NmfFactors> {
    check_non_negative(x, "x")?;
    let (m, n) = x.dim();
    if r < 1 || r > m.min(n) {
        return Err(Error::InvalidParam {
            name: "r",
            reason: format!("r = {r} must satisfy 1 <= r <= min({m}, {n})"),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut w = seeded_matrix(&mut rng, m, r);
    let mut h = seeded_matrix(&mut rng, r, n);

    let mut objective = reconstruction_error(x, &w, &h);
    if !objective.is_finite() {
        return Err(Error::NonFiniteObjective { iteration: 0 });
    }
    for iteration in 1..=max_iter {
        w = nmf_update_w(x, &w, &h)?;
        h = nmf_update_h(x, &w, &h)?;
        let next = reconstruction_error(x, &w, &h);
        if !next.is_finite() {
            return Err(Error::NonFiniteObjective { iteration });
        }
        let change = rel_change(objective, next);
        objective = next;
        if change < epsilon {
            break;
        }
    }
    Ok(NmfFactors { w, h })
}

fn check_model_shapes(dataset: &MultiViewDataset, model: &HiddenSpaceModel) -> Result<()> {
    let k = dataset.n_views();
    if model.mappings.len() != k || model.view_weights.len() != k {
        return Err(Error::ShapeMismatch {
            context: format!(
                "model has {} mappings and {} weights for a {k}-view dataset",
                model.mappings.len(),
                model.view_weights.len()
            ),
        });
    }
    let (r, n) = model.hidden.dim();
    if n != dataset.n_samples() {
        return Err(Error::ShapeMismatch {
            context: format!(
                "hidden matrix has {n} columns but the dataset has {} samples",
                dataset.n_samples()
            ),
        });
    }
    for (idx, mapping) in model.mappings.iter().enumerate() {
        let (mm, mr) = mapping.dim();
        let expected = dataset.view(idx).feature_dim();
        if mm != expected || mr != r {
            return Err(Error::ShapeMismatch {
                context: format!(
                    "mapping {idx} is {mm}x{mr}; expected {expected}x{r} for view '{}'",
                    dataset.view(idx).name
                ),
            });
        }
    }
    Ok(())
}

/// Per-view reconstruction errors `e_k = ||X^k - W^k H||_F^2`.
pub fn view_reconstruction_errors(
    dataset: &MultiViewDataset,
    model: &HiddenSpaceModel,
) -> Result<Vec<f64>> {
    check_model_shapes(dataset, model)?;
    Ok(dataset
        .views()
        .iter()
        .zip(&model.mappings)
        .map(|(view, mapping)| reconstruction_error(&view.data, mapping, &model.hidden))
        .collect())
}

/// Weighted reconstruction loss plus the entropy term.
pub fn shd_objective(dataset: &MultiViewDataset, model: &HiddenSpaceModel) -> Result<f64> {
    let errors = view_reconstruction_errors(dataset, model)?;
    Ok(objective_from_errors(
        &errors,
        &model.view_weights,
        model.lambda,
    ))
}

fn objective_from_errors(errors: &[f64], weights: &[f64], lambda: f64) -> f64 {
    let loss: f64 = errors.iter().zip(weights).map(|(e, q)| q * e).sum();
    loss + lambda * weighted_log_sum(weights)
}

/// Mapping update for one view. The view weight cancels between numerator
/// and denominator, so this is the plain basis update applied per view.
pub fn shd_update_wk(xk: &Array2<f64>, wk: &Array2<f64>, h: &Array2<f64>) -> Result<Array2<f64>> {
    nmf_update_w(xk, wk, h)
}

/// Hidden-view update blending all views through the current weights:
/// `H * (sum_k q_k W^k' X^k) / ((sum_k q_k W^k' W^k) H)`.
pub fn shd_update_h(dataset: &MultiViewDataset, model: &HiddenSpaceModel) -> Result<Array2<f64>> {
    check_model_shapes(dataset, model)?;
    let mut numer: Option<Array2<f64>> = None;
    let mut gram: Option<Array2<f64>> = None;
    for (k, view) in dataset.views().iter().enumerate() {
        let q = model.view_weights[k];
        let wk = &model.mappings[k];
        let term_numer = wk.t().dot(&view.data).mapv(|v| q * v);
        let term_gram = wk.t().dot(wk).mapv(|v| q * v);
        numer = Some(match numer {
            None => term_numer,
            Some(acc) => acc + term_numer,
        });
        gram = Some(match gram {
            None => term_gram,
            Some(acc) => acc + term_gram,
        });
    }
    let numer = numer.expect("dataset has at least one view");
    let denom = gram
        .expect("dataset has at least one view")
        .dot(&model.hidden);
    Ok(multiplicative_update(&model.hidden, &numer, &denom))
}

/// Closed-form weight update: softmin of the reconstruction errors at
/// temperature `lambda`, computed with max-subtraction.
pub fn shd_update_q(dataset: &MultiViewDataset, model: &HiddenSpaceModel) -> Result<Vec<f64>> {
    if model.lambda.is_nan() || model.lambda <= 0.0 {
        return Err(Error::InvalidParam {
            name: "lambda",
            reason: format!("weight update needs lambda > 0, got {}", model.lambda),
        });
    }
    let errors = view_reconstruction_errors(dataset, model)?;
    if let Some(e) = errors.iter().find(|e| !e.is_finite()) {
        return Err(Error::InvalidParam {
            name: "reconstruction_error",
            reason: format!("non-finite reconstruction error {e}"),
        });
    }
    Ok(softmin_weights(&errors, model.lambda))
}

/// Extract the shared hidden view from a non-negative dataset.
///
/// Initializes the mappings and hidden matrix uniformly on `(0.01, 1]` from a
/// seeded generator (mappings in view order, then the hidden matrix) and the
/// weights uniformly at `1/K`, then loops mapping updates, the hidden update,
/// and the weight update until the relative objective change drops below
/// `epsilon` or `max_iter` iterations have run. The returned trace holds the
/// objective at initialization and after every iteration.
///
/// The dataset must already be non-negative; run it through
/// [`MultiViewDataset::normalized`] first when it is not.
pub fn shd_nmf(
    dataset: &MultiViewDataset,
    r: usize,
    lambda: f64,
    epsilon: f64,
    max_iter: usize,
    seed: u64,
) -> Result<HiddenSpaceModel> {
    for view in dataset.views() {
        check_non_negative(&view.data, &view.name)?;
    }
    let min_dim = dataset.min_feature_dim();
    if r < 1 || r > min_dim {
        return Err(Error::InvalidParam {
            name: "r",
            reason: format!(
                "r = {r} must satisfy 1 <= r <= {min_dim} (minimum view dimensionality)"
            ),
        });
    }
    if lambda.is_nan() || lambda <= 0.0 {
        return Err(Error::InvalidParam {
            name: "lambda",
            reason: format!("lambda must be positive, got {lambda}"),
        });
    }

    let k = dataset.n_views();
    let n = dataset.n_samples();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mappings: Vec<Array2<f64>> = dataset
        .views()
        .iter()
        .map(|view| seeded_matrix(&mut rng, view.feature_dim(), r))
        .collect();
    let hidden = seeded_matrix(&mut rng, r, n);
    let mut model = HiddenSpaceModel {
        hidden,
        mappings,
        view_weights: vec![1.0 / k as f64; k],
        lambda,
        objective_trace: Vec::new(),
    };

    let mut objective = shd_objective(dataset, &model)?;
    if !objective.is_finite() {
        return Err(Error::NonFiniteObjective { iteration: 0 });
    }
    model.objective_trace.push(objective);
    for iteration in 1..=max_iter {
        for (idx, view) in dataset.views().iter().enumerate() {
            model.mappings[idx] = shd_update_wk(&view.data, &model.mappings[idx], &model.hidden)?;
        }
        model.hidden = shd_update_h(dataset, &model)?;
        model.view_weights = shd_update_q(dataset, &model)?;
        let next = shd_objective(dataset, &model)?;
        if !next.is_finite() {
            return Err(Error::NonFiniteObjective { iteration });
        }
        let change = rel_change(objective, next);
        objective = next;
        model.objective_trace.push(objective);
        if change < epsilon {
            break;
        }
    }
    Ok(model)
}

#[derive(Serialize)]
struct ModelSummary<'a> {
    r: usize,
    lambda: f64,
    q: &'a [f64],
    objective_trace: &'a [f64],
}

/// Export a model under `dir`: `model.json` with `{r, lambda, q,
/// objective_trace}`, the hidden view as `hidden_H.csv`, and each mapping as
/// `W_<k>.csv` (1-based). CSV values round-trip exactly.
pub fn export_model(model: &HiddenSpaceModel, dir: impl AsRef<Path>) -> Result<()> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let summary = ModelSummary {
        r: model.hidden_dim(),
        lambda: model.lambda,
        q: &model.view_weights,
        objective_trace: &model.objective_trace,
    };
    let json = serde_json::to_string_pretty(&summary).expect("summary serializes");
    crate::mvdata::write_file(&dir.join("model.json"), format!("{json}\n").as_bytes())?;
    write_matrix_csv(&model.hidden, dir.join("hidden_H.csv"))?;
    for (idx, mapping) in model.mappings.iter().enumerate() {
        write_matrix_csv(mapping, dir.join(format!("W_{}.csv", idx + 1)))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mvdata::ViewMatrix;
    use ndarray::array;
    use proptest::prelude::*;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    fn dataset_from(views: Vec<Array2<f64>>) -> MultiViewDataset {
        let views = views
            .into_iter()
            .enumerate()
            .map(|(i, v)| ViewMatrix::new(format!("v{i}"), v))
            .collect();
        MultiViewDataset::new(views, None).unwrap()
    }

    fn model_with(
        hidden: Array2<f64>,
        mappings: Vec<Array2<f64>>,
        weights: Vec<f64>,
        lambda: f64,
    ) -> HiddenSpaceModel {
        HiddenSpaceModel {
            hidden,
            mappings,
            view_weights: weights,
            lambda,
            objective_trace: Vec::new(),
        }
    }

    #[test]
    fn scalar_h_update() {
        let h = nmf_update_h(&array![[2.0]], &array![[1.0]], &array![[1.0]]).unwrap();
        assert_close(h[[0, 0]], 2.0, 1e-9);
    }

    #[test]
    fn scalar_w_update() {
        let w = nmf_update_w(&array![[4.0]], &array![[1.0]], &array![[2.0]]).unwrap();
        assert_close(w[[0, 0]], 2.0, 1e-9);
    }

    #[test]
    fn exact_factorization_is_a_fixed_point() {
        let w = array![[1.0, 0.5], [2.0, 1.5]];
        let h = array![[0.3, 0.9, 0.4], [1.1, 0.2, 0.7]];
        let x = w.dot(&h);
        let h2 = nmf_update_h(&x, &w, &h).unwrap();
        let w2 = nmf_update_w(&x, &w, &h).unwrap();
        for (a, b) in h.iter().zip(h2.iter()) {
            assert_close(*a, *b, 1e-9);
        }
        for (a, b) in w.iter().zip(w2.iter()) {
            assert_close(*a, *b, 1e-9);
        }
    }

    #[test]
    fn zeros_stay_zero() {
        let x = array![[1.0, 2.0], [3.0, 4.0]];
        let w = array![[0.0, 1.0], [1.0, 0.5]];
        let h = array![[0.5, 0.0], [1.0, 2.0]];
        let h2 = nmf_update_h(&x, &w, &h).unwrap();
        let w2 = nmf_update_w(&x, &w, &h).unwrap();
        assert_eq!(h2[[0, 1]], 0.0);
        assert_eq!(w2[[0, 0]], 0.0);
    }

    #[test]
    fn update_rejects_shape_mismatch() {
        let bad = nmf_update_h(&array![[1.0, 2.0]], &array![[1.0]], &array![[1.0]]);
        assert!(matches!(bad, Err(Error::ShapeMismatch { .. })));
    }

    #[test]
    fn rank_one_matrix_factorizes_exactly() {
        let x = array![[1.0, 2.0], [2.0, 4.0]];
        let factors = nmf_factorize(&x, 1, 1e-12, 500, 7).unwrap();
        assert!(reconstruction_error(&x, &factors.w, &factors.h) <= 1e-6);
    }

    #[test]
    fn full_rank_beats_rank_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x = seeded_matrix(&mut rng, 5, 8);
        let low = nmf_factorize(&x, 1, 1e-9, 300, 11).unwrap();
        let high = nmf_factorize(&x, 5, 1e-9, 300, 11).unwrap();
        let err_low = reconstruction_error(&x, &low.w, &low.h);
        let err_high = reconstruction_error(&x, &high.w, &high.h);
        assert!(err_high <= err_low + 1e-9, "{err_high} > {err_low}");
    }

    #[test]
    fn zero_iterations_returns_seeded_init() {
        let x = array![[1.0, 2.0], [3.0, 4.0]];
        let factors = nmf_factorize(&x, 2, 1e-6, 0, 99).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let w = seeded_matrix(&mut rng, 2, 2);
        let h = seeded_matrix(&mut rng, 2, 2);
        assert_eq!(factors.w, w);
        assert_eq!(factors.h, h);
    }

    #[test]
    fn invalid_rank_is_rejected() {
        let x = array![[1.0, 2.0], [3.0, 4.0]];
        assert!(matches!(
            nmf_factorize(&x, 0, 1e-6, 10, 0),
            Err(Error::InvalidParam { name: "r", .. })
        ));
        assert!(matches!(
            nmf_factorize(&x, 3, 1e-6, 10, 0),
            Err(Error::InvalidParam { name: "r", .. })
        ));
    }

    #[test]
    fn overflowing_magnitudes_signal_numerical_failure() {
        let x = array![[1e200, 1e200], [1e200, 1e200]];
        assert!(matches!(
            nmf_factorize(&x, 1, 1e-6, 10, 0),
            Err(Error::NonFiniteObjective { iteration: 0 })
        ));
    }

    #[test]
    fn model_shape_mismatch_is_rejected() {
        let ds = dataset_from(vec![array![[1.0, 2.0], [0.5, 1.0]]]);
        // hidden matrix has the wrong number of columns
        let model = model_with(
            array![[1.0, 1.0, 1.0]],
            vec![array![[1.0], [1.0]]],
            vec![1.0],
            1.0,
        );
        assert!(matches!(
            shd_objective(&ds, &model),
            Err(Error::ShapeMismatch { .. })
        ));
        // mapping count does not match the view count
        let model = model_with(array![[1.0, 1.0]], vec![], vec![], 1.0);
        assert!(matches!(
            shd_objective(&ds, &model),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn negative_input_is_rejected() {
        let x = array![[1.0, -2.0]];
        assert!(matches!(
            nmf_factorize(&x, 1, 1e-6, 10, 0),
            Err(Error::NegativeInput { .. })
        ));
    }

    #[test]
    fn objective_zero_at_perfect_reconstruction() {
        let w = array![[1.0], [2.0]];
        let h = array![[0.5, 1.5]];
        let x = w.dot(&h);
        let ds = dataset_from(vec![x]);
        let model = model_with(h, vec![w], vec![1.0], 0.0);
        assert_close(shd_objective(&ds, &model).unwrap(), 0.0, 1e-15);
    }

    #[test]
    fn objective_weights_the_view_errors() {
        // two 1x1 views with reconstruction errors 1 and 3
        let ds = dataset_from(vec![array![[2.0]], array![[3.0]]]);
        let h = array![[1.0]];
        let mappings = vec![array![[1.0]], array![[3.0 - 3.0f64.sqrt()]]];
        let model = model_with(h, mappings, vec![0.5, 0.5], 0.0);
        assert_close(shd_objective(&ds, &model).unwrap(), 2.0, 1e-12);
    }

    #[test]
    fn objective_entropy_term() {
        let w = array![[1.0]];
        let h = array![[1.0, 2.0]];
        let x = w.dot(&h);
        let ds = dataset_from(vec![x.clone(), x]);
        let model = model_with(h, vec![array![[1.0]], array![[1.0]]], vec![0.5, 0.5], 1.0);
        assert_close(shd_objective(&ds, &model).unwrap(), 0.5f64.ln(), 1e-12);
    }

    #[test]
    fn mapping_update_matches_plain_nmf_update() {
        let x = array![[1.0, 2.0], [0.5, 1.5]];
        let w = array![[0.7], [0.9]];
        let h = array![[1.0, 0.3]];
        assert_eq!(
            shd_update_wk(&x, &w, &h).unwrap(),
            nmf_update_w(&x, &w, &h).unwrap()
        );
    }

    #[test]
    fn scalar_mapping_update() {
        // (6*2) / (1*2*2) = 3
        let w = shd_update_wk(&array![[6.0]], &array![[1.0]], &array![[2.0]]).unwrap();
        assert_close(w[[0, 0]], 3.0, 1e-9);
    }

    #[test]
    fn hidden_update_reduces_to_plain_nmf_for_one_view() {
        let x = array![[1.0, 2.0, 3.0], [0.5, 0.25, 0.75]];
        let w = array![[0.4], [0.8]];
        let h = array![[0.9, 1.1, 0.2]];
        let ds = dataset_from(vec![x.clone()]);
        let model = model_with(h.clone(), vec![w.clone()], vec![1.0], 1.0);
        assert_eq!(
            shd_update_h(&ds, &model).unwrap(),
            nmf_update_h(&x, &w, &h).unwrap()
        );
    }

    #[test]
    fn duplicated_views_collapse_to_single_view_update() {
        let x = array![[1.0, 2.0, 3.0], [0.5, 0.25, 0.75]];
        let w = array![[0.4], [0.8]];
        let h = array![[0.9, 1.1, 0.2]];
        let single = dataset_from(vec![x.clone()]);
        let single_model = model_with(h.clone(), vec![w.clone()], vec![1.0], 1.0);
        let double = dataset_from(vec![x.clone(), x]);
        let double_model = model_with(h, vec![w.clone(), w], vec![0.5, 0.5], 1.0);
        assert_eq!(
            shd_update_h(&double, &double_model).unwrap(),
            shd_update_h(&single, &single_model).unwrap()
        );
    }

    #[test]
    fn hidden_update_preserves_zeros() {
        let x = array![[1.0, 2.0]];
        let w = array![[1.0]];
        let h = array![[0.0, 1.0]];
        let ds = dataset_from(vec![x]);
        let model = model_with(h, vec![w], vec![1.0], 1.0);
        assert_eq!(shd_update_h(&ds, &model).unwrap()[[0, 0]], 0.0);
    }

    #[test]
    fn equal_errors_give_uniform_weights() {
        let x = array![[1.0, 2.0]];
        let h = array![[1.0, 2.0]];
        let ds = dataset_from(vec![x.clone(), x]);
        let model = model_with(h, vec![array![[0.5]], array![[0.5]]], vec![0.5, 0.5], 2.0);
        let q = shd_update_q(&ds, &model).unwrap();
        assert_close(q[0], 0.5, 1e-15);
        assert_close(q[1], 0.5, 1e-15);
    }

    #[test]
    fn weight_update_evaluates_the_softmin() {
        // errors 0 and ln 2 at lambda = 1 give weights [2/3, 1/3]
        let h = array![[1.0]];
        let e1 = (2.0f64.ln()).sqrt();
        let ds = dataset_from(vec![array![[1.0]], array![[1.0 + e1]]]);
        let model = model_with(h, vec![array![[1.0]], array![[1.0]]], vec![0.5, 0.5], 1.0);
        let q = shd_update_q(&ds, &model).unwrap();
        assert_close(q[0], 2.0 / 3.0, 1e-12);
        assert_close(q[1], 1.0 / 3.0, 1e-12);
    }

    #[test]
    fn huge_lambda_flattens_weights() {
        let h = array![[1.0]];
        let ds = dataset_from(vec![array![[1.3]], array![[1.8]], array![[1.0]]]);
        let mappings = vec![array![[1.0]], array![[1.0]], array![[1.0]]];
        let model = model_with(h, mappings, vec![1.0 / 3.0; 3], 1e6);
        let q = shd_update_q(&ds, &model).unwrap();
        for &w in &q {
            assert_close(w, 1.0 / 3.0, 1e-5);
        }
    }

    #[test]
    fn weight_update_rejects_non_positive_lambda() {
        let h = array![[1.0]];
        let ds = dataset_from(vec![array![[1.0]]]);
        let model = model_with(h, vec![array![[1.0]]], vec![1.0], 0.0);
        assert!(matches!(
            shd_update_q(&ds, &model),
            Err(Error::InvalidParam { name: "lambda", .. })
        ));
    }

    proptest! {
        // softmin is invariant to shifting every error by a constant, which
        // checks the max-subtraction path against the naive formula
        #[test]
        fn weight_update_is_shift_invariant(
            errors in proptest::collection::vec(0.0f64..20.0, 2..5),
            shift in 0.0f64..50.0,
            lambda in 0.05f64..10.0,
        ) {
            let shifted: Vec<f64> = errors.iter().map(|e| e + shift).collect();
            let a = softmin_weights(&errors, lambda);
            let b = softmin_weights(&shifted, lambda);
            let naive: Vec<f64> = {
                let exps: Vec<f64> = errors.iter().map(|e| (-e / lambda).exp()).collect();
                let z: f64 = exps.iter().sum();
                exps.iter().map(|v| v / z).collect()
            };
            for ((x, y), n) in a.iter().zip(&b).zip(&naive) {
                prop_assert!((x - y).abs() < 1e-12);
                prop_assert!((x - n).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn planted_factors_are_recovered_to_near_zero_loss() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let r = 3;
        let n = 20;
        let h_true = seeded_matrix(&mut rng, r, n);
        let views: Vec<Array2<f64>> = [6usize, 5]
            .iter()
            .map(|&m| seeded_matrix(&mut rng, m, r).dot(&h_true))
            .collect();
        let ds = dataset_from(views);
        let model = shd_nmf(&ds, r, 1.0, 0.0, 1500, 21).unwrap();
        let errors = view_reconstruction_errors(&ds, &model).unwrap();
        let weighted: f64 = errors
            .iter()
            .zip(&model.view_weights)
            .map(|(e, q)| q * e)
            .sum();
        assert!(weighted <= 1e-6, "weighted loss {weighted}");
    }

    #[test]
    fn single_view_extraction_matches_plain_nmf() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let x = seeded_matrix(&mut rng, 6, 15);
        let ds = dataset_from(vec![x.clone()]);
        let model = shd_nmf(&ds, 3, 1.0, 1e-6, 60, 123).unwrap();
        let factors = nmf_factorize(&x, 3, 1e-6, 60, 123).unwrap();
        assert_eq!(model.hidden, factors.h);
        assert_eq!(model.mappings[0], factors.w);
    }

    #[test]
    fn zero_iterations_returns_init_with_one_objective() {
        let ds = dataset_from(vec![array![[1.0, 2.0], [0.5, 1.0]]]);
        let model = shd_nmf(&ds, 1, 1.0, 1e-6, 0, 4).unwrap();
        assert_eq!(model.objective_trace.len(), 1);
        assert_eq!(model.view_weights, vec![1.0]);
    }

    #[test]
    fn duplicated_views_converge_to_equal_weights() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let h_true = seeded_matrix(&mut rng, 2, 12);
        let x = seeded_matrix(&mut rng, 5, 2).dot(&h_true);
        let ds = dataset_from(vec![x.clone(), x]);
        let model = shd_nmf(&ds, 2, 1.0, 0.0, 2000, 33).unwrap();
        assert_close(model.view_weights[0], 0.5, 1e-6);
        assert_close(model.view_weights[1], 0.5, 1e-6);
    }

    #[test]
    fn trace_is_non_increasing() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for seed in 0..20 {
            let views = vec![
                seeded_matrix(&mut rng, 4, 14),
                seeded_matrix(&mut rng, 6, 14),
            ];
            let ds = dataset_from(views);
            let model = shd_nmf(&ds, 2, 0.5, 0.0, 40, seed).unwrap();
            for pair in model.objective_trace.windows(2) {
                assert!(
                    pair[1] <= pair[0] + 1e-9 * pair[0].abs().max(1e-12) + 1e-15,
                    "trace increased: {} -> {}",
                    pair[0],
                    pair[1]
                );
            }
        }
    }

    #[test]
    fn model_export_round_trips_matrices() {
        let dir = tempfile::tempdir().unwrap();
        let ds = dataset_from(vec![array![[1.0, 2.0, 0.5], [0.3, 0.9, 1.4]]]);
        let model = shd_nmf(&ds, 2, 1.0, 1e-6, 25, 8).unwrap();
        export_model(&model, dir.path()).unwrap();
        let h = crate::mvdata::read_matrix_csv(dir.path().join("hidden_H.csv")).unwrap();
        let w = crate::mvdata::read_matrix_csv(dir.path().join("W_1.csv")).unwrap();
        assert_eq!(h, model.hidden);
        assert_eq!(w, model.mappings[0]);
        let text = std::fs::read_to_string(dir.path().join("model.json")).unwrap();
        let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed["r"], 2);
        assert_eq!(
            parsed["objective_trace"].as_array().unwrap().len(),
            model.objective_trace.len()
        );
    }
}
