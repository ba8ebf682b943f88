//! Multi-view dataset loading, validation, and normalization.
//!
//! A dataset is a set of K feature matrices ("views") describing the same N
//! samples, plus optional ground-truth labels. On disk a dataset is a JSON
//! manifest pointing at one CSV file per view (rows are samples) and an
//! optional labels CSV (one token per row). In memory each view is stored in
//! the column-sample convention used by the solvers: an `m_k x N` matrix whose
//! columns are samples.

use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One view of a multi-view dataset: a named `m_k x N` feature matrix with
/// features as rows and samples as columns.
#[derive(Debug, Clone, PartialEq)]
pub struct ViewMatrix {
    pub name: String,
    pub data: Array2<f64>,
}

impl ViewMatrix {
    pub fn new(name: impl Into<String>, data: Array2<f64>) -> Self {
        Self {
            name: name.into(),
            data,
        }
    }

    /// Number of features (rows).
    pub fn feature_dim(&self) -> usize {
        self.data.nrows()
    }

    /// Number of samples (columns).
    pub fn n_samples(&self) -> usize {
        self.data.ncols()
    }

    /// Min-max normalized copy of this view. See [`normalize_view`].
    pub fn normalized(&self) -> Result<ViewMatrix> {
        normalize_view(self)
    }
}

/// Per-feature (per-row) min-max scaling of a raw feature matrix.
///
/// Each row is mapped through `(x - min) / (max - min)` so every entry lands
/// in `[0, 1]`; rows with zero range map to all zeros. Rejects NaN or
/// infinite entries.
pub fn normalize_matrix(raw: &Array2<f64>) -> Result<Array2<f64>> {
    for ((i, j), &v) in raw.indexed_iter() {
        if !v.is_finite() {
            return Err(Error::NonFiniteInput {
                context: "view matrix".to_string(),
                row: i,
                col: j,
            });
        }
    }
    let mut out = raw.clone();
    for mut row in out.rows_mut() {
        let min = row.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let range = max - min;
        if range == 0.0 {
            row.fill(0.0);
        } else {
            row.mapv_inplace(|v| (v - min) / range);
        }
    }
    Ok(out)
}

/// Normalize one view with per-feature min-max scaling, keeping its name.
pub fn normalize_view(view: &ViewMatrix) -> Result<ViewMatrix> {
    Ok(ViewMatrix {
        name: view.name.clone(),
        data: normalize_matrix(&view.data)?,
    })
}

/// K sample-aligned views plus optional ground-truth labels.
///
/// Invariants checked at construction: at least one view, at least one
/// sample, every view has the same sample count, and labels (when present)
/// cover every sample with a contiguous class alphabet `0..C_true` in which
/// every class occurs.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiViewDataset {
    views: Vec<ViewMatrix>,
    labels: Option<Vec<usize>>,
}

impl MultiViewDataset {
    pub fn new(views: Vec<ViewMatrix>, labels: Option<Vec<usize>>) -> Result<Self> {
        let first = views.first().ok_or_else(|| Error::InvalidParam {
            name: "views",
            reason: "a dataset needs at least one view".to_string(),
        })?;
        let n = first.n_samples();
        if n == 0 {
            return Err(Error::EmptyView {
                view: first.name.clone(),
            });
        }
        for view in &views {
            if view.feature_dim() == 0 || view.n_samples() == 0 {
                return Err(Error::EmptyView {
                    view: view.name.clone(),
                });
            }
            if view.n_samples() != n {
                return Err(Error::RowCountMismatch {
                    first_view: first.name.clone(),
                    first_rows: n,
                    view: view.name.clone(),
                    rows: view.n_samples(),
                });
            }
        }
        if let Some(labels) = &labels {
            if labels.len() != n {
                return Err(Error::LabelCountMismatch {
                    labels: labels.len(),
                    samples: n,
                });
            }
            let classes = labels.iter().max().map_or(0, |&m| m + 1);
            let mut seen = vec![false; classes];
            for &l in labels {
                seen[l] = true;
            }
            if seen.iter().any(|&s| !s) {
                return Err(Error::InvalidParam {
                    name: "labels",
                    reason: "label values must be contiguous from 0 with every class occupied"
                        .to_string(),
                });
            }
        }
        Ok(Self { views, labels })
    }

    pub fn views(&self) -> &[ViewMatrix] {
        &self.views
    }

    pub fn view(&self, k: usize) -> &ViewMatrix {
        &self.views[k]
    }

    pub fn n_views(&self) -> usize {
        self.views.len()
    }

    pub fn n_samples(&self) -> usize {
        self.views[0].n_samples()
    }

    pub fn labels(&self) -> Option<&[usize]> {
        self.labels.as_deref()
    }

    /// Number of ground-truth classes, when labels are present.
    pub fn n_classes(&self) -> Option<usize> {
        self.labels
            .as_ref()
            .map(|l| l.iter().max().map_or(0, |&m| m + 1))
    }

    /// Smallest feature dimensionality over all views; the admissible upper
    /// bound for the hidden dimension.
    pub fn min_feature_dim(&self) -> usize {
        self.views
            .iter()
            .map(ViewMatrix::feature_dim)
            .min()
            .unwrap_or(0)
    }

    /// Dataset with every view min-max normalized.
    pub fn normalized(&self) -> Result<MultiViewDataset> {
        let views = self
            .views
            .iter()
            .map(normalize_view)
            .collect::<Result<Vec<_>>>()?;
        Ok(MultiViewDataset {
            views,
            labels: self.labels.clone(),
        })
    }
}

/// On-disk description of a dataset: a named list of view CSVs and an
/// optional labels CSV, with paths relative to the manifest file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub name: String,
    pub views: Vec<ManifestView>,
    #[serde(default)]
    pub labels: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ManifestView {
    pub name: String,
    pub path: String,
    pub has_header: bool,
}

/// Load a dataset from a JSON manifest.
///
/// View CSVs hold one sample per row; each view is transposed into the
/// `m_k x N` column-sample layout. Label tokens (integers or strings) are
/// remapped to contiguous integers `0..C_true` in first-occurrence order.
pub fn load_manifest(path: impl AsRef<Path>) -> Result<MultiViewDataset> {
    let path = path.as_ref();
    let text = read_file(path)?;
    let manifest: DatasetManifest =
        serde_json::from_str(&text).map_err(|source| Error::ManifestParse {
            path: path.to_path_buf(),
            source,
        })?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));

    let mut views = Vec::with_capacity(manifest.views.len());
    let mut sample_counts: Option<(String, usize)> = None;
    for view in &manifest.views {
        let rows = read_csv_rows(&base.join(&view.path), view.has_header, &view.name)?;
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::EmptyView {
                view: view.name.clone(),
            });
        }
        match &sample_counts {
            None => sample_counts = Some((view.name.clone(), rows.len())),
            Some((first_view, first_rows)) => {
                if rows.len() != *first_rows {
                    return Err(Error::RowCountMismatch {
                        first_view: first_view.clone(),
                        first_rows: *first_rows,
                        view: view.name.clone(),
                        rows: rows.len(),
                    });
                }
            }
        }
        views.push(ViewMatrix::new(view.name.clone(), transpose_rows(&rows)));
    }

    let labels = match &manifest.labels {
        Some(rel) => {
            let tokens = read_label_tokens(&base.join(rel))?;
            let n = views[0].n_samples();
            if tokens.len() != n {
                return Err(Error::LabelCountMismatch {
                    labels: tokens.len(),
                    samples: n,
                });
            }
            Some(remap_labels(&tokens))
        }
        None => None,
    };

    MultiViewDataset::new(views, labels)
}

/// Map arbitrary label tokens to contiguous integers in first-occurrence
/// order, so `["b", "a", "b"]` becomes `[0, 1, 0]`.
pub fn remap_labels(tokens: &[String]) -> Vec<usize> {
    let mut order: Vec<&str> = Vec::new();
    tokens
        .iter()
        .map(
            |t| match order.iter().position(|seen| *seen == t.as_str()) {
                Some(idx) => idx,
                None => {
                    order.push(t.as_str());
                    order.len() - 1
                }
            },
        )
        .collect()
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| {
        if source.kind() == std::io::ErrorKind::NotFound {
            Error::MissingFile {
                path: path.to_path_buf(),
                source,
            }
        } else {
            Error::Io {
                path: path.to_path_buf(),
                source,
            }
        }
    })
}

fn open_file(path: &Path) -> Result<File> {
    File::open(path).map_err(|source| {
        if source.kind() == std::io::ErrorKind::NotFound {
            Error::MissingFile {
                path: path.to_path_buf(),
                source,
            }
        } else {
            Error::Io {
                path: path.to_path_buf(),
                source,
            }
        }
    })
}

fn read_csv_rows(path: &Path, has_header: bool, view: &str) -> Result<Vec<Vec<f64>>> {
    let file = open_file(path)?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(has_header)
        .trim(csv::Trim::All)
        .from_reader(file);
    let mut rows = Vec::new();
    for (row_idx, record) in reader.records().enumerate() {
        let record = record.map_err(|source| Error::Csv {
            path: path.to_path_buf(),
            source,
        })?;
        let mut row = Vec::with_capacity(record.len());
        for (col, token) in record.iter().enumerate() {
            let value: f64 = token.parse().map_err(|_| Error::NonNumericCell {
                view: view.to_string(),
                row: row_idx,
                col,
                token: token.to_string(),
            })?;
            row.push(value);
        }
        rows.push(row);
    }
    Ok(rows)
}

fn read_label_tokens(path: &Path) -> Result<Vec<String>> {
    let text = read_file(path)?;
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(str::to_string)
        .collect())
}

/// Transpose sample-row CSV data into the `features x samples` layout.
fn transpose_rows(rows: &[Vec<f64>]) -> Array2<f64> {
    let n = rows.len();
    let m = rows[0].len();
    Array2::from_shape_fn((m, n), |(i, j)| rows[j][i])
}

/// Write a matrix as CSV in its storage layout, one matrix row per line.
///
/// Values use the shortest decimal representation that round-trips through
/// `f64` parsing, so written files reproduce the matrix exactly.
pub fn write_matrix_csv(matrix: &Array2<f64>, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::new();
    for row in matrix.rows() {
        let line: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    write_file(path, out.as_bytes())
}

/// Read a matrix CSV written by [`write_matrix_csv`].
pub fn read_matrix_csv(path: impl AsRef<Path>) -> Result<Array2<f64>> {
    let path = path.as_ref();
    let rows = read_csv_rows(path, false, &path.display().to_string())?;
    if rows.is_empty() || rows[0].is_empty() {
        return Err(Error::EmptyView {
            view: path.display().to_string(),
        });
    }
    let (m, n) = (rows.len(), rows[0].len());
    Ok(Array2::from_shape_fn((m, n), |(i, j)| rows[i][j]))
}

pub(crate) fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut file = File::create(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    file.write_all(bytes).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Write a dataset as a manifest plus CSV files under `dir`.
///
/// Produces `manifest.json`, one `<view-name>.csv` per view (samples as
/// rows), and `labels.csv` when labels are present. Returns the manifest
/// path.
pub fn write_dataset(
    dataset: &MultiViewDataset,
    dir: impl AsRef<Path>,
    name: &str,
) -> Result<PathBuf> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.to_path_buf(),
        source,
    })?;

    let mut manifest_views = Vec::new();
    for view in dataset.views() {
        let file_name = format!("{}.csv", view.name);
        // view CSVs are sample-major on disk
        write_matrix_csv(&view.data.t().to_owned(), dir.join(&file_name))?;
        manifest_views.push(ManifestView {
            name: view.name.clone(),
            path: file_name,
            has_header: false,
        });
    }

    let labels_path = match dataset.labels() {
        Some(labels) => {
            let mut text = String::new();
            for l in labels {
                text.push_str(&format!("{l}\n"));
            }
            write_file(&dir.join("labels.csv"), text.as_bytes())?;
            Some("labels.csv".to_string())
        }
        None => None,
    };

    let manifest = DatasetManifest {
        name: name.to_string(),
        views: manifest_views,
        labels: labels_path,
    };
    let manifest_path = dir.join("manifest.json");
    let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    write_file(&manifest_path, format!("{json}\n").as_bytes())?;
    Ok(manifest_path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;
    use proptest::prelude::*;

    #[test]
    fn minmax_endpoints() {
        let raw = array![[-1.0, 0.0, 1.0]];
        let out = normalize_matrix(&raw).unwrap();
        assert_eq!(out, array![[0.0, 0.5, 1.0]]);
    }

    #[test]
    fn constant_row_maps_to_zero() {
        let raw = array![[5.0, 5.0, 5.0]];
        let out = normalize_matrix(&raw).unwrap();
        assert_eq!(out, array![[0.0, 0.0, 0.0]]);
    }

    #[test]
    fn direct_scaling_of_positive_row() {
        let raw = array![[0.0, 2.0, 8.0]];
        let out = normalize_matrix(&raw).unwrap();
        assert_eq!(out, array![[0.0, 0.25, 1.0]]);
    }

    #[test]
    fn rejects_non_finite() {
        let raw = array![[1.0, f64::NAN]];
        match normalize_matrix(&raw) {
            Err(Error::NonFiniteInput { row: 0, col: 1, .. }) => {}
            other => panic!("expected NonFiniteInput, got {other:?}"),
        }
        let raw = array![[1.0], [f64::INFINITY]];
        assert!(normalize_matrix(&raw).is_err());
    }

    #[test]
    fn idempotent_on_unit_range_rows() {
        let raw = array![[0.0, 0.25, 1.0], [0.0, 1.0, 0.5]];
        let once = normalize_matrix(&raw).unwrap();
        let twice = normalize_matrix(&once).unwrap();
        assert_eq!(once, twice);
    }

    proptest! {
        #[test]
        fn affine_invariance(
            values in proptest::collection::vec(-100.0f64..100.0, 3..12),
            scale in 0.1f64..50.0,
            shift in -50.0f64..50.0,
        ) {
            let n = values.len();
            let raw = Array2::from_shape_vec((1, n), values.clone()).unwrap();
            let transformed = raw.mapv(|v| scale * v + shift);
            let a = normalize_matrix(&raw).unwrap();
            let b = normalize_matrix(&transformed).unwrap();
            for (x, y) in a.iter().zip(b.iter()) {
                prop_assert!((x - y).abs() < 1e-9);
            }
        }

        #[test]
        fn output_range_is_unit_interval(
            values in proptest::collection::vec(-1e6f64..1e6, 2..40),
        ) {
            let n = values.len();
            let raw = Array2::from_shape_vec((1, n), values).unwrap();
            let out = normalize_matrix(&raw).unwrap();
            for &v in out.iter() {
                prop_assert!((0.0..=1.0).contains(&v));
            }
        }
    }

    #[test]
    fn remaps_labels_in_first_occurrence_order() {
        let tokens: Vec<String> = ["b", "a", "b"].iter().map(|s| s.to_string()).collect();
        assert_eq!(remap_labels(&tokens), vec![0, 1, 0]);
    }

    fn write_temp(dir: &Path, name: &str, contents: &str) {
        std::fs::write(dir.join(name), contents).unwrap();
    }

    fn basic_manifest(dir: &Path, labels: Option<&str>) {
        let manifest = serde_json::json!({
            "name": "tiny",
            "views": [
                {"name": "first", "path": "a.csv", "has_header": false},
                {"name": "second", "path": "b.csv", "has_header": true},
            ],
            "labels": labels,
        });
        write_temp(dir, "manifest.json", &manifest.to_string());
    }

    #[test]
    fn loads_two_views_and_transposes() {
        let dir = tempfile::tempdir().unwrap();
        basic_manifest(dir.path(), Some("labels.csv"));
        write_temp(dir.path(), "a.csv", "1,2\n3,4\n5,6\n");
        write_temp(dir.path(), "b.csv", "f1\n-1.5\n0.25\n7\n");
        write_temp(dir.path(), "labels.csv", "b\na\nb\n");

        let ds = load_manifest(dir.path().join("manifest.json")).unwrap();
        assert_eq!(ds.n_views(), 2);
        assert_eq!(ds.n_samples(), 3);
        // rows were samples; in memory features are rows
        assert_eq!(ds.view(0).data, array![[1.0, 3.0, 5.0], [2.0, 4.0, 6.0]]);
        assert_eq!(ds.view(1).data, array![[-1.5, 0.25, 7.0]]);
        assert_eq!(ds.labels().unwrap(), &[0, 1, 0]);
        assert_eq!(ds.n_classes(), Some(2));
        assert_eq!(ds.min_feature_dim(), 1);
    }

    #[test]
    fn loading_is_deterministic() {
        let dir = tempfile::tempdir().unwrap();
        basic_manifest(dir.path(), None);
        write_temp(dir.path(), "a.csv", "1,2\n3,4\n");
        write_temp(dir.path(), "b.csv", "h\n0.1\n0.2\n");
        let first = load_manifest(dir.path().join("manifest.json")).unwrap();
        let second = load_manifest(dir.path().join("manifest.json")).unwrap();
        assert_eq!(first, second);
    }

    #[test]
    fn missing_view_file_is_a_named_error() {
        let dir = tempfile::tempdir().unwrap();
        basic_manifest(dir.path(), None);
        write_temp(dir.path(), "a.csv", "1\n2\n");
        match load_manifest(dir.path().join("manifest.json")) {
            Err(Error::MissingFile { .. }) => {}
            other => panic!("expected MissingFile, got {other:?}"),
        }
    }

    #[test]
    fn row_count_mismatch_is_reported() {
        let dir = tempfile::tempdir().unwrap();
        basic_manifest(dir.path(), None);
        write_temp(dir.path(), "a.csv", "1\n2\n3\n");
        write_temp(dir.path(), "b.csv", "h\n1\n2\n3\n4\n");
        match load_manifest(dir.path().join("manifest.json")) {
            Err(Error::RowCountMismatch {
                first_rows: 3,
                rows: 4,
                ..
            }) => {}
            other => panic!("expected RowCountMismatch, got {other:?}"),
        }
    }

    #[test]
    fn non_numeric_cell_is_located() {
        let dir = tempfile::tempdir().unwrap();
        basic_manifest(dir.path(), None);
        write_temp(dir.path(), "a.csv", "1,2\n3,oops\n");
        write_temp(dir.path(), "b.csv", "h\n1\n2\n");
        match load_manifest(dir.path().join("manifest.json")) {
            Err(Error::NonNumericCell {
                row: 1,
                col: 1,
                token,
                ..
            }) => {
                assert_eq!(token, "oops");
            }
            other => panic!("expected NonNumericCell, got {other:?}"),
        }
    }

    #[test]
    fn empty_view_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        basic_manifest(dir.path(), None);
        write_temp(dir.path(), "a.csv", "");
        write_temp(dir.path(), "b.csv", "h\n1\n");
        match load_manifest(dir.path().join("manifest.json")) {
            Err(Error::EmptyView { view }) => assert_eq!(view, "first"),
            other => panic!("expected EmptyView, got {other:?}"),
        }
    }

    #[test]
    fn label_count_mismatch_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        basic_manifest(dir.path(), Some("labels.csv"));
        write_temp(dir.path(), "a.csv", "1\n2\n");
        write_temp(dir.path(), "b.csv", "h\n1\n2\n");
        write_temp(dir.path(), "labels.csv", "0\n1\n1\n");
        match load_manifest(dir.path().join("manifest.json")) {
            Err(Error::LabelCountMismatch {
                labels: 3,
                samples: 2,
            }) => {}
            other => panic!("expected LabelCountMismatch, got {other:?}"),
        }
    }

    #[test]
    fn gapped_label_alphabets_are_rejected() {
        let views = vec![ViewMatrix::new("x", array![[1.0, 2.0, 3.0]])];
        // class 1 never occurs
        match MultiViewDataset::new(views, Some(vec![0, 2, 2])) {
            Err(Error::InvalidParam { name: "labels", .. }) => {}
            other => panic!("expected InvalidParam, got {other:?}"),
        }
    }

    #[test]
    fn matrix_csv_round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let matrix = array![
            [0.1 + 0.2, 1.0 / 3.0, f64::MIN_POSITIVE],
            [-1234.5678, 1e300, 2.2250738585072014e-308],
        ];
        let path = dir.path().join("m.csv");
        write_matrix_csv(&matrix, &path).unwrap();
        let back = read_matrix_csv(&path).unwrap();
        assert_eq!(matrix, back);
    }

    #[test]
    fn dataset_write_then_load_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let views = vec![
            ViewMatrix::new("x", array![[0.5, 1.5, 2.5], [3.0, 4.0, 5.0]]),
            ViewMatrix::new("y", array![[9.0, 8.0, 7.0]]),
        ];
        let ds = MultiViewDataset::new(views, Some(vec![0, 1, 0])).unwrap();
        let manifest = write_dataset(&ds, dir.path(), "round").unwrap();
        let back = load_manifest(manifest).unwrap();
        assert_eq!(ds, back);
    }
}
