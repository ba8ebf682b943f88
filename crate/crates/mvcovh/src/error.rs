use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by dataset loading, fitting, metrics, and the harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("file not found: {path}")]
    MissingFile {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("failed to parse manifest {path}: {source}")]
    ManifestParse {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("csv error in {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("view '{view}' contains no data")]
    EmptyView { view: String },

    #[error("non-numeric cell '{token}' in view '{view}' at row {row}, column {col}")]
    NonNumericCell {
        view: String,
        row: usize,
        col: usize,
        token: String,
    },

    #[error(
        "row count mismatch: view '{first_view}' has {first_rows} rows but view '{view}' has {rows}"
    )]
    RowCountMismatch {
        first_view: String,
        first_rows: usize,
        view: String,
        rows: usize,
    },

    #[error("labels file has {labels} entries but the views have {samples} samples")]
    LabelCountMismatch { labels: usize, samples: usize },

    #[error("non-finite value at row {row}, column {col} of {context}")]
    NonFiniteInput {
        context: String,
        row: usize,
        col: usize,
    },

    #[error("negative value at row {row}, column {col} of {context}; input must be non-negative")]
    NegativeInput {
        context: String,
        row: usize,
        col: usize,
    },

    #[error("shape mismatch: {context}")]
    ShapeMismatch { context: String },

    #[error("invalid parameter {name}: {reason}")]
    InvalidParam { name: &'static str, reason: String },

    #[error("objective became non-finite at iteration {iteration}")]
    NonFiniteObjective { iteration: usize },

    #[error("metric undefined: {reason}")]
    UndefinedMetric { reason: String },

    #[error("dataset has no ground-truth labels; metric computation requires them")]
    MissingLabels,
}

impl Error {
    /// Stable machine-readable tag for this error, used in the CLI's error JSON.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::MissingFile { .. } => "missing_file",
            Error::Io { .. } => "io",
            Error::ManifestParse { .. } => "manifest_parse",
            Error::Csv { .. } => "csv",
            Error::EmptyView { .. } => "empty_view",
            Error::NonNumericCell { .. } => "non_numeric_cell",
            Error::RowCountMismatch { .. } => "row_count_mismatch",
            Error::LabelCountMismatch { .. } => "label_count_mismatch",
            Error::NonFiniteInput { .. } => "non_finite_input",
            Error::NegativeInput { .. } => "negative_input",
            Error::ShapeMismatch { .. } => "shape_mismatch",
            Error::InvalidParam { .. } => "invalid_param",
            Error::NonFiniteObjective { .. } => "non_finite_objective",
            Error::UndefinedMetric { .. } => "undefined_metric",
            Error::MissingLabels => "missing_labels",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
