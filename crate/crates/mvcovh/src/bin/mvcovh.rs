//! Command-line front end. All real work lives in the library; each
//! subcommand loads inputs, calls one harness or pipeline entry point, and
//! writes the report files. Failures exit nonzero with a one-line error JSON
//! on stderr.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use mvcovh::clustering::{fit_pipeline, HyperParams};
use mvcovh::error::Error;
use mvcovh::factorization::{export_model, shd_nmf};
use mvcovh::harness::{
    ablation_hidden, beta_sweep, default_beta_grid, export_trace, fit_report, grid_search,
    read_assignment_csv, synth_multiview, write_assignment_csv, write_beta_rows_csv, write_json,
    GridSpec,
};
use mvcovh::metrics::evaluate;
use mvcovh::mvdata::{load_manifest, write_dataset, write_matrix_csv, MultiViewDataset};

#[derive(Parser)]
#[command(
    name = "mvcovh",
    version,
    about = "Multi-view clustering with a shared hidden view: extraction, clustering, metrics, and benchmark protocols"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a planted synthetic multi-view dataset
    Synth(SynthArgs),
    /// Extract the shared hidden view from a dataset
    ExtractHidden(ExtractHiddenArgs),
    /// Run the full pipeline: normalize, extract the hidden view, cluster
    Fit(FitArgs),
    /// Evaluate an assignment against the dataset's ground-truth labels
    Eval(EvalArgs),
    /// Sweep the collaboration coefficient beta with repeated runs
    SweepBeta(SweepBetaArgs),
    /// Grid-search hyperparameters, selecting on mean NMI
    Grid(GridArgs),
    /// Compare repeated runs with (beta > 0) and without (beta = 0) the hidden view
    Ablate(AblateArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Master seed for every randomized stage
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Relative objective-change convergence threshold
    #[arg(long, default_value_t = mvcovh::clustering::DEFAULT_EPSILON)]
    epsilon: f64,
    /// Output directory (created if missing)
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct SynthArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Number of planted clusters
    #[arg(long, default_value_t = 3)]
    clusters: usize,
    /// Number of samples
    #[arg(long, default_value_t = 300)]
    samples: usize,
    /// Feature dimension of each view, comma separated
    #[arg(long, value_delimiter = ',', default_value = "8,6")]
    view_dims: Vec<usize>,
    /// Scale of the latent centers relative to unit within-cluster spread
    #[arg(long, default_value_t = 6.0)]
    separation: f64,
    /// Scale of the Gaussian observation noise
    #[arg(long, default_value_t = 0.1)]
    noise: f64,
    /// Dataset name recorded in the manifest
    #[arg(long, default_value = "synthetic")]
    name: String,
}

#[derive(Args)]
struct ExtractHiddenArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Dataset manifest path
    #[arg(long)]
    manifest: PathBuf,
    /// Hidden dimension r
    #[arg(long)]
    hidden_dim: usize,
    /// Entropy regularizer for the extraction view weights
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    /// Iteration cap
    #[arg(long, default_value_t = mvcovh::factorization::DEFAULT_MAX_ITER)]
    max_iter: usize,
}

#[derive(Args)]
struct FitArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Dataset manifest path
    #[arg(long)]
    manifest: PathBuf,
    /// Number of clusters C
    #[arg(long)]
    clusters: usize,
    /// Hidden dimension r
    #[arg(long)]
    hidden_dim: usize,
    /// Collaboration coefficient in [0, 1]
    #[arg(long, default_value_t = 0.5)]
    beta: f64,
    /// Entropy regularizer for the clustering view weights
    #[arg(long, default_value_t = 1.0)]
    eta: f64,
    /// Entropy regularizer for the extraction view weights
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    /// Iteration cap for both stages
    #[arg(long, default_value_t = mvcovh::clustering::DEFAULT_MAX_ITER)]
    max_iter: usize,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Dataset manifest path (labels required)
    #[arg(long)]
    manifest: PathBuf,
    /// Assignment CSV, one cluster index per line
    #[arg(long)]
    assignment: PathBuf,
}

#[derive(Args)]
struct SweepBetaArgs {
    #[command(flatten)]
    fit: FitArgs,
    /// Repeats per beta value
    #[arg(long, default_value_t = 10)]
    repeats: usize,
    /// Beta values to sweep; defaults to 0.0..=1.0 in steps of 0.1
    #[arg(long, value_delimiter = ',')]
    betas: Option<Vec<f64>>,
    /// Worker threads (0 = library default)
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

#[derive(Args)]
struct GridArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Dataset manifest path (labels required)
    #[arg(long)]
    manifest: PathBuf,
    /// Number of clusters C
    #[arg(long)]
    clusters: usize,
    /// Iteration cap for both stages
    #[arg(long, default_value_t = mvcovh::clustering::DEFAULT_MAX_ITER)]
    max_iter: usize,
    /// Repeats per grid cell
    #[arg(long, default_value_t = 10)]
    repeats: usize,
    /// Eta grid; defaults to 2^-6..2^6
    #[arg(long, value_delimiter = ',')]
    eta_grid: Option<Vec<f64>>,
    /// Beta grid; defaults to 0.0..=1.0 in steps of 0.1
    #[arg(long, value_delimiter = ',')]
    beta_grid: Option<Vec<f64>>,
    /// Hidden-dimension grid; defaults to the decile rule
    #[arg(long, value_delimiter = ',')]
    r_grid: Option<Vec<usize>>,
    /// Lambda grid; defaults to 2^-6..2^6
    #[arg(long, value_delimiter = ',')]
    lambda_grid: Option<Vec<f64>>,
    /// Worker threads (0 = library default)
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

#[derive(Args)]
struct AblateArgs {
    #[command(flatten)]
    fit: FitArgs,
    /// Repeats per arm
    #[arg(long, default_value_t = 10)]
    repeats: usize,
    /// Worker threads (0 = library default)
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

impl FitArgs {
    fn params(&self) -> HyperParams {
        HyperParams {
            clusters: self.clusters,
            hidden_dim: self.hidden_dim,
            beta: self.beta,
            eta: self.eta,
            lambda: self.lambda,
            epsilon: self.common.epsilon,
            max_iter: self.max_iter,
            seed: self.common.seed,
        }
    }
}

fn ensure_out(dir: &PathBuf) -> Result<(), Error> {
    std::fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.clone(),
        source,
    })
}

fn load_labeled(manifest: &PathBuf) -> Result<MultiViewDataset, Error> {
    let dataset = load_manifest(manifest)?;
    if dataset.labels().is_none() {
        return Err(Error::MissingLabels);
    }
    Ok(dataset)
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Synth(args) => {
            let dataset = synth_multiview(
                args.clusters,
                args.samples,
                &args.view_dims,
                args.separation,
                args.noise,
                args.common.seed,
            )?;
            ensure_out(&args.common.out)?;
            let manifest = write_dataset(&dataset, &args.common.out, &args.name)?;
            println!(
                "wrote {} ({} samples, {} views, {} clusters)",
                manifest.display(),
                dataset.n_samples(),
                dataset.n_views(),
                args.clusters
            );
        }
        Command::ExtractHidden(args) => {
            let dataset = load_manifest(&args.manifest)?;
            let normalized = dataset.normalized()?;
            let model = shd_nmf(
                &normalized,
                args.hidden_dim,
                args.lambda,
                args.common.epsilon,
                args.max_iter,
                args.common.seed,
            )?;
            ensure_out(&args.common.out)?;
            export_model(&model, &args.common.out)?;
            export_trace(&model.objective_trace, args.common.out.join("trace.csv"))?;
            println!(
                "extracted r={} hidden view in {} iterations; view weights {:?}",
                model.hidden_dim(),
                model.objective_trace.len() - 1,
                model.view_weights
            );
        }
        Command::Fit(args) => {
            let dataset = load_manifest(&args.manifest)?;
            let params = args.params();
            let (model, state) = fit_pipeline(&dataset, &params)?;
            ensure_out(&args.common.out)?;
            let report = fit_report(&dataset, &state, &params)?;
            write_json(&report, args.common.out.join("report.json"))?;
            export_trace(&state.objective_trace, args.common.out.join("trace.csv"))?;
            write_assignment_csv(&state.assignment, args.common.out.join("assignment.csv"))?;
            write_matrix_csv(&model.hidden, args.common.out.join("hidden_H.csv"))?;
            println!(
                "fit converged after {} iterations, objective {}",
                report.iterations,
                state
                    .objective_trace
                    .last()
                    .expect("trace holds the initial value")
            );
            if let Some(labels) = dataset.labels() {
                // scoring is informational here; fit output stands on its own
                if let Ok(metrics) = evaluate(labels, &state.assignment) {
                    println!(
                        "nmi {:.4}  rand index {:.4}  precision {:.4}",
                        metrics.nmi, metrics.rand_index, metrics.precision
                    );
                }
            }
        }
        Command::Eval(args) => {
            let dataset = load_labeled(&args.manifest)?;
            let assignment = read_assignment_csv(&args.assignment)?;
            let labels = dataset.labels().expect("checked above");
            let report = evaluate(labels, &assignment)?;
            ensure_out(&args.common.out)?;
            write_json(&report, args.common.out.join("report.json"))?;
            println!(
                "nmi {:.4}  rand index {:.4}  precision {:.4}",
                report.nmi, report.rand_index, report.precision
            );
        }
        Command::SweepBeta(args) => {
            let dataset = load_labeled(&args.fit.manifest)?;
            let params = args.fit.params();
            let betas = args.betas.unwrap_or_else(default_beta_grid);
            let sweep = beta_sweep(&dataset, &params, &betas, args.repeats, args.threads)?;
            ensure_out(&args.fit.common.out)?;
            write_json(&sweep, args.fit.common.out.join("report.json"))?;
            write_beta_rows_csv(&sweep.rows, args.fit.common.out.join("beta_sweep.csv"))?;
            for row in &sweep.rows {
                println!(
                    "beta {:.2}  nmi {:.4} ({:.4})",
                    row.beta, row.nmi.mean, row.nmi.sd
                );
            }
        }
        Command::Grid(args) => {
            let dataset = load_labeled(&args.manifest)?;
            let defaults = GridSpec::default_for(&dataset);
            let grid = GridSpec {
                eta_grid: args.eta_grid.unwrap_or(defaults.eta_grid),
                beta_grid: args.beta_grid.unwrap_or(defaults.beta_grid),
                r_grid: args.r_grid.unwrap_or(defaults.r_grid),
                lambda_grid: args.lambda_grid.unwrap_or(defaults.lambda_grid),
                repeats: args.repeats,
            };
            let base = HyperParams {
                clusters: args.clusters,
                hidden_dim: grid.r_grid[0],
                epsilon: args.common.epsilon,
                max_iter: args.max_iter,
                seed: args.common.seed,
                ..HyperParams::default()
            };
            let report = grid_search(&dataset, &base, &grid, args.threads)?;
            ensure_out(&args.common.out)?;
            write_json(&report, args.common.out.join("report.json"))?;
            println!(
                "best cell #{}: eta {} beta {} r {} lambda {} -> nmi {:.4} ({:.4}) over {} cells in {:.2}s",
                report.best.cell_index,
                report.best.eta,
                report.best.beta,
                report.best.r,
                report.best.lambda,
                report.nmi.mean,
                report.nmi.sd,
                report.cells.len(),
                report.wall_clock_secs
            );
        }
        Command::Ablate(args) => {
            let dataset = load_labeled(&args.fit.manifest)?;
            let params = args.fit.params();
            let report = ablation_hidden(&dataset, &params, args.repeats, args.threads)?;
            ensure_out(&args.fit.common.out)?;
            write_json(&report, args.fit.common.out.join("report.json"))?;
            println!(
                "without hidden (beta 0):  nmi {:.4} ({:.4})",
                report.without_hidden.nmi.mean, report.without_hidden.nmi.sd
            );
            println!(
                "with hidden (beta {:.2}): nmi {:.4} ({:.4})",
                report.beta, report.with_hidden.nmi.mean, report.with_hidden.nmi.sd
            );
        }
    }
    Ok(())
}

fn error_json(kind: &str, message: &str) -> String {
    serde_json::json!({ "error": message, "kind": kind }).to_string()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            if matches!(
                err.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            ) {
                print!("{err}");
                return ExitCode::SUCCESS;
            }
            eprintln!("{}", error_json("usage", &err.to_string()));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{}", error_json(err.kind(), &err.to_string()));
            ExitCode::FAILURE
        }
    }
}
