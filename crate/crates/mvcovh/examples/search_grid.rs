//! Grid-search hyperparameters with seeded repeats per cell, selecting the
//! cell with the highest mean NMI.
//!
//! ```sh
//! cargo run --example search_grid
//! ```

use mvcovh::clustering::HyperParams;
use mvcovh::harness::synth_multiview;
use mvcovh::harness::{grid_search, GridSpec};

fn main() -> mvcovh::Result<()> {
    let dataset = synth_multiview(3, 180, &[7, 5], 5.0, 0.3, 77)?;
    let base = HyperParams {
        clusters: 3,
        seed: 21,
        ..HyperParams::default()
    };
    let grid = GridSpec {
        eta_grid: vec![0.25, 1.0, 4.0],
        beta_grid: vec![0.0, 0.3, 0.5, 0.7, 1.0],
        r_grid: vec![2, 3, 4],
        lambda_grid: vec![1.0, 8.0],
        repeats: 5,
    };

    let report = grid_search(&dataset, &base, &grid, 0)?;
    println!(
        "evaluated {} cells x {} repeats in {:.2}s",
        report.cells.len(),
        report.repeats,
        report.wall_clock_secs
    );
    println!(
        "best cell #{}: eta {} beta {} r {} lambda {}",
        report.best.cell_index,
        report.best.eta,
        report.best.beta,
        report.best.r,
        report.best.lambda
    );
    println!(
        "best mean nmi {:.4} (sd {:.4}), rand index {:.4}, precision {:.4}",
        report.nmi.mean, report.nmi.sd, report.rand_index.mean, report.precision.mean
    );

    let mut top: Vec<_> = report.cells.iter().collect();
    top.sort_by(|a, b| b.nmi.mean.total_cmp(&a.nmi.mean));
    println!("top five cells:");
    for cell in top.iter().take(5) {
        println!(
            "  eta {:<5} beta {:<4} r {} lambda {:<4} -> nmi {:.4}",
            cell.eta, cell.beta, cell.r, cell.lambda, cell.nmi.mean
        );
    }
    Ok(())
}
