//! Extract the shared hidden view from a multi-view dataset and inspect the
//! learned view weights and convergence behaviour.
//!
//! ```sh
//! cargo run --example extract_hidden_view
//! ```

use mvcovh::factorization::{shd_nmf, view_reconstruction_errors};
use mvcovh::harness::synth_multiview;

fn main() -> mvcovh::Result<()> {
    // two informative views plus one that is mostly noise
    let clean = synth_multiview(3, 200, &[8, 6, 5], 7.0, 0.1, 11)?;
    let noisy = synth_multiview(3, 200, &[8, 6, 5], 7.0, 2.5, 11)?;
    let mut views = clean.views()[..2].to_vec();
    views.push(noisy.view(2).clone());
    let dataset = mvcovh::mvdata::MultiViewDataset::new(views, None)?;

    let normalized = dataset.normalized()?;
    let model = shd_nmf(&normalized, 3, 8.0, 1e-6, 200, 5)?;

    println!(
        "converged after {} iterations",
        model.objective_trace.len() - 1
    );
    println!(
        "objective: first {:.4} -> last {:.4}",
        model.objective_trace.first().unwrap(),
        model.objective_trace.last().unwrap()
    );
    let errors = view_reconstruction_errors(&normalized, &model)?;
    for (k, (weight, error)) in model.view_weights.iter().zip(&errors).enumerate() {
        println!("view {k}: reconstruction error {error:8.2}  weight {weight:.4}");
    }
    println!("(the noisiest view reconstructs worst and receives the lowest weight)");
    Ok(())
}
