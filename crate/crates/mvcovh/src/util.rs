//! Small shared numeric helpers.

/// Relative change between consecutive objective values, guarded against a
/// vanishing denominator.
pub(crate) fn rel_change(prev: f64, curr: f64) -> f64 {
    (curr - prev).abs() / prev.abs().max(1e-12)
}

/// Weighted negative-entropy term `sum_k w_k ln w_k` with `0 ln 0 := 0`.
pub(crate) fn weighted_log_sum(weights: &[f64]) -> f64 {
    weights
        .iter()
        .map(|&w| if w > 0.0 { w * w.ln() } else { 0.0 })
        .sum()
}

/// Softmax of `-cost_k / scale` computed with max-subtraction so large costs
/// do not underflow to an all-zero vector.
pub(crate) fn softmin_weights(costs: &[f64], scale: f64) -> Vec<f64> {
    let exponents: Vec<f64> = costs.iter().map(|&c| -c / scale).collect();
    let max = exponents.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let unnormalized: Vec<f64> = exponents.iter().map(|&a| (a - max).exp()).collect();
    let total: f64 = unnormalized.iter().sum();
    unnormalized.iter().map(|&u| u / total).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rel_change_handles_zero_prev() {
        assert!(rel_change(0.0, 1.0) > 1.0);
        assert_eq!(rel_change(2.0, 1.0), 0.5);
    }

    #[test]
    fn softmin_sums_to_one_under_huge_costs() {
        let w = softmin_weights(&[1e9, 2e9, 3e9], 1.0);
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(w[0] > 0.99);
    }

    #[test]
    fn zero_weight_contributes_zero_entropy() {
        assert_eq!(weighted_log_sum(&[0.0, 1.0]), 0.0);
    }
}
