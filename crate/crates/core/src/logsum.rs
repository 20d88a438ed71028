//! Log-domain accumulation helpers.

/// `ln(e^a + e^b)` without overflow; `-inf` acts as the additive identity.
pub fn ln_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// `ln Σ e^{x_i}` with max subtraction. Returns `-inf` for an empty input.
pub fn ln_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    if max.is_infinite() {
        return max;
    }
    let sum: f64 = xs.iter().map(|&x| (x - max).exp()).sum();
    max + sum.ln()
}

/// Normalized probabilities `e^{x_i} / Σ e^{x_j}` together with `ln Σ e^{x_j}`.
pub fn normalize_ln(xs: &[f64]) -> (Vec<f64>, f64) {
    let ln_norm = ln_sum_exp(xs);
    (xs.iter().map(|&x| (x - ln_norm).exp()).collect(), ln_norm)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sums_without_overflow() {
        let xs = [1000.0, 1000.0];
        assert!((ln_sum_exp(&xs) - (1000.0 + 2f64.ln())).abs() < 1e-12);
        assert_eq!(ln_sum_exp(&[]), f64::NEG_INFINITY);
        assert!((ln_add_exp(f64::NEG_INFINITY, 3.0) - 3.0).abs() < 1e-15);
        assert!((ln_add_exp(0.0, 0.0) - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn normalizes() {
        let (p, z) = normalize_ln(&[0.0, 2f64.ln()]);
        assert!((p[0] - 1.0 / 3.0).abs() < 1e-15);
        assert!((p[1] - 2.0 / 3.0).abs() < 1e-15);
        assert!((z - 3f64.ln()).abs() < 1e-15);
    }
}
