//! Small least-squares fits used by the scaling diagnostics.

use nalgebra::{DMatrix, DVector};

/// Least-squares coefficients for `y ≈ Σ_k c_k · basis_k(x)`.
///
/// Returns `None` when the design matrix is rank deficient.
pub fn least_squares(xs: &[f64], ys: &[f64], basis: &[&dyn Fn(f64) -> f64]) -> Option<Vec<f64>> {
    assert_eq!(xs.len(), ys.len());
    if xs.len() < basis.len() {
        return None;
    }
    let design = DMatrix::from_fn(xs.len(), basis.len(), |i, k| basis[k](xs[i]));
    let rhs = DVector::from_column_slice(ys);
    let svd = design.svd(true, true);
    let max_sv = svd.singular_values.max();
    if svd.singular_values.min() <= max_sv * 1e-12 {
        return None;
    }
    svd.solve(&rhs, 0.0).ok().map(|c| c.iter().copied().collect())
}

/// Ordinary `(slope, intercept)` of `y` against `x`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Option<(f64, f64)> {
    let c = least_squares(xs, ys, &[&|x| x, &|_| 1.0])?;
    Some((c[0], c[1]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_line() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x - 1.0).collect();
        let (m, b) = linear_fit(&xs, &ys).unwrap();
        assert!((m - 3.0).abs() < 1e-12 && (b + 1.0).abs() < 1e-12);
    }

    #[test]
    fn rank_deficient_is_none() {
        assert!(linear_fit(&[2.0, 2.0], &[1.0, 3.0]).is_none());
        assert!(linear_fit(&[2.0], &[1.0]).is_none());
    }
}
