use serde::Serialize;

use crate::hamiltonian::{SpectrumReport, SubspaceOperator};
use crate::linalg::{
    dense_symmetric_eigen, lanczos_extreme, laplacian_gap, EigenConfig, Extreme, LinearOperator,
    SolverMethod, SparseMatrix,
};
use crate::logsum::ln_sum_exp;
use crate::walks::WalkEnsemble;
use crate::{Error, ModelParams, Result};

/// `π(x) = t^{2A(x)} / Z`, kept alongside its logarithm.
#[derive(Debug, Clone)]
pub struct StationaryDist {
    pub pi: Vec<f64>,
    pub log_pi: Vec<f64>,
    pub log_z: f64,
}

impl StationaryDist {
    /// `π` of a set given by membership flags.
    pub fn measure(&self, members: &[bool]) -> f64 {
        self.pi
            .iter()
            .zip(members)
            .filter(|(_, &m)| m)
            .map(|(p, _)| p)
            .sum()
    }
}

pub fn stationary(params: &ModelParams, ensemble: &WalkEnsemble) -> StationaryDist {
    let ln_t2 = 2.0 * params.ln_t();
    let log_w: Vec<f64> = ensemble.areas().map(|a| a as f64 * ln_t2).collect();
    let log_z = ln_sum_exp(&log_w);
    let log_pi: Vec<f64> = log_w.iter().map(|w| w - log_z).collect();
    StationaryDist {
        pi: log_pi.iter().map(|l| l.exp()).collect(),
        log_pi,
        log_z,
    }
}

#[derive(Debug, Clone)]
pub struct TransitionMatrix {
    pub matrix: SparseMatrix,
    pub beta: f64,
}

/// Entries below this are reported as negative rather than rounding noise.
const NEGATIVE_ENTRY_TOL: f64 = 1e-12;

pub fn build_p_from_h(
    params: &ModelParams,
    h: &SubspaceOperator,
    pi: &StationaryDist,
) -> Result<TransitionMatrix> {
    let beta = params.beta();
    let mut rows = Vec::with_capacity(h.dim());
    for x in 0..h.dim() {
        let mut row = Vec::new();
        let mut has_diag = false;
        for (y, v) in h.row(x) {
            let p = if x == y {
                has_diag = true;
                1.0 - beta * v
            } else {
                -beta * (0.5 * (pi.log_pi[y] - pi.log_pi[x])).exp() * v
            };
            if p < -NEGATIVE_ENTRY_TOL {
                return Err(Error::NegativeEntry {
                    row: x,
                    col: y,
                    value: p,
                });
            }
            row.push((y, p));
        }
        if !has_diag {
            row.push((x, 1.0));
        }
        rows.push(row);
    }
    Ok(TransitionMatrix {
        matrix: SparseMatrix::from_rows(rows),
        beta,
    })
}

/// `P` assembled from the move rates alone, without reference to `H`.
pub fn build_p_direct(params: &ModelParams, ensemble: &WalkEnsemble) -> TransitionMatrix {
    let ns2 = 2.0 * params.n as f64 * params.s as f64;
    let up = 1.0 / ns2;
    let down = 1.0 / (ns2 * params.t * params.t);
    let rows = (0..ensemble.len())
        .map(|x| {
            let mut row: Vec<(usize, f64)> = ensemble
                .local_moves(x)
                .into_iter()
                .map(|e| (e.to_id, if e.delta_area > 0 { up } else { down }))
                .collect();
            let out: f64 = row.iter().map(|(_, p)| p).sum();
            row.push((x, 1.0 - out));
            row
        })
        .collect();
    TransitionMatrix {
        matrix: SparseMatrix::from_rows(rows),
        beta: params.beta(),
    }
}

/// Structural checks of a transition matrix against `π`.
#[derive(Debug, Clone, Serialize)]
pub struct ChainChecks {
    pub max_row_sum_error: f64,
    pub min_entry: f64,
    pub max_detailed_balance_error: f64,
    pub min_diagonal: f64,
    pub max_diagonal: f64,
    /// `1 − 1/(2nst²)`.
    pub diagonal_upper_bound: f64,
    pub max_off_diagonal: f64,
    /// The off-diagonal bound `1/(2nst²)` as printed alongside the chain;
    /// area-increasing moves exceed it for `t > 1`.
    pub stated_off_diagonal_bound: f64,
}

impl ChainChecks {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_row_sum_error <= tol
            && self.min_entry >= -tol
            && self.max_detailed_balance_error <= tol
            && self.min_diagonal > 0.0
            && self.max_diagonal <= self.diagonal_upper_bound + tol
    }

    pub fn off_diagonal_bound_holds(&self) -> bool {
        self.max_off_diagonal <= self.stated_off_diagonal_bound
    }
}

impl TransitionMatrix {
    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.matrix.get(x, y)
    }

    pub fn check(&self, params: &ModelParams, pi: &StationaryDist) -> ChainChecks {
        let m = &self.matrix;
        let max_row_sum_error = m
            .row_sums()
            .iter()
            .map(|r| (r - 1.0).abs())
            .fold(0.0, f64::max);
        let min_entry = m.triplets().map(|(_, _, v)| v).fold(f64::INFINITY, f64::min);
        let max_detailed_balance_error = m
            .triplets()
            .map(|(x, y, v)| (pi.pi[x] * v - pi.pi[y] * m.get(y, x)).abs())
            .fold(0.0, f64::max);
        let diag = m.diagonal();
        let max_off_diagonal = m
            .triplets()
            .filter(|(x, y, _)| x != y)
            .map(|(_, _, v)| v)
            .fold(0.0, f64::max);
        let inv = 1.0 / (2.0 * params.n as f64 * params.s as f64 * params.t * params.t);
        ChainChecks {
            max_row_sum_error,
            min_entry,
            max_detailed_balance_error,
            min_diagonal: diag.iter().copied().fold(f64::INFINITY, f64::min),
            max_diagonal: diag.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            diagonal_upper_bound: 1.0 - inv,
            max_off_diagonal,
            stated_off_diagonal_bound: inv,
        }
    }

    /// `D^{1/2} P D^{−1/2}` with `D = diag(π)`, symmetrized against rounding.
    pub fn symmetrized(&self, pi: &StationaryDist) -> SparseMatrix {
        let raw = self
            .matrix
            .map_entries(|x, y, v| (0.5 * (pi.log_pi[x] - pi.log_pi[y])).exp() * v);
        raw.map_entries(|x, y, v| 0.5 * (v + raw.get(y, x)))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ChainSpectrum {
    pub lambda2: f64,
    /// `1 − λ₂`.
    pub gap_chain: f64,
    pub method: SolverMethod,
    pub residual: f64,
}

/// Second largest eigenvalue of a reversible `P`.
///
/// With `cfg.shift_invert`, `1 − λ₂` is the smallest nonzero eigenvalue of
/// the generator with edge weights `π_x P_xy` and mass `π`, solved by
/// [`laplacian_gap`]. Otherwise the symmetrization `Π^{1/2} P Π^{-1/2}` is
/// diagonalized densely up to `cfg.dense_cap`, and above it Lanczos runs
/// with `√π` deflated.
pub fn lambda2(p: &TransitionMatrix, pi: &StationaryDist, cfg: &EigenConfig) -> Result<ChainSpectrum> {
    let dim = p.dim();
    if dim < 2 {
        return Err(Error::InvalidParams("chain needs at least two states".into()));
    }
    if !cfg.shift_invert {
        let sym = p.symmetrized(pi);
        if dim <= cfg.dense_cap {
            let dense = sym.to_dense();
            let (values, vectors) = dense_symmetric_eigen(dense.clone());
            let k = dim - 2;
            let v = vectors.column(k).into_owned();
            let residual = crate::linalg::eigen_dense_residual(&dense, &v, values[k]);
            return Ok(ChainSpectrum {
                lambda2: values[k],
                gap_chain: 1.0 - values[k],
                method: SolverMethod::Dense,
                residual,
            });
        }
        let top: Vec<f64> = pi.log_pi.iter().map(|l| (0.5 * l).exp()).collect();
        let pair = lanczos_extreme(&sym, &[top], Extreme::Largest, cfg)?;
        return Ok(ChainSpectrum {
            lambda2: pair.value,
            gap_chain: 1.0 - pair.value,
            method: SolverMethod::DeflatedIterative,
            residual: pair.residual,
        });
    }
    let flows = p.matrix.map_entries(|x, y, v| if x == y { 0.0 } else { pi.pi[x] * v });
    let flows = flows.map_entries(|x, y, v| 0.5 * (v + flows.get(y, x)));
    let gap = laplacian_gap(&flows, &pi.pi, cfg)?;
    Ok(ChainSpectrum {
        lambda2: 1.0 - gap.value,
        gap_chain: gap.value,
        method: SolverMethod::ShiftInvert,
        residual: gap.residual,
    })
}

/// Agreement between `Δ(H)` and `(2nst²/(1+t²))(1 − λ₂)`.
#[derive(Debug, Clone, Serialize)]
pub struct GapRelation {
    pub gap_h: f64,
    pub factor: f64,
    pub gap_chain: f64,
    pub predicted_gap_h: f64,
    pub relative_discrepancy: f64,
    pub tolerance: f64,
    pub pass: bool,
}

pub fn gap_relation_check(
    params: &ModelParams,
    spectrum_h: &SpectrumReport,
    chain: &ChainSpectrum,
    tolerance: f64,
) -> GapRelation {
    let factor = params.gap_factor();
    let predicted = factor * chain.gap_chain;
    let relative_discrepancy = (spectrum_h.gap - predicted).abs() / spectrum_h.gap;
    GapRelation {
        gap_h: spectrum_h.gap,
        factor,
        gap_chain: chain.gap_chain,
        predicted_gap_h: predicted,
        relative_discrepancy,
        tolerance,
        pass: relative_discrepancy <= tolerance,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{build_h_subspace, spectral_gap};
    use crate::walks::{enumerate, Walk};
    use approx::assert_abs_diff_eq;

    fn setup(n: usize, s: usize, t: f64) -> (ModelParams, WalkEnsemble, StationaryDist) {
        let p = ModelParams::new(n, s, t).unwrap();
        let e = enumerate(&p).unwrap();
        let pi = stationary(&p, &e);
        (p, e, pi)
    }

    #[test]
    fn two_state_chain() {
        for t in [1.0, 1.5, 2.0, 3.0] {
            let (p, e, pi) = setup(1, 1, t);
            let t2 = t * t;
            // basis order: u1.d1, 0.0
            assert_abs_diff_eq!(pi.pi[1], 1.0 / (1.0 + t2), epsilon = 1e-15);
            assert_abs_diff_eq!(pi.pi[0], t2 / (1.0 + t2), epsilon = 1e-15);
            let h = build_h_subspace(&p, &e);
            let from_h = build_p_from_h(&p, &h, &pi).unwrap();
            assert_abs_diff_eq!(from_h.get(1, 1), 0.5, epsilon = 1e-15);
            assert_abs_diff_eq!(from_h.get(1, 0), 0.5, epsilon = 1e-15);
            assert_abs_diff_eq!(from_h.get(0, 1), 1.0 / (2.0 * t2), epsilon = 1e-15);
            assert_abs_diff_eq!(from_h.get(0, 0), 1.0 - 1.0 / (2.0 * t2), epsilon = 1e-15);
            let direct = build_p_direct(&p, &e);
            assert!(direct.matrix.max_abs_diff(&from_h.matrix) < 1e-15);
            let l2 = lambda2(&from_h, &pi, &EigenConfig::default()).unwrap();
            assert_abs_diff_eq!(l2.lambda2, (t2 - 1.0) / (2.0 * t2), epsilon = 1e-14);
        }
    }

    #[test]
    fn argmax_is_the_tents() {
        let (p, e, pi) = setup(3, 2, 2.0);
        let max = pi.pi.iter().copied().fold(0.0, f64::max);
        let tents: Vec<usize> = (0..e.len()).filter(|&i| pi.pi[i] == max).collect();
        assert_eq!(tents.len(), 8);
        for &i in &tents {
            assert_eq!(e.walk(i).area(), 9);
        }
        assert_abs_diff_eq!(max, (18.0 * p.ln_t() - pi.log_z).exp(), epsilon = 1e-15);
        assert_abs_diff_eq!(pi.pi.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn chain_structure() {
        for (n, s, t) in [(2, 2, 1.1), (3, 2, 2.0), (3, 3, 0.7), (4, 1, 1.5)] {
            let (p, e, pi) = setup(n, s, t);
            let direct = build_p_direct(&p, &e);
            let checks = direct.check(&p, &pi);
            assert!(checks.passes(1e-12), "{checks:?}");
            let h = build_h_subspace(&p, &e);
            let from_h = build_p_from_h(&p, &h, &pi).unwrap();
            assert!(direct.matrix.max_abs_diff(&from_h.matrix) < 1e-12);
            let flat = e.id_of(Walk::flat(n).steps()).unwrap();
            assert_abs_diff_eq!(direct.get(flat, flat), 1.0 / (2.0 * n as f64), epsilon = 1e-14);
            let out_mass = 1.0 - checks.min_diagonal;
            assert!(out_mass <= (2 * n - 1) as f64 / (2 * n) as f64 + 1e-14);
        }
    }

    #[test]
    fn stated_off_diagonal_bound_fails_for_t_above_one() {
        let (p, e, pi) = setup(2, 2, 2.0);
        let checks = build_p_direct(&p, &e).check(&p, &pi);
        assert!(!checks.off_diagonal_bound_holds());
        assert_abs_diff_eq!(checks.max_off_diagonal, 1.0 / 8.0, epsilon = 1e-15);
    }

    #[test]
    fn rate_ratio_is_t_squared() {
        let (p, e, _) = setup(3, 2, 1.7);
        let direct = build_p_direct(&p, &e);
        for edge in (0..e.len()).flat_map(|x| e.local_moves(x)) {
            if edge.delta_area > 0 {
                let fwd = direct.get(edge.from_id, edge.to_id);
                let back = direct.get(edge.to_id, edge.from_id);
                assert_abs_diff_eq!(fwd / back, p.t * p.t, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn symmetrization_has_top_vector_sqrt_pi() {
        let (p, e, pi) = setup(3, 2, 2.0);
        let sym = build_p_direct(&p, &e).symmetrized(&pi);
        let root: Vec<f64> = pi.pi.iter().map(|x| x.sqrt()).collect();
        let image = sym.matvec(&root);
        for (a, b) in image.iter().zip(&root) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-14);
        }
    }

    #[test]
    fn negative_entries_are_rejected() {
        let (p, e, pi) = setup(1, 1, 2.0);
        let bad = build_h_subspace(&p, &e).map_entries(|_, _, v| 10.0 * v);
        assert!(matches!(
            build_p_from_h(&p, &bad, &pi),
            Err(Error::NegativeEntry { .. })
        ));
    }

    #[test]
    fn gap_relation_small_cases() {
        for (n, s, t) in [(1, 1, 2.0), (2, 2, 1.1), (3, 2, 2.0), (3, 1, 1.5)] {
            let (p, e, pi) = setup(n, s, t);
            let h = build_h_subspace(&p, &e);
            let spec = spectral_gap(&h, None, &EigenConfig::default()).unwrap();
            let chain = lambda2(&build_p_direct(&p, &e), &pi, &EigenConfig::default()).unwrap();
            let rel = gap_relation_check(&p, &spec, &chain, 1e-9);
            assert!(rel.pass, "{rel:?}");
        }
        let (p, e, pi) = setup(1, 1, 2.0);
        let chain = lambda2(&build_p_direct(&p, &e), &pi, &EigenConfig::default()).unwrap();
        assert_abs_diff_eq!(chain.gap_chain, 5.0 / 8.0, epsilon = 1e-14);
    }

    #[test]
    fn lambda2_matches_dense_symmetrization() {
        let (p, e, pi) = setup(3, 2, 1.5);
        let chain = build_p_direct(&p, &e);
        let (values, _) = crate::linalg::dense_symmetric_eigen(chain.symmetrized(&pi).to_dense());
        let got = lambda2(&chain, &pi, &EigenConfig::default()).unwrap();
        assert_eq!(got.method, SolverMethod::ShiftInvert);
        assert_abs_diff_eq!(values[values.len() - 2], got.lambda2, epsilon = 1e-12);
        assert!(got.residual < 1e-12);
        for dense_cap in [4000, 5] {
            let cfg = EigenConfig {
                dense_cap,
                shift_invert: false,
                ..EigenConfig::default()
            };
            let other = lambda2(&chain, &pi, &cfg).unwrap();
            assert_ne!(other.method, SolverMethod::ShiftInvert);
            assert_abs_diff_eq!(other.lambda2, got.lambda2, epsilon = 1e-11);
        }
    }
}
