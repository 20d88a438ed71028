//! The deformed Motzkin Hamiltonian `H(t)`: ground state, restriction to the
//! walk subspace, the full spin-space operator and its spectral gap.
//!
//! Each bond carries the projector `Σ_k |U^k⟩⟨U^k| + |D^k⟩⟨D^k| + |φ^k⟩⟨φ^k|`
//! with
//!
//! ```text
//! |U^k(t)⟩ = (t|0u^k⟩ − |u^k 0⟩) / √(1+t²)
//! |D^k(t)⟩ = (|0d^k⟩ − t|d^k 0⟩) / √(1+t²)
//! |φ^k(t)⟩ = (|u^k d^k⟩ − t|00⟩) / √(1+t²)
//! ```
//!
//! On the span of valid walks every nonzero off-diagonal element equals
//! `−t/(1+t²)` and sits on a local move.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::linalg::{
    dense_symmetric_eigen, laplacian_gap, lanczos_extreme, EigenConfig, Extreme, LinearOperator,
    SolverMethod,
    SparseMatrix,
};
use crate::logsum::ln_sum_exp;
use crate::walks::{Step, Walk, WalkEnsemble};
use crate::{Error, ModelParams, Result};

/// Symmetric sparse operator over an enumerated basis.
pub type SubspaceOperator = SparseMatrix;

/// Default cap on the full spin-space dimension `(2s+1)^{2n}`.
pub const DEFAULT_FULL_SPACE_CAP: u128 = 50_000;

/// Normalized ground state `t^{A(x)} / √Z` over an ensemble.
#[derive(Debug, Clone)]
pub struct GroundState {
    /// `ln Z` with `Z = Σ_x t^{2A(x)}`.
    pub log_z: f64,
    pub amplitudes: Vec<f64>,
}

pub fn ground_state(params: &ModelParams, ensemble: &WalkEnsemble) -> GroundState {
    let ln_t = params.ln_t();
    let log_w: Vec<f64> = ensemble.areas().map(|a| 2.0 * a as f64 * ln_t).collect();
    let log_z = ln_sum_exp(&log_w);
    let amplitudes = log_w.iter().map(|lw| (0.5 * (lw - log_z)).exp()).collect();
    GroundState { log_z, amplitudes }
}

/// `⟨ab|Π(t)|ab⟩` for a pair of adjacent labels occurring in a valid walk.
fn bond_diagonal(a: Step, b: Step, s: usize, t: f64) -> f64 {
    let t2 = t * t;
    let norm = 1.0 + t2;
    match (a, b) {
        (Step::Flat, Step::Up(_)) | (Step::Down(_), Step::Flat) => t2 / norm,
        (Step::Up(_), Step::Flat) | (Step::Flat, Step::Down(_)) => 1.0 / norm,
        (Step::Flat, Step::Flat) => s as f64 * t2 / norm,
        (Step::Up(k), Step::Down(c)) if k == c => 1.0 / norm,
        (Step::Up(_), Step::Down(_)) => 1.0,
        _ => 0.0,
    }
}

/// `Σ_j Π_{j,j+1}(t)` restricted to the span of the ensemble.
pub fn build_h_subspace(params: &ModelParams, ensemble: &WalkEnsemble) -> SubspaceOperator {
    let (s, t) = (params.s, params.t);
    let off = -t / (1.0 + t * t);
    let rows = (0..ensemble.len())
        .into_par_iter()
        .map(|id| {
            let steps = ensemble.walk(id).steps();
            let diag: f64 = steps
                .windows(2)
                .map(|p| bond_diagonal(p[0], p[1], s, t))
                .sum();
            let mut row = vec![(id, diag)];
            row.extend(ensemble.local_moves(id).into_iter().map(|e| (e.to_id, off)));
            row
        })
        .collect();
    SparseMatrix::from_rows(rows)
}

/// The two-site operator `Π_{j,j+1}(t) + Π^{cross}_{j,j+1}` on the
/// `(2s+1)²`-dimensional pair space, indexed `a·(2s+1) + b`.
pub fn local_bond_operator(s: usize, t: f64) -> DMatrix<f64> {
    let d = 2 * s + 1;
    let idx = |a: Step, b: Step| a.code(s) * d + b.code(s);
    let mut op = DMatrix::zeros(d * d, d * d);
    let c = 1.0 / (1.0 + t * t).sqrt();
    let mut add_projector = |ket: &[(usize, f64)]| {
        for &(i, vi) in ket {
            for &(j, vj) in ket {
                op[(i, j)] += vi * vj;
            }
        }
    };
    for k in 1..=s as u8 {
        let (u, dn, z) = (Step::Up(k), Step::Down(k), Step::Flat);
        add_projector(&[(idx(z, u), t * c), (idx(u, z), -c)]);
        add_projector(&[(idx(z, dn), c), (idx(dn, z), -t * c)]);
        add_projector(&[(idx(u, dn), c), (idx(z, z), -t * c)]);
        for i in 1..=s as u8 {
            if i != k {
                add_projector(&[(idx(u, Step::Down(i)), 1.0)]);
            }
        }
    }
    op
}

/// `H(t)` on the whole `(2s+1)^{2n}` spin space.
#[derive(Debug, Clone)]
pub struct FullHamiltonian {
    pub params: ModelParams,
    pub op: SparseMatrix,
}

impl FullHamiltonian {
    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    /// Basis index of a configuration; the first site is most significant.
    pub fn index_of(&self, steps: &[Step]) -> usize {
        let (s, d) = (self.params.s, self.params.local_dim());
        steps.iter().fold(0, |acc, st| acc * d + st.code(s))
    }

    pub fn steps_of(&self, mut index: usize) -> Vec<Step> {
        let (s, d) = (self.params.s, self.params.local_dim());
        let mut out = vec![Step::Flat; self.params.len()];
        for slot in out.iter_mut().rev() {
            *slot = Step::from_code(index % d, s);
            index /= d;
        }
        out
    }
}

pub fn build_h_full(params: &ModelParams, cap: u128) -> Result<FullHamiltonian> {
    let d = params.local_dim();
    let len = params.len();
    let dim = (d as u128).checked_pow(len as u32).unwrap_or(u128::MAX);
    if dim > cap {
        return Err(Error::SizeLimitExceeded {
            estimated: dim,
            cap,
        });
    }
    let dim = dim as usize;
    let local = local_bond_operator(params.s, params.t);
    let local_rows: Vec<Vec<(usize, f64)>> = (0..d * d)
        .map(|p| {
            (0..d * d)
                .filter(|&q| local[(p, q)] != 0.0)
                .map(|q| (q, local[(p, q)]))
                .collect()
        })
        .collect();
    let place: Vec<usize> = (0..len).map(|i| d.pow((len - 1 - i) as u32)).collect();
    let (down_lo, up_hi) = (params.s + 1, params.s);

    let rows = (0..dim)
        .into_par_iter()
        .map(|x| {
            let codes: Vec<usize> = place.iter().map(|&p| (x / p) % d).collect();
            let mut row = Vec::new();
            let boundary = (codes[0] >= down_lo) as usize + (codes[len - 1] < up_hi) as usize;
            if boundary > 0 {
                row.push((x, boundary as f64));
            }
            for i in 0..len - 1 {
                let p = codes[i] * d + codes[i + 1];
                for &(q, v) in &local_rows[p] {
                    let (qa, qb) = (q / d, q % d);
                    let y = x + qa * place[i] + qb * place[i + 1]
                        - codes[i] * place[i]
                        - codes[i + 1] * place[i + 1];
                    row.push((y, v));
                }
            }
            row
        })
        .collect();
    Ok(FullHamiltonian {
        params: *params,
        op: SparseMatrix::from_rows(rows),
    })
}

/// Spectrum of the full-space Hamiltonian, diagonalized block by block over
/// the connected components of its sparsity pattern.
#[derive(Debug, Clone, Serialize)]
pub struct FullSpectrum {
    pub dim: usize,
    pub blocks: usize,
    pub largest_block: usize,
    pub ground_energy: f64,
    pub zero_modes: usize,
    /// Smallest eigenvalue above the zero tolerance.
    pub gap: f64,
    /// The same minimum over blocks containing valid walks.
    pub gap_walk_blocks: f64,
    /// The same minimum over the remaining blocks; `NaN` if there are none.
    pub gap_other_blocks: f64,
    /// Unit zero mode with nonnegative sum, when it is unique.
    #[serde(skip)]
    pub ground_vector: Option<Vec<f64>>,
}

pub fn full_space_spectrum(full: &FullHamiltonian, cfg: &EigenConfig) -> Result<FullSpectrum> {
    let s = full.params.s;
    let blocks = full.op.components();
    let largest_block = blocks.iter().map(Vec::len).max().unwrap_or(0);
    if largest_block > cfg.dense_cap {
        return Err(Error::SizeLimitExceeded {
            estimated: largest_block as u128,
            cap: cfg.dense_cap as u128,
        });
    }
    let solved: Vec<(bool, Vec<f64>, DMatrix<f64>)> = blocks
        .par_iter()
        .map(|idx| {
            let has_walk = idx
                .iter()
                .any(|&x| Walk::validate(&full.steps_of(x), s).is_ok());
            let (values, vectors) = dense_symmetric_eigen(full.op.dense_block(idx));
            (has_walk, values, vectors)
        })
        .collect();

    let mut ground_energy = f64::INFINITY;
    let mut zero_modes = 0;
    let mut ground_vector = None;
    let (mut gap_walk, mut gap_other) = (f64::INFINITY, f64::INFINITY);
    for ((has_walk, values, vectors), idx) in solved.iter().zip(&blocks) {
        ground_energy = ground_energy.min(values[0]);
        for (k, &v) in values.iter().enumerate() {
            if v.abs() <= cfg.zero_tol {
                zero_modes += 1;
                let mut g = vec![0.0; full.dim()];
                for (a, &x) in idx.iter().enumerate() {
                    g[x] = vectors[(a, k)];
                }
                if g.iter().sum::<f64>() < 0.0 {
                    g.iter_mut().for_each(|x| *x = -*x);
                }
                ground_vector = Some(g);
            } else if v > cfg.zero_tol {
                let slot = if *has_walk { &mut gap_walk } else { &mut gap_other };
                *slot = slot.min(v);
                break;
            }
        }
    }
    if ground_energy < -cfg.zero_tol {
        return Err(Error::NotPsd(ground_energy));
    }
    let gap = gap_walk.min(gap_other);
    if !gap.is_finite() {
        return Err(Error::NoPositiveEigenvalue);
    }
    Ok(FullSpectrum {
        dim: full.dim(),
        blocks: blocks.len(),
        largest_block,
        ground_energy,
        zero_modes,
        gap,
        gap_walk_blocks: if gap_walk.is_finite() { gap_walk } else { f64::NAN },
        gap_other_blocks: if gap_other.is_finite() { gap_other } else { f64::NAN },
        ground_vector: if zero_modes == 1 { ground_vector } else { None },
    })
}

/// Ground energy and gap of a symmetric positive semidefinite operator.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumReport {
    pub dim: usize,
    pub ground_energy: f64,
    /// Smallest eigenvalue above the zero tolerance.
    pub gap: f64,
    pub method: SolverMethod,
    /// Residuals `‖Hv − λv‖` of the ground and gap eigenpairs.
    pub residuals: Vec<f64>,
    /// Number of eigenvalues within the zero tolerance; only known for the
    /// dense method.
    pub zero_modes: Option<usize>,
}

/// Spectral gap `Δ` of `op`.
///
/// With a strictly positive zero-energy `known_ground` and nonpositive
/// off-diagonals, `op` is a Laplacian in disguise and the gap comes from
/// [`laplacian_gap`], which keeps relative accuracy for gaps far below the
/// operator norm. Otherwise operators up to `cfg.dense_cap` are diagonalized
/// densely, and larger ones by deflated Lanczos.
pub fn spectral_gap(
    op: &SubspaceOperator,
    known_ground: Option<&[f64]>,
    cfg: &EigenConfig,
) -> Result<SpectrumReport> {
    let dim = op.dim();
    if dim < 2 {
        return Err(Error::InvalidParams("operator dimension below 2".into()));
    }
    if cfg.shift_invert {
        if let Some(report) =
            known_ground.and_then(|g| frustration_free_gap(op, g, cfg).transpose())
        {
            return report;
        }
    }
    if dim <= cfg.dense_cap {
        let dense = op.to_dense();
        let (values, vectors) = dense_symmetric_eigen(dense.clone());
        if values[0] < -cfg.zero_tol {
            return Err(Error::NotPsd(values[0]));
        }
        let zero_modes = values.iter().filter(|v| v.abs() <= cfg.zero_tol).count();
        let k = values
            .iter()
            .position(|&v| v > cfg.zero_tol)
            .ok_or(Error::NoPositiveEigenvalue)?;
        let residual = |col: usize| {
            let v: DVector<f64> = vectors.column(col).into_owned();
            crate::linalg::eigen_dense_residual(&dense, &v, values[col])
        };
        return Ok(SpectrumReport {
            dim,
            ground_energy: values[0],
            gap: values[k],
            method: SolverMethod::Dense,
            residuals: vec![residual(0), residual(k)],
            zero_modes: Some(zero_modes),
        });
    }

    let (ground_vec, ground_energy, ground_residual) = match known_ground {
        Some(g) => {
            let hg = op.matvec(g);
            let nrm2 = crate::linalg::dot(g, g);
            let e = crate::linalg::dot(g, &hg) / nrm2;
            let r = hg
                .iter()
                .zip(g)
                .map(|(a, b)| (a - e * b).powi(2))
                .sum::<f64>()
                .sqrt()
                / nrm2.sqrt();
            (g.to_vec(), e, r)
        }
        None => {
            let pair = lanczos_extreme(op, &[], Extreme::Smallest, cfg)?;
            (pair.vector, pair.value, pair.residual)
        }
    };
    if ground_energy < -cfg.zero_tol {
        return Err(Error::NotPsd(ground_energy));
    }
    let pair = lanczos_extreme(op, &[ground_vec], Extreme::Smallest, cfg)?;
    if pair.value < -cfg.zero_tol {
        return Err(Error::NotPsd(pair.value));
    }
    if pair.value <= cfg.zero_tol {
        return Err(Error::NoPositiveEigenvalue);
    }
    Ok(SpectrumReport {
        dim,
        ground_energy,
        gap: pair.value,
        method: SolverMethod::DeflatedIterative,
        residuals: vec![ground_residual, pair.residual],
        zero_modes: None,
    })
}

/// `None` unless `ground` is positive, annihilated by `op` and `op` is
/// stoquastic.
fn frustration_free_gap(
    op: &SubspaceOperator,
    ground: &[f64],
    cfg: &EigenConfig,
) -> Result<Option<SpectrumReport>> {
    if ground.len() != op.dim() || ground.iter().any(|g| !(*g > 0.0)) {
        return Ok(None);
    }
    if op.triplets().any(|(i, j, v)| i != j && v > 0.0) {
        return Ok(None);
    }
    let nrm = crate::linalg::norm(ground);
    let g: Vec<f64> = ground.iter().map(|x| x / nrm).collect();
    let hg = op.matvec(&g);
    let ground_residual = crate::linalg::norm(&hg);
    if ground_residual > cfg.zero_tol {
        return Ok(None);
    }
    let ground_energy = crate::linalg::dot(&g, &hg);
    let weights = op.map_entries(|i, j, v| if i == j { 0.0 } else { -v * g[i] * g[j] });
    let mass: Vec<f64> = g.iter().map(|x| x * x).collect();
    let gap = laplacian_gap(&weights, &mass, cfg)?;
    if gap.components > 1 {
        return Err(Error::NoPositiveEigenvalue);
    }
    Ok(Some(SpectrumReport {
        dim: op.dim(),
        ground_energy,
        gap: gap.value,
        method: SolverMethod::ShiftInvert,
        residuals: vec![ground_residual, gap.residual],
        zero_modes: Some(gap.components),
    }))
}
