//! Smallest nonzero eigenvalue of a weighted graph Laplacian with a diagonal
//! mass matrix, `L f = λ M f`.
//!
//! Both the subspace Hamiltonian (`w = −H_xy ψ_x ψ_y`, `M = ψ²`) and the
//! chain generator (`w = π_x P_xy`, `M = π`) have this shape. The gap can
//! sit many orders of magnitude below `‖L‖`, so the pair is found by Lanczos
//! on the inverse (one node grounded, sparse Cholesky) and the value is
//! then taken from the Dirichlet form `Σ w (f_x − f_y)² / Σ m f²`, a sum of
//! nonnegative terms with no cancellation.

use faer::linalg::solvers::Solve;
use faer::sparse::{SparseColMat, Triplet};
use faer::{MatMut, Side};

use super::{lanczos_extreme, norm, EigenConfig, Extreme, LinearOperator, SparseMatrix};
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct LaplacianGap {
    /// Smallest nonzero generalized eigenvalue, zero when the graph is
    /// disconnected.
    pub value: f64,
    /// Eigenvector of `M^{-1/2} L M^{-1/2}` (unit norm, orthogonal to `√m`).
    pub vector: Vec<f64>,
    /// `‖M^{-1/2} L M^{-1/2} x − λ x‖`.
    pub residual: f64,
    /// Solves used by the inverse iteration.
    pub iterations: usize,
    /// Connected components of the weight graph.
    pub components: usize,
}

struct Inverse {
    dim: usize,
    root: usize,
    sqrt_mass: Vec<f64>,
    mass_total: f64,
    llt: faer::sparse::linalg::solvers::Llt<usize, f64>,
}

impl LinearOperator for Inverse {
    fn dim(&self) -> usize {
        self.dim
    }

    /// `M^{1/2} L⁺ M^{1/2}` on the complement of `√m`.
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let mut rhs: Vec<f64> = (0..self.dim)
            .filter(|&i| i != self.root)
            .map(|i| self.sqrt_mass[i] * x[i])
            .collect();
        let len = rhs.len();
        self.llt
            .solve_in_place(MatMut::from_column_major_slice_mut(&mut rhs, len, 1));
        let mut f = vec![0.0; self.dim];
        let mut k = 0;
        for (i, fi) in f.iter_mut().enumerate() {
            if i != self.root {
                *fi = rhs[k];
                k += 1;
            }
        }
        let shift = f
            .iter()
            .zip(&self.sqrt_mass)
            .map(|(fi, r)| fi * r * r)
            .sum::<f64>()
            / self.mass_total;
        for ((yi, fi), r) in y.iter_mut().zip(&f).zip(&self.sqrt_mass) {
            *yi = r * (fi - shift);
        }
    }
}

/// `weights` must be symmetric with nonnegative off-diagonal entries; its
/// diagonal is ignored. `mass` must be strictly positive.
pub fn laplacian_gap(weights: &SparseMatrix, mass: &[f64], cfg: &EigenConfig) -> Result<LaplacianGap> {
    let dim = weights.dim();
    if mass.len() != dim || dim == 0 {
        return Err(Error::InvalidParams("mass length must match a nonempty operator".into()));
    }
    if let Some(m) = mass.iter().find(|m| !(**m > 0.0)) {
        return Err(Error::InvalidParams(format!("mass entries must be positive, found {m}")));
    }
    let mut edges = Vec::new();
    for (i, j, w) in weights.triplets() {
        if i == j || w == 0.0 {
            continue;
        }
        if w < 0.0 {
            return Err(Error::NegativeEntry { row: i, col: j, value: w });
        }
        if i < j {
            edges.push((i, j, w));
        }
    }
    let sqrt_mass: Vec<f64> = mass.iter().map(|m| m.sqrt()).collect();
    let components = off_diagonal_components(weights);
    if components != 1 || dim == 1 {
        return Ok(LaplacianGap {
            value: 0.0,
            vector: vec![0.0; dim],
            residual: 0.0,
            iterations: 0,
            components,
        });
    }

    let root = (0..dim).max_by(|&a, &b| mass[a].total_cmp(&mass[b])).unwrap_or(0);
    let reduced = |i: usize| if i < root { i } else { i - 1 };
    let mut degree = vec![0.0; dim];
    let mut triplets = Vec::with_capacity(edges.len() + dim);
    for &(i, j, w) in &edges {
        degree[i] += w;
        degree[j] += w;
        if i != root && j != root {
            // Lower triangle only.
            triplets.push(Triplet::new(reduced(j), reduced(i), -w));
        }
    }
    for (i, &d) in degree.iter().enumerate() {
        if i != root {
            triplets.push(Triplet::new(reduced(i), reduced(i), d));
        }
    }
    let matrix = SparseColMat::<usize, f64>::try_new_from_triplets(dim - 1, dim - 1, &triplets)
        .map_err(|e| Error::InvalidParams(format!("grounded Laplacian: {e:?}")))?;
    let llt = matrix
        .sp_cholesky(Side::Lower)
        .map_err(|e| Error::InvalidParams(format!("grounded Laplacian factorization: {e:?}")))?;
    let inverse = Inverse {
        dim,
        root,
        sqrt_mass: sqrt_mass.clone(),
        mass_total: mass.iter().sum(),
        llt,
    };
    let pair = lanczos_extreme(&inverse, &[sqrt_mass.clone()], Extreme::Largest, cfg)?;

    let f: Vec<f64> = pair.vector.iter().zip(&sqrt_mass).map(|(x, r)| x / r).collect();
    let dirichlet: f64 = edges.iter().map(|&(i, j, w)| w * (f[i] - f[j]).powi(2)).sum();
    let value = dirichlet / dot_mass(&f, mass);

    let mut lx = vec![0.0; dim];
    for &(i, j, w) in &edges {
        let d = w * (f[i] - f[j]);
        lx[i] += d;
        lx[j] -= d;
    }
    let resid: Vec<f64> = lx
        .iter()
        .zip(&sqrt_mass)
        .zip(&pair.vector)
        .map(|((l, r), x)| l / r - value * x)
        .collect();
    Ok(LaplacianGap {
        value,
        vector: pair.vector,
        residual: norm(&resid),
        iterations: pair.iterations,
        components,
    })
}

fn dot_mass(f: &[f64], mass: &[f64]) -> f64 {
    f.iter().zip(mass).map(|(x, m)| m * x * x).sum()
}

fn off_diagonal_components(weights: &SparseMatrix) -> usize {
    let stripped = weights.map_entries(|i, j, v| if i == j { 0.0 } else { v });
    stripped.components().len()
}
