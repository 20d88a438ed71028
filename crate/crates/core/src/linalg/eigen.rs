use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{dot, norm, project_out, LinearOperator};
use crate::{Error, Result};

/// Numerical settings shared by the eigensolvers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenConfig {
    /// Largest dimension solved by dense diagonalization.
    pub dense_cap: usize,
    /// Residual tolerance relative to the operator scale.
    pub tol: f64,
    /// Matrix-vector product budget for the iterative solver.
    pub max_iter: usize,
    /// Krylov subspace size between restarts.
    pub krylov_dim: usize,
    /// Eigenvalues with magnitude at most this are treated as zero modes.
    pub zero_tol: f64,
    /// Seed of the iterative solver's start vector.
    pub seed: u64,
    /// Solve Laplacian-structured problems by inverse iteration on a
    /// grounded Cholesky factor instead of deflated Lanczos.
    pub shift_invert: bool,
}

impl Default for EigenConfig {
    fn default() -> Self {
        Self {
            dense_cap: 4000,
            tol: 1e-12,
            max_iter: 100_000,
            krylov_dim: 120,
            zero_tol: 1e-9,
            seed: 0,
            shift_invert: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverMethod {
    Dense,
    DeflatedIterative,
    ShiftInvert,
}

impl SolverMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            SolverMethod::Dense => "dense",
            SolverMethod::DeflatedIterative => "deflated-iterative",
            SolverMethod::ShiftInvert => "shift-invert",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extreme {
    Smallest,
    Largest,
}

#[derive(Debug, Clone)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<f64>,
    /// `‖A v − λ v‖` for the returned unit vector.
    pub residual: f64,
    /// Matrix-vector products used.
    pub iterations: usize,
}

/// Full eigendecomposition of a symmetric matrix, eigenvalues ascending and
/// eigenvectors as matching columns.
pub fn dense_symmetric_eigen(m: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(eig.eigenvectors.nrows(), order.len(), |i, k| {
        eig.eigenvectors[(i, order[k])]
    });
    (values, vectors)
}

/// Extreme eigenpair of a symmetric operator restricted to the orthogonal
/// complement of `deflate`.
///
/// Restarted Lanczos with full reorthogonalization against both the Krylov
/// basis and the deflation vectors; each restart begins from the current
/// Ritz vector.
pub fn lanczos_extreme<Op: LinearOperator + ?Sized>(
    op: &Op,
    deflate: &[Vec<f64>],
    which: Extreme,
    cfg: &EigenConfig,
) -> Result<EigenPair> {
    let n = op.dim();
    let locked = orthonormalize(deflate);
    if locked.len() >= n {
        return Err(Error::InvalidParams(
            "deflation space spans the whole operator domain".into(),
        ));
    }
    let krylov = cfg.krylov_dim.max(2).min(n - locked.len());

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    orthogonalize(&mut v, &locked, &[]);
    scale_to_unit(&mut v);

    let mut w = vec![0.0; n];
    let mut total = 0usize;
    loop {
        let mut basis = vec![v];
        let mut alpha = Vec::with_capacity(krylov);
        let mut beta = Vec::with_capacity(krylov);
        let mut exhausted = false;
        for k in 0..krylov {
            op.apply(&basis[k], &mut w);
            total += 1;
            let a = dot(&basis[k], &w);
            alpha.push(a);
            orthogonalize(&mut w, &locked, &basis);
            let b = norm(&w);
            let scale = a.abs().max(beta.last().copied().unwrap_or(0.0)).max(f64::MIN_POSITIVE);
            if b <= 1e-13 * scale {
                exhausted = true;
                break;
            }
            if k + 1 == krylov {
                break;
            }
            beta.push(b);
            basis.push(w.iter().map(|x| x / b).collect());
        }

        let m = alpha.len();
        let t = DMatrix::from_fn(m, m, |i, j| {
            if i == j {
                alpha[i]
            } else if i + 1 == j {
                beta[i]
            } else if j + 1 == i {
                beta[j]
            } else {
                0.0
            }
        });
        let eig = SymmetricEigen::new(t);
        let pick = (0..m)
            .reduce(|a, b| {
                let better = match which {
                    Extreme::Smallest => eig.eigenvalues[b] < eig.eigenvalues[a],
                    Extreme::Largest => eig.eigenvalues[b] > eig.eigenvalues[a],
                };
                if better {
                    b
                } else {
                    a
                }
            })
            .expect("non-empty Krylov basis");
        let scale = eig.eigenvalues.amax().max(1.0);
        let y = eig.eigenvectors.column(pick);

        let mut x = vec![0.0; n];
        for (coef, b) in y.iter().zip(&basis) {
            x.iter_mut().zip(b).for_each(|(xi, bi)| *xi += coef * bi);
        }
        orthogonalize(&mut x, &locked, &[]);
        scale_to_unit(&mut x);
        op.apply(&x, &mut w);
        total += 1;
        let value = dot(&x, &w);
        let residual = w
            .iter()
            .zip(&x)
            .map(|(wi, xi)| (wi - value * xi).powi(2))
            .sum::<f64>()
            .sqrt();
        if residual <= cfg.tol * scale || (exhausted && residual <= 1e-8 * scale) {
            return Ok(EigenPair {
                value,
                vector: x,
                residual,
                iterations: total,
            });
        }
        if total >= cfg.max_iter {
            return Err(Error::NoConvergence {
                iterations: total,
                residual,
            });
        }
        v = x;
    }
}

fn orthonormalize(vectors: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let mut u = v.clone();
        orthogonalize(&mut u, &out, &[]);
        let nrm = norm(&u);
        if nrm > 1e-12 {
            u.iter_mut().for_each(|x| *x /= nrm);
            out.push(u);
        }
    }
    out
}

/// Two passes of Gram–Schmidt against both sets.
fn orthogonalize(w: &mut [f64], locked: &[Vec<f64>], basis: &[Vec<f64>]) {
    for _ in 0..2 {
        for q in locked.iter().chain(basis) {
            project_out(w, q);
        }
    }
}

fn scale_to_unit(v: &mut [f64]) {
    let nrm = norm(v);
    v.iter_mut().for_each(|x| *x /= nrm);
}

/// `‖A v − λ v‖` for a dense matrix.
pub(crate) fn dense_residual(m: &DMatrix<f64>, v: &DVector<f64>, value: f64) -> f64 {
    (m * v - v * value).norm()
}
