//! Sparse matrices and symmetric eigensolvers.

mod eigen;
mod laplacian;
mod sparse;

pub(crate) use eigen::dense_residual as eigen_dense_residual;
pub use eigen::{
    dense_symmetric_eigen, lanczos_extreme, EigenConfig, EigenPair, Extreme, SolverMethod,
};
pub use laplacian::{laplacian_gap, LaplacianGap};
pub use sparse::{LinearOperator, SparseMatrix, TripletBuilder};

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `y ← y − (x·y) x` for unit `x`.
pub fn project_out(y: &mut [f64], x: &[f64]) {
    let c = dot(x, y);
    y.iter_mut().zip(x).for_each(|(yi, xi)| *yi -= c * xi);
}
