//! Area-weighted colored Motzkin spin chain.
//!
//! The crate covers the whole pipeline around the deformed Motzkin chain:
//!
//! - [`walks`]: colored Motzkin walks, their enumeration, local moves and
//!   integer-partition combinatorics of the area defect.
//! - [`hamiltonian`]: the frustration-free Hamiltonian `H(t)` on the walk
//!   subspace and on the full spin space, its ground state and spectral gap.
//! - [`markov`]: the reversible Markov chain obtained from `H(t)`, its
//!   stationary law, second eigenvalue and a Monte Carlo sampler.
//! - [`cheeger`]: the bottleneck sets, exact conductance and the finite-size
//!   checks of the exponential gap bound.
//! - [`entropy`]: half-chain Schmidt spectrum and entanglement entropy from a
//!   height-resolved dynamic program.
//! - [`run`]: parameter grids, report records and CSV/JSON emission used by
//!   the `motzkin` binary.

pub mod cheeger;
pub mod entropy;
mod error;
pub mod fit;
pub mod hamiltonian;
pub mod linalg;
pub mod logsum;
pub mod markov;
mod params;
pub mod run;
pub mod walks;

pub use error::{Error, Result};
pub use params::ModelParams;
