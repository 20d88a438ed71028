//! The reversible Markov chain attached to `H(t)`.
//!
//! With `β = (1 + t²)/(2 n s t²)` and `π(x) = t^{2A(x)}/Z`,
//!
//! ```text
//! P(x, y) = δ_{xy} − β √(π(y)/π(x)) ⟨x|H|y⟩
//! ```
//!
//! is row-stochastic and reversible, every area-increasing move fires with
//! probability `1/(2ns)`, every decreasing one with `1/(2nst²)`, and
//! `Δ(H) = (1 − λ₂(P)) / β`.

mod mcmc;
mod transition;

pub use mcmc::{
    mcmc_sample, total_variation, ChainState, CsvTrace, EnsembleVisits, McmcRun, Observer,
    StateHistogram,
};
pub use transition::{
    build_p_direct, build_p_from_h, gap_relation_check, lambda2, stationary, ChainChecks,
    ChainSpectrum, GapRelation, StationaryDist, TransitionMatrix,
};
