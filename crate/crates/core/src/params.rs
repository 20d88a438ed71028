use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Chain half-length `n` (the chain has `2n` sites), color count `s` and
/// deformation parameter `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub n: usize,
    pub s: usize,
    pub t: f64,
}

impl ModelParams {
    pub fn new(n: usize, s: usize, t: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParams("n must be at least 1".into()));
        }
        if s == 0 || s > u8::MAX as usize {
            return Err(Error::InvalidParams(format!("s = {s} must lie in 1..=255")));
        }
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::InvalidParams(format!("t = {t} must be finite and positive")));
        }
        Ok(Self { n, s, t })
    }

    /// Number of sites `2n`.
    pub fn len(&self) -> usize {
        2 * self.n
    }

    /// Local spin dimension `2s + 1`.
    pub fn local_dim(&self) -> usize {
        2 * self.s + 1
    }

    pub fn ln_t(&self) -> f64 {
        self.t.ln()
    }

    /// The scalar `β = (1 + t²) / (2 n s t²)` relating `H` and `P`.
    pub fn beta(&self) -> f64 {
        let t2 = self.t * self.t;
        (1.0 + t2) / (2.0 * self.n as f64 * self.s as f64 * t2)
    }

    /// Factor `2 n s t² / (1 + t²)` mapping the chain gap to `Δ(H)`.
    pub fn gap_factor(&self) -> f64 {
        1.0 / self.beta()
    }

    /// Requires the hypotheses of the exponential gap bound: `s ≥ 2`, `t > 1`.
    pub fn require_theorem_regime(&self) -> Result<()> {
        if self.s < 2 {
            return Err(Error::PreconditionViolated(format!("s = {} < 2", self.s)));
        }
        if self.t <= 1.0 {
            return Err(Error::PreconditionViolated(format!("t = {} <= 1", self.t)));
        }
        Ok(())
    }
}
