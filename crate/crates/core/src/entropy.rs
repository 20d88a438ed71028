//! Half-chain Schmidt spectrum of the ground state.
//!
//! Cutting a walk at the middle leaves a left half ending at height `m`
//! with `m` unmatched up steps whose colors must be repeated, in mirror
//! order, by the right half. The Schmidt basis is labelled by `m` and the
//! color word of those arcs, so every level `m` is `s^m`-fold degenerate
//! with coefficient `D(m)² / Σ_k s^k D(k)²`, where `D(m)` sums `t^{2A_L}`
//! over left halves (inner arcs contributing a factor `s` each). By
//! reflection the right halves carry the same weight.

use rayon::prelude::*;
use serde::Serialize;

use crate::fit::least_squares;
use crate::logsum::{ln_add_exp, ln_sum_exp};
use crate::ModelParams;

/// `ln D(m)` for `m = 0..=n`.
#[derive(Debug, Clone)]
pub struct HalfWeights {
    pub n: usize,
    pub s: usize,
    pub t: f64,
    pub log_d: Vec<f64>,
}

/// Dynamic program over `(step, height)` for the left-half weights: a flat
/// step at height `m` contributes `t^{2m}`, an up step `m → m+1` contributes
/// `t^{2m+1}` and a down step `m → m−1` contributes `s·t^{2m−1}`.
pub fn half_weights(params: &ModelParams) -> HalfWeights {
    let n = params.n;
    let ln_t = params.ln_t();
    let ln_s = (params.s as f64).ln();
    let mut cur = vec![f64::NEG_INFINITY; n + 1];
    cur[0] = 0.0;
    for j in 0..n {
        let mut next = vec![f64::NEG_INFINITY; n + 1];
        for m in 0..=j.min(n) {
            let w = cur[m];
            if w == f64::NEG_INFINITY {
                continue;
            }
            let mf = m as f64;
            next[m] = ln_add_exp(next[m], w + 2.0 * mf * ln_t);
            if m < n {
                next[m + 1] = ln_add_exp(next[m + 1], w + (2.0 * mf + 1.0) * ln_t);
            }
            if m > 0 {
                next[m - 1] = ln_add_exp(next[m - 1], w + ln_s + (2.0 * mf - 1.0) * ln_t);
            }
        }
        cur = next;
    }
    HalfWeights {
        n,
        s: params.s,
        t: params.t,
        log_d: cur,
    }
}

impl HalfWeights {
    fn ln_level_weights(&self) -> Vec<f64> {
        let ln_s = (self.s as f64).ln();
        self.log_d
            .iter()
            .enumerate()
            .map(|(m, &ld)| m as f64 * ln_s + 2.0 * ld)
            .collect()
    }

    /// `ln Σ_m s^m D(m)²`, equal to `ln Z` of the full chain.
    pub fn ln_norm(&self) -> f64 {
        ln_sum_exp(&self.ln_level_weights())
    }
}

/// One degenerate Schmidt level.
#[derive(Debug, Clone, Serialize)]
pub struct SchmidtLevel {
    pub m: usize,
    /// `ln` of each of the degenerate coefficients.
    pub ln_p: f64,
    /// `ln s^m`.
    pub ln_multiplicity: f64,
}

impl SchmidtLevel {
    pub fn p(&self) -> f64 {
        self.ln_p.exp()
    }

    pub fn multiplicity(&self) -> f64 {
        self.ln_multiplicity.exp()
    }

    /// Total weight `s^m p_m` of the level.
    pub fn weight(&self) -> f64 {
        (self.ln_multiplicity + self.ln_p).exp()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SchmidtSpectrum {
    pub levels: Vec<SchmidtLevel>,
    pub entropy_bits: f64,
}

pub fn schmidt_entropy(params: &ModelParams) -> SchmidtSpectrum {
    let hw = half_weights(params);
    let ln_norm = hw.ln_norm();
    let ln_s = (hw.s as f64).ln();
    let levels: Vec<SchmidtLevel> = hw
        .log_d
        .iter()
        .enumerate()
        .filter(|(_, ld)| ld.is_finite())
        .map(|(m, &ld)| SchmidtLevel {
            m,
            ln_p: 2.0 * ld - ln_norm,
            ln_multiplicity: m as f64 * ln_s,
        })
        .collect();
    let nats: f64 = levels.iter().map(|l| -l.weight() * l.ln_p).sum();
    SchmidtSpectrum {
        levels,
        entropy_bits: (nats / std::f64::consts::LN_2).max(0.0),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MidpointStats {
    /// Probability of midpoint height `m`, proportional to `s^m D(m)²`.
    pub distribution: Vec<f64>,
    pub mean: f64,
}

pub fn midpoint_height_stats(params: &ModelParams) -> MidpointStats {
    let hw = half_weights(params);
    let (distribution, _) = crate::logsum::normalize_ln(&hw.ln_level_weights());
    let mean = distribution
        .iter()
        .enumerate()
        .map(|(m, p)| m as f64 * p)
        .sum();
    MidpointStats { distribution, mean }
}

#[derive(Debug, Clone, Serialize)]
pub struct EntropyRow {
    pub n: usize,
    pub s: usize,
    pub t: f64,
    pub entropy_bits: f64,
    pub mean_midpoint_height: f64,
}

/// Entropy and mean midpoint height over a parameter grid, in input order.
pub fn entropy_scan(grid: &[ModelParams]) -> Vec<EntropyRow> {
    grid.par_iter()
        .map(|p| EntropyRow {
            n: p.n,
            s: p.s,
            t: p.t,
            entropy_bits: schmidt_entropy(p).entropy_bits,
            mean_midpoint_height: midpoint_height_stats(p).mean,
        })
        .collect()
}

/// Leading `√n` coefficient `2 log₂(s) √(2σ/π)`, `σ = √s/(2√s + 1)`, of the
/// undeformed (`t = 1`) entropy.
pub fn sqrt_coefficient_reference(s: usize) -> f64 {
    let rs = (s as f64).sqrt();
    let sigma = rs / (2.0 * rs + 1.0);
    2.0 * (s as f64).log2() * (2.0 * sigma / std::f64::consts::PI).sqrt()
}

/// Scaling diagnostic of `S_n` for one `(s, t)` series.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "regime", rename_all = "snake_case")]
pub enum ScalingFit {
    /// `t > 1`: slope of `S_n` against `n`, compared with `log₂ s`.
    Linear { slope: f64, reference: f64, last_ratio: f64 },
    /// `t = 1`: coefficient of `√n` in a fit on `{√n, log₂ n, 1}`.
    SqrtCoefficient { coefficient: f64, reference: f64 },
    /// `t < 1`: largest entropy seen.
    Bounded { max_entropy_bits: f64 },
}

impl ScalingFit {
    pub fn kind(&self) -> &'static str {
        match self {
            ScalingFit::Linear { .. } => "linear",
            ScalingFit::SqrtCoefficient { .. } => "sqrt_coefficient",
            ScalingFit::Bounded { .. } => "bounded",
        }
    }

    /// `(value, reference)`; the reference is `NaN` for the bounded regime.
    pub fn value_and_reference(&self) -> (f64, f64) {
        match *self {
            ScalingFit::Linear { slope, reference, .. } => (slope, reference),
            ScalingFit::SqrtCoefficient {
                coefficient,
                reference,
            } => (coefficient, reference),
            ScalingFit::Bounded { max_entropy_bits } => (max_entropy_bits, f64::NAN),
        }
    }
}

/// Fits rows sharing one `(s, t)`; `None` if there are too few points.
pub fn scaling_fit(rows: &[EntropyRow]) -> Option<ScalingFit> {
    let first = rows.first()?;
    let (s, t) = (first.s, first.t);
    let ns: Vec<f64> = rows.iter().map(|r| r.n as f64).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.entropy_bits).collect();
    if t > 1.0 {
        let c = least_squares(&ns, &ys, &[&|n| n, &|_| 1.0])?;
        let last = rows.iter().max_by_key(|r| r.n)?;
        Some(ScalingFit::Linear {
            slope: c[0],
            reference: (s as f64).log2(),
            last_ratio: last.entropy_bits / last.n as f64,
        })
    } else if t == 1.0 {
        let c = least_squares(&ns, &ys, &[&|n: f64| n.sqrt(), &|n: f64| n.log2(), &|_| 1.0])?;
        Some(ScalingFit::SqrtCoefficient {
            coefficient: c[0],
            reference: sqrt_coefficient_reference(s),
        })
    } else {
        Some(ScalingFit::Bounded {
            max_entropy_bits: ys.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        })
    }
}
