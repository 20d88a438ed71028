use serde::Serialize;

use super::lemmas::{lemma_suite, LemmaSuite};
use super::sets::{classify, conductance, reachable_a, theorem_bound, ConductanceReport, CutSets};
use crate::fit::linear_fit;
use crate::hamiltonian::{build_h_subspace, ground_state, spectral_gap, SpectrumReport};
use crate::linalg::EigenConfig;
use crate::markov::{build_p_direct, lambda2, stationary, ChainSpectrum};
use crate::walks::{enumerate, MoveGraph, WalkEnsemble};
use crate::{ModelParams, Result};

#[derive(Debug, Clone, Serialize)]
pub struct TheoremVerdict {
    pub n: usize,
    pub s: usize,
    pub t: f64,
    pub exact_gap: f64,
    /// `8 n s t^{−n²/3}`.
    pub bound: f64,
    pub holds: bool,
    /// `(2nst²/(1+t²)) · 2Q(A,A^c)/π(A)`.
    pub cheeger_gap_bound: f64,
    /// `Δ(H) ≤ cheeger_gap_bound`.
    pub chain_holds: bool,
}

pub fn theorem_check(
    params: &ModelParams,
    exact_gap: f64,
    report: &ConductanceReport,
) -> Result<TheoremVerdict> {
    params.require_theorem_regime()?;
    let bound = theorem_bound(params);
    let cheeger_gap_bound = params.gap_factor() * report.cheeger_bound;
    Ok(TheoremVerdict {
        n: params.n,
        s: params.s,
        t: params.t,
        exact_gap,
        bound,
        holds: exact_gap < bound,
        cheeger_gap_bound,
        chain_holds: exact_gap <= cheeger_gap_bound * (1.0 + 1e-12),
    })
}

/// Everything computed for one `(n, s, t)`.
#[derive(Debug, Clone)]
pub struct CheegerAnalysis {
    pub params: ModelParams,
    pub ensemble: WalkEnsemble,
    pub cuts: CutSets,
    pub spectrum_h: SpectrumReport,
    pub chain: ChainSpectrum,
    pub conductance: ConductanceReport,
    pub lemmas: LemmaSuite,
    pub verdict: TheoremVerdict,
}

/// Enumerates, builds `H` and `P`, solves both spectra, constructs the cut
/// sets and runs every check.
pub fn analyze(params: &ModelParams, cfg: &EigenConfig) -> Result<CheegerAnalysis> {
    params.require_theorem_regime()?;
    let ensemble = enumerate(params)?;
    let graph = MoveGraph::build(&ensemble);
    let mut cuts = classify(&ensemble)?;
    cuts.a = Some(reachable_a(&cuts, &graph));

    let pi = stationary(params, &ensemble);
    let h = build_h_subspace(params, &ensemble);
    let gs = ground_state(params, &ensemble);
    let spectrum_h = spectral_gap(&h, Some(&gs.amplitudes), cfg)?;
    let p = build_p_direct(params, &ensemble);
    let chain = lambda2(&p, &pi, cfg)?;

    let mut report = conductance(params, &pi, &p, &cuts)?;
    report.exact_gap = Some(spectrum_h.gap);
    let lemmas = lemma_suite(&ensemble, params, &pi, &cuts, &report, &chain, Some(spectrum_h.gap));
    let verdict = theorem_check(params, spectrum_h.gap, &report)?;
    Ok(CheegerAnalysis {
        params: *params,
        ensemble,
        cuts,
        spectrum_h,
        chain,
        conductance: report,
        lemmas,
        verdict,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct TheoremScan {
    pub rows: Vec<TheoremVerdict>,
    /// Least-squares slope of `ln Δ(H)` against `n²`.
    pub slope: f64,
    /// `−ln(t)/3`.
    pub slope_bound: f64,
    pub slope_ok: bool,
    /// Smallest scanned `n` from which `Δ(H) < 8ns t^{−n²/3}` holds.
    pub first_n_holding: Option<usize>,
}

/// Exact gaps over `ns` at fixed `(s, t)` and the scaling fit.
pub fn theorem_scan(s: usize, t: f64, ns: &[usize], cfg: &EigenConfig) -> Result<TheoremScan> {
    let mut rows = Vec::with_capacity(ns.len());
    for &n in ns {
        let params = ModelParams::new(n, s, t)?;
        params.require_theorem_regime()?;
        let ensemble = enumerate(&params)?;
        let graph = MoveGraph::build(&ensemble);
        let mut cuts = classify(&ensemble)?;
        cuts.a = Some(reachable_a(&cuts, &graph));
        let pi = stationary(&params, &ensemble);
        let h = build_h_subspace(&params, &ensemble);
        let gs = ground_state(&params, &ensemble);
        let gap = spectral_gap(&h, Some(&gs.amplitudes), cfg)?.gap;
        let p = build_p_direct(&params, &ensemble);
        let report = conductance(&params, &pi, &p, &cuts)?;
        rows.push(theorem_check(&params, gap, &report)?);
    }
    let xs: Vec<f64> = rows.iter().map(|r| (r.n * r.n) as f64).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.exact_gap.ln()).collect();
    let slope = linear_fit(&xs, &ys).map(|(m, _)| m).unwrap_or(f64::NAN);
    let slope_bound = -t.ln() / 3.0;
    let first_n_holding = rows
        .iter()
        .enumerate()
        .find(|(i, _)| rows[*i..].iter().all(|r| r.holds))
        .map(|(_, r)| r.n);
    Ok(TheoremScan {
        rows,
        slope,
        slope_bound,
        slope_ok: slope <= slope_bound,
        first_n_holding,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Error;

    #[test]
    fn precondition() {
        let cfg = EigenConfig::default();
        for (s, t) in [(2, 1.0), (2, 0.5), (1, 2.0)] {
            let p = ModelParams::new(3, s, t).unwrap();
            assert!(matches!(analyze(&p, &cfg), Err(Error::PreconditionViolated(_))));
            assert!(matches!(theorem_scan(s, t, &[2, 3], &cfg), Err(Error::PreconditionViolated(_))));
        }
    }

    #[test]
    fn small_analysis_passes() {
        let p = ModelParams::new(3, 2, 2.0).unwrap();
        let out = analyze(&p, &EigenConfig::default()).unwrap();
        assert!(out.lemmas.passed(), "{:?}", out.lemmas.hard_failures());
        assert!(out.verdict.chain_holds);
        let rel = (out.verdict.exact_gap - p.gap_factor() * out.chain.gap_chain).abs()
            / out.verdict.exact_gap;
        assert!(rel < 1e-9);
    }
}
