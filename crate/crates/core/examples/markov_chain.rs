//! The reversible chain behind `H(t)`: builds `P` two ways, checks the
//! transition identities, and compares both spectral gaps.
//!
//! ```text
//! cargo run --release --example markov_chain -- 3 2 1.5
//! ```

use motzkin::hamiltonian::{build_h_subspace, ground_state, spectral_gap};
use motzkin::linalg::EigenConfig;
use motzkin::markov::{build_p_direct, build_p_from_h, gap_relation_check, lambda2, stationary};
use motzkin::walks::enumerate;
use motzkin::ModelParams;

fn main() -> motzkin::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n = args.first().and_then(|a| a.parse().ok()).unwrap_or(3);
    let s = args.get(1).and_then(|a| a.parse().ok()).unwrap_or(2);
    let t = args.get(2).and_then(|a| a.parse().ok()).unwrap_or(1.5);
    let params = ModelParams::new(n, s, t)?;
    let cfg = EigenConfig::default();

    let ensemble = enumerate(&params)?;
    let h = build_h_subspace(&params, &ensemble);
    let pi = stationary(&params, &ensemble);
    let direct = build_p_direct(&params, &ensemble);
    let from_h = build_p_from_h(&params, &h, &pi)?;

    let checks = direct.check(&params, &pi);
    println!("beta = {:.15}", direct.beta);
    println!("{checks:#?}");
    println!("max |P_H - P| = {:.3e}", from_h.matrix.max_abs_diff(&direct.matrix));

    let spec = spectral_gap(&h, Some(&ground_state(&params, &ensemble).amplitudes), &cfg)?;
    let chain = lambda2(&direct, &pi, &cfg)?;
    let rel = gap_relation_check(&params, &spec, &chain, 1e-9);
    println!("\ngap(H)            {:.15e}", spec.gap);
    println!("1 - lambda2(P)    {:.15e}", chain.gap_chain);
    println!("(1 - lambda2)/beta {:.15e}", rel.predicted_gap_h);
    println!("relative mismatch {:.3e}  pass {}", rel.relative_discrepancy, rel.pass);
    Ok(())
}
