//! Half-chain entanglement entropy in the three regimes of `t`.
//!
//! ```text
//! cargo run --release --example entanglement
//! ```

use motzkin::entropy::{entropy_scan, schmidt_entropy, scaling_fit, sqrt_coefficient_reference};
use motzkin::ModelParams;

fn main() -> motzkin::Result<()> {
    let s = 2;
    let spectrum = schmidt_entropy(&ModelParams::new(4, s, 1.0)?);
    println!("n=4 s=2 t=1 Schmidt levels:");
    for level in &spectrum.levels {
        println!("  m={} p={:.6} multiplicity {:.0}", level.m, level.p(), level.multiplicity());
    }
    println!("  entropy {:.10} bits", spectrum.entropy_bits);

    let ns: Vec<usize> = (20..=400).step_by(20).collect();
    for t in [0.5, 1.0, 2.0] {
        let grid: Vec<ModelParams> = ns
            .iter()
            .map(|&n| ModelParams::new(n, s, t))
            .collect::<motzkin::Result<_>>()?;
        let rows = entropy_scan(&grid);
        let last = rows.last().expect("non-empty grid");
        println!("\nt={t}: S(n={}) = {:.4} bits", last.n, last.entropy_bits);
        if let Some(fit) = scaling_fit(&rows) {
            let (value, reference) = fit.value_and_reference();
            println!("  {} fit {value:.5} (reference {reference:.5})", fit.kind());
        }
    }
    println!("\nsqrt coefficient reference for s={s}: {:.6}", sqrt_coefficient_reference(s));
    Ok(())
}
