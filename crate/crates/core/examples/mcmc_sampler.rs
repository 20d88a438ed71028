//! Samples the area-weighted law with the exact Metropolis dynamics of `P`
//! and compares the empirical distribution with `pi`.
//!
//! ```text
//! cargo run --release --example mcmc_sampler -- 3 2 2.0 10000000
//! ```

use motzkin::markov::{mcmc_sample, stationary, total_variation, CsvTrace, EnsembleVisits, Observer};
use motzkin::walks::{enumerate, Walk};
use motzkin::ModelParams;

fn main() -> motzkin::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n = args.first().and_then(|a| a.parse().ok()).unwrap_or(3);
    let s = args.get(1).and_then(|a| a.parse().ok()).unwrap_or(2);
    let t = args.get(2).and_then(|a| a.parse().ok()).unwrap_or(2.0);
    let steps = args.get(3).and_then(|a| a.parse().ok()).unwrap_or(1_000_000);
    let params = ModelParams::new(n, s, t)?;

    let ensemble = enumerate(&params)?;
    let mut visits = EnsembleVisits::new(&ensemble);
    let mut trace = CsvTrace::new(Vec::new(), (steps / 5).max(1))?;
    let run = {
        let mut observers: [&mut dyn Observer; 2] = [&mut visits, &mut trace];
        mcmc_sample(&params, steps, 0, &Walk::flat(n), &mut observers)?
    };

    let pi = stationary(&params, &ensemble);
    println!("{steps} steps, {} accepted", run.accepted);
    println!("final walk {} (area {})", run.final_walk, run.final_walk.area());
    println!("trajectory sha256 {}", run.trajectory_digest);
    println!("TV(empirical, pi) = {:.4}", total_variation(&visits.empirical(), &pi.pi));
    print!("\ntrace:\n{}", String::from_utf8_lossy(&trace.finish()?));
    Ok(())
}
