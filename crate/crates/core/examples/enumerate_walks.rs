//! Counts and lists colored Motzkin walks, then shows the local moves out of
//! one of them.
//!
//! ```text
//! cargo run --example enumerate_walks -- 3 2
//! ```

use motzkin::walks::{count, enumerate, partition_count, MoveGraph, Walk};
use motzkin::ModelParams;

fn main() -> motzkin::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let n = args.first().copied().unwrap_or(3);
    let s = args.get(1).copied().unwrap_or(2);
    let params = ModelParams::new(n, s, 1.0)?;

    for m in 1..=n {
        println!("n={m} s={s}: {} walks", count(&ModelParams::new(m, s, 1.0)?));
    }

    let ensemble = enumerate(&params)?;
    let max_area = ensemble.areas().max().unwrap_or(0);
    println!("\nfirst walks of length {}:", 2 * n);
    for walk in ensemble.walks().iter().take(8) {
        println!("  {:<24} area {:>2}  prime {}", walk.to_string(), walk.area(), walk.is_prime());
    }
    println!("maximal area {max_area} (n² = {})", n * n);

    let tent = Walk::tent(n, 1);
    let id = ensemble.id_of(tent.steps()).expect("tent is a walk");
    println!("\nmoves out of {tent}:");
    for edge in ensemble.local_moves(id) {
        println!("  -> {} (area change {:+})", ensemble.walk(edge.to_id), edge.delta_area);
    }

    let graph = MoveGraph::build(&ensemble);
    println!("move graph: {} edges, connected {}", graph.edges().len(), graph.is_connected());
    println!("partitions p(1..8): {:?}", (1..=8).map(partition_count).collect::<Vec<_>>());
    Ok(())
}
