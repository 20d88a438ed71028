//! Exact gap against the exponential bound `8ns t^{-n²/3}` over a range of
//! `n`, with the fitted decay slope of `ln Δ` in `n²`.
//!
//! ```text
//! cargo run --release --example theorem_scan -- 2 2.0 5
//! ```

use motzkin::cheeger::theorem_scan;
use motzkin::linalg::EigenConfig;

fn main() -> motzkin::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let s = args.first().and_then(|a| a.parse().ok()).unwrap_or(2);
    let t = args.get(1).and_then(|a| a.parse().ok()).unwrap_or(2.0);
    let max_n = args.get(2).and_then(|a| a.parse().ok()).unwrap_or(4);
    let ns: Vec<usize> = (2..=max_n).collect();

    let scan = theorem_scan(s, t, &ns, &EigenConfig::default())?;
    println!("{:>3} {:>14} {:>14} {:>6}", "n", "gap", "bound", "holds");
    for row in &scan.rows {
        println!("{:>3} {:>14.6e} {:>14.6e} {:>6}", row.n, row.exact_gap, row.bound, row.holds);
    }
    println!("\nslope of ln gap in n^2: {:.4} (bound {:.4}), ok {}", scan.slope, scan.slope_bound, scan.slope_ok);
    Ok(())
}
