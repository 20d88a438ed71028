//! Bottleneck sets, exact conductance and the finite-size lemma checks.
//!
//! ```text
//! cargo run --release --example bottleneck -- 3 2 2.0
//! ```

use motzkin::cheeger::{analyze, CutSets};
use motzkin::linalg::EigenConfig;
use motzkin::ModelParams;

fn main() -> motzkin::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n = args.first().and_then(|a| a.parse().ok()).unwrap_or(3);
    let s = args.get(1).and_then(|a| a.parse().ok()).unwrap_or(2);
    let t = args.get(2).and_then(|a| a.parse().ok()).unwrap_or(2.0);
    let a = analyze(&ModelParams::new(n, s, t)?, &EigenConfig::default())?;

    let sizes = [
        ("prime", &a.cuts.lambda),
        ("S", &a.cuts.s_set),
        ("S'", &a.cuts.s_prime),
        ("B", &a.cuts.b),
    ];
    for (name, set) in sizes {
        println!("|{name}| = {}", CutSets::count(set));
    }
    let c = &a.conductance;
    println!("pi(S) = {:.6}  pi(B) = {:.3e}  pi(A) = {:.6}", c.pi_s, c.pi_b, c.pi_a);
    println!("Q(A, A^c) = {:.6e}", c.q_a_ac);
    println!("Cheeger bound {:.6e} <= bottleneck bound {:.6e}", c.cheeger_bound, c.bottleneck_bound);
    println!(
        "gap(H) = {:.6e} vs theorem bound {:.6e}: holds {}",
        a.verdict.exact_gap, a.verdict.bound, a.verdict.holds
    );

    println!("\nlemma checks:");
    for check in &a.lemmas.checks {
        let mark = match (check.holds, check.asserted) {
            (true, _) => "ok  ",
            (false, true) => "FAIL",
            (false, false) => "note",
        };
        println!(
            "  {mark} {:<34} {:.4e} {} {:.4e}  {}",
            check.id,
            check.lhs,
            check.relation.as_str(),
            check.rhs,
            check.caveat
        );
    }
    println!("all asserted checks pass: {}", a.lemmas.passed());
    Ok(())
}
