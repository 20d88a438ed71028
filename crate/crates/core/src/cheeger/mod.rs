//! Bottleneck sets, exact conductance and finite-size checks of the
//! exponential gap bound `Δ(H) < 8ns·t^{−n²/3}`.
//!
//! Prime walks (`Λ`) split by the color of their outer arc into `S`
//! (colors `≤ ⌊s/2⌋`) and `S′`. The bottleneck `B` holds walks whose step
//! `n` is an up step leaving height zero or whose step `n + 1` is a down
//! step returning to height zero. `A` is everything reachable from `S`
//! through local moves that avoid `B`; Cheeger's inequality applied to `A`
//! bounds `1 − λ₂`.

mod lemmas;
mod sets;
mod theorem;

pub use lemmas::{defect_table, lemma_suite, DefectRow, DefectTable, LemmaCheck, LemmaSuite, Relation};
pub use sets::{
    classify, conductance, in_bottleneck, reachable_a, ConductanceReport, CutSets,
};
pub use theorem::{analyze, theorem_check, theorem_scan, CheegerAnalysis, TheoremScan, TheoremVerdict};
