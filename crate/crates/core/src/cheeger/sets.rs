use serde::Serialize;

use crate::markov::{StationaryDist, TransitionMatrix};
use crate::walks::{MoveGraph, Step, WalkEnsemble};
use crate::{Error, ModelParams, Result};

/// Membership test for the bottleneck `B` from a step and height profile.
pub fn in_bottleneck(steps: &[Step], heights: &[u32]) -> bool {
    let n = steps.len() / 2;
    (matches!(steps[n - 1], Step::Up(_)) && heights[n - 1] == 0)
        || (matches!(steps[n], Step::Down(_)) && heights[n + 1] == 0)
}

/// Membership flags over the walks of an ensemble.
#[derive(Debug, Clone)]
pub struct CutSets {
    pub lambda: Vec<bool>,
    pub s_set: Vec<bool>,
    pub s_prime: Vec<bool>,
    pub b: Vec<bool>,
    /// Filled in by [`reachable_a`].
    pub a: Option<Vec<bool>>,
}

impl CutSets {
    pub fn a(&self) -> &[bool] {
        self.a.as_deref().expect("reachable set A has been computed")
    }

    pub fn count(set: &[bool]) -> usize {
        set.iter().filter(|&&m| m).count()
    }
}

/// Classifies every walk into `Λ`, `S`, `S′` and `B`.
pub fn classify(ensemble: &WalkEnsemble) -> Result<CutSets> {
    let p = ensemble.params();
    if p.s < 2 {
        return Err(Error::InvalidParams(format!("cut sets need s >= 2, got {}", p.s)));
    }
    if p.n < 2 {
        return Err(Error::InvalidParams(format!(
            "cut sets need n >= 2 (for n = 1, S lies inside B), got {}",
            p.n
        )));
    }
    let half = (p.s / 2) as u8;
    let len = ensemble.len();
    let (mut lambda, mut s_set, mut s_prime, mut b) =
        (vec![false; len], vec![false; len], vec![false; len], vec![false; len]);
    for (id, w) in ensemble.walks().iter().enumerate() {
        b[id] = in_bottleneck(w.steps(), w.heights());
        if w.is_prime() {
            lambda[id] = true;
            let color = w.steps()[0].color().expect("prime walks start with an up step");
            if color <= half {
                s_set[id] = true;
            } else {
                s_prime[id] = true;
            }
        }
    }
    Ok(CutSets {
        lambda,
        s_set,
        s_prime,
        b,
        a: None,
    })
}

/// `A`: walks reachable from `S` by local moves that never enter `B`.
pub fn reachable_a(cuts: &CutSets, graph: &MoveGraph) -> Vec<bool> {
    let starts = cuts
        .s_set
        .iter()
        .enumerate()
        .filter(|(_, &m)| m)
        .map(|(i, _)| i);
    graph.closure(starts, &cuts.b)
}

#[derive(Debug, Clone, Serialize)]
pub struct ConductanceReport {
    /// `Q(A, A^c) = Σ_{x∈A, y∉A} π(x) P(x, y)`.
    pub q_a_ac: f64,
    /// `Q(A^c, A)`, equal to `q_a_ac` by reversibility.
    pub q_ac_a: f64,
    pub pi_a: f64,
    pub pi_s: f64,
    pub pi_sprime: f64,
    pub pi_b: f64,
    pub pi_lambda: f64,
    /// `2 Q(A, A^c) / π(A)`, an upper bound on `1 − λ₂`.
    pub cheeger_bound: f64,
    /// `2 π(B) / π(A)`.
    pub bottleneck_bound: f64,
    /// `8 n s t^{−n²/3}`.
    pub theorem_bound: f64,
    pub exact_gap: Option<f64>,
}

impl ConductanceReport {
    pub fn q_le_pi_b(&self) -> bool {
        self.q_a_ac <= self.pi_b * (1.0 + 1e-12)
    }
}

/// Exact conductance of `A` and the resulting Cheeger bound.
pub fn conductance(
    params: &ModelParams,
    pi: &StationaryDist,
    p: &TransitionMatrix,
    cuts: &CutSets,
) -> Result<ConductanceReport> {
    let a = cuts.a();
    let flow = |from_a: bool| -> f64 {
        (0..p.dim())
            .filter(|&x| a[x] == from_a)
            .map(|x| {
                pi.pi[x]
                    * p.matrix
                        .row(x)
                        .filter(|&(y, _)| a[y] != from_a)
                        .map(|(_, v)| v)
                        .sum::<f64>()
            })
            .sum()
    };
    let q_a_ac = flow(true);
    let q_ac_a = flow(false);
    let pi_a = pi.measure(a);
    if pi_a > 0.5 + 1e-12 {
        return Err(Error::PiAExceedsHalf(pi_a));
    }
    let pi_b = pi.measure(&cuts.b);
    Ok(ConductanceReport {
        q_a_ac,
        q_ac_a,
        pi_a,
        pi_s: pi.measure(&cuts.s_set),
        pi_sprime: pi.measure(&cuts.s_prime),
        pi_b,
        pi_lambda: pi.measure(&cuts.lambda),
        cheeger_bound: 2.0 * q_a_ac / pi_a,
        bottleneck_bound: 2.0 * pi_b / pi_a,
        theorem_bound: theorem_bound(params),
        exact_gap: None,
    })
}

/// `8 n s t^{−n²/3}`.
pub(crate) fn theorem_bound(params: &ModelParams) -> f64 {
    let n = params.n as f64;
    8.0 * n * params.s as f64 * (-(n * n) / 3.0 * params.ln_t()).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walks::{enumerate, Walk};

    fn ensemble(n: usize, s: usize) -> WalkEnsemble {
        enumerate(&ModelParams::new(n, s, 2.0).unwrap()).unwrap()
    }

    fn flags(e: &WalkEnsemble, cuts: &CutSets, text: &str) -> (bool, bool, bool, bool) {
        let id = e.id_of(Walk::parse(text, e.params().s).unwrap().steps()).unwrap();
        (cuts.lambda[id], cuts.s_set[id], cuts.s_prime[id], cuts.b[id])
    }

    #[test]
    fn classification_examples() {
        let e = ensemble(2, 2);
        let cuts = classify(&e).unwrap();
        assert_eq!(flags(&e, &cuts, "u1.u1.d1.d1"), (true, true, false, false));
        assert_eq!(flags(&e, &cuts, "u2.u2.d2.d2"), (true, false, true, false));
        assert!(flags(&e, &cuts, "0.u1.d1.0").3);
        assert!(flags(&e, &cuts, "u1.d1.0.0").0 == false);
    }

    #[test]
    fn odd_s_uses_floor() {
        let e = ensemble(2, 3);
        let cuts = classify(&e).unwrap();
        assert!(flags(&e, &cuts, "u1.0.0.d1").1);
        assert!(flags(&e, &cuts, "u2.0.0.d2").2);
        assert!(flags(&e, &cuts, "u3.0.0.d3").2);
    }

    #[test]
    fn rejects_small_parameters() {
        assert!(classify(&ensemble(2, 1)).is_err());
        assert!(classify(&ensemble(1, 2)).is_err());
    }

    #[test]
    fn a_contains_s_and_avoids_b() {
        for (n, s) in [(2, 2), (3, 2), (3, 3), (4, 2)] {
            let e = ensemble(n, s);
            let g = MoveGraph::build(&e);
            let cuts = classify(&e).unwrap();
            let a = reachable_a(&cuts, &g);
            for id in 0..e.len() {
                assert!(!cuts.s_set[id] || a[id]);
                assert!(!(a[id] && cuts.b[id]));
                assert!(!(a[id] && cuts.s_prime[id]), "n={n} s={s}");
                if a[id] {
                    for edge in g.edges_from(id) {
                        assert!(a[edge.to_id] || cuts.b[edge.to_id]);
                    }
                }
            }
        }
    }

    #[test]
    fn bottleneck_is_flip_invariant() {
        let e = ensemble(4, 3);
        let cuts = classify(&e).unwrap();
        for id in 0..e.len() {
            assert_eq!(cuts.b[id], cuts.b[e.flip_id(id)]);
        }
    }
}
