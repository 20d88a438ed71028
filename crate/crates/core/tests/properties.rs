//! Randomized invariants over walks, operators, the chain and the entropy DP.

use motzkin::entropy::{half_weights, schmidt_entropy};
use motzkin::hamiltonian::{build_h_subspace, ground_state};
use motzkin::markov::{build_p_direct, build_p_from_h, mcmc_sample, stationary, ChainState, Observer};
use motzkin::walks::{count, enumerate, partition_count, MoveGraph, Step, Walk};
use motzkin::ModelParams;
use num_traits::ToPrimitive;
use proptest::prelude::*;

/// Builds a valid walk of length `2n` from arbitrary choice bytes: at each
/// position the byte picks among the steps that can still be completed.
fn walk_from_choices(n: usize, s: usize, choices: &[u8]) -> Walk {
    let len = 2 * n;
    let mut steps = Vec::with_capacity(len);
    let mut open: Vec<u8> = Vec::new();
    for (j, &c) in choices.iter().take(len).enumerate() {
        let remaining = len - j - 1;
        let h = open.len();
        let mut options = Vec::new();
        if h <= remaining {
            options.push(Step::Flat);
        }
        if h + 1 <= remaining {
            options.extend((1..=s as u8).map(Step::Up));
        }
        if let Some(&top) = open.last() {
            options.push(Step::Down(top));
        }
        let step = options[c as usize % options.len()];
        match step {
            Step::Up(k) => open.push(k),
            Step::Down(_) => {
                open.pop();
            }
            Step::Flat => {}
        }
        steps.push(step);
    }
    Walk::validate(&steps, s).expect("construction keeps the walk valid")
}

fn arb_walk(max_n: usize, max_s: usize) -> impl Strategy<Value = (usize, Walk)> {
    (1..=max_n, 1..=max_s).prop_flat_map(|(n, s)| {
        prop::collection::vec(any::<u8>(), 2 * n).prop_map(move |c| (s, walk_from_choices(n, s, &c)))
    })
}

fn doubled_area(heights: &[u32]) -> u64 {
    heights.windows(2).map(|w| (w[0] + w[1]) as u64).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn walk_structure((_s, w) in arb_walk(12, 4)) {
        let h = w.heights();
        let n = w.n();
        prop_assert_eq!(h.len(), 2 * n + 1);
        prop_assert_eq!(h[0], 0);
        prop_assert_eq!(h[2 * n], 0);
        for (j, step) in w.steps().iter().enumerate() {
            prop_assert_eq!(h[j + 1] as i32 - h[j] as i32, step.dh());
        }
        let twice = doubled_area(h);
        prop_assert_eq!(twice % 2, 0);
        prop_assert_eq!(w.area(), twice / 2);
        prop_assert!(w.area() <= (n * n) as u64);
    }

    #[test]
    fn text_round_trip((s, w) in arb_walk(10, 5)) {
        prop_assert_eq!(Walk::parse(&w.to_string(), s).unwrap(), w);
    }

    #[test]
    fn color_flip_is_an_area_preserving_involution((s, w) in arb_walk(10, 4)) {
        let f = w.color_flip(s);
        prop_assert_eq!(f.color_flip(s), w.clone());
        prop_assert_eq!(f.area(), w.area());
        prop_assert_eq!(f.is_prime(), w.is_prime());
        prop_assert_eq!(f.heights(), w.heights());
    }

    #[test]
    fn concatenation_adds_area((s, a) in arb_walk(6, 3), b in prop::collection::vec(any::<u8>(), 1..12)) {
        let b = walk_from_choices(b.len().div_ceil(2).max(1), s, &[b.clone(), b].concat());
        prop_assert_eq!(a.concat(&b).area(), a.area() + b.area());
    }

    #[test]
    fn local_moves_change_one_bond_and_unit_area((s, w) in arb_walk(8, 3)) {
        for m in w.local_moves(s) {
            let target = Walk::validate(m.target.steps(), s).unwrap();
            prop_assert_eq!(&target, &m.target);
            prop_assert_eq!(m.delta_area.abs(), 1);
            prop_assert_eq!(target.area() as i64 - w.area() as i64, m.delta_area as i64);
            for (j, (x, y)) in w.steps().iter().zip(target.steps()).enumerate() {
                if j + 1 != m.bond && j != m.bond {
                    prop_assert_eq!(x, y, "site {} changed by move at bond {}", j + 1, m.bond);
                }
            }
        }
    }

    #[test]
    fn partition_recurrence_matches_listing(a in 0usize..=30) {
        fn listing(rest: usize, max_part: usize) -> u64 {
            if rest == 0 {
                return 1;
            }
            (1..=max_part.min(rest)).map(|k| listing(rest - k, k)).sum()
        }
        prop_assert_eq!(partition_count(a).to_u64().unwrap(), listing(a, a));
    }

    #[test]
    fn schmidt_weights_normalize(n in 1usize..=500, s in 1usize..=4, t in 0.2f64..3.0) {
        let p = ModelParams::new(n, s, t).unwrap();
        let hw = half_weights(&p);
        prop_assert!(hw.log_d.iter().any(|v| v.is_finite()));
        let spec = schmidt_entropy(&p);
        let total: f64 = spec.levels.iter().map(|l| l.weight()).sum();
        prop_assert!((total - 1.0).abs() < 1e-9, "sum {}", total);
        prop_assert!(spec.entropy_bits.is_finite() && spec.entropy_bits >= 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn operator_and_chain_identities(n in 1usize..=3, s in 1usize..=2, t in 1.0f64..3.0) {
        let p = ModelParams::new(n, s, t).unwrap();
        let e = enumerate(&p).unwrap();
        prop_assert_eq!(e.len(), count(&p).to_usize().unwrap());

        let h = build_h_subspace(&p, &e);
        prop_assert!(h.asymmetry() < 1e-15);
        let off = -t / (1.0 + t * t);
        for (x, y, v) in h.triplets() {
            if x != y {
                prop_assert!((v - off).abs() < 1e-15);
                let dx = e.walk(x).steps().iter().zip(e.walk(y).steps()).filter(|(a, b)| a != b).count();
                prop_assert!(dx <= 2 && dx >= 1);
            }
        }
        let gs = ground_state(&p, &e);
        prop_assert!(gs.amplitudes.iter().all(|&a| a > 0.0));
        let r = h.matvec(&gs.amplitudes).iter().fold(0.0f64, |m, v| m.max(v.abs()));
        prop_assert!(r < 1e-10);

        let pi = stationary(&p, &e);
        prop_assert!((pi.pi.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let chain = build_p_direct(&p, &e);
        let checks = chain.check(&p, &pi);
        prop_assert!(checks.passes(1e-12), "{:?}", checks);
        prop_assert!(MoveGraph::build(&e).is_connected());
    }

    #[test]
    fn small_t_chain_is_rejected(n in 1usize..=3, s in 1usize..=2, t in 0.05f64..0.25) {
        // With 2nst² < 1 a single decreasing rate exceeds one, so P has a
        // negative diagonal somewhere.
        let p = ModelParams::new(n, s, t).unwrap();
        let e = enumerate(&p).unwrap();
        let pi = stationary(&p, &e);
        let h = build_h_subspace(&p, &e);
        prop_assert!(build_p_from_h(&p, &h, &pi).is_err());
        prop_assert!(!build_p_direct(&p, &e).check(&p, &pi).passes(1e-12));
    }

    #[test]
    fn sampler_stays_on_valid_walks(seed in any::<u64>(), t in 0.5f64..3.0) {
        struct Check(usize, bool);
        impl Observer for Check {
            fn observe(&mut self, _step: u64, state: &ChainState) {
                self.1 &= Walk::validate(state.steps(), self.0).is_ok()
                    && doubled_area(state.heights()) == 2 * state.area();
            }
        }
        let p = ModelParams::new(4, 3, t).unwrap();
        let mut check = Check(3, true);
        let run = mcmc_sample(&p, 5_000, seed, &Walk::flat(4), &mut [&mut check]).unwrap();
        prop_assert!(check.1);
        let again = mcmc_sample(&p, 5_000, seed, &Walk::flat(4), &mut []).unwrap();
        prop_assert_eq!(run.trajectory_digest, again.trajectory_digest);
    }
}
