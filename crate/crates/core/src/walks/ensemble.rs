use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use super::moves::MoveEdge;
use super::step::Step;
use super::walk::{area_of_heights, Walk};
use crate::{Error, ModelParams, Result};

/// Default cap on the number of walks materialized by [`enumerate`].
pub const DEFAULT_MAX_WALKS: u128 = 5_000_000;

/// Every `s`-colored Motzkin walk of length `2n`, in canonical order.
#[derive(Debug, Clone)]
pub struct WalkEnsemble {
    params: ModelParams,
    walks: Vec<Walk>,
    index: HashMap<Vec<Step>, usize>,
}

impl WalkEnsemble {
    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn len(&self) -> usize {
        self.walks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.walks.is_empty()
    }

    pub fn walks(&self) -> &[Walk] {
        &self.walks
    }

    pub fn walk(&self, id: usize) -> &Walk {
        &self.walks[id]
    }

    pub fn id_of(&self, steps: &[Step]) -> Option<usize> {
        self.index.get(steps).copied()
    }

    pub fn areas(&self) -> impl Iterator<Item = u64> + '_ {
        self.walks.iter().map(Walk::area)
    }

    /// Local-move edges leaving walk `id`.
    pub fn local_moves(&self, id: usize) -> Vec<MoveEdge> {
        self.walks[id]
            .local_moves(self.params.s)
            .into_iter()
            .map(|mv| MoveEdge {
                from_id: id,
                to_id: self.index[mv.target.steps()],
                bond: mv.bond,
                delta_area: mv.delta_area,
            })
            .collect()
    }

    /// Id of the color-flipped walk.
    pub fn flip_id(&self, id: usize) -> usize {
        let s = self.params.s;
        let flipped: Vec<Step> = self.walks[id].steps().iter().map(|st| st.flip(s)).collect();
        self.index[&flipped]
    }
}

/// Number of `s`-colored Motzkin walks of length `2n`, by a height-indexed
/// dynamic program.
pub fn count(params: &ModelParams) -> BigUint {
    let len = params.len();
    let s = BigUint::from(params.s);
    let mut ways = vec![BigUint::zero(); params.n + 2];
    ways[0] = BigUint::from(1u32);
    for _ in 0..len {
        let mut next = vec![BigUint::zero(); params.n + 2];
        for (h, w) in ways.iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            next[h] += w;
            if h + 1 <= params.n {
                next[h + 1] += w * &s;
            }
            if h > 0 {
                next[h - 1] += w;
            }
        }
        ways = next;
    }
    ways.swap_remove(0)
}

pub fn enumerate(params: &ModelParams) -> Result<WalkEnsemble> {
    enumerate_with_cap(params, DEFAULT_MAX_WALKS)
}

/// Materializes every walk by prefix extension with height pruning.
pub fn enumerate_with_cap(params: &ModelParams, cap: u128) -> Result<WalkEnsemble> {
    let total = count(params);
    let estimated = total.to_u128().unwrap_or(u128::MAX);
    if estimated > cap {
        return Err(Error::SizeLimitExceeded { estimated, cap });
    }
    let mut builder = Builder {
        len: params.len(),
        s: params.s as u8,
        steps: Vec::with_capacity(params.len()),
        open: Vec::with_capacity(params.n),
        out: Vec::with_capacity(estimated as usize),
    };
    builder.extend();
    let walks = builder.out;
    debug_assert_eq!(walks.len() as u128, estimated);
    let index = walks
        .iter()
        .enumerate()
        .map(|(i, w)| (w.steps().to_vec(), i))
        .collect();
    Ok(WalkEnsemble {
        params: *params,
        walks,
        index,
    })
}

struct Builder {
    len: usize,
    s: u8,
    steps: Vec<Step>,
    open: Vec<u8>,
    out: Vec<Walk>,
}

impl Builder {
    fn extend(&mut self) {
        let remaining = self.len - self.steps.len();
        let h = self.open.len();
        if remaining == 0 {
            let mut heights = Vec::with_capacity(self.len + 1);
            heights.push(0);
            let mut cur = 0i32;
            for st in &self.steps {
                cur += st.dh();
                heights.push(cur as u32);
            }
            let area = area_of_heights(&heights);
            self.out
                .push(Walk::from_parts(self.steps.clone(), heights, area));
            return;
        }
        if h + 1 < remaining {
            for c in 1..=self.s {
                self.steps.push(Step::Up(c));
                self.open.push(c);
                self.extend();
                self.open.pop();
                self.steps.pop();
            }
        }
        if h < remaining {
            self.steps.push(Step::Flat);
            self.extend();
            self.steps.pop();
        }
        if let Some(&c) = self.open.last() {
            self.open.pop();
            self.steps.push(Step::Down(c));
            self.extend();
            self.steps.pop();
            self.open.push(c);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: usize, s: usize) -> ModelParams {
        ModelParams::new(n, s, 2.0).unwrap()
    }

    fn brute_force_count(n: usize, s: usize) -> usize {
        let d = 2 * s + 1;
        let total = d.pow(2 * n as u32);
        (0..total)
            .filter(|&mut_code| {
                let mut code = mut_code;
                let steps: Vec<Step> = (0..2 * n)
                    .map(|_| {
                        let st = Step::from_code(code % d, s);
                        code /= d;
                        st
                    })
                    .collect();
                Walk::validate(&steps, s).is_ok()
            })
            .count()
    }

    #[test]
    fn small_listings() {
        let e = enumerate(&params(1, 1)).unwrap();
        let text: Vec<String> = e.walks().iter().map(|w| w.to_string()).collect();
        assert_eq!(text, vec!["u1.d1", "0.0"]);
        let e = enumerate(&params(1, 2)).unwrap();
        let text: Vec<String> = e.walks().iter().map(|w| w.to_string()).collect();
        assert_eq!(text, vec!["u1.d1", "u2.d2", "0.0"]);
        assert_eq!(enumerate(&params(2, 2)).unwrap().len(), 21);
    }

    #[test]
    fn counts() {
        assert_eq!(count(&params(2, 1)), BigUint::from(9u32));
        assert_eq!(count(&params(1, 3)), BigUint::from(4u32));
        assert_eq!(count(&params(2, 2)), BigUint::from(21u32));
    }

    #[test]
    fn count_matches_brute_force() {
        for n in 1..=3 {
            for s in 1..=2 {
                assert_eq!(
                    count(&params(n, s)),
                    BigUint::from(brute_force_count(n, s)),
                    "n={n} s={s}"
                );
            }
        }
    }

    #[test]
    fn enumeration_matches_count() {
        for n in 1..=5 {
            for s in 1..=3 {
                let p = params(n, s);
                let e = enumerate(&p).unwrap();
                assert_eq!(BigUint::from(e.len()), count(&p));
            }
        }
    }

    #[test]
    fn canonical_order_is_sorted() {
        let e = enumerate(&params(3, 2)).unwrap();
        assert!(e.walks().windows(2).all(|w| w[0].steps() < w[1].steps()));
        for (i, w) in e.walks().iter().enumerate() {
            assert_eq!(e.id_of(w.steps()), Some(i));
        }
    }

    #[test]
    fn cap_is_enforced() {
        let err = enumerate_with_cap(&params(5, 3), 1000).unwrap_err();
        assert!(matches!(err, Error::SizeLimitExceeded { cap: 1000, .. }));
    }

    #[test]
    fn max_area_is_attained_by_tents_only() {
        for n in 1..=4 {
            for s in 1..=3 {
                let e = enumerate(&params(n, s)).unwrap();
                let max = e.areas().max().unwrap();
                assert_eq!(max, (n * n) as u64);
                let tents = e.areas().filter(|&a| a == max).count();
                assert_eq!(tents, s.pow(n as u32));
            }
        }
    }
}
