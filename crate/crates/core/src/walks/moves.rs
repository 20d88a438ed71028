use rayon::prelude::*;

use super::ensemble::WalkEnsemble;
use super::step::Step;
use super::walk::Walk;

/// A neighbor of a walk under one local move at `bond` (sites `bond`,
/// `bond + 1`, 1-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalMove {
    pub bond: usize,
    pub delta_area: i8,
    pub target: Walk,
}

/// A local move between two walks of an ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MoveEdge {
    pub from_id: usize,
    pub to_id: usize,
    pub bond: usize,
    pub delta_area: i8,
}

/// Replacements for the pair `(a, b)`, each with its area change.
///
/// `0u ↔ u0`, `0d ↔ d0` and `00 ↔ u^k d^k`. Adjacent `u d` in a valid walk
/// always has matching colors.
pub(crate) fn pair_moves(a: Step, b: Step, s: usize) -> impl Iterator<Item = (Step, Step, i8)> {
    use Step::*;
    let mut out: [Option<(Step, Step, i8)>; 1] = [None];
    let mut peaks = 0..0;
    match (a, b) {
        (Flat, Up(k)) => out[0] = Some((Up(k), Flat, 1)),
        (Up(k), Flat) => out[0] = Some((Flat, Up(k), -1)),
        (Flat, Down(k)) => out[0] = Some((Down(k), Flat, -1)),
        (Down(k), Flat) => out[0] = Some((Flat, Down(k), 1)),
        (Up(k), Down(c)) if k == c => out[0] = Some((Flat, Flat, -1)),
        (Flat, Flat) => peaks = 1..s + 1,
        _ => {}
    }
    out.into_iter()
        .flatten()
        .chain(peaks.map(|k| (Up(k as u8), Down(k as u8), 1)))
}

impl Walk {
    /// All walks one local move away.
    pub fn local_moves(&self, s: usize) -> Vec<LocalMove> {
        let steps = self.steps();
        let mut moves = Vec::new();
        for i in 0..steps.len() - 1 {
            for (a, b, delta) in pair_moves(steps[i], steps[i + 1], s) {
                let mut new_steps = steps.to_vec();
                new_steps[i] = a;
                new_steps[i + 1] = b;
                let mut heights = self.heights().to_vec();
                heights[i + 1] = (heights[i] as i32 + a.dh()) as u32;
                let area = (self.area() as i64 + delta as i64) as u64;
                moves.push(LocalMove {
                    bond: i + 1,
                    delta_area: delta,
                    target: Walk::from_parts(new_steps, heights, area),
                });
            }
        }
        moves
    }
}

/// Adjacency lists of the local-move graph over an ensemble.
#[derive(Debug, Clone)]
pub struct MoveGraph {
    offsets: Vec<usize>,
    edges: Vec<MoveEdge>,
}

impl MoveGraph {
    pub fn build(ensemble: &WalkEnsemble) -> MoveGraph {
        let per_walk: Vec<Vec<MoveEdge>> = (0..ensemble.len())
            .into_par_iter()
            .map(|id| ensemble.local_moves(id))
            .collect();
        let mut offsets = Vec::with_capacity(per_walk.len() + 1);
        offsets.push(0);
        let mut edges = Vec::new();
        for list in per_walk {
            edges.extend(list);
            offsets.push(edges.len());
        }
        MoveGraph { offsets, edges }
    }

    pub fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn edges_from(&self, id: usize) -> &[MoveEdge] {
        &self.edges[self.offsets[id]..self.offsets[id + 1]]
    }

    pub fn edges(&self) -> &[MoveEdge] {
        &self.edges
    }

    /// Breadth-first closure of `starts`, never entering a walk for which
    /// `blocked` is true. Blocked starts are dropped.
    pub fn closure(&self, starts: impl IntoIterator<Item = usize>, blocked: &[bool]) -> Vec<bool> {
        let mut seen = vec![false; self.len()];
        let mut queue = std::collections::VecDeque::new();
        for id in starts {
            if !blocked[id] && !seen[id] {
                seen[id] = true;
                queue.push_back(id);
            }
        }
        while let Some(id) = queue.pop_front() {
            for e in self.edges_from(id) {
                if !blocked[e.to_id] && !seen[e.to_id] {
                    seen[e.to_id] = true;
                    queue.push_back(e.to_id);
                }
            }
        }
        seen
    }

    pub fn is_connected(&self) -> bool {
        if self.is_empty() {
            return true;
        }
        let none = vec![false; self.len()];
        self.closure([0], &none).into_iter().all(|v| v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walks::enumerate;
    use crate::ModelParams;

    fn walk(text: &str, s: usize) -> Walk {
        Walk::parse(text, s).unwrap()
    }

    #[test]
    fn flat_pair_creates_peaks() {
        let moves = walk("0.0", 1).local_moves(1);
        assert_eq!(moves.len(), 1);
        assert_eq!(moves[0].target, walk("u1.d1", 1));
        assert_eq!(moves[0].delta_area, 1);

        let moves = walk("0.0", 2).local_moves(2);
        let targets: Vec<String> = moves.iter().map(|m| m.target.to_string()).collect();
        assert_eq!(targets, vec!["u1.d1", "u2.d2"]);
        assert!(moves.iter().all(|m| m.delta_area == 1));
    }

    #[test]
    fn tent_has_one_move() {
        let moves = walk("u1.u1.d1.d1", 1).local_moves(1);
        assert_eq!(moves.len(), 1);
        assert_eq!(moves[0].bond, 2);
        assert_eq!(moves[0].delta_area, -1);
        assert_eq!(moves[0].target, walk("u1.0.0.d1", 1));
    }

    #[test]
    fn moves_are_valid_and_change_area_by_one() {
        for (n, s) in [(1, 1), (2, 2), (3, 2), (4, 1), (3, 3)] {
            let e = enumerate(&ModelParams::new(n, s, 1.0).unwrap()).unwrap();
            for w in e.walks() {
                for mv in w.local_moves(s) {
                    let check = Walk::validate(mv.target.steps(), s).unwrap();
                    assert_eq!(check, mv.target);
                    assert_eq!(
                        check.area() as i64 - w.area() as i64,
                        mv.delta_area as i64
                    );
                    let differing: Vec<usize> = (0..2 * n)
                        .filter(|&i| w.steps()[i] != check.steps()[i])
                        .collect();
                    assert!(!differing.is_empty());
                    assert!(differing.iter().all(|&i| i + 1 == mv.bond || i == mv.bond));
                }
            }
        }
    }

    #[test]
    fn move_graph_is_symmetric_and_connected() {
        for n in 1..=4 {
            for s in 1..=3 {
                let e = enumerate(&ModelParams::new(n, s, 1.0).unwrap()).unwrap();
                let g = MoveGraph::build(&e);
                assert!(g.is_connected(), "n={n} s={s}");
                for edge in g.edges() {
                    assert!(g.edges_from(edge.to_id).iter().any(|b| b.to_id == edge.from_id
                        && b.bond == edge.bond
                        && b.delta_area == -edge.delta_area));
                }
            }
        }
    }
}
