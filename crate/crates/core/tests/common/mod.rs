#![allow(dead_code)]

use std::collections::HashMap;

use motzkin::walks::{format_steps, WalkEnsemble};
use nalgebra::{DMatrix, SymmetricEigen};

/// Amplitudes `t^{A(x)}` normalized to unit length, computed directly from
/// the walk areas.
pub fn amplitudes(ensemble: &WalkEnsemble, t: f64) -> Vec<f64> {
    let max_area = ensemble.areas().max().unwrap_or(0) as f64;
    let raw: Vec<f64> = ensemble
        .areas()
        .map(|a| t.powf(a as f64 - max_area))
        .collect();
    let norm = raw.iter().map(|v| v * v).sum::<f64>().sqrt();
    raw.into_iter().map(|v| v / norm).collect()
}

/// Half-chain entanglement entropy (bits) of a state given by amplitudes on
/// walks, via the singular values of the coefficient matrix `Ψ[left][right]`.
/// The matrix is split into the connected blocks of its sparsity pattern
/// before each block is decomposed.
pub fn brute_entropy_bits(ensemble: &WalkEnsemble, psi: &[f64]) -> f64 {
    let n = ensemble.params().n;
    let mut left_ids: HashMap<String, usize> = HashMap::new();
    let mut right_ids: HashMap<String, usize> = HashMap::new();
    let mut entries = Vec::with_capacity(ensemble.len());
    for (walk, &amp) in ensemble.walks().iter().zip(psi) {
        let (l, r) = walk.steps().split_at(n);
        let next = left_ids.len();
        let li = *left_ids.entry(format_steps(l)).or_insert(next);
        let next = right_ids.len();
        let ri = *right_ids.entry(format_steps(r)).or_insert(next);
        entries.push((li, ri, amp));
    }

    // Union-find over left nodes 0..L and right nodes L..L+R.
    let nl = left_ids.len();
    let mut parent: Vec<usize> = (0..nl + right_ids.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for &(l, r, _) in &entries {
        let (a, b) = (find(&mut parent, l), find(&mut parent, nl + r));
        parent[a] = b;
    }

    let mut blocks: HashMap<usize, Vec<(usize, usize, f64)>> = HashMap::new();
    for &(l, r, amp) in &entries {
        let root = find(&mut parent, l);
        blocks.entry(root).or_default().push((l, r, amp));
    }

    let mut entropy = 0.0;
    for block in blocks.values() {
        let mut rows: HashMap<usize, usize> = HashMap::new();
        let mut cols: HashMap<usize, usize> = HashMap::new();
        for &(l, r, _) in block {
            let k = rows.len();
            rows.entry(l).or_insert(k);
            let k = cols.len();
            cols.entry(r).or_insert(k);
        }
        let mut m = DMatrix::<f64>::zeros(rows.len(), cols.len());
        for &(l, r, amp) in block {
            m[(rows[&l], cols[&r])] += amp;
        }
        for sigma in m.singular_values().iter() {
            let p = sigma * sigma;
            if p > 1e-300 {
                entropy -= p * p.log2();
            }
        }
    }
    entropy
}

/// All eigenvalues of a dense symmetric matrix, ascending.
pub fn eigenvalues(m: DMatrix<f64>) -> Vec<f64> {
    let mut v: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

/// Number of partitions of `a`, by listing them as non-increasing sequences.
pub fn brute_partitions(a: usize) -> u64 {
    fn go(rest: usize, max_part: usize, current: &mut Vec<usize>, found: &mut u64) {
        if rest == 0 {
            *found += 1;
            return;
        }
        for part in (1..=max_part.min(rest)).rev() {
            current.push(part);
            go(rest - part, part, current, found);
            current.pop();
        }
    }
    let mut found = 0;
    go(a, a, &mut Vec::new(), &mut found);
    found
}

pub fn relative(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}
