use std::collections::HashMap;
use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::cheeger::in_bottleneck;
use crate::walks::{Step, Walk, WalkEnsemble};
use crate::{Error, ModelParams, Result};

/// Mutable walk state of a running chain.
#[derive(Debug, Clone)]
pub struct ChainState {
    steps: Vec<Step>,
    heights: Vec<u32>,
    area: u64,
}

impl ChainState {
    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn heights(&self) -> &[u32] {
        &self.heights
    }

    pub fn area(&self) -> u64 {
        self.area
    }

    pub fn midpoint_height(&self) -> u32 {
        self.heights[self.steps.len() / 2]
    }

    pub fn in_bottleneck(&self) -> bool {
        in_bottleneck(&self.steps, &self.heights)
    }

    pub fn to_walk(&self) -> Walk {
        Walk::validate(&self.steps, usize::from(u8::MAX)).expect("chain state is a valid walk")
    }
}

/// Receives the state after every step of a run.
pub trait Observer {
    fn observe(&mut self, step: u64, state: &ChainState);
}

/// Visit counts over an enumerated ensemble.
#[derive(Debug)]
pub struct EnsembleVisits<'a> {
    ensemble: &'a WalkEnsemble,
    counts: Vec<u64>,
    total: u64,
}

impl<'a> EnsembleVisits<'a> {
    pub fn new(ensemble: &'a WalkEnsemble) -> Self {
        Self {
            ensemble,
            counts: vec![0; ensemble.len()],
            total: 0,
        }
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn empirical(&self) -> Vec<f64> {
        let total = self.total.max(1) as f64;
        self.counts.iter().map(|&c| c as f64 / total).collect()
    }
}

impl Observer for EnsembleVisits<'_> {
    fn observe(&mut self, _step: u64, state: &ChainState) {
        let id = self
            .ensemble
            .id_of(state.steps())
            .expect("visited state belongs to the ensemble");
        self.counts[id] += 1;
        self.total += 1;
    }
}

/// Streams `step,area,midpoint_height,in_B` rows every `stride` steps.
pub struct CsvTrace<W: Write> {
    out: W,
    stride: u64,
    error: Option<io::Error>,
}

impl<W: Write> CsvTrace<W> {
    pub fn new(mut out: W, stride: u64) -> io::Result<Self> {
        writeln!(out, "step,area,midpoint_height,in_B")?;
        Ok(Self {
            out,
            stride: stride.max(1),
            error: None,
        })
    }

    pub fn finish(mut self) -> io::Result<W> {
        if let Some(e) = self.error.take() {
            return Err(e);
        }
        self.out.flush()?;
        Ok(self.out)
    }
}

impl<W: Write> Observer for CsvTrace<W> {
    fn observe(&mut self, step: u64, state: &ChainState) {
        if self.error.is_some() || step % self.stride != 0 {
            return;
        }
        if let Err(e) = writeln!(
            self.out,
            "{},{},{},{}",
            step,
            state.area(),
            state.midpoint_height(),
            state.in_bottleneck() as u8
        ) {
            self.error = Some(e);
        }
    }
}

#[derive(Debug, Clone)]
pub struct McmcRun {
    pub seed: u64,
    pub steps: u64,
    pub accepted: u64,
    pub final_walk: Walk,
    /// SHA-256 over the sequence of accepted moves; equal digests mean equal
    /// trajectories.
    pub trajectory_digest: String,
}

/// Simulates `P` exactly: pick a bond uniformly among `2n − 1` and a color
/// slot uniformly among `s`; the move at that bond tied to that slot (if
/// any) fires with probability `(2n−1)/(2n)`, times `1/t²` when it lowers
/// the area. For `t < 1`, where `P` is not stochastic, raising moves get
/// the extra factor `t²` instead, which leaves `π` stationary.
pub fn mcmc_sample(
    params: &ModelParams,
    steps: u64,
    seed: u64,
    start: &Walk,
    observers: &mut [&mut dyn Observer],
) -> Result<McmcRun> {
    if start.steps().len() != params.len() {
        return Err(Error::InvalidStart(format!(
            "start has {} sites, expected {}",
            start.steps().len(),
            params.len()
        )));
    }
    Walk::validate(start.steps(), params.s).map_err(|e| Error::InvalidStart(e.to_string()))?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = ChainState {
        steps: start.steps().to_vec(),
        heights: start.heights().to_vec(),
        area: start.area(),
    };
    let bonds = params.len() - 1;
    let base = bonds as f64 / params.len() as f64;
    let t2 = params.t * params.t;
    // For t < 1 the rates of P exceed one; scaling both keeps their ratio t².
    let (accept_up, accept_down) = if t2 >= 1.0 { (base, base / t2) } else { (base * t2, base) };
    let mut hasher = Sha256::new();
    let mut accepted = 0u64;

    for step in 1..=steps {
        let i = rng.gen_range(0..bonds);
        let slot = rng.gen_range(1..=params.s) as u8;
        let u: f64 = rng.gen();
        if let Some((a, b, delta)) = slot_move(state.steps[i], state.steps[i + 1], slot) {
            let threshold = if delta > 0 { accept_up } else { accept_down };
            if u < threshold {
                state.steps[i] = a;
                state.steps[i + 1] = b;
                state.heights[i + 1] = (state.heights[i] as i32 + a.dh()) as u32;
                state.area = (state.area as i64 + delta as i64) as u64;
                accepted += 1;
                hasher.update(step.to_le_bytes());
                hasher.update([i as u8, slot]);
            }
        }
        for obs in observers.iter_mut() {
            obs.observe(step, &state);
        }
    }

    let digest = hasher.finalize();
    Ok(McmcRun {
        seed,
        steps,
        accepted,
        final_walk: Walk::validate(&state.steps, params.s).expect("chain preserves validity"),
        trajectory_digest: digest.iter().map(|b| format!("{b:02x}")).collect(),
    })
}

/// The move at a bond tied to color slot `k`: peak creation with color `k`
/// from `00`, otherwise the unique move of the bond if its step has color `k`.
fn slot_move(a: Step, b: Step, k: u8) -> Option<(Step, Step, i8)> {
    use Step::*;
    match (a, b) {
        (Flat, Flat) => Some((Up(k), Down(k), 1)),
        (Flat, Up(c)) if c == k => Some((Up(c), Flat, 1)),
        (Up(c), Flat) if c == k => Some((Flat, Up(c), -1)),
        (Flat, Down(c)) if c == k => Some((Down(c), Flat, -1)),
        (Down(c), Flat) if c == k => Some((Flat, Down(c), 1)),
        (Up(c), Down(d)) if c == k && d == k => Some((Flat, Flat, -1)),
        _ => None,
    }
}

/// `½ Σ |p − q|`.
pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

/// Tallies of states keyed by their steps, for chains too large to enumerate.
#[derive(Debug, Default)]
pub struct StateHistogram {
    pub counts: HashMap<Vec<Step>, u64>,
}

impl Observer for StateHistogram {
    fn observe(&mut self, _step: u64, state: &ChainState) {
        *self.counts.entry(state.steps().to_vec()).or_default() += 1;
    }
}
