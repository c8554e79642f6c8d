// Copyright 2026 The cavityq Authors
// SPDX-License-Identifier: Apache-2.0

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::channel::NoiseChannel;
use super::codes::{mean_photon_number, subsystem_parity};
use crate::error::{Error, Result};
use crate::fock::StateVector;

/// A non-identity Kraus outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Jump {
    pub step: usize,
    pub kraus: usize,
}

/// Per-step observables of the channel's mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord {
    pub step: usize,
    pub jump_count: usize,
    pub parity: f64,
    pub mean_n: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub seed: u64,
    pub state: StateVector,
    pub jumps: Vec<Jump>,
    /// Row 0 describes the input; row `s` the state after `s` steps.
    pub records: Vec<StepRecord>,
}

fn record(channel: &NoiseChannel, psi: &StateVector, step: usize, jump_count: usize) -> Result<StepRecord> {
    Ok(StepRecord {
        step,
        jump_count,
        parity: subsystem_parity(psi, channel.mode())?,
        mean_n: mean_photon_number(psi, channel.mode())?,
    })
}

/// Monte Carlo unravelling: at each step draw Kraus outcome `k` with
/// probability `|K_k psi|^2` and renormalise.
pub fn apply_channel_trajectory(
    channel: &NoiseChannel,
    psi: &StateVector,
    steps: usize,
    seed: u64,
) -> Result<Trajectory> {
    channel.shape().check_same(psi.shape(), "trajectory input")?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = psi.clone().normalized()?;
    let mut jumps = Vec::new();
    let mut records = vec![record(channel, &state, 0, 0)?];
    for step in 1..=steps {
        let r: f64 = rng.random();
        let mut acc = 0.0;
        let mut chosen = None;
        let mut last = None;
        for (k, op) in channel.kraus().iter().enumerate() {
            let cand = op.apply(&state)?;
            let p = cand.norm_sqr();
            if p <= 0.0 {
                continue;
            }
            acc += p;
            last = Some((k, cand));
            if r < acc {
                chosen = last.take();
                break;
            }
        }
        // Rounding can leave r just above the accumulated total.
        let (k, next) = chosen
            .or(last)
            .ok_or_else(|| Error::Degenerate(format!("every Kraus branch vanished at step {step}")))?;
        state = next.normalized()?;
        if k != 0 {
            jumps.push(Jump { step, kraus: k });
        }
        records.push(record(channel, &state, step, jumps.len())?);
    }
    Ok(Trajectory { seed, state, jumps, records })
}

/// One trajectory per seed, returned in seed order.
pub fn run_ensemble(
    channel: &NoiseChannel,
    psi: &StateVector,
    steps: usize,
    seeds: &[u64],
) -> Result<Vec<Trajectory>> {
    seeds
        .par_iter()
        .map(|&s| apply_channel_trajectory(channel, psi, steps, s))
        .collect()
}
