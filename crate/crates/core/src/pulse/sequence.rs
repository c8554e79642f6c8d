// Copyright 2026 The cavityq Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;

use ndarray::Array1;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::optimizer::{minimize, DescentOptions, Evaluation, TraceRow};
use crate::error::{Error, Result};
use crate::fock::expm::{expm, expm_frechet};
use crate::fock::linalg::{CMatrix, C64, I, ZERO};
use crate::fock::{self, HilbertShape, StateVector};
use crate::gates::{apply_circuit, Circuit, GateSpec};

/// Settings for steering the vacuum to a target with alternating
/// displacements and SNAP gates.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceOptions {
    /// Number of (displacement, SNAP) pairs; one more displacement closes the sequence.
    pub layers: usize,
    /// Levels simulated above the target's support; their population is penalised.
    pub guard_levels: usize,
    pub leakage_weight: f64,
    pub descent: DescentOptions,
    /// Standard deviation of the initial displacement amplitudes.
    pub init_alpha: f64,
}

impl Default for SequenceOptions {
    fn default() -> Self {
        Self {
            layers: 8,
            guard_levels: 1,
            leakage_weight: 1.0,
            descent: DescentOptions { iterations: 2000, learning_rate: 0.1, tolerance: 1e-5, ..DescentOptions::default() },
            init_alpha: 0.3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SequenceResult {
    pub circuit: Circuit,
    pub state: StateVector,
    pub infidelity: f64,
    pub leakage: f64,
    /// `value` is the penalised objective, `aux` the bare infidelity.
    pub trace: Vec<TraceRow>,
    pub converged: bool,
}

enum Gate {
    Disp(C64),
    Snap(Vec<f64>),
}

struct Ladder {
    a: CMatrix,
    ad: CMatrix,
}

impl Ladder {
    fn generator(&self, alpha: C64) -> CMatrix {
        &self.ad * alpha - &(&self.a * alpha.conj())
    }
}

fn decode(x: &[f64], layers: usize, dim: usize) -> Vec<Gate> {
    let mut gates = Vec::with_capacity(2 * layers + 1);
    let mut i = 0;
    for _ in 0..layers {
        gates.push(Gate::Disp(C64::new(x[i], x[i + 1])));
        gates.push(Gate::Snap(x[i + 2..i + 2 + dim].to_vec()));
        i += dim + 2;
    }
    gates.push(Gate::Disp(C64::new(x[i], x[i + 1])));
    gates
}

fn apply(gate: &Gate, lad: &Ladder, v: &Array1<C64>) -> Result<(Array1<C64>, Option<CMatrix>)> {
    Ok(match gate {
        Gate::Disp(alpha) => {
            let d = expm(&lad.generator(*alpha))?;
            (d.dot(v), Some(d))
        }
        Gate::Snap(theta) => (Array1::from_shape_fn(v.len(), |n| v[n] * C64::from_polar(1.0, theta[n])), None),
    })
}

/// Objective `1 - |<t|psi>|² + w P_guard` and its gradient.
fn evaluate(x: &[f64], target: &Array1<C64>, layers: usize, guard_from: usize, w: f64, lad: &Ladder) -> Result<Evaluation> {
    let dim = target.len();
    let gates = decode(x, layers, dim);
    let mut inputs = Vec::with_capacity(gates.len());
    let mut mats = Vec::with_capacity(gates.len());
    let mut psi = Array1::from_elem(dim, ZERO);
    psi[0] = C64::new(1.0, 0.0);
    for g in &gates {
        let (next, m) = apply(g, lad, &psi)?;
        inputs.push(psi);
        mats.push(m);
        psi = next;
    }
    let overlap: C64 = target.iter().zip(psi.iter()).map(|(t, p)| t.conj() * p).sum();
    let infidelity = (1.0 - overlap.norm_sqr()).max(0.0);
    let leak: f64 = psi.iter().skip(guard_from).map(|c| c.norm_sqr()).sum();
    let value = infidelity + w * leak;

    // Row vector r with dJ = Re(r · dG ψ_in), propagated backwards.
    let mut r: Array1<C64> = Array1::from_shape_fn(dim, |i| {
        let mut v = target[i].conj() * (overlap.conj() * -2.0);
        if i >= guard_from {
            v += psi[i].conj() * (2.0 * w);
        }
        v
    });
    let mut grad = vec![0.0; x.len()];
    let mut offset = x.len();
    for (idx, g) in gates.iter().enumerate().rev() {
        let input = &inputs[idx];
        match g {
            Gate::Disp(alpha) => {
                offset -= 2;
                let gen = lad.generator(*alpha);
                let dirs = [&lad.ad - &lad.a, (&lad.ad + &lad.a) * I];
                for (k, e) in dirs.iter().enumerate() {
                    let (_, l) = expm_frechet(&gen, e)?;
                    grad[offset + k] = r.dot(&l.dot(input)).re;
                }
                r = r.dot(mats[idx].as_ref().expect("displacement matrix"));
            }
            Gate::Snap(theta) => {
                offset -= dim;
                for n in 0..dim {
                    let phase = C64::from_polar(1.0, theta[n]);
                    grad[offset + n] = (r[n] * I * phase * input[n]).re;
                    r[n] *= phase;
                }
            }
        }
    }
    Ok(Evaluation { value, gradient: grad, aux: infidelity })
}

/// Optimise a SNAP/displacement sequence taking the vacuum to `target`.
/// The target lives on its own levels; `guard_levels` extra levels are
/// simulated and penalised.
pub fn optimize_snap_displacement(target: &StateVector, opts: &SequenceOptions, seed: u64) -> Result<SequenceResult> {
    if target.shape().num_subsystems() != 1 {
        return Err(Error::Shape("sequence targets must be single-mode states".into()));
    }
    if opts.layers == 0 {
        return Err(Error::InvalidArgument("need at least one layer".into()));
    }
    let support = target.dim();
    let dim = support + opts.guard_levels;
    let mut padded = target.clone().normalized()?.into_amplitudes().to_vec();
    padded.resize(dim, ZERO);
    let t = Array1::from(padded);
    let lad = {
        let a = fock::annihilation(dim)?.into_matrix();
        let ad = a.t().mapv(|z| z.conj());
        Ladder { a, ad }
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, opts.init_alpha).map_err(|e| Error::InvalidArgument(format!("init_alpha: {e}")))?;
    let mut x0 = Vec::with_capacity(opts.layers * (dim + 2) + 2);
    for _ in 0..opts.layers {
        x0.push(normal.sample(&mut rng));
        x0.push(normal.sample(&mut rng));
        for _ in 0..dim {
            x0.push(rng.random::<f64>() * 2.0 * PI);
        }
    }
    x0.push(normal.sample(&mut rng));
    x0.push(normal.sample(&mut rng));

    let res = minimize(
        |x| evaluate(x, &t, opts.layers, support, opts.leakage_weight, &lad),
        x0,
        &opts.descent,
    )?;

    let shape = HilbertShape::single(dim)?;
    let gates = decode(&res.x, opts.layers, dim)
        .into_iter()
        .map(|g| match g {
            Gate::Disp(alpha) => GateSpec::Displacement { target: 0, alpha },
            Gate::Snap(theta) => GateSpec::Snap { target: 0, theta },
        })
        .collect();
    let circuit = Circuit::new(shape.clone(), gates);
    let state = apply_circuit(&circuit, &StateVector::fock(dim, 0)?)?.state;
    let target_padded = StateVector::new(shape, t)?;
    let infidelity = (1.0 - fock::fidelity(&target_padded, &state)?).max(0.0);
    let leakage = state.amplitudes().iter().skip(support).map(|c| c.norm_sqr()).sum();
    Ok(SequenceResult { circuit, state, infidelity, leakage, trace: res.trace, converged: res.converged })
}

/// Haar-random pure state on `dim` levels.
pub fn haar_random_state(dim: usize, seed: u64) -> Result<StateVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, 1.0).expect("unit normal");
    let amps = (0..dim).map(|_| C64::new(normal.sample(&mut rng), normal.sample(&mut rng))).collect();
    StateVector::from_vec(HilbertShape::single(dim)?, amps)?.normalized()
}
