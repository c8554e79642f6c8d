// Copyright 2026 The cavityq Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;

use ndarray::Array2;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use super::model::{segment_propagators, ControlModel};
use super::optimizer::{minimize, DescentOptions, Evaluation, TraceRow};
use super::schedule::PulseSchedule;
use crate::error::{Error, Result};
use crate::fock::expm::expm_frechet;
use crate::fock::linalg::{dagger, eye, inner_trace, CMatrix, C64, ONE, ZERO};
use crate::fock::{Operator, StateVector};

/// What a schedule should achieve.
#[derive(Debug, Clone, PartialEq)]
pub enum GrapeTarget {
    /// Match `target` on the listed flat basis columns (all when `None`),
    /// up to a global phase.
    Unitary { target: Operator, subspace: Option<Vec<usize>> },
    /// Steer `initial` to `target` up to a global phase.
    State { initial: StateVector, target: StateVector },
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrapeOptions {
    pub descent: DescentOptions,
    /// Flat basis indices whose final population is penalised.
    pub leakage_levels: Vec<usize>,
    pub leakage_weight: f64,
    /// Standard deviation (Hz) of Gaussian jitter added to the initial
    /// envelopes; zero leaves them untouched.
    pub init_noise_hz: f64,
    pub seed: u64,
}

impl Default for GrapeOptions {
    fn default() -> Self {
        Self {
            descent: DescentOptions { tolerance: 1e-6, ..DescentOptions::default() },
            leakage_levels: Vec::new(),
            leakage_weight: 1.0,
            init_noise_hz: 0.0,
            seed: 0,
        }
    }
}

/// Objective `(1 - Φ) + w L` with its exact gradient.
#[derive(Debug, Clone, PartialEq)]
pub struct GrapeEvaluation {
    pub infidelity: f64,
    pub leakage: f64,
    pub objective: f64,
    /// `[control][segment]`, packing `(∂J/∂Re u, ∂J/∂Im u)` as a complex number.
    pub gradient: Vec<Vec<C64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrapeResult {
    pub schedule: PulseSchedule,
    pub infidelity: f64,
    pub leakage: f64,
    pub objective: f64,
    /// `value` is the objective, `aux` the bare infidelity.
    pub trace: Vec<TraceRow>,
    pub converged: bool,
}

/// `Φ = |Tr(U X)|² / d²`, `L = Tr(R U† Π U) / m`.
struct Terms {
    x: CMatrix,
    d: f64,
    r: CMatrix,
    m: f64,
}

fn terms(model: &ControlModel, target: &GrapeTarget) -> Result<Terms> {
    let n = model.shape().total();
    match target {
        GrapeTarget::Unitary { target, subspace } => {
            model.shape().check_same(target.shape(), "GRAPE target")?;
            let cols: Vec<usize> = subspace.clone().unwrap_or_else(|| (0..n).collect());
            if cols.is_empty() {
                return Err(Error::InvalidArgument("empty GRAPE subspace".into()));
            }
            let mut p = Array2::<C64>::zeros((n, n));
            for &c in &cols {
                if c >= n {
                    return Err(Error::Index(format!("subspace column {c} of dimension {n}")));
                }
                p[[c, c]] = ONE;
            }
            let x = p.dot(&dagger(&target.matrix().view()));
            let k = cols.len() as f64;
            Ok(Terms { x, d: k, r: p, m: k })
        }
        GrapeTarget::State { initial, target } => {
            model.shape().check_same(initial.shape(), "GRAPE initial state")?;
            model.shape().check_same(target.shape(), "GRAPE target state")?;
            let (a, b) = (initial.amplitudes(), target.amplitudes());
            let x = Array2::from_shape_fn((n, n), |(i, j)| a[i] * b[j].conj());
            let r = Array2::from_shape_fn((n, n), |(i, j)| a[i] * a[j].conj());
            Ok(Terms { x, d: 1.0, r, m: 1.0 })
        }
    }
}

fn leakage_projector(n: usize, levels: &[usize]) -> Result<CMatrix> {
    let mut p = Array2::<C64>::zeros((n, n));
    for &l in levels {
        if l >= n {
            return Err(Error::Index(format!("leakage level {l} of dimension {n}")));
        }
        p[[l, l]] = ONE;
    }
    Ok(p)
}

/// Exact objective and gradient through Fréchet derivatives of every
/// segment exponential.
pub fn grape_objective(
    model: &ControlModel,
    target: &GrapeTarget,
    schedule: &PulseSchedule,
    leakage_levels: &[usize],
    leakage_weight: f64,
) -> Result<GrapeEvaluation> {
    let n = model.shape().total();
    let t = terms(model, target)?;
    let pi_leak = leakage_projector(n, leakage_levels)?;
    let props = segment_propagators(model, schedule)?;
    let segs = props.len();

    // forward[j] = U_{j-1} ... U_0
    let mut forward = Vec::with_capacity(segs + 1);
    forward.push(eye(n));
    for p in &props {
        let next = p.dot(forward.last().unwrap());
        forward.push(next);
    }
    let u = forward[segs].clone();
    let g = inner_trace(&dagger(&u.view()), &t.x);
    let phi = g.norm_sqr() / (t.d * t.d);
    let y = t.r.dot(&dagger(&u.view())).dot(&pi_leak);
    let leakage = if leakage_levels.is_empty() { 0.0 } else { inner_trace(&dagger(&u.view()), &y).re / t.m };
    let infidelity = (1.0 - phi).max(0.0);
    let objective = infidelity + leakage_weight * leakage;

    // dJ = Re Tr(dU_j C_j) with C_j = F_j (a X + b Y) B_j.
    let a = g.conj() * (-2.0 / (t.d * t.d));
    let b = 2.0 * leakage_weight / t.m;
    let mix = &t.x * a + &(&y * C64::new(b, 0.0));
    let mut backward = vec![eye(n); segs];
    for j in (0..segs.saturating_sub(1)).rev() {
        backward[j] = backward[j + 1].dot(&props[j + 1]);
    }
    let step = C64::new(0.0, -schedule.dt_s);
    let per_segment: Vec<Vec<C64>> = (0..segs)
        .into_par_iter()
        .map(|j| -> Result<Vec<C64>> {
            let c = forward[j].dot(&mix).dot(&backward[j]);
            let gen = model.segment_hamiltonian(schedule, j) * step;
            let mut out = Vec::with_capacity(model.controls().len());
            for k in 0..model.controls().len() {
                let (dre, dim) = model.control_derivatives(schedule, k, j);
                let (_, lre) = expm_frechet(&gen, &(dre * step))?;
                let (_, lim) = expm_frechet(&gen, &(dim * step))?;
                out.push(C64::new(trace_product(&lre, &c), trace_product(&lim, &c)));
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let gradient = (0..model.controls().len())
        .map(|k| per_segment.iter().map(|row| row[k]).collect())
        .collect();
    Ok(GrapeEvaluation { infidelity, leakage, objective, gradient })
}

/// `Re Tr(L C)`.
fn trace_product(l: &CMatrix, c: &CMatrix) -> f64 {
    let n = l.nrows();
    let mut acc = ZERO;
    for i in 0..n {
        for k in 0..n {
            acc += l[[i, k]] * c[[k, i]];
        }
    }
    acc.re
}

/// Optimiser coordinates are rotation angles per segment, `2π dt u`.
fn pack(schedule: &PulseSchedule) -> Vec<f64> {
    let s = 2.0 * PI * schedule.dt_s;
    schedule
        .controls
        .iter()
        .flat_map(|c| c.amps.iter().flat_map(move |a| [a.re * s, a.im * s]))
        .collect()
}

fn unpack(template: &PulseSchedule, x: &[f64]) -> PulseSchedule {
    let s = 2.0 * PI * template.dt_s;
    let mut out = template.clone();
    let mut it = x.chunks_exact(2);
    for c in &mut out.controls {
        for a in &mut c.amps {
            let p = it.next().expect("packed length matches schedule");
            *a = C64::new(p[0] / s, p[1] / s);
        }
    }
    out
}

/// Gradient descent on piecewise-constant envelopes. Deterministic for a
/// fixed seed; `converged` is false when the line search stalls or the
/// iteration budget runs out before the tolerance is met.
pub fn grape_optimize(
    model: &ControlModel,
    target: &GrapeTarget,
    schedule0: &PulseSchedule,
    opts: &GrapeOptions,
) -> Result<GrapeResult> {
    model.check_schedule(schedule0)?;
    let mut start = schedule0.clone();
    if opts.init_noise_hz > 0.0 {
        let normal = Normal::new(0.0, opts.init_noise_hz)
            .map_err(|e| Error::InvalidArgument(format!("initial noise: {e}")))?;
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        for c in &mut start.controls {
            for a in &mut c.amps {
                *a += C64::new(normal.sample(&mut rng), normal.sample(&mut rng));
            }
        }
    }
    let scale = 2.0 * PI * start.dt_s;
    let eval = |x: &[f64]| -> Result<Evaluation> {
        let s = unpack(&start, x);
        let e = grape_objective(model, target, &s, &opts.leakage_levels, opts.leakage_weight)?;
        let gradient = e.gradient.iter().flatten().flat_map(|g| [g.re / scale, g.im / scale]).collect();
        Ok(Evaluation { value: e.objective, gradient, aux: e.infidelity })
    };
    let res = minimize(eval, pack(&start), &opts.descent)?;
    let schedule = unpack(&start, &res.x);
    let last = grape_objective(model, target, &schedule, &opts.leakage_levels, opts.leakage_weight)?;
    Ok(GrapeResult {
        schedule,
        infidelity: last.infidelity,
        leakage: last.leakage,
        objective: last.objective,
        trace: res.trace,
        converged: res.converged,
    })
}
