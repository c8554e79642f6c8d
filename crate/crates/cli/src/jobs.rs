// Copyright 2026 The cavityq Authors
// SPDX-License-Identifier: Apache-2.0

//! Experiment configs read by the subcommands and the tables they produce.

use serde::Deserialize;
use serde_json::{json, Value};

use cavityq::device::{self, DeviceParams};
use cavityq::fock::{HilbertShape, Operator, StateVector, C64};
use cavityq::gates::{apply_circuit, circuit_unitary, Circuit, DisplacementConvention, GateSpec};
use cavityq::hep::{otoc_series, trotter_convergence, QuditHamiltonian};
use cavityq::noise::{
    apply_photon_losses, binomial_codewords, cat_encode, mean_photon_number, parity,
    photon_loss_channel, run_ensemble, subspace_weight, CatBasis,
};
use cavityq::pulse::{grape_optimize, ControlModel, DescentOptions, GrapeOptions, GrapeTarget, PulseSchedule};
use cavityq::qst::{detuning_sweep, simulate_transfer, QstConfig, SMALL_DETUNING};

use crate::error::{CliError, CliResult};
use crate::output::{Cell, Table};

/// Device report printed by `device`.
pub fn device_report(params: &DeviceParams) -> CliResult<Value> {
    params.validate()?;
    let mf = device::max_fock(params);
    Ok(json!({
        "detuning_hz": params.detuning(),
        "chi_hz": device::chi(params)?,
        "critical_photon_number": device::critical_photon_number(params)?,
        "max_fock": mf.levels,
        "max_fock_advisory": mf.advisory,
        "snap_min_gate_time_s": device::snap_min_gate_time(params)?,
    }))
}

/// Levels such as `"0,3"`; empty means all zeros.
pub fn parse_levels(spec: Option<&str>, shape: &HilbertShape) -> CliResult<Vec<usize>> {
    match spec {
        None => Ok(vec![0; shape.num_subsystems()]),
        Some(s) => s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| CliError::usage(format!("--init: '{t}' is not a level")))
            })
            .collect(),
    }
}

/// Basis-state probabilities above 1e-12 after running `circuit` on `init`.
pub fn run_circuit(circuit: &Circuit, init: &[usize]) -> CliResult<(Table, Vec<String>)> {
    let psi = StateVector::basis(circuit.shape.clone(), init)?;
    let out = apply_circuit(circuit, &psi)?;
    let mut table = Table::new("run", &["index", "probability"]);
    for (i, p) in out.state.probabilities().into_iter().enumerate() {
        if p > 1e-12 {
            table.push(vec![i.into(), p.into()]);
        }
    }
    table.note("initial_levels", Cell::Text(format!("{init:?}").replace(' ', "")));
    let warnings = out
        .warnings
        .iter()
        .map(|w| format!("gate {} truncation leakage {:.3e}", w.gate, w.leakage))
        .collect();
    Ok((table, warnings))
}

fn default_trace() -> bool {
    true
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QstJob {
    pub transfer: QstConfig,
    /// Defaults to 21 points across `|δω| ≤ 0.05 κ`.
    #[serde(default)]
    pub detunings_hz: Option<Vec<f64>>,
    #[serde(default = "default_trace")]
    pub trace: bool,
}

pub fn qst(job: &QstJob) -> CliResult<Vec<Table>> {
    let cfg = &job.transfer;
    let deltas = job.detunings_hz.clone().unwrap_or_else(|| {
        (-10..=10).map(|k| k as f64 / 10.0 * SMALL_DETUNING * cfg.kappa_hz).collect()
    });
    let sweep = detuning_sweep(cfg, &deltas)?;
    let single = simulate_transfer(cfg)?;

    let mut table = Table::new("qst", &["delta_omega_hz", "eta", "sqrt_one_minus_eta"]);
    for r in &sweep.rows {
        table.push(vec![r.delta_omega_hz.into(), r.eta.into(), r.sqrt_one_minus_eta.into()]);
    }
    table.note("eta", single.eta);
    table.note("fidelity", single.fidelity);
    table.note("fit_limit_hz", sweep.fit_limit_hz);
    if let Some(fit) = sweep.fit {
        table.note("fit_slope", fit.slope);
        table.note("fit_intercept", fit.intercept);
        table.note("fit_r_squared", fit.r_squared);
    }
    let mut tables = vec![table];
    if job.trace {
        let mut trace = Table::new("qst_trace", &["t_s", "re_a", "im_a", "re_b", "im_b", "channel_loss"]);
        for k in 0..single.times.len() {
            let (a, b) = (single.emitter[k], single.receiver[k]);
            trace.push(vec![
                single.times[k].into(),
                a.re.into(),
                a.im.into(),
                b.re.into(),
                b.im.into(),
                single.channel_loss[k].into(),
            ]);
        }
        tables.push(trace);
    }
    Ok(tables)
}

fn default_iterations() -> usize {
    500
}

fn default_learning_rate() -> f64 {
    0.1
}

fn default_tolerance() -> f64 {
    1e-6
}

fn default_weight() -> f64 {
    1.0
}

/// Target of a GRAPE run on `qubit ⊗ mode`; levels are `[qubit, photons]`.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GrapeTargetSpec {
    /// Unitary of a gate list, matched on `subspace` (all levels if absent).
    Gates {
        gates: Vec<GateSpec>,
        #[serde(default)]
        subspace: Option<Vec<[usize; 2]>>,
    },
    State {
        initial: [usize; 2],
        target: [usize; 2],
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GrapeJob {
    pub chi_hz: f64,
    #[serde(default)]
    pub chi_prime_hz: f64,
    pub mode_dim: usize,
    pub target: GrapeTargetSpec,
    pub segments: usize,
    pub dt_s: f64,
    /// One carrier per control (qubit, cavity); zeros by default.
    #[serde(default)]
    pub carriers_hz: Option<Vec<f64>>,
    #[serde(default = "default_iterations")]
    pub iterations: usize,
    #[serde(default = "default_learning_rate")]
    pub learning_rate: f64,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default)]
    pub init_noise_hz: f64,
    #[serde(default)]
    pub leakage_levels: Vec<[usize; 2]>,
    #[serde(default = "default_weight")]
    pub leakage_weight: f64,
}

pub fn grape(job: &GrapeJob, seed: u64) -> CliResult<Vec<Table>> {
    let model = ControlModel::dispersive(job.chi_hz, job.chi_prime_hz, job.mode_dim)?;
    let shape = model.shape().clone();
    let flat = |l: &[usize; 2]| shape.flat_index(l).map_err(CliError::from);
    let target = match &job.target {
        GrapeTargetSpec::Gates { gates, subspace } => {
            let circuit = Circuit::new(shape.clone(), gates.clone());
            let u = circuit_unitary(&circuit)?.value;
            let subspace = match subspace {
                Some(levels) => Some(levels.iter().map(flat).collect::<CliResult<Vec<_>>>()?),
                None => None,
            };
            GrapeTarget::Unitary { target: u, subspace }
        }
        GrapeTargetSpec::State { initial, target } => GrapeTarget::State {
            initial: StateVector::basis(shape.clone(), initial)?,
            target: StateVector::basis(shape.clone(), target)?,
        },
    };
    let carriers = job.carriers_hz.clone().unwrap_or_else(|| vec![0.0; model.controls().len()]);
    let schedule0 = PulseSchedule::zeros(job.dt_s, job.segments, &carriers)?;
    let opts = GrapeOptions {
        descent: DescentOptions {
            iterations: job.iterations,
            learning_rate: job.learning_rate,
            tolerance: job.tolerance,
            ..DescentOptions::default()
        },
        leakage_levels: job.leakage_levels.iter().map(flat).collect::<CliResult<Vec<_>>>()?,
        leakage_weight: job.leakage_weight,
        init_noise_hz: job.init_noise_hz,
        seed,
    };
    let result = grape_optimize(&model, &target, &schedule0, &opts)?;

    let mut trace = Table::new("grape_trace", &["iteration", "objective", "infidelity", "step"]);
    for r in &result.trace {
        trace.push(vec![r.iteration.into(), r.value.into(), r.aux.into(), r.step.into()]);
    }
    trace.note("converged", Cell::Text(result.converged.to_string()));
    trace.note("infidelity", result.infidelity);
    trace.note("leakage", result.leakage);
    let mut pulse = Table::new("grape_pulse", &["segment", "t_s", "control", "re_hz", "im_hz"]);
    let dt = result.schedule.dt_s;
    for (k, ch) in result.schedule.controls.iter().enumerate() {
        for (j, u) in ch.amps.iter().enumerate() {
            pulse.push(vec![j.into(), (j as f64 * dt).into(), k.into(), u.re.into(), u.im.into()]);
        }
    }
    Ok(vec![trace, pulse])
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CodeSpec {
    /// Logical `c_g |C+_alpha> + c_e |C+_{i alpha}>`, default `c = (1, 0)`.
    Cat {
        alpha: C64,
        #[serde(default)]
        logical: Option<[C64; 2]>,
    },
    /// Logical `c_0 (|0>+|4>)/√2 + c_1 |2>`, default `c = (1, 1)/√2`.
    Binomial {
        #[serde(default)]
        logical: Option<[C64; 2]>,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrajectorySpec {
    pub t1_s: f64,
    pub dt_s: f64,
    pub steps: usize,
    pub count: usize,
}

fn default_max_losses() -> usize {
    4
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeJob {
    pub code: CodeSpec,
    pub dim: usize,
    #[serde(default = "default_max_losses")]
    pub max_losses: usize,
    #[serde(default)]
    pub trajectories: Option<TrajectorySpec>,
}

pub fn code(job: &CodeJob, seed: u64) -> CliResult<Vec<Table>> {
    let (psi, family, leakage) = match &job.code {
        CodeSpec::Cat { alpha, logical } => {
            let [cg, ce] = logical.unwrap_or([C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
            let psi = cat_encode(cg, ce, *alpha, job.dim)?;
            let basis = CatBasis::new(*alpha, job.dim)?;
            (psi.value, vec![basis.value.plus_real, basis.value.plus_imag], psi.leakage.max(basis.leakage))
        }
        CodeSpec::Binomial { logical } => {
            let s = std::f64::consts::FRAC_1_SQRT_2;
            let [c0, c1] = logical.unwrap_or([C64::new(s, 0.0), C64::new(s, 0.0)]);
            let (zero, one) = binomial_codewords(job.dim)?;
            let amps = zero.amplitudes() * c0 + one.amplitudes() * c1;
            let psi = StateVector::new(zero.shape().clone(), amps)?.normalized()?;
            (psi, vec![zero, one], 0.0)
        }
    };
    let mut table = Table::new("code", &["losses", "parity", "mean_photon_number", "code_weight"]);
    for k in 0..=job.max_losses {
        let lost = match apply_photon_losses(&psi, 0, k) {
            Ok(s) => s,
            Err(cavityq::Error::Degenerate(_)) => break,
            Err(e) => return Err(e.into()),
        };
        table.push(vec![
            k.into(),
            parity(&lost).into(),
            mean_photon_number(&lost, 0)?.into(),
            subspace_weight(&lost, &family)?.into(),
        ]);
    }
    table.note("truncation_leakage", leakage);
    let mut tables = vec![table];
    if let Some(t) = &job.trajectories {
        let channel = photon_loss_channel(t.t1_s, t.dt_s, job.dim)?;
        let seeds: Vec<u64> = (0..t.count as u64).map(|i| seed.wrapping_add(i)).collect();
        let ensemble = run_ensemble(&channel, &psi, t.steps, &seeds)?;
        let mut traj =
            Table::new("code_trajectories", &["trajectory", "seed", "step", "jump_count", "parity", "mean_n"]);
        for (i, tr) in ensemble.iter().enumerate() {
            for r in &tr.records {
                traj.push(vec![
                    i.into(),
                    tr.seed.into(),
                    r.step.into(),
                    r.jump_count.into(),
                    r.parity.into(),
                    r.mean_n.into(),
                ]);
            }
        }
        tables.push(traj);
    }
    Ok(tables)
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrotterJob {
    pub hamiltonian: QuditHamiltonian,
    pub t_total_s: f64,
    pub steps: Vec<usize>,
    #[serde(default)]
    pub initial_level: usize,
}

pub fn trotter(job: &TrotterJob) -> CliResult<Vec<Table>> {
    let psi = StateVector::fock(job.hamiltonian.dim(), job.initial_level)?;
    let conv = trotter_convergence(&job.hamiltonian, job.t_total_s, &job.steps, &psi)?;
    let mut table = Table::new("trotter", &["steps", "dt", "infidelity"]);
    for r in &conv.rows {
        table.push(vec![r.steps.into(), r.dt.into(), r.infidelity.into()]);
    }
    table.note("error_order", conv.fit.slope);
    table.note("error_order_r_squared", conv.fit.r_squared);
    Ok(vec![table])
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OtocJob {
    pub hamiltonian: QuditHamiltonian,
    /// Single-mode gates; `target` must be 0.
    pub w: GateSpec,
    pub v: GateSpec,
    pub times_s: Vec<f64>,
    #[serde(default)]
    pub initial_level: usize,
}

fn single_mode_operator(gate: &GateSpec, shape: &HilbertShape, what: &str) -> CliResult<Operator> {
    if gate.targets() != [0] {
        return Err(CliError::parse(format!("{what}: OTOC operators act on subsystem 0 only")));
    }
    let m = gate.local_matrix(shape, DisplacementConvention::Standard)?;
    Ok(Operator::new(shape.clone(), m.value)?)
}

pub fn otoc(job: &OtocJob) -> CliResult<Vec<Table>> {
    let shape = job.hamiltonian.shape()?;
    let w = single_mode_operator(&job.w, &shape, "w")?;
    let v = single_mode_operator(&job.v, &shape, "v")?;
    let psi = StateVector::fock(job.hamiltonian.dim(), job.initial_level)?;
    let series = otoc_series(&w, &v, &job.hamiltonian, &job.times_s, Some(&psi))?;
    let mut table = Table::new("otoc", &["t", "re_otoc", "im_otoc", "abs_otoc"]);
    for r in &series {
        table.push(vec![r.t.into(), r.value.re.into(), r.value.im.into(), r.value.norm().into()]);
    }
    Ok(vec![table])
}
