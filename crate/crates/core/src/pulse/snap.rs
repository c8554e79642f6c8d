// Copyright 2026 The cavityq Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;

use super::model::{average_infidelity, schedule_propagator, sub_block, ControlModel, DispersiveInfo};
use super::schedule::{ControlChannel, PulseSchedule};
use crate::device::snap_min_gate_time_for_chi;
use crate::error::{Error, Result};
use crate::fock::linalg::C64;
use crate::gates;

#[derive(Debug, Clone, PartialEq)]
pub struct SnapPulseOptions {
    /// Segments per period of the fastest tone.
    pub samples_per_period: usize,
    /// Passes that re-simulate the pulse and fold the phase error back into
    /// the commanded phases.
    pub refinements: usize,
    /// Reject durations below `2π/|χ|`.
    pub enforce_bound: bool,
}

impl Default for SnapPulseOptions {
    fn default() -> Self {
        Self { samples_per_period: 24, refinements: 4, enforce_bound: true }
    }
}

fn dispersive(model: &ControlModel) -> Result<DispersiveInfo> {
    model
        .dispersive_info()
        .ok_or_else(|| Error::InvalidArgument("SNAP synthesis needs a dispersive qubit-cavity model".into()))
}

/// Number-selective SNAP: for every level `n` two back-to-back selective
/// π pulses on the qubit at the `n`-photon transition. Their relative phase
/// `π - θ_n` leaves the qubit in `|g>` with geometric phase `θ_n`.
pub fn synthesize_snap_pulse(model: &ControlModel, theta: &[f64], duration: f64) -> Result<PulseSchedule> {
    synthesize_snap_pulse_with(model, theta, duration, &SnapPulseOptions::default())
}

pub fn synthesize_snap_pulse_with(
    model: &ControlModel,
    theta: &[f64],
    duration: f64,
    opts: &SnapPulseOptions,
) -> Result<PulseSchedule> {
    let info = dispersive(model)?;
    let levels = model.shape().dim(1)?;
    if theta.len() != levels {
        return Err(Error::Shape(format!("{} SNAP phases for {levels} cavity levels", theta.len())));
    }
    let bound = snap_min_gate_time_for_chi(info.chi_hz)?;
    if !(duration > 0.0 && duration.is_finite()) {
        return Err(Error::InvalidArgument(format!("SNAP duration {duration}")));
    }
    if opts.enforce_bound && duration < bound * (1.0 - 1e-12) {
        return Err(Error::Bandwidth(format!(
            "SNAP duration {duration:e} s is below the selectivity bound {bound:e} s"
        )));
    }
    let fastest = (0..levels)
        .map(|n| info.transition_hz(n).abs())
        .fold(1.0 / duration, f64::max);
    let segments = ((duration * fastest * opts.samples_per_period.max(4) as f64).ceil() as usize).max(8);
    let dt = duration / segments as f64;

    let mut command = theta.to_vec();
    let mut schedule = build(&info, &command, duration, segments, dt, model.controls().len())?;
    for _ in 0..opts.refinements {
        let achieved = achieved_phases(model, &schedule)?;
        for n in 0..levels {
            command[n] += wrap(theta[n] - achieved[n]);
        }
        schedule = build(&info, &command, duration, segments, dt, model.controls().len())?;
    }
    Ok(schedule)
}

fn build(
    info: &DispersiveInfo,
    phases: &[f64],
    duration: f64,
    segments: usize,
    dt: f64,
    num_controls: usize,
) -> Result<PulseSchedule> {
    let half = duration / 2.0;
    // Hann envelope with area 1/2 on each half: a π rotation.
    let peak = 2.0 / duration;
    let envelope = |t: f64| {
        let local = if t < half { t } else { t - half };
        peak * (PI * local / half).sin().powi(2)
    };
    let freqs: Vec<f64> = (0..phases.len()).map(|n| info.transition_hz(n)).collect();
    // Every other tone pushes transition n away from itself by Ω²/(2Δ);
    // tone n tracks the shifted transition.
    let stark: Vec<f64> = freqs
        .iter()
        .enumerate()
        .map(|(n, fnn)| {
            freqs
                .iter()
                .enumerate()
                .filter(|&(m, fm)| m != n && fm != fnn)
                .map(|(_, fm)| -(2.0 * PI).powi(2) / (2.0 * 2.0 * PI * (fm - fnn)))
                .sum()
        })
        .collect();
    let mut stark_phase = vec![0.0; phases.len()];
    let mut amps = vec![C64::new(0.0, 0.0); segments];
    for (j, amp) in amps.iter_mut().enumerate() {
        let t = (j as f64 + 0.5) * dt;
        let env = envelope(t);
        let second = t >= half;
        for (n, &theta) in phases.iter().enumerate() {
            // Midpoint value of the accumulated shift over [0, t].
            let shifted = stark_phase[n] + stark[n] * env * env * dt / 2.0;
            stark_phase[n] += stark[n] * env * env * dt;
            let phase = if second { PI - theta } else { 0.0 };
            let carrier = -2.0 * PI * freqs[n] * t - shifted;
            *amp += C64::from_polar(env, phase + carrier);
        }
    }
    let mut controls = vec![ControlChannel { carrier_hz: 0.0, amps }];
    for _ in 1..num_controls {
        controls.push(ControlChannel { carrier_hz: 0.0, amps: vec![C64::new(0.0, 0.0); segments] });
    }
    PulseSchedule::new(dt, controls)
}

fn wrap(x: f64) -> f64 {
    let y = (x + PI).rem_euclid(2.0 * PI) - PI;
    if y == -PI {
        PI
    } else {
        y
    }
}

/// Cavity block `<g| U |g>` of a schedule on a dispersive model.
pub fn snap_block(model: &ControlModel, schedule: &PulseSchedule) -> Result<crate::fock::CMatrix> {
    let levels = model.shape().dim(1)?;
    let u = schedule_propagator(model, schedule)?;
    let ground: Vec<usize> = (0..levels).collect();
    Ok(sub_block(u.matrix(), &ground, &ground))
}

fn achieved_phases(model: &ControlModel, schedule: &PulseSchedule) -> Result<Vec<f64>> {
    let block = snap_block(model, schedule)?;
    Ok((0..block.nrows()).map(|n| block[[n, n]].arg()).collect())
}

/// State-averaged infidelity of the schedule's cavity action (qubit starting
/// and ending in `|g>`) against `snap(theta)`.
pub fn snap_pulse_infidelity(model: &ControlModel, schedule: &PulseSchedule, theta: &[f64]) -> Result<f64> {
    let block = snap_block(model, schedule)?;
    let target = gates::snap(theta, block.nrows())?;
    average_infidelity(&block, target.matrix())
}
