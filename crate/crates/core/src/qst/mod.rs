// Copyright 2026 The cavityq Authors
// SPDX-License-Identifier: Apache-2.0

//! Pitch-and-catch state transfer between two nodes joined by a directional
//! channel, in the single-excitation cascaded picture.

mod transfer;
mod waveform;

pub use transfer::{
    detuning_sweep, raman_emission, simulate_transfer, DetuningSweep, QstConfig, QstResult,
    RamanEmission, SweepRow, MAX_RATE_STEP, SMALL_DETUNING,
};
pub use waveform::{on_off_ratio, raman_coupling, sech_pitch, Waveform};
