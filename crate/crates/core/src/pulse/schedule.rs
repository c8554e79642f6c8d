// Copyright 2026 The cavityq Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::C64;

/// Piecewise-constant complex envelope of one control, in Hz, modulated by
/// `exp(-2πi carrier_hz t)` in the model's rotating frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ControlChannel {
    pub carrier_hz: f64,
    pub amps: Vec<C64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PulseSchedule {
    pub dt_s: f64,
    pub controls: Vec<ControlChannel>,
}

impl PulseSchedule {
    pub fn new(dt_s: f64, controls: Vec<ControlChannel>) -> Result<Self> {
        let s = Self { dt_s, controls };
        s.validate()?;
        Ok(s)
    }

    /// All-zero envelopes on `carriers.len()` controls.
    pub fn zeros(dt_s: f64, segments: usize, carriers: &[f64]) -> Result<Self> {
        let controls = carriers
            .iter()
            .map(|&carrier_hz| ControlChannel { carrier_hz, amps: vec![C64::new(0.0, 0.0); segments] })
            .collect();
        Self::new(dt_s, controls)
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt_s > 0.0 && self.dt_s.is_finite()) {
            return Err(Error::StepSize(format!("schedule dt {} must be positive", self.dt_s)));
        }
        let len = self.segments();
        for (k, c) in self.controls.iter().enumerate() {
            if c.amps.len() != len {
                return Err(Error::Shape(format!(
                    "control {k} has {} segments, control 0 has {len}",
                    c.amps.len()
                )));
            }
            if !c.carrier_hz.is_finite() {
                return Err(Error::NonFinite(format!("carrier of control {k}")));
            }
            if let Some(j) = c.amps.iter().position(|a| !a.re.is_finite() || !a.im.is_finite()) {
                return Err(Error::NonFinite(format!("amplitude of control {k} at segment {j}")));
            }
        }
        Ok(())
    }

    pub fn segments(&self) -> usize {
        self.controls.first().map_or(0, |c| c.amps.len())
    }

    pub fn duration(&self) -> f64 {
        self.segments() as f64 * self.dt_s
    }

    /// Carrier phase factor of control `k` sampled at the middle of segment `j`.
    pub fn carrier_phase(&self, k: usize, j: usize) -> C64 {
        let t = (j as f64 + 0.5) * self.dt_s;
        C64::from_polar(1.0, -2.0 * PI * self.controls[k].carrier_hz * t)
    }

    /// Envelope times carrier for control `k` on segment `j`.
    pub fn modulated(&self, k: usize, j: usize) -> C64 {
        self.controls[k].amps[j] * self.carrier_phase(k, j)
    }
}
