// Copyright 2026 The cavityq Authors
// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sech-shaped coupling `κ / (2 cosh(κt/2))`, peak `κ/2` at `t = 0`.
pub fn sech_pitch(kappa: f64, t: f64) -> f64 {
    kappa / (2.0 * (kappa * t / 2.0).cosh())
}

/// Effective Jaynes-Cummings coupling of a Raman-driven `|f0> <-> |g1>`
/// transition, `g Ω α / (sqrt(2) Δ (Δ + α))`.
pub fn raman_coupling(omega: f64, g: f64, alpha: f64, delta: f64) -> Result<f64> {
    if delta == 0.0 {
        return Err(Error::Singularity("Raman coupling with zero detuning".into()));
    }
    if delta + alpha == 0.0 {
        return Err(Error::Singularity("Raman coupling with detuning equal to -anharmonicity".into()));
    }
    Ok(g * omega * alpha / (std::f64::consts::SQRT_2 * delta * (delta + alpha)))
}

/// Time profile of one node's coupling to the channel.
///
/// `rate` is the node's decay rate `κ(t)` into the channel as it enters the
/// cascaded amplitude equations. `coupling` is the modulated coupling the
/// hardware would drive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Waveform {
    /// Node emitting (or, reversed, absorbing) the photon produced by a
    /// [`sech_pitch`] coupling through a resonator of decay rate `kappa_hz`.
    /// The photon flux is `(κ/4) sech²(κ(t-c)/2)`; the matching node rate is
    /// `κ / (1 + e^{-κ(t-c)})`.
    Sech {
        kappa_hz: f64,
        #[serde(default)]
        center_s: f64,
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        reversed: bool,
    },
    /// Rates sampled every `dt_s` from `t0_s` (default: start of the
    /// transfer window), linearly interpolated and zero outside.
    Sampled {
        dt_s: f64,
        values: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        t0_s: Option<f64>,
    },
}

impl Waveform {
    pub fn sech(kappa_hz: f64) -> Self {
        Waveform::Sech { kappa_hz, center_s: 0.0, reversed: false }
    }

    pub fn sampled(dt_s: f64, values: Vec<f64>, t0_s: f64) -> Self {
        Waveform::Sampled { dt_s, values, t0_s: Some(t0_s) }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Waveform::Sech { kappa_hz, center_s, .. } => {
                if !kappa_hz.is_finite() || !center_s.is_finite() {
                    return Err(Error::NonFinite("sech waveform".into()));
                }
                if *kappa_hz < 0.0 {
                    return Err(Error::InvalidArgument(format!("kappa_hz = {kappa_hz} is negative")));
                }
            }
            Waveform::Sampled { dt_s, values, t0_s } => {
                if !(dt_s.is_finite() && *dt_s > 0.0) {
                    return Err(Error::InvalidArgument(format!("sample spacing dt_s = {dt_s}")));
                }
                if values.is_empty() {
                    return Err(Error::InvalidArgument("sampled waveform has no values".into()));
                }
                if values.iter().any(|v| !v.is_finite()) || t0_s.is_some_and(|t| !t.is_finite()) {
                    return Err(Error::NonFinite("sampled waveform".into()));
                }
                if let Some((i, v)) = values.iter().enumerate().find(|(_, &v)| v < 0.0) {
                    return Err(Error::InvalidArgument(format!("sample {i} is negative ({v})")));
                }
            }
        }
        Ok(())
    }

    /// Fill in a missing sample origin.
    pub fn anchored(&self, t0: f64) -> Waveform {
        match self {
            Waveform::Sampled { dt_s, values, t0_s: None } => {
                Waveform::Sampled { dt_s: *dt_s, values: values.clone(), t0_s: Some(t0) }
            }
            other => other.clone(),
        }
    }

    /// Decay rate into the channel at time `t`.
    pub fn rate(&self, t: f64) -> f64 {
        match *self {
            Waveform::Sech { kappa_hz, center_s, reversed } => {
                let x = kappa_hz * (t - center_s);
                kappa_hz / (1.0 + if reversed { x.exp() } else { (-x).exp() })
            }
            Waveform::Sampled { dt_s, ref values, t0_s } => {
                let s = (t - t0_s.unwrap_or(0.0)) / dt_s;
                let last = (values.len() - 1) as f64;
                if !(0.0..=last).contains(&s) {
                    return 0.0;
                }
                let i = s.floor() as usize;
                if i + 1 >= values.len() {
                    return values[values.len() - 1];
                }
                let f = s - i as f64;
                values[i] * (1.0 - f) + values[i + 1] * f
            }
        }
    }

    /// Modulated coupling strength at time `t`.
    pub fn coupling(&self, t: f64) -> f64 {
        match *self {
            Waveform::Sech { kappa_hz, center_s, .. } => sech_pitch(kappa_hz, t - center_s),
            Waveform::Sampled { .. } => self.rate(t),
        }
    }

    /// Largest coupling magnitude over all time.
    pub fn peak_coupling(&self) -> f64 {
        match self {
            Waveform::Sech { kappa_hz, .. } => kappa_hz.abs() / 2.0,
            Waveform::Sampled { values, .. } => values.iter().fold(0.0, |m, v| m.max(v.abs())),
        }
    }

    /// Upper bound of `rate` over `[t0, t1]`.
    pub fn max_rate(&self, t0: f64, t1: f64) -> f64 {
        match self {
            Waveform::Sech { .. } => self.rate(t0).max(self.rate(t1)),
            Waveform::Sampled { values, .. } => values.iter().fold(0.0, |m, &v| m.max(v)),
        }
    }

    /// Mirror image `t -> 2 mid - t`.
    pub fn time_reversed(&self, mid: f64) -> Waveform {
        match self {
            Waveform::Sech { kappa_hz, center_s, reversed } => Waveform::Sech {
                kappa_hz: *kappa_hz,
                center_s: 2.0 * mid - center_s,
                reversed: !reversed,
            },
            Waveform::Sampled { dt_s, values, t0_s } => {
                let start = t0_s.unwrap_or(0.0);
                let end = start + dt_s * (values.len() - 1) as f64;
                Waveform::Sampled {
                    dt_s: *dt_s,
                    values: values.iter().rev().copied().collect(),
                    t0_s: Some(2.0 * mid - end),
                }
            }
        }
    }
}

/// Dynamic range of a coupling waveform relative to its off-state `floor`.
pub fn on_off_ratio(waveform: &Waveform, floor: f64) -> Result<f64> {
    if !(floor.is_finite() && floor > 0.0) {
        return Err(Error::InvalidArgument(format!("coupling floor {floor} must be positive")));
    }
    waveform.validate()?;
    Ok(waveform.peak_coupling() / floor)
}
