// Copyright 2026 The cavityq Authors
// SPDX-License-Identifier: Apache-2.0

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::waveform::Waveform;
use crate::error::{Error, Result};
use crate::fit::{linear_fit, LinearFit};
use crate::fock::linalg::{C64, I, ONE, ZERO};

/// Largest `rate * dt` the integrator accepts.
pub const MAX_RATE_STEP: f64 = 0.05;

fn default_input() -> [C64; 2] {
    [ZERO, ONE]
}

/// Two-node pitch-and-catch setup.
///
/// Rates and the detuning enter the amplitude equations as written, in s⁻¹.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QstConfig {
    pub kappa_hz: f64,
    pub emit_waveform: Waveform,
    pub catch_waveform: Waveform,
    #[serde(default)]
    pub delta_omega_hz: f64,
    pub t_span_s: [f64; 2],
    pub dt_s: f64,
    /// `(alpha, beta)` of the sender state `alpha|0> + beta|1>`.
    #[serde(default = "default_input")]
    pub input_state: [C64; 2],
    /// Thermal occupation of the channel is not modelled; must be 0.
    #[serde(default)]
    pub channel_temperature_k: f64,
}

impl QstConfig {
    /// Sech pitch with its time-reversed catch on a window `[-T/2, T/2]`
    /// with `κT = kappa_t`.
    pub fn matched_sech(kappa_hz: f64, kappa_t: f64) -> Self {
        let half = kappa_t / (2.0 * kappa_hz);
        let emit = Waveform::sech(kappa_hz);
        Self {
            kappa_hz,
            catch_waveform: emit.time_reversed(0.0),
            emit_waveform: emit,
            delta_omega_hz: 0.0,
            t_span_s: [-half, half],
            dt_s: 0.02 / kappa_hz,
            input_state: default_input(),
            channel_temperature_k: 0.0,
        }
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn validate(&self) -> Result<()> {
        let [t0, t1] = self.t_span_s;
        if ![self.kappa_hz, self.delta_omega_hz, t0, t1, self.dt_s, self.channel_temperature_k]
            .iter()
            .all(|v| v.is_finite())
        {
            return Err(Error::NonFinite("transfer configuration".into()));
        }
        if self.kappa_hz <= 0.0 {
            return Err(Error::InvalidArgument(format!("kappa_hz = {} must be positive", self.kappa_hz)));
        }
        if t1 <= t0 {
            return Err(Error::InvalidArgument(format!("empty time window [{t0}, {t1}]")));
        }
        if self.dt_s <= 0.0 {
            return Err(Error::InvalidArgument(format!("dt_s = {} must be positive", self.dt_s)));
        }
        if self.channel_temperature_k != 0.0 {
            return Err(Error::InvalidArgument(
                "thermal channels are not supported; channel_temperature_k must be 0".into(),
            ));
        }
        let [alpha, beta] = self.input_state;
        let norm = alpha.norm_sqr() + beta.norm_sqr();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!("input state has norm² {norm}")));
        }
        self.emit_waveform.validate()?;
        self.catch_waveform.validate()
    }
}

/// Outcome of one transfer. Traces hold one row per integrator step,
/// starting at `t0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QstResult {
    pub eta: f64,
    pub fidelity: f64,
    /// Receiver amplitude `b(t1)` for a unit excitation.
    pub transfer_amplitude: C64,
    pub times: Vec<f64>,
    pub emitter: Vec<C64>,
    pub receiver: Vec<C64>,
    /// Excitation that has left both nodes through the channel by each time.
    pub channel_loss: Vec<f64>,
}

impl QstResult {
    /// `|a|² + |b|² + loss - 1` at each sample.
    pub fn accounting_defect(&self) -> f64 {
        self.emitter
            .iter()
            .zip(&self.receiver)
            .zip(&self.channel_loss)
            .map(|((a, b), l)| (a.norm_sqr() + b.norm_sqr() + l - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Copy)]
struct Amps {
    a: C64,
    b: C64,
    loss: f64,
}

impl Amps {
    fn axpy(self, h: f64, d: Amps) -> Amps {
        Amps { a: self.a + d.a * h, b: self.b + d.b * h, loss: self.loss + d.loss * h }
    }
}

struct Cascade<'a> {
    emit: &'a Waveform,
    catch: &'a Waveform,
    delta: f64,
}

impl Cascade<'_> {
    fn deriv(&self, t: f64, y: Amps) -> Amps {
        let k1 = self.emit.rate(t);
        let k2 = self.catch.rate(t);
        let (s1, s2) = (k1.sqrt(), k2.sqrt());
        Amps {
            a: -(k1 / 2.0 + I * (self.delta / 2.0)) * y.a,
            b: -(k2 / 2.0) * y.b - s1 * s2 * y.a,
            // Field leaving the receiver end of the channel.
            loss: (s1 * y.a + s2 * y.b).norm_sqr(),
        }
    }

    fn rk4(&self, t: f64, h: f64, y: Amps) -> Amps {
        let d1 = self.deriv(t, y);
        let d2 = self.deriv(t + h / 2.0, y.axpy(h / 2.0, d1));
        let d3 = self.deriv(t + h / 2.0, y.axpy(h / 2.0, d2));
        let d4 = self.deriv(t + h, y.axpy(h, d3));
        Amps {
            a: y.a + (d1.a + 2.0 * d2.a + 2.0 * d3.a + d4.a) * (h / 6.0),
            b: y.b + (d1.b + 2.0 * d2.b + 2.0 * d3.b + d4.b) * (h / 6.0),
            loss: y.loss + (d1.loss + 2.0 * d2.loss + 2.0 * d3.loss + d4.loss) * (h / 6.0),
        }
    }
}

/// Integrate the cascaded single-excitation equations
///
/// ```text
/// a' = -(κ1/2 + iδω/2) a
/// b' = -κ2/2 b - sqrt(κ1 κ2) a
/// ```
///
/// from `a = 1, b = 0` with classic RK4. The window is split into the
/// smallest number of equal steps no longer than `dt_s`; the step check is
/// `max(κ1, κ2, |δω|) dt ≤ 0.05`.
///
/// The fidelity is the overlap of the receiver state with the input
/// `alpha|0> + beta|1>`, taken against an ideal phase reference that removes
/// the known phase of `b(t1)`: `F = (|alpha|² + |beta|² |b(t1)|)²`.
pub fn simulate_transfer(config: &QstConfig) -> Result<QstResult> {
    config.validate()?;
    let [t0, t1] = config.t_span_s;
    let emit = config.emit_waveform.anchored(t0);
    let catch = config.catch_waveform.anchored(t0);
    let max_rate = emit
        .max_rate(t0, t1)
        .max(catch.max_rate(t0, t1))
        .max(config.delta_omega_hz.abs());
    if max_rate * config.dt_s > MAX_RATE_STEP {
        return Err(Error::StepSize(format!(
            "max rate {max_rate:.4e} times dt {:.4e} exceeds {MAX_RATE_STEP}",
            config.dt_s
        )));
    }
    let steps = ((t1 - t0) / config.dt_s - 1e-9).ceil().max(1.0) as usize;
    let h = (t1 - t0) / steps as f64;
    let model = Cascade { emit: &emit, catch: &catch, delta: config.delta_omega_hz };

    let mut y = Amps { a: ONE, b: ZERO, loss: 0.0 };
    let mut times = Vec::with_capacity(steps + 1);
    let mut emitter = Vec::with_capacity(steps + 1);
    let mut receiver = Vec::with_capacity(steps + 1);
    let mut channel_loss = Vec::with_capacity(steps + 1);
    for k in 0..=steps {
        let t = t0 + k as f64 * h;
        times.push(t);
        emitter.push(y.a);
        receiver.push(y.b);
        channel_loss.push(y.loss);
        if k < steps {
            y = model.rk4(t, h, y);
        }
    }
    if !(y.a.re.is_finite() && y.b.re.is_finite() && y.a.im.is_finite() && y.b.im.is_finite()) {
        return Err(Error::NonFinite("transfer amplitudes".into()));
    }
    let eta = y.b.norm_sqr().min(1.0);
    let [alpha, beta] = config.input_state;
    let fidelity = (alpha.norm_sqr() + beta.norm_sqr() * y.b.norm()).powi(2).min(1.0);
    Ok(QstResult { eta, fidelity, transfer_amplitude: y.b, times, emitter, receiver, channel_loss })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub delta_omega_hz: f64,
    pub eta: f64,
    pub sqrt_one_minus_eta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetuningSweep {
    pub rows: Vec<SweepRow>,
    /// Fit of `sqrt(1 - eta)` against `|δω|` over the small-detuning rows;
    /// `None` when fewer than two distinct `|δω|` fall in the region.
    pub fit: Option<LinearFit>,
    pub fit_limit_hz: f64,
}

/// Half-width of the small-detuning fit region in units of `kappa_hz`.
pub const SMALL_DETUNING: f64 = 0.05;

/// Run the transfer at each detuning, in parallel, keeping input order.
pub fn detuning_sweep(config: &QstConfig, deltas: &[f64]) -> Result<DetuningSweep> {
    config.validate()?;
    let rows = deltas
        .par_iter()
        .map(|&d| {
            let cfg = QstConfig { delta_omega_hz: d, ..config.clone() };
            let eta = simulate_transfer(&cfg)?.eta;
            Ok(SweepRow { delta_omega_hz: d, eta, sqrt_one_minus_eta: (1.0 - eta).max(0.0).sqrt() })
        })
        .collect::<Result<Vec<_>>>()?;
    let fit_limit_hz = SMALL_DETUNING * config.kappa_hz;
    let (xs, ys): (Vec<f64>, Vec<f64>) = rows
        .iter()
        .filter(|r| r.delta_omega_hz.abs() <= fit_limit_hz * (1.0 + 1e-12))
        .map(|r| (r.delta_omega_hz.abs(), r.sqrt_one_minus_eta))
        .unzip();
    let fit = match linear_fit(&xs, &ys) {
        Ok(f) => Some(f),
        Err(Error::Degenerate(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(DetuningSweep { rows, fit, fit_limit_hz })
}

/// Emission of a Raman-driven node: `|f0>` coupled to `|g1>` with strength
/// `g(t)`, the resonator photon leaking at `kappa`.
#[derive(Debug, Clone, PartialEq)]
pub struct RamanEmission {
    pub times: Vec<f64>,
    /// Photon flux `κ |c_g1|²` into the channel.
    pub flux: Vec<f64>,
    pub emitted: f64,
    /// Population still in the node at the end.
    pub remaining: f64,
}

/// Integrate `c_f' = -g c_r`, `c_r' = g c_f - κ/2 c_r` from `c_f = 1`.
pub fn raman_emission(
    kappa: f64,
    coupling: impl Fn(f64) -> f64,
    t_span: [f64; 2],
    dt: f64,
) -> Result<RamanEmission> {
    let [t0, t1] = t_span;
    if !(kappa >= 0.0 && dt > 0.0 && t1 > t0) {
        return Err(Error::InvalidArgument("Raman emission needs kappa >= 0, dt > 0, t1 > t0".into()));
    }
    if kappa * dt > MAX_RATE_STEP {
        return Err(Error::StepSize(format!("kappa dt = {:.3e}", kappa * dt)));
    }
    let steps = ((t1 - t0) / dt - 1e-9).ceil().max(1.0) as usize;
    let h = (t1 - t0) / steps as f64;
    // State (c_f, c_r, emitted).
    let f = |t: f64, y: [f64; 3]| {
        let g = coupling(t);
        [-g * y[1], g * y[0] - kappa / 2.0 * y[1], kappa * y[1] * y[1]]
    };
    let mut y = [1.0, 0.0, 0.0];
    let mut times = Vec::with_capacity(steps + 1);
    let mut flux = Vec::with_capacity(steps + 1);
    for k in 0..=steps {
        let t = t0 + k as f64 * h;
        times.push(t);
        flux.push(kappa * y[1] * y[1]);
        if k == steps {
            break;
        }
        let add = |y: [f64; 3], d: [f64; 3], s: f64| [y[0] + s * d[0], y[1] + s * d[1], y[2] + s * d[2]];
        let d1 = f(t, y);
        let d2 = f(t + h / 2.0, add(y, d1, h / 2.0));
        let d3 = f(t + h / 2.0, add(y, d2, h / 2.0));
        let d4 = f(t + h, add(y, d3, h));
        for i in 0..3 {
            y[i] += h / 6.0 * (d1[i] + 2.0 * d2[i] + 2.0 * d3[i] + d4[i]);
        }
    }
    Ok(RamanEmission { times, flux, emitted: y[2], remaining: y[0] * y[0] + y[1] * y[1] })
}
