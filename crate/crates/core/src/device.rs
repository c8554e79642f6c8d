// Copyright 2026 The cavityq Authors
// SPDX-License-Identifier: Apache-2.0

//! Dispersive-regime device estimators for a transmon coupled to a cavity.
//!
//! All frequencies are plain numbers in Hz and all times in seconds; no
//! factors of 2π are inserted except where a formula carries one explicitly.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Physical parameters of one qubit–cavity pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeviceParams {
    #[serde(rename = "omega_q_hz")]
    pub omega_q: f64,
    #[serde(rename = "omega_c_hz")]
    pub omega_c: f64,
    #[serde(rename = "g_hz")]
    pub g: f64,
    #[serde(rename = "chi_prime_hz")]
    pub chi_prime: f64,
    /// Transmon anharmonicity (signed).
    #[serde(rename = "alpha_hz")]
    pub alpha: f64,
    /// Lifetime of `|1>`; higher Fock states scale down from it.
    #[serde(rename = "t1_fock0_s")]
    pub t1_fock0: f64,
    #[serde(rename = "t1_min_s")]
    pub t1_min: f64,
}

impl DeviceParams {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("omega_q_hz", self.omega_q),
            ("omega_c_hz", self.omega_c),
            ("g_hz", self.g),
            ("chi_prime_hz", self.chi_prime),
            ("alpha_hz", self.alpha),
            ("t1_fock0_s", self.t1_fock0),
            ("t1_min_s", self.t1_min),
        ];
        for (name, v) in fields {
            if !v.is_finite() {
                return Err(Error::NonFinite(name.into()));
            }
        }
        if self.g <= 0.0 {
            return Err(Error::InvalidArgument("g_hz must be positive".into()));
        }
        if self.omega_q == self.omega_c {
            return Err(Error::DegenerateDetuning("omega_q_hz equals omega_c_hz".into()));
        }
        if self.t1_fock0 <= 0.0 {
            return Err(Error::InvalidArgument("t1_fock0_s must be positive".into()));
        }
        if self.t1_min <= 0.0 {
            return Err(Error::InvalidArgument("t1_min_s must be positive".into()));
        }
        Ok(())
    }

    /// Qubit–cavity detuning `omega_q - omega_c`.
    pub fn detuning(&self) -> f64 {
        self.omega_q - self.omega_c
    }
}

/// Dispersive shift `g^2 / Δ`.
pub fn chi(params: &DeviceParams) -> Result<f64> {
    let delta = params.detuning();
    if delta == 0.0 {
        return Err(Error::DegenerateDetuning("chi needs omega_q != omega_c".into()));
    }
    Ok(params.g * params.g / delta)
}

/// Order of the photon-number-dependent qubit shift.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StarkOrder {
    First,
    Second,
}

/// Qubit frequency when the cavity holds `n` photons.
pub fn stark_shifted_freq(params: &DeviceParams, n: f64, order: StarkOrder) -> Result<f64> {
    if n < 0.0 {
        return Err(Error::InvalidArgument("photon number must be non-negative".into()));
    }
    let chi = chi(params)?;
    Ok(match order {
        StarkOrder::First => params.omega_q - n * chi,
        StarkOrder::Second => params.omega_q - (chi * n + params.chi_prime * n * n / 2.0),
    })
}

/// Qubit drive frequency selecting a joint photon configuration; each entry
/// is `(n_k, chi_k)` for one cavity mode.
pub fn multimode_drive_freq(params: &DeviceParams, shifts: &[(f64, f64)]) -> f64 {
    params.omega_q - shifts.iter().map(|&(n, chi)| n * chi).sum::<f64>()
}

/// Photon number at which the dispersive picture fails, `(Δ / 2g)^2`.
pub fn critical_photon_number(params: &DeviceParams) -> Result<f64> {
    if params.g <= 0.0 {
        return Err(Error::InvalidArgument("g_hz must be positive".into()));
    }
    let r = params.detuning() / (2.0 * params.g);
    Ok(r * r)
}

/// Lifetime of a Fock state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FockLifetime {
    /// The vacuum does not decay.
    Stable,
    Finite(f64),
}

impl FockLifetime {
    pub fn seconds(self) -> f64 {
        match self {
            FockLifetime::Stable => f64::INFINITY,
            FockLifetime::Finite(t) => t,
        }
    }
}

/// `T1` of `|n>`, equal to `t1_fock0 / n`.
pub fn fock_t1(params: &DeviceParams, n: u64) -> FockLifetime {
    if n == 0 {
        FockLifetime::Stable
    } else {
        FockLifetime::Finite(params.t1_fock0 / n as f64)
    }
}

/// Highest usable Fock level given a minimum acceptable lifetime.
#[derive(Debug, Clone, PartialEq)]
pub struct MaxFock {
    pub levels: u64,
    pub advisory: Option<String>,
}

/// `floor(t1_fock0 / t1_min)`.
///
/// Ratios within a relative 1e-9 of an integer are snapped to it, so that
/// decimal inputs such as `1 / 200e-6` land on the intended 5000.
pub fn max_fock(params: &DeviceParams) -> MaxFock {
    if params.t1_min > params.t1_fock0 {
        return MaxFock {
            levels: 0,
            advisory: Some(format!(
                "t1_min ({} s) exceeds t1_fock0 ({} s); no Fock level meets the requirement",
                params.t1_min, params.t1_fock0
            )),
        };
    }
    let ratio = params.t1_fock0 / params.t1_min;
    let nearest = ratio.round();
    let levels = if (ratio - nearest).abs() <= 1e-9 * ratio {
        nearest
    } else {
        ratio.floor()
    };
    MaxFock { levels: levels as u64, advisory: None }
}

/// Lower bound on the SNAP gate duration, `2π / |χ|`.
pub fn snap_min_gate_time(params: &DeviceParams) -> Result<f64> {
    snap_min_gate_time_for_chi(chi(params)?)
}

pub fn snap_min_gate_time_for_chi(chi: f64) -> Result<f64> {
    if chi == 0.0 || !chi.is_finite() {
        return Err(Error::DegenerateDetuning("SNAP bound needs a non-zero chi".into()));
    }
    Ok(2.0 * PI / chi.abs())
}

/// Pure-dephasing rate `k |∂E01/∂λ|^2 S(0)`.
pub fn dephasing_rate(dispersion: f64, s0: f64, k: f64) -> Result<f64> {
    if s0 < 0.0 || k <= 0.0 {
        return Err(Error::InvalidArgument("need S0 >= 0 and k > 0".into()));
    }
    Ok(k * dispersion * dispersion * s0)
}

/// Golden-rule relaxation rate `k |<0|O|1>|^2 S(E01)`.
pub fn relaxation_rate(matrix_element: f64, s_at_e01: f64, k: f64) -> Result<f64> {
    if matrix_element < 0.0 || s_at_e01 < 0.0 || k < 0.0 {
        return Err(Error::InvalidArgument("relaxation inputs must be non-negative".into()));
    }
    Ok(k * matrix_element * matrix_element * s_at_e01)
}
