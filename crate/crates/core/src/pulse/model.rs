// Copyright 2026 The cavityq Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;

use ndarray::Array2;

use super::schedule::PulseSchedule;
use crate::device::{self, DeviceParams};
use crate::error::{Error, Result};
use crate::fock::linalg::{dagger, eye, kron, max_abs, CMatrix, C64, I, ZERO};
use crate::fock::{self, expm, pauli, HilbertShape, Operator, StateVector};

/// Dispersive couplings of a qubit-cavity model, in Hz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersiveInfo {
    pub chi_hz: f64,
    pub chi_prime_hz: f64,
}

impl DispersiveInfo {
    /// Qubit transition frequency with `n` photons, relative to the bare qubit.
    pub fn transition_hz(&self, n: usize) -> f64 {
        let n = n as f64;
        -(self.chi_hz * n + self.chi_prime_hz * n * n / 2.0)
    }
}

/// Drift plus complex-amplitude controls. Hamiltonians are in rad/s. Control
/// `k` with envelope `u` (Hz) contributes `π (u L_k† + u* L_k)`, so a real
/// `u` on a qubit lowering operator is a Rabi frequency in Hz.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlModel {
    drift: Operator,
    controls: Vec<Operator>,
    dispersive: Option<DispersiveInfo>,
}

impl ControlModel {
    pub fn new(drift: Operator, controls: Vec<Operator>) -> Result<Self> {
        let scale = max_abs(drift.matrix()).max(1.0);
        if drift.hermiticity_defect() > 1e-12 * scale {
            return Err(Error::InvalidArgument("drift Hamiltonian is not Hermitian".into()));
        }
        for c in &controls {
            drift.shape().check_same(c.shape(), "control operator")?;
        }
        Ok(Self { drift, controls, dispersive: None })
    }

    /// Qubit ⊗ mode in the frame rotating at the bare qubit and cavity
    /// frequencies: drift `-2π (χ n + χ' n²/2) ⊗ |e><e|`, controls
    /// `[|g><e| ⊗ I, I ⊗ a]`.
    pub fn dispersive(chi_hz: f64, chi_prime_hz: f64, mode_dim: usize) -> Result<Self> {
        if !chi_hz.is_finite() || !chi_prime_hz.is_finite() {
            return Err(Error::NonFinite("dispersive shifts".into()));
        }
        let info = DispersiveInfo { chi_hz, chi_prime_hz };
        let shape = HilbertShape::new(vec![2, mode_dim])?;
        let mut diag = vec![ZERO; 2 * mode_dim];
        for n in 0..mode_dim {
            diag[mode_dim + n] = C64::new(2.0 * PI * info.transition_hz(n), 0.0);
        }
        let drift = Operator::from_diagonal(shape.clone(), &diag)?;
        let qubit = Operator::new(shape.clone(), kron(&pauli::lower(), &eye(mode_dim)))?;
        let cavity = Operator::new(shape, kron(&eye(2), fock::annihilation(mode_dim)?.matrix()))?;
        let mut m = Self::new(drift, vec![qubit, cavity])?;
        m.dispersive = Some(info);
        Ok(m)
    }

    pub fn from_device(params: &DeviceParams, mode_dim: usize) -> Result<Self> {
        Self::dispersive(device::chi(params)?, params.chi_prime, mode_dim)
    }

    /// A lone qubit detuned by `detuning_hz` from the frame, driven through `|g><e|`.
    pub fn qubit(detuning_hz: f64) -> Result<Self> {
        let shape = HilbertShape::single(2)?;
        let drift = Operator::from_diagonal(shape.clone(), &[ZERO, C64::new(2.0 * PI * detuning_hz, 0.0)])?;
        Self::new(drift, vec![Operator::new(shape, pauli::lower())?])
    }

    pub fn shape(&self) -> &HilbertShape {
        self.drift.shape()
    }

    pub fn drift(&self) -> &Operator {
        &self.drift
    }

    pub fn controls(&self) -> &[Operator] {
        &self.controls
    }

    pub fn dispersive_info(&self) -> Option<DispersiveInfo> {
        self.dispersive
    }

    pub(crate) fn check_schedule(&self, schedule: &PulseSchedule) -> Result<()> {
        schedule.validate()?;
        if schedule.controls.len() != self.controls.len() {
            return Err(Error::Shape(format!(
                "schedule has {} controls, model has {}",
                schedule.controls.len(),
                self.controls.len()
            )));
        }
        Ok(())
    }

    /// `H_j = H0 + Σ_k π (v L† + v* L)` with `v` the modulated amplitude.
    pub(crate) fn segment_hamiltonian(&self, schedule: &PulseSchedule, j: usize) -> CMatrix {
        let mut h = self.drift.matrix().clone();
        for (k, l) in self.controls.iter().enumerate() {
            let v = schedule.modulated(k, j);
            if v == ZERO {
                continue;
            }
            let l = l.matrix();
            h = h + &(dagger(&l.view()) * (v * PI)) + &(l * (v.conj() * PI));
        }
        h
    }

    /// `dH_j / d Re u_k` and `dH_j / d Im u_k`.
    pub(crate) fn control_derivatives(&self, schedule: &PulseSchedule, k: usize, j: usize) -> (CMatrix, CMatrix) {
        let c = schedule.carrier_phase(k, j);
        let l = self.controls[k].matrix();
        let ld = dagger(&l.view());
        let dre = &ld * (c * PI) + &(l * (c.conj() * PI));
        let dim = &ld * (c * I * PI) + &(l * (-(c.conj() * I) * PI));
        (dre, dim)
    }
}

/// `exp(-i H_j dt)` for each segment.
pub fn segment_propagators(model: &ControlModel, schedule: &PulseSchedule) -> Result<Vec<CMatrix>> {
    model.check_schedule(schedule)?;
    let step = C64::new(0.0, -schedule.dt_s);
    (0..schedule.segments())
        .map(|j| expm::expm(&(model.segment_hamiltonian(schedule, j) * step)))
        .collect()
}

/// Ordered product of all segment propagators.
pub fn schedule_propagator(model: &ControlModel, schedule: &PulseSchedule) -> Result<Operator> {
    let mut u = eye(model.shape().total());
    for p in segment_propagators(model, schedule)? {
        u = p.dot(&u);
    }
    Operator::new(model.shape().clone(), u)
}

pub fn simulate_schedule(model: &ControlModel, schedule: &PulseSchedule, psi0: &StateVector) -> Result<StateVector> {
    model.shape().check_same(psi0.shape(), "initial state")?;
    model.check_schedule(schedule)?;
    let step = C64::new(0.0, -schedule.dt_s);
    let mut amps = psi0.amplitudes().clone();
    for j in 0..schedule.segments() {
        let u = expm::expm(&(model.segment_hamiltonian(schedule, j) * step))?;
        amps = u.dot(&amps);
    }
    StateVector::new(psi0.shape().clone(), amps)
}

/// `|Tr(U† V)|² / d²`.
pub fn gate_fidelity(u: &Operator, v: &Operator) -> Result<f64> {
    u.shape().check_same(v.shape(), "gate fidelity")?;
    let d = u.dim() as f64;
    Ok(fock::linalg::inner_trace(u.matrix(), v.matrix()).norm_sqr() / (d * d))
}

/// Average-state infidelity of a possibly non-unitary block `m` against a
/// unitary `target`: `1 - (|Tr(S† M)|² + Tr(M† M)) / (d (d + 1))`.
pub fn average_infidelity(m: &CMatrix, target: &CMatrix) -> Result<f64> {
    if m.dim() != target.dim() || m.nrows() != m.ncols() {
        return Err(Error::Shape(format!("blocks {:?} and {:?}", m.dim(), target.dim())));
    }
    let d = m.nrows() as f64;
    let overlap = fock::linalg::inner_trace(target, m).norm_sqr();
    let kept = fock::linalg::inner_trace(m, m).re;
    Ok((1.0 - (overlap + kept) / (d * (d + 1.0))).max(0.0))
}

/// Rows and columns of `u` whose flat indices are listed.
pub fn sub_block(u: &CMatrix, rows: &[usize], cols: &[usize]) -> CMatrix {
    Array2::from_shape_fn((rows.len(), cols.len()), |(r, c)| u[[rows[r], cols[c]]])
}
