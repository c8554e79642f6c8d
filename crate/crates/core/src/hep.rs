// Copyright 2026 The cavityq Authors
// SPDX-License-Identifier: Apache-2.0

//! Trotterised single-qudit dynamics built from SNAP and Fourier gates, and
//! out-of-time-order correlators.
//!
//! The Hamiltonian is `H = 2π (diag(V) + F diag(K) F†)` with `F` the group
//! Fourier gate, so `V` acts as a position-like potential and `K` as a
//! momentum-like kinetic term. Entries are in Hz and times in seconds.

use std::f64::consts::PI;

use ndarray::Array2;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fit::{linear_fit, LinearFit};
use crate::fock::linalg::{dagger, C64, ONE};
use crate::fock::{HilbertShape, Operator, StateVector};
use crate::gates::{circuit_unitary, fourier, Circuit, GateSpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuditHamiltonian {
    pub diagonal: Vec<f64>,
    pub kinetic_diagonal: Vec<f64>,
}

impl QuditHamiltonian {
    pub fn new(diagonal: Vec<f64>, kinetic_diagonal: Vec<f64>) -> Result<Self> {
        let h = Self { diagonal, kinetic_diagonal };
        h.validate()?;
        Ok(h)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.diagonal.len();
        if n < 2 {
            return Err(Error::InvalidDimension("qudit Hamiltonian needs N >= 2".into()));
        }
        if self.kinetic_diagonal.len() != n {
            return Err(Error::Shape(format!(
                "{} kinetic entries for {n} potential entries",
                self.kinetic_diagonal.len()
            )));
        }
        if self.diagonal.iter().chain(&self.kinetic_diagonal).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("Hamiltonian entries".into()));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    pub fn shape(&self) -> Result<HilbertShape> {
        HilbertShape::single(self.dim())
    }

    /// Dense `H` in rad/s.
    pub fn operator(&self) -> Result<Operator> {
        self.validate()?;
        let n = self.dim();
        let f = fourier(n)?.into_matrix();
        let k = Array2::from_diag(&ndarray::Array1::from_iter(
            self.kinetic_diagonal.iter().map(|&v| C64::new(2.0 * PI * v, 0.0)),
        ));
        let mut h = f.dot(&k).dot(&dagger(&f.view()));
        for (i, v) in self.diagonal.iter().enumerate() {
            h[[i, i]] += 2.0 * PI * v;
        }
        Operator::new(self.shape()?, h)
    }

    /// `exp(-i H t)`.
    pub fn propagator(&self, t: f64) -> Result<Operator> {
        self.operator()?.expm(t)
    }

    /// Largest `|eigenvalue|` of `H` in rad/s, by power iteration on `H²`.
    pub fn spectral_norm(&self) -> Result<f64> {
        let h = self.operator()?.into_matrix();
        let h2 = h.dot(&h);
        let mut v = ndarray::Array1::from_elem(self.dim(), ONE);
        v[0] += 0.37;
        let mut lambda = 0.0;
        for _ in 0..500 {
            let w = h2.dot(&v);
            let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm == 0.0 {
                return Ok(0.0);
            }
            v = w / C64::new(norm, 0.0);
            lambda = norm;
        }
        Ok(lambda.sqrt())
    }
}

/// One first-order step `exp(-iH_K dt) exp(-iH_V dt)` as a circuit:
/// SNAP with the potential phases, then the kinetic phases in the Fourier
/// basis.
pub fn trotter_step(h: &QuditHamiltonian, dt: f64) -> Result<Circuit> {
    h.validate()?;
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidArgument(format!("Trotter step dt = {dt} must be positive")));
    }
    let phases = |v: &[f64]| v.iter().map(|x| -x * dt * 2.0 * PI).collect::<Vec<_>>();
    Ok(Circuit::new(
        h.shape()?,
        vec![
            GateSpec::Snap { target: 0, theta: phases(&h.diagonal) },
            GateSpec::Fourier { target: 0, inverse: true },
            GateSpec::Snap { target: 0, theta: phases(&h.kinetic_diagonal) },
            GateSpec::Fourier { target: 0, inverse: false },
        ],
    ))
}

/// Unitary of [`trotter_step`].
pub fn trotter_step_operator(h: &QuditHamiltonian, dt: f64) -> Result<Operator> {
    Ok(circuit_unitary(&trotter_step(h, dt)?)?.value)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrotterEvolution {
    pub state: StateVector,
    pub exact: StateVector,
    pub fidelity: f64,
    /// `|| psi_trotter - psi_exact ||`.
    pub error: f64,
}

/// `steps` Trotter steps of length `t_total / steps`, compared with the
/// exact propagator.
pub fn evolve_trotter(
    h: &QuditHamiltonian,
    t_total: f64,
    steps: usize,
    psi0: &StateVector,
) -> Result<TrotterEvolution> {
    if steps == 0 {
        return Err(Error::InvalidArgument("evolve_trotter needs at least one step".into()));
    }
    if !(t_total.is_finite() && t_total >= 0.0) {
        return Err(Error::InvalidArgument(format!("evolution time {t_total}")));
    }
    h.shape()?.check_same(psi0.shape(), "Trotter initial state")?;
    let exact = h.propagator(t_total)?.apply(psi0)?;
    let state = if t_total == 0.0 {
        psi0.clone()
    } else {
        let step = trotter_step_operator(h, t_total / steps as f64)?;
        (0..steps).try_fold(psi0.clone(), |psi, _| step.apply(&psi))?
    };
    let fidelity = crate::fock::fidelity(&exact, &state)?;
    let error = state.distance(&exact);
    Ok(TrotterEvolution { state, exact, fidelity, error })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub steps: usize,
    pub dt: f64,
    pub infidelity: f64,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrotterConvergence {
    pub rows: Vec<ConvergenceRow>,
    /// Fit of `ln(error)` against `ln(dt)`; the slope is the global order.
    pub fit: LinearFit,
}

/// Global Trotter error at fixed `t_total` for each step count, in parallel.
pub fn trotter_convergence(
    h: &QuditHamiltonian,
    t_total: f64,
    step_counts: &[usize],
    psi0: &StateVector,
) -> Result<TrotterConvergence> {
    let rows = step_counts
        .par_iter()
        .map(|&steps| {
            let ev = evolve_trotter(h, t_total, steps, psi0)?;
            Ok(ConvergenceRow {
                steps,
                dt: t_total / steps as f64,
                infidelity: (1.0 - ev.fidelity).max(0.0),
                error: ev.error,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    if rows.iter().any(|r| r.error <= 0.0) {
        return Err(Error::Degenerate("zero Trotter error; nothing to fit".into()));
    }
    let xs: Vec<f64> = rows.iter().map(|r| r.dt.ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.error.ln()).collect();
    let fit = linear_fit(&xs, &ys)?;
    Ok(TrotterConvergence { rows, fit })
}

/// `<psi0| W(t)† V† W(t) V |psi0>` with `W(t) = U† W U`, `U = exp(-iHt)`.
/// `psi0` defaults to `|0>`.
pub fn otoc(
    w: &Operator,
    v: &Operator,
    h: &QuditHamiltonian,
    t: f64,
    psi0: Option<&StateVector>,
) -> Result<C64> {
    let shape = h.shape()?;
    shape.check_same(w.shape(), "OTOC operator W")?;
    shape.check_same(v.shape(), "OTOC operator V")?;
    let psi = match psi0 {
        Some(p) => {
            shape.check_same(p.shape(), "OTOC state")?;
            p.clone()
        }
        None => StateVector::fock(h.dim(), 0)?,
    };
    let u = h.propagator(t)?;
    let wt = u.dagger().compose(w)?.compose(&u)?;
    let chain = wt.dagger().compose(&v.dagger())?.compose(&wt)?.compose(v)?;
    psi.inner(&chain.apply(&psi)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OtocRow {
    pub t: f64,
    pub value: C64,
}

/// [`otoc`] at each time, in parallel, keeping input order.
pub fn otoc_series(
    w: &Operator,
    v: &Operator,
    h: &QuditHamiltonian,
    times: &[f64],
    psi0: Option<&StateVector>,
) -> Result<Vec<OtocRow>> {
    times
        .par_iter()
        .map(|&t| Ok(OtocRow { t, value: otoc(w, v, h, t, psi0)? }))
        .collect()
}
