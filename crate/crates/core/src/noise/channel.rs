// Copyright 2026 The cavityq Authors
// SPDX-License-Identifier: Apache-2.0

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::fock::linalg::{dagger, eye, max_abs, CMatrix, C64, ZERO};
use crate::fock::{self, HilbertShape, Operator};

/// Largest completeness defect the unnormalised first-order Kraus pair may
/// have before the step is rejected.
pub const FIRST_ORDER_GUARD: f64 = 1e-6;

/// A Kraus map for one time step. `kraus[0]` is the no-jump element.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseChannel {
    kraus: Vec<Operator>,
    dt: f64,
    mode: usize,
}

impl NoiseChannel {
    pub fn new(kraus: Vec<Operator>, dt: f64) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| Error::InvalidArgument("a channel needs at least one Kraus operator".into()))?;
        for k in &kraus[1..] {
            first.shape().check_same(k.shape(), "Kraus operator")?;
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::StepSize(format!("channel step {dt} must be positive")));
        }
        Ok(Self { kraus, dt, mode: 0 })
    }

    pub fn kraus(&self) -> &[Operator] {
        &self.kraus
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn shape(&self) -> &HilbertShape {
        self.kraus[0].shape()
    }

    /// Subsystem whose photon statistics trajectory records report.
    pub fn mode(&self) -> usize {
        self.mode
    }

    /// `max |Σ K†K - I|`.
    pub fn completeness_defect(&self) -> f64 {
        let n = self.shape().total();
        let mut sum = Array2::<C64>::zeros((n, n));
        for k in &self.kraus {
            sum = sum + dagger(&k.matrix().view()).dot(k.matrix());
        }
        max_abs(&(sum - eye(n)))
    }

    /// Lift a single-mode channel onto subsystem `k` of `shape`.
    pub fn on_subsystem(&self, k: usize, shape: &HilbertShape) -> Result<Self> {
        if self.shape().num_subsystems() != 1 {
            return Err(Error::Shape("only single-mode channels can be embedded".into()));
        }
        if shape.dim(k)? != self.shape().total() {
            return Err(Error::Shape(format!(
                "channel of dim {} on subsystem of dim {}",
                self.shape().total(),
                shape.dim(k)?
            )));
        }
        let kraus = self
            .kraus
            .iter()
            .map(|op| Operator::embed(op.matrix(), &[k], shape))
            .collect::<Result<_>>()?;
        Ok(Self { kraus, dt: self.dt, mode: k })
    }

    /// One step of the map on a density matrix: `Σ K ρ K†`.
    pub fn apply(&self, rho: &CMatrix) -> Result<CMatrix> {
        let n = self.shape().total();
        if rho.dim() != (n, n) {
            return Err(Error::Shape(format!("density matrix {:?} for a dim-{n} channel", rho.dim())));
        }
        let mut out = Array2::<C64>::zeros((n, n));
        for k in &self.kraus {
            let m = k.matrix();
            out = out + m.dot(rho).dot(&dagger(&m.view()));
        }
        Ok(out)
    }

    /// `steps` repeated applications, returning the state after each.
    pub fn evolve(&self, rho: &CMatrix, steps: usize) -> Result<Vec<CMatrix>> {
        let mut out = Vec::with_capacity(steps);
        let mut cur = rho.clone();
        for _ in 0..steps {
            cur = self.apply(&cur)?;
            out.push(cur.clone());
        }
        Ok(out)
    }
}

/// Builds `{sqrt(I - K1†K1), K1}` after checking the plain first-order pair
/// `{I - K1†K1/2, K1}` is complete to within [`FIRST_ORDER_GUARD`].
fn first_order_pair(jump: CMatrix, dt: f64, n: usize, what: &str) -> Result<NoiseChannel> {
    let shape = HilbertShape::single(n)?;
    let jdj = dagger(&jump.view()).dot(&jump);
    let mut k0 = eye(n);
    let mut excess: f64 = 0.0;
    for i in 0..n {
        let p = jdj[[i, i]].re;
        // (1 - p/2)^2 + p = 1 + p^2/4
        excess = excess.max(p * p / 4.0);
        if p > 1.0 {
            excess = f64::INFINITY;
        }
        k0[[i, i]] = C64::new((1.0 - p).max(0.0).sqrt(), 0.0);
    }
    if excess > FIRST_ORDER_GUARD {
        return Err(Error::StepSize(format!(
            "{what} step dt={dt:e} s breaks first-order completeness by {excess:.3e} on {n} levels"
        )));
    }
    NoiseChannel::new(vec![Operator::new(shape.clone(), k0)?, Operator::new(shape, jump)?], dt)
}

/// Photon loss with level-`n` decay rate `n / t1_fock0`.
pub fn photon_loss_channel(t1_fock0: f64, dt: f64, n: usize) -> Result<NoiseChannel> {
    if !(t1_fock0 > 0.0 && t1_fock0.is_finite()) {
        return Err(Error::InvalidArgument(format!("t1_fock0 {t1_fock0} must be positive")));
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::StepSize(format!("channel step {dt} must be positive")));
    }
    let a = fock::annihilation(n)?.into_matrix();
    first_order_pair(a.mapv(|z| z * (dt / t1_fock0).sqrt()), dt, n, "photon-loss")
}

/// Pure dephasing generated by `n̂` at `rate` (1/s). A zero rate gives the
/// identity map.
pub fn dephasing_channel(rate: f64, dt: f64, n: usize) -> Result<NoiseChannel> {
    if !(rate >= 0.0 && rate.is_finite()) {
        return Err(Error::InvalidArgument(format!("dephasing rate {rate} must be non-negative")));
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::StepSize(format!("channel step {dt} must be positive")));
    }
    let mut k1 = Array2::from_elem((n, n), ZERO);
    for i in 0..n {
        k1[[i, i]] = C64::new(i as f64 * (rate * dt).sqrt(), 0.0);
    }
    first_order_pair(k1, dt, n, "dephasing")
}
