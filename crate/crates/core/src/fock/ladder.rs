// Copyright 2026 The cavityq Authors
// SPDX-License-Identifier: Apache-2.0

//! Ladder operators and coherent states of a truncated harmonic mode.

use ndarray::Array2;

use super::linalg::{C64, ONE};
use super::operator::Operator;
use super::shape::HilbertShape;
use super::state::StateVector;
use crate::error::{Error, Result};

/// Leakage above which a truncated construction is flagged.
pub const LEAKAGE_WARN: f64 = 1e-6;

/// A value built in a truncated space, with the probability mass that the
/// truncation discarded.
#[derive(Debug, Clone, PartialEq)]
pub struct Truncated<T> {
    pub value: T,
    pub leakage: f64,
}

impl<T> Truncated<T> {
    pub fn exact(value: T) -> Self {
        Self { value, leakage: 0.0 }
    }

    /// True if the discarded mass exceeds [`LEAKAGE_WARN`].
    pub fn warning(&self) -> bool {
        self.leakage > LEAKAGE_WARN
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Truncated<U> {
        Truncated { value: f(self.value), leakage: self.leakage }
    }
}

fn check_dim(n: usize) -> Result<HilbertShape> {
    if n == 0 {
        return Err(Error::InvalidDimension("mode dimension must be at least 1".into()));
    }
    HilbertShape::single(n)
}

/// Truncated annihilation operator, `<n-1|a|n> = sqrt(n)`.
pub fn annihilation(n: usize) -> Result<Operator> {
    let shape = check_dim(n)?;
    let mut m = Array2::zeros((n, n));
    for k in 1..n {
        m[[k - 1, k]] = C64::new((k as f64).sqrt(), 0.0);
    }
    Operator::new(shape, m)
}

pub fn creation(n: usize) -> Result<Operator> {
    Ok(annihilation(n)?.dagger())
}

/// Photon-number operator `diag(0, 1, ..., n-1)`.
pub fn number(n: usize) -> Result<Operator> {
    let shape = check_dim(n)?;
    let diag: Vec<C64> = (0..n).map(|k| C64::new(k as f64, 0.0)).collect();
    Operator::from_diagonal(shape, &diag)
}

/// `|k><k|` on a mode of dimension `n`.
pub fn projector(n: usize, k: usize) -> Result<Operator> {
    let shape = check_dim(n)?;
    if k >= n {
        return Err(Error::Index(format!("level {k} of a dimension-{n} mode")));
    }
    let mut m = Array2::zeros((n, n));
    m[[k, k]] = ONE;
    Operator::new(shape, m)
}

/// Untruncated coherent-state amplitudes `e^{-|a|^2/2} a^n / sqrt(n!)` for
/// `n < dim`, computed by recurrence.
pub(crate) fn coherent_amplitudes(alpha: C64, dim: usize) -> Vec<C64> {
    let mut out = Vec::with_capacity(dim);
    let mut c = C64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    for n in 0..dim {
        if n > 0 {
            c = c * alpha / (n as f64).sqrt();
        }
        out.push(c);
    }
    out
}

/// Coherent state `|alpha>` truncated to `dim` levels and renormalised.
/// The returned leakage is the norm deficit before renormalisation.
pub fn coherent_state(alpha: C64, dim: usize) -> Result<Truncated<StateVector>> {
    let shape = check_dim(dim)?;
    if !alpha.re.is_finite() || !alpha.im.is_finite() {
        return Err(Error::NonFinite("coherent amplitude".into()));
    }
    let amps = coherent_amplitudes(alpha, dim);
    let kept: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
    let state = StateVector::from_vec(shape, amps)?.normalized()?;
    Ok(Truncated { value: state, leakage: (1.0 - kept).max(0.0) })
}

/// Recommended truncation for amplitude `|alpha|`: `|a|^2 + 5|a| + 10`.
pub fn recommended_dim(alpha_abs: f64) -> usize {
    (alpha_abs * alpha_abs + 5.0 * alpha_abs + 10.0).ceil() as usize
}
