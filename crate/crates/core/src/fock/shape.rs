// Copyright 2026 The cavityq Authors
// SPDX-License-Identifier: Apache-2.0

use std::sync::atomic::{AtomicUsize, Ordering};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default upper bound on the total Hilbert-space dimension.
pub const DEFAULT_DIM_CAP: usize = 1 << 20;

static DIM_CAP: AtomicUsize = AtomicUsize::new(DEFAULT_DIM_CAP);

/// Current process-wide dimension cap.
pub fn dim_cap() -> usize {
    DIM_CAP.load(Ordering::Relaxed)
}

/// Override the process-wide dimension cap. Zero restores the default.
pub fn set_dim_cap(cap: usize) {
    let cap = if cap == 0 { DEFAULT_DIM_CAP } else { cap };
    DIM_CAP.store(cap, Ordering::Relaxed);
}

/// Truncation dimensions of each subsystem, first subsystem most significant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct HilbertShape {
    dims: Vec<usize>,
}

impl HilbertShape {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidDimension("shape has no subsystems".into()));
        }
        if let Some(pos) = dims.iter().position(|&d| d == 0) {
            return Err(Error::InvalidDimension(format!("subsystem {pos} has dimension 0")));
        }
        let cap = dim_cap();
        let mut total: usize = 1;
        for &d in &dims {
            total = total.checked_mul(d).filter(|&t| t <= cap).ok_or(Error::Capacity {
                requested: dims.iter().fold(1usize, |a, &b| a.saturating_mul(b)),
                cap,
            })?;
        }
        Ok(Self { dims })
    }

    /// A single subsystem of dimension `n`.
    pub fn single(n: usize) -> Result<Self> {
        Self::new(vec![n])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_subsystems(&self) -> usize {
        self.dims.len()
    }

    pub fn total(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn dim(&self, subsystem: usize) -> Result<usize> {
        self.dims.get(subsystem).copied().ok_or_else(|| {
            Error::Index(format!(
                "subsystem {subsystem} of a {}-subsystem shape",
                self.dims.len()
            ))
        })
    }

    /// Concatenation of two shapes, as produced by a tensor product.
    pub fn concat(&self, other: &HilbertShape) -> Result<Self> {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self::new(dims)
    }

    /// Row-major stride of each subsystem.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.dims.len()];
        for k in (0..self.dims.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * self.dims[k + 1];
        }
        strides
    }

    /// Flat index of a multi-index of per-subsystem levels.
    pub fn flat_index(&self, levels: &[usize]) -> Result<usize> {
        if levels.len() != self.dims.len() {
            return Err(Error::Shape(format!(
                "{} levels given for {} subsystems",
                levels.len(),
                self.dims.len()
            )));
        }
        let mut idx = 0;
        for (k, (&l, &d)) in levels.iter().zip(&self.dims).enumerate() {
            if l >= d {
                return Err(Error::Index(format!("level {l} of subsystem {k} (dim {d})")));
            }
            idx = idx * d + l;
        }
        Ok(idx)
    }

    /// Inverse of [`flat_index`](Self::flat_index).
    pub fn levels(&self, mut flat: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        for k in (0..self.dims.len()).rev() {
            out[k] = flat % self.dims[k];
            flat /= self.dims[k];
        }
        out
    }

    pub(crate) fn check_same(&self, other: &HilbertShape, what: &str) -> Result<()> {
        if self != other {
            return Err(Error::Shape(format!(
                "{what}: {:?} vs {:?}",
                self.dims, other.dims
            )));
        }
        Ok(())
    }
}

impl TryFrom<Vec<usize>> for HilbertShape {
    type Error = Error;

    fn try_from(dims: Vec<usize>) -> Result<Self> {
        Self::new(dims)
    }
}

impl From<HilbertShape> for Vec<usize> {
    fn from(shape: HilbertShape) -> Self {
        shape.dims
    }
}
