// Copyright 2026 The cavityq Authors
// SPDX-License-Identifier: Apache-2.0

use ndarray::Array1;

use super::linalg::{CMatrix, CVector, C64, ONE, ZERO};
use super::operator::apply_local;
use super::shape::HilbertShape;
use crate::error::{Error, Result};

/// Pure state over a tensor product of truncated subsystems.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    shape: HilbertShape,
    amps: CVector,
}

impl StateVector {
    pub fn new(shape: HilbertShape, amps: CVector) -> Result<Self> {
        if amps.len() != shape.total() {
            return Err(Error::Shape(format!(
                "{} amplitudes for total dimension {}",
                amps.len(),
                shape.total()
            )));
        }
        Ok(Self { shape, amps })
    }

    pub fn from_vec(shape: HilbertShape, amps: Vec<C64>) -> Result<Self> {
        Self::new(shape, Array1::from(amps))
    }

    /// Product basis state with the given level on each subsystem.
    pub fn basis(shape: HilbertShape, levels: &[usize]) -> Result<Self> {
        let idx = shape.flat_index(levels)?;
        let mut amps = Array1::zeros(shape.total());
        amps[idx] = ONE;
        Ok(Self { shape, amps })
    }

    /// Fock state `|n>` of a single mode of dimension `dim`.
    pub fn fock(dim: usize, n: usize) -> Result<Self> {
        Self::basis(HilbertShape::single(dim)?, &[n])
    }

    pub fn shape(&self) -> &HilbertShape {
        &self.shape
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amps
    }

    pub fn into_amplitudes(self) -> CVector {
        self.amps
    }

    pub fn amplitude(&self, idx: usize) -> C64 {
        self.amps[idx]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalize(&mut self) -> Result<()> {
        let n = self.norm();
        if n < 1e-300 || !n.is_finite() {
            return Err(Error::Degenerate("cannot normalize a null state".into()));
        }
        self.amps.mapv_inplace(|z| z / n);
        Ok(())
    }

    pub fn normalized(mut self) -> Result<Self> {
        self.normalize()?;
        Ok(self)
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        self.shape.check_same(&other.shape, "inner product")?;
        Ok(self.amps.iter().zip(other.amps.iter()).map(|(a, b)| a.conj() * b).sum())
    }

    pub fn tensor(&self, rhs: &StateVector) -> Result<Self> {
        let shape = self.shape.concat(&rhs.shape)?;
        let mut amps = Array1::zeros(shape.total());
        let m = rhs.amps.len();
        for (i, &a) in self.amps.iter().enumerate() {
            if a == ZERO {
                continue;
            }
            for (j, &b) in rhs.amps.iter().enumerate() {
                amps[i * m + j] = a * b;
            }
        }
        Ok(Self { shape, amps })
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|z| z.norm_sqr()).collect()
    }

    pub fn scale(&self, c: C64) -> Self {
        Self {
            shape: self.shape.clone(),
            amps: self.amps.mapv(|z| z * c),
        }
    }

    /// Apply a local matrix acting on the listed subsystems.
    pub fn apply_local(&self, local: &CMatrix, targets: &[usize]) -> Result<Self> {
        let amps = apply_local(local, targets, &self.shape, self.amps.clone())?;
        Ok(Self { shape: self.shape.clone(), amps })
    }

    /// Largest absolute amplitude difference.
    pub fn max_diff(&self, other: &StateVector) -> f64 {
        self.amps
            .iter()
            .zip(other.amps.iter())
            .fold(0.0, |acc, (a, b)| acc.max((a - b).norm()))
    }

    /// Euclidean distance `|| self - other ||`.
    pub fn distance(&self, other: &StateVector) -> f64 {
        self.amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// `|<psi1|psi2>|^2`.
pub fn fidelity(psi1: &StateVector, psi2: &StateVector) -> Result<f64> {
    Ok(psi1.inner(psi2)?.norm_sqr())
}
