// Copyright 2026 The cavityq Authors
// SPDX-License-Identifier: Apache-2.0

use ndarray::Array2;

use super::expm;
use super::linalg::{self, CMatrix, C64, I, ZERO};
use super::shape::HilbertShape;
use super::state::StateVector;
use crate::error::{Error, Result};

/// A dense square matrix acting on a tagged Hilbert space.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    shape: HilbertShape,
    matrix: CMatrix,
}

impl Operator {
    pub fn new(shape: HilbertShape, matrix: CMatrix) -> Result<Self> {
        let n = shape.total();
        if matrix.dim() != (n, n) {
            return Err(Error::Shape(format!(
                "matrix is {:?} but shape {:?} needs {n}x{n}",
                matrix.dim(),
                shape.dims()
            )));
        }
        Ok(Self { shape, matrix })
    }

    pub fn identity(shape: HilbertShape) -> Self {
        let n = shape.total();
        Self { shape, matrix: linalg::eye(n) }
    }

    pub fn zeros(shape: HilbertShape) -> Self {
        let n = shape.total();
        Self { shape, matrix: Array2::zeros((n, n)) }
    }

    pub fn from_diagonal(shape: HilbertShape, diag: &[C64]) -> Result<Self> {
        let n = shape.total();
        if diag.len() != n {
            return Err(Error::Shape(format!("{} diagonal entries for dimension {n}", diag.len())));
        }
        let mut m = Array2::zeros((n, n));
        for (i, &d) in diag.iter().enumerate() {
            m[[i, i]] = d;
        }
        Ok(Self { shape, matrix: m })
    }

    pub fn shape(&self) -> &HilbertShape {
        &self.shape
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.matrix[[row, col]]
    }

    pub fn dagger(&self) -> Self {
        Self {
            shape: self.shape.clone(),
            matrix: linalg::dagger(&self.matrix.view()),
        }
    }

    /// Matrix product `self · rhs`.
    pub fn compose(&self, rhs: &Operator) -> Result<Self> {
        self.shape.check_same(&rhs.shape, "operator product")?;
        Ok(Self {
            shape: self.shape.clone(),
            matrix: self.matrix.dot(&rhs.matrix),
        })
    }

    pub fn add(&self, rhs: &Operator) -> Result<Self> {
        self.shape.check_same(&rhs.shape, "operator sum")?;
        Ok(Self {
            shape: self.shape.clone(),
            matrix: &self.matrix + &rhs.matrix,
        })
    }

    pub fn scale(&self, c: C64) -> Self {
        Self {
            shape: self.shape.clone(),
            matrix: self.matrix.mapv(|z| z * c),
        }
    }

    pub fn tensor(&self, rhs: &Operator) -> Result<Self> {
        let shape = self.shape.concat(&rhs.shape)?;
        Ok(Self {
            shape,
            matrix: linalg::kron(&self.matrix, &rhs.matrix),
        })
    }

    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        self.shape.check_same(psi.shape(), "operator application")?;
        StateVector::new(self.shape.clone(), self.matrix.dot(psi.amplitudes()))
    }

    /// `exp(-i H t)`.
    pub fn expm(&self, t: f64) -> Result<Self> {
        if !t.is_finite() {
            return Err(Error::NonFinite("evolution time".into()));
        }
        let arg = self.matrix.mapv(|z| -I * z * t);
        Ok(Self {
            shape: self.shape.clone(),
            matrix: expm::expm(&arg)?,
        })
    }

    /// `max |U†U - I|`.
    pub fn unitarity_defect(&self) -> f64 {
        linalg::unitarity_defect(&self.matrix)
    }

    /// Unitarity defect restricted to a set of columns:
    /// `max |(U†U - I)_{ij}|` for `i, j` in `cols`.
    pub fn subspace_unitarity_defect(&self, cols: &[usize]) -> f64 {
        let mut worst: f64 = 0.0;
        for (a, &i) in cols.iter().enumerate() {
            for &j in &cols[a..] {
                let mut acc = ZERO;
                for r in 0..self.dim() {
                    acc += self.matrix[[r, i]].conj() * self.matrix[[r, j]];
                }
                if i == j {
                    acc -= 1.0;
                }
                worst = worst.max(acc.norm());
            }
        }
        worst
    }

    pub fn hermiticity_defect(&self) -> f64 {
        linalg::hermiticity_defect(&self.matrix)
    }

    /// Embed a local operator acting on `targets` (in the given order) of
    /// `shape`, with identity on every other subsystem.
    pub fn embed(local: &CMatrix, targets: &[usize], shape: &HilbertShape) -> Result<Self> {
        let n = shape.total();
        let mut m = Array2::zeros((n, n));
        for col in 0..n {
            let mut e = ndarray::Array1::zeros(n);
            e[col] = linalg::ONE;
            let out = apply_local(local, targets, shape, e)?;
            m.column_mut(col).assign(&out);
        }
        Self::new(shape.clone(), m)
    }
}

/// Apply a local operator on `targets` to a flat amplitude vector without
/// materialising the full-space matrix.
pub(crate) fn apply_local(
    local: &CMatrix,
    targets: &[usize],
    shape: &HilbertShape,
    amps: ndarray::Array1<C64>,
) -> Result<ndarray::Array1<C64>> {
    let dims = shape.dims();
    let mut local_dim = 1;
    for (i, &t) in targets.iter().enumerate() {
        if t >= dims.len() {
            return Err(Error::Index(format!("target subsystem {t} of {}", dims.len())));
        }
        if targets[..i].contains(&t) {
            return Err(Error::InvalidArgument(format!("repeated target subsystem {t}")));
        }
        local_dim *= dims[t];
    }
    if local.dim() != (local_dim, local_dim) {
        return Err(Error::Shape(format!(
            "local operator {:?} does not match target dimension {local_dim}",
            local.dim()
        )));
    }
    let strides = shape.strides();

    // Offsets of each local basis state relative to a base index.
    let mut offsets = vec![0usize; local_dim];
    for (l, off) in offsets.iter_mut().enumerate() {
        let mut rem = l;
        for &t in targets.iter().rev() {
            *off += (rem % dims[t]) * strides[t];
            rem /= dims[t];
        }
    }
    let rest: Vec<usize> = (0..dims.len()).filter(|k| !targets.contains(k)).collect();
    let rest_total: usize = rest.iter().map(|&k| dims[k]).product();

    let mut out = amps.clone();
    let mut buf = vec![ZERO; local_dim];
    for r in 0..rest_total {
        let mut base = 0;
        let mut rem = r;
        for &k in rest.iter().rev() {
            base += (rem % dims[k]) * strides[k];
            rem /= dims[k];
        }
        for (b, &off) in buf.iter_mut().zip(&offsets) {
            *b = amps[base + off];
        }
        for (row, &off) in offsets.iter().enumerate() {
            let mut acc = ZERO;
            for (col, &x) in buf.iter().enumerate() {
                acc += local[[row, col]] * x;
            }
            out[base + off] = acc;
        }
    }
    Ok(out)
}
