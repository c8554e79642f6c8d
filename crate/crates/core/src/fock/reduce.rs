// Copyright 2026 The cavityq Authors
// SPDX-License-Identifier: Apache-2.0

//! Reduced states and readout marginals.

use ndarray::Array2;

use super::linalg::{CMatrix, ZERO};
use super::shape::HilbertShape;
use super::state::StateVector;
use crate::error::{Error, Result};

fn validate_keep(shape: &HilbertShape, keep: &[usize]) -> Result<()> {
    if keep.is_empty() {
        return Err(Error::InvalidArgument("no subsystems to keep".into()));
    }
    for (i, &k) in keep.iter().enumerate() {
        if k >= shape.num_subsystems() {
            return Err(Error::Index(format!(
                "subsystem {k} of a {}-subsystem shape",
                shape.num_subsystems()
            )));
        }
        if keep[..i].contains(&k) {
            return Err(Error::InvalidArgument(format!("subsystem {k} listed twice")));
        }
    }
    Ok(())
}

/// Reduced density matrix on `keep` (in the given order), tracing out the rest.
pub fn reduced_density_matrix(psi: &StateVector, keep: &[usize]) -> Result<CMatrix> {
    let shape = psi.shape();
    validate_keep(shape, keep)?;
    let dims = shape.dims();
    let kept_dim: usize = keep.iter().map(|&k| dims[k]).product();
    let traced: Vec<usize> = (0..dims.len()).filter(|k| !keep.contains(k)).collect();
    let traced_dim: usize = traced.iter().map(|&k| dims[k]).product();

    // Arrange amplitudes as a kept_dim x traced_dim matrix M; rho = M M†.
    let mut m = Array2::from_elem((kept_dim, traced_dim), ZERO);
    for (flat, &amp) in psi.amplitudes().iter().enumerate() {
        let levels = shape.levels(flat);
        let row = keep.iter().fold(0, |acc, &k| acc * dims[k] + levels[k]);
        let col = traced.iter().fold(0, |acc, &k| acc * dims[k] + levels[k]);
        m[[row, col]] = amp;
    }
    Ok(m.dot(&m.t().mapv(|z| z.conj())))
}

/// Marginal outcome distribution of each kept subsystem.
pub fn mode_probabilities(psi: &StateVector, keep: &[usize]) -> Result<Vec<Vec<f64>>> {
    let shape = psi.shape();
    validate_keep(shape, keep)?;
    let mut out: Vec<Vec<f64>> = keep.iter().map(|&k| vec![0.0; shape.dims()[k]]).collect();
    for (flat, amp) in psi.amplitudes().iter().enumerate() {
        let p = amp.norm_sqr();
        if p == 0.0 {
            continue;
        }
        let levels = shape.levels(flat);
        for (slot, &k) in out.iter_mut().zip(keep) {
            slot[levels[k]] += p;
        }
    }
    Ok(out)
}

/// `Tr(rho^2)`.
pub fn purity(rho: &CMatrix) -> f64 {
    rho.iter().map(|z| z.norm_sqr()).sum()
}
