// Copyright 2026 The cavityq Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::linalg::{C64, I, ZERO};
use crate::fock::{self, HilbertShape, StateVector, Truncated};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CatParity {
    Even,
    Odd,
}

impl CatParity {
    fn sign(self) -> f64 {
        match self {
            CatParity::Even => 1.0,
            CatParity::Odd => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CatAxis {
    Real,
    Imag,
}

/// `(|b> ± |-b>)` normalised, with `b = alpha` or `i alpha`.
pub fn cat_state(alpha: C64, parity: CatParity, axis: CatAxis, n: usize) -> Result<Truncated<StateVector>> {
    let shape = HilbertShape::single(n)?;
    let beta = match axis {
        CatAxis::Real => alpha,
        CatAxis::Imag => alpha * I,
    };
    let s = parity.sign();
    let plus = fock::coherent_amplitudes(beta, n);
    let minus = fock::coherent_amplitudes(-beta, n);
    let amps: Vec<C64> = plus.iter().zip(&minus).map(|(p, m)| p + m * s).collect();
    // Untruncated squared norm 2 ± 2 exp(-2|alpha|^2).
    let x = -2.0 * alpha.norm_sqr();
    let full = match parity {
        CatParity::Even => 2.0 + 2.0 * x.exp(),
        CatParity::Odd => -2.0 * x.exp_m1(),
    };
    let psi = StateVector::from_vec(shape, amps)?;
    let kept = psi.norm_sqr();
    if full == 0.0 || kept < 1e-300 {
        return Err(Error::Degenerate(format!("cat state with alpha={alpha} and {parity:?} parity is null")));
    }
    Ok(Truncated { value: psi.normalized()?, leakage: (1.0 - kept / full).max(0.0) })
}

/// The four normalised cat states built on `alpha`.
#[derive(Debug, Clone, PartialEq)]
pub struct CatBasis {
    pub alpha: C64,
    pub plus_real: StateVector,
    pub minus_real: StateVector,
    pub plus_imag: StateVector,
    pub minus_imag: StateVector,
}

impl CatBasis {
    pub fn new(alpha: C64, n: usize) -> Result<Truncated<CatBasis>> {
        let mut leakage: f64 = 0.0;
        let mut make = |p, a| -> Result<StateVector> {
            let t = cat_state(alpha, p, a, n)?;
            leakage = leakage.max(t.leakage);
            Ok(t.value)
        };
        let basis = CatBasis {
            alpha,
            plus_real: make(CatParity::Even, CatAxis::Real)?,
            minus_real: make(CatParity::Odd, CatAxis::Real)?,
            plus_imag: make(CatParity::Even, CatAxis::Imag)?,
            minus_imag: make(CatParity::Odd, CatAxis::Imag)?,
        };
        Ok(Truncated { value: basis, leakage })
    }
}

/// Logical state `c_g |C+_alpha> + c_e |C+_{i alpha}>`, normalised. The two
/// basis states overlap, so the norm is fixed after combining.
pub fn cat_encode(c_g: C64, c_e: C64, alpha: C64, n: usize) -> Result<Truncated<StateVector>> {
    if ((c_g.norm_sqr() + c_e.norm_sqr()) - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!("|c_g|^2 + |c_e|^2 must be 1, got coefficients {c_g}, {c_e}")));
    }
    let g = cat_state(alpha, CatParity::Even, CatAxis::Real, n)?;
    let e = cat_state(alpha, CatParity::Even, CatAxis::Imag, n)?;
    let amps = g.value.amplitudes() * c_g + e.value.amplitudes() * c_e;
    let psi = StateVector::new(g.value.shape().clone(), amps)?.normalized()?;
    Ok(Truncated { value: psi, leakage: g.leakage.max(e.leakage) })
}

/// Joint photon parity `<(-1)^(n_1 + n_2 + ...)>`.
pub fn parity(psi: &StateVector) -> f64 {
    let shape = psi.shape();
    psi.amplitudes()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let total: usize = shape.levels(i).iter().sum();
            if total % 2 == 0 {
                c.norm_sqr()
            } else {
                -c.norm_sqr()
            }
        })
        .sum()
}

/// Photon parity of subsystem `k` alone.
pub fn subsystem_parity(psi: &StateVector, k: usize) -> Result<f64> {
    let probs = fock::mode_probabilities(psi, &[k])?;
    Ok(probs[0].iter().enumerate().map(|(n, p)| if n % 2 == 0 { *p } else { -p }).sum())
}

/// `<n̂>` of subsystem `k`.
pub fn mean_photon_number(psi: &StateVector, k: usize) -> Result<f64> {
    let probs = fock::mode_probabilities(psi, &[k])?;
    Ok(probs[0].iter().enumerate().map(|(n, p)| n as f64 * p).sum())
}

/// `a^k psi / |a^k psi|` on subsystem `mode`.
pub fn apply_photon_losses(psi: &StateVector, mode: usize, k: usize) -> Result<StateVector> {
    let dim = psi.shape().dim(mode)?;
    let a = fock::annihilation(dim)?.into_matrix();
    let mut out = psi.clone();
    for _ in 0..k {
        out = out.apply_local(&a, &[mode])?;
    }
    if out.norm() < 1e-12 {
        return Err(Error::Degenerate(format!("{k} photon losses annihilate the state")));
    }
    out.normalized()
}

/// Weight of `psi` inside the span of `basis`, after orthonormalising it.
pub fn subspace_weight(psi: &StateVector, basis: &[StateVector]) -> Result<f64> {
    let mut ortho: Vec<StateVector> = Vec::new();
    for b in basis {
        let mut v = b.clone();
        for q in &ortho {
            let c = q.inner(&v)?;
            v = StateVector::new(v.shape().clone(), v.amplitudes() - &(q.amplitudes() * c))?;
        }
        if v.norm() > 1e-10 {
            ortho.push(v.normalized()?);
        }
    }
    let norm = psi.norm_sqr();
    if norm == 0.0 {
        return Err(Error::Degenerate("null state has no subspace weight".into()));
    }
    let mut w = 0.0;
    for q in &ortho {
        w += q.inner(psi)?.norm_sqr();
    }
    Ok(w / norm)
}

/// Smallest single-loss binomial code: `(|0> + |4>)/√2` and `|2>`.
pub fn binomial_codewords(n: usize) -> Result<(StateVector, StateVector)> {
    if n < 5 {
        return Err(Error::InvalidDimension(format!("binomial codewords need N >= 5, got {n}")));
    }
    let shape = HilbertShape::single(n)?;
    let mut zero = vec![ZERO; n];
    zero[0] = C64::new(FRAC_1_SQRT_2, 0.0);
    zero[4] = C64::new(FRAC_1_SQRT_2, 0.0);
    Ok((StateVector::from_vec(shape, zero)?, StateVector::fock(n, 2)?))
}
