// Copyright 2026 The cavityq Authors
// SPDX-License-Identifier: Apache-2.0

//! Matrix exponential via scaling-and-squaring with a Padé(13) approximant,
//! plus the block-triangular Fréchet derivative used by the pulse optimizer.

use ndarray::{s, Array2};

use super::linalg::{eye, is_diagonal, norm1, solve, CMatrix, C64, ZERO};
use crate::error::{Error, Result};

const THETA_13: f64 = 5.371_920_351_148_152;

const PADE_13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

/// `exp(A)` for a square complex matrix.
pub fn expm(a: &CMatrix) -> Result<CMatrix> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::Shape(format!("expm of a {}x{} matrix", n, a.ncols())));
    }
    if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite("matrix exponential argument".into()));
    }
    if n == 0 {
        return Ok(Array2::zeros((0, 0)));
    }
    if is_diagonal(a) {
        let mut out = Array2::zeros((n, n));
        for i in 0..n {
            out[[i, i]] = a[[i, i]].exp();
        }
        return Ok(out);
    }

    let norm = norm1(a);
    let squarings = if norm > THETA_13 {
        (norm / THETA_13).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a.mapv(|z| z * 2f64.powi(-squarings));
    let mut r = pade13(&scaled)?;
    for _ in 0..squarings {
        r = r.dot(&r);
    }
    Ok(r)
}

fn pade13(a: &CMatrix) -> Result<CMatrix> {
    let n = a.nrows();
    let id = eye(n);
    let a2 = a.dot(a);
    let a4 = a2.dot(&a2);
    let a6 = a4.dot(&a2);
    let b = |k: usize| C64::new(PADE_13[k], 0.0);

    let u_inner = &a6 * b(13) + &a4 * b(11) + &a2 * b(9);
    let u = a.dot(&(a6.dot(&u_inner) + &a6 * b(7) + &a4 * b(5) + &a2 * b(3) + &id * b(1)));
    let v_inner = &a6 * b(12) + &a4 * b(10) + &a2 * b(8);
    let v = a6.dot(&v_inner) + &a6 * b(6) + &a4 * b(4) + &a2 * b(2) + &id * b(0);

    solve(&v - &u, &v + &u).ok_or_else(|| Error::NonFinite("singular Padé denominator".into()))
}

/// `exp(A)` together with the Fréchet derivative `L(A, E)`, read off the
/// upper-right block of `exp([[A, E], [0, A]])`.
pub fn expm_frechet(a: &CMatrix, e: &CMatrix) -> Result<(CMatrix, CMatrix)> {
    let n = a.nrows();
    if e.dim() != (n, n) {
        return Err(Error::Shape("Fréchet direction must match the argument".into()));
    }
    let mut big = Array2::from_elem((2 * n, 2 * n), ZERO);
    big.slice_mut(s![..n, ..n]).assign(a);
    big.slice_mut(s![n.., n..]).assign(a);
    big.slice_mut(s![..n, n..]).assign(e);
    let out = expm(&big)?;
    Ok((
        out.slice(s![..n, ..n]).to_owned(),
        out.slice(s![..n, n..]).to_owned(),
    ))
}
