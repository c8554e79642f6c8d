// Copyright 2026 The cavityq Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::fock::linalg::{kron, CMatrix, C64, ONE, ZERO};
use crate::fock::{self, pauli, HilbertShape, Operator, Truncated};

fn mode_shape(n: usize) -> Result<HilbertShape> {
    if n == 0 {
        return Err(Error::InvalidDimension("mode dimension must be at least 1".into()));
    }
    HilbertShape::single(n)
}

fn check_level(level: usize, n: usize, what: &str) -> Result<()> {
    if level >= n {
        return Err(Error::Index(format!("{what} level {level} of a dimension-{n} mode")));
    }
    Ok(())
}

/// Selective number-dependent arbitrary phase `diag(e^{i theta_n})`.
pub fn snap(theta: &[f64], n: usize) -> Result<Operator> {
    let shape = mode_shape(n)?;
    if theta.len() != n {
        return Err(Error::Shape(format!("{} SNAP phases for a dimension-{n} mode", theta.len())));
    }
    let diag: Vec<C64> = theta.iter().map(|&t| C64::from_polar(1.0, t)).collect();
    Operator::from_diagonal(shape, &diag)
}

/// SNAP on subsystem `k` of `shape`, identity elsewhere.
pub fn multiqudit_snap(k: usize, theta: &[f64], shape: &HilbertShape) -> Result<Operator> {
    let dim = shape.dim(k)?;
    let local = snap(theta, dim)?;
    Operator::embed(local.matrix(), &[k], shape)
}

/// Levels `n < N - ceil(|a|^2 + 5|a|)` where a truncated displacement is
/// trusted. Always contains the vacuum.
pub fn interior_levels(alpha_abs: f64, n: usize) -> usize {
    let margin = (alpha_abs * alpha_abs + 5.0 * alpha_abs).ceil() as usize;
    n.saturating_sub(margin).max(1)
}

/// Anti-Hermitian generator `alpha a† - alpha* a`.
fn displacement_generator(alpha: C64, n: usize) -> Result<CMatrix> {
    let a = fock::annihilation(n)?.into_matrix();
    let ad = a.t().mapv(|z| z.conj());
    Ok(&ad * alpha - &a * alpha.conj())
}

/// Displacement `D(alpha) = exp(alpha a† - alpha* a)` on `n` levels.
///
/// The result is the exact exponential of the truncated generator, hence
/// unitary on the full truncated space. The attached leakage is the weight
/// `D(alpha)|0>` would put at or above level `n` without truncation.
pub fn displacement(alpha: C64, n: usize) -> Result<Truncated<Operator>> {
    let shape = mode_shape(n)?;
    if !alpha.re.is_finite() || !alpha.im.is_finite() {
        return Err(Error::NonFinite("displacement amplitude".into()));
    }
    let gen = displacement_generator(alpha, n)?;
    let d = fock::expm::expm(&gen)?;
    let leakage = displacement_leakage(alpha, n);
    Ok(Truncated { value: Operator::new(shape, d)?, leakage })
}

fn displacement_leakage(alpha: C64, n: usize) -> f64 {
    let kept: f64 = fock::coherent_amplitudes(alpha, n).iter().map(|c| c.norm_sqr()).sum();
    (1.0 - kept).max(0.0)
}

/// Bloch rotation of a lone qubit.
pub fn qubit_rotation(theta: f64, phi: f64) -> Result<Operator> {
    Operator::new(HilbertShape::single(2)?, pauli::rotation(theta, phi))
}

/// Photon-number-conditional qubit rotation on `qubit ⊗ mode`:
/// `R(theta, phi) ⊗ |n><n| + I ⊗ (I - |n><n|)`.
pub fn cond_rotation(n: usize, theta: f64, phi: f64, mode_dim: usize) -> Result<Operator> {
    check_level(n, mode_dim, "conditioning")?;
    let shape = HilbertShape::new(vec![2, mode_dim])?;
    let proj = fock::projector(mode_dim, n)?.into_matrix();
    let rest = crate::fock::linalg::eye(mode_dim) - &proj;
    let m = kron(&pauli::rotation(theta, phi), &proj) + kron(&crate::fock::linalg::eye(2), &rest);
    Operator::new(shape, m)
}

/// `|i>|j> -> |i>|(j + i) mod N>` on two modes of dimension `n`.
pub fn controlled_increment(n: usize) -> Result<Operator> {
    if n < 2 {
        return Err(Error::InvalidDimension("controlled increment needs N >= 2".into()));
    }
    let shape = HilbertShape::new(vec![n, n])?;
    let mut m = Array2::zeros((n * n, n * n));
    for i in 0..n {
        for j in 0..n {
            m[[i * n + (j + i) % n, i * n + j]] = ONE;
        }
    }
    Operator::new(shape, m)
}

/// SO(2) rotation mixing levels `m` and `n`:
/// `|m> -> cos theta |m> + sin theta |n>`, `|n> -> -sin theta |m> + cos theta |n>`.
pub fn givens(m: usize, n: usize, theta: f64, dim: usize) -> Result<Operator> {
    let shape = mode_shape(dim)?;
    check_level(m, dim, "Givens")?;
    check_level(n, dim, "Givens")?;
    if m == n {
        return Err(Error::InvalidArgument("Givens rotation needs two distinct levels".into()));
    }
    let mut u = crate::fock::linalg::eye(dim);
    let (c, s) = (theta.cos(), theta.sin());
    u[[m, m]] = C64::new(c, 0.0);
    u[[n, n]] = C64::new(c, 0.0);
    u[[n, m]] = C64::new(s, 0.0);
    u[[m, n]] = C64::new(-s, 0.0);
    Operator::new(shape, u)
}

/// Transposition of the amplitudes of `|m>` and `|n>`.
pub fn phase_swap(m: usize, n: usize, dim: usize) -> Result<Operator> {
    let shape = mode_shape(dim)?;
    check_level(m, dim, "swap")?;
    check_level(n, dim, "swap")?;
    if m == n {
        return Err(Error::InvalidArgument("phase swap needs two distinct levels".into()));
    }
    let mut u = crate::fock::linalg::eye(dim);
    u[[m, m]] = ZERO;
    u[[n, n]] = ZERO;
    u[[m, n]] = ONE;
    u[[n, m]] = ONE;
    Operator::new(shape, u)
}

/// Discrete Fourier transform over Z_N, `F_jk = e^{2πijk/N} / sqrt(N)`.
pub fn fourier(n: usize) -> Result<Operator> {
    if n < 2 {
        return Err(Error::InvalidDimension("Fourier gate needs N >= 2".into()));
    }
    let shape = HilbertShape::single(n)?;
    let norm = 1.0 / (n as f64).sqrt();
    let m = Array2::from_shape_fn((n, n), |(j, k)| {
        // Reduce the exponent mod N before forming the angle.
        let e = (j * k) % n;
        C64::from_polar(norm, 2.0 * PI * e as f64 / n as f64)
    });
    Operator::new(shape, m)
}

/// Echoed conditional displacement on `qubit ⊗ mode`:
/// `|e><g| ⊗ D(beta/2) + |g><e| ⊗ D(-beta/2)`.
pub fn ecd(beta: C64, mode_dim: usize) -> Result<Truncated<Operator>> {
    let shape = HilbertShape::new(vec![2, mode_dim])?;
    let plus = displacement(beta / 2.0, mode_dim)?;
    let minus = displacement(-beta / 2.0, mode_dim)?;
    let m = kron(&pauli::raise(), plus.value.matrix()) + kron(&pauli::lower(), minus.value.matrix());
    Ok(Truncated {
        value: Operator::new(shape, m)?,
        leakage: plus.leakage.max(minus.leakage),
    })
}

/// Big-endian binary value of a qubit basis string, i.e. the Fock level a
/// register of `bits.len()` qubits maps to inside one qudit.
pub fn qubit_binary_encode(bits: &[u8], qudit_dim: usize) -> Result<usize> {
    let d = bits.len();
    if d >= usize::BITS as usize || qudit_dim < (1usize << d) {
        return Err(Error::InvalidDimension(format!(
            "{d} qubits need a qudit of dimension >= 2^{d}, got {qudit_dim}"
        )));
    }
    bits.iter().try_fold(0usize, |acc, &b| match b {
        0 | 1 => Ok(acc * 2 + b as usize),
        _ => Err(Error::InvalidArgument(format!("bit value {b}"))),
    })
}

/// Parse a `|0101>`-style label (brackets optional) into bits.
pub fn parse_bits(label: &str) -> Result<Vec<u8>> {
    label
        .trim()
        .trim_start_matches('|')
        .trim_end_matches('>')
        .chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            _ => Err(Error::InvalidArgument(format!("'{c}' is not a bit"))),
        })
        .collect()
}

/// Inverse of [`qubit_binary_encode`] for a register of `num_bits` qubits.
pub fn qubit_binary_decode(index: usize, num_bits: usize) -> Result<Vec<u8>> {
    if num_bits < usize::BITS as usize && index >> num_bits != 0 {
        return Err(Error::Index(format!("level {index} needs more than {num_bits} bits")));
    }
    Ok((0..num_bits).rev().map(|k| ((index >> k) & 1) as u8).collect())
}

/// Qubit X on the first factor of `qubit ⊗ mode`.
#[cfg(test)]
pub(crate) fn qubit_x_on(mode_dim: usize) -> Result<Operator> {
    Operator::new(
        HilbertShape::new(vec![2, mode_dim])?,
        kron(&pauli::x(), &crate::fock::linalg::eye(mode_dim)),
    )
}
