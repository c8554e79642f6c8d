// Copyright 2026 The cavityq Authors
// SPDX-License-Identifier: Apache-2.0

//! Small dense complex kernels shared by the rest of the crate.

use ndarray::{Array1, Array2, ArrayView2, Axis};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMatrix = Array2<C64>;
pub type CVector = Array1<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

pub fn eye(n: usize) -> CMatrix {
    Array2::from_diag_elem(n, ONE)
}

/// Conjugate transpose.
pub fn dagger(m: &ArrayView2<C64>) -> CMatrix {
    m.t().mapv(|z| z.conj())
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ar, ac) = a.dim();
    let (br, bc) = b.dim();
    let mut out = Array2::zeros((ar * br, ac * bc));
    for ((i, j), &x) in a.indexed_iter() {
        if x == ZERO {
            continue;
        }
        let mut block = out.slice_mut(ndarray::s![i * br..(i + 1) * br, j * bc..(j + 1) * bc]);
        block.zip_mut_with(b, |o, &y| *o = x * y);
    }
    out
}

/// Maximum absolute entry.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// One-norm (maximum absolute column sum).
pub fn norm1(m: &CMatrix) -> f64 {
    m.axis_iter(Axis(1))
        .map(|col| col.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Frobenius norm.
pub fn norm_fro(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `max |U†U - I|` entrywise.
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    let prod = dagger(&u.view()).dot(u);
    max_abs(&(prod - eye(u.nrows())))
}

/// `max |H - H†|` entrywise.
pub fn hermiticity_defect(h: &CMatrix) -> f64 {
    max_abs(&(h - &dagger(&h.view())))
}

pub fn is_diagonal(m: &CMatrix) -> bool {
    m.indexed_iter().all(|((i, j), z)| i == j || *z == ZERO)
}

pub fn trace(m: &CMatrix) -> C64 {
    m.diag().iter().copied().sum()
}

/// `Tr(A† B)` without forming the product.
pub fn inner_trace(a: &CMatrix, b: &CMatrix) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// Solve `A X = B` by Gaussian elimination with partial pivoting.
/// Returns `None` if `A` is numerically singular.
pub fn solve(mut a: CMatrix, mut b: CMatrix) -> Option<CMatrix> {
    let n = a.nrows();
    for col in 0..n {
        let mut piv = col;
        let mut best = a[[col, col]].norm();
        for r in col + 1..n {
            let v = a[[r, col]].norm();
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best == 0.0 || !best.is_finite() {
            return None;
        }
        if piv != col {
            for c in 0..n {
                a.swap([col, c], [piv, c]);
            }
            for c in 0..b.ncols() {
                b.swap([col, c], [piv, c]);
            }
        }
        let inv = ONE / a[[col, col]];
        for r in col + 1..n {
            let f = a[[r, col]] * inv;
            if f == ZERO {
                continue;
            }
            for c in col..n {
                let t = a[[col, c]];
                a[[r, c]] -= f * t;
            }
            for c in 0..b.ncols() {
                let t = b[[col, c]];
                b[[r, c]] -= f * t;
            }
        }
    }
    for col in (0..n).rev() {
        let inv = ONE / a[[col, col]];
        for c in 0..b.ncols() {
            let mut acc = b[[col, c]];
            for k in col + 1..n {
                acc -= a[[col, k]] * b[[k, c]];
            }
            b[[col, c]] = acc * inv;
        }
    }
    Some(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn solve_recovers_known_solution() {
        let a = array![
            [C64::new(2.0, 1.0), C64::new(0.0, -1.0)],
            [C64::new(1.0, 0.0), C64::new(3.0, 0.5)]
        ];
        let x = array![[C64::new(1.0, 2.0)], [C64::new(-0.5, 0.0)]];
        let b = a.dot(&x);
        let got = solve(a, b).unwrap();
        assert!(max_abs(&(got - x)) < 1e-14);
    }

    #[test]
    fn solve_flags_singular() {
        let a = Array2::zeros((2, 2));
        assert!(solve(a, eye(2)).is_none());
    }

    #[test]
    fn kron_of_identities() {
        assert_eq!(kron(&eye(2), &eye(3)), eye(6));
    }
}
