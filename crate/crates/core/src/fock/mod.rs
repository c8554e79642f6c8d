// Copyright 2026 The cavityq Authors
// SPDX-License-Identifier: Apache-2.0

//! Dense linear algebra over truncated multi-mode Fock spaces.
//!
//! Flat indices are row-major with the first listed subsystem most
//! significant, so `|i>|j>` on dims `[d0, d1]` sits at `i * d1 + j`.

pub mod expm;
mod ladder;
pub mod linalg;
mod operator;
mod reduce;
mod shape;
mod state;

pub use ladder::{
    annihilation, coherent_state, creation, number, projector, recommended_dim, Truncated,
    LEAKAGE_WARN,
};
pub(crate) use ladder::coherent_amplitudes;
pub use linalg::{CMatrix, CVector, C64};
pub use operator::Operator;
pub use reduce::{mode_probabilities, purity, reduced_density_matrix};
pub use shape::{dim_cap, set_dim_cap, HilbertShape, DEFAULT_DIM_CAP};
pub use state::{fidelity, StateVector};

/// `exp(-i H t)`; shorthand for [`Operator::expm`].
pub fn expm(h: &Operator, t: f64) -> crate::Result<Operator> {
    h.expm(t)
}

/// Kronecker product of two operators.
pub fn tensor(a: &Operator, b: &Operator) -> crate::Result<Operator> {
    a.tensor(b)
}

/// Qubit Pauli matrices in the `(|g>, |e>)` basis.
pub mod pauli {
    use ndarray::array;

    use super::linalg::{CMatrix, C64, I, ONE, ZERO};

    pub fn x() -> CMatrix {
        array![[ZERO, ONE], [ONE, ZERO]]
    }

    pub fn y() -> CMatrix {
        array![[ZERO, -I], [I, ZERO]]
    }

    pub fn z() -> CMatrix {
        array![[ONE, ZERO], [ZERO, -ONE]]
    }

    /// `|e><g|`.
    pub fn raise() -> CMatrix {
        array![[ZERO, ZERO], [ONE, ZERO]]
    }

    /// `|g><e|`.
    pub fn lower() -> CMatrix {
        array![[ZERO, ONE], [ZERO, ZERO]]
    }

    pub fn ground_projector() -> CMatrix {
        array![[ONE, ZERO], [ZERO, ZERO]]
    }

    pub fn excited_projector() -> CMatrix {
        array![[ZERO, ZERO], [ZERO, ONE]]
    }

    /// Bloch rotation `exp(-i theta/2 (cos phi X + sin phi Y))`.
    pub fn rotation(theta: f64, phi: f64) -> CMatrix {
        let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
        let off = |sign: f64| C64::from_polar(s, sign * phi) * (-I);
        array![[C64::new(c, 0.0), off(-1.0)], [off(1.0), C64::new(c, 0.0)]]
    }
}
