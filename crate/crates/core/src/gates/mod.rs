// Copyright 2026 The cavityq Authors
// SPDX-License-Identifier: Apache-2.0

//! Qudit gate vocabulary: SNAP, displacement, conditional rotations, Givens
//! rotations, phase swaps, Z_N Fourier, controlled increment and ECD, plus a
//! circuit type that applies them in order.
//!
//! Two-subsystem gates on `qubit ⊗ mode` put the qubit first, with `|g>` as
//! level 0 and `|e>` as level 1.

mod circuit;
mod library;

pub use circuit::{
    apply_circuit, circuit_unitary, Circuit, CircuitOutcome, DisplacementConvention, GateSpec, TruncationWarning,
};
pub use library::{
    cond_rotation, controlled_increment, displacement, ecd, fourier, givens, interior_levels,
    multiqudit_snap, parse_bits, phase_swap, qubit_binary_decode, qubit_binary_encode,
    qubit_rotation, snap,
};
