// Copyright 2026 The cavityq Authors
// SPDX-License-Identifier: Apache-2.0

//! Simulation toolkit for cavity-based qudit processors: truncated Fock-space
//! states and operators, the SNAP/displacement gate vocabulary, dispersive
//! device estimators, bosonic codes with photon loss, pulse-level optimal
//! control, pitch-and-catch state transfer and Trotterised qudit dynamics.

pub mod device;
pub mod error;
pub mod fit;
pub mod fock;
pub mod gates;
pub mod hep;
pub mod noise;
pub mod pulse;
pub mod qst;

pub use error::{Error, Result};
