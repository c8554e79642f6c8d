// Copyright 2026 The cavityq Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("total dimension {requested} exceeds the cap of {cap}")]
    Capacity { requested: usize, cap: usize },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("index out of range: {0}")]
    Index(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("step size too large: {0}")]
    StepSize(String),

    #[error("detuning is degenerate: {0}")]
    DegenerateDetuning(String),

    #[error("resonant denominator: {0}")]
    Singularity(String),

    #[error("pulse bandwidth too wide: {0}")]
    Bandwidth(String),

    #[error("gate {index}: {source}")]
    Gate {
        index: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Attach the position of the offending gate in a circuit.
    pub fn at_gate(self, index: usize) -> Self {
        Error::Gate {
            index,
            source: Box::new(self),
        }
    }

    /// Errors that stem from arithmetic or integration rather than from
    /// malformed input.
    pub fn is_numeric(&self) -> bool {
        match self {
            Error::NonFinite(_)
            | Error::Degenerate(_)
            | Error::StepSize(_)
            | Error::DegenerateDetuning(_)
            | Error::Singularity(_) => true,
            Error::Gate { source, .. } => source.is_numeric(),
            _ => false,
        }
    }

    pub fn is_capacity(&self) -> bool {
        match self {
            Error::Capacity { .. } => true,
            Error::Gate { source, .. } => source.is_capacity(),
            _ => false,
        }
    }
}
