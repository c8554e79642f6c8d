// Copyright 2026 The cavityq Authors
// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use super::library as lib;
use crate::error::{Error, Result};
use crate::fock::linalg::{dagger, CMatrix, C64};
use crate::fock::{HilbertShape, StateVector, Truncated};

/// Sign convention for displacement amplitudes read from circuit files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DisplacementConvention {
    /// `D(alpha) = exp(alpha a† - alpha* a)`.
    #[default]
    Standard,
    /// `exp(alpha a - alpha* a†)`, which is the standard `D(-alpha)`.
    Negated,
}

impl DisplacementConvention {
    pub fn to_standard(self, alpha: C64) -> C64 {
        match self {
            DisplacementConvention::Standard => alpha,
            DisplacementConvention::Negated => -alpha,
        }
    }
}

/// One gate of a circuit, addressed to subsystems of the circuit shape.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GateSpec {
    Snap {
        target: usize,
        theta: Vec<f64>,
    },
    /// Same action as `Snap`; kept as its own kind for multi-mode circuits.
    MultiSnap {
        target: usize,
        theta: Vec<f64>,
    },
    Displacement {
        target: usize,
        alpha: C64,
    },
    CondRotation {
        qubit: usize,
        mode: usize,
        n: usize,
        theta: f64,
        phi: f64,
    },
    QubitRotation {
        target: usize,
        theta: f64,
        phi: f64,
    },
    ControlledIncrement {
        control: usize,
        target: usize,
    },
    Givens {
        target: usize,
        m: usize,
        n: usize,
        theta: f64,
    },
    PhaseSwap {
        target: usize,
        m: usize,
        n: usize,
    },
    Fourier {
        target: usize,
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        inverse: bool,
    },
    Ecd {
        qubit: usize,
        mode: usize,
        beta: C64,
    },
}

impl GateSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            GateSpec::Snap { .. } => "snap",
            GateSpec::MultiSnap { .. } => "multi_snap",
            GateSpec::Displacement { .. } => "displacement",
            GateSpec::CondRotation { .. } => "cond_rotation",
            GateSpec::QubitRotation { .. } => "qubit_rotation",
            GateSpec::ControlledIncrement { .. } => "controlled_increment",
            GateSpec::Givens { .. } => "givens",
            GateSpec::PhaseSwap { .. } => "phase_swap",
            GateSpec::Fourier { .. } => "fourier",
            GateSpec::Ecd { .. } => "ecd",
        }
    }

    /// Subsystems the gate acts on, most significant first.
    pub fn targets(&self) -> Vec<usize> {
        match *self {
            GateSpec::Snap { target, .. }
            | GateSpec::MultiSnap { target, .. }
            | GateSpec::Displacement { target, .. }
            | GateSpec::QubitRotation { target, .. }
            | GateSpec::Givens { target, .. }
            | GateSpec::PhaseSwap { target, .. }
            | GateSpec::Fourier { target, .. } => vec![target],
            GateSpec::CondRotation { qubit, mode, .. } | GateSpec::Ecd { qubit, mode, .. } => {
                vec![qubit, mode]
            }
            GateSpec::ControlledIncrement { control, target } => vec![control, target],
        }
    }

    /// The gate's matrix on its own targets.
    pub fn local_matrix(
        &self,
        shape: &HilbertShape,
        convention: DisplacementConvention,
    ) -> Result<Truncated<CMatrix>> {
        let targets = self.targets();
        let dims: Vec<usize> = targets.iter().map(|&t| shape.dim(t)).collect::<Result<_>>()?;
        let qubit_dim = |d: usize| {
            if d == 2 {
                Ok(())
            } else {
                Err(Error::Shape(format!("{} needs a qubit subsystem, got dim {d}", self.kind())))
            }
        };
        let exact = |op: crate::fock::Operator| Truncated::exact(op.into_matrix());
        Ok(match self {
            GateSpec::Snap { theta, .. } | GateSpec::MultiSnap { theta, .. } => {
                exact(lib::snap(theta, dims[0])?)
            }
            GateSpec::Displacement { alpha, .. } => {
                lib::displacement(convention.to_standard(*alpha), dims[0])?.map(|op| op.into_matrix())
            }
            GateSpec::CondRotation { n, theta, phi, .. } => {
                qubit_dim(dims[0])?;
                exact(lib::cond_rotation(*n, *theta, *phi, dims[1])?)
            }
            GateSpec::QubitRotation { theta, phi, .. } => {
                qubit_dim(dims[0])?;
                exact(lib::qubit_rotation(*theta, *phi)?)
            }
            GateSpec::ControlledIncrement { .. } => {
                if dims[0] != dims[1] {
                    return Err(Error::Shape(format!(
                        "controlled increment on unequal dims {} and {}",
                        dims[0], dims[1]
                    )));
                }
                exact(lib::controlled_increment(dims[0])?)
            }
            GateSpec::Givens { m, n, theta, .. } => exact(lib::givens(*m, *n, *theta, dims[0])?),
            GateSpec::PhaseSwap { m, n, .. } => exact(lib::phase_swap(*m, *n, dims[0])?),
            GateSpec::Fourier { inverse, .. } => {
                let f = lib::fourier(dims[0])?.into_matrix();
                Truncated::exact(if *inverse { dagger(&f.view()) } else { f })
            }
            GateSpec::Ecd { beta, .. } => {
                qubit_dim(dims[0])?;
                let b = convention.to_standard(*beta);
                lib::ecd(b, dims[1])?.map(|op| op.into_matrix())
            }
        })
    }
}

/// A time-ordered gate list on a fixed Hilbert shape.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Circuit {
    pub shape: HilbertShape,
    #[serde(default)]
    pub displacement_convention: DisplacementConvention,
    pub gates: Vec<GateSpec>,
}

/// A gate whose construction discarded more than the warning threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncationWarning {
    pub gate: usize,
    pub leakage: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CircuitOutcome {
    pub state: StateVector,
    pub warnings: Vec<TruncationWarning>,
}

impl Circuit {
    pub fn new(shape: HilbertShape, gates: Vec<GateSpec>) -> Self {
        Self { shape, displacement_convention: DisplacementConvention::Standard, gates }
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Check every gate against the shape, reporting the first bad gate.
    pub fn validate(&self) -> Result<()> {
        for (i, g) in self.gates.iter().enumerate() {
            g.local_matrix(&self.shape, self.displacement_convention)
                .map_err(|e| e.at_gate(i))?;
        }
        Ok(())
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Circuit) -> Result<Circuit> {
        self.shape.check_same(&other.shape, "circuit concatenation")?;
        if self.displacement_convention != other.displacement_convention {
            return Err(Error::InvalidArgument("circuits use different displacement conventions".into()));
        }
        let mut gates = self.gates.clone();
        gates.extend(other.gates.iter().cloned());
        Ok(Circuit { gates, ..self.clone() })
    }
}

/// Apply the gates in list order.
pub fn apply_circuit(circuit: &Circuit, psi: &StateVector) -> Result<CircuitOutcome> {
    circuit.shape.check_same(psi.shape(), "circuit input state")?;
    let mut state = psi.clone();
    let mut warnings = Vec::new();
    for (i, gate) in circuit.gates.iter().enumerate() {
        let local = gate
            .local_matrix(&circuit.shape, circuit.displacement_convention)
            .map_err(|e| e.at_gate(i))?;
        if local.warning() {
            warnings.push(TruncationWarning { gate: i, leakage: local.leakage });
        }
        state = state.apply_local(&local.value, &gate.targets()).map_err(|e| e.at_gate(i))?;
    }
    Ok(CircuitOutcome { state, warnings })
}

/// Unitary of the whole circuit, column by column. The leakage is the
/// largest reported by any gate.
pub fn circuit_unitary(circuit: &Circuit) -> Result<Truncated<crate::fock::Operator>> {
    let n = circuit.shape.total();
    let mut u = CMatrix::zeros((n, n));
    let mut leakage: f64 = 0.0;
    for col in 0..n {
        let levels = circuit.shape.levels(col);
        let out = apply_circuit(circuit, &StateVector::basis(circuit.shape.clone(), &levels)?)?;
        leakage = out.warnings.iter().fold(leakage, |m, w| m.max(w.leakage));
        u.column_mut(col).assign(out.state.amplitudes());
    }
    Ok(Truncated { value: crate::fock::Operator::new(circuit.shape.clone(), u)?, leakage })
}
