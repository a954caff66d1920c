// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

use crate::circuit::WireRef;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("gate {gate}: operand {wire} does not exist")]
    DanglingRef { gate: usize, wire: WireRef },

    #[error("gate {gate} at level {level} reads an operand at level {operand_level}")]
    LevelViolation {
        gate: usize,
        level: u32,
        operand_level: u32,
    },

    #[error("gate at position {position} carries id {id}")]
    GateIdMismatch { position: usize, id: usize },

    #[error("outputs: {0}")]
    BadOutputs(String),

    #[error("expected {expected} operands, got {got}")]
    InputLength { expected: usize, got: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("{path}: {message}")]
    Schema { path: String, message: String },

    #[error("qubit {qubit} is used twice in toffoli layer {layer}")]
    LayerOverlap { layer: u32, qubit: usize },

    #[error("qubit {qubit} out of range ({qubits} qubits)")]
    QubitOutOfRange { qubit: usize, qubits: usize },

    #[error("qubit {qubit} has no initial value")]
    UnassignedQubit { qubit: usize },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
