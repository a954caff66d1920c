// SPDX-License-Identifier: Apache-2.0

//! Prefix circuits built from Kronecker decompositions of the triangular
//! all-ones matrix, the classic prefix networks they are compared against,
//! and a reversible carry-lookahead adder derived from the construction.

pub mod circuit;
pub mod classic;
pub mod compare;
pub mod error;
pub mod export;
pub mod kron;
pub mod kronecker;
pub mod quantum;

pub use circuit::{
    evaluate, fib_depth_lower_bound, metrics, metrics_with, snir_gap, validate_prefix,
    CircuitBuilder, CircuitMetrics, FanoutConvention, GateNode, PrefixCircuit, WireRef,
};
pub use error::{Error, Result};
