// SPDX-License-Identifier: Apache-2.0

//! Reversible circuits over X, CNOT and Toffoli gates, and the adder built
//! on the block-recursive carry network.

mod adder;
mod circuit;

pub use adder::{
    build_adder, toffoli_depth_bound, verify_adder, verify_circuit, AdderReport, Counterexample,
    Sampling,
};
pub use circuit::{
    resources, simulate, simulate_lanes, AdderResources, GateKind, QGate, QuantumCircuit, Register,
};

use serde::Serialize;

/// Machine-readable resource summary.
#[derive(Debug, Clone, Serialize)]
pub struct ResourceReport {
    pub n: usize,
    pub s: usize,
    pub qubits: usize,
    pub toffoli_count: usize,
    pub toffoli_depth: usize,
    pub ancillas: usize,
    pub layer_count: usize,
    pub compute_toffoli_count: usize,
    pub compute_toffoli_depth: usize,
    pub depth_bound: usize,
}

pub fn resource_report(n: usize, s: usize) -> crate::Result<ResourceReport> {
    let c = build_adder(n, s)?;
    let r = resources(&c)?;
    Ok(ResourceReport {
        n,
        s,
        qubits: c.qubits,
        toffoli_count: r.toffoli_count,
        toffoli_depth: r.toffoli_depth,
        ancillas: r.ancilla_count,
        layer_count: r.layer_count,
        compute_toffoli_count: r.compute_toffoli_count,
        compute_toffoli_depth: r.compute_toffoli_depth,
        depth_bound: toffoli_depth_bound(n, s),
    })
}
