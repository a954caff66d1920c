// SPDX-License-Identifier: Apache-2.0

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum GateKind {
    Not,
    Cnot,
    Toffoli,
}

/// A reversible gate. The last qubit is the target; the others are controls.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QGate {
    pub kind: GateKind,
    pub qubits: Vec<usize>,
    /// Parallel Toffoli layer, 1-based. `None` for X and CNOT.
    pub toffoli_layer: Option<u32>,
    /// Label of the emitting stage, e.g. `1:generate`.
    pub step: &'static str,
    /// Clears a value computed earlier; such Toffolis can be replaced by a
    /// measurement and a classically controlled phase fix.
    pub uncompute: bool,
}

impl QGate {
    pub fn target(&self) -> usize {
        *self.qubits.last().expect("gate has a target")
    }

    pub fn controls(&self) -> &[usize] {
        &self.qubits[..self.qubits.len() - 1]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Register {
    pub name: String,
    pub start: usize,
    pub len: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct QuantumCircuit {
    pub qubits: usize,
    pub registers: Vec<Register>,
    pub gates: Vec<QGate>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct AdderResources {
    pub toffoli_count: usize,
    /// Longest Toffoli chain in the read/write dependence order.
    pub toffoli_depth: usize,
    /// Qubits outside the `a` and `b` registers.
    pub ancilla_count: usize,
    /// Number of distinct `toffoli_layer` labels.
    pub layer_count: usize,
    /// Same counts with uncompute Toffolis treated as measurement-based.
    pub compute_toffoli_count: usize,
    pub compute_toffoli_depth: usize,
}

impl QuantumCircuit {
    pub fn register(&self, name: &str) -> Option<&Register> {
        self.registers.iter().find(|r| r.name == name)
    }

    /// Qubit `i` of register `name`.
    ///
    /// # Panics
    /// If the register does not exist or `i` is out of range.
    pub fn qubit(&self, name: &str, i: usize) -> usize {
        let r = self.register(name).unwrap_or_else(|| panic!("no register {name}"));
        assert!(i < r.len, "{name}[{i}] out of range");
        r.start + i
    }

    pub fn toffoli_count(&self) -> usize {
        self.gates.iter().filter(|g| g.kind == GateKind::Toffoli).count()
    }

    /// Assigns strict as-soon-as-possible Toffoli layers: a Toffoli goes one
    /// layer after the latest layer touching any of its qubits, so Toffolis
    /// sharing a layer never share a qubit.
    pub fn assign_layers(&mut self) {
        let mut last = vec![0u32; self.qubits];
        for g in &mut self.gates {
            let t = g.qubits.iter().map(|&q| last[q]).max().unwrap_or(0);
            let placed = match g.kind {
                GateKind::Toffoli => t + 1,
                _ => t,
            };
            for &q in &g.qubits {
                last[q] = placed;
            }
            g.toffoli_layer = (g.kind == GateKind::Toffoli).then_some(placed);
        }
    }

    /// Structural check: qubit indices in range, no qubit repeated within a
    /// gate or within a labelled layer.
    pub fn check(&self) -> Result<()> {
        use std::collections::HashMap;
        let mut seen: HashMap<(u32, usize), ()> = HashMap::new();
        for g in &self.gates {
            for (k, &q) in g.qubits.iter().enumerate() {
                if q >= self.qubits {
                    return Err(Error::QubitOutOfRange {
                        qubit: q,
                        qubits: self.qubits,
                    });
                }
                if g.qubits[..k].contains(&q) {
                    return Err(Error::param("qubits", format!("qubit {q} repeated in one gate")));
                }
                if let Some(layer) = g.toffoli_layer {
                    if seen.insert((layer, q), ()).is_some() {
                        return Err(Error::LayerOverlap { layer, qubit: q });
                    }
                }
            }
        }
        Ok(())
    }

    /// Gates in reverse order; every gate here is its own inverse.
    pub fn inverse(&self) -> QuantumCircuit {
        let mut inv = self.clone();
        inv.gates.reverse();
        inv.assign_layers();
        inv
    }

    /// Copy with gate `index` removed, layers reassigned.
    pub fn without_gate(&self, index: usize) -> QuantumCircuit {
        let mut c = self.clone();
        c.gates.remove(index);
        c.assign_layers();
        c
    }

    /// One gate per line: `T c0 c1 t`, `CX c t`, `X t`, with a
    /// `# layer <step>` line whenever the step label changes.
    pub fn netlist(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# qubits {}", self.qubits).unwrap();
        for r in &self.registers {
            writeln!(out, "# register {} {}..{}", r.name, r.start, r.start + r.len).unwrap();
        }
        let mut step = "";
        for g in &self.gates {
            if g.step != step {
                step = g.step;
                writeln!(out, "# layer {step}").unwrap();
            }
            let op = match g.kind {
                GateKind::Not => "X",
                GateKind::Cnot => "CX",
                GateKind::Toffoli => "T",
            };
            let qs: Vec<String> = g.qubits.iter().map(|q| q.to_string()).collect();
            writeln!(out, "{op} {}", qs.join(" ")).unwrap();
        }
        out
    }
}

/// Applies the gates to a full classical assignment.
pub fn simulate(circuit: &QuantumCircuit, initial: &[Option<bool>]) -> Result<Vec<bool>> {
    let mut state = Vec::with_capacity(circuit.qubits);
    for q in 0..circuit.qubits {
        match initial.get(q).copied().flatten() {
            Some(v) => state.push(v),
            None => return Err(Error::UnassignedQubit { qubit: q }),
        }
    }
    circuit.check()?;
    for g in &circuit.gates {
        let fire = g.controls().iter().all(|&c| state[c]);
        if fire {
            let t = g.target();
            state[t] = !state[t];
        }
    }
    Ok(state)
}

/// Bit-sliced simulation: bit `j` of `state[q]` is qubit `q` in lane `j`.
pub fn simulate_lanes(circuit: &QuantumCircuit, state: &mut [u64]) {
    assert_eq!(state.len(), circuit.qubits, "one word per qubit");
    for g in &circuit.gates {
        let q = &g.qubits;
        let flip = match g.kind {
            GateKind::Not => u64::MAX,
            GateKind::Cnot => state[q[0]],
            GateKind::Toffoli => state[q[0]] & state[q[1]],
        };
        state[g.target()] ^= flip;
    }
}

/// Longest weighted chain where reads commute with reads but a write waits
/// for earlier reads and writes of its target.
fn dependence_depth(circuit: &QuantumCircuit, weight: impl Fn(&QGate) -> usize) -> usize {
    let mut written = vec![0usize; circuit.qubits];
    let mut read = vec![0usize; circuit.qubits];
    let mut best = 0;
    for g in &circuit.gates {
        let t = g.target();
        let start = g
            .controls()
            .iter()
            .map(|&c| written[c])
            .chain([written[t], read[t]])
            .max()
            .unwrap_or(0);
        let end = start + weight(g);
        for &c in g.controls() {
            read[c] = read[c].max(end);
        }
        written[t] = end;
        best = best.max(end);
    }
    best
}

pub fn resources(circuit: &QuantumCircuit) -> Result<AdderResources> {
    circuit.check()?;
    let is_t = |g: &QGate| g.kind == GateKind::Toffoli;
    let data_len = |name| circuit.register(name).map_or(0, |r| r.len);
    let layers: std::collections::BTreeSet<u32> =
        circuit.gates.iter().filter_map(|g| g.toffoli_layer).collect();
    Ok(AdderResources {
        toffoli_count: circuit.toffoli_count(),
        toffoli_depth: dependence_depth(circuit, |g| is_t(g) as usize),
        ancilla_count: circuit.qubits - data_len("a") - data_len("b"),
        layer_count: layers.len(),
        compute_toffoli_count: circuit.gates.iter().filter(|g| is_t(g) && !g.uncompute).count(),
        compute_toffoli_depth: dependence_depth(circuit, |g| (is_t(g) && !g.uncompute) as usize),
    })
}
