// SPDX-License-Identifier: Apache-2.0

//! JSON and Graphviz serialization of [`PrefixCircuit`].

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::circuit::{PrefixCircuit, WireRef};
use crate::error::{Error, Result};

pub fn export_json(circuit: &PrefixCircuit) -> String {
    serde_json::to_string_pretty(circuit).expect("circuit serializes")
}

/// Parses and structurally checks a circuit. Errors carry the path of the
/// offending field, e.g. `gates[3].level`.
pub fn import_json(text: &str) -> Result<PrefixCircuit> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let circuit: PrefixCircuit = serde_path_to_error::deserialize(de).map_err(|e| Error::Schema {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })?;
    circuit.check().map_err(|e| {
        let path = match &e {
            Error::DanglingRef { gate, wire } => {
                let g = &circuit.gates[*gate];
                let side = if g.left == *wire { "left" } else { "right" };
                format!("gates[{gate}].{side}")
            }
            Error::LevelViolation { gate, .. } => format!("gates[{gate}].level"),
            Error::GateIdMismatch { position, .. } => format!("gates[{position}].id"),
            Error::BadOutputs(_) => "outputs".to_string(),
            _ => "n".to_string(),
        };
        Error::Schema {
            path,
            message: e.to_string(),
        }
    })?;
    Ok(circuit)
}

/// Inputs are sources on the top rank, gates are grouped one rank per level,
/// and each prefix output is a sink node `y<i>`.
pub fn export_dot(circuit: &PrefixCircuit) -> String {
    let mut out = String::new();
    let node = |w: WireRef| w.to_string();
    writeln!(out, "digraph prefix {{").unwrap();
    writeln!(out, "  rankdir=TB;").unwrap();
    writeln!(out, "  node [shape=circle, fontsize=10];").unwrap();

    write!(out, "  {{ rank=source;").unwrap();
    for i in 0..circuit.n {
        write!(out, " x{i} [shape=box];").unwrap();
    }
    writeln!(out, " }}").unwrap();

    let mut by_level: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for g in &circuit.gates {
        by_level.entry(g.level).or_default().push(g.id);
    }
    for (level, ids) in &by_level {
        write!(out, "  {{ rank=same; /* level {level} */").unwrap();
        for id in ids {
            write!(out, " g{id} [label=\"∘\"];").unwrap();
        }
        writeln!(out, " }}").unwrap();
    }

    for g in &circuit.gates {
        writeln!(out, "  {} -> g{} [taillabel=\"L\"];", node(g.left), g.id).unwrap();
        writeln!(out, "  {} -> g{};", node(g.right), g.id).unwrap();
    }

    write!(out, "  {{ rank=sink;").unwrap();
    for i in 0..circuit.outputs.len() {
        write!(out, " y{i} [shape=plaintext];").unwrap();
    }
    writeln!(out, " }}").unwrap();
    for (i, &w) in circuit.outputs.iter().enumerate() {
        writeln!(out, "  {} -> y{i} [style=dashed];", node(w)).unwrap();
    }
    writeln!(out, "}}").unwrap();
    out
}
