// SPDX-License-Identifier: Apache-2.0

//! Prefix-circuit DAG: representation, evaluation, validation and metrics.
//!
//! A circuit over `n` inputs is a list of binary gates. Each gate reads two
//! wires (an input or an earlier gate) and carries an explicit level. Levels
//! are checked, never recomputed, so a generator can declare its own
//! schedule. Every operand must sit at a strictly smaller level than the gate
//! that reads it; inputs sit at level 0.
//!
//! Operand order matters: a gate computes `value(left) ∘ value(right)` and the
//! left operand always covers the lower-index part of the prefix.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One end of an edge: a circuit input or a gate output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", content = "index", rename_all = "lowercase")]
pub enum WireRef {
    Input(usize),
    Gate(usize),
}

impl fmt::Display for WireRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WireRef::Input(i) => write!(f, "x{i}"),
            WireRef::Gate(g) => write!(f, "g{g}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GateNode {
    pub id: usize,
    pub left: WireRef,
    pub right: WireRef,
    /// 1-based topological level.
    pub level: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrefixCircuit {
    pub n: usize,
    pub gates: Vec<GateNode>,
    /// `outputs[i]` carries the prefix `x(0) ∘ … ∘ x(i)`.
    pub outputs: Vec<WireRef>,
}

impl PrefixCircuit {
    /// The circuit with no gates; only valid for `n == 1`.
    pub fn trivial() -> Self {
        PrefixCircuit {
            n: 1,
            gates: Vec::new(),
            outputs: vec![WireRef::Input(0)],
        }
    }

    pub fn size(&self) -> usize {
        self.gates.len()
    }

    /// Highest declared gate level, 0 for a gate-free circuit.
    pub fn declared_depth(&self) -> u32 {
        self.gates.iter().map(|g| g.level).max().unwrap_or(0)
    }

    /// Checks every structural invariant: gate ids match positions, operands
    /// exist and sit at a strictly lower level, and there are `n` outputs with
    /// `outputs[0] = x0`.
    pub fn check(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::param("n", "a circuit needs at least one input"));
        }
        for (position, gate) in self.gates.iter().enumerate() {
            if gate.id != position {
                return Err(Error::GateIdMismatch {
                    position,
                    id: gate.id,
                });
            }
            if gate.level == 0 {
                return Err(Error::LevelViolation {
                    gate: gate.id,
                    level: 0,
                    operand_level: 0,
                });
            }
            for wire in [gate.left, gate.right] {
                let operand_level = self.wire_level(wire).ok_or(Error::DanglingRef {
                    gate: gate.id,
                    wire,
                })?;
                if operand_level >= gate.level {
                    return Err(Error::LevelViolation {
                        gate: gate.id,
                        level: gate.level,
                        operand_level,
                    });
                }
            }
        }
        if self.outputs.len() != self.n {
            return Err(Error::BadOutputs(format!(
                "expected {} outputs, found {}",
                self.n,
                self.outputs.len()
            )));
        }
        if self.outputs[0] != WireRef::Input(0) {
            return Err(Error::BadOutputs(format!(
                "outputs[0] must be x0, found {}",
                self.outputs[0]
            )));
        }
        for (i, &wire) in self.outputs.iter().enumerate() {
            if self.wire_level(wire).is_none() {
                return Err(Error::BadOutputs(format!(
                    "outputs[{i}] refers to missing wire {wire}"
                )));
            }
        }
        Ok(())
    }

    fn wire_level(&self, wire: WireRef) -> Option<u32> {
        match wire {
            WireRef::Input(i) if i < self.n => Some(0),
            WireRef::Gate(g) => self.gates.get(g).map(|g| g.level),
            WireRef::Input(_) => None,
        }
    }

    /// Gate indices sorted by level; stable, so equal levels keep list order.
    fn level_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.gates.len()).collect();
        order.sort_by_key(|&g| self.gates[g].level);
        order
    }

    /// Column of a wire: the highest input index its prefix range covers.
    /// For a gate this is the column of its right operand.
    pub fn columns(&self) -> Result<Vec<usize>> {
        self.check()?;
        let mut column = vec![0usize; self.gates.len()];
        for g in self.level_order() {
            column[g] = match self.gates[g].right {
                WireRef::Input(i) => i,
                WireRef::Gate(r) => column[r],
            };
        }
        Ok(column)
    }

    /// Edges of the level-by-column view: `(level, src_column, dst_column)`
    /// means the gate placed at `dst_column` on `level + 1` reads the current
    /// value of `src_column`. Every gate contributes its own column and the
    /// column of its left operand.
    pub fn column_edges(&self) -> Result<Vec<(u32, usize, usize)>> {
        let column = self.columns()?;
        let col_of = |w: WireRef| match w {
            WireRef::Input(i) => i,
            WireRef::Gate(g) => column[g],
        };
        let mut edges = Vec::with_capacity(2 * self.gates.len());
        for (g, gate) in self.gates.iter().enumerate() {
            edges.push((gate.level - 1, col_of(gate.left), column[g]));
            edges.push((gate.level - 1, column[g], column[g]));
        }
        edges.sort_unstable();
        edges.dedup();
        Ok(edges)
    }

    /// Removes gate `id`, letting its right operand pass straight through to
    /// every reader. Used for mutation testing.
    pub fn bypass_gate(&self, id: usize) -> Result<PrefixCircuit> {
        self.check()?;
        if id >= self.gates.len() {
            return Err(Error::param("id", format!("no gate {id}")));
        }
        let replacement = self.gates[id].right;
        let remap = |w: WireRef| -> WireRef {
            match w {
                WireRef::Gate(g) if g == id => replacement,
                WireRef::Gate(g) if g > id => WireRef::Gate(g - 1),
                other => other,
            }
        };
        // The replacement itself may need shifting.
        let replacement_shifted = remap(replacement);
        let fix = |w: WireRef| -> WireRef {
            if w == WireRef::Gate(id) {
                replacement_shifted
            } else {
                remap(w)
            }
        };
        let gates = self
            .gates
            .iter()
            .filter(|g| g.id != id)
            .enumerate()
            .map(|(new_id, g)| GateNode {
                id: new_id,
                left: fix(g.left),
                right: fix(g.right),
                level: g.level,
            })
            .collect();
        Ok(PrefixCircuit {
            n: self.n,
            gates,
            outputs: self.outputs.iter().map(|&w| fix(w)).collect(),
        })
    }
}

/// Incremental circuit construction over [`WireRef`]s.
#[derive(Debug, Clone)]
pub struct CircuitBuilder {
    n: usize,
    gates: Vec<GateNode>,
}

impl CircuitBuilder {
    pub fn new(n: usize) -> Self {
        CircuitBuilder {
            n,
            gates: Vec::new(),
        }
    }

    pub fn inputs(&self) -> Vec<WireRef> {
        (0..self.n).map(WireRef::Input).collect()
    }

    pub fn level(&self, wire: WireRef) -> u32 {
        match wire {
            WireRef::Input(_) => 0,
            WireRef::Gate(g) => self.gates[g].level,
        }
    }

    /// Adds `left ∘ right` at the earliest legal level.
    pub fn gate(&mut self, left: WireRef, right: WireRef) -> WireRef {
        let level = self.level(left).max(self.level(right)) + 1;
        self.gate_at(left, right, level)
    }

    /// Adds `left ∘ right` at a declared level.
    ///
    /// # Panics
    /// If an operand does not sit strictly below `level`; generators call this
    /// only with schedules they computed themselves.
    pub fn gate_at(&mut self, left: WireRef, right: WireRef, level: u32) -> WireRef {
        assert!(
            self.level(left) < level && self.level(right) < level,
            "operand level must be below {level}"
        );
        let id = self.gates.len();
        self.gates.push(GateNode {
            id,
            left,
            right,
            level,
        });
        WireRef::Gate(id)
    }

    /// Copies `inner` into this builder, feeding its inputs from `inputs` and
    /// shifting its levels by `offset`. Returns the wires carrying its outputs.
    pub fn embed(&mut self, inner: &PrefixCircuit, inputs: &[WireRef], offset: u32) -> Vec<WireRef> {
        assert_eq!(inner.n, inputs.len(), "embedded circuit arity");
        let base = self.gates.len();
        let map = |w: WireRef| match w {
            WireRef::Input(i) => inputs[i],
            WireRef::Gate(g) => WireRef::Gate(base + g),
        };
        for gate in &inner.gates {
            self.gate_at(map(gate.left), map(gate.right), gate.level + offset);
        }
        inner.outputs.iter().map(|&w| map(w)).collect()
    }

    pub fn finish(self, outputs: Vec<WireRef>) -> PrefixCircuit {
        PrefixCircuit {
            n: self.n,
            gates: self.gates,
            outputs,
        }
    }
}

/// Evaluates the circuit for an associative operator `op`, gates in level
/// order, with `op(left, right)`.
pub fn evaluate<T, F>(circuit: &PrefixCircuit, inputs: &[T], op: F) -> Result<Vec<T>>
where
    T: Clone,
    F: Fn(&T, &T) -> T,
{
    circuit.check()?;
    if inputs.len() != circuit.n {
        return Err(Error::InputLength {
            expected: circuit.n,
            got: inputs.len(),
        });
    }
    let mut values: Vec<Option<T>> = vec![None; circuit.gates.len()];
    for g in circuit.level_order() {
        let gate = &circuit.gates[g];
        let value = {
            let read = |w: WireRef| -> &T {
                match w {
                    WireRef::Input(i) => &inputs[i],
                    WireRef::Gate(h) => values[h].as_ref().expect("level order"),
                }
            };
            op(read(gate.left), read(gate.right))
        };
        values[g] = Some(value);
    }
    Ok(circuit
        .outputs
        .iter()
        .map(|&w| match w {
            WireRef::Input(i) => inputs[i].clone(),
            WireRef::Gate(g) => values[g].clone().expect("evaluated"),
        })
        .collect())
}

/// Element of the free monoid over input indices, compressed.
///
/// A word is either a contiguous ascending run `lo..=hi` or anything else.
/// Words of the second kind can never be a factor of `[0, 1, …, i]`, so they
/// are collapsed into one absorbing value without changing the outcome of
/// the prefix comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Word {
    Run(usize, usize),
    Scrambled,
}

fn concat(a: &Word, b: &Word) -> Word {
    match (*a, *b) {
        (Word::Run(lo, hi), Word::Run(lo2, hi2)) if lo2 == hi + 1 => Word::Run(lo, hi2),
        _ => Word::Scrambled,
    }
}

/// True iff output `i` computes exactly `x(0) ∘ … ∘ x(i)` over the free
/// monoid, which implies correctness for every associative operator.
pub fn validate_prefix(circuit: &PrefixCircuit) -> Result<bool> {
    let inputs: Vec<Word> = (0..circuit.n).map(|i| Word::Run(i, i)).collect();
    let out = evaluate(circuit, &inputs, concat)?;
    Ok(out
        .iter()
        .enumerate()
        .all(|(i, w)| *w == Word::Run(0, i)))
}

/// Whether designated outputs count towards a wire's fan-out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FanoutConvention {
    /// Only gate-operand edges count.
    #[default]
    OperandsOnly,
    /// Each output tap adds one.
    WithOutputs,
    /// Every wire is a node on each level it stays live; a node's edges go to
    /// the gates of the next level that read it plus its own continuation.
    Leveled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircuitMetrics {
    pub size: usize,
    pub depth: usize,
    pub max_fanout: usize,
    /// `size + depth - (2n - 2)`; never negative for a valid circuit.
    pub deficiency: i64,
    pub valid: bool,
}

pub fn metrics(circuit: &PrefixCircuit) -> Result<CircuitMetrics> {
    metrics_with(circuit, FanoutConvention::OperandsOnly)
}

pub fn metrics_with(circuit: &PrefixCircuit, convention: FanoutConvention) -> Result<CircuitMetrics> {
    circuit.check()?;
    let n = circuit.n;
    let mut depth = vec![0usize; circuit.gates.len()];
    let mut fanout_inputs = vec![0usize; n];
    let mut fanout_gates = vec![0usize; circuit.gates.len()];
    let wire_depth = |depth: &[usize], w: WireRef| match w {
        WireRef::Input(_) => 0,
        WireRef::Gate(g) => depth[g],
    };
    for g in circuit.level_order() {
        let gate = circuit.gates[g];
        depth[g] = 1 + wire_depth(&depth, gate.left).max(wire_depth(&depth, gate.right));
        for w in [gate.left, gate.right] {
            match w {
                WireRef::Input(i) => fanout_inputs[i] += 1,
                WireRef::Gate(h) => fanout_gates[h] += 1,
            }
        }
    }
    if convention == FanoutConvention::WithOutputs {
        for &w in &circuit.outputs {
            match w {
                WireRef::Input(i) => fanout_inputs[i] += 1,
                WireRef::Gate(h) => fanout_gates[h] += 1,
            }
        }
    }
    let leveled = (convention == FanoutConvention::Leveled).then(|| leveled_fanout(circuit));
    let size = circuit.gates.len();
    let max_depth = circuit
        .outputs
        .iter()
        .map(|&w| wire_depth(&depth, w))
        .max()
        .unwrap_or(0);
    let max_fanout = leveled.unwrap_or_else(|| {
        fanout_inputs
            .iter()
            .chain(fanout_gates.iter())
            .copied()
            .max()
            .unwrap_or(0)
    });
    let m = CircuitMetrics {
        size,
        depth: max_depth,
        max_fanout,
        deficiency: 0,
        valid: validate_prefix(circuit)?,
    };
    Ok(CircuitMetrics {
        deficiency: snir_gap(&m, n),
        ..m
    })
}

fn leveled_fanout(circuit: &PrefixCircuit) -> usize {
    use std::collections::BTreeMap;
    let top = circuit.declared_depth();
    let mut reads: BTreeMap<WireRef, Vec<u32>> = BTreeMap::new();
    for g in &circuit.gates {
        reads.entry(g.left).or_default().push(g.level);
        reads.entry(g.right).or_default().push(g.level);
    }
    let is_output: std::collections::HashSet<WireRef> = circuit.outputs.iter().copied().collect();
    let mut best = 0;
    for (wire, mut levels) in reads {
        levels.sort_unstable();
        let last_read = *levels.last().expect("non-empty");
        let output = is_output.contains(&wire);
        let continues = |l: u32| (output && l <= top) || l < last_read;
        for chunk in levels.chunk_by(|a, b| a == b) {
            best = best.max(chunk.len() + continues(chunk[0]) as usize);
        }
    }
    best.max(usize::from(circuit.n >= 2 && top >= 1))
}

/// `S + D - (2n - 2)`; zero means the circuit meets the size-plus-depth lower
/// bound with equality.
pub fn snir_gap(m: &CircuitMetrics, n: usize) -> i64 {
    m.size as i64 + m.depth as i64 - (2 * n as i64 - 2)
}

/// Smallest depth any zero-deficiency circuit on `n` inputs can have:
/// `min{t : F(t) >= n + 1} - 3`, with `F(1) = F(2) = 1`.
pub fn fib_depth_lower_bound(n: usize) -> i64 {
    let target = n as u128 + 1;
    let (mut prev, mut cur) = (0u128, 1u128); // F(0), F(1)
    let mut t = 1i64;
    while cur < target {
        let next = prev + cur;
        prev = cur;
        cur = next;
        t += 1;
    }
    t - 3
}
