// SPDX-License-Identifier: Apache-2.0

//! Reversible carry-lookahead adder whose carry network is the block
//! recursion of [`crate::kronecker`].
//!
//! Registers: `a` (unchanged), `b` (becomes the sum), `g` (ends holding the
//! carry out of every position, `g[n-1]` is the carry-out), `p1, p2, …` (the
//! propagate products of each recursion level) and `z` (fan-out copies).
//! Every `p` and `z` qubit starts and ends at 0.

use std::collections::HashMap;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::circuit::{simulate_lanes, GateKind, QGate, QuantumCircuit, Register};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Sym {
    A(usize),
    B(usize),
    G(usize),
    /// Product register `p{t}` (t >= 1), slot `i`.
    P(usize, usize),
    Z(usize),
}

struct Emitter {
    s: usize,
    gates: Vec<(GateKind, Vec<Sym>, &'static str, bool)>,
    products: Vec<usize>,
    z_used: usize,
}

impl Emitter {
    fn push(&mut self, kind: GateKind, qs: Vec<Sym>, step: &'static str, uncompute: bool) {
        self.gates.push((kind, qs, step, uncompute));
    }

    fn toffoli(&mut self, c0: Sym, c1: Sym, t: Sym, step: &'static str) {
        self.push(GateKind::Toffoli, vec![c0, c1, t], step, false);
    }

    fn fresh_product(&mut self, t: usize) -> Sym {
        if self.products.len() < t {
            self.products.resize(t, 0);
        }
        let slot = self.products[t - 1];
        self.products[t - 1] += 1;
        Sym::P(t, slot)
    }

    /// Turns `G[i]` into the generate signal of the whole range `0..=i`.
    /// `P[i]` is the propagate signal of node `i` alone (`P[0]` unused).
    fn level(&mut self, depth: usize, g: &[Sym], p: &[Option<Sym>]) {
        let s = self.s;
        let m = g.len();
        let prop = |i: usize| p[i].expect("propagate present for i >= 1");
        if m <= s {
            for i in 1..m {
                self.toffoli(g[i - 1], prop(i), g[i], "k:serial");
            }
            return;
        }
        let blocks: Vec<std::ops::Range<usize>> =
            (0..m.div_ceil(s)).map(|b| b * s..(b * s + s).min(m)).collect();
        let nb = blocks.len();

        // Propagate product of block start .. i, for nodes outside block 0.
        let mut span: HashMap<usize, Sym> = HashMap::new();
        for blk in &blocks[1..] {
            span.insert(blk.start, prop(blk.start));
        }
        let mut computed = Vec::new();
        for k in 1..s {
            for (bi, blk) in blocks.iter().enumerate() {
                let i = blk.start + k;
                if i >= blk.end {
                    continue;
                }
                self.toffoli(g[i - 1], prop(i), g[i], "k:serial");
                if bi >= 1 {
                    let q = self.fresh_product(depth + 1);
                    let step = if depth == 0 && k == 1 { "2:pair-propagate" } else { "k:serial" };
                    let (x, y) = (span[&(i - 1)], prop(i));
                    self.toffoli(x, y, q, step);
                    span.insert(i, q);
                    computed.push((x, y, q, depth == 0 && k == 1));
                }
            }
        }

        let g2: Vec<Sym> = blocks[..nb - 1].iter().map(|b| g[b.end - 1]).collect();
        let p2: Vec<Option<Sym>> = std::iter::once(None)
            .chain(blocks[1..nb - 1].iter().map(|b| Some(span[&(b.end - 1)])))
            .collect();
        self.level(depth + 1, &g2, &p2);

        let mut copies = Vec::new();
        for bi in 1..nb {
            let blk = blocks[bi].clone();
            let targets = if bi == nb - 1 { blk } else { blk.start..blk.end - 1 };
            let carry = g[blocks[bi - 1].end - 1];
            let mut controls = vec![carry];
            for _ in 1..targets.len() {
                let z = Sym::Z(copies.len());
                self.push(GateKind::Cnot, vec![carry, z], "*:fan-out", false);
                controls.push(z);
                copies.push((carry, z));
            }
            for (c, i) in controls.into_iter().zip(targets) {
                self.toffoli(c, span[&i], g[i], "1:finalize");
            }
        }
        self.z_used = self.z_used.max(copies.len());
        for (carry, z) in copies {
            self.push(GateKind::Cnot, vec![carry, z], "*:fan-out", true);
        }
        for (x, y, q, first) in computed.into_iter().rev() {
            let step = if first { "3:uncompute-p1" } else { "1:uncompute" };
            self.push(GateKind::Toffoli, vec![x, y, q], step, true);
        }
    }
}

/// Emits the adder for `n`-bit operands with block size `s`.
pub fn build_adder(n: usize, s: usize) -> Result<QuantumCircuit> {
    if n == 0 {
        return Err(Error::param("n", "must be at least 1"));
    }
    if s < 2 {
        return Err(Error::param("s", format!("block size must be at least 2, got {s}")));
    }
    let mut e = Emitter {
        s,
        gates: Vec::new(),
        products: Vec::new(),
        z_used: 0,
    };
    for i in 0..n {
        e.toffoli(Sym::A(i), Sym::B(i), Sym::G(i), "1:generate");
    }
    for i in 0..n {
        e.push(GateKind::Cnot, vec![Sym::A(i), Sym::B(i)], "*:propagate", false);
    }
    let g: Vec<Sym> = (0..n).map(Sym::G).collect();
    let p: Vec<Option<Sym>> = (0..n).map(|i| (i > 0).then_some(Sym::B(i))).collect();
    e.level(0, &g, &p);
    for i in (1..n).rev() {
        e.push(GateKind::Cnot, vec![Sym::G(i - 1), Sym::B(i)], "4:sum", false);
    }

    let mut registers = Vec::new();
    let mut start = 0;
    let mut add = |name: String, len: usize| {
        registers.push(Register { name, start, len });
        start += len;
    };
    add("a".into(), n);
    add("b".into(), n);
    add("g".into(), n);
    for (t, &len) in e.products.iter().enumerate() {
        add(format!("p{}", t + 1), len);
    }
    if e.z_used > 0 {
        add("z".into(), e.z_used);
    }
    let base = |name: &str| registers.iter().find(|r| r.name == name).map_or(0, |r| r.start);
    let p_base: Vec<usize> = (1..=e.products.len()).map(|t| base(&format!("p{t}"))).collect();
    let z_base = base("z");
    let locate = |q: Sym| match q {
        Sym::A(i) => i,
        Sym::B(i) => n + i,
        Sym::G(i) => 2 * n + i,
        Sym::P(t, i) => p_base[t - 1] + i,
        Sym::Z(i) => z_base + i,
    };
    let gates = e
        .gates
        .into_iter()
        .map(|(kind, qs, step, uncompute)| QGate {
            kind,
            qubits: qs.into_iter().map(locate).collect(),
            toffoli_layer: None,
            step,
            uncompute,
        })
        .collect();
    let qubits = registers.last().map_or(0, |r| r.start + r.len);
    let mut c = QuantumCircuit {
        qubits,
        registers,
        gates,
    };
    c.assign_layers();
    Ok(c)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub n: usize,
    pub s: usize,
    /// Operands and observed sum as hexadecimal strings.
    pub a: String,
    pub b: String,
    pub observed: String,
    pub expected: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdderReport {
    pub n: usize,
    pub s: usize,
    pub exhaustive: bool,
    pub cases: u64,
    pub counterexample: Option<Counterexample>,
}

impl AdderReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sampling {
    /// All `4^n` operand pairs.
    Exhaustive,
    Random { trials: u64, seed: u64 },
}

/// Exhaustive for `n <= 10`, otherwise `trials` random pairs.
pub fn verify_adder(n: usize, s: usize, trials: u64) -> Result<AdderReport> {
    let sampling = if n <= 10 {
        Sampling::Exhaustive
    } else {
        Sampling::Random { trials, seed: 0x5eed }
    };
    verify_circuit(&build_adder(n, s)?, s, sampling)
}

fn hex(bits: impl Iterator<Item = bool>) -> String {
    let bits: Vec<bool> = bits.collect();
    let digits: String = bits
        .chunks(4)
        .rev()
        .map(|c| {
            let v = c.iter().enumerate().fold(0u32, |acc, (k, &b)| acc | (b as u32) << k);
            char::from_digit(v, 16).expect("nibble")
        })
        .collect();
    format!("0x{digits}")
}

/// Checks an adder-shaped circuit (registers `a`, `b`, `g`, optional `p*`
/// and `z`) against a ripple-carry oracle, 64 cases per pass.
pub fn verify_circuit(c: &QuantumCircuit, s: usize, sampling: Sampling) -> Result<AdderReport> {
    let n = c
        .register("a")
        .ok_or_else(|| Error::param("circuit", "no register a"))?
        .len;
    c.check()?;
    let (exhaustive, total) = match sampling {
        Sampling::Exhaustive => {
            if n > 16 {
                return Err(Error::param("n", "exhaustive checking is limited to n <= 16"));
            }
            (true, 1u64 << (2 * n))
        }
        Sampling::Random { trials, .. } => (false, trials),
    };
    let mut rng = match sampling {
        Sampling::Random { seed, .. } => ChaCha8Rng::seed_from_u64(seed),
        Sampling::Exhaustive => ChaCha8Rng::seed_from_u64(0),
    };
    let aux: Vec<usize> = c
        .registers
        .iter()
        .filter(|r| r.name.starts_with('p') || r.name == "z")
        .flat_map(|r| r.start..r.start + r.len)
        .collect();
    let (qa, qb, qg) = (c.qubit("a", 0), c.qubit("b", 0), c.qubit("g", 0));

    let mut done = 0u64;
    while done < total {
        let lanes = (total - done).min(64);
        let live = if lanes == 64 { u64::MAX } else { (1u64 << lanes) - 1 };
        let mut state = vec![0u64; c.qubits];
        if exhaustive {
            for lane in 0..lanes {
                let pair = done + lane;
                for i in 0..n {
                    state[qa + i] |= (pair >> i & 1) << lane;
                    state[qb + i] |= (pair >> (n + i) & 1) << lane;
                }
            }
        } else {
            for i in 0..n {
                state[qa + i] = rng.next_u64() & live;
                state[qb + i] = rng.next_u64() & live;
            }
        }
        let a: Vec<u64> = state[qa..qa + n].to_vec();
        let b: Vec<u64> = state[qb..qb + n].to_vec();
        simulate_lanes(c, &mut state);

        let mut bad = 0u64;
        let mut carry = 0u64;
        let reason_of = |mask: u64, why: &'static str, reasons: &mut Vec<(u64, &'static str)>| {
            if mask & live != 0 {
                reasons.push((mask & live, why));
            }
        };
        let mut reasons = Vec::new();
        for i in 0..n {
            let sum = a[i] ^ b[i] ^ carry;
            carry = (a[i] & b[i]) | (carry & (a[i] ^ b[i]));
            reason_of(state[qb + i] ^ sum, "sum mismatch", &mut reasons);
            reason_of(state[qg + i] ^ carry, "carry mismatch", &mut reasons);
            reason_of(state[qa + i] ^ a[i], "operand a modified", &mut reasons);
        }
        for &q in &aux {
            reason_of(state[q], "ancilla not restored", &mut reasons);
        }
        for (mask, _) in &reasons {
            bad |= mask;
        }
        if bad != 0 {
            let lane = bad.trailing_zeros();
            let reason = reasons.iter().find(|(m, _)| m >> lane & 1 == 1).expect("reason").1;
            let bit = |w: &u64| w >> lane & 1 == 1;
            let mut expected = Vec::with_capacity(n);
            let mut cy = false;
            for i in 0..n {
                let (x, y) = (bit(&a[i]), bit(&b[i]));
                expected.push(x ^ y ^ cy);
                cy = (x && y) || (cy && (x ^ y));
            }
            let ce = Counterexample {
                n,
                s,
                a: hex(a.iter().map(bit)),
                b: hex(b.iter().map(bit)),
                observed: hex(state[qb..qb + n].iter().map(bit)),
                expected: hex(expected.into_iter()),
                reason: reason.to_string(),
            };
            return Ok(AdderReport {
                n,
                s,
                exhaustive,
                cases: done + lane as u64 + 1,
                counterexample: Some(ce),
            });
        }
        done += lanes;
    }
    Ok(AdderReport {
        n,
        s,
        exhaustive,
        cases: total,
        counterexample: None,
    })
}

/// `s ⌈log_s n⌉ + 2`.
pub fn toffoli_depth_bound(n: usize, s: usize) -> usize {
    let mut k = 0;
    let mut p = 1usize;
    while p < n {
        p = p.saturating_mul(s);
        k += 1;
    }
    s * k + 2
}
