// SPDX-License-Identifier: Apache-2.0

//! Block-recursive zero-deficiency prefix circuits.
//!
//! For `n > s` the inputs are cut into `m = ⌈n/s⌉` blocks of `s` (the last
//! one possibly shorter):
//!
//! 1. a serial prefix inside every block, the gate at block offset `k` on
//!    level `k`;
//! 2. a recursive prefix over the final outputs of blocks `0..m-1`, shifted
//!    up by `s - 1` levels;
//! 3. one level `D(n) = s + D(m - 1)` that combines the recursive result for
//!    block `b - 1` with every non-final partial prefix of block `b`, and
//!    with every element of the last block.
//!
//! When `n` itself is a power of `s`, the circuit is built for `n - 1` and one
//! gate appends the last input.

use serde::Serialize;

use crate::circuit::{CircuitBuilder, PrefixCircuit, WireRef};
use crate::error::{Error, Result};

fn check_params(n: usize, s: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::param("n", "must be at least 1"));
    }
    if s < 2 {
        return Err(Error::param("s", format!("block size must be at least 2, got {s}")));
    }
    Ok(())
}

pub(crate) fn is_power_of(n: usize, s: usize) -> bool {
    let mut p = s;
    while p < n {
        match p.checked_mul(s) {
            Some(q) => p = q,
            None => return false,
        }
    }
    p == n
}

fn needs_power_fix(n: usize, s: usize) -> bool {
    n > s && is_power_of(n, s)
}

/// Builds one layer of inner recursion given `x`, returning outputs and the
/// depth used above `base`.
type Inner<'a> = dyn FnMut(&mut CircuitBuilder, &[WireRef], u32) -> (Vec<WireRef>, u32) + 'a;

fn serial_at(b: &mut CircuitBuilder, x: &[WireRef], base: u32) -> (Vec<WireRef>, u32) {
    let mut out = vec![x[0]];
    for k in 1..x.len() {
        let prev = out[k - 1];
        out.push(b.gate_at(prev, x[k], base + k as u32));
    }
    (out, x.len() as u32 - 1)
}

/// One level of the construction with block size `s`; `inner` builds layer 2.
fn layered(
    b: &mut CircuitBuilder,
    x: &[WireRef],
    base: u32,
    s: usize,
    inner: &mut Inner<'_>,
) -> (Vec<WireRef>, u32) {
    let n = x.len();
    if n <= s {
        return serial_at(b, x, base);
    }
    let m = n.div_ceil(s);
    let partial: Vec<Vec<WireRef>> = x.chunks(s).map(|blk| serial_at(b, blk, base).0).collect();
    let finals: Vec<WireRef> = partial[..m - 1].iter().map(|p| p[s - 1]).collect();
    let (r, inner_depth) = inner(b, &finals, base + s as u32 - 1);
    let depth = s as u32 + inner_depth;

    let mut out = partial[0].clone();
    for blk in 1..m {
        for (k, &p) in partial[blk].iter().enumerate() {
            out.push(if blk < m - 1 && k == s - 1 {
                r[blk]
            } else {
                b.gate_at(r[blk - 1], p, base + depth)
            });
        }
    }
    (out, depth)
}

fn self_similar(b: &mut CircuitBuilder, x: &[WireRef], base: u32, s: usize) -> (Vec<WireRef>, u32) {
    layered(b, x, base, s, &mut |b, x, base| self_similar(b, x, base, s))
}

fn with_power_fix(
    n: usize,
    s: usize,
    body: impl FnOnce(&mut CircuitBuilder, &[WireRef]) -> (Vec<WireRef>, u32),
) -> PrefixCircuit {
    let mut b = CircuitBuilder::new(n);
    let x = b.inputs();
    if n == 1 {
        return b.finish(x);
    }
    let outputs = if needs_power_fix(n, s) {
        let (mut out, depth) = body(&mut b, &x[..n - 1]);
        let last = b.gate_at(out[n - 2], x[n - 1], depth + 1);
        out.push(last);
        out
    } else {
        body(&mut b, &x).0
    };
    b.finish(outputs)
}

/// The self-recursive family with block size `s`.
pub fn kronecker_circuit(n: usize, s: usize) -> Result<PrefixCircuit> {
    check_params(n, s)?;
    Ok(with_power_fix(n, s, |b, x| self_similar(b, x, 0, s)))
}

/// One Kronecker level with block size `s` whose layer 2 is `inner(m - 1)`.
/// `inner` must return a valid prefix circuit on the requested input count.
pub fn kronecker_with(
    n: usize,
    s: usize,
    inner: &dyn Fn(usize) -> PrefixCircuit,
) -> Result<PrefixCircuit> {
    check_params(n, s)?;
    let mut embed = |b: &mut CircuitBuilder, x: &[WireRef], base: u32| {
        let c = inner(x.len());
        let out = b.embed(&c, x, base);
        (out, c.declared_depth())
    };
    Ok(with_power_fix(n, s, |b, x| layered(b, x, 0, s, &mut embed)))
}

/// Mixed block sizes: every recursion level uses the best `s` the table
/// records for its own input count, falling back to serial.
pub fn kronecker_optimal(n: usize, table: &DepthTable) -> Result<PrefixCircuit> {
    if n == 0 {
        return Err(Error::param("n", "must be at least 1"));
    }
    if n > table.max_n() {
        return Err(Error::param(
            "n",
            format!("table covers only n <= {}", table.max_n()),
        ));
    }
    fn go(b: &mut CircuitBuilder, x: &[WireRef], base: u32, table: &DepthTable) -> (Vec<WireRef>, u32) {
        match table.entry(x.len()).best_s {
            None => serial_at(b, x, base),
            Some(s) => layered(b, x, base, s, &mut |b, x, base| go(b, x, base, table)),
        }
    }
    let mut b = CircuitBuilder::new(n);
    let x = b.inputs();
    let out = if n == 1 { x } else { go(&mut b, &x, 0, table).0 };
    Ok(b.finish(out))
}

/// Depth of the recursion without the power fix.
fn core_depth(mut n: usize, s: usize) -> usize {
    let mut depth = 0;
    while n > s {
        depth += s;
        n = n.div_ceil(s) - 1;
    }
    depth + n.saturating_sub(1)
}

/// Depth of [`kronecker_circuit`] from the recursion alone.
pub fn kronecker_depth(n: usize, s: usize) -> usize {
    if needs_power_fix(n, s) {
        core_depth(n - 1, s) + 1
    } else {
        core_depth(n, s)
    }
}

/// Left-operand column of the gate sitting at (`col`, `level`), if any,
/// for the construction without the power fix.
fn core_gate_left(mut n: usize, s: usize, mut col: usize, mut level: usize) -> Option<usize> {
    // Column maps l -> l * s + (s - 1) accumulate as an affine transform.
    let (mut scale, mut shift) = (1usize, 0usize);
    let lift = |l: usize, scale: usize, shift: usize| l * scale + shift;
    loop {
        if col >= n || level == 0 {
            return None;
        }
        if n <= s {
            return (level == col).then(|| lift(col - 1, scale, shift));
        }
        let m = n.div_ceil(s);
        let (blk, k) = (col / s, col % s);
        let depth = core_depth(n, s);
        if k >= 1 && level == k {
            return Some(lift(col - 1, scale, shift));
        }
        if level == depth {
            let finalized = blk >= 1 && (blk == m - 1 || k + 2 <= s);
            return finalized.then(|| lift(blk * s - 1, scale, shift));
        }
        if k == s - 1 && blk + 1 < m && level > s - 1 && level < depth {
            shift += (s - 1) * scale;
            scale *= s;
            n = m - 1;
            col = blk;
            level -= s - 1;
            continue;
        }
        return None;
    }
}

/// Left-operand column of the gate of [`kronecker_circuit`]`(n, s)` at
/// (`col`, `level`), computed from the indices alone.
pub fn gate_left(n: usize, s: usize, col: usize, level: usize) -> Option<usize> {
    if n == 0 || s < 2 || col >= n {
        return None;
    }
    if needs_power_fix(n, s) {
        if col == n - 1 {
            return (level == core_depth(n - 1, s) + 1).then_some(n - 2);
        }
        return core_gate_left(n - 1, s, col, level);
    }
    core_gate_left(n, s, col, level)
}

/// Whether node `src` at `level` feeds node `dst` at `level + 1` in
/// [`kronecker_circuit`]`(n, s)`. Node `i` at level `k` is the value column
/// `i` holds after level `k`; a gate at (`j`, `k + 1`) reads column `j` and
/// its left-operand column. Runs in `O(log² n)` without building anything.
pub fn edge_predicate(n: usize, s: usize, level: usize, src: usize, dst: usize) -> bool {
    if src >= n {
        return false;
    }
    match gate_left(n, s, dst, level + 1) {
        Some(left) => src == dst || src == left,
        None => false,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlanLevel {
    pub n: usize,
    pub blocks: usize,
    pub recursive_n: usize,
    pub layer1_size: usize,
    pub layer1_depth: usize,
    pub layer3_size: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KroneckerPlan {
    pub n: usize,
    pub s: usize,
    pub levels: Vec<PlanLevel>,
    /// Input count of the serial base case.
    pub base_n: usize,
    pub power_fix_applied: bool,
}

impl KroneckerPlan {
    pub fn size(&self) -> usize {
        let layered: usize = self.levels.iter().map(|l| l.layer1_size + l.layer3_size).sum();
        layered + self.base_n.saturating_sub(1) + self.power_fix_applied as usize
    }

    pub fn depth(&self) -> usize {
        kronecker_depth(self.n, self.s)
    }
}

pub fn kronecker_plan(n: usize, s: usize) -> Result<KroneckerPlan> {
    check_params(n, s)?;
    let power_fix_applied = needs_power_fix(n, s);
    let mut cur = if power_fix_applied { n - 1 } else { n };
    let mut levels = Vec::new();
    while cur > s {
        let m = cur.div_ceil(s);
        levels.push(PlanLevel {
            n: cur,
            blocks: m,
            recursive_n: m - 1,
            layer1_size: cur - m,
            layer1_depth: s - 1,
            layer3_size: cur + 2 - s - m,
        });
        cur = m - 1;
    }
    Ok(KroneckerPlan {
        n,
        s,
        levels,
        base_n: cur,
        power_fix_applied,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DepthEntry {
    pub min_depth: usize,
    /// `None` means the serial circuit is optimal.
    pub best_s: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DepthTable {
    entries: Vec<DepthEntry>,
}

impl DepthTable {
    pub fn max_n(&self) -> usize {
        self.entries.len() - 1
    }

    /// # Panics
    /// If `n` is 0 or above `max_n`.
    pub fn entry(&self, n: usize) -> DepthEntry {
        assert!(n >= 1, "the table starts at n = 1");
        self.entries[n]
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, DepthEntry)> + '_ {
        self.entries.iter().copied().enumerate().skip(1)
    }

    /// Header `n,min_depth,best_s`; `best_s` is empty for serial.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,min_depth,best_s\n");
        for (n, e) in self.iter() {
            let s = e.best_s.map(|s| s.to_string()).unwrap_or_default();
            out.push_str(&format!("{n},{},{s}\n", e.min_depth));
        }
        out
    }
}

/// `minD(n) = min(n - 1, min over 2 <= s <= n/2 of s + minD(⌈n/s⌉ - 1))`.
/// Ties go to the smallest `s`; serial wins only when strictly better.
pub fn min_depth_table(max_n: usize) -> DepthTable {
    let mut entries = vec![DepthEntry {
        min_depth: 0,
        best_s: None,
    }];
    for n in 1..=max_n.max(1) {
        let mut best: Option<(usize, usize)> = None;
        for s in 2..=n / 2 {
            let d = s + entries[n.div_ceil(s) - 1].min_depth;
            if best.is_none_or(|(bd, _)| d < bd) {
                best = Some((d, s));
            }
        }
        entries.push(match best {
            Some((d, s)) if d < n => DepthEntry {
                min_depth: d,
                best_s: Some(s),
            },
            _ => DepthEntry {
                min_depth: n - 1,
                best_s: None,
            },
        });
    }
    DepthTable { entries }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DepthRatio {
    pub n: usize,
    pub depth: usize,
    /// `depth / log2(n)`; `None` for `n = 1`.
    pub ratio: Option<f64>,
}

pub fn depth_ratio_report(ns: &[usize], s: usize) -> Vec<DepthRatio> {
    ns.iter()
        .map(|&n| {
            let depth = kronecker_depth(n, s);
            let ratio = (n >= 2).then(|| depth as f64 / (n as f64).log2());
            DepthRatio { n, depth, ratio }
        })
        .collect()
}

/// `s ⌈log_s n⌉ - 1`, the depth bound of the family.
pub fn depth_bound(n: usize, s: usize) -> usize {
    let mut k = 0;
    let mut p = 1usize;
    while p < n {
        p = p.saturating_mul(s);
        k += 1;
    }
    (s * k).saturating_sub(1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{evaluate, metrics, validate_prefix};
    use crate::classic::{brent_kung, serial};

    fn sd(n: usize, s: usize) -> (usize, usize) {
        let m = metrics(&kronecker_circuit(n, s).unwrap()).unwrap();
        (m.size, m.depth)
    }

    #[test]
    fn worked_examples() {
        assert_eq!(sd(7, 2), (8, 4));
        assert_eq!(sd(27, 3), (44, 8));
        assert_eq!(sd(3, 4), (2, 2));
        assert_eq!(sd(4, 2), (3, 3));
        assert_eq!(kronecker_depth(8, 2), 5);
        assert_eq!(kronecker_depth(3, 2), 2);
        assert_eq!(kronecker_depth(1, 2), 0);
        assert_eq!(kronecker_depth(2, 3), 1);
        assert_eq!(depth_bound(27, 3), 8);
    }

    #[test]
    fn one_input_is_empty() {
        let c = kronecker_circuit(1, 2).unwrap();
        assert_eq!(c.size(), 0);
        assert_eq!(evaluate(&c, &[7], |a, b| a + b).unwrap(), vec![7]);
    }

    #[test]
    fn bad_block_size() {
        assert!(kronecker_circuit(8, 1).is_err());
        assert!(kronecker_circuit(8, 0).is_err());
        assert!(kronecker_circuit(0, 2).is_err());
    }

    #[test]
    fn strings_concatenate() {
        let c = kronecker_circuit(7, 2).unwrap();
        let x: Vec<String> = ["a", "b", "c", "d", "e", "f", "g"].iter().map(|s| s.to_string()).collect();
        let out = evaluate(&c, &x, |a, b| format!("{a}{b}")).unwrap();
        assert_eq!(out[6], "abcdefg");
        assert_eq!(out[3], "abcd");
    }

    #[test]
    fn recursion_matches_circuit() {
        for s in 2..=6 {
            for n in 1..=200 {
                let c = kronecker_circuit(n, s).unwrap();
                let m = metrics(&c).unwrap();
                assert_eq!(m.depth, kronecker_depth(n, s), "n={n} s={s}");
                assert_eq!(c.declared_depth() as usize, m.depth);
                assert!(m.valid);
                let plan = kronecker_plan(n, s).unwrap();
                assert_eq!(plan.size(), m.size, "n={n} s={s}");
            }
        }
    }

    #[test]
    fn plan_layers_sum_to_zero_deficiency() {
        for s in 2..=5 {
            for n in s + 1..400 {
                for lvl in kronecker_plan(n, s).unwrap().levels {
                    let rec = 2 * lvl.recursive_n - 2;
                    let total = lvl.layer1_size + lvl.layer1_depth + rec + lvl.layer3_size + 1;
                    assert_eq!(total, 2 * lvl.n - 2);
                }
            }
        }
    }

    #[test]
    fn predicate_spot_checks() {
        // n = 4, s = 2 builds for 3 (serial) then appends column 3.
        assert!(edge_predicate(4, 2, 0, 0, 1));
        assert!(edge_predicate(4, 2, 0, 1, 1));
        assert!(!edge_predicate(4, 2, 0, 2, 1));
        assert!(edge_predicate(4, 2, 2, 2, 3));
        assert!(!edge_predicate(4, 2, 0, 0, 9));
        assert!(!edge_predicate(4, 2, 0, 9, 1));
    }

    #[test]
    fn predicate_matches_small_dags() {
        for s in [2, 3, 5] {
            for n in 2..=60 {
                let c = kronecker_circuit(n, s).unwrap();
                let edges: std::collections::BTreeSet<_> = c.column_edges().unwrap().into_iter().collect();
                let depth = c.declared_depth() as usize;
                for level in 0..depth {
                    for src in 0..n {
                        for dst in 0..n {
                            assert_eq!(
                                edge_predicate(n, s, level, src, dst),
                                edges.contains(&(level as u32, src, dst)),
                                "n={n} s={s} level={level} {src}->{dst}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn hook_accepts_other_inner_circuits() {
        for n in 5..80 {
            for inner in [serial as fn(usize) -> Result<PrefixCircuit>, brent_kung] {
                let c = kronecker_with(n, 3, &|k| inner(k).unwrap()).unwrap();
                assert!(validate_prefix(&c).unwrap(), "n={n}");
            }
            let same = kronecker_with(n, 3, &|k| kronecker_circuit(k, 3).unwrap()).unwrap();
            assert!(validate_prefix(&same).unwrap());
        }
    }

    #[test]
    fn serial_inner_is_zero_deficiency() {
        for n in 5..80 {
            let c = kronecker_with(n, 2, &|k| serial(k).unwrap()).unwrap();
            assert_eq!(metrics(&c).unwrap().deficiency, 0, "n={n}");
        }
    }

    #[test]
    fn dp_small_values() {
        let t = min_depth_table(50);
        assert_eq!(t.entry(1).min_depth, 0);
        assert_eq!(t.entry(2).min_depth, 1);
        assert_eq!(t.entry(4), DepthEntry { min_depth: 2, best_s: Some(2) });
        assert!(t.to_csv().starts_with("n,min_depth,best_s\n1,0,\n2,1,\n3,2,\n4,2,2\n"));
    }

    #[test]
    fn dp_schedule_circuit_reaches_table_depth() {
        let t = min_depth_table(300);
        for n in 1..=300 {
            let c = kronecker_optimal(n, &t).unwrap();
            let m = metrics(&c).unwrap();
            assert!(m.valid, "n={n}");
            assert_eq!(m.depth, t.entry(n).min_depth, "n={n}");
            assert_eq!(m.deficiency, 0, "n={n}");
        }
    }

    #[test]
    fn ratio_report_basics() {
        let r = depth_ratio_report(&[1, 2, 1024], 2);
        assert_eq!(r[0].ratio, None);
        assert_eq!((r[1].depth, r[1].ratio), (1, Some(1.0)));
        assert_eq!(r[2].depth, 19);
    }

    #[test]
    fn power_detection() {
        assert!(is_power_of(27, 3));
        assert!(is_power_of(3, 3));
        assert!(!is_power_of(26, 3));
        assert!(!is_power_of(usize::MAX, 2));
    }
}
