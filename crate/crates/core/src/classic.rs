// SPDX-License-Identifier: Apache-2.0

//! Textbook prefix networks. Levels are as-soon-as-possible except for
//! Brent–Kung, which keeps the level schedule of its three-step recursion.

use crate::circuit::{CircuitBuilder, PrefixCircuit, WireRef};
use crate::error::{Error, Result};

fn require_inputs(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::param("n", "must be at least 1"));
    }
    Ok(())
}

fn build(n: usize, body: impl FnOnce(&mut CircuitBuilder, &[WireRef]) -> Vec<WireRef>) -> Result<PrefixCircuit> {
    require_inputs(n)?;
    let mut b = CircuitBuilder::new(n);
    let inputs = b.inputs();
    let outputs = body(&mut b, &inputs);
    Ok(b.finish(outputs))
}

pub(crate) fn serial_on(b: &mut CircuitBuilder, x: &[WireRef]) -> Vec<WireRef> {
    let mut out = Vec::with_capacity(x.len());
    for (i, &w) in x.iter().enumerate() {
        if i == 0 {
            out.push(w);
        } else {
            let prev = out[i - 1];
            out.push(b.gate(prev, w));
        }
    }
    out
}

/// Ripple chain `y(i) = y(i-1) ∘ x(i)`.
pub fn serial(n: usize) -> Result<PrefixCircuit> {
    build(n, serial_on)
}

fn sklansky_on(b: &mut CircuitBuilder, x: &[WireRef]) -> Vec<WireRef> {
    if x.len() <= 1 {
        return x.to_vec();
    }
    let half = x.len().div_ceil(2);
    let mut out = sklansky_on(b, &x[..half]);
    let right = sklansky_on(b, &x[half..]);
    let carry = out[half - 1];
    for r in right {
        out.push(b.gate(carry, r));
    }
    out
}

/// Divide and conquer on `⌈n/2⌉ / ⌊n/2⌋` halves; depth `⌈log2 n⌉`.
pub fn sklansky(n: usize) -> Result<PrefixCircuit> {
    build(n, sklansky_on)
}

fn kogge_stone_on(b: &mut CircuitBuilder, x: &[WireRef]) -> Vec<WireRef> {
    let mut cur = x.to_vec();
    let mut d = 1;
    while d < x.len() {
        let mut next = cur.clone();
        for i in d..x.len() {
            next[i] = b.gate(cur[i - d], cur[i]);
        }
        cur = next;
        d *= 2;
    }
    cur
}

pub fn kogge_stone(n: usize) -> Result<PrefixCircuit> {
    build(n, kogge_stone_on)
}

/// Pair adjacent elements, scan the pairs with `inner`, then fix up the even
/// positions from the scanned pair totals.
fn pair_recurse_fix(
    b: &mut CircuitBuilder,
    x: &[WireRef],
    inner: &mut dyn FnMut(&mut CircuitBuilder, &[WireRef]) -> Vec<WireRef>,
) -> Vec<WireRef> {
    let n = x.len();
    let pairs: Vec<WireRef> = (0..n / 2).map(|i| b.gate(x[2 * i], x[2 * i + 1])).collect();
    let z = inner(b, &pairs);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let y = if i == 0 {
            x[0]
        } else if i % 2 == 1 {
            z[i / 2]
        } else {
            b.gate(z[i / 2 - 1], x[i])
        };
        out.push(y);
    }
    out
}

/// Returns the outputs and the highest level used, relative to `base`.
///
/// Step 1 pairs the inputs at `base + 1`, step 2 recurses on the pair totals
/// and step 3 fixes the even positions one level after the recursion ends.
fn brent_kung_on(b: &mut CircuitBuilder, x: &[WireRef], base: u32) -> (Vec<WireRef>, u32) {
    let n = x.len();
    if n <= 1 {
        return (x.to_vec(), 0);
    }
    if n % 2 == 1 {
        let (mut out, depth) = brent_kung_on(b, &x[..n - 1], base);
        let last = b.gate(out[n - 2], x[n - 1]);
        out.push(last);
        return (out, depth.max(b.level(last) - base));
    }
    let pairs: Vec<WireRef> = (0..n / 2)
        .map(|i| b.gate_at(x[2 * i], x[2 * i + 1], base + 1))
        .collect();
    let (z, inner) = brent_kung_on(b, &pairs, base + 1);
    let fix_level = base + 1 + inner + 1;
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        out.push(if i == 0 {
            x[0]
        } else if i % 2 == 1 {
            z[i / 2]
        } else {
            b.gate_at(z[i / 2 - 1], x[i], fix_level)
        });
    }
    let depth = if n > 2 { fix_level - base } else { 1 + inner };
    (out, depth)
}

/// The three-step halving recursion; odd lengths peel the last input.
pub fn brent_kung(n: usize) -> Result<PrefixCircuit> {
    build(n, |b, x| brent_kung_on(b, x, 0).0)
}

fn ladner_fischer_on(b: &mut CircuitBuilder, x: &[WireRef], k: u32) -> Vec<WireRef> {
    let n = x.len();
    if n <= 1 {
        return x.to_vec();
    }
    if k == 0 {
        let half = n.div_ceil(2);
        let mut out = ladner_fischer_on(b, &x[..half], 1);
        let right = ladner_fischer_on(b, &x[half..], 0);
        let carry = out[half - 1];
        for r in right {
            out.push(b.gate(carry, r));
        }
        out
    } else {
        pair_recurse_fix(b, x, &mut |b, z| ladner_fischer_on(b, z, k - 1))
    }
}

/// `P_k(n)` of Ladner and Fischer. Requires `k <= ⌈log2 n⌉`.
pub fn ladner_fischer(n: usize, k: u32) -> Result<PrefixCircuit> {
    require_inputs(n)?;
    let max_k = ceil_log2(n);
    if k > max_k {
        return Err(Error::param(
            "k",
            format!("must be at most ceil(log2 n) = {max_k}, got {k}"),
        ));
    }
    build(n, |b, x| ladner_fischer_on(b, x, k))
}

pub(crate) fn ceil_log2(n: usize) -> u32 {
    if n <= 1 {
        0
    } else {
        usize::BITS - (n - 1).leading_zeros()
    }
}
