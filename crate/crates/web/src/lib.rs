// SPDX-License-Identifier: Apache-2.0

//! Browser bindings: draw a circuit, plot depth against n, run the adder.
//! Every export returns a JSON string; the plain functions underneath are
//! what the native tests exercise.

use prefix_kron::compare::Generator;
use prefix_kron::kronecker::{depth_bound, kronecker_depth, min_depth_table};
use prefix_kron::quantum::{build_adder, resources, simulate};
use prefix_kron::{fib_depth_lower_bound, metrics, PrefixCircuit, WireRef};
use serde::Serialize;
use wasm_bindgen::prelude::*;

const MAX_DRAW: usize = 256;

#[derive(Serialize)]
pub struct Rendered {
    pub svg: String,
    pub size: usize,
    pub depth: usize,
    pub max_fanout: usize,
    pub deficiency: i64,
}

fn parse_generator(name: &str, s: usize) -> Result<Generator, String> {
    match name {
        "kronecker" => Ok(Generator::Kronecker(s)),
        "ladner-fischer" => Ok(Generator::LadnerFischer(s as u32)),
        other => other.parse().map_err(|e: prefix_kron::Error| e.to_string()),
    }
}

/// Column view: one vertical line per input, one dot per gate at its
/// column and level, a diagonal from the left operand's column.
pub fn svg(c: &PrefixCircuit) -> Result<String, String> {
    let cols = c.columns().map_err(|e| e.to_string())?;
    let levels = c.declared_depth() as usize;
    let (dx, dy, pad) = (18.0, 28.0, 16.0);
    let width = pad * 2.0 + dx * (c.n.max(1) - 1) as f64;
    let height = pad * 2.0 + dy * levels as f64;
    let x = |col: usize| pad + dx * col as f64;
    let y = |lvl: u32| pad + dy * lvl as f64;
    let mut out = format!(
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {width} {height}" width="{width}" height="{height}">"#
    );
    for col in 0..c.n {
        out += &format!(
            r##"<line x1="{0}" y1="{1}" x2="{0}" y2="{2}" stroke="#bbb"/>"##,
            x(col),
            y(0),
            y(levels as u32)
        );
    }
    for (g, gate) in c.gates.iter().enumerate() {
        let from = match gate.left {
            WireRef::Input(i) => i,
            WireRef::Gate(h) => cols[h],
        };
        let (x2, y2) = (x(cols[g]), y(gate.level));
        out += &format!(
            r##"<line x1="{}" y1="{}" x2="{x2}" y2="{y2}" stroke="#333"/><circle cx="{x2}" cy="{y2}" r="4" fill="#c33"><title>g{g} level {}</title></circle>"##,
            x(from),
            y(gate.level - 1),
            gate.level
        );
    }
    out += "</svg>";
    Ok(out)
}

pub fn render(name: &str, n: usize, s: usize) -> Result<Rendered, String> {
    if n > MAX_DRAW {
        return Err(format!("drawing is limited to n <= {MAX_DRAW}"));
    }
    let c = parse_generator(name, s)?.build(n).map_err(|e| e.to_string())?;
    let m = metrics(&c).map_err(|e| e.to_string())?;
    Ok(Rendered {
        svg: svg(&c)?,
        size: m.size,
        depth: m.depth,
        max_fanout: m.max_fanout,
        deficiency: m.deficiency,
    })
}

#[derive(Serialize, Debug, PartialEq)]
pub struct CurvePoint {
    pub n: usize,
    pub depth: usize,
    pub optimal: usize,
    pub bound: usize,
    pub lower: i64,
}

pub fn curve(max_n: usize, s: usize) -> Result<Vec<CurvePoint>, String> {
    if s < 2 || !(2..=100_000).contains(&max_n) {
        return Err("need s >= 2 and 2 <= n <= 100000".into());
    }
    let table = min_depth_table(max_n);
    Ok((2..=max_n)
        .map(|n| CurvePoint {
            n,
            depth: kronecker_depth(n, s),
            optimal: table.entry(n).min_depth,
            bound: depth_bound(n, s),
            lower: fib_depth_lower_bound(n),
        })
        .collect())
}

#[derive(Serialize, Debug)]
pub struct AdderRun {
    pub sum: String,
    pub carry: bool,
    pub expected: String,
    pub qubits: usize,
    pub toffoli_count: usize,
    pub toffoli_depth: usize,
    pub ancillas_clean: bool,
}

pub fn add(n: usize, s: usize, a: &str, b: &str) -> Result<AdderRun, String> {
    if n == 0 || n > 64 {
        return Err("n must be in 1..=64".into());
    }
    let parse = |t: &str| t.trim().parse::<u128>().map_err(|_| format!("`{t}` is not a number"));
    let (a, b) = (parse(a)?, parse(b)?);
    let modulus = 1u128 << n;
    if a >= modulus || b >= modulus {
        return Err(format!("operands must be below 2^{n}"));
    }
    let c = build_adder(n, s).map_err(|e| e.to_string())?;
    let mut init = vec![Some(false); c.qubits];
    for i in 0..n {
        init[c.qubit("a", i)] = Some(a >> i & 1 == 1);
        init[c.qubit("b", i)] = Some(b >> i & 1 == 1);
    }
    let out = simulate(&c, &init).map_err(|e| e.to_string())?;
    let sum: u128 = (0..n).map(|i| (out[c.qubit("b", i)] as u128) << i).sum();
    let r = resources(&c).map_err(|e| e.to_string())?;
    let g = c.register("g").map(|r| r.start).unwrap_or(0);
    let ancillas_clean = (g + n..c.qubits).all(|q| !out[q]);
    Ok(AdderRun {
        sum: sum.to_string(),
        carry: out[c.qubit("g", n - 1)],
        expected: ((a + b) % modulus).to_string(),
        qubits: c.qubits,
        toffoli_count: r.toffoli_count,
        toffoli_depth: r.toffoli_depth,
        ancillas_clean,
    })
}

fn to_js<T: Serialize>(r: Result<T, String>) -> Result<String, JsValue> {
    r.and_then(|v| serde_json::to_string(&v).map_err(|e| e.to_string()))
        .map_err(|e| JsValue::from_str(&e))
}

/// `{svg, size, depth, max_fanout, deficiency}`; `s` doubles as `k` for
/// ladner-fischer.
#[wasm_bindgen]
pub fn render_circuit(generator: &str, n: usize, s: usize) -> Result<String, JsValue> {
    to_js(render(generator, n, s))
}

/// `[{n, depth, optimal, bound, lower}]` for n in 2..=max_n.
#[wasm_bindgen]
pub fn depth_curve(max_n: usize, s: usize) -> Result<String, JsValue> {
    to_js(curve(max_n, s))
}

/// Adds two decimal operands on the reversible adder by simulation.
#[wasm_bindgen]
pub fn adder_demo(n: usize, s: usize, a: &str, b: &str) -> Result<String, JsValue> {
    to_js(add(n, s, a, b))
}
