// SPDX-License-Identifier: Apache-2.0

//! Side-by-side metrics of every generator and the closed forms they are
//! expected to meet.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::circuit::{metrics_with, FanoutConvention, PrefixCircuit};
use crate::classic::{brent_kung, ceil_log2, kogge_stone, ladner_fischer, serial, sklansky};
use crate::error::{Error, Result};
use crate::kronecker::{depth_bound, kronecker_circuit, kronecker_depth, kronecker_optimal, min_depth_table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    Serial,
    Sklansky,
    KoggeStone,
    BrentKung,
    LadnerFischer(u32),
    Kronecker(usize),
    KroneckerOptimal,
}

impl Generator {
    pub fn build(self, n: usize) -> Result<PrefixCircuit> {
        match self {
            Generator::Serial => serial(n),
            Generator::Sklansky => sklansky(n),
            Generator::KoggeStone => kogge_stone(n),
            Generator::BrentKung => brent_kung(n),
            Generator::LadnerFischer(k) => ladner_fischer(n, k),
            Generator::Kronecker(s) => kronecker_circuit(n, s),
            Generator::KroneckerOptimal => kronecker_optimal(n, &min_depth_table(n)),
        }
    }

    /// Whether the generator accepts `n` inputs.
    pub fn supports(self, n: usize) -> bool {
        match self {
            Generator::LadnerFischer(k) => n >= 1 && k <= ceil_log2(n),
            _ => n >= 1,
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Serial => write!(f, "serial"),
            Generator::Sklansky => write!(f, "sklansky"),
            Generator::KoggeStone => write!(f, "kogge-stone"),
            Generator::BrentKung => write!(f, "brent-kung"),
            Generator::LadnerFischer(k) => write!(f, "ladner-fischer(k={k})"),
            Generator::Kronecker(s) => write!(f, "kronecker(s={s})"),
            Generator::KroneckerOptimal => write!(f, "kronecker-opt"),
        }
    }
}

impl FromStr for Generator {
    type Err = Error;

    /// Accepts `serial`, `sklansky`, `kogge-stone`, `brent-kung`,
    /// `ladner-fischer:K`, `kronecker:S` and `kronecker-opt`.
    fn from_str(text: &str) -> Result<Self> {
        let (name, arg) = match text.split_once(':') {
            Some((a, b)) => (a, Some(b)),
            None => (text, None),
        };
        let num = |what: &'static str| -> Result<usize> {
            arg.ok_or_else(|| Error::param(what, format!("`{name}` needs `:{what}`")))?
                .parse()
                .map_err(|_| Error::param(what, format!("not a number in `{text}`")))
        };
        Ok(match name {
            "serial" => Generator::Serial,
            "sklansky" => Generator::Sklansky,
            "kogge-stone" => Generator::KoggeStone,
            "brent-kung" => Generator::BrentKung,
            "ladner-fischer" => Generator::LadnerFischer(num("k")? as u32),
            "kronecker" => Generator::Kronecker(num("s")?),
            "kronecker-opt" => Generator::KroneckerOptimal,
            _ => return Err(Error::param("generator", format!("unknown generator `{text}`"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompareRow {
    pub generator: String,
    pub n: usize,
    pub size: usize,
    pub depth: usize,
    pub max_fanout: usize,
    pub deficiency: i64,
}

pub fn compare_row(generator: Generator, n: usize, convention: FanoutConvention) -> Result<CompareRow> {
    let m = metrics_with(&generator.build(n)?, convention)?;
    Ok(CompareRow {
        generator: generator.to_string(),
        n,
        size: m.size,
        depth: m.depth,
        max_fanout: m.max_fanout,
        deficiency: m.deficiency,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "==")]
    Eq,
    #[serde(rename = "<=")]
    AtMost,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FormulaCheck {
    pub generator: String,
    pub n: usize,
    pub quantity: &'static str,
    pub formula: &'static str,
    pub relation: Relation,
    pub expected: i64,
    pub measured: i64,
}

impl FormulaCheck {
    pub fn holds(&self) -> bool {
        match self.relation {
            Relation::Eq => self.measured == self.expected,
            Relation::AtMost => self.measured <= self.expected,
        }
    }
}

/// Closed forms applicable to `row`. Classic formulas apply only at powers
/// of two; the zero-deficiency rows apply at every `n`.
pub fn formula_checks(generator: Generator, row: &CompareRow) -> Vec<FormulaCheck> {
    let n = row.n as i64;
    let pow2 = row.n.is_power_of_two() && row.n >= 2;
    let k = ceil_log2(row.n) as i64;
    let mut out = Vec::new();
    let mut push = |quantity, formula, relation, expected: i64, measured: i64| {
        out.push(FormulaCheck {
            generator: row.generator.clone(),
            n: row.n,
            quantity,
            formula,
            relation,
            expected,
            measured,
        })
    };
    let (size, depth, def) = (row.size as i64, row.depth as i64, row.deficiency);
    match generator {
        Generator::Serial => {
            push("size", "n-1", Relation::Eq, n - 1, size);
            push("depth", "n-1", Relation::Eq, n - 1, depth);
        }
        Generator::Sklansky => {
            if pow2 {
                push("size", "n/2*log n", Relation::Eq, n / 2 * k, size);
            }
            push("depth", "ceil(log n)", Relation::Eq, k, depth);
        }
        Generator::KoggeStone if pow2 => {
            push("size", "n*ceil(log n)-n+1", Relation::Eq, n * k - n + 1, size);
            push("depth", "log n", Relation::Eq, k, depth);
        }
        Generator::BrentKung if pow2 => {
            push("size", "2n-log n-2", Relation::Eq, 2 * n - k - 2, size);
            push("depth", "2log n-1", Relation::Eq, 2 * k - 1, depth);
            push("deficiency", "log n+1", Relation::Eq, k + 1, def);
        }
        Generator::LadnerFischer(lk) if pow2 => {
            push("depth", "log n+k", Relation::AtMost, k + lk as i64, depth);
        }
        Generator::Kronecker(s) => {
            push("size", "2n-2-D(n)", Relation::Eq, 2 * n - 2 - depth, size);
            push("depth", "recursion", Relation::Eq, kronecker_depth(row.n, s) as i64, depth);
            if row.n >= 2 {
                push("depth", "s*ceil(log_s n)-1", Relation::AtMost, depth_bound(row.n, s) as i64, depth);
            }
        }
        Generator::KroneckerOptimal => {
            push("size", "2n-2-D(n)", Relation::Eq, 2 * n - 2 - depth, size);
            let table = min_depth_table(row.n);
            push("depth", "min D(n)", Relation::Eq, table.entry(row.n.max(1)).min_depth as i64, depth);
        }
        _ => {}
    }
    out
}
