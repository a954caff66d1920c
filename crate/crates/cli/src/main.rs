// SPDX-License-Identifier: Apache-2.0

//! `prefix-kron`: generate, measure and check prefix circuits and the
//! reversible adder. Exit codes: 0 pass, 1 check failure, 2 usage error.

use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use prefix_kron::compare::{compare_row, formula_checks, CompareRow, FormulaCheck, Generator};
use prefix_kron::export::{export_dot, export_json, import_json};
use prefix_kron::kron::theorem1_check;
use prefix_kron::kronecker::{depth_bound, depth_ratio_report, min_depth_table};
use prefix_kron::quantum::{build_adder, resource_report, verify_circuit, Sampling};
use prefix_kron::{
    fib_depth_lower_bound, metrics_with, snir_gap, validate_prefix, FanoutConvention,
};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "prefix-kron", version, about = "Prefix circuits from Kronecker decompositions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum Fanout {
    /// Gate operand edges only.
    #[default]
    Operands,
    /// Output taps count too.
    WithOutputs,
    /// One edge per reading level, plus the wire's continuation.
    Leveled,
}

impl From<Fanout> for FanoutConvention {
    fn from(f: Fanout) -> Self {
        match f {
            Fanout::Operands => FanoutConvention::OperandsOnly,
            Fanout::WithOutputs => FanoutConvention::WithOutputs,
            Fanout::Leveled => FanoutConvention::Leveled,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build one circuit and write it as JSON or DOT.
    Generate {
        /// serial, sklansky, kogge-stone, brent-kung, ladner-fischer,
        /// kronecker or kronecker-opt
        generator: String,
        #[arg(short)]
        n: usize,
        /// Block size for `kronecker`.
        #[arg(short)]
        s: Option<usize>,
        /// Depth slack for `ladner-fischer`.
        #[arg(short)]
        k: Option<u32>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Run the free-monoid check before writing.
        #[arg(long)]
        validate: bool,
    },
    /// Measured size, depth, fan-out and deficiency per generator and n.
    Table {
        /// Comma-separated sizes; defaults to 2, 4, ..., 512.
        #[arg(short, long, value_delimiter = ',')]
        n: Vec<usize>,
        /// Comma-separated, e.g. `serial,kronecker:3,ladner-fischer:1`.
        #[arg(short, long, value_delimiter = ',')]
        generators: Vec<String>,
        /// Fail (exit 1) when a closed form disagrees with the measurement.
        #[arg(long)]
        check_formulas: bool,
        #[arg(long, conflicts_with = "json")]
        csv: bool,
        #[arg(long)]
        json: bool,
        #[arg(long, value_enum, default_value = "operands")]
        fanout: Fanout,
        /// Shorthand for `--fanout with-outputs`.
        #[arg(long, conflicts_with = "fanout")]
        fanout_with_outputs: bool,
        /// Worker threads; output order does not depend on it.
        #[arg(short, long, default_value_t = 1)]
        jobs: usize,
    },
    /// Minimum-depth table as CSV `n,min_depth,best_s`.
    Mindepth {
        #[arg(long, default_value_t = 64)]
        max_n: usize,
    },
    /// Reversible adder: netlist, verification or resources.
    Adder {
        #[arg(short)]
        n: usize,
        #[arg(short, default_value_t = 2)]
        s: usize,
        #[command(subcommand)]
        action: AdderAction,
    },
    /// Kronecker identities over [2, max-dim]^2.
    CheckKron {
        #[arg(long, default_value_t = 12)]
        max_dim: usize,
    },
    /// Metrics and validity of a circuit JSON file.
    Analyze {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "operands")]
        fanout: Fanout,
        #[arg(long)]
        json: bool,
    },
    /// depth / log2(n) of the uniform-s family.
    DepthRatio {
        #[arg(short, default_value_t = 3)]
        s: usize,
        /// Comma-separated sizes; defaults to s^2 .. s^12.
        #[arg(short, long, value_delimiter = ',')]
        n: Vec<usize>,
        #[arg(long)]
        csv: bool,
    },
}

#[derive(Subcommand)]
enum AdderAction {
    /// Print the netlist.
    Build {
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Simulate against a ripple-carry oracle.
    Verify {
        /// All 4^n operand pairs (n <= 16).
        #[arg(long)]
        exhaustive: bool,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
    },
    /// JSON resource report.
    Resources,
}

/// A failed check (exit 1) as opposed to a usage error (exit 2).
type Passed = bool;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> anyhow::Result<Passed> {
    match command {
        Command::Generate { generator, n, s, k, format, output, validate } => {
            cmd_generate(&generator, n, s, k, format, output, validate)
        }
        Command::Table { n, generators, check_formulas, csv, json, fanout, fanout_with_outputs, jobs } => {
            let fanout = if fanout_with_outputs { Fanout::WithOutputs } else { fanout };
            cmd_table(n, generators, check_formulas, csv, json, fanout.into(), jobs)
        }
        Command::Mindepth { max_n } => {
            if max_n == 0 {
                bail!("--max-n must be at least 1");
            }
            print!("{}", min_depth_table(max_n).to_csv());
            Ok(true)
        }
        Command::Adder { n, s, action } => cmd_adder(n, s, action),
        Command::CheckKron { max_dim } => cmd_check_kron(max_dim),
        Command::Analyze { file, fanout, json } => cmd_analyze(file, fanout.into(), json),
        Command::DepthRatio { s, n, csv } => cmd_depth_ratio(s, n, csv),
    }
}

fn write_out(output: Option<PathBuf>, text: &str) -> anyhow::Result<()> {
    match output {
        Some(path) => fs::write(&path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn cmd_generate(
    name: &str,
    n: usize,
    s: Option<usize>,
    k: Option<u32>,
    format: Format,
    output: Option<PathBuf>,
    validate: bool,
) -> anyhow::Result<Passed> {
    let generator = match (name, s, k) {
        ("kronecker", Some(s), _) => Generator::Kronecker(s),
        ("kronecker", None, _) => bail!("kronecker needs -s"),
        ("ladner-fischer", _, Some(k)) => Generator::LadnerFischer(k),
        ("ladner-fischer", _, None) => bail!("ladner-fischer needs -k"),
        _ => name.parse()?,
    };
    let circuit = generator.build(n)?;
    if validate && !validate_prefix(&circuit)? {
        eprintln!("{generator} n={n}: not a prefix circuit");
        return Ok(false);
    }
    let text = match format {
        Format::Json => export_json(&circuit) + "\n",
        Format::Dot => export_dot(&circuit),
    };
    write_out(output, &text)?;
    Ok(true)
}

fn default_generators() -> Vec<Generator> {
    vec![
        Generator::Serial,
        Generator::Sklansky,
        Generator::KoggeStone,
        Generator::BrentKung,
        Generator::LadnerFischer(1),
        Generator::Kronecker(2),
        Generator::Kronecker(3),
        Generator::KroneckerOptimal,
    ]
}

#[derive(Serialize)]
struct TableReport<'a> {
    rows: &'a [CompareRow],
    checks: &'a [FormulaCheck],
}

fn cmd_table(
    ns: Vec<usize>,
    names: Vec<String>,
    check_formulas: bool,
    csv: bool,
    json: bool,
    convention: FanoutConvention,
    jobs: usize,
) -> anyhow::Result<Passed> {
    use rayon::prelude::*;

    let ns = if ns.is_empty() { (1..=9).map(|m| 1usize << m).collect() } else { ns };
    if ns.contains(&0) {
        bail!("n must be at least 1");
    }
    let generators = if names.is_empty() {
        default_generators()
    } else {
        names.iter().map(|g| g.parse()).collect::<Result<Vec<Generator>, _>>()?
    };
    let cells: Vec<(Generator, usize)> = generators
        .iter()
        .flat_map(|&g| ns.iter().map(move |&n| (g, n)))
        .filter(|&(g, n)| g.supports(n))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build()?;
    let results: Vec<(CompareRow, Vec<FormulaCheck>)> = pool.install(|| {
        cells
            .par_iter()
            .map(|&(g, n)| {
                let row = compare_row(g, n, convention)?;
                let checks = formula_checks(g, &row);
                Ok((row, checks))
            })
            .collect::<prefix_kron::Result<_>>()
    })?;
    let rows: Vec<CompareRow> = results.iter().map(|r| r.0.clone()).collect();
    let checks: Vec<FormulaCheck> = results.into_iter().flat_map(|r| r.1).collect();
    let failed: Vec<&FormulaCheck> = checks.iter().filter(|c| !c.holds()).collect();

    if json {
        let shown: &[FormulaCheck] = if check_formulas { &checks } else { &[] };
        println!("{}", serde_json::to_string_pretty(&TableReport { rows: &rows, checks: shown })?);
    } else if csv {
        println!("generator,n,size,depth,max_fanout,deficiency");
        for r in &rows {
            println!("{},{},{},{},{},{}", r.generator, r.n, r.size, r.depth, r.max_fanout, r.deficiency);
        }
    } else {
        println!("{:<22} {:>5} {:>7} {:>6} {:>7} {:>11}", "generator", "n", "size", "depth", "fanout", "deficiency");
        for r in &rows {
            println!(
                "{:<22} {:>5} {:>7} {:>6} {:>7} {:>11}",
                r.generator, r.n, r.size, r.depth, r.max_fanout, r.deficiency
            );
        }
        println!();
        println!("{:<22} {:>5} {:<11} {:<18} {:>2} {:>8} {:>8}", "generator", "n", "quantity", "formula", "", "expected", "measured");
        for c in &checks {
            let rel = match c.relation {
                prefix_kron::compare::Relation::Eq => "==",
                prefix_kron::compare::Relation::AtMost => "<=",
            };
            println!(
                "{:<22} {:>5} {:<11} {:<18} {:>2} {:>8} {:>8}{}",
                c.generator,
                c.n,
                c.quantity,
                c.formula,
                rel,
                c.expected,
                c.measured,
                if c.holds() { "" } else { "  DRIFT" }
            );
        }
    }
    if check_formulas && !failed.is_empty() {
        eprintln!("{} formula check(s) failed (generator, n, quantity, expected, measured):", failed.len());
        for c in &failed {
            eprintln!("  {}, {}, {}, {}, {}", c.generator, c.n, c.quantity, c.expected, c.measured);
        }
        return Ok(false);
    }
    Ok(true)
}

fn cmd_adder(n: usize, s: usize, action: AdderAction) -> anyhow::Result<Passed> {
    let circuit = build_adder(n, s)?;
    match action {
        AdderAction::Build { output } => {
            write_out(output, &circuit.netlist())?;
            Ok(true)
        }
        AdderAction::Verify { exhaustive, trials, seed } => {
            let sampling = if exhaustive {
                if n > 16 {
                    bail!("--exhaustive is limited to n <= 16");
                }
                Sampling::Exhaustive
            } else if n <= 10 {
                Sampling::Exhaustive
            } else {
                Sampling::Random { trials, seed }
            };
            let report = verify_circuit(&circuit, s, sampling)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(report.passed())
        }
        AdderAction::Resources => {
            println!("{}", serde_json::to_string_pretty(&resource_report(n, s)?)?);
            Ok(true)
        }
    }
}

fn cmd_check_kron(max_dim: usize) -> anyhow::Result<Passed> {
    let mut failures = Vec::new();
    let mut total = 0;
    for a in 2..=max_dim {
        for b in 2..=max_dim {
            total += 1;
            if !theorem1_check(a, b) {
                failures.push((a, b));
            }
        }
    }
    for (a, b) in &failures {
        println!("FAIL ({a}, {b})");
    }
    println!("{} of {total} pairs pass", total - failures.len());
    Ok(failures.is_empty())
}

#[derive(Serialize)]
struct Analysis {
    n: usize,
    size: usize,
    depth: usize,
    declared_depth: u32,
    max_fanout: usize,
    deficiency: i64,
    snir_gap: i64,
    fib_depth_lower_bound: i64,
    valid: bool,
}

fn cmd_analyze(file: PathBuf, convention: FanoutConvention, json: bool) -> anyhow::Result<Passed> {
    let text = fs::read_to_string(&file).with_context(|| format!("reading {}", file.display()))?;
    let circuit = import_json(&text)?;
    let m = metrics_with(&circuit, convention)?;
    let a = Analysis {
        n: circuit.n,
        size: m.size,
        depth: m.depth,
        declared_depth: circuit.declared_depth(),
        max_fanout: m.max_fanout,
        deficiency: m.deficiency,
        snir_gap: snir_gap(&m, circuit.n),
        fib_depth_lower_bound: fib_depth_lower_bound(circuit.n),
        valid: m.valid,
    };
    if json {
        println!("{}", serde_json::to_string_pretty(&a)?);
    } else {
        println!("n               {}", a.n);
        println!("size            {}", a.size);
        println!("depth           {} (declared {})", a.depth, a.declared_depth);
        println!("max fan-out     {}", a.max_fanout);
        println!("deficiency      {}", a.deficiency);
        println!("depth bound     {} (zero-deficiency circuits)", a.fib_depth_lower_bound);
        println!("prefix circuit  {}", if a.valid { "yes" } else { "NO" });
    }
    Ok(a.valid)
}

fn cmd_depth_ratio(s: usize, ns: Vec<usize>, csv: bool) -> anyhow::Result<Passed> {
    if s < 2 {
        bail!("s must be at least 2");
    }
    let ns = if ns.is_empty() {
        (2..=12u32).filter_map(|e| s.checked_pow(e)).collect()
    } else {
        ns
    };
    if ns.contains(&0) {
        bail!("n must be at least 1");
    }
    let limit = s as f64 / (s as f64).log2();
    if csv {
        println!("n,depth,ratio,bound");
    } else {
        println!("s = {s}, limit s/log2(s) = {limit:.4}");
        println!("{:>12} {:>6} {:>8} {:>6}", "n", "depth", "ratio", "bound");
    }
    for r in depth_ratio_report(&ns, s) {
        let ratio = r.ratio.map(|x| format!("{x:.4}")).unwrap_or_default();
        let bound = depth_bound(r.n, s);
        if csv {
            println!("{},{},{ratio},{bound}", r.n, r.depth);
        } else {
            println!("{:>12} {:>6} {:>8} {:>6}", r.n, r.depth, ratio, bound);
        }
    }
    Ok(true)
}
