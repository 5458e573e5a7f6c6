//! `cwcolor`: validate and realize clique-width expressions, solve
//! color-counting problems over them, and cross-check against brute force.

mod problem;

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use cwcolor::oracle::definitions::{find_k_community, global_k_roman_number, max_pds, max_quasi_clique};
use cwcolor::oracle::{brute_force_solve_with_budget, DEFAULT_BUDGET};
use cwcolor::{
    build_family, connected_graphs, instantiate_builtin, parse_expression, parse_graph, solve_global_k_roman,
    solve_k_community, solve_max_pds, solve_max_quasi_clique, solve_with, trivial_expression, validate,
    verify_coloring, CwExpression, DriverError, DriverSolution, Family, Graph, OracleError, ProblemModel, SolveError,
    SolveOptions, WeightValue,
};
use serde_json::{json, Map, Value};

use problem::{Problem, ProblemArgs};

/// An error with the exit status it maps to.
#[derive(Debug)]
pub struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn new(code: u8, msg: impl fmt::Display) -> Self {
        Failure { code, msg: msg.to_string() }
    }
    pub fn usage(msg: impl fmt::Display) -> Self {
        Failure::new(2, msg)
    }
    fn invalid(msg: impl fmt::Display) -> Self {
        Failure::new(3, msg)
    }
    pub fn mismatch(msg: impl fmt::Display) -> Self {
        Failure::new(4, msg)
    }
    fn budget(msg: impl fmt::Display) -> Self {
        Failure::new(5, msg)
    }
    fn internal(msg: impl fmt::Display) -> Self {
        Failure::new(6, msg)
    }
}

impl From<SolveError> for Failure {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::Invalid(_) => Failure::invalid(e),
            SolveError::VertexMismatch { .. } => Failure::mismatch(e),
            SolveError::TooLarge(_) => Failure::usage(e),
        }
    }
}

impl From<DriverError> for Failure {
    fn from(e: DriverError) -> Self {
        match e {
            DriverError::Model(m) => Failure::usage(m),
            DriverError::Solve(s) => s.into(),
            DriverError::Mismatch => Failure::mismatch(e),
            DriverError::Verification(_) | DriverError::WeightMismatch { .. } => Failure::internal(e),
        }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::BudgetExceeded { .. } => Failure::budget(e),
            OracleError::VertexMismatch(_) => Failure::mismatch(e),
        }
    }
}

#[derive(Parser)]
#[command(name = "cwcolor", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check an expression for redundant joins, empty rename targets and
    /// out-of-range labels.
    Validate {
        /// Expression file, or the expression itself if it starts with `(`.
        expr: String,
    },
    /// Print the graph an expression builds.
    Realize { expr: String },
    /// Print a family expression: path, cycle, complete, complete_bipartite.
    Family { name: String, n: usize, m: Option<usize> },
    /// Solve a problem with the dynamic program.
    Solve(RunArgs),
    /// Solve the same problem by exhaustive search on the graph.
    Oracle(RunArgs),
    /// Compare the dynamic program with brute force on every connected graph
    /// up to `--max-n` vertices.
    Compare(CompareArgs),
}

#[derive(Args, Clone)]
struct RunArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Expression file, or the expression itself if it starts with `(`.
    #[arg(long)]
    expr: Option<String>,
    /// Graph file the expression must realize.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Print a witness, one `<vertex> <color>` line per vertex.
    #[arg(long)]
    coloring: bool,
    #[arg(long)]
    json: bool,
    /// Disable reachable-profile pruning.
    #[arg(long)]
    no_prune: bool,
    /// Largest number of colorings the oracle may enumerate.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
}

#[derive(Args, Clone)]
struct CompareArgs {
    #[arg(long)]
    max_n: usize,
    /// Comma-separated problem ids, e.g. `mis,kcoloring3,kroman2,pds`.
    #[arg(long, value_delimiter = ',', required = true)]
    problems: Vec<String>,
    #[command(flatten)]
    params: SharedParams,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
}

/// Problem parameters shared by every id in a `compare` list.
#[derive(Args, Clone)]
struct SharedParams {
    #[arg(long)]
    gamma: Option<cwcolor::Ratio>,
    #[arg(long, value_enum, default_value_t = problem::Variant::Strict)]
    variant: problem::Variant,
    #[arg(long)]
    balanced: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Validate { expr } => cmd_validate(&expr),
        Command::Realize { expr } => {
            let e = read_expr(&expr)?;
            let (g, labels) = e.realize();
            print!("{}", g.to_text());
            for (v, l) in &labels.labels {
                println!("# label {v} {l}");
            }
            Ok(())
        }
        Command::Family { name, n, m } => {
            let f = Family::from_name(&name).ok_or_else(|| Failure::usage(format!("unknown family `{name}`")))?;
            println!("{}", build_family(f, n, m).map_err(Failure::usage)?.to_sexpr());
            Ok(())
        }
        Command::Solve(args) => cmd_run(&args, false),
        Command::Oracle(args) => cmd_run(&args, true),
        Command::Compare(args) => cmd_compare(&args),
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn read_expr(arg: &str) -> Result<CwExpression, Failure> {
    let text = if arg.trim_start().starts_with('(') { arg.to_string() } else { read_text(Path::new(arg))? };
    parse_expression(&text).map_err(|e| Failure::usage(format!("expression: {e}")))
}

fn cmd_validate(arg: &str) -> Result<(), Failure> {
    let e = read_expr(arg)?;
    let report = validate(&e);
    for v in &report.violations {
        println!("{}: {v}", if v.kind.is_warning() { "warning" } else { "error" });
    }
    if report.ok() {
        println!("valid (k = {}, {} nodes)", e.k(), e.len());
        Ok(())
    } else {
        Err(Failure::invalid("expression is not valid"))
    }
}

/// Loads and validates the expression (if any) and settles on the graph.
fn load(args: &RunArgs, need_expr: bool) -> Result<(Option<CwExpression>, Graph), Failure> {
    let e = match &args.expr {
        Some(text) => Some(read_expr(text)?),
        None if need_expr => return Err(Failure::usage("--expr is required")),
        None => None,
    };
    if let Some(e) = &e {
        let report = validate(e);
        if !report.ok() {
            let errors: Vec<String> =
                report.violations.iter().filter(|v| !v.kind.is_warning()).map(ToString::to_string).collect();
            return Err(Failure::invalid(format!("expression is not valid: {}", errors.join("; "))));
        }
    }
    let g = match (&args.graph, &e) {
        (Some(path), _) => {
            let g = parse_graph(&read_text(path)?).map_err(|err| Failure::usage(format!("graph: {err}")))?;
            if let Some(e) = &e {
                if !e.check_realizes(&g) {
                    return Err(Failure::mismatch("expression does not realize the graph"));
                }
            }
            g
        }
        (None, Some(e)) => e.realize().0,
        (None, None) => return Err(Failure::usage("give --expr or --graph")),
    };
    Ok((e, g))
}

/// A solve or oracle result ready for printing.
struct Answer {
    weight: WeightValue,
    coloring: Option<Vec<(String, String)>>,
    stats: Map<String, Value>,
}

fn named(g: &Graph, colors: &[String], c: &[usize]) -> Vec<(String, String)> {
    c.iter().enumerate().map(|(v, &a)| (g.name(v).to_string(), colors[a].clone())).collect()
}

fn model(spec: &cwcolor::Builtin, g: &Graph) -> Result<ProblemModel, Failure> {
    instantiate_builtin(spec, g).map_err(Failure::usage)
}

fn dp_answer(p: &Problem, g: &Graph, e: &CwExpression, prune: bool) -> Result<Answer, Failure> {
    let mut stats = Map::new();
    stats.insert("nodes".into(), json!(e.len()));
    let driver = |sol: DriverSolution, stats: &mut Map<String, Value>| {
        stats.insert("memo_entries".into(), Value::Null);
        stats.insert("solves".into(), json!(sol.solves));
        if let Some(sizes) = &sol.sizes {
            stats.insert("sizes".into(), json!(sizes));
        }
        (sol.weight, sol.coloring.map(|c| named(g, &sol.colors, &c)))
    };
    let (weight, coloring) = match p {
        Problem::Model(spec) => {
            let m = model(spec, g)?;
            let sol = solve_with(&m, e, SolveOptions { prune, want_coloring: true })?;
            if let Some(c) = &sol.coloring {
                match verify_coloring(&m, g, c) {
                    Ok(w) if w == sol.weight => {}
                    Ok(w) => {
                        return Err(Failure::internal(format!("witness weighs {w}, solver reported {}", sol.weight)))
                    }
                    Err(f) => return Err(Failure::internal(format!("witness failed verification: {f}"))),
                }
            }
            stats.insert("memo_entries".into(), json!(sol.stats.memo_entries));
            (sol.weight, sol.named_coloring(&m))
        }
        Problem::GlobalRoman { k, variant } => driver(solve_global_k_roman(*k, g, e, *variant)?, &mut stats),
        Problem::Community { k, balanced } => driver(solve_k_community(*k, g, e, *balanced)?, &mut stats),
        Problem::Pds { required } => driver(solve_max_pds(g, e, required)?, &mut stats),
        Problem::QuasiClique { gamma } => driver(solve_max_quasi_clique(*gamma, g, e)?, &mut stats),
    };
    Ok(Answer { weight, coloring, stats })
}

/// Exhaustive answer. Driver problems are evaluated from their definitions.
fn oracle_answer(p: &Problem, g: &Graph, budget: u64) -> Result<Answer, Failure> {
    let n = g.vertex_count();
    let within = |base: usize| -> Result<(), Failure> {
        let count = (base as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
        if n > 31 || count > budget as u128 {
            return Err(Failure::budget(format!("{count} candidates exceed the budget of {budget}")));
        }
        Ok(())
    };
    let subset = |found: Option<(usize, u32)>| match found {
        Some((size, mask)) => {
            let c: Vec<(String, String)> = (0..n)
                .map(|v| (g.name(v).to_string(), if mask >> v & 1 == 1 { "S" } else { "Sbar" }.to_string()))
                .collect();
            (WeightValue::Finite(size as i64), Some(c))
        }
        None => (WeightValue::Error, None),
    };
    let (weight, coloring) = match p {
        Problem::Model(spec) => {
            let m = model(spec, g)?;
            let sol = brute_force_solve_with_budget(&m, g, budget)?;
            (sol.weight, sol.named_coloring(&m))
        }
        Problem::GlobalRoman { k, .. } => {
            within(*k as usize + 2)?;
            let (w, f) = global_k_roman_number(g, *k as usize);
            let c = f.iter().enumerate().map(|(v, x)| (g.name(v).to_string(), x.to_string())).collect();
            (WeightValue::Finite(w as i64), Some(c))
        }
        Problem::Community { k, balanced } => {
            within(*k as usize)?;
            match find_k_community(g, *k as usize, *balanced) {
                Some(part) => {
                    let c =
                        part.iter().enumerate().map(|(v, x)| (g.name(v).to_string(), (x + 1).to_string())).collect();
                    (WeightValue::Finite(0), Some(c))
                }
                None => (WeightValue::Error, None),
            }
        }
        Problem::Pds { required } => {
            within(2)?;
            let mask = required.iter().filter_map(|v| g.index_of(v)).fold(0u32, |m, v| m | 1 << v);
            subset(max_pds(g, mask))
        }
        Problem::QuasiClique { gamma } => {
            within(2)?;
            subset(max_quasi_clique(g, *gamma))
        }
    };
    Ok(Answer { weight, coloring, stats: Map::new() })
}

fn cmd_run(args: &RunArgs, oracle: bool) -> Result<(), Failure> {
    let (e, g) = load(args, !oracle)?;
    let p = args.problem.resolve(&g)?;
    let start = Instant::now();
    let mut answer = match (&e, oracle) {
        (Some(e), false) => dp_answer(&p, &g, e, !args.no_prune)?,
        _ => oracle_answer(&p, &g, args.budget)?,
    };
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    answer.stats.insert("elapsed_ms".into(), json!(elapsed_ms));
    if args.json {
        let mut out = Map::new();
        out.insert("problem".into(), json!(args.problem.problem));
        out.insert(
            "weight".into(),
            match answer.weight {
                WeightValue::Finite(w) => json!(w),
                WeightValue::Error => json!("infeasible"),
            },
        );
        if let (true, Some(c)) = (args.coloring, &answer.coloring) {
            let map: Map<String, Value> = c.iter().map(|(v, a)| (v.clone(), json!(a))).collect();
            out.insert("coloring".into(), Value::Object(map));
        }
        out.insert("stats".into(), Value::Object(answer.stats));
        println!("{}", Value::Object(out));
    } else {
        println!("{}", answer.weight);
        if let (true, Some(c)) = (args.coloring, &answer.coloring) {
            for (v, a) in c {
                println!("{v} {a}");
            }
        }
    }
    Ok(())
}

fn cmd_compare(args: &CompareArgs) -> Result<(), Failure> {
    if args.max_n > 7 {
        return Err(Failure::usage("--max-n is limited to 7"));
    }
    let mut instances = 0;
    let mut skipped = 0;
    let mut mismatches = 0;
    for n in 1..=args.max_n {
        for g in connected_graphs(n) {
            let e = trivial_expression(&g).map_err(Failure::internal)?;
            for id in &args.problems {
                let pa = ProblemArgs {
                    problem: id.clone(),
                    k: None,
                    sizes: None,
                    gamma: args.params.gamma,
                    required: None,
                    variant: args.params.variant,
                    balanced: args.params.balanced,
                    lcvp: None,
                    weights: None,
                    objective: problem::Objective::Min,
                };
                let p = pa.resolve(&g)?;
                // Parameters that do not fit this graph (such as a balanced
                // split of an odd vertex count) skip the instance.
                let dp = match dp_answer(&p, &g, &e, true) {
                    Ok(a) => a,
                    Err(f) if f.code == 2 => {
                        skipped += 1;
                        continue;
                    }
                    Err(f) => return Err(f),
                };
                let want = oracle_answer(&p, &g, args.budget)?;
                instances += 1;
                if dp.weight != want.weight {
                    mismatches += 1;
                    let edges: Vec<String> = g.edges().map(|(u, v)| format!("{}-{}", g.name(u), g.name(v))).collect();
                    println!(
                        "MISMATCH {id} on n={n} edges [{}]: dp {} oracle {}",
                        edges.join(" "),
                        dp.weight,
                        want.weight
                    );
                }
            }
        }
    }
    println!("{instances} instances, {mismatches} mismatches, {skipped} skipped");
    if mismatches > 0 {
        return Err(Failure::internal(format!("{mismatches} mismatches")));
    }
    Ok(())
}
