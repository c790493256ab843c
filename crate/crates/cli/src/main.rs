//! Command line front end. Every subcommand turns one question about the
//! urn operators into a deterministic CSV or JSON artifact: pmf dumps,
//! operator tables, bound reports with margins, scaled-error ladders,
//! minimal-degree searches and the six standard figure data files.
//!
//! Exit codes: 0 success, 2 bad input, 3 bound violation, 4 search
//! exhausted.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use polya_approx::analysis::{
    derivative_bound_check, min_degree_for_tolerance, popoviciu_check, uniform_grid,
    voronovskaya_estimate, BoundReport, MinDegreeOutcome, ProbePoint, VoronovskayaSample,
};
use polya_approx::distribution::{polya_pmf, r_params, PolyaParams};
use polya_approx::fixtures::{self, FixtureEntry};
use polya_approx::operators::{evaluate_on_grid, OperatorKind, Smoothness, TargetFunction};
use polya_approx::Params;

/// Sup of |lhs| still accepted when a bound degenerates to `0 <= 0`
/// because the target's modulus vanishes; covers evaluation round-off,
/// which the bounds do not model.
const ZERO_MODULUS_FLOOR: f64 = 1e-13;

#[derive(Parser)]
#[command(
    name = "polya-approx",
    version,
    about = "Urn-driven approximation operators: evaluation, bounds, figure data",
    max_term_width = 100
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print an urn pmf as `k,p` CSV rows
    Pmf(PmfArgs),
    /// Evaluate one operator against one target over a grid
    Eval(EvalArgs),
    /// Tabulate several operators side by side and summarize sup errors
    Compare(CompareArgs),
    /// Check the error bounds and report margins
    Bounds(BoundsArgs),
    /// Sample the scaled error n (R_n f - f) along a dyadic degree ladder
    Voronovskaya(VoronovskayaArgs),
    /// Find the smallest degree whose error meets a tolerance
    Mindegree(MindegreeArgs),
    /// Write the six standard comparison data files
    Figures(FiguresArgs),
}

#[derive(Args)]
struct PmfArgs {
    /// Initial weight of the counted colour
    #[arg(long, conflicts_with = "r_params")]
    a: Option<f64>,
    /// Initial weight of the other colour
    #[arg(long, conflicts_with = "r_params")]
    b: Option<f64>,
    /// Replacement weight added after each draw (negative removes)
    #[arg(long, allow_hyphen_values = true, conflicts_with = "r_params")]
    c: Option<f64>,
    /// Use the variance-minimizing urn for the point --x
    #[arg(long, requires = "x")]
    r_params: bool,
    /// Evaluation point in [0,1] (with --r-params)
    #[arg(long)]
    x: Option<f64>,
    /// Number of draws
    #[arg(long)]
    n: usize,
    /// Output file; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    /// Operator: bernstein, stancu:<alpha>, lupas, r, qbernstein:<q>,
    /// pqbernstein:<p>:<q>
    #[arg(long)]
    op: String,
    /// Catalogued target function
    #[arg(long)]
    fixture: Option<String>,
    /// Two-column x,value CSV sampled on a range covering [0,1]
    #[arg(long)]
    data: Option<PathBuf>,
    /// Degree
    #[arg(long)]
    n: usize,
    /// Grid point count, equally spaced with endpoints
    #[arg(long, default_value_t = 201)]
    grid: usize,
    /// Output file; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    /// Catalogued target function
    #[arg(long)]
    fixture: Option<String>,
    /// Two-column x,value CSV sampled on a range covering [0,1]
    #[arg(long)]
    data: Option<PathBuf>,
    /// Degrees, comma separated
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    /// Grid point count
    #[arg(long, default_value_t = 201)]
    grid: usize,
    /// Operators, comma separated; default is the five comparison operators
    #[arg(long, value_delimiter = ',')]
    ops: Vec<String>,
    /// Directory receiving one CSV per degree plus a JSON summary
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct BoundsArgs {
    /// popoviciu, derivative, or both
    #[arg(long, default_value = "both")]
    theorem: String,
    /// Fixture label, or `all` for every catalogued target
    #[arg(long, default_value = "all")]
    fixture: String,
    /// Degrees, comma separated
    #[arg(long, value_delimiter = ',', default_value = "10,50,100")]
    n: Vec<usize>,
    /// Grid point count
    #[arg(long, default_value_t = 201)]
    grid: usize,
    /// Output file; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VoronovskayaArgs {
    /// Catalogued target function (needs second-derivative data)
    #[arg(long)]
    fixture: String,
    /// Evaluation points, comma separated
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.3,0.5,0.7")]
    x: Vec<f64>,
    /// Top of the dyadic degree ladder 4, 8, 16, ...
    #[arg(long, default_value_t = 16384)]
    n_max: usize,
    /// Output file; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MindegreeArgs {
    /// Operator, e.g. bernstein or r
    #[arg(long)]
    op: String,
    /// Catalogued target function
    #[arg(long)]
    fixture: Option<String>,
    /// Two-column x,value CSV sampled on a range covering [0,1]
    #[arg(long)]
    data: Option<PathBuf>,
    /// Error tolerance the degree must meet
    #[arg(long)]
    tol: f64,
    /// Grid point count for the sup error
    #[arg(long, default_value_t = 201)]
    grid: usize,
    /// Measure the error at this one point instead of the grid sup;
    /// the full-sup search still runs and is reported alongside
    #[arg(long, conflicts_with = "closed_form")]
    at_x: Option<f64>,
    /// Use the target's exact sup-error formula instead of evaluation
    #[arg(long)]
    closed_form: bool,
    /// Give up beyond this degree
    #[arg(long, default_value_t = 1 << 20)]
    n_max: usize,
    /// Output file; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FiguresArgs {
    /// Directory receiving the six CSV files
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

enum CliError {
    /// The request is malformed or unsatisfiable: exit 2.
    Input(String),
    /// A checked bound failed, which signals a library bug: exit 3.
    Violation(String),
    /// The degree search hit its cap without an answer: exit 4.
    NotReached(String),
}

impl CliError {
    fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }

    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Violation(_) => 3,
            CliError::NotReached(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Violation(m) | CliError::NotReached(m) => m,
        }
    }
}

impl From<polya_approx::Error> for CliError {
    fn from(e: polya_approx::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = configure_threads().and_then(|()| match &cli.command {
        Command::Pmf(a) => cmd_pmf(a),
        Command::Eval(a) => cmd_eval(a),
        Command::Compare(a) => cmd_compare(a),
        Command::Bounds(a) => cmd_bounds(a),
        Command::Voronovskaya(a) => cmd_voronovskaya(a),
        Command::Mindegree(a) => cmd_mindegree(a),
        Command::Figures(a) => cmd_figures(a),
    });
    match run {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

/// POLYA_APPROX_THREADS caps the worker pool; 0 or unset means automatic.
fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("POLYA_APPROX_THREADS") else {
        return Ok(());
    };
    if v.trim().is_empty() {
        return Ok(());
    }
    let k: usize = v.trim().parse().map_err(|_| {
        CliError::input(format!("POLYA_APPROX_THREADS = {v:?} is not a thread count"))
    })?;
    if k == 0 {
        return Ok(());
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(k)
        .build_global()
        .map_err(|e| CliError::input(format!("cannot size the thread pool: {e}")))
}

/// Shortest decimal that round-trips the value; the CSV number format.
fn csv_num(v: f64) -> String {
    format!("{v}")
}

fn write_artifact(path: Option<&Path>, content: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, content)
            .map_err(|e| CliError::input(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn write_file(path: &Path, content: &str) -> Result<(), CliError> {
    fs::write(path, content)
        .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn to_json(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("artifact types serialize");
    s.push('\n');
    s
}

/// A target to approximate: a catalogued fixture or a sampled data file.
struct Target {
    function: TargetFunction,
    entry: Option<FixtureEntry>,
}

impl Target {
    fn name(&self) -> &str {
        self.function.label()
    }
}

fn resolve_target(fixture: Option<&str>, data: Option<&Path>) -> Result<Target, CliError> {
    match (fixture, data) {
        (Some(_), Some(_)) => Err(CliError::input("give --fixture or --data, not both")),
        (None, None) => Err(CliError::input(format!(
            "give --fixture (one of {}) or --data <csv>",
            fixtures::labels().join(", ")
        ))),
        (Some(label), None) => {
            let entry = fixtures::find(label).ok_or_else(|| {
                CliError::input(format!(
                    "unknown fixture {label:?}; catalogued: {}",
                    fixtures::labels().join(", ")
                ))
            })?;
            Ok(Target {
                function: entry.function.clone(),
                entry: Some(entry),
            })
        }
        (None, Some(path)) => Ok(Target {
            function: load_sampled(path)?,
            entry: None,
        }),
    }
}

/// Two-column `x,value` CSV whose x range covers [0,1]; the returned
/// target is the piecewise-linear interpolant of the samples.
fn load_sampled(path: &Path) -> Result<TargetFunction, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    let mut pts: Vec<(f64, f64)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 2 {
            return Err(CliError::input(format!(
                "{}:{}: expected two comma separated columns",
                path.display(),
                i + 1
            )));
        }
        match (
            fields[0].trim().parse::<f64>(),
            fields[1].trim().parse::<f64>(),
        ) {
            (Ok(x), Ok(y)) if x.is_finite() && y.is_finite() => pts.push((x, y)),
            // a single leading non-numeric row is a header
            _ if i == 0 => continue,
            _ => {
                return Err(CliError::input(format!(
                    "{}:{}: cannot parse {line:?} as x,value",
                    path.display(),
                    i + 1
                )))
            }
        }
    }
    if pts.len() < 2 {
        return Err(CliError::input(format!(
            "{}: needs at least two sample rows",
            path.display()
        )));
    }
    pts.sort_by(|p, q| p.0.total_cmp(&q.0));
    let (lo, hi) = (pts[0].0, pts[pts.len() - 1].0);
    if lo > 0.0 || hi < 1.0 {
        return Err(CliError::input(format!(
            "{}: samples span [{lo}, {hi}], which does not cover [0, 1]",
            path.display()
        )));
    }
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "samples".into());
    Ok(TargetFunction::new(
        name,
        Smoothness::PiecewiseC1,
        move |x| {
            let i = pts.partition_point(|p| p.0 < x);
            if i == 0 {
                return pts[0].1;
            }
            if i == pts.len() {
                return pts[pts.len() - 1].1;
            }
            let (x0, y0) = pts[i - 1];
            let (x1, y1) = pts[i];
            if x1 == x0 {
                y1
            } else {
                y0 + (y1 - y0) * (x - x0) / (x1 - x0)
            }
        },
    ))
}

/// Operator tokens: `bernstein`, `stancu:<alpha>`, `lupas`, `r`,
/// `qbernstein:<q>`, `pqbernstein:<p>:<q>`.
fn parse_operator(token: &str) -> Result<OperatorKind, CliError> {
    let parts: Vec<&str> = token.split(':').map(str::trim).collect();
    let num = |s: &str, what: &str| -> Result<f64, CliError> {
        s.parse::<f64>().map_err(|_| {
            CliError::input(format!("operator {token:?}: {what} {s:?} is not a number"))
        })
    };
    match parts.as_slice() {
        ["bernstein"] => Ok(OperatorKind::Bernstein),
        ["lupas"] => Ok(OperatorKind::Lupas),
        ["r"] => Ok(OperatorKind::R),
        ["stancu", alpha] => Ok(OperatorKind::Stancu {
            alpha: num(alpha, "alpha")?,
        }),
        ["qbernstein", q] => Ok(OperatorKind::QBernstein { q: num(q, "q")? }),
        ["pqbernstein", p, q] => Ok(OperatorKind::PQBernstein {
            p: num(p, "p")?,
            q: num(q, "q")?,
        }),
        _ => Err(CliError::input(format!(
            "unknown operator {token:?}; use bernstein, stancu:<alpha>, lupas, r, \
             qbernstein:<q> or pqbernstein:<p>:<q>"
        ))),
    }
}

/// The five comparison operators, in canonical column order.
fn comparison_operators() -> Vec<OperatorKind> {
    vec![
        OperatorKind::Bernstein,
        OperatorKind::Lupas,
        OperatorKind::R,
        OperatorKind::QBernstein { q: 0.95 },
        OperatorKind::PQBernstein { p: 0.99, q: 0.95 },
    ]
}

fn cmd_pmf(args: &PmfArgs) -> Result<(), CliError> {
    let params: Params = if args.r_params {
        let x = args.x.expect("clap ties --r-params to --x");
        r_params(x, args.n)?
    } else {
        match (args.a, args.b, args.c) {
            (Some(a), Some(b), Some(c)) => PolyaParams::new(a, b, c, args.n)?,
            _ => {
                return Err(CliError::input(
                    "give the urn as --a --b --c or as --r-params --x",
                ))
            }
        }
    };
    let pmf = polya_pmf(&params)?;
    let mut out = String::from("k,p\n");
    for (k, p) in pmf.probs().iter().enumerate() {
        out.push_str(&format!("{k},{p:.16e}\n"));
    }
    write_artifact(args.out.as_deref(), &out)
}

fn cmd_eval(args: &EvalArgs) -> Result<(), CliError> {
    let target = resolve_target(args.fixture.as_deref(), args.data.as_deref())?;
    let op = parse_operator(&args.op)?;
    let grid = uniform_grid(args.grid)?;
    let records = evaluate_on_grid(&op, &target.function, args.n, &grid)?;
    let mut out = format!("x,f,{},error\n", op.label());
    for r in &records {
        out.push_str(&format!(
            "{},{},{},{}\n",
            csv_num(r.x),
            csv_num(r.f_value),
            csv_num(r.value),
            csv_num(r.error)
        ));
    }
    write_artifact(args.out.as_deref(), &out)
}

#[derive(Serialize)]
struct OpSup {
    operator: String,
    sup_error: f64,
    argmax_x: f64,
}

#[derive(Serialize)]
struct CompareEntry {
    n: usize,
    sup_errors: Vec<OpSup>,
}

#[derive(Serialize)]
struct CompareSummary {
    target: String,
    grid_points: usize,
    operators: Vec<String>,
    results: Vec<CompareEntry>,
}

/// One side-by-side table: the CSV text plus per-operator sup errors.
fn comparison_table(
    f: &TargetFunction,
    ops: &[OperatorKind],
    n: usize,
    grid: &[f64],
) -> Result<(String, Vec<OpSup>), CliError> {
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(ops.len());
    for op in ops {
        let recs = evaluate_on_grid(op, f, n, grid)?;
        cols.push(recs.into_iter().map(|r| r.value).collect());
    }
    let fvals: Vec<f64> = grid
        .iter()
        .map(|&x| f.checked_eval(x))
        .collect::<Result<_, _>>()?;

    let mut csv = String::from("x,f");
    for op in ops {
        csv.push(',');
        csv.push_str(op.label());
    }
    csv.push('\n');
    for (i, &x) in grid.iter().enumerate() {
        csv.push_str(&csv_num(x));
        csv.push(',');
        csv.push_str(&csv_num(fvals[i]));
        for col in &cols {
            csv.push(',');
            csv.push_str(&csv_num(col[i]));
        }
        csv.push('\n');
    }

    let sups = ops
        .iter()
        .zip(&cols)
        .map(|(op, col)| {
            let mut sup = 0.0;
            let mut arg = grid[0];
            for (i, &x) in grid.iter().enumerate() {
                let e = (col[i] - fvals[i]).abs();
                if e > sup {
                    sup = e;
                    arg = x;
                }
            }
            OpSup {
                operator: op.label().into(),
                sup_error: sup,
                argmax_x: arg,
            }
        })
        .collect();
    Ok((csv, sups))
}

fn cmd_compare(args: &CompareArgs) -> Result<(), CliError> {
    let target = resolve_target(args.fixture.as_deref(), args.data.as_deref())?;
    let ops: Vec<OperatorKind> = if args.ops.is_empty() {
        comparison_operators()
    } else {
        args.ops
            .iter()
            .map(|t| parse_operator(t))
            .collect::<Result<_, _>>()?
    };
    for (i, op) in ops.iter().enumerate() {
        if ops[..i].iter().any(|o| o.label() == op.label()) {
            return Err(CliError::input(format!(
                "operator {} appears twice; columns must be unique",
                op.label()
            )));
        }
    }
    if args.n.is_empty() {
        return Err(CliError::input("give at least one degree with --n"));
    }
    let grid = uniform_grid(args.grid)?;
    fs::create_dir_all(&args.out_dir)
        .map_err(|e| CliError::input(format!("cannot create {}: {e}", args.out_dir.display())))?;

    let tables: Vec<(usize, String, Vec<OpSup>)> = args
        .n
        .par_iter()
        .map(|&n| {
            let (csv, sups) = comparison_table(&target.function, &ops, n, &grid)?;
            Ok((n, csv, sups))
        })
        .collect::<Result<_, CliError>>()?;

    let mut results = Vec::with_capacity(tables.len());
    for (n, csv, sups) in tables {
        let path = args.out_dir.join(format!("compare_{}_n{}.csv", target.name(), n));
        write_file(&path, &csv)?;
        results.push(CompareEntry { n, sup_errors: sups });
    }
    let summary = CompareSummary {
        target: target.name().into(),
        grid_points: args.grid,
        operators: ops.iter().map(|o| o.label().into()).collect(),
        results,
    };
    let path = args.out_dir.join(format!("compare_{}.json", target.name()));
    write_file(&path, &to_json(&summary))
}

#[derive(Clone, Copy, PartialEq)]
enum Theorem {
    Popoviciu,
    Derivative,
}

impl Theorem {
    fn label(self) -> &'static str {
        match self {
            Theorem::Popoviciu => "popoviciu",
            Theorem::Derivative => "derivative",
        }
    }
}

#[derive(Serialize)]
struct SkipNote {
    target: String,
    theorem: String,
    reason: String,
}

#[derive(Serialize)]
struct BoundsArtifact {
    degrees: Vec<usize>,
    grid_points: usize,
    all_satisfied: bool,
    reports: Vec<BoundReport>,
    /// Bounds that degenerate to `0 <= 0` (zero modulus): reported but
    /// judged against a round-off floor instead of literal satisfaction.
    degenerate_zero_modulus: Vec<String>,
    skipped: Vec<SkipNote>,
}

fn cmd_bounds(args: &BoundsArgs) -> Result<(), CliError> {
    let theorems: Vec<Theorem> = match args.theorem.as_str() {
        "popoviciu" => vec![Theorem::Popoviciu],
        "derivative" => vec![Theorem::Derivative],
        "both" => vec![Theorem::Popoviciu, Theorem::Derivative],
        other => {
            return Err(CliError::input(format!(
                "unknown theorem {other:?}; use popoviciu, derivative or both"
            )))
        }
    };
    let entries: Vec<FixtureEntry> = if args.fixture == "all" {
        fixtures::corpus()
    } else {
        vec![fixtures::find(&args.fixture).ok_or_else(|| {
            CliError::input(format!(
                "unknown fixture {:?}; catalogued: {}",
                args.fixture,
                fixtures::labels().join(", ")
            ))
        })?]
    };
    if args.n.is_empty() {
        return Err(CliError::input("give at least one degree with --n"));
    }
    // a fully pinned request must not silently skip
    let pinned = args.fixture != "all" && theorems.len() == 1;
    let grid = uniform_grid(args.grid)?;

    let mut reports = Vec::new();
    let mut degenerate = Vec::new();
    let mut skipped = Vec::new();
    let mut violations = Vec::new();
    for entry in &entries {
        for &theorem in &theorems {
            let applicable = match theorem {
                Theorem::Popoviciu => entry.function.smoothness() >= Smoothness::Continuous,
                Theorem::Derivative => entry.function.smoothness() >= Smoothness::C1,
            };
            if !applicable {
                let reason = format!(
                    "{} is only {}, the {} bound does not apply",
                    entry.function.label(),
                    entry.function.smoothness(),
                    theorem.label()
                );
                if pinned {
                    return Err(CliError::input(reason));
                }
                skipped.push(SkipNote {
                    target: entry.function.label().into(),
                    theorem: theorem.label().into(),
                    reason,
                });
                continue;
            }
            for &n in &args.n {
                let report = match theorem {
                    Theorem::Popoviciu => popoviciu_check(&entry.function, n, &grid)?,
                    Theorem::Derivative => derivative_bound_check(
                        &entry.function,
                        entry.derivative.as_ref(),
                        n,
                        &grid,
                    )?,
                };
                let holds = if report.modulus.upper == 0.0 {
                    degenerate.push(format!(
                        "{} on {} at n = {}: bound is 0 <= 0, sup |error| = {:.3e} \
                         judged against the {:.0e} round-off floor",
                        report.theorem, report.f, n, report.sup_lhs, ZERO_MODULUS_FLOOR
                    ));
                    report.sup_lhs <= ZERO_MODULUS_FLOOR
                } else {
                    report.satisfied && report.flat_satisfied
                };
                if !holds {
                    violations.push(format!(
                        "{} bound fails for {} at n = {} (sup lhs = {:.6e}, margin = {:.3e})",
                        report.theorem, report.f, n, report.sup_lhs, report.margin
                    ));
                }
                reports.push(report);
            }
        }
    }

    let artifact = BoundsArtifact {
        degrees: args.n.clone(),
        grid_points: args.grid,
        all_satisfied: violations.is_empty(),
        reports,
        degenerate_zero_modulus: degenerate,
        skipped,
    };
    write_artifact(args.out.as_deref(), &to_json(&artifact))?;
    if let Some(first) = violations.first() {
        return Err(CliError::Violation(format!(
            "{first}{}",
            if violations.len() > 1 {
                format!(" (and {} more)", violations.len() - 1)
            } else {
                String::new()
            }
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct VoronovskayaArtifact {
    fixture: String,
    n_values: Vec<usize>,
    samples: Vec<VoronovskayaSample>,
}

fn cmd_voronovskaya(args: &VoronovskayaArgs) -> Result<(), CliError> {
    let entry = fixtures::find(&args.fixture).ok_or_else(|| {
        CliError::input(format!(
            "unknown fixture {:?}; catalogued: {}",
            args.fixture,
            fixtures::labels().join(", ")
        ))
    })?;
    let fpp = entry.second_derivative.clone().ok_or_else(|| {
        CliError::input(format!(
            "{} carries no second-derivative data; the scaled-error limit needs a C2 target",
            args.fixture
        ))
    })?;
    let mut ns = Vec::new();
    let mut n = 4usize;
    while n <= args.n_max {
        ns.push(n);
        n = match n.checked_mul(2) {
            Some(m) => m,
            None => break,
        };
    }
    if ns.len() < 2 {
        return Err(CliError::input(format!(
            "--n-max {} leaves fewer than two dyadic degrees; give at least 8",
            args.n_max
        )));
    }
    if args.x.is_empty() {
        return Err(CliError::input("give at least one point with --x"));
    }
    let samples: Vec<VoronovskayaSample> = args
        .x
        .par_iter()
        .map(|&x| voronovskaya_estimate(&entry.function, &fpp, x, &ns).map_err(CliError::from))
        .collect::<Result<_, _>>()?;
    let artifact = VoronovskayaArtifact {
        fixture: args.fixture.clone(),
        n_values: ns,
        samples,
    };
    write_artifact(args.out.as_deref(), &to_json(&artifact))
}

#[derive(Serialize)]
struct SearchSection {
    mode: String,
    n_min: Option<usize>,
    outcome: MinDegreeOutcome,
    profile: Vec<ProbePoint>,
}

#[derive(Serialize)]
struct MinDegreeArtifact {
    operator: String,
    target: String,
    tol: f64,
    mode: String,
    n_min: Option<usize>,
    outcome: MinDegreeOutcome,
    profile: Vec<ProbePoint>,
    /// Present when --at-x restricts the main search: the grid-sup search
    /// over the same degrees, which may end at a different degree.
    #[serde(skip_serializing_if = "Option::is_none")]
    full_sup: Option<SearchSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

fn found_n(outcome: &MinDegreeOutcome) -> Option<usize> {
    match outcome {
        MinDegreeOutcome::Found { n } => Some(*n),
        MinDegreeOutcome::NotReached { .. } => None,
    }
}

fn cmd_mindegree(args: &MindegreeArgs) -> Result<(), CliError> {
    let op = parse_operator(&args.op)?;
    let target = resolve_target(args.fixture.as_deref(), args.data.as_deref())?;
    let f = &target.function;
    let n_start = op.min_degree();
    let grid = uniform_grid(args.grid)?;

    let sup_search = || {
        min_degree_for_tolerance(
            |n| {
                let mut sup = 0.0f64;
                for &x in &grid {
                    sup = sup.max((op.apply(f, n, x)? - f.checked_eval(x)?).abs());
                }
                Ok(sup)
            },
            args.tol,
            n_start,
            args.n_max,
        )
    };

    let (mode, report, full_sup) = if args.closed_form {
        let entry = target
            .entry
            .as_ref()
            .ok_or_else(|| CliError::input("--closed-form needs a catalogued fixture"))?;
        let exact = entry.exact_sup_error.filter(|e| e(&op, n_start).is_some());
        let exact = exact.ok_or_else(|| {
            CliError::input(format!(
                "no exact sup-error formula for {} on {}",
                op.label(),
                target.name()
            ))
        })?;
        let report = min_degree_for_tolerance(
            |n| {
                exact(&op, n).ok_or_else(|| {
                    polya_approx::Error::InvalidParams(format!(
                        "exact sup error undefined at n = {n}"
                    ))
                })
            },
            args.tol,
            n_start,
            args.n_max,
        )?;
        ("closed-form sup error".to_string(), report, None)
    } else if let Some(x0) = args.at_x {
        let report = min_degree_for_tolerance(
            |n| Ok((op.apply(f, n, x0)? - f.checked_eval(x0)?).abs()),
            args.tol,
            n_start,
            args.n_max,
        )?;
        let sup_report = sup_search()?;
        (
            format!("error at x = {x0}"),
            report,
            Some(SearchSection {
                mode: format!("sup error on a {}-point grid", args.grid),
                n_min: found_n(&sup_report.outcome),
                outcome: sup_report.outcome,
                profile: sup_report.profile,
            }),
        )
    } else {
        let report = sup_search()?;
        (
            format!("sup error on a {}-point grid", args.grid),
            report,
            None,
        )
    };

    let note = full_sup.as_ref().map(|s| match (found_n(&report.outcome), s.n_min) {
        (Some(point_n), Some(sup_n)) if point_n != sup_n => format!(
            "the point-restricted degree {point_n} and the full-sup degree {sup_n} \
             disagree: the sup error peaks away from the chosen point, so neither \
             result substitutes for the other"
        ),
        (Some(point_n), Some(_)) => format!(
            "the point-restricted and full-sup searches agree at degree {point_n}"
        ),
        _ => "at least one search exhausted its degree cap".to_string(),
    });

    let artifact = MinDegreeArtifact {
        operator: op.label().into(),
        target: target.name().into(),
        tol: args.tol,
        mode,
        n_min: found_n(&report.outcome),
        outcome: report.outcome,
        profile: report.profile,
        full_sup,
        note,
    };
    write_artifact(args.out.as_deref(), &to_json(&artifact))?;
    if artifact.n_min.is_none() {
        return Err(CliError::NotReached(format!(
            "no degree up to {} brings the error at or below {}",
            args.n_max, args.tol
        )));
    }
    Ok(())
}

fn cmd_figures(args: &FiguresArgs) -> Result<(), CliError> {
    fs::create_dir_all(&args.out_dir)
        .map_err(|e| CliError::input(format!("cannot create {}: {e}", args.out_dir.display())))?;
    let recipe = [("fig1", "sin9pi2"), ("fig2", "tent"), ("fig3", "jump")];
    let degrees = [10usize, 50];
    let ops = comparison_operators();
    let grid = uniform_grid(201)?;

    let mut plan: Vec<(String, &str, usize)> = Vec::new();
    for &(fig, label) in &recipe {
        for &n in &degrees {
            plan.push((format!("{fig}_n{n}.csv"), label, n));
        }
    }

    let files: Vec<(String, String)> = plan
        .par_iter()
        .map(|(name, label, n)| {
            let entry = fixtures::find(label).expect("figure fixtures are catalogued");
            let (csv, _) = comparison_table(&entry.function, &ops, *n, &grid)?;
            Ok((name.clone(), csv))
        })
        .collect::<Result<_, CliError>>()?;

    for (name, csv) in &files {
        write_file(&args.out_dir.join(name), csv)?;
    }
    Ok(())
}
