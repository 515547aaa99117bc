//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 hypothesis or
//! inconsistency, 3 internal error. Every failure writes exactly one JSON line
//! to stderr and nothing to stdout.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::bott::{bott_h, bott_table, BottQuery};
use crate::constructors::blow_up;
use crate::dsl::{eval, parse, print_diamond, DiamondFormat, EvalError, ParseError, VarietyExpr};
use crate::grid::{Characteristic, HodgeGrid};
use crate::spectral::{e1_defect, e2_defect, hh_from_grid, signed_key, DeRhamDims, HochschildDims};
use crate::toric::{verify_sweep, Fan};
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_HYPOTHESIS: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "hodgecalc",
    version,
    about = "Hodge, de Rham and Hochschild dimension calculator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

fn parse_char(s: &str) -> Result<Characteristic, String> {
    let c: u64 = s
        .parse()
        .map_err(|_| format!("invalid characteristic {s:?}"))?;
    Characteristic::new(c).map_err(|e| e.to_string())
}

fn parse_format(s: &str) -> Result<DiamondFormat, String> {
    s.parse()
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate an expression and print its Hodge grid.
    Eval {
        expr: String,
        #[arg(long, default_value = "text", value_parser = parse_format)]
        format: DiamondFormat,
        #[arg(long = "char", default_value = "0", value_parser = parse_char)]
        characteristic: Characteristic,
    },
    /// Validate the grid of an expression and the blow-up invariants along the way.
    Check {
        expr: String,
        #[arg(long = "char", default_value = "0", value_parser = parse_char)]
        characteristic: Characteristic,
    },
    /// Hochschild dimensions from the strong HKR decomposition.
    Hh {
        expr: String,
        #[arg(long = "char", default_value = "0", value_parser = parse_char)]
        characteristic: Characteristic,
        #[arg(long, value_enum, default_value_t = HhFormat::Text)]
        format: HhFormat,
    },
    /// Degeneracy defect of a grid against de Rham (e1) or Hochschild (e2) data.
    Defect {
        #[arg(value_enum)]
        kind: DefectChoice,
        #[arg(long)]
        grid: PathBuf,
        #[arg(long)]
        data: PathBuf,
    },
    /// h^q(P^n, Ω^p(m)): `bott n p m q`, or `bott --table n m`.
    Bott {
        #[arg(long)]
        table: bool,
        #[arg(allow_negative_numbers = true, required = true)]
        args: Vec<i64>,
    },
    /// Toric cross-checks.
    Oracle {
        #[command(subcommand)]
        action: OracleAction,
    },
    /// Evaluate one expression per line.
    Batch {
        file: PathBuf,
        #[arg(long, default_value = "json", value_parser = parse_format)]
        format: DiamondFormat,
        #[arg(long = "char", default_value = "0", value_parser = parse_char)]
        characteristic: Characteristic,
    },
}

#[derive(Subcommand, Debug)]
enum OracleAction {
    /// Compare stellar subdivisions with the blow-up formulas.
    Verify {
        #[arg(long, value_enum)]
        seed: Seed,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Seed {
    #[value(name = "P2")]
    P2,
    #[value(name = "P3")]
    P3,
    #[value(name = "P1xP1")]
    P1xP1,
}

impl Seed {
    fn name(self) -> &'static str {
        match self {
            Seed::P2 => "P2",
            Seed::P3 => "P3",
            Seed::P1xP1 => "P1xP1",
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum DefectChoice {
    E1,
    E2,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum HhFormat {
    Text,
    Json,
}

/// A failed command: exit code plus the one-line JSON diagnostic.
#[derive(Debug)]
struct Failure {
    code: i32,
    diagnostic: serde_json::Value,
}

impl Failure {
    fn new(code: i32, kind: &str, message: impl Into<String>) -> Self {
        Failure {
            code,
            diagnostic: json!({ "error": kind, "message": message.into() }),
        }
    }

    fn with(mut self, key: &str, value: serde_json::Value) -> Self {
        self.diagnostic[key] = value;
        self
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure {
            code: EXIT_USAGE,
            diagnostic: serde_json::to_value(&e).expect("parse errors serialize"),
        }
    }
}

impl From<EvalError> for Failure {
    fn from(e: EvalError) -> Self {
        Failure::new(EXIT_USAGE, "evaluation", e.message).with("expr", json!(e.expr))
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, kind) = match &e {
            Error::Hypothesis(_) => (EXIT_HYPOTHESIS, "hypothesis"),
            Error::Inconsistent(_) => (EXIT_HYPOTHESIS, "inconsistent"),
            Error::Format(_) => (EXIT_USAGE, "format"),
            Error::InvalidFan(_) => (EXIT_USAGE, "invalid-fan"),
            Error::Argument(_)
            | Error::Range(_)
            | Error::Codimension(_)
            | Error::Unsupported(_) => (EXIT_USAGE, "argument"),
        };
        Failure::new(code, kind, e.to_string())
    }
}

fn evaluate(text: &str, char: Characteristic) -> Result<(VarietyExpr, HodgeGrid), Failure> {
    let expr = parse(text)?;
    let grid = eval(&expr, char)?;
    Ok((expr, grid))
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_USAGE, "io", format!("{}: {e}", path.display())))
}

/// Invariant checks along every node of the expression. Returns the report
/// lines, or the list of failures.
fn check_expr(expr: &VarietyExpr, char: Characteristic) -> Result<Vec<String>, Vec<String>> {
    let mut passed = Vec::new();
    let mut failed = Vec::new();
    let mut record = |ok: bool, what: String| {
        if ok {
            passed.push(format!("ok {what}"));
        } else {
            failed.push(what);
        }
    };
    let grid = eval(expr, char).map_err(|e| vec![e.to_string()])?;
    match grid.validate() {
        Ok(()) => record(true, "validate".to_string()),
        Err(report) => {
            for v in report {
                record(false, format!("validate: {v}"));
            }
        }
    }
    let n = grid.dim() as i64;
    let total = grid.total_hodge_vector();
    record(
        (0..=2 * n).all(|l| total[l as usize] == total[(2 * n - l) as usize]),
        "total Hodge symmetry".to_string(),
    );
    let sum = grid.sum();
    record(
        total.iter().sum::<num_bigint::BigUint>() == sum
            && grid
                .anti_diagonal_vector()
                .iter()
                .sum::<num_bigint::BigUint>()
                == sum,
        "aggregation totals".to_string(),
    );
    let mut stack = vec![expr];
    while let Some(e) = stack.pop() {
        match e {
            VarietyExpr::Product(a, b) => {
                stack.push(a);
                stack.push(b);
            }
            VarietyExpr::ProjBundle { base, .. } => stack.push(base),
            VarietyExpr::BlowUp {
                ambient,
                center,
                codim,
            } => {
                stack.push(ambient);
                stack.push(center);
                let (Ok(x), Ok(z)) = (eval(ambient, char), eval(center, char)) else {
                    record(false, format!("evaluation of {e}"));
                    continue;
                };
                let Ok(b) = blow_up(&x, &z, *codim as usize) else {
                    record(false, format!("blow-up {e}"));
                    continue;
                };
                let n = x.dim() as i64;
                let edges = (0..=n).all(|i| {
                    [(0, i), (i, 0), (n, i), (i, n)]
                        .iter()
                        .all(|&(p, q)| b.get(p, q) == x.get(p, q))
                });
                record(edges, format!("rows/columns 0 and n unchanged in {e}"));
                let additive = (0..=2 * n).all(|l| {
                    let mut expect = x.total_hodge(l).expect("in range");
                    for i in 1..*codim as i64 {
                        if l - 2 * i >= 0 && l - 2 * i <= 2 * z.dim() as i64 {
                            expect += z.total_hodge(l - 2 * i).expect("in range");
                        }
                    }
                    b.total_hodge(l).expect("in range") == expect
                });
                record(additive, format!("total Hodge additivity in {e}"));
            }
            _ => {}
        }
    }
    if failed.is_empty() {
        Ok(passed)
    } else {
        Err(failed)
    }
}

fn run_command(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let io = |e: std::io::Error| Failure::new(EXIT_INTERNAL, "internal", e.to_string());
    match command {
        Command::Eval {
            expr,
            format,
            characteristic,
        } => {
            let (_, grid) = evaluate(&expr, characteristic)?;
            writeln!(out, "{}", print_diamond(&grid, format)).map_err(io)?;
        }
        Command::Check {
            expr,
            characteristic,
        } => {
            let expr = parse(&expr)?;
            eval(&expr, characteristic)?;
            match check_expr(&expr, characteristic) {
                Ok(lines) => {
                    for line in lines {
                        writeln!(out, "{line}").map_err(io)?;
                    }
                }
                Err(failures) => {
                    return Err(Failure::new(
                        EXIT_HYPOTHESIS,
                        "check",
                        format!("{} invariant(s) failed", failures.len()),
                    )
                    .with("failures", json!(failures)));
                }
            }
        }
        Command::Hh {
            expr,
            characteristic,
            format,
        } => {
            let (_, grid) = evaluate(&expr, characteristic)?;
            let hh = hh_from_grid(&grid)?;
            match format {
                HhFormat::Json => writeln!(out, "{}", hh.to_json()).map_err(io)?,
                HhFormat::Text => {
                    for l in hh.degrees() {
                        writeln!(out, "hh_{} = {}", signed_key(l), hh.get(l)).map_err(io)?;
                    }
                }
            }
        }
        Command::Defect { kind, grid, data } => {
            let grid = HodgeGrid::from_json(&read_file(&grid)?)?;
            let data = read_file(&data)?;
            let defect = match kind {
                DefectChoice::E1 => e1_defect(&grid, &DeRhamDims::from_json(&data)?)?,
                DefectChoice::E2 => e2_defect(&grid, &HochschildDims::from_json(&data)?)?,
            };
            writeln!(out, "{}", defect.to_json()).map_err(io)?;
        }
        Command::Bott { table, args } => {
            let small = |v: i64, what: &str| {
                u32::try_from(v).map_err(|_| {
                    Failure::new(
                        EXIT_USAGE,
                        "argument",
                        format!("{what} must be non-negative, got {v}"),
                    )
                })
            };
            if table {
                let [n, m] = args[..] else {
                    return Err(Failure::new(
                        EXIT_USAGE,
                        "usage",
                        "bott --table expects <n> <m>",
                    ));
                };
                let rows = bott_table(small(n, "n")?, m)?;
                for row in rows {
                    let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
                    writeln!(out, "{}", cells.join(" ")).map_err(io)?;
                }
            } else {
                let [n, p, m, q] = args[..] else {
                    return Err(Failure::new(
                        EXIT_USAGE,
                        "usage",
                        "bott expects <n> <p> <m> <q>",
                    ));
                };
                let query = BottQuery::new(small(n, "n")?, small(p, "p")?, m, small(q, "q")?)?;
                writeln!(out, "{}", bott_h(query)).map_err(io)?;
            }
        }
        Command::Oracle {
            action: OracleAction::Verify { seed, depth },
        } => {
            let fan = Fan::seed(seed.name())?;
            let report = verify_sweep(&fan, depth)
                .map_err(|e| Failure::new(EXIT_INTERNAL, "internal", e.to_string()))?;
            if let Some(first) = report.failures.first() {
                return Err(
                    Failure::new(EXIT_HYPOTHESIS, "oracle-mismatch", first.reason.clone())
                        .with(
                            "fan",
                            serde_json::to_value(&first.fan).expect("fan serializes"),
                        )
                        .with("cone", json!(first.cone))
                        .with("failures", json!(report.failures.len())),
                );
            }
            writeln!(
                out,
                "seed {} depth {depth}: {} fans, {} subdivisions checked, 0 mismatches",
                seed.name(),
                report.fans,
                report.checks
            )
            .map_err(io)?;
        }
        Command::Batch {
            file,
            format,
            characteristic,
        } => {
            let text = read_file(&file)?;
            let mut code = EXIT_OK;
            for (i, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                match evaluate(line, characteristic) {
                    Ok((_, grid)) => {
                        writeln!(out, "{}", print_diamond(&grid, format)).map_err(io)?
                    }
                    Err(f) => {
                        code = code.max(f.code);
                        let f = f.with("line", json!(i + 1));
                        writeln!(err, "{}", f.diagnostic).map_err(io)?;
                    }
                }
            }
            return Ok(code);
        }
    }
    Ok(EXIT_OK)
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return EXIT_OK;
            }
            let rendered = e.to_string();
            let message = rendered
                .lines()
                .next()
                .unwrap_or("invalid usage")
                .trim_start_matches("error: ")
                .to_string();
            let _ = writeln!(err, "{}", json!({ "error": "usage", "message": message }));
            return EXIT_USAGE;
        }
    };
    // buffer stdout so a late failure leaves it empty
    let mut buffered = Vec::new();
    match run_command(cli.command, &mut buffered, err) {
        Ok(code) => {
            if out.write_all(&buffered).is_err() {
                return EXIT_INTERNAL;
            }
            code
        }
        Err(f) => {
            let _ = writeln!(err, "{}", f.diagnostic);
            f.code
        }
    }
}
