//! Command-line front end. Exit codes: 0 success, 1 a verification counterexample,
//! 2 a usage, parse, shape or other input error.

use std::ffi::OsString;
use std::fmt;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bench::{self, BenchConfig};
use crate::cullis::{det, det_laplace, Algorithm};
use crate::error::Error;
use crate::field::{FieldSpec, Scalar};
use crate::linvar::{strike_out_lift, ConstraintSystem, IndexInjection, LinearVariety, Slice, DEFAULT_POINT_CAP};
use crate::mat::{format_vector, Mat};
use crate::matroid::{column_matroid, parse_labels, Label, Matroid, DEFAULT_ENUMERATION_CAP};
use crate::verify::{
    self, enumerate_subspace_constraints, gaussian_binomial, lemma_names, parse_counterexamples, LemmaSuiteConfig,
    Mode, SweepConfig, VerificationReport, DEFAULT_BUDGET, DEFAULT_SAMPLES,
};

#[derive(Parser, Debug)]
#[command(
    name = "cullis",
    version,
    about = "Cullis determinants, matroids of linear varieties, and verification sweeps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate det_{n,k} of a matrix file.
    Det(DetArgs),
    /// Rank, basis and minor queries on the column matroid of a matrix file.
    Matroid(MatroidArgs),
    /// Queries and constructions on a variety file.
    Variety(VarietyArgs),
    /// List the canonical constraint matrices of all codimension-c subspaces of F_q^N.
    Enum(EnumArgs),
    /// Run a verification sweep.
    Verify {
        #[command(subcommand)]
        check: VerifyCheck,
    },
    /// Time the three determinant algorithms and print CSV.
    Bench(BenchArgs),
}

#[derive(Args, Debug)]
struct DetArgs {
    #[arg(long)]
    file: PathBuf,
    /// injection, minor, laplace or all.
    #[arg(long, default_value = "all")]
    algo: String,
    /// Expansion column for the Laplace algorithm.
    #[arg(long, default_value_t = 1)]
    col: usize,
    /// Expected field of the file.
    #[arg(long)]
    field: Option<FieldSpec>,
}

#[derive(Args, Debug)]
struct MatroidArgs {
    #[arg(long)]
    file: PathBuf,
    #[arg(long)]
    field: Option<FieldSpec>,
    /// Restrict to this set first, e.g. "{1,3,4}".
    #[arg(long)]
    restrict: Option<String>,
    /// Then delete this set.
    #[arg(long)]
    delete: Option<String>,
    /// Then contract this set.
    #[arg(long)]
    contract: Option<String>,
    /// Finally take the dual.
    #[arg(long)]
    dual: bool,
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
    cap: usize,
    #[command(subcommand)]
    query: MatroidQuery,
}

#[derive(Subcommand, Debug)]
enum MatroidQuery {
    /// Ground set, rank and corank.
    Info,
    /// Rank of a set such as "1,3,4".
    Rank { set: String },
    /// Whether a set is independent.
    Independent { set: String },
    /// Every basis, up to --cap of them.
    Bases,
    /// Every cobasis, up to --cap of them.
    Cobases,
}

#[derive(Args, Debug)]
struct VarietyArgs {
    #[arg(long)]
    file: PathBuf,
    #[arg(long)]
    field: Option<FieldSpec>,
    #[command(subcommand)]
    op: VarietyOp,
}

#[derive(Subcommand, Debug)]
enum VarietyOp {
    /// Codimension and dimension.
    Codim,
    /// Rank, corank and cobases of the variety's matroid.
    Matroid {
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        cap: usize,
    },
    /// Every point (prime fields only).
    Points {
        #[arg(long, default_value_t = DEFAULT_POINT_CAP)]
        cap: u128,
    },
    /// Intersect with coordinate pins such as `--pin "(1,2)=1"`.
    Slice {
        #[arg(long = "pin")]
        pins: Vec<String>,
    },
    /// Project onto the listed coordinates, in order, e.g. `--select "1,3"`.
    Project {
        #[arg(long)]
        select: String,
    },
    /// Pin column `col` to `pins`, then strike out row `row` and column `col`.
    StrikeOut {
        #[arg(long)]
        row: usize,
        #[arg(long)]
        col: usize,
        /// One value per row, comma or space separated.
        #[arg(long)]
        pins: String,
    },
    /// Whether det_{n,k} vanishes on every point.
    Annihilates {
        #[arg(long, default_value_t = DEFAULT_POINT_CAP)]
        cap: u128,
    },
}

#[derive(Args, Debug)]
struct EnumArgs {
    /// Ambient dimension.
    #[arg(long = "n")]
    n: usize,
    /// Codimension.
    #[arg(long = "c")]
    c: usize,
    #[arg(long)]
    q: u32,
    /// Print only the count.
    #[arg(long)]
    count: bool,
    #[arg(long, default_value_t = 1 << 20)]
    cap: u128,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Records,
}

#[derive(Args, Debug)]
struct ReportArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Include wall time (makes output run-dependent).
    #[arg(long)]
    timing: bool,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    q: u32,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u128,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[command(flatten)]
    report: ReportArgs,
}

#[derive(Subcommand, Debug)]
enum VerifyCheck {
    /// No variety of codimension below k annihilates det_{n,k}.
    CodimBound {
        #[command(flatten)]
        sweep: SweepArgs,
        #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
        mode: ModeArg,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// The alternating row sum space is the maximal annihilator exactly for odd k.
    Characterization {
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Enumeration against the closed-form condition for row relations.
    ZCondition {
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// The registered lemma checks.
    Lemmas {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Comma-separated lemma names.
        #[arg(long)]
        only: Option<String>,
        /// List lemma names and exit.
        #[arg(long)]
        list: bool,
        #[command(flatten)]
        report: ReportArgs,
    },
    /// Re-run the counterexamples of a records file.
    Replay {
        #[arg(long)]
        file: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Sampled,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[arg(long, default_value = "F5")]
    field: FieldSpec,
    /// Shapes such as "10x4,6x3"; defaults to n <= 10, k <= 4.
    #[arg(long)]
    grid: Option<String>,
    #[arg(long, default_value_t = 10)]
    reps: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

enum CliError {
    Input(Error),
    Io(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Input(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                2
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn check_field(expected: Option<FieldSpec>, found: FieldSpec) -> CliResult<()> {
    match expected {
        Some(f) if f != found => Err(Error::FieldMismatch(format!("--field {f} but the file is over {found}")).into()),
        _ => Ok(()),
    }
}

fn read_matrix(path: &Path, field: Option<FieldSpec>) -> CliResult<Mat> {
    let m = Mat::parse(&read(path)?)?;
    check_field(field, m.field())?;
    Ok(m)
}

fn read_variety(path: &Path, field: Option<FieldSpec>) -> CliResult<Option<LinearVariety>> {
    let cs = ConstraintSystem::parse(&read(path)?)?;
    check_field(field, cs.space().field())?;
    Ok(LinearVariety::from_constraints(cs))
}

fn dispatch(command: Command, out: &mut dyn Write) -> CliResult<i32> {
    match command {
        Command::Det(a) => run_det(a, out),
        Command::Matroid(a) => run_matroid(a, out),
        Command::Variety(a) => run_variety(a, out),
        Command::Enum(a) => run_enum(a, out),
        Command::Verify { check } => run_verify(check, out),
        Command::Bench(a) => run_bench(a, out),
    }
}

fn run_det(a: DetArgs, out: &mut dyn Write) -> CliResult<i32> {
    let x = read_matrix(&a.file, a.field)?;
    let algos: Vec<Algorithm> = if a.algo == "all" { Algorithm::ALL.to_vec() } else { vec![a.algo.parse()?] };
    for algo in algos {
        let value = match algo {
            Algorithm::Laplace => det_laplace(&x, a.col)?,
            other => det(&x, other)?,
        };
        writeln!(out, "{algo}: {value}")?;
    }
    Ok(0)
}

fn run_matroid(a: MatroidArgs, out: &mut dyn Write) -> CliResult<i32> {
    let x = read_matrix(&a.file, a.field)?;
    let mut m: Matroid = column_matroid(&x)?;
    if let Some(s) = &a.restrict {
        m = m.restrict(m.ground().parse_subset(s)?)?;
    }
    if let Some(s) = &a.delete {
        m = m.delete(m.ground().parse_subset(s)?)?;
    }
    if let Some(s) = &a.contract {
        m = m.contract(m.ground().parse_subset(s)?)?;
    }
    if a.dual {
        m = m.dual();
    }
    let g = m.ground().clone();
    match a.query {
        MatroidQuery::Info => {
            writeln!(out, "ground: {}", g.format(g.full()))?;
            writeln!(out, "rank: {}", m.full_rank())?;
            writeln!(out, "corank: {}", m.corank())?;
        }
        MatroidQuery::Rank { set } => writeln!(out, "rank: {}", m.rank(g.parse_subset(&set)?)?)?,
        MatroidQuery::Independent { set } => {
            writeln!(out, "independent: {}", m.is_independent(g.parse_subset(&set)?)?)?
        }
        MatroidQuery::Bases => {
            for b in m.bases(a.cap)? {
                writeln!(out, "{}", g.format(b))?;
            }
        }
        MatroidQuery::Cobases => {
            for b in m.cobases(a.cap)? {
                writeln!(out, "{}", g.format(b))?;
            }
        }
    }
    Ok(0)
}

fn parse_values(field: FieldSpec, text: &str) -> CliResult<Vec<Scalar>> {
    Ok(text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| Scalar::parse(field, t))
        .collect::<crate::Result<Vec<_>>>()?)
}

fn write_variety(out: &mut dyn Write, k: Option<&LinearVariety>) -> CliResult<()> {
    match k {
        Some(k) => write!(out, "{}", k.constraints())?,
        None => writeln!(out, "empty")?,
    }
    Ok(())
}

fn run_variety(a: VarietyArgs, out: &mut dyn Write) -> CliResult<i32> {
    let Some(k) = read_variety(&a.file, a.field)? else {
        writeln!(out, "empty")?;
        return Ok(0);
    };
    let g = k.space().ground().clone();
    match a.op {
        VarietyOp::Codim => {
            writeln!(out, "codim: {}", k.codim())?;
            writeln!(out, "dim: {}", k.dim())?;
        }
        VarietyOp::Matroid { cap } => {
            let m = k.matroid();
            writeln!(out, "rank: {}", m.full_rank())?;
            writeln!(out, "corank: {}", m.corank())?;
            for b in m.cobases(cap)? {
                writeln!(out, "cobasis: {}", g.format(b))?;
            }
        }
        VarietyOp::Points { cap } => {
            for p in k.enumerate_points(cap)? {
                writeln!(out, "{}", format_vector(&p))?;
            }
        }
        VarietyOp::Slice { pins } => {
            let field = k.space().field();
            let parsed = pins
                .iter()
                .map(|p| {
                    let (label, value) = p
                        .rsplit_once('=')
                        .ok_or_else(|| Error::Parse { line: 1, message: format!("pin {p:?} is not label=value") })?;
                    Ok((label.trim().parse::<Label>()?, Scalar::parse(field, value.trim())?))
                })
                .collect::<crate::Result<Vec<_>>>()?;
            write_variety(out, k.intersect_slice(&Slice::new(k.space(), &parsed)?).as_ref())?;
        }
        VarietyOp::Project { select } => {
            let f = IndexInjection::selecting(g, &parse_labels(&select)?)?;
            write_variety(out, Some(&k.project(&f)?))?;
        }
        VarietyOp::StrikeOut { row, col, pins } => {
            let values = parse_values(k.space().field(), &pins)?;
            write_variety(out, strike_out_lift(&k, row, col, &values)?.as_ref())?;
        }
        VarietyOp::Annihilates { cap } => {
            writeln!(out, "annihilates: {}", verify::annihilates_det(&k, cap)?)?;
        }
    }
    Ok(0)
}

fn run_enum(a: EnumArgs, out: &mut dyn Write) -> CliResult<i32> {
    let stream = enumerate_subspace_constraints(a.n, a.c, a.q, a.cap)?;
    if a.count {
        writeln!(out, "count: {}", stream.count())?;
        let expected = gaussian_binomial(a.n, a.c, a.q as u64).map_or("overflow".into(), |g| g.to_string());
        writeln!(out, "gaussian_binomial: {expected}")?;
        return Ok(0);
    }
    for (i, m) in stream.enumerate() {
        if i > 0 {
            writeln!(out)?;
        }
        write!(out, "{}", m.to_mat())?;
    }
    Ok(0)
}

fn emit(out: &mut dyn Write, report: &VerificationReport, args: &ReportArgs) -> CliResult<i32> {
    match args.format {
        Format::Text => write!(out, "{}", report.to_text(args.timing))?,
        Format::Records => write!(out, "{}", report.to_records(args.timing))?,
    }
    Ok(if report.passed() { 0 } else { 1 })
}

fn sweep_config(s: &SweepArgs) -> SweepConfig {
    SweepConfig { budget: s.budget, jobs: s.jobs, ..SweepConfig::default() }
}

fn run_verify(check: VerifyCheck, out: &mut dyn Write) -> CliResult<i32> {
    match check {
        VerifyCheck::CodimBound { sweep, mode, samples, seed } => {
            let mode = match mode {
                ModeArg::Exhaustive => Mode::Exhaustive,
                ModeArg::Sampled => Mode::Sampled,
            };
            let cfg = SweepConfig { mode, samples, seed, ..sweep_config(&sweep) };
            let report = verify::verify_codim_bound(sweep.n, sweep.k, sweep.q, &cfg)?;
            emit(out, &report, &sweep.report)
        }
        VerifyCheck::Characterization { sweep } => {
            let report = verify::verify_characterization(sweep.n, sweep.k, sweep.q, &sweep_config(&sweep))?;
            emit(out, &report, &sweep.report)
        }
        VerifyCheck::ZCondition { sweep } => {
            let report = verify::verify_z_condition(sweep.n, sweep.k, sweep.q, &sweep_config(&sweep))?;
            emit(out, &report, &sweep.report)
        }
        VerifyCheck::Lemmas { seed, jobs, only, list, report } => {
            if list {
                for name in lemma_names() {
                    writeln!(out, "{name}")?;
                }
                return Ok(0);
            }
            let only = only
                .map(|s| s.split(',').map(|t| t.trim().to_string()).filter(|t| !t.is_empty()).collect())
                .unwrap_or_default();
            let cfg = LemmaSuiteConfig { seed, jobs, only, ..Default::default() };
            emit(out, &verify::verify_lemma_suite(&cfg)?, &report)
        }
        VerifyCheck::Replay { file } => {
            let records = read(&file)?;
            let cases =
                parse_counterexamples(&records).map_err(|e| Error::Parse { line: e.line(), message: e.to_string() })?;
            let mut reproduced = 0;
            for c in &cases {
                let again = verify::replay(c)?;
                reproduced += usize::from(again);
                writeln!(out, "{}: {}", if again { "reproduced" } else { "not reproduced" }, c.key)?;
            }
            writeln!(out, "replayed: {} reproduced: {reproduced}", cases.len())?;
            Ok(if reproduced > 0 { 1 } else { 0 })
        }
    }
}

fn run_bench(a: BenchArgs, out: &mut dyn Write) -> CliResult<i32> {
    let grid = match &a.grid {
        Some(g) => bench::parse_grid(g)?,
        None => bench::default_grid(),
    };
    let cfg = BenchConfig { grid, field: a.field, reps: a.reps, seed: a.seed, jobs: a.jobs };
    write!(out, "{}", bench::to_csv(&bench::run(&cfg)?))?;
    Ok(0)
}
