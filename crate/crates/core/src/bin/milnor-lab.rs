use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use milnor_lab::datum::{self, enumerate_corpus, CorpusBounds, EquisingularDatum, QuasiHomBranchSpec};
use milnor_lab::report::{analyze, AnalyzeOptions};
use milnor_lab::sweep::{parse_properties, run_sweep, Property};
use milnor_lab::Error;

const EXIT_INPUT: u8 = 1;
const EXIT_VIOLATION: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

#[derive(Parser)]
#[command(name = "milnor-lab", version, about = "Milnor fibres of non-reduced plane curve singularities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze one or more curve specs.
    Analyze(AnalyzeArgs),
    /// Check every corpus property over an exhaustive corpus.
    Verify(VerifyArgs),
    /// Print the corpus as curve-spec documents, one per line.
    Enumerate(BoundsArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Monomial,
    Power,
    Quasihomogeneous,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Curve-spec file, inline JSON, or `-` for stdin (the default). Several
    /// concatenated documents produce one report per line.
    spec: Option<String>,
    #[arg(long, value_enum)]
    family: Option<Family>,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    q: Option<u64>,
    /// Base spec of the power family (file or inline JSON).
    #[arg(long)]
    base: Option<String>,
    #[arg(long)]
    exponent: Option<u64>,
    /// Quasi-homogeneous branch `a,b,m`; repeatable.
    #[arg(long = "branch", value_name = "A,B,M")]
    branches: Vec<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Include Smith form diagonals of `A_i - I` in the report.
    #[arg(long)]
    dump_snf: bool,
    /// Single-line JSON.
    #[arg(long)]
    compact: bool,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long)]
    max_branches: usize,
    #[arg(long)]
    max_mult: u64,
    #[arg(long)]
    max_delta: u64,
    #[arg(long)]
    max_int: u64,
}

impl BoundsArgs {
    fn bounds(&self) -> Result<CorpusBounds, Error> {
        CorpusBounds::new(self.max_branches, self.max_mult, self.max_delta, self.max_int)
    }
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    bounds: BoundsArgs,
    /// Comma-separated property names; defaults to every non-optional property.
    #[arg(long)]
    properties: Option<String>,
    #[arg(long, env = "MILNOR_LAB_JOBS", default_value_t = 1)]
    jobs: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_INPUT)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Analyze(args) => cmd_analyze(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Enumerate(args) => cmd_enumerate(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("milnor-lab: {e}");
            ExitCode::from(if e.is_internal() { EXIT_INTERNAL } else { EXIT_INPUT })
        }
    }
}

/// Reads a spec argument: inline JSON, `-` for stdin, or a file path.
fn read_source(arg: Option<&str>) -> Result<String, Error> {
    match arg {
        None | Some("-") => {
            let mut text = String::new();
            io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| Error::Spec(format!("stdin: {e}")))?;
            Ok(text)
        }
        Some(s) if s.trim_start().starts_with('{') => Ok(s.to_string()),
        Some(path) => fs::read_to_string(path).map_err(|e| Error::Spec(format!("{path}: {e}"))),
    }
}

fn parse_documents(text: &str) -> Result<Vec<EquisingularDatum>, Error> {
    let mut out = Vec::new();
    for value in serde_json::Deserializer::from_str(text).into_iter::<Value>() {
        let value = value.map_err(|e| Error::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        out.push(datum::from_value(value)?);
    }
    if out.is_empty() {
        return Err(Error::Spec("no curve spec given".into()));
    }
    Ok(out)
}

fn missing(flag: &str, family: &str) -> Error {
    Error::Spec(format!("--family {family} requires --{flag}"))
}

fn family_datum(family: Family, args: &AnalyzeArgs) -> Result<EquisingularDatum, Error> {
    match family {
        Family::Monomial => {
            let p = args.p.ok_or_else(|| missing("p", "monomial"))?;
            let q = args.q.ok_or_else(|| missing("q", "monomial"))?;
            if p == 0 || q == 0 {
                return Err(Error::Spec("monomial exponents must be >= 1".into()));
            }
            Ok(datum::from_monomial(p, q))
        }
        Family::Power => {
            let base = read_source(Some(args.base.as_deref().ok_or_else(|| missing("base", "power"))?))?;
            let e = args.exponent.ok_or_else(|| missing("exponent", "power"))?;
            if e == 0 {
                return Err(Error::Spec("power exponent must be >= 1".into()));
            }
            Ok(datum::from_power(&datum::parse_datum(&base)?, e))
        }
        Family::Quasihomogeneous => {
            let specs = args
                .branches
                .iter()
                .map(|s| parse_qh(s))
                .collect::<Result<Vec<_>, _>>()?;
            datum::from_quasihomogeneous(&specs)
        }
    }
}

fn parse_qh(s: &str) -> Result<QuasiHomBranchSpec, Error> {
    let parts: Vec<u64> = s
        .split(',')
        .map(|x| x.trim().parse::<u64>())
        .collect::<Result<_, _>>()
        .map_err(|e| Error::Spec(format!("--branch {s}: {e}")))?;
    match parts[..] {
        [a, b, m] => QuasiHomBranchSpec::new(a, b, m),
        _ => Err(Error::Spec(format!("--branch {s}: expected A,B,M"))),
    }
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Error::Spec(format!("{}: {e}", path.display()))),
        None => io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| Error::Spec(format!("stdout: {e}"))),
    }
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<ExitCode, Error> {
    let datums = match args.family {
        Some(family) => vec![family_datum(family, &args)?],
        None => parse_documents(&read_source(args.spec.as_deref())?)?,
    };
    let options = AnalyzeOptions {
        dump_snf: args.dump_snf,
    };
    let lines = args.compact || datums.len() > 1;
    let mut text = String::new();
    for d in &datums {
        let report = analyze(d, options)?;
        let rendered = if lines {
            serde_json::to_string(&report)
        } else {
            serde_json::to_string_pretty(&report)
        };
        text.push_str(&rendered.expect("report serialization is infallible"));
        text.push('\n');
    }
    emit(args.out.as_ref(), &text)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, Error> {
    let bounds = args.bounds.bounds()?;
    let properties = match &args.properties {
        Some(list) => parse_properties(list)?,
        None => Property::defaults(),
    };
    let result = run_sweep(&bounds, &properties, args.jobs)?;
    let mut text = serde_json::to_string_pretty(&result).expect("sweep serialization is infallible");
    text.push('\n');
    emit(args.out.as_ref(), &text)?;
    eprintln!(
        "checked {} datums, {} violations, {:.2?}",
        result.checked,
        result.violations.len(),
        result.elapsed
    );
    Ok(if result.is_clean() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VIOLATION)
    })
}

fn cmd_enumerate(args: BoundsArgs) -> Result<ExitCode, Error> {
    let bounds = args.bounds()?;
    let mut text = String::new();
    for d in enumerate_corpus(&bounds) {
        text.push_str(&d.to_json());
        text.push('\n');
    }
    emit(None, &text)?;
    Ok(ExitCode::SUCCESS)
}
