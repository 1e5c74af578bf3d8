mod commands;
mod render;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use univoque::solve::SolverConfig;
use univoque::Error;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(
    name = "univoque",
    version,
    about = "Validated numerics for univoque bases"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Greedy,
    QuasiGreedy,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(untagged)]
pub enum Command {
    /// Exact value of a sequence in a rational base.
    Eval(EvalArgs),
    /// Greedy or quasi-greedy digits of x in base q.
    Expand(ExpandArgs),
    /// Quasi-greedy dyadic expansion of x.
    Dyadic(XArgs),
    /// Lexicographic uniqueness test of a sequence in base q.
    Unique(UniqueArgs),
    /// Enclosure of the base q with value x.
    Solve(SolveArgs),
    /// Offset, run bounds and prefixes for a target x.
    Decompose(DecomposeArgs),
    /// Realized intervals and gaps of a level.
    Level(LevelArgs),
    /// Finite-depth thickness and per-gap bound checks.
    Thickness(LevelOptArgs),
    /// Connectivity of the cover of A + λA.
    Sumcover(SumcoverArgs),
    /// Smallest j meeting the threshold conditions.
    Thresholdj(ThresholdArgs),
    /// Matching verdict for one parameter.
    Match(MatchArgs),
    /// Matching verdicts on an evenly spaced parameter grid.
    MatchSweep(SweepArgs),
    /// The parameter-space Cantor level of non-matching parameters.
    Nm(NmArgs),
    /// Component endpoints for an admissible word.
    Component(WordArgs),
    /// Certified component gap comparisons.
    Prop51(WordArgs),
    /// Enclosure of the smallest univoque base of 1.
    Klconstant(TolArgs),
    /// Block-count entropy estimate.
    Entropy(EntropyArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct EvalArgs {
    #[arg(long)]
    pub seq: String,
    #[arg(long)]
    pub q: String,
    /// Fractional digits of the decimal rendering.
    #[arg(long, default_value_t = 20)]
    pub digits: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct ExpandArgs {
    #[arg(long)]
    pub x: String,
    #[arg(long)]
    pub q: String,
    #[arg(long, default_value_t = 32)]
    pub depth: usize,
    #[arg(long, value_enum, default_value_t = Mode::QuasiGreedy)]
    pub mode: Mode,
}

#[derive(Args, Debug, Serialize)]
pub struct XArgs {
    #[arg(long)]
    pub x: String,
}

#[derive(Args, Debug, Serialize)]
pub struct UniqueArgs {
    #[arg(long)]
    pub seq: String,
    #[arg(long)]
    pub q: String,
    #[arg(long, default_value_t = 64)]
    pub depth: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct SolveArgs {
    #[arg(long)]
    pub seq: String,
    #[arg(long, default_value = "1")]
    pub x: String,
    #[arg(long, default_value = "1e-10")]
    pub tol: String,
}

#[derive(Args, Debug, Serialize)]
pub struct DecomposeArgs {
    #[arg(long)]
    pub x: String,
    /// Largest j listed.
    #[arg(long, default_value_t = 3)]
    pub j: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct LevelArgs {
    #[arg(long)]
    pub x: String,
    #[arg(long)]
    pub j: usize,
    #[arg(long)]
    pub depth: usize,
    /// Endpoint tolerance; 2^-64 when omitted.
    #[arg(long)]
    pub tol: Option<String>,
}

#[derive(Args, Debug, Serialize)]
pub struct LevelOptArgs {
    #[arg(long)]
    pub x: String,
    /// Level index; the threshold j when omitted.
    #[arg(long)]
    pub j: Option<usize>,
    /// Maximum word length; M + N(j) + 8 when omitted.
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long)]
    pub tol: Option<String>,
}

#[derive(Args, Debug, Serialize)]
pub struct SumcoverArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub level: LevelOptArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: String,
}

#[derive(Args, Debug, Serialize)]
pub struct ThresholdArgs {
    #[arg(long)]
    pub x: String,
    /// Largest j tried.
    #[arg(long, default_value_t = 64)]
    pub j: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct MatchArgs {
    #[arg(long)]
    pub alpha: String,
    #[arg(long, default_value_t = 60)]
    pub budget: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct SweepArgs {
    #[arg(long)]
    pub from: String,
    #[arg(long)]
    pub to: String,
    #[arg(long)]
    pub count: usize,
    #[arg(long, default_value_t = 60)]
    pub budget: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct NmArgs {
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub depth: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct WordArgs {
    #[arg(long)]
    pub word: String,
    #[arg(long, default_value = "1e-6")]
    pub tol: String,
}

#[derive(Args, Debug, Serialize)]
pub struct TolArgs {
    #[arg(long, default_value = "1e-6")]
    pub tol: String,
}

#[derive(Args, Debug, Serialize)]
pub struct EntropyArgs {
    /// Block length.
    #[arg(long)]
    pub k: usize,
    /// Run bound of the tail shift; used when --x is absent.
    #[arg(long)]
    pub n: Option<usize>,
    /// Count blocks in the leaf tails of this level instead.
    #[arg(long)]
    pub x: Option<String>,
    #[arg(long)]
    pub j: Option<usize>,
    #[arg(long)]
    pub depth: Option<usize>,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Eval(_) => "eval",
            Command::Expand(_) => "expand",
            Command::Dyadic(_) => "dyadic",
            Command::Unique(_) => "unique",
            Command::Solve(_) => "solve",
            Command::Decompose(_) => "decompose",
            Command::Level(_) => "level",
            Command::Thickness(_) => "thickness",
            Command::Sumcover(_) => "sumcover",
            Command::Thresholdj(_) => "thresholdj",
            Command::Match(_) => "match",
            Command::MatchSweep(_) => "match-sweep",
            Command::Nm(_) => "nm",
            Command::Component(_) => "component",
            Command::Prop51(_) => "prop51",
            Command::Klconstant(_) => "klconstant",
            Command::Entropy(_) => "entropy",
        }
    }
}

/// A successful command result.
pub struct Outcome {
    pub result: Value,
    /// Tolerance and depth actually used.
    pub precision: Value,
    pub csv: Option<String>,
}

/// Failure of a command, already classified by exit status.
pub enum Failure {
    Usage(String),
    Inconclusive { reason: String, best: Option<Value> },
    Other(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Inconclusive { reason, best } => Failure::Inconclusive {
                reason,
                best: best.as_deref().map(render::interval),
            },
            Error::NoBracket { .. } | Error::NotFound(_) => Failure::Other(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;

fn envelope(
    cmd: &Command,
    precision: Value,
    result: Value,
    status: &str,
    started: Instant,
) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "command": cmd.name(),
        "params": serde_json::to_value(cmd).expect("arguments serialize"),
        "precision": precision,
        "result": result,
        "status": status,
        "timing_ms": started.elapsed().as_millis() as u64,
    })
}

fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    // a closed pipe is not worth a panic
    let _ = out.write_all(text.as_bytes());
    let _ = out.flush();
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let cfg = SolverConfig::process();
    let started = Instant::now();
    match commands::run(&cli.command, cli.format) {
        Ok(out) => {
            match (cli.format, out.csv) {
                (Format::Csv, Some(csv)) => emit(&csv),
                (Format::Csv, None) => {
                    eprintln!("error: {} has no CSV output", cli.command.name());
                    return ExitCode::from(EXIT_USAGE);
                }
                (Format::Json, _) => {
                    let mut precision = out.precision;
                    if let Value::Object(m) = &mut precision {
                        m.insert("max_iters".into(), json!(cfg.max_iters));
                    }
                    let env = envelope(&cli.command, precision, out.result, "ok", started);
                    emit(&format!("{env}\n"));
                }
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Other(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_FAILURE)
        }
        Err(Failure::Inconclusive { reason, best }) => {
            eprintln!("inconclusive: {reason}");
            let precision = json!({ "max_iters": cfg.max_iters });
            let result = json!({ "reason": reason, "best": best });
            let env = envelope(&cli.command, precision, result, "inconclusive", started);
            emit(&format!("{env}\n"));
            ExitCode::from(EXIT_INCONCLUSIVE)
        }
    }
}
