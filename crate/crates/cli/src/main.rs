mod pretty;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fairmatch::mechanism::Model;
use fairmatch::oracle::{self, Deviation};
use fairmatch::{report, verify, Error, Instance};
use serde_json::Value;

/// Egalitarian exchange of a homogeneous good on general networks.
#[derive(Parser)]
#[command(name = "fairmatch", version)]
struct Cli {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Human-readable tables instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Divisible,
    Indivisible,
}

#[derive(Subcommand)]
enum Command {
    /// Gallai-Edmonds classes and odd components.
    Ged { instance: PathBuf },
    /// Egalitarian profile for the divisible or indivisible model.
    Solve {
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "indivisible")]
        model: ModelArg,
        /// Include the underlying network flow.
        #[arg(long)]
        dump_flow: bool,
    },
    /// Lottery over maximum b-matchings realizing the indivisible profile.
    Lottery { instance: PathBuf },
    /// Draw matchings from the lottery.
    Sample {
        instance: PathBuf,
        #[arg(long, default_value_t = 1)]
        samples: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Run the invariant suite.
    Verify {
        instance: PathBuf,
        /// Also compare against exhaustive search.
        #[arg(long)]
        oracle: bool,
    },
    /// Compare truthful and misreported outcomes for a coalition.
    Manipulate {
        instance: PathBuf,
        /// Comma-separated node ids.
        #[arg(long, value_delimiter = ',', required = true)]
        coalition: Vec<String>,
        /// Link to hide, written `u-v`. Repeatable.
        #[arg(long = "hide")]
        hide: Vec<String>,
        /// Misreported peak, written `id=value`. Repeatable.
        #[arg(long = "peak")]
        peak: Vec<String>,
    },
}

enum Failure {
    Invalid(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Inconsistency(_) | Error::NotMaximum(_) => Failure::Verification(e.to_string()),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

fn load(path: &Path) -> Result<Instance, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Invalid(format!("cannot read {}: {e}", path.display())))?;
    fairmatch::parse_instance(&text).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn parse_link(s: &str) -> Result<(String, String), Failure> {
    s.split_once('-')
        .filter(|(u, v)| !u.is_empty() && !v.is_empty())
        .map(|(u, v)| (u.to_string(), v.to_string()))
        .ok_or_else(|| Failure::Invalid(format!("link `{s}` must be written u-v")))
}

fn parse_peak(s: &str) -> Result<(String, u32), Failure> {
    let bad = || Failure::Invalid(format!("peak `{s}` must be written id=value with value >= 1"));
    let (id, v) = s.split_once('=').ok_or_else(bad)?;
    let v: u32 = v.trim().parse().map_err(|_| bad())?;
    if v == 0 || id.is_empty() {
        return Err(bad());
    }
    Ok((id.to_string(), v))
}

/// Produces the JSON report and whether verification passed.
fn run(command: &Command) -> Result<(Value, bool), Failure> {
    match command {
        Command::Ged { instance } => Ok((report::ged_report(&load(instance)?)?, true)),
        Command::Solve { instance, model, dump_flow } => {
            let inst = load(instance)?;
            let model = match model {
                ModelArg::Divisible => Model::Divisible,
                ModelArg::Indivisible => Model::Indivisible,
            };
            let mut out = report::solve_report(&inst, model)?;
            if *dump_flow {
                out["flow"] = report::flow_report(&inst, model)?;
            }
            Ok((out, true))
        }
        Command::Lottery { instance } => Ok((report::lottery_report(&load(instance)?)?, true)),
        Command::Sample { instance, samples, seed } => {
            Ok((report::sample_report(&load(instance)?, *samples, *seed)?, true))
        }
        Command::Verify { instance, oracle } => {
            let inst = load(instance)?;
            let r = if *oracle {
                let limit = oracle::limit_from_env();
                if inst.total_peak() > limit {
                    return Err(Error::TooLarge { expanded: inst.total_peak(), limit }.into());
                }
                verify::verify_with_oracle(&inst)?
            } else {
                verify::verify_instance(&inst)?
            };
            Ok((r.to_json(), r.passed()))
        }
        Command::Manipulate { instance, coalition, hide, peak } => {
            let inst = load(instance)?;
            let mut deviations = Vec::new();
            if !peak.is_empty() {
                let peaks = peak.iter().map(|s| parse_peak(s)).collect::<Result<_, _>>()?;
                deviations.push(Deviation::ReportPeaks { peaks });
            }
            if !hide.is_empty() {
                let links = hide.iter().map(|s| parse_link(s)).collect::<Result<_, _>>()?;
                deviations.push(Deviation::HideLinks { links });
            }
            let r = oracle::manipulation_experiment(&inst, coalition, &deviations)?;
            Ok((r.to_json(), true))
        }
    }
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), Failure> {
    match output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Invalid(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = run(&cli.command).and_then(|(value, passed)| {
        let text = if cli.pretty {
            pretty::render(&cli.command_name(), &value)
        } else {
            let mut s = serde_json::to_string_pretty(&value).expect("report serializes");
            s.push('\n');
            s
        };
        emit(&text, cli.output.as_deref())?;
        Ok(passed)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(2)
        }
    }
}

impl Cli {
    fn command_name(&self) -> String {
        match self.command {
            Command::Ged { .. } => "ged",
            Command::Solve { .. } => "solve",
            Command::Lottery { .. } => "lottery",
            Command::Sample { .. } => "sample",
            Command::Verify { .. } => "verify",
            Command::Manipulate { .. } => "manipulate",
        }
        .to_string()
    }
}
