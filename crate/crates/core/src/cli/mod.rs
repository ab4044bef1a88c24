//! The `bisim` command line.
//!
//! Exit status is 0 when every requested verdict passes, 1 when a verdict
//! fails and 2 for usage, input or numerical errors.

mod commands;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::algebra::DEFAULT_ATOL;
use crate::error::Error;
use crate::report::BisimKind;

/// Version of the JSON report layout.
pub const JSON_SCHEMA: u32 = 1;

#[derive(Debug, Parser)]
#[command(name = "bisim", version, about = "Matrix bisimulation checks for transition systems and Markov reward chains")]
pub struct Cli {
    /// Absolute tolerance for real-valued equalities.
    #[arg(long, global = true, default_value_t = DEFAULT_ATOL)]
    pub tol: f64,

    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Seed for randomised commands.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Use the literal weak condition `VUΠAΠV = ΠV` for transition systems.
    #[arg(long = "strict-weak", alias = "strict-def3", global = true)]
    pub strict_weak: bool,

    /// Report wall-clock time.
    #[arg(long, global = true)]
    pub timing: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check whether a partition is a bisimulation.
    Check {
        model: PathBuf,
        #[arg(short, long)]
        partition: PathBuf,
        #[arg(short, long, value_enum, default_value_t = BisimKind::Strong)]
        kind: BisimKind,
    },
    /// Print the coarsest bisimulation partition.
    Refine {
        model: PathBuf,
        #[arg(short, long, value_enum, default_value_t = BisimKind::Strong)]
        kind: BisimKind,
        /// Cross-check against exhaustive enumeration; exit 1 on disagreement.
        #[arg(long)]
        oracle: bool,
    },
    /// Write the lumped model.
    Lump {
        model: PathBuf,
        #[arg(short, long)]
        partition: PathBuf,
        #[arg(short, long, value_enum, default_value_t = BisimKind::Strong)]
        kind: BisimKind,
        /// τ-distributor for weak lumping of chains with fast transitions.
        #[arg(long)]
        dist: Option<PathBuf>,
        /// Output file; standard output by default.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Close a transition system under internal steps.
    Closure { model: PathBuf },
    /// Ergodic projection of a chain's fast (or slow) generator.
    Project {
        model: PathBuf,
        /// Project the slow generator instead.
        #[arg(long)]
        slow: bool,
    },
    /// Total reward rate `σP(t)ρ`.
    Reward {
        model: PathBuf,
        #[arg(short = 't', long = "time", required = true, num_args = 1..)]
        times: Vec<f64>,
        /// Instantiate fast transitions at this speed.
        #[arg(long, conflicts_with = "limit")]
        tau: Option<f64>,
        /// Use the limit chain of a chain with fast transitions.
        #[arg(long)]
        limit: bool,
    },
    /// Verify that closure (or the fast limit) commutes with lumping.
    Diagram {
        model: PathBuf,
        #[arg(short, long)]
        partition: PathBuf,
        #[arg(short, long, value_enum, default_value_t = BisimKind::Weak)]
        kind: BisimKind,
        #[arg(long)]
        dist: Option<PathBuf>,
        #[arg(short = 't', long = "time", num_args = 1.., default_values_t = [0.0, 0.5, 1.0, 2.0])]
        times: Vec<f64>,
    },
    /// Search random chains for a branching bisimulation that is not weak.
    Probe {
        #[arg(long, default_value_t = 1000)]
        instances: usize,
        #[arg(long, default_value_t = 4)]
        max_states: usize,
        /// Directory receiving one file per counterexample.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Check { .. } => "check",
            Command::Refine { .. } => "refine",
            Command::Lump { .. } => "lump",
            Command::Closure { .. } => "closure",
            Command::Project { .. } => "project",
            Command::Reward { .. } => "reward",
            Command::Diagram { .. } => "diagram",
            Command::Probe { .. } => "probe",
        }
    }
}

/// Result of one command before rendering.
pub(crate) struct Outcome {
    pub text: String,
    pub json: Value,
    pub pass: bool,
}

/// Runs the command line against the given writers and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    execute(&cli, out, err)
}

pub fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let start = Instant::now();
    let result = if cli.tol.is_finite() && cli.tol > 0.0 {
        commands::dispatch(cli)
    } else {
        Err(Error::InvalidModel(format!("tolerance must be positive, got {}", cli.tol)))
    };
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;

    let (code, outcome) = match result {
        Ok(o) => (if o.pass { 0 } else { 1 }, o),
        Err(Error::CheckFailed(report)) => (
            1,
            Outcome {
                text: format!("{}\n", report.summary()),
                json: json!({ "verdict": "fail", "check": *report }),
                pass: false,
            },
        ),
        Err(e) => {
            if cli.json {
                let body = json!({
                    "schema": JSON_SCHEMA,
                    "command": cli.command.name(),
                    "error": e.to_string(),
                });
                let _ = writeln!(out, "{body}");
            }
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };

    if cli.json {
        let mut body = json!({ "schema": JSON_SCHEMA, "command": cli.command.name() });
        if let (Value::Object(map), Value::Object(extra)) = (&mut body, outcome.json) {
            map.extend(extra);
            if cli.timing {
                map.insert("elapsed_ms".into(), json!(elapsed_ms));
            }
        }
        let _ = writeln!(out, "{body}");
    } else {
        let _ = write!(out, "{}", outcome.text);
        if cli.timing {
            let _ = writeln!(err, "elapsed: {elapsed_ms:.3} ms");
        }
    }
    code
}

/// Entry point used by the binary.
pub fn main() -> std::process::ExitCode {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let code = run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock());
    std::process::ExitCode::from(code as u8)
}
