mod commands;
mod input;
mod report;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::Value;

use orbifund::Bounds;

use commands::{Ctx, Outcome};
use input::{Failure, Input, Kind};
use report::{ErrorInfo, Report, ReportBounds, Status};

/// Fundamental groups of graph quotients and marked orbispaces, from JSON inputs.
#[derive(Debug, Parser)]
#[command(name = "orbifund", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Debug, Args)]
struct Global {
    /// Coset limit for every enumeration.
    #[arg(long, global = true, value_parser = positive, default_value_t = Bounds::default().max_cosets)]
    max_cosets: usize,
    /// Length bound for kernel and equality searches.
    #[arg(long, global = true, value_parser = positive, default_value_t = Bounds::default().word_length_bound)]
    word_length_bound: usize,
    /// Search node budget.
    #[arg(long, global = true, env = "ORBIFUND_BUDGET", value_parser = clap::value_parser!(u64).range(1..),
          default_value_t = Bounds::default().node_budget)]
    node_budget: u64,
    /// Largest index searched when separating a word from the identity.
    #[arg(long, global = true, value_parser = positive, default_value_t = Bounds::default().separation_index)]
    separation_index: usize,
    /// Seed for the randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Add Graphviz drawings to the report.
    #[arg(long, global = true)]
    dot: bool,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Presentation of the fundamental group of a graph.
    Pi1 { input: PathBuf },
    /// Connected covers of a graph up to a degree.
    Covers {
        input: PathBuf,
        #[arg(long, value_parser = positive, default_value_t = 4)]
        max_degree: usize,
    },
    /// Fundamental group sequence of a quotient by a group action.
    Quotient { input: PathBuf },
    /// Kernel of the induced map, generated by doomed loops.
    Doomed { input: PathBuf },
    /// Moduli group of a marked orbispace with its fingerprint.
    Moduli {
        input: PathBuf,
        /// Depth of the subgroup counts in the fingerprint.
        #[arg(long, value_parser = positive, default_value_t = 4)]
        max_index: usize,
    },
    /// Fixed-point-reflecting covers against covers of the moduli group.
    Fpr {
        input: PathBuf,
        #[arg(long, value_parser = positive, default_value_t = 4)]
        max_index: usize,
    },
    /// Search for a cover with trivial hidden groups.
    Uniformizable {
        input: PathBuf,
        #[arg(long, value_parser = positive, default_value_t = 12)]
        bound: usize,
    },
    /// Search for a Galois cover killing every hidden image.
    KillOmega {
        input: PathBuf,
        #[arg(long, value_parser = positive, default_value_t = 12)]
        bound: usize,
    },
    /// Run every invariant check that applies to the input.
    Check {
        input: PathBuf,
        #[arg(long, value_parser = positive, default_value_t = 3)]
        max_index: usize,
    },
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Pi1 { .. } => "pi1",
            Command::Covers { .. } => "covers",
            Command::Quotient { .. } => "quotient",
            Command::Doomed { .. } => "doomed",
            Command::Moduli { .. } => "moduli",
            Command::Fpr { .. } => "fpr",
            Command::Uniformizable { .. } => "uniformizable",
            Command::KillOmega { .. } => "kill-omega",
            Command::Check { .. } => "check",
        }
    }

    fn max_index(&self) -> Option<usize> {
        match *self {
            Command::Covers { max_degree, .. } => Some(max_degree),
            Command::Moduli { max_index, .. } | Command::Fpr { max_index, .. } | Command::Check { max_index, .. } => {
                Some(max_index)
            }
            Command::Uniformizable { bound, .. } | Command::KillOmega { bound, .. } => Some(bound),
            _ => None,
        }
    }
}

fn graph(input: Input) -> Result<orbifund::graph::SerreGraph, Failure> {
    match input {
        Input::Graph(g) => Ok(g),
        _ => unreachable!("loaded as a graph"),
    }
}

fn action(input: Input) -> Result<orbifund::quotient::GroupAction, Failure> {
    match input {
        Input::Action(a) => Ok(a),
        _ => unreachable!("loaded as an action"),
    }
}

fn orbispace(input: Input) -> Result<orbifund::orbispace::MarkedOrbispace, Failure> {
    match input {
        Input::Orbispace(o) => Ok(o),
        _ => unreachable!("loaded as an orbispace"),
    }
}

fn run(command: &Command, ctx: &Ctx) -> Result<Outcome, Failure> {
    let load = |path: &Path, kind| input::load(path, kind);
    match command {
        Command::Pi1 { input } => commands::pi1(&graph(load(input, Kind::Graph)?)?),
        Command::Covers { input, .. } => commands::covers(&graph(load(input, Kind::Graph)?)?, ctx),
        Command::Quotient { input } => commands::quotient(&action(load(input, Kind::Action)?)?),
        Command::Doomed { input } => commands::doomed(&action(load(input, Kind::Action)?)?, ctx),
        Command::Moduli { input, .. } => commands::moduli(&orbispace(load(input, Kind::Orbispace)?)?, ctx),
        Command::Fpr { input, .. } => commands::fpr(&orbispace(load(input, Kind::Orbispace)?)?, ctx),
        Command::Uniformizable { input, .. } => {
            commands::uniformizable(&orbispace(load(input, Kind::Orbispace)?)?, ctx)
        }
        Command::KillOmega { input, .. } => commands::kill_omega(&orbispace(load(input, Kind::Orbispace)?)?, ctx),
        Command::Check { input, .. } => {
            let value = input::read_value(input)?;
            let kind = input::detect(&value)?;
            commands::check(&input::parse(value, kind)?, ctx)
        }
    }
}

fn main() -> ExitCode {
    // usage errors are input errors; clap's own code 2 means Unknown here
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 64 } else { 0 });
        }
    };
    let g = &cli.global;
    let bounds = Bounds {
        max_cosets: g.max_cosets,
        node_budget: g.node_budget,
        word_length_bound: g.word_length_bound,
        separation_index: g.separation_index,
    };
    let ctx = Ctx {
        bounds,
        max_index: cli.command.max_index().unwrap_or(1),
        seed: g.seed,
    };
    let mut report = Report {
        tool: "orbifund",
        version: env!("CARGO_PKG_VERSION"),
        command: cli.command.name(),
        bounds: ReportBounds {
            max_index: cli.command.max_index(),
            max_cosets: bounds.max_cosets,
            word_length_bound: bounds.word_length_bound,
            node_budget: bounds.node_budget,
            separation_index: bounds.separation_index,
        },
        seed: g.seed,
        verdict: Status::Pass,
        result: Value::Null,
        error: None,
        dot: None,
    };
    match run(&cli.command, &ctx) {
        Ok(out) => {
            report.verdict = out.status;
            report.result = out.result;
            if g.dot {
                report.dot = Some(out.drawings);
            }
        }
        Err(f) => {
            let (verdict, kind, pointer, message) = match f {
                Failure::Schema { pointer, message } => (Status::InputError, "schema", Some(pointer), message),
                Failure::Input(m) => (Status::InputError, "input", None, m),
                Failure::Unknown(m) => (Status::Unknown, "bound", None, m),
                Failure::Engine(m) => (Status::Fail, "engine", None, m),
            };
            eprintln!("orbifund: {message}");
            report.verdict = verdict;
            report.error = Some(ErrorInfo { kind, pointer, message });
        }
    }
    let mut text = serde_json::to_string_pretty(&report).expect("reports serialize");
    text.push('\n');
    let written = match &g.output {
        Some(path) => fs::write(path, &text),
        None => std::io::stdout().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("orbifund: cannot write report: {e}");
        return ExitCode::from(74);
    }
    ExitCode::from(report.verdict.exit_code())
}
