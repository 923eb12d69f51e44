//! `qsconv`: batch verifier for finite-dimensional convolution cocycle
//! generators. Reads JSON, prints a JSON report, exits 0 (pass), 1 (a
//! checked property failed) or 2 (bad input or usage).

mod commands;
mod io;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qsconv::numerics::EQ_TOL;

use crate::report::{Outcome, Report};

#[derive(Parser, Debug)]
#[command(name = "qsconv", version, about = "Verify quantum stochastic convolution cocycle generators")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Absolute tolerance for residual checks.
    #[arg(long, global = true, default_value_t = EQ_TOL)]
    pub tol: f64,
    /// Add wall time to the report.
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the hyperbialgebra axioms.
    Verify {
        /// Algebra JSON, or `fixture:<name>`.
        algebra: String,
    },
    /// Build a conditional expectation and its range hyperbialgebra.
    Expectation {
        kind: ExpectationKind,
        spec: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Generator analysis.
    #[command(subcommand)]
    Generator(GeneratorCommand),
    /// Dilate a CPC generator to one satisfying the structure relations.
    Dilate {
        #[command(flatten)]
        input: GenInput,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check the Stinespring-type generator identity.
    Stinespring {
        #[command(flatten)]
        input: GenInput,
        /// Contraction `B: K → k` as a JSON matrix; defaults to 0.
        #[arg(long)]
        contraction: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Evolve vacuum-free matrix elements between exponential vectors.
    Simulate {
        #[command(flatten)]
        input: GenInput,
        /// Step function JSON for the left exponential vector.
        #[arg(long)]
        f: String,
        /// Step function JSON for the right exponential vector.
        #[arg(long)]
        g: String,
        /// `t0:t1:dt`.
        #[arg(long)]
        times: String,
        #[arg(long, value_delimiter = ',', default_values_t = [SimCheck::Increment, SimCheck::Gram, SimCheck::Contractivity, SimCheck::Semigroup])]
        check: Vec<SimCheck>,
        /// Write the trajectory here instead of into the report.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Built-in examples.
    #[command(subcommand)]
    Fixtures(FixturesCommand),
}

#[derive(Args, Debug)]
pub struct GenInput {
    /// Algebra JSON, or `fixture:<name>`.
    #[arg(long)]
    pub algebra: String,
    /// Generator JSON, or `fixture:<name>`.
    #[arg(long = "gen")]
    pub generator: String,
}

#[derive(Subcommand, Debug)]
enum GeneratorCommand {
    /// CPC decision, tuple extraction and structure relations.
    Analyze {
        #[command(flatten)]
        input: GenInput,
    },
}

#[derive(Subcommand, Debug)]
enum FixturesCommand {
    List,
    /// Print a fixture's JSON, or write it with `-o`.
    Export {
        name: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum ExpectationKind {
    DoubleCoset,
    Delsarte,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SimCheck {
    Increment,
    Gram,
    Contractivity,
    Semigroup,
    Dilation,
    Stinespring,
}

impl std::fmt::Display for SimCheck {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.to_possible_value().expect("no skipped variants").get_name())
    }
}

fn dispatch(cli: &Cli) -> anyhow::Result<Outcome> {
    let g = &cli.global;
    match &cli.command {
        Command::Verify { algebra } => commands::verify(algebra, g),
        Command::Expectation { kind, spec, output } => commands::expectation(*kind, spec, output.as_deref(), g),
        Command::Generator(GeneratorCommand::Analyze { input }) => commands::analyze(input, g),
        Command::Dilate { input, output } => commands::dilate(input, output.as_deref(), g),
        Command::Stinespring { input, contraction, output } => {
            commands::stinespring(input, contraction.as_deref(), output.as_deref(), g)
        }
        Command::Simulate { input, f, g: g2, times, check, output } => {
            commands::simulate(input, f, g2, times, check, output.as_deref(), g)
        }
        Command::Fixtures(FixturesCommand::List) => commands::fixtures_list(),
        Command::Fixtures(FixturesCommand::Export { name, output }) => commands::fixtures_export(name, output.as_deref()),
    }
}

/// A closed stdout (e.g. piped into `head`) is not an error.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{text}").and_then(|_| out.flush());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let command: Vec<String> = std::env::args().skip(1).collect();
    let outcome = match dispatch(&cli) {
        Ok(o) => o,
        Err(e) => match report::property_failure(&e) {
            Some(o) => o,
            None => {
                eprintln!("error: {e:#}");
                return ExitCode::from(2);
            }
        },
    };
    match outcome {
        Outcome::Raw(text) => {
            emit(&text);
            ExitCode::SUCCESS
        }
        Outcome::Checked { checks, results, error } => {
            let wall = cli.global.timing.then(|| start.elapsed().as_secs_f64());
            let report = Report::new(command, checks, results, error, wall);
            emit(&serde_json::to_string_pretty(&report).expect("report serializes"));
            if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}
