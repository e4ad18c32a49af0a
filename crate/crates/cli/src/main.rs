//! `twistrep`: JSON in, JSON report out. Exit code 0 when every check
//! passes, 1 on a verified failure, 2 on bad input.

mod commands;
mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use twistrep::rep::DEFAULT_TOL;
use twistrep::NumConfig;

use crate::input::{InputError, Loader};
use crate::report::Report;

#[derive(Parser, Debug)]
#[command(name = "twistrep", version, about = "Twisted groups and their representations")]
struct Cli {
    /// Numerical tolerance τ, in (0, 1e-2).
    #[arg(long, global = true, env = "TWISTREP_TOL", default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Seed for randomized linear algebra.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest group order accepted from input files.
    #[arg(long, global = true, default_value_t = 96)]
    cap: usize,
    #[command(subcommand)]
    command: Command,
}

/// Group file, optionally narrowed to the kernel of a character.
#[derive(Args, Debug)]
struct Target {
    #[arg(long)]
    group: PathBuf,
    #[arg(long)]
    character: Option<PathBuf>,
    /// Work on `ker χ` instead of the whole group.
    #[arg(long, requires = "character")]
    kernel: bool,
}

/// A group with a character and a cyclic action.
#[derive(Args, Debug)]
struct Triple {
    #[arg(long)]
    group: PathBuf,
    #[arg(long)]
    character: PathBuf,
    #[arg(long)]
    action: PathBuf,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate a group file.
    CheckGroup {
        group: PathBuf,
        #[arg(long)]
        identify: bool,
    },
    /// Build the twisted group and verify its structure.
    Twist {
        group: PathBuf,
        #[arg(long)]
        character: PathBuf,
        #[arg(long)]
        action: PathBuf,
        /// Name the twisted group up to isomorphism.
        #[arg(long)]
        identify: bool,
        /// Also twist back by the inverse of the twisted character.
        #[arg(long)]
        untwist: bool,
        /// Write the twisted group file here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate irreducible representations.
    Irreps {
        group: PathBuf,
        #[arg(long)]
        character: Option<PathBuf>,
        #[arg(long, requires = "character")]
        kernel: bool,
        /// Directory for one representation file per irrep.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide equivalence of two representations.
    Equiv {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        target: Target,
    },
    /// Induce a representation of `ker χ` up to the group.
    Induce {
        #[arg(required = true)]
        rho: Vec<PathBuf>,
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        character: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Character table row of a representation.
    Character {
        rho: PathBuf,
        #[command(flatten)]
        target: Target,
    },
    /// Check the equivariance condition for a representation of `ker χ`.
    CheckEquivariance {
        #[arg(required = true)]
        rho: Vec<PathBuf>,
        #[command(flatten)]
        triple: Triple,
    },
    /// Extend an equivariant representation of `ker χ` to the twisted group.
    Extend {
        #[arg(required = true)]
        rho: Vec<PathBuf>,
        #[command(flatten)]
        triple: Triple,
        /// Root of unity choice applied to every orbit.
        #[arg(long, default_value_t = 0)]
        root: usize,
        /// Also build every root combination and count equivalence classes.
        #[arg(long)]
        all: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify the correspondence between irreps of the twisted group and
    /// orbits of irreps of `ker χ`.
    Correspond {
        #[command(flatten)]
        triple: Triple,
    },
    /// Write the built-in fixture files.
    Fixtures {
        #[arg(long)]
        name: String,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::CheckGroup { .. } => "check-group",
            Command::Twist { .. } => "twist",
            Command::Irreps { .. } => "irreps",
            Command::Equiv { .. } => "equiv",
            Command::Induce { .. } => "induce",
            Command::Character { .. } => "character",
            Command::CheckEquivariance { .. } => "check-equivariance",
            Command::Extend { .. } => "extend",
            Command::Correspond { .. } => "correspond",
            Command::Fixtures { .. } => "fixtures",
        }
    }
}

/// Validated global settings.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub tol: f64,
    pub seed: u64,
    pub cap: usize,
}

impl RunConfig {
    fn new(tol: f64, seed: u64, cap: usize) -> Result<Self, InputError> {
        if !(tol > 0.0 && tol < 1e-2) {
            return Err(InputError(format!("--tol {tol} is outside (0, 1e-2)")));
        }
        if cap < 1 {
            return Err(InputError("--cap must be at least 1".into()));
        }
        Ok(RunConfig { tol, seed, cap })
    }

    fn num(&self) -> NumConfig {
        NumConfig::default().with_tol(self.tol).with_seed(self.seed)
    }
}

pub enum Failure {
    Input(InputError),
    Compute(twistrep::Error),
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure::Input(e)
    }
}

impl From<twistrep::Error> for Failure {
    fn from(e: twistrep::Error) -> Self {
        Failure::Compute(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = cli.command.name();
    let config = json!({ "tol": cli.tol, "seed": cli.seed, "cap": cli.cap });
    let mut report = Report::new(name, config);
    let outcome = RunConfig::new(cli.tol, cli.seed, cli.cap).map_err(Failure::from).and_then(|run| {
        let mut loader = Loader::new(run.cap, run.num());
        let result = commands::run(&cli.command, &run, &mut loader, &mut report);
        report.inputs = std::mem::take(&mut loader.files);
        result
    });
    let code = match outcome {
        Ok(()) => None,
        Err(Failure::Input(e)) => {
            eprintln!("error: {e}");
            report.error = Some(e.0);
            Some(2)
        }
        Err(Failure::Compute(e)) => {
            eprintln!("error: {e}");
            report.error = Some(e.to_string());
            Some(1)
        }
    };
    report.finish();
    println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
    let code = code.unwrap_or(if report.pass { 0 } else { 1 });
    ExitCode::from(code)
}
