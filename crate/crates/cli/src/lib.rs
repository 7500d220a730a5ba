//! Batch front end for `segal_lab`: loads category files, runs the
//! validators and checks, and renders deterministic reports.

pub mod commands;
pub mod format;
pub mod report;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use commands::{CheckArgs, CheckVariant, Mode};
use report::Report;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad flags or an unusable request.
    #[error("usage: {0}")]
    Usage(String),
    /// Unreadable or malformed input, or a named bound overflow.
    #[error("input: {0}")]
    Input(String),
    /// A check could not be completed consistently.
    #[error("internal check failure: {0}")]
    Check(String),
}

impl From<segal_lab::Error> for CliError {
    fn from(e: segal_lab::Error) -> Self {
        match e {
            segal_lab::Error::InvariantBreach(_) => CliError::Check(e.to_string()),
            e => CliError::Input(e.to_string()),
        }
    }
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Check(_) => 1,
            _ => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "segal-lab",
    version,
    about = "2-Segal checks for finite categories with cofibrations"
)]
pub struct Cli {
    /// Seed for randomized paths.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write the machine-readable report (JSON) here.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the category, cofibration and weak-equivalence axioms.
    Validate {
        /// Category file, or `fixture:<name>`.
        file: String,
    },
    /// Run 2-Segal checks on the S-construction.
    Check {
        file: String,
        #[arg(long, default_value_t = 4)]
        max_level: usize,
        #[arg(long, value_enum, default_value = "left")]
        mode: Mode,
        #[arg(long, value_enum, default_value = "iso-set")]
        variant: CheckVariant,
        /// Cap on diagrams and transformations per level category.
        #[arg(long, default_value_t = segal_lab::gpd2lim::DEFAULT_LEVEL_BUDGET)]
        budget: usize,
    },
    /// Generate the subcategory closed under chosen pushouts.
    Closure {
        file: String,
        #[arg(long, value_delimiter = ',')]
        seed_objects: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        seed_morphisms: Vec<String>,
        /// Write the generated category file here instead of stdout.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// List triangulations and subdivisions of P_n.
    Polygons {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        triangulations_only: bool,
    },
    /// Search random generated subcategories for non-bijective maps.
    Search {
        #[arg(long)]
        config: String,
    },
    /// Check the extension property that implies the 2-Segal condition.
    Sufficiency { file: String },
    /// Print a bundled fixture as a category file.
    Fixture {
        name: String,
        #[arg(long)]
        json: bool,
    },
}

/// What a run produced: the human report, the machine report (if any), and
/// an exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub machine: Option<String>,
    pub code: i32,
}

impl Outcome {
    fn report(r: &Report) -> Outcome {
        Outcome {
            stdout: r.human(),
            stderr: String::new(),
            machine: Some(r.machine()),
            code: if r.passed { 0 } else { 1 },
        }
    }

    fn error(e: &CliError) -> Outcome {
        Outcome {
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
            machine: None,
            code: e.code(),
        }
    }
}

fn dispatch(cli: &Cli) -> Result<Outcome, CliError> {
    let seed = cli.seed.unwrap_or(0);
    let out = match &cli.command {
        Command::Validate { file } => {
            Outcome::report(&commands::validate(&commands::load(file)?, seed))
        }
        Command::Check {
            file,
            max_level,
            mode,
            variant,
            budget,
        } => {
            let a = CheckArgs {
                max_level: *max_level,
                mode: *mode,
                variant: *variant,
                budget: *budget,
            };
            Outcome::report(&commands::check(&commands::load(file)?, &a, seed)?)
        }
        Command::Closure {
            file,
            seed_objects,
            seed_morphisms,
            emit,
        } => {
            let src = commands::load(file)?;
            let (r, text) = commands::closure(&src, seed_objects, seed_morphisms, seed)?;
            let mut o = Outcome::report(&r);
            match emit {
                Some(p) => std::fs::write(p, &text)
                    .map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?,
                None => o.stdout.push_str(&text),
            }
            o
        }
        Command::Polygons {
            n,
            triangulations_only,
        } => Outcome::report(&commands::polygons(*n, *triangulations_only, seed)?),
        Command::Search { config } => Outcome::report(&commands::search(config, cli.seed)?),
        Command::Sufficiency { file } => {
            Outcome::report(&commands::sufficiency(&commands::load(file)?, seed)?)
        }
        Command::Fixture { name, json } => Outcome {
            stdout: commands::fixture(name, *json)?,
            stderr: String::new(),
            machine: None,
            code: 0,
        },
    };
    Ok(out)
}

/// Parses `args` (including the program name) and runs the command without
/// touching stdout. `--out` is honoured here.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    stdout: String::new(),
                    stderr: text,
                    machine: None,
                    code: 2,
                }
            } else {
                Outcome {
                    stdout: text,
                    stderr: String::new(),
                    machine: None,
                    code: 0,
                }
            };
        }
    };
    let mut o = dispatch(&cli).unwrap_or_else(|e| Outcome::error(&e));
    if let (Some(path), Some(m)) = (&cli.out, &o.machine) {
        if let Err(e) = std::fs::write(path, m) {
            o = Outcome::error(&CliError::Input(format!("{}: {e}", path.display())));
        }
    }
    o
}
