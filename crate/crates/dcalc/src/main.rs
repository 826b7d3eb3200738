use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use dcalc::commands::{self, Format, Mode, Options, Output};

/// Proof-net prover and parser for the Displacement calculus.
///
/// Exit status: 0 when a reading (or a valid proof) is found, 1 when there
/// is none, 2 on input errors.
#[derive(Parser)]
#[command(name = "dcalc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a sentence against a grammar file.
    Parse {
        grammar: PathBuf,
        sentence: String,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Decide a sequent such as "x:np, y:np\s |- x+y:s" over a signature file.
    Prove {
        signature: PathBuf,
        sequent: String,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Check a natural-deduction proof file.
    Check {
        proof: PathBuf,
        #[arg(long, conflicts_with = "latex")]
        json: bool,
        #[arg(long)]
        latex: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Net,
    Parse,
}

#[derive(Args)]
struct SearchArgs {
    /// Goal formula; overrides the grammar's or the sequent's.
    #[arg(long, value_name = "FORMULA")]
    goal: Option<String>,
    /// Try every linking instead of stopping at the first reading.
    #[arg(long)]
    all: bool,
    /// Show contraction traces and rejected linkings.
    #[arg(long)]
    trace: bool,
    #[arg(long, conflicts_with = "latex")]
    json: bool,
    #[arg(long)]
    latex: bool,
    /// `net` accepts any comb; `parse` requires the input word order.
    #[arg(long, value_enum, default_value = "parse")]
    mode: ModeArg,
    /// Worker threads for checking candidates.
    #[arg(long, default_value_t = 1, value_name = "N")]
    jobs: usize,
}

impl SearchArgs {
    fn options(&self) -> Options {
        Options {
            goal: self.goal.clone(),
            all: self.all,
            trace: self.trace,
            format: format(self.json, self.latex),
            mode: match self.mode {
                ModeArg::Net => Mode::Net,
                ModeArg::Parse => Mode::Parse,
            },
            jobs: self.jobs,
        }
    }
}

fn format(json: bool, latex: bool) -> Format {
    if json {
        Format::Json
    } else if latex {
        Format::Latex
    } else {
        Format::Text
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn run(cli: Cli) -> Result<Output> {
    match cli.command {
        Command::Parse {
            grammar,
            sentence,
            search,
        } => commands::parse(&read(&grammar)?, &sentence, &search.options()),
        Command::Prove {
            signature,
            sequent,
            search,
        } => commands::prove(&read(&signature)?, &sequent, &search.options()),
        Command::Check { proof, json, latex } => commands::check(&read(&proof)?, format(json, latex)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            let _ = std::io::stdout().write_all(out.stdout.as_bytes());
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {:#}", e);
            ExitCode::from(2)
        }
    }
}
