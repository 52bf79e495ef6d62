mod commands;
mod corpus;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use diagcat::EnumConfig;

/// Exhaustive checks for finite categories and quantified diagram statements.
///
/// Exit status: 0 when every check passes, 1 when a check fails (the
/// witness is printed), 2 on parse or usage errors, 3 when an enumeration
/// would exceed the cap.
#[derive(Debug, Parser)]
#[command(name = "diagcat", version)]
pub struct Cli {
    /// Upper bound on any single enumeration.
    #[arg(long, global = true, default_value_t = diagcat::config::DEFAULT_CAP, value_parser = clap::value_parser!(u64).range(1..))]
    pub cap: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Report)]
    pub format: Format,
    /// Run on the calling thread only.
    #[arg(long, global = true)]
    pub sequential: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Check reports and summaries.
    Report,
    /// Elaborated contexts for diagram commands.
    Context,
    /// Graph descriptions (DOT) for reduction graphs.
    Graph,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Check the category laws of a `.fincat` table.
    CheckCat { file: PathBuf },
    /// Check the functor laws of a `.fun` file.
    CheckFun { file: PathBuf },
    /// Check naturality of a `.nt` file.
    CheckNt { file: PathBuf },
    /// List the quantifier stages of a diagram.
    Stages { file: PathBuf },
    /// Decide a diagram statement in a finite model.
    Eval {
        file: PathBuf,
        #[arg(long)]
        model: PathBuf,
    },
    /// Print the statement a diagram stands for.
    Context {
        file: PathBuf,
        /// Expand this annotation macro first.
        #[arg(long)]
        expand: Option<String>,
    },
    /// Print a diagram as a layered overview followed by its canonical text.
    Render { file: PathBuf },
    /// Find the normal λ-terms of a type, e.g. `infer "{f: A'->A}" "A'*B -> A*B"`.
    Infer {
        context: String,
        goal: String,
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },
    /// Build the one-step reduction graph of a term.
    Reduce {
        term: String,
        #[arg(long)]
        sig: PathBuf,
    },
    /// Check both Yoneda round trips for a `.yon` fixture.
    Yoneda { file: PathBuf },
    /// Right and left Kan extensions of a set-valued functor along a table functor.
    Kan {
        functor: PathBuf,
        values: PathBuf,
        /// More set-valued functors on the source, for the adjointness check.
        #[arg(long = "source")]
        sources: Vec<PathBuf>,
        /// Set-valued functors on the target; enables the adjointness check.
        #[arg(long = "target")]
        targets: Vec<PathBuf>,
    },
    /// Verify or build an adjunction from an `.adj` manifest.
    Adj {
        #[arg(value_enum)]
        action: AdjAction,
        manifest: PathBuf,
    },
    /// Run every entry of the bundled corpus manifest.
    Examples {
        /// Corpus directory; defaults to $DIAGCAT_CORPUS, then the bundled one.
        #[arg(long)]
        corpus: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AdjAction {
    Verify,
    Build,
}

impl Cli {
    pub fn config(&self) -> EnumConfig {
        let cfg = EnumConfig::with_cap(self.cap);
        if self.sequential {
            cfg.sequential()
        } else {
            cfg
        }
    }
}

pub fn exit_code(err: &diagcat::Error) -> u8 {
    if err.is_cap() {
        3
    } else {
        2
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(if out.passed { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
