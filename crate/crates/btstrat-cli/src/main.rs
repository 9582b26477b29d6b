//! Command-line front end: stratification reports, window posets,
//! verification suites and fixture reproduction.

mod fixtures;
mod render;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use btstrat::report::{cmd_poset, cmd_report, cmd_verify, ReportConfig, Suite};
use clap::{Args, Parser, Subcommand, ValueEnum};

/// Exit status when a computation or input error aborts a command.
const EXIT_ERROR: u8 = 2;

#[derive(Parser)]
#[command(name = "btstrat", version, about = "Bruhat-Tits strata of unitary Rapoport-Zink spaces over small finite fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Abstract census, components, descriptors and point counts.
    Report(CommonArgs),
    /// Hasse diagram of the concrete indices in the window.
    Poset(CommonArgs),
    /// Replays one verification suite.
    Verify {
        #[command(flatten)]
        common: CommonArgs,
        /// coxeter, lattice, hermitian, dl, bt, bijection or all.
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Recomputes the reference fixtures and compares them with the data file.
    Fixtures {
        /// Alternative fixture file; the bundled one is used by default.
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum Format {
    Json,
    Dot,
    Md,
}

#[derive(Args)]
struct CommonArgs {
    /// Rank of the hermitian space.
    #[arg(long)]
    n: usize,
    /// Comma-separated parahoric tuple.
    #[arg(long, value_delimiter = ',', required = true)]
    h: Vec<usize>,
    /// Residue field size, an odd prime power.
    #[arg(long, default_value_t = 3)]
    q: u32,
    /// Coefficient extension degree.
    #[arg(long, default_value_t = 1)]
    d: u32,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl CommonArgs {
    fn config(&self) -> btstrat::Result<ReportConfig> {
        ReportConfig::new(self.n, self.h.clone(), self.q, self.d)
    }
}

/// Rendered text and overall verdict.
type Rendered = (String, bool);

fn run(command: Command) -> Result<(Rendered, Option<PathBuf>), String> {
    let err = |e: btstrat::Error| e.to_string();
    match command {
        Command::Report(args) => {
            let report = cmd_report(&args.config().map_err(err)?).map_err(err)?;
            let text = match args.format {
                Format::Json => render::json(&report)?,
                Format::Md => render::report_markdown(&report),
                Format::Dot => render::report_dot(&report),
            };
            Ok(((text, report.passed()), args.out))
        }
        Command::Poset(args) => {
            let report = cmd_poset(&args.config().map_err(err)?).map_err(err)?;
            let text = match args.format {
                Format::Json => render::json(&report)?,
                Format::Md => render::poset_markdown(&report),
                Format::Dot => render::poset_dot(&report),
            };
            Ok(((text, report.passed()), args.out))
        }
        Command::Verify { common, suite } => {
            let suite: Suite = suite.parse().map_err(err)?;
            let report = cmd_verify(&common.config().map_err(err)?, suite).map_err(err)?;
            let text = match common.format {
                Format::Json => render::json(&report)?,
                Format::Md => render::checks_markdown(&report.header, &report.checks),
                Format::Dot => return Err("dot output is available for report and poset only".into()),
            };
            Ok(((text, report.passed()), common.out))
        }
        Command::Fixtures { file, format, out } => {
            let data = match &file {
                Some(path) => fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?,
                None => fixtures::BUNDLED.to_string(),
            };
            let outcome = fixtures::reproduce(&data)?;
            let text = match format {
                Format::Json => render::json(&outcome)?,
                Format::Md => fixtures::markdown(&outcome),
                Format::Dot => return Err("dot output is available for report and poset only".into()),
            };
            Ok(((text, outcome.passed()), out))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(((text, passed), out)) => {
            match out {
                Some(path) => {
                    if let Err(e) = fs::write(&path, &text) {
                        eprintln!("error: {}: {e}", path.display());
                        return ExitCode::from(EXIT_ERROR);
                    }
                }
                None => print!("{text}"),
            }
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
