use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use varheat::commands::{cmd_eigfuns, cmd_eigs, cmd_solve, cmd_verify};
use varheat::config::Format;
use varheat::{emit, load_config, CliError, Overrides};

/// Heat flow with variable conductivity on [0, 1], by the unified transform.
#[derive(Parser)]
#[command(name = "varheat", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Configuration file (dotted `key = value` lines).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Truncation order of the series, overriding `series.N`.
    #[arg(long = "N", global = true)]
    truncation: Option<usize>,
    /// Number of eigenvalues, or eigenfunction modes 1..=count.
    #[arg(long, global = true)]
    count: Option<usize>,
    /// Output file; figures go next to it with an `.svg` extension.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Solution q(x, t) on the configured grid.
    Solve,
    /// Eigenvalues, optionally beside finite-difference values.
    Eigs,
    /// Sampled eigenfunctions.
    Eigfuns,
    /// Run the acceptance checks: table1, figure2, determinant, convergence or all.
    Verify {
        #[arg(default_value = "all")]
        suite: String,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let overrides = Overrides {
        truncation: cli.truncation,
        count: cli.count,
        out: cli.out,
        format: cli.format.map(|f| match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }),
    };
    let cfg = load_config(cli.config.as_deref(), &overrides)?;
    let rendered = match cli.command {
        Command::Solve => cmd_solve(&cfg)?,
        Command::Eigs => cmd_eigs(&cfg)?,
        Command::Eigfuns => cmd_eigfuns(&cfg)?,
        Command::Verify { suite } => {
            let (rendered, failed) = cmd_verify(&suite)?;
            emit(&rendered, cfg.output.as_deref())?;
            let total = rendered.data.lines().filter(|l| l.starts_with("criterion")).count();
            return if failed == 0 { Ok(()) } else { Err(CliError::VerifyFailed { failed, total }) };
        }
    };
    emit(&rendered, cfg.output.as_deref())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("varheat: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
