use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use netsync::cli::{parse_grid, run_file, Command, RunOptions, EXIT_USAGE};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Cmd {
    Synthesize,
    Spectrum,
    Simulate,
    Certify,
}

/// Synthesize, certify and simulate synchronizing coupling gains.
#[derive(Debug, Parser)]
#[command(name = "netsync", version)]
struct Args {
    command: Cmd,
    /// Scenario file (JSON).
    scenario: PathBuf,
    /// Directory for report, trajectory and summary files.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Certification grid: σmin,σmax,nσ,ωmax,nω.
    #[arg(long, value_name = "GRID", allow_hyphen_values = true)]
    grid: Option<String>,
    /// Propagate with the exact transition matrix instead of RK4.
    #[arg(long)]
    exact: bool,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let command = match args.command {
        Cmd::Synthesize => Command::Synthesize,
        Cmd::Spectrum => Command::Spectrum,
        Cmd::Simulate => Command::Simulate,
        Cmd::Certify => Command::Certify,
    };
    let grid = match args.grid.as_deref().map(parse_grid).transpose() {
        Ok(g) => g,
        Err(f) => {
            eprintln!("error: {}", f.message);
            return ExitCode::from(f.code as u8);
        }
    };
    let opts = RunOptions {
        out_dir: args.out,
        grid,
        exact: args.exact,
    };
    match run_file(command, &args.scenario, &opts) {
        Ok(outcome) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&outcome.report).expect("report serializes")
            );
            ExitCode::from(outcome.code as u8)
        }
        Err(f) => {
            eprintln!("error ({}): {}", command.name(), f.message);
            ExitCode::from(f.code as u8)
        }
    }
}
