use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use vlsikit::cli::{self, CliError};

#[derive(Parser)]
#[command(name = "vlsikit", version, about = "Run VLSI analysis case files")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Run a case file and print its report
    Run {
        case: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Check a case file against its analysis schema
    Validate { case: PathBuf },
    /// List analysis ids and their parameters
    List,
}

fn fail(e: CliError) -> ExitCode {
    eprintln!("{}", e.to_json());
    ExitCode::from(e.exit_code() as u8)
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Malformed(format!("{}: {e}", path.display())))
}

/// Writes to stdout, treating a closed pipe as success.
fn emit(text: &str) -> ExitCode {
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::FAILURE
        }
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    match args.command {
        Command::Run { case, format } => match read(&case).and_then(|t| cli::run_case(&t)) {
            Ok(report) => emit(&match format {
                Format::Json => report.to_json() + "\n",
                Format::Table => report.to_table(),
            }),
            Err(e) => fail(e),
        },
        Command::Validate { case } => match read(&case).and_then(|t| cli::validate_case(&t)) {
            Ok(()) => emit("OK\n"),
            Err(e) => fail(e),
        },
        Command::List => emit(&cli::list_text()),
    }
}
