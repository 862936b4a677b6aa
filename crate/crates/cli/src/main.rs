use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use cat0kit_cli::figure::comparison_csv;
use cat0kit_cli::report::EXIT_ERROR;
use cat0kit_cli::{
    emit_report, ingest_space, run_suite, CliError, InputFormat, OutputFormat, Suite, SuiteConfig,
};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "cat0kit",
    version,
    about = "Sampled checks of metric and CAT(0) properties"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run check suites on a space.
    ///
    /// Exit status: 0 if some suite passed and none failed, 1 if any
    /// failed, 2 if nothing was verified, 3 on bad input.
    Check {
        /// Path to a space file, or an inline JSON spec.
        #[arg(long)]
        space: String,
        /// Defaults to inline JSON, or by file extension (.json, .csv),
        /// else an edge list.
        #[arg(long, value_enum)]
        space_format: Option<InputFormat>,
        #[arg(long, value_enum, value_delimiter = ',', required = true)]
        suite: Vec<Suite>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9, allow_negative_numbers = true)]
        tol: f64,
        /// Where to write the JSON report.
        #[arg(long)]
        out: Option<PathBuf>,
        /// What to print on stdout.
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
        /// Run on a single thread.
        #[arg(long)]
        serial: bool,
    },
    /// Print a comparison triangle as CSV rows `side,frac,x,y`.
    Comparison {
        /// Side lengths d(x,y), d(x,z), d(y,z).
        #[arg(long, value_delimiter = ',', required = true)]
        sides: Vec<f64>,
        #[arg(long, default_value_t = 11)]
        grid: usize,
    },
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Check {
            space,
            space_format,
            suite,
            samples,
            seed,
            tol,
            out,
            format,
            serial,
        } => {
            let spec = ingest_space(
                &space,
                space_format.unwrap_or_else(|| InputFormat::infer(&space)),
            )?;
            let config = SuiteConfig {
                space: spec,
                suites: suite,
                samples,
                seed,
                tol,
                out,
                parallel: !serial,
            };
            let started = Instant::now();
            let report = run_suite(&config)?;
            print!("{}", emit_report(&report, format));
            eprintln!("elapsed {:.3} s", started.elapsed().as_secs_f64());
            Ok(report.exit_code())
        }
        Command::Comparison { sides, grid } => {
            if sides.len() != 3 {
                return Err(CliError::Config(format!(
                    "--sides takes three lengths, got {}",
                    sides.len()
                )));
            }
            print!("{}", comparison_csv([sides[0], sides[1], sides[2]], grid)?);
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_ERROR as u8 } else { 0 });
        }
    };
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    };
    let _ = std::io::stdout().flush();
    ExitCode::from(code as u8)
}
