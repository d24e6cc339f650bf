use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use gc_verify::config::{load_config, Overrides, SuiteConfig};
use gc_verify::report::{read_report, write_report};
use gc_verify::{explain, run_suite, SuiteName};

#[derive(Parser)]
#[command(name = "verify", version, about = "Run Gelfand–Cetlin invariant suites")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a suite and write a JSON report plus a CSV summary.
    Run {
        /// gc-check, brackets, flows, torus, reduce, so3-demo or all.
        #[arg(long, value_parser = parse_suite)]
        suite: Option<SuiteName>,
        /// JSON config document; flags override its fields.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Report path; the CSV summary is written next to it.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        trials: Option<usize>,
        /// Matrix size for the unitary backend.
        #[arg(long)]
        n: Option<usize>,
        /// Suppress the text summary.
        #[arg(long)]
        quiet: bool,
    },
    /// Print the text summary of an existing report.
    Explain { report: PathBuf },
}

fn parse_suite(s: &str) -> Result<SuiteName, String> {
    SuiteName::parse(s).ok_or_else(|| format!("unknown suite `{s}`"))
}

const DEFAULT_OUT: &str = "verify-report.json";

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run {
            suite,
            config,
            seed,
            out,
            trials,
            n,
            quiet,
        } => {
            let file = match config.as_deref().map(load_config).transpose() {
                Ok(f) => f.unwrap_or_default(),
                Err(e) => return usage_error(&e.to_string()),
            };
            let flags = Overrides {
                suite,
                seed,
                trials,
                n,
                out,
            };
            let (cfg, out) = match SuiteConfig::resolve(file, flags) {
                Ok(r) => r,
                Err(e) => return usage_error(&e.to_string()),
            };
            let out = out.unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
            let report = run_suite(&cfg);
            if let Err(e) = write_report(&report, &out) {
                return usage_error(&format!("{}: {e}", out.display()));
            }
            if !quiet {
                print!("{}", explain(&report));
            }
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Command::Explain { report } => match read_report(&report) {
            Ok(r) => {
                print!("{}", explain(&r));
                ExitCode::SUCCESS
            }
            Err(e) => usage_error(&e),
        },
    }
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

