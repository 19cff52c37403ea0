use std::path::PathBuf;
use std::process::ExitCode;

use clap::builder::PossibleValuesParser;
use clap::{Parser, Subcommand};
use fiboptic_cli::{describe_file, run_suite, Format, SuiteConfig, SUITES};

#[derive(Parser)]
#[command(name = "fiboptic", version, about = "Check lens, optic and fibre-optic laws by exhaustive enumeration")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one suite and print its report.
    Check(CheckArgs),
    /// Print a summary of an instance file.
    Describe { file: PathBuf },
    /// List the available suites.
    Suites,
}

#[derive(clap::Args)]
struct CheckArgs {
    #[arg(long, value_parser = PossibleValuesParser::new(SUITES))]
    suite: String,
    #[arg(long, default_value_t = 2)]
    max_size: usize,
    #[arg(long, default_value_t = 2)]
    residual_bound: usize,
    #[arg(long, default_value_t = 2)]
    entry_bound: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "json", value_parser = ["json", "text"])]
    format: String,
    /// JSON array of {"source", "target"} pairs to check instead of the full range.
    #[arg(long)]
    instances: Option<PathBuf>,
    /// Kernel weight denominators, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
    denominators: Vec<u32>,
    /// Largest enumeration allowed; larger instances are skipped.
    #[arg(long, default_value_t = fiboptic_core::DEFAULT_CEILING)]
    ceiling: usize,
    /// Draws per sampled group.
    #[arg(long, default_value_t = 500)]
    samples: usize,
    /// Cube faces to report (bottom, top, vertical, dependent), comma separated.
    #[arg(long, value_delimiter = ',')]
    faces: Vec<String>,
    /// Record wall-clock time; the report is then no longer reproducible.
    #[arg(long)]
    timing: bool,
}

impl CheckArgs {
    fn config(self) -> SuiteConfig {
        SuiteConfig {
            suite: self.suite,
            max_size: self.max_size,
            residual_bound: self.residual_bound,
            entry_bound: self.entry_bound,
            denominators: self.denominators,
            ceiling: self.ceiling,
            seed: self.seed,
            samples: self.samples,
            format: self.format.parse().expect("clap restricts the format"),
            faces: self.faces,
            instances: self.instances,
            timing: self.timing,
        }
    }
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Check(args) => {
            let config = args.config();
            match run_suite(&config) {
                Ok(report) => {
                    match config.format {
                        Format::Json => println!("{}", report.to_json()),
                        Format::Text => print!("{}", report.to_text()),
                    }
                    if report.success() {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(1)
                    }
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
            }
        }
        Command::Describe { file } => match describe_file(&file) {
            Ok(text) => {
                println!("{text}");
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        },
        Command::Suites => {
            for s in SUITES {
                println!("{s}");
            }
            ExitCode::SUCCESS
        }
    }
}
