use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use kickosc::{execute, Experiment, ExperimentConfig, RunError};

/// Kicked nonlinear oscillator experiments.
#[derive(Debug, Parser)]
#[command(name = "kickosc", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the experiment described by a config file.
    Run {
        /// JSON config.
        #[arg(long)]
        config: PathBuf,
        /// Output directory, overriding the config.
        #[arg(long)]
        output_dir: Option<PathBuf>,
        /// Master seed, overriding the config.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads, overriding the config.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Check a config without running it.
    Validate {
        /// JSON config.
        #[arg(long)]
        config: PathBuf,
    },
    /// Print the experiment names and their parameters.
    List,
}

fn run(cli: Cli) -> Result<(), RunError> {
    match cli.command {
        Command::Run {
            config,
            output_dir,
            seed,
            threads,
        } => {
            let cfg = ExperimentConfig::load(&config)?;
            let resolved = cfg.resolve(output_dir, seed, threads)?;
            for w in &resolved.warnings {
                eprintln!("warning: {w}");
            }
            let report = execute(&resolved)?;
            let m = &report.manifest;
            for c in &m.expectations {
                eprintln!(
                    "{} {}: {}",
                    if c.pass { "ok  " } else { "MISS" },
                    c.name,
                    c.detail
                );
            }
            println!(
                "{}: {:?} in {:.2} s, {} files, manifest {}",
                resolved.experiment.name(),
                m.status,
                m.wall_time_seconds,
                m.outputs.len(),
                report.manifest_path.display()
            );
            report.into_result().map(|_| ())
        }
        Command::Validate { config } => {
            let cfg = ExperimentConfig::load(&config)?;
            let v = cfg.validate();
            for w in &v.warnings {
                eprintln!("warning: {w}");
            }
            if v.is_ok() {
                println!("ok");
                Ok(())
            } else {
                Err(RunError::Config(v.errors))
            }
        }
        Command::List => {
            for e in Experiment::ALL {
                println!("{:<20} {}", e.name(), e.summary());
                for s in e.schema() {
                    println!("    {:<20} {}", s.key, s.help);
                }
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
