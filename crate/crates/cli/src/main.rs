use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cvtele_cli::{
    cmd_check, cmd_fig2, cmd_sample, CliError, ConfigOverrides, RunConfig, EXIT_USAGE,
};

/// Continuous-variable teleportation of a single photon, simulated in a
/// truncated Fock space.
#[derive(Parser)]
#[command(name = "cvtele", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the output field coherence over |beta| and write CSV.
    Fig2(RunArgs),
    /// Run the verification suites and write a pass/fail report.
    Check(RunArgs),
    /// Draw measurement outcomes and write per-outcome coherence and fidelity.
    Sample(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Entanglement parameter, 0 <= q < 1.
    #[arg(long)]
    q: Option<f64>,
    /// Photon-number cutoff of the truncated basis.
    #[arg(long)]
    cutoff: Option<usize>,
    #[arg(long)]
    beta_max: Option<f64>,
    /// Number of magnitudes in the sweep.
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Allowed deviation between numeric and closed-form coherence.
    #[arg(long)]
    tolerance: Option<f64>,
    /// Number of sampled outcomes.
    #[arg(long)]
    count: Option<usize>,
    /// Angles per magnitude; values above 1 sweep a polar grid.
    #[arg(long)]
    angles: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// key=value file; flags take precedence over its entries.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl RunArgs {
    fn resolve(&self) -> Result<RunConfig, CliError> {
        let flags = ConfigOverrides {
            q: self.q,
            cutoff: self.cutoff,
            beta_max: self.beta_max,
            steps: self.steps,
            seed: self.seed,
            tolerance: self.tolerance,
            count: self.count,
            angles: self.angles,
            output_path: self.out.clone(),
        };
        RunConfig::resolve(self.config.as_deref(), &flags)
    }
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Fig2(args) => {
            let config = args.resolve()?;
            let outcome = cmd_fig2(&config)?;
            if outcome.flagged > 0 {
                eprintln!(
                    "{} of {} rows exceed tolerance {:e}",
                    outcome.flagged,
                    outcome.records.len(),
                    config.tolerance
                );
            }
            Ok(outcome.exit_code())
        }
        Command::Check(args) => {
            let config = args.resolve()?;
            let report = cmd_check(&config)?;
            print!("{}", report.render());
            Ok(report.exit_code())
        }
        Command::Sample(args) => {
            let config = args.resolve()?;
            let outcome = cmd_sample(&config)?;
            let s = outcome.summary;
            eprintln!(
                "{} outcomes, acceptance {:.3}, mean C = {:.4}, var C = {:.4}, mean n = {:.4}",
                s.count, outcome.batch.acceptance_rate, s.mean, s.variance, s.mean_photon_number
            );
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code().clamp(0, EXIT_USAGE) as u8)
        }
    }
}
