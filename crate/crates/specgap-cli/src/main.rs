//! `specgap`: limiting spectral distributions of information-plus-noise
//! sample covariance matrices: density profiles, support-gap detection and
//! certification, and Monte Carlo verification, driven by a JSON config.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use specgap_cli::{
    experiment, run_gap_experiment, run_gaps_scan, run_lsd_experiment, run_rate_experiment,
    CliError, ExperimentConfig,
};

#[derive(Parser)]
#[command(name = "specgap", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// Experiment configuration (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Report path; side CSV/JSON files are written next to it.
    #[arg(long, default_value = "report.json")]
    out: PathBuf,
    /// Override the config's trial count.
    #[arg(long)]
    trials: Option<u64>,
    /// Override the config's ensemble master seed.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Solver density grid, CDF, and per-trial KS distances of simulated
    /// spectra against the solver CDF.
    Lsd(RunArgs),
    /// Detect support gaps on the density grid and certify each one.
    Gaps(RunArgs),
    /// Detect and certify gaps, then count eigenvalues of simulated
    /// realizations inside each certified interior gap.
    VerifyGap(RunArgs),
    /// Convergence-rate ladder at a certified gap point.
    Rate(RunArgs),
}

fn load(args: &RunArgs) -> Result<ExperimentConfig, CliError> {
    Ok(ExperimentConfig::load(&args.config)?.with_overrides(args.trials, args.seed))
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Lsd(args) => {
            let config = load(&args)?;
            let (report, side) = run_lsd_experiment(&config)?;
            experiment::write_outputs(&args.out, &report, &side)?;
            match report.ks.median {
                Some(m) => eprintln!(
                    "lsd: mass {:.6}, median KS over {} trials: {:.5} -> {}",
                    report.total_mass,
                    report.ks.trials,
                    m,
                    args.out.display()
                ),
                None => eprintln!(
                    "lsd: mass {:.6} -> {}",
                    report.total_mass,
                    args.out.display()
                ),
            }
        }
        Command::Gaps(args) => {
            let config = load(&args)?;
            let (report, side) = run_gaps_scan(&config)?;
            experiment::write_outputs(&args.out, &report, &side)?;
            let interior = report.gaps.iter().filter(|g| !g.exterior).count();
            eprintln!(
                "gaps: {} region(s), {} interior -> {}",
                report.gaps.len(),
                interior,
                args.out.display()
            );
        }
        Command::VerifyGap(args) => {
            let config = load(&args)?;
            let (report, side) = run_gap_experiment(&config)?;
            experiment::write_outputs(&args.out, &report, &side)?;
            for g in report.gaps.iter().filter(|g| g.violations.is_some()) {
                eprintln!(
                    "verify-gap: [{:.4}, {:.4}] violations {}/{} (max count {})",
                    g.a,
                    g.b,
                    g.violations.unwrap(),
                    g.trials.unwrap(),
                    g.max_count.unwrap()
                );
            }
            eprintln!("verify-gap -> {}", args.out.display());
        }
        Command::Rate(args) => {
            let config = load(&args)?;
            let (report, side) = run_rate_experiment(&config)?;
            experiment::write_outputs(&args.out, &report, &side)?;
            if !report.x_in_certified_gap {
                eprintln!("rate: warning: x = {} is not in a certified gap", report.x);
            }
            for row in &report.rows {
                eprintln!(
                    "rate: n={:5} v_n={:.4} median|Δ|={:.6e} n·v_n·median|Δ|={:.4}",
                    row.n, row.v_n, row.median_abs, row.median_scaled
                );
            }
            eprintln!("rate -> {}", args.out.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
