//! Command-line front end: sweeps, threshold searches, Monte Carlo bias
//! verification, the property suite and constraint-operator dumps.
//!
//! Exit codes: `0` success, `1` property/runtime failure, `2` configuration
//! error (including unreadable files and invalid flags).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cvqkd::constraints::{build_constraint_bundle, write_dump, DEFAULT_MEMORY_BUDGET};
use cvqkd::scenario::{
    run_mc_bias, run_min_vk_sweep, run_property_suite, run_sweep, write_mc_bias_outputs,
    write_min_vk_outputs, write_sweep_outputs, Scenario, ScenarioConfig,
};
use cvqkd::Error;

#[derive(Parser)]
#[command(
    name = "cvqkd",
    version,
    about = "Asymptotic key rates for discrete-modulated CV-QKD and the local-oscillator intensity attack"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ScenarioArgs {
    /// Scenario TOML file.
    #[arg(long)]
    config: PathBuf,
    /// Output directory for the CSV and its column manifest.
    #[arg(long)]
    out: PathBuf,
    /// Worker threads (0 = one per core).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Override the scenario's RNG seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the scenario's mutual-information rule.
    #[arg(long, value_parser = ["discrete", "gaussian"])]
    iab_variant: Option<String>,
}

impl ScenarioArgs {
    fn load(&self) -> Result<Scenario, Error> {
        let mut config = ScenarioConfig::from_path(&self.config)?;
        if let Some(seed) = self.seed {
            config.seed = seed;
        }
        if let Some(variant) = &self.iab_variant {
            config.iab_variant = variant.clone();
        }
        Scenario::from_config(config)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate estimated and practical key rates over the distance x
    /// fluctuation grid.
    Sweep(ScenarioArgs),
    /// Find the smallest defeating fluctuation variance at every distance.
    MinVk(ScenarioArgs),
    /// Verify the estimator-bias ratios and calibration moments by
    /// Monte Carlo.
    McBias(ScenarioArgs),
    /// Run the executable invariant suite and report one line per property.
    Props {
        /// Seed for the randomized properties.
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Write the scenario's semidefinite-constraint operators as a text dump.
    ConstraintsDump {
        /// Scenario TOML file (fixes the constellation and dimension).
        #[arg(long)]
        config: PathBuf,
        /// Output file path.
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config(_) | Error::Io(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Sweep(args) => {
            let scenario = args.load()?;
            let rows = run_sweep(&scenario, args.jobs)?;
            let (csv, manifest) = write_sweep_outputs(&args.out, &scenario, &rows)?;
            let infeasible = rows.iter().filter(|r| r.status != "ok").count();
            println!(
                "sweep {}: {} rows ({} infeasible) -> {} + {}",
                scenario.config.id,
                rows.len(),
                infeasible,
                csv.display(),
                manifest.display()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::MinVk(args) => {
            let scenario = args.load()?;
            let rows = run_min_vk_sweep(&scenario, args.jobs)?;
            let (csv, manifest) = write_min_vk_outputs(&args.out, &scenario, &rows)?;
            println!(
                "min-vk {}: {} rows -> {} + {}",
                scenario.config.id,
                rows.len(),
                csv.display(),
                manifest.display()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::McBias(args) => {
            let scenario = args.load()?;
            let rows = run_mc_bias(&scenario, args.jobs)?;
            let (csv, manifest) = write_mc_bias_outputs(&args.out, &scenario, &rows)?;
            let max_z = rows
                .iter()
                .map(|r| r.z_score().abs())
                .fold(0.0f64, f64::max);
            println!(
                "mc-bias {}: {} ratios, max |z| = {max_z:.2} -> {} + {}",
                scenario.config.id,
                rows.len(),
                csv.display(),
                manifest.display()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Props { seed } => {
            let outcomes = run_property_suite(seed)?;
            let mut failed = 0usize;
            for o in &outcomes {
                let status = if o.passed { "pass" } else { "fail" };
                println!("prop {} {status} seed={seed} {}", o.name, o.details);
                if !o.passed {
                    failed += 1;
                }
            }
            println!(
                "props: {}/{} passed (seed {seed})",
                outcomes.len() - failed,
                outcomes.len()
            );
            if failed > 0 {
                Ok(ExitCode::from(1))
            } else {
                Ok(ExitCode::SUCCESS)
            }
        }
        Command::ConstraintsDump { config, out } => {
            let scenario = Scenario::from_config(ScenarioConfig::from_path(&config)?)?;
            let c = scenario.model.constellation();
            let dim = scenario.model.quantities().dim;
            let bundle = build_constraint_bundle(c, dim, DEFAULT_MEMORY_BUDGET)?;
            if let Some(parent) = out.parent() {
                if !parent.as_os_str().is_empty() {
                    std::fs::create_dir_all(parent)?;
                }
            }
            let file = std::fs::File::create(&out)?;
            write_dump(&bundle, std::io::BufWriter::new(file))?;
            println!(
                "constraints-dump {}: {} operators ({}x{} register x mode) -> {}",
                scenario.config.id,
                bundle.operators.len(),
                bundle.register_dim,
                bundle.mode_dim,
                out.display()
            );
            Ok(ExitCode::SUCCESS)
        }
    }
}
