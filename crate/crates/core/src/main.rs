//! Command-line front end. Each subcommand loads its shipped default
//! scenario (or `--scenario`), executes the recipe, and writes CSVs, a
//! summary, and plot scripts under the output directory.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use udcsim::calibration::Calibration;
use udcsim::engine::scenario::ScenarioConfig;
use udcsim::error::Error;
use udcsim::{experiments, scenarios};

/// Environment variable pointing at a calibration TOML used when
/// `--calibration` is absent.
const CALIBRATION_ENV: &str = "UDCSIM_CALIBRATION";

#[derive(Parser)]
#[command(
    name = "udcsim",
    about = "Deterministic simulator for acoustic interference with submerged storage clusters",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Scenario TOML overriding the subcommand's shipped default.
    #[arg(long, global = true)]
    scenario: Option<PathBuf>,

    /// Output directory for CSVs, summaries, and plot scripts.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Master seed override.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Calibration TOML; falls back to $UDCSIM_CALIBRATION, then the
    /// embedded default.
    #[arg(long, global = true)]
    calibration: Option<PathBuf>,

    /// Trial-count override for experiments that average over trials.
    #[arg(long, global = true)]
    trials: Option<usize>,

    /// Suppress terminal output.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Frequency sweep; flags resonance bands.
    Sweep,
    /// Throughput vs injection volume.
    VolumeCurve,
    /// Throughput by injection point around the enclosure.
    Positions,
    /// Throughput by speaker orientation.
    Angle,
    /// Heartbeat cascade: stall, member drops, node removal.
    HdfsCascade,
    /// Normalized distributed-database latency table.
    DbLatency,
    /// VM placement shift under a rising volume schedule.
    VmMigration,
    /// Block-trace replay over volumes.
    SniaReplay,
    /// Write-back cache latency distributions.
    CacheBench,
    /// Analytic displacement attenuation over distance.
    FemAttenuation,
    /// Build a benign per-disk profile store.
    DetectProfile,
    /// Detector accuracy (FPR/TPR) on seeded pools.
    DetectEval,
    /// Execute an arbitrary scenario file (requires --scenario).
    Run,
}

fn default_scenario(command: &Command) -> udcsim::error::Result<ScenarioConfig> {
    match command {
        Command::Sweep => scenarios::sweep(),
        Command::VolumeCurve => scenarios::volume_curve(),
        Command::Positions => scenarios::positions(),
        Command::Angle => scenarios::angle(),
        Command::HdfsCascade => scenarios::hdfs_cascade(),
        Command::DbLatency => scenarios::db_latency(),
        Command::VmMigration => scenarios::vm_migration(),
        Command::SniaReplay => scenarios::snia_replay(),
        Command::CacheBench => scenarios::cache_bench(),
        Command::FemAttenuation => scenarios::fem_attenuation(),
        Command::DetectProfile => scenarios::detect_profile(),
        Command::DetectEval => scenarios::detect_eval(),
        Command::Run => Err(Error::config("the run subcommand requires --scenario PATH")),
    }
}

fn apply_trials(scenario: &mut ScenarioConfig, trials: usize) {
    use udcsim::engine::scenario::ExperimentSpec::*;
    match &mut scenario.experiment {
        VolumeCurve { trials: t, .. }
        | Sweep { trials: t, .. }
        | Positions { trials: t, .. }
        | Angle { trials: t, .. }
        | DetectProfile { trials: t, .. } => *t = trials,
        DetectEval { combinations, .. } => *combinations = trials,
        _ => {}
    }
}

fn run_cli(cli: &Cli) -> udcsim::error::Result<()> {
    let mut scenario = match &cli.scenario {
        Some(path) => ScenarioConfig::load(path)?,
        None => default_scenario(&cli.command)?,
    };
    if let Some(seed) = cli.seed {
        scenario.seed = seed;
    }
    if let Some(trials) = cli.trials {
        apply_trials(&mut scenario, trials);
    }

    // Calibration precedence: --calibration, then the scenario's own
    // reference, then the environment, then the embedded default.
    let calibration = match (&cli.calibration, &scenario.calibration) {
        (Some(path), _) => Calibration::load(path)?,
        (None, Some(reference)) => Calibration::load(Path::new(reference))?,
        (None, None) => match std::env::var_os(CALIBRATION_ENV) {
            Some(path) => Calibration::load(PathBuf::from(path).as_path())?,
            None => Calibration::embedded_default(),
        },
    };

    let artifacts = experiments::execute(&scenario, &calibration)?;
    artifacts.write_to(&cli.out)?;

    if !cli.quiet {
        println!("{}", artifacts.headline);
        for name in artifacts.files.keys() {
            println!("  wrote {}", cli.out.join(name).display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run_cli(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            // Configuration problems and runtime failures get distinct
            // codes so wrappers can tell them apart.
            if e.is_config() {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
