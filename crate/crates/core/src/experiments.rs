//! Experiment recipes: one entry point per CLI subcommand, each producing a
//! deterministic set of CSV artifacts, a plain-text summary, and plotting
//! scripts under a single output directory.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use crate::acoustics::{attenuate_amplitude, EffectiveExcitation};
use crate::calibration::Calibration;
use crate::detector::{evaluate, profile_disk, profile_store_files, DetectorConfig, DiskProfile};
use crate::distsys::{db_normalized_latency, DbCluster, DbLatency};
use crate::engine::scenario::{ExperimentSpec, ScenarioConfig};
use crate::engine::{derive_rng, events_to_csv, run_simulation, SimOutput};
use crate::error::{Error, Result};
use crate::plots::{emit_plot_script, PlotSpec, PlotStyle};
use crate::storage::{cache_serve_with_outcome, DiskState, Raid5Array};
use crate::workload::{
    load_msr_trace, replay_trace, run_benchmark, synthetic_trace, NoiseModel, StorageTarget,
    ThroughputTrace, WorkloadKind, WorkloadSpec,
};
use rand::Rng;

/// Everything one recipe run produces, keyed by relative output path.
#[derive(Debug, Clone, Default)]
pub struct RunArtifacts {
    pub files: BTreeMap<String, String>,
    pub summary: Vec<(String, String)>,
    /// One-line outcome for the terminal.
    pub headline: String,
}

impl RunArtifacts {
    fn insert(&mut self, name: impl Into<String>, content: impl Into<String>) {
        self.files.insert(name.into(), content.into());
    }

    fn push_summary(&mut self, key: impl Into<String>, value: impl ToString) {
        self.summary.push((key.into(), value.to_string()));
    }

    fn add_plot(&mut self, csv_name: &str, spec: PlotSpec) -> Result<()> {
        let content = self
            .files
            .get(csv_name)
            .ok_or_else(|| Error::config(format!("no CSV named {csv_name} to plot")))?;
        let script = emit_plot_script(csv_name, content, &spec)?;
        let gp_name = csv_name.replace(".csv", ".gp");
        self.insert(gp_name, script);
        Ok(())
    }

    fn finalize_summary(&mut self) {
        let mut text = String::new();
        for (key, value) in &self.summary {
            text.push_str(&format!("{key} = {value}\n"));
        }
        self.insert("summary.txt", text);
    }

    /// Writes every artifact under `dir`, creating subdirectories as needed.
    pub fn write_to(&self, dir: &Path) -> Result<()> {
        for (rel, content) in &self.files {
            let path = dir.join(rel);
            if let Some(parent) = path.parent() {
                fs::create_dir_all(parent)
                    .map_err(|e| Error::io(parent.display().to_string(), e))?;
            }
            fs::write(&path, content).map_err(|e| Error::io(path.display().to_string(), e))?;
        }
        Ok(())
    }
}

/// Runs whichever experiment the scenario declares.
pub fn execute(scenario: &ScenarioConfig, calibration: &Calibration) -> Result<RunArtifacts> {
    scenario.validate(calibration)?;
    let mut artifacts = match &scenario.experiment {
        ExperimentSpec::Benchmark { .. } => benchmark(scenario, calibration)?,
        ExperimentSpec::VolumeCurve { .. } => volume_curve(scenario, calibration)?,
        ExperimentSpec::Sweep { .. } => sweep(scenario, calibration)?,
        ExperimentSpec::Positions { .. } => positions(scenario, calibration)?,
        ExperimentSpec::Angle { .. } => angle(scenario, calibration)?,
        ExperimentSpec::HdfsCascade {} => hdfs_cascade(scenario, calibration)?,
        ExperimentSpec::DbLatency { .. } => db_latency(scenario, calibration)?,
        ExperimentSpec::VmMigration { .. } => vm_migration(scenario, calibration)?,
        ExperimentSpec::SniaReplay { .. } => snia_replay(scenario, calibration)?,
        ExperimentSpec::CacheBench { .. } => cache_bench(scenario, calibration)?,
        ExperimentSpec::FemAttenuation { .. } => fem_attenuation(scenario)?,
        ExperimentSpec::DetectProfile { .. } => detect_profile(scenario, calibration)?,
        ExperimentSpec::DetectEval { .. } => detect_eval(scenario, calibration)?,
    };
    let kind = scenario.experiment.kind_name().to_string();
    artifacts
        .summary
        .insert(0, ("experiment".to_string(), kind));
    artifacts
        .summary
        .insert(1, ("seed".to_string(), scenario.seed.to_string()));
    artifacts.finalize_summary();
    Ok(artifacts)
}

fn sim_files(artifacts: &mut RunArtifacts, output: &SimOutput, suffix: &str) {
    artifacts.insert(format!("metrics{suffix}.csv"), output.metrics.to_csv());
    artifacts.insert(format!("events{suffix}.csv"), events_to_csv(&output.events));
    if let Some(trace) = &output.trace {
        artifacts.insert(format!("trace{suffix}.csv"), trace.to_csv());
    }
}

/// Mean normalized throughput over fresh-storage benchmark trials at a
/// fixed ΔSPL and combined factor. Passive attenuation wrapped around the
/// enclosure comes off the dB level first.
fn trial_mean_normalized(
    scenario: &ScenarioConfig,
    calibration: &Calibration,
    delta_spl: f64,
    combined_factor: f64,
    duration_s: f64,
    trials: usize,
    stream: &str,
) -> Result<f64> {
    let delta_spl = delta_spl - scenario.propagation.passive_attenuation_db;
    let models = scenario
        .storage
        .build_models(calibration, WorkloadKind::SeqWrite, scenario.seed);
    let baseline = models
        .iter()
        .map(|m| m.baseline_throughput_mb_s)
        .fold(f64::INFINITY, f64::min);
    let noise = NoiseModel {
        sigma_frac: scenario.storage.noise_sigma_frac,
    };
    let spec = WorkloadSpec {
        kind: WorkloadKind::SeqWrite,
        duration_s,
        request_size_kb: 128.0,
        partition_gb: 60.0,
    };
    let excitation = move |_t: f64| EffectiveExcitation {
        delta_spl,
        displacement_nm: 0.0,
        combined_factor,
    };
    let mut total = 0.0;
    for trial in 0..trials {
        let mut array = Raid5Array::new(
            models.len(),
            scenario.storage.drop_timeout_s,
            scenario.storage.degraded_drop_timeout_s,
        )?;
        let mut states = vec![DiskState::new(); models.len()];
        let mut target = StorageTarget {
            array: &mut array,
            states: &mut states,
            models: &models,
        };
        let mut rng = derive_rng(scenario.seed, &format!("{stream}/trial{trial}"));
        let trace = run_benchmark(&spec, &mut target, &excitation, &noise, &mut rng)?;
        total += trace.mean();
    }
    Ok(total / trials as f64 / baseline)
}

fn combined_factor_for(scenario: &ScenarioConfig, calibration: &Calibration) -> Result<f64> {
    let source = scenario.source();
    let gain =
        crate::acoustics::resonance_gain(source.frequency_hz, &calibration.acoustics.resonance);
    let angle =
        crate::acoustics::angle_factor(source.orientation_deg, &calibration.acoustics.angle_table)?;
    let position = calibration.position_factor(&scenario.propagation.position)?;
    Ok(gain * angle * position)
}

fn benchmark(scenario: &ScenarioConfig, calibration: &Calibration) -> Result<RunArtifacts> {
    let output = run_simulation(scenario, calibration, true, "benchmark")?;
    let mut artifacts = RunArtifacts::default();
    sim_files(&mut artifacts, &output, "");
    artifacts.summary.extend(output.summary.clone());
    artifacts.add_plot(
        "metrics.csv",
        PlotSpec {
            title: "Array throughput".to_string(),
            xlabel: "time (s)".to_string(),
            ylabel: "MB/s".to_string(),
            x_col: "t_s".to_string(),
            y_cols: vec!["value".to_string()],
            style: PlotStyle::Lines,
        },
    )?;
    let mean = output.trace.as_ref().map(|t| t.mean()).unwrap_or(0.0);
    artifacts.headline = format!("benchmark complete, mean throughput {mean:.1} MB/s");
    Ok(artifacts)
}

fn volume_curve(scenario: &ScenarioConfig, calibration: &Calibration) -> Result<RunArtifacts> {
    let ExperimentSpec::VolumeCurve {
        volumes_db,
        trials,
        duration_s,
    } = &scenario.experiment
    else {
        unreachable!()
    };
    let factor = combined_factor_for(scenario, calibration)?;
    let mut artifacts = RunArtifacts::default();
    let mut csv = String::from("volume_db,normalized_throughput\n");
    let mut rows = Vec::new();
    for volume in volumes_db {
        let normalized = trial_mean_normalized(
            scenario,
            calibration,
            *volume,
            factor,
            *duration_s,
            *trials,
            &format!("volume-curve/{volume}"),
        )?;
        csv.push_str(&format!("{volume:.1},{normalized:.6}\n"));
        rows.push((*volume, normalized));
    }
    artifacts.insert("volume_curve.csv", csv);
    artifacts.add_plot(
        "volume_curve.csv",
        PlotSpec {
            title: "Write throughput vs injection volume".to_string(),
            xlabel: "dB above noise floor".to_string(),
            ylabel: "normalized throughput".to_string(),
            x_col: "volume_db".to_string(),
            y_cols: vec!["normalized_throughput".to_string()],
            style: PlotStyle::Lines,
        },
    )?;
    for (volume, normalized) in &rows {
        artifacts.push_summary(
            format!("normalized_at_{volume}db"),
            format!("{normalized:.4}"),
        );
    }
    let first = rows
        .first()
        .map(|(v, n)| format!("{n:.2} at {v} dB"))
        .unwrap_or_default();
    let last = rows
        .last()
        .map(|(v, n)| format!("{n:.2} at {v} dB"))
        .unwrap_or_default();
    artifacts.headline = format!("volume curve: {first} down to {last}");
    Ok(artifacts)
}

fn sweep(scenario: &ScenarioConfig, calibration: &Calibration) -> Result<RunArtifacts> {
    let ExperimentSpec::Sweep {
        start_hz,
        end_hz,
        step_hz,
        trials,
        duration_s,
        flag_drop_fraction,
    } = &scenario.experiment
    else {
        unreachable!()
    };
    let source = scenario.source();
    let medium = scenario.medium();
    let delta_spl = source.amplitude_spl - medium.noise_floor_spl;
    let angle =
        crate::acoustics::angle_factor(source.orientation_deg, &calibration.acoustics.angle_table)?;
    let position = calibration.position_factor(&scenario.propagation.position)?;

    let mut artifacts = RunArtifacts::default();
    let mut csv = String::from("frequency_hz,normalized_throughput,flagged\n");
    let mut flagged: Vec<f64> = Vec::new();
    let mut frequency = *start_hz;
    while frequency <= *end_hz + 1e-9 {
        let gain = crate::acoustics::resonance_gain(frequency, &calibration.acoustics.resonance);
        let normalized = trial_mean_normalized(
            scenario,
            calibration,
            delta_spl,
            gain * angle * position,
            *duration_s,
            *trials,
            &format!("sweep/{frequency}"),
        )?;
        let is_flagged = (1.0 - normalized) > *flag_drop_fraction;
        if is_flagged {
            flagged.push(frequency);
        }
        csv.push_str(&format!(
            "{frequency:.0},{normalized:.6},{}\n",
            u8::from(is_flagged)
        ));
        frequency += step_hz;
    }
    artifacts.insert("sweep.csv", csv);
    artifacts.add_plot(
        "sweep.csv",
        PlotSpec {
            title: "Throughput vs injection frequency".to_string(),
            xlabel: "frequency (Hz)".to_string(),
            ylabel: "normalized throughput".to_string(),
            x_col: "frequency_hz".to_string(),
            y_cols: vec!["normalized_throughput".to_string()],
            style: PlotStyle::Lines,
        },
    )?;

    // Group flagged frequencies into contiguous bands for the summary.
    let mut bands: Vec<(f64, f64)> = Vec::new();
    for f in &flagged {
        match bands.last_mut() {
            Some((_, hi)) if *f - *hi <= *step_hz + 1e-9 => *hi = *f,
            _ => bands.push((*f, *f)),
        }
    }
    let band_text: Vec<String> = bands
        .iter()
        .map(|(lo, hi)| {
            if lo == hi {
                format!("{lo:.0}")
            } else {
                format!("{lo:.0}-{hi:.0}")
            }
        })
        .collect();
    artifacts.push_summary("flagged_band_count", bands.len());
    artifacts.push_summary("flagged_bands_hz", band_text.join(" "));
    artifacts.push_summary("flag_threshold_drop", flag_drop_fraction);
    artifacts.headline = format!(
        "sweep flagged {} bands: {}",
        bands.len(),
        band_text.join(", ")
    );
    Ok(artifacts)
}

fn positions(scenario: &ScenarioConfig, calibration: &Calibration) -> Result<RunArtifacts> {
    let ExperimentSpec::Positions {
        locations,
        volume_db,
        trials,
        duration_s,
    } = &scenario.experiment
    else {
        unreachable!()
    };
    let source = scenario.source();
    let gain =
        crate::acoustics::resonance_gain(source.frequency_hz, &calibration.acoustics.resonance);
    let angle =
        crate::acoustics::angle_factor(source.orientation_deg, &calibration.acoustics.angle_table)?;
    let mut artifacts = RunArtifacts::default();
    let mut csv = String::from("location,position_factor,normalized_throughput\n");
    for location in locations {
        let position = calibration.position_factor(location)?;
        let normalized = trial_mean_normalized(
            scenario,
            calibration,
            *volume_db,
            gain * angle * position,
            *duration_s,
            *trials,
            &format!("positions/{location}"),
        )?;
        csv.push_str(&format!("{location},{position:.2},{normalized:.6}\n"));
        artifacts.push_summary(format!("normalized_{location}"), format!("{normalized:.4}"));
    }
    artifacts.insert("positions.csv", csv);
    artifacts.add_plot(
        "positions.csv",
        PlotSpec {
            title: format!("Throughput by injection point at {volume_db} dB"),
            xlabel: "injection point".to_string(),
            ylabel: "normalized throughput".to_string(),
            x_col: "position_factor".to_string(),
            y_cols: vec!["normalized_throughput".to_string()],
            style: PlotStyle::Points,
        },
    )?;
    artifacts.headline = format!(
        "positions run at {volume_db} dB over {} locations",
        locations.len()
    );
    Ok(artifacts)
}

fn angle(scenario: &ScenarioConfig, calibration: &Calibration) -> Result<RunArtifacts> {
    let ExperimentSpec::Angle {
        angles_deg,
        volume_db,
        trials,
        duration_s,
    } = &scenario.experiment
    else {
        unreachable!()
    };
    let source = scenario.source();
    let gain =
        crate::acoustics::resonance_gain(source.frequency_hz, &calibration.acoustics.resonance);
    let position = calibration.position_factor(&scenario.propagation.position)?;
    let mut artifacts = RunArtifacts::default();
    let mut csv = String::from("angle_deg,angle_factor,normalized_throughput\n");
    for angle_deg in angles_deg {
        let factor =
            crate::acoustics::angle_factor(*angle_deg, &calibration.acoustics.angle_table)?;
        let normalized = trial_mean_normalized(
            scenario,
            calibration,
            *volume_db,
            gain * factor * position,
            *duration_s,
            *trials,
            &format!("angle/{angle_deg}"),
        )?;
        csv.push_str(&format!("{angle_deg:.0},{factor:.2},{normalized:.6}\n"));
        artifacts.push_summary(
            format!("normalized_at_{angle_deg}deg"),
            format!("{normalized:.4}"),
        );
    }
    artifacts.insert("angle.csv", csv);
    artifacts.add_plot(
        "angle.csv",
        PlotSpec {
            title: format!("Throughput by speaker orientation at {volume_db} dB"),
            xlabel: "angle (degrees)".to_string(),
            ylabel: "normalized throughput".to_string(),
            x_col: "angle_deg".to_string(),
            y_cols: vec!["normalized_throughput".to_string()],
            style: PlotStyle::Points,
        },
    )?;
    artifacts.headline = format!("angle run over {:?} degrees", angles_deg);
    Ok(artifacts)
}

fn hdfs_cascade(scenario: &ScenarioConfig, calibration: &Calibration) -> Result<RunArtifacts> {
    let output = run_simulation(scenario, calibration, true, "hdfs")?;
    let mut artifacts = RunArtifacts::default();
    sim_files(&mut artifacts, &output, "");

    // Condensed cascade: node transitions and member drops in time order.
    let mut sequence: Vec<String> = Vec::new();
    for event in &output.events {
        let tag = if event.kind == "node-event" {
            event.detail.split_whitespace().last().map(str::to_string)
        } else if event.kind == "raid-event" && event.detail.ends_with("dropped") {
            Some("drop".to_string())
        } else {
            None
        };
        if let Some(tag) = tag {
            sequence.push(format!("{}@{:.0}s", tag, event.t_s));
            artifacts.push_summary(
                format!("t_{}_{}", sequence.len(), tag),
                format!("{:.0}", event.t_s),
            );
        }
    }
    artifacts.push_summary("cascade", sequence.join(" -> "));
    artifacts.summary.extend(output.summary.clone());
    artifacts.add_plot(
        "metrics.csv",
        PlotSpec {
            title: "Array throughput during the cascade".to_string(),
            xlabel: "time (s)".to_string(),
            ylabel: "MB/s".to_string(),
            x_col: "t_s".to_string(),
            y_cols: vec!["value".to_string()],
            style: PlotStyle::Lines,
        },
    )?;
    artifacts.headline = format!("cascade: {}", sequence.join(" -> "));
    Ok(artifacts)
}

fn db_latency(scenario: &ScenarioConfig, calibration: &Calibration) -> Result<RunArtifacts> {
    let ExperimentSpec::DbLatency {
        node_splits,
        volumes_db,
    } = &scenario.experiment
    else {
        unreachable!()
    };
    let mut artifacts = RunArtifacts::default();
    let mut csv = String::from("underwater_nodes,volume_db,normalized_latency,out_of_service\n");
    let mut peak: (f64, u32, f64) = (0.0, 0, 0.0);
    for split in node_splits {
        let cluster = DbCluster {
            total_nodes: 10,
            underwater_node_count: *split,
        };
        for volume in volumes_db {
            match db_normalized_latency(&calibration.db_latency, &cluster, *volume)? {
                DbLatency::Normalized(latency) => {
                    csv.push_str(&format!("{split},{volume:.1},{latency:.4},0\n"));
                    if latency > peak.0 {
                        peak = (latency, *split, *volume);
                    }
                }
                DbLatency::OutOfService => {
                    csv.push_str(&format!("{split},{volume:.1},,1\n"));
                }
            }
        }
    }
    artifacts.insert("db_latency.csv", csv);
    artifacts.add_plot(
        "db_latency.csv",
        PlotSpec {
            title: "Normalized database latency vs volume".to_string(),
            xlabel: "dB above noise floor".to_string(),
            ylabel: "normalized latency".to_string(),
            x_col: "volume_db".to_string(),
            y_cols: vec!["normalized_latency".to_string()],
            style: PlotStyle::Points,
        },
    )?;
    artifacts.push_summary("peak_normalized_latency", format!("{:.3}", peak.0));
    artifacts.push_summary("peak_config_underwater_nodes", peak.1);
    artifacts.push_summary("peak_volume_db", peak.2);
    artifacts.headline = format!(
        "db latency peaks at {:.3}x ({} underwater nodes, {} dB)",
        peak.0, peak.1, peak.2
    );
    Ok(artifacts)
}

/// Attack run against a no-attack baseline with the same seed.
fn vm_migration(scenario: &ScenarioConfig, calibration: &Calibration) -> Result<RunArtifacts> {
    let attack = run_simulation(scenario, calibration, true, "vm/attack")?;
    let baseline = run_simulation(scenario, calibration, false, "vm/baseline")?;
    let mut artifacts = RunArtifacts::default();
    sim_files(&mut artifacts, &attack, "_attack");
    sim_files(&mut artifacts, &baseline, "_baseline");

    let find = |output: &SimOutput, key: &str| -> f64 {
        output
            .summary
            .iter()
            .find(|(k, _)| k == key)
            .and_then(|(_, v)| v.parse::<f64>().ok())
            .unwrap_or(0.0)
    };
    let under_attack = find(&attack, "vms_assigned_underwater");
    let under_baseline = find(&baseline, "vms_assigned_underwater");
    let share_drop = if under_baseline > 0.0 {
        1.0 - under_attack / under_baseline
    } else {
        0.0
    };
    let blocked = find(&attack, "vms_blocked");
    let unresolved = find(&attack, "underwater_vms_unresolved");

    for (key, value) in &attack.summary {
        artifacts.push_summary(format!("attack_{key}"), value);
    }
    for (key, value) in &baseline.summary {
        artifacts.push_summary(format!("baseline_{key}"), value);
    }
    artifacts.push_summary("underwater_share_drop", format!("{share_drop:.4}"));
    artifacts.push_summary("vms_blocked_final", format!("{blocked:.0}"));
    artifacts.push_summary("underwater_vms_unresolved", format!("{unresolved:.0}"));
    artifacts.add_plot(
        "metrics_attack.csv",
        PlotSpec {
            title: "VM assignments under attack".to_string(),
            xlabel: "time (s)".to_string(),
            ylabel: "count / MB/s".to_string(),
            x_col: "t_s".to_string(),
            y_cols: vec!["value".to_string()],
            style: PlotStyle::Lines,
        },
    )?;
    artifacts.headline = format!(
        "underwater share dropped {:.0}% ({} -> {} VMs), {} blocked",
        share_drop * 100.0,
        under_baseline,
        under_attack,
        blocked
    );
    Ok(artifacts)
}

fn snia_replay(scenario: &ScenarioConfig, calibration: &Calibration) -> Result<RunArtifacts> {
    let ExperimentSpec::SniaReplay {
        trace_path,
        request_limit,
        volumes_db,
        wall_limit_s,
        time_compression,
        synthetic_requests,
        synthetic_mean_iat_s,
        synthetic_mean_size_kb,
    } = &scenario.experiment
    else {
        unreachable!()
    };
    let mut artifacts = RunArtifacts::default();
    let requests = match trace_path {
        Some(path) => {
            let trace = load_msr_trace(Path::new(path), Some(*request_limit))?;
            for warning in &trace.warnings {
                artifacts.push_summary("warning", warning);
            }
            trace.requests
        }
        None => {
            let mut rng = derive_rng(scenario.seed, "snia/synthetic-trace");
            synthetic_trace(
                *synthetic_requests,
                *synthetic_mean_iat_s,
                *synthetic_mean_size_kb,
                1.0,
                &mut rng,
            )
        }
    };
    artifacts.push_summary("requests", requests.len());

    let factor = combined_factor_for(scenario, calibration)?;
    let passive = scenario.propagation.passive_attenuation_db;
    let models = scenario
        .storage
        .build_models(calibration, WorkloadKind::SeqWrite, scenario.seed);
    let mut csv = String::from("volume_db,fulfilled,total,aborted\n");
    for volume in volumes_db {
        let mut array = Raid5Array::new(
            models.len(),
            scenario.storage.drop_timeout_s,
            scenario.storage.degraded_drop_timeout_s,
        )?;
        let mut states = vec![DiskState::new(); models.len()];
        let mut target = StorageTarget {
            array: &mut array,
            states: &mut states,
            models: &models,
        };
        let excitation = move |_t: f64| EffectiveExcitation {
            delta_spl: *volume - passive,
            displacement_nm: 0.0,
            combined_factor: factor,
        };
        let outcome = replay_trace(
            &requests,
            &mut target,
            &excitation,
            *wall_limit_s,
            *time_compression,
        )?;
        csv.push_str(&format!(
            "{volume:.1},{},{},{}\n",
            outcome.fulfilled,
            outcome.total,
            u8::from(outcome.aborted)
        ));
        artifacts.push_summary(format!("fulfilled_at_{volume}db"), outcome.fulfilled);
        if outcome.aborted {
            artifacts.push_summary(format!("array_failed_at_{volume}db"), "true");
        }
    }
    artifacts.insert("snia_replay.csv", csv);
    artifacts.add_plot(
        "snia_replay.csv",
        PlotSpec {
            title: "Fulfilled requests vs injection volume".to_string(),
            xlabel: "dB above noise floor".to_string(),
            ylabel: "fulfilled requests".to_string(),
            x_col: "volume_db".to_string(),
            y_cols: vec!["fulfilled".to_string()],
            style: PlotStyle::Lines,
        },
    )?;
    artifacts.headline = format!(
        "replay of {} requests over {} volumes",
        requests.len(),
        volumes_db.len()
    );
    Ok(artifacts)
}

fn cache_bench(scenario: &ScenarioConfig, calibration: &Calibration) -> Result<RunArtifacts> {
    let ExperimentSpec::CacheBench {
        cache_sizes_gb,
        workloads,
        samples_per_cell,
        volume_db,
    } = &scenario.experiment
    else {
        unreachable!()
    };
    let mut artifacts = RunArtifacts::default();
    let mut csv = String::from(
        "workload,cache_size_gb,attacked,samples,hit_ratio_configured,hit_ratio_observed,latency_min_ms,latency_mean_ms,latency_max_ms\n",
    );
    let mut cdf = String::from("workload,cache_size_gb,attacked,percentile,latency_ms\n");
    for workload in workloads {
        for size in cache_sizes_gb {
            for attacked in [false, true] {
                let mut rng = derive_rng(
                    scenario.seed,
                    &format!("cache/{}/{size}/{attacked}", workload.label()),
                );
                let configured = calibration.cache.hit_ratio(*workload, *size)?;
                let mut latencies = Vec::with_capacity(*samples_per_cell);
                let mut hits = 0usize;
                for _ in 0..*samples_per_cell {
                    let (hit, latency) = cache_serve_with_outcome(
                        &calibration.cache,
                        *workload,
                        *size,
                        attacked,
                        &mut rng,
                    )?;
                    if hit {
                        hits += 1;
                    }
                    latencies.push(latency);
                }
                latencies.sort_by(f64::total_cmp);
                let observed = hits as f64 / *samples_per_cell as f64;
                let min = latencies.first().copied().unwrap_or(0.0);
                let max = latencies.last().copied().unwrap_or(0.0);
                let mean: f64 = latencies.iter().sum::<f64>() / latencies.len() as f64;
                csv.push_str(&format!(
                    "{},{size:.1},{},{samples_per_cell},{configured:.3},{observed:.4},{min:.3},{mean:.3},{max:.3}\n",
                    workload.label(),
                    u8::from(attacked),
                ));
                for pct in (0..=100).step_by(5) {
                    let idx =
                        ((pct as f64 / 100.0) * (latencies.len() - 1) as f64).round() as usize;
                    cdf.push_str(&format!(
                        "{},{size:.1},{},{pct},{:.3}\n",
                        workload.label(),
                        u8::from(attacked),
                        latencies[idx]
                    ));
                }
                artifacts.push_summary(
                    format!(
                        "{}_{}gb_{}_mean_ms",
                        workload.label(),
                        size,
                        if attacked { "attacked" } else { "benign" }
                    ),
                    format!("{mean:.1}"),
                );
            }
        }
    }
    artifacts.insert("cache_bench.csv", csv);
    artifacts.insert("cache_latency_cdf.csv", cdf);
    artifacts.add_plot(
        "cache_latency_cdf.csv",
        PlotSpec {
            title: format!("Access latency CDF at {volume_db} dB"),
            xlabel: "latency (ms)".to_string(),
            ylabel: "percentile".to_string(),
            x_col: "latency_ms".to_string(),
            y_cols: vec!["percentile".to_string()],
            style: PlotStyle::Steps,
        },
    )?;
    artifacts.headline = format!(
        "cache bench over {} sizes x {} workloads, {} samples each",
        cache_sizes_gb.len(),
        workloads.len(),
        samples_per_cell
    );
    Ok(artifacts)
}

fn fem_attenuation(scenario: &ScenarioConfig) -> Result<RunArtifacts> {
    let ExperimentSpec::FemAttenuation {
        base_displacement_nm,
        alpha_np_per_km,
        distances_m,
    } = &scenario.experiment
    else {
        unreachable!()
    };
    let alpha_np_per_m = alpha_np_per_km / 1000.0;
    let mut artifacts = RunArtifacts::default();
    let mut csv = String::from("distance_m,displacement_nm\n");
    for distance in distances_m {
        let displacement = attenuate_amplitude(*base_displacement_nm, alpha_np_per_m, *distance);
        csv.push_str(&format!("{distance:.1},{displacement:.4}\n"));
        artifacts.push_summary(
            format!("displacement_at_{distance}m_nm"),
            format!("{displacement:.4}"),
        );
    }
    artifacts.insert("fem_attenuation.csv", csv);
    artifacts.add_plot(
        "fem_attenuation.csv",
        PlotSpec {
            title: "Induced displacement vs distance".to_string(),
            xlabel: "distance (m)".to_string(),
            ylabel: "displacement (nm)".to_string(),
            x_col: "distance_m".to_string(),
            y_cols: vec!["displacement_nm".to_string()],
            style: PlotStyle::Lines,
        },
    )?;
    let at_km = attenuate_amplitude(*base_displacement_nm, alpha_np_per_m, 1000.0);
    artifacts.headline =
        format!("displacement {base_displacement_nm} nm at source, {at_km:.1} nm at 1 km");
    Ok(artifacts)
}

/// Simulates one disk in isolation (its own partition, no array coupling).
fn synth_disk_trace(
    scenario: &ScenarioConfig,
    calibration: &Calibration,
    disk_index: usize,
    delta_spl: f64,
    combined_factor: f64,
    duration_s: f64,
    stream: &str,
) -> ThroughputTrace {
    let models = scenario
        .storage
        .build_models(calibration, WorkloadKind::SeqWrite, scenario.seed);
    let model = &models[disk_index];
    let mut rng = derive_rng(scenario.seed, stream);
    let sigma = scenario.storage.noise_sigma_frac;
    let mut trace = ThroughputTrace::new(model.id.clone(), 1.0);
    let multiplier = crate::storage::degradation_multiplier(
        (delta_spl + model.excitation_offset_db).max(0.0),
        &model.degradation_curve,
        combined_factor,
    );
    for tick in 0..duration_s.ceil() as usize {
        let noise: f64 = rng.random_range(-1.0..1.0) * sigma * model.baseline_throughput_mb_s;
        let value = (model.baseline_throughput_mb_s * multiplier + noise).max(0.0);
        trace.push(tick as f64, value);
    }
    trace
}

fn detect_profile(scenario: &ScenarioConfig, calibration: &Calibration) -> Result<RunArtifacts> {
    let ExperimentSpec::DetectProfile { trials, duration_s } = &scenario.experiment else {
        unreachable!()
    };
    let mut artifacts = RunArtifacts::default();
    let mut traces_by_disk = Vec::new();
    for (idx, disk) in scenario.storage.disks.iter().enumerate() {
        let traces: Vec<ThroughputTrace> = (0..*trials)
            .map(|trial| {
                synth_disk_trace(
                    scenario,
                    calibration,
                    idx,
                    0.0,
                    0.0,
                    *duration_s,
                    &format!("profile/{idx}/{trial}"),
                )
            })
            .collect();
        traces_by_disk.push((disk.id.clone(), traces));
    }
    for (rel, content) in profile_store_files(&traces_by_disk)? {
        artifacts.insert(format!("profiles/{rel}"), content);
    }
    // The calibrated profiling workload; other workloads build profiles too
    // but their detection rates are not calibrated.
    artifacts.push_summary("profiling_workload", "seq_write");
    let pcm = DetectorConfig::default().pcm;
    for (disk_id, traces) in &traces_by_disk {
        let profile = profile_disk(disk_id, traces, &pcm)?;
        let mean_distance: f64 = profile.calibration_distances.iter().sum::<f64>()
            / profile.calibration_distances.len() as f64;
        artifacts.push_summary(format!("{disk_id}_trials"), traces.len());
        artifacts.push_summary(
            format!("{disk_id}_mean_benign_distance"),
            format!("{mean_distance:.4}"),
        );
    }
    artifacts.headline = format!(
        "profiled {} disks with {} trials each",
        traces_by_disk.len(),
        trials
    );
    Ok(artifacts)
}

/// Builds profiles and pools, then evaluates alarm accuracy per volume.
pub fn detect_eval_summaries(
    scenario: &ScenarioConfig,
    calibration: &Calibration,
) -> Result<Vec<(f64, crate::detector::EvalSummary)>> {
    let ExperimentSpec::DetectEval {
        volumes_db,
        combinations,
        benign_trials,
        attacked_trials,
        duration_s,
    } = &scenario.experiment
    else {
        return Err(Error::validation(
            "scenario does not declare a detect_eval experiment",
        ));
    };
    let cfg = DetectorConfig::default();
    let disk_count = scenario.storage.disks.len();

    let profiles: Vec<DiskProfile> = (0..disk_count)
        .map(|idx| {
            let traces: Vec<ThroughputTrace> = (0..*benign_trials)
                .map(|trial| {
                    synth_disk_trace(
                        scenario,
                        calibration,
                        idx,
                        0.0,
                        0.0,
                        *duration_s,
                        &format!("eval-profile/{idx}/{trial}"),
                    )
                })
                .collect();
            profile_disk(&scenario.storage.disks[idx].id, &traces, &cfg.pcm)
        })
        .collect::<Result<_>>()?;

    let benign_pools: Vec<Vec<ThroughputTrace>> = (0..disk_count)
        .map(|idx| {
            (0..*benign_trials)
                .map(|trial| {
                    synth_disk_trace(
                        scenario,
                        calibration,
                        idx,
                        0.0,
                        0.0,
                        *duration_s,
                        &format!("eval-benign/{idx}/{trial}"),
                    )
                })
                .collect()
        })
        .collect();

    let mut results = Vec::new();
    for volume in volumes_db {
        let attacked_pools: Vec<Vec<ThroughputTrace>> = (0..disk_count)
            .map(|idx| {
                (0..*attacked_trials)
                    .map(|trial| {
                        synth_disk_trace(
                            scenario,
                            calibration,
                            idx,
                            *volume,
                            1.0,
                            *duration_s,
                            &format!("eval-attacked/{volume}/{idx}/{trial}"),
                        )
                    })
                    .collect()
            })
            .collect();
        let summary = evaluate(
            &profiles,
            &benign_pools,
            &attacked_pools,
            *combinations,
            &cfg,
            scenario.seed ^ (volume.to_bits()),
        )?;
        results.push((*volume, summary));
    }
    Ok(results)
}

fn detect_eval(scenario: &ScenarioConfig, calibration: &Calibration) -> Result<RunArtifacts> {
    let results = detect_eval_summaries(scenario, calibration)?;
    let mut artifacts = RunArtifacts::default();
    let mut csv = String::from("volume_db,combinations,fpr,tpr,fpr_any_rule,tpr_any_rule\n");
    let fmt = |x: Option<f64>| x.map(|v| format!("{v:.4}")).unwrap_or_default();
    for (volume, summary) in &results {
        csv.push_str(&format!(
            "{volume:.1},{},{},{},{},{}\n",
            summary.combinations,
            fmt(summary.fpr),
            fmt(summary.tpr),
            fmt(summary.fpr_any),
            fmt(summary.tpr_any),
        ));
        artifacts.push_summary(format!("fpr_at_{volume}db"), fmt(summary.fpr));
        artifacts.push_summary(format!("tpr_at_{volume}db"), fmt(summary.tpr));
    }
    artifacts.insert("detect_eval.csv", csv);
    artifacts.add_plot(
        "detect_eval.csv",
        PlotSpec {
            title: "Detector accuracy vs volume".to_string(),
            xlabel: "dB above noise floor".to_string(),
            ylabel: "rate".to_string(),
            x_col: "volume_db".to_string(),
            y_cols: vec!["fpr".to_string(), "tpr".to_string()],
            style: PlotStyle::Points,
        },
    )?;
    let worst_fpr = results
        .iter()
        .filter_map(|(_, s)| s.fpr)
        .fold(0.0f64, f64::max);
    let worst_tpr = results
        .iter()
        .filter_map(|(_, s)| s.tpr)
        .fold(1.0f64, f64::min);
    artifacts.push_summary("worst_fpr", format!("{worst_fpr:.4}"));
    artifacts.push_summary("worst_tpr", format!("{worst_tpr:.4}"));
    artifacts.headline = format!("detector: worst FPR {worst_fpr:.3}, worst TPR {worst_tpr:.3}");
    Ok(artifacts)
}
