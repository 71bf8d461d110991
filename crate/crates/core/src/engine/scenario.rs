//! Declarative experiment descriptions, loadable from TOML.
//!
//! Validation is exhaustive: every problem in a scenario file is reported in
//! one pass before any simulation starts.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::acoustics::{AcousticSource, Medium, VolumeSchedule};
use crate::calibration::{Calibration, CurveVariant};
use crate::engine::derive_rng;
use crate::error::{Error, Result};
use crate::storage::{DegradationCurve, DiskKind, DiskModel};
use crate::workload::WorkloadKind;
use rand::Rng;

fn default_sample_period() -> f64 {
    1.0
}

fn default_noise_sigma() -> f64 {
    0.03
}

fn default_drop_timeout() -> f64 {
    108.0
}

fn default_degraded_drop_timeout() -> f64 {
    648.0
}

fn default_threshold_jitter() -> f64 {
    1.0
}

fn default_baseline_mb_s() -> f64 {
    190.0
}

fn default_unresponsive_threshold() -> f64 {
    36.0
}

fn default_unresponsive_dwell() -> f64 {
    60.0
}

fn default_synth_iat() -> f64 {
    0.003
}

fn default_synth_size() -> f64 {
    560.0
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PropagationSpec {
    /// "analytic" uses the medium's attenuation coefficient; the empirical
    /// variants interpolate the measured SPL-distance curves.
    #[serde(default)]
    pub mode: PropagationMode,
    #[serde(default)]
    pub distance_m: f64,
    /// Injection-point key into the calibration position-factor table.
    #[serde(default = "default_position")]
    pub position: String,
    /// Fixed SPL knocked off by absorptive material wrapped around the
    /// enclosure. An attacker can overpower it by raising the volume.
    #[serde(default)]
    pub passive_attenuation_db: f64,
}

fn default_position() -> String {
    "location1".to_string()
}

impl Default for PropagationSpec {
    fn default() -> Self {
        PropagationSpec {
            mode: PropagationMode::Analytic,
            distance_m: 0.0,
            position: default_position(),
            passive_attenuation_db: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum PropagationMode {
    #[default]
    Analytic,
    EmpiricalLab,
    EmpiricalOpenWater,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiskSpec {
    pub id: String,
    #[serde(default = "default_disk_kind")]
    pub kind: DiskKind,
    #[serde(default = "default_baseline_mb_s")]
    pub baseline_throughput_mb_s: f64,
    /// Explicit threshold; when absent the storage default applies with
    /// seeded per-disk jitter.
    #[serde(default)]
    pub unresponsive_threshold_db: Option<f64>,
    #[serde(default)]
    pub unresponsive_dwell_s: Option<f64>,
    #[serde(default)]
    pub permanent_damage_rate: Option<f64>,
    /// Coupling offset of this disk's bay, dB.
    #[serde(default)]
    pub excitation_offset_db: f64,
}

fn default_disk_kind() -> DiskKind {
    DiskKind::Mechanical
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StorageSpec {
    #[serde(default)]
    pub calibration_curve: CurveVariant,
    #[serde(default = "default_drop_timeout")]
    pub drop_timeout_s: f64,
    #[serde(default = "default_degraded_drop_timeout")]
    pub degraded_drop_timeout_s: f64,
    /// Uniform ±jitter applied to defaulted unresponsiveness thresholds,
    /// seeded per disk.
    #[serde(default = "default_threshold_jitter")]
    pub threshold_jitter_db: f64,
    #[serde(default = "default_unresponsive_threshold")]
    pub unresponsive_threshold_db: f64,
    #[serde(default = "default_unresponsive_dwell")]
    pub unresponsive_dwell_s: f64,
    #[serde(default = "default_noise_sigma")]
    pub noise_sigma_frac: f64,
    #[serde(default = "default_disks")]
    pub disks: Vec<DiskSpec>,
}

fn default_disks() -> Vec<DiskSpec> {
    StorageSpec::default().disks
}

impl Default for StorageSpec {
    fn default() -> Self {
        StorageSpec {
            calibration_curve: CurveVariant::Lab,
            drop_timeout_s: default_drop_timeout(),
            degraded_drop_timeout_s: default_degraded_drop_timeout(),
            threshold_jitter_db: default_threshold_jitter(),
            unresponsive_threshold_db: default_unresponsive_threshold(),
            unresponsive_dwell_s: default_unresponsive_dwell(),
            noise_sigma_frac: default_noise_sigma(),
            disks: (1..=4)
                .map(|i| DiskSpec {
                    id: format!("hdd{i}"),
                    kind: DiskKind::Mechanical,
                    baseline_throughput_mb_s: default_baseline_mb_s(),
                    unresponsive_threshold_db: None,
                    unresponsive_dwell_s: None,
                    permanent_damage_rate: None,
                    excitation_offset_db: 0.0,
                })
                .collect(),
        }
    }
}

impl StorageSpec {
    /// Materializes disk models, drawing jittered thresholds for disks that
    /// did not pin one explicitly.
    pub fn build_models(
        &self,
        calibration: &Calibration,
        workload: WorkloadKind,
        seed: u64,
    ) -> Vec<DiskModel> {
        let write_curve = calibration.degradation(self.calibration_curve).clone();
        let curve = if workload.is_write() {
            write_curve
        } else {
            calibration
                .storage
                .degradation_read
                .clone()
                .unwrap_or(write_curve)
        };
        self.disks
            .iter()
            .enumerate()
            .map(|(idx, spec)| {
                let threshold = spec.unresponsive_threshold_db.unwrap_or_else(|| {
                    let mut rng = derive_rng(seed, &format!("disk-threshold/{idx}"));
                    let jitter = if self.threshold_jitter_db > 0.0 {
                        rng.random_range(-self.threshold_jitter_db..self.threshold_jitter_db)
                    } else {
                        0.0
                    };
                    self.unresponsive_threshold_db + jitter
                });
                DiskModel {
                    id: spec.id.clone(),
                    kind: spec.kind,
                    baseline_throughput_mb_s: spec.baseline_throughput_mb_s,
                    degradation_curve: if spec.kind == DiskKind::SolidState {
                        DegradationCurve::identity()
                    } else {
                        curve.clone()
                    },
                    unresponsive_threshold_db: threshold,
                    unresponsive_dwell_s: spec
                        .unresponsive_dwell_s
                        .unwrap_or(self.unresponsive_dwell_s),
                    permanent_damage_rate: spec.permanent_damage_rate.unwrap_or(0.0),
                    excitation_offset_db: spec.excitation_offset_db,
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ExperimentSpec {
    /// A single fixed-duration benchmark run through the engine.
    Benchmark {
        workload: WorkloadKind,
        duration_s: f64,
    },
    /// Throughput vs injection volume: per-volume trial averages.
    VolumeCurve {
        volumes_db: Vec<f64>,
        trials: usize,
        duration_s: f64,
    },
    /// Frequency sweep at constant volume; flags frequencies whose average
    /// drop exceeds `flag_drop_fraction`.
    Sweep {
        start_hz: f64,
        end_hz: f64,
        step_hz: f64,
        trials: usize,
        duration_s: f64,
        flag_drop_fraction: f64,
    },
    /// Throughput by injection point around the enclosure.
    Positions {
        locations: Vec<String>,
        volume_db: f64,
        trials: usize,
        duration_s: f64,
    },
    /// Throughput by speaker orientation.
    Angle {
        angles_deg: Vec<f64>,
        volume_db: f64,
        trials: usize,
        duration_s: f64,
    },
    /// Storage + heartbeat cascade: blocked, member drops, node removal.
    HdfsCascade {},
    /// Normalized database latency over volumes and node splits.
    DbLatency {
        node_splits: Vec<u32>,
        volumes_db: Vec<f64>,
    },
    /// Load-balancer manipulation: VM placement shares under a rising
    /// volume schedule, against a baseline run without the attack.
    VmMigration {
        vm_count: usize,
        arrival_period_s: f64,
        base_prolog_s: f64,
        base_boot_s: f64,
        base_running_s: f64,
        /// Per-VM runtime jitter as a fraction of the base.
        runtime_jitter_frac: f64,
        monitor_period_s: f64,
        host_capacity: f64,
    },
    /// Block-trace replay over volumes; fulfilled-request counts.
    SniaReplay {
        /// MSR-format trace file; a seeded synthetic trace is generated
        /// when absent.
        trace_path: Option<String>,
        request_limit: usize,
        volumes_db: Vec<f64>,
        wall_limit_s: f64,
        time_compression: f64,
        synthetic_requests: usize,
        #[serde(default = "default_synth_iat")]
        synthetic_mean_iat_s: f64,
        #[serde(default = "default_synth_size")]
        synthetic_mean_size_kb: f64,
    },
    /// Write-back cache latency distributions per workload and cache size.
    CacheBench {
        cache_sizes_gb: Vec<f64>,
        workloads: Vec<WorkloadKind>,
        samples_per_cell: usize,
        volume_db: f64,
    },
    /// Analytic displacement-attenuation estimate over distance.
    FemAttenuation {
        base_displacement_nm: f64,
        alpha_np_per_km: f64,
        distances_m: Vec<f64>,
    },
    /// Builds a benign profile store from simulated profiling runs.
    DetectProfile { trials: usize, duration_s: f64 },
    /// Detector accuracy over seeded pools and random combinations.
    DetectEval {
        volumes_db: Vec<f64>,
        combinations: usize,
        benign_trials: usize,
        attacked_trials: usize,
        duration_s: f64,
    },
}

impl ExperimentSpec {
    pub fn kind_name(&self) -> &'static str {
        match self {
            ExperimentSpec::Benchmark { .. } => "benchmark",
            ExperimentSpec::VolumeCurve { .. } => "volume_curve",
            ExperimentSpec::Sweep { .. } => "sweep",
            ExperimentSpec::Positions { .. } => "positions",
            ExperimentSpec::Angle { .. } => "angle",
            ExperimentSpec::HdfsCascade {} => "hdfs_cascade",
            ExperimentSpec::DbLatency { .. } => "db_latency",
            ExperimentSpec::VmMigration { .. } => "vm_migration",
            ExperimentSpec::SniaReplay { .. } => "snia_replay",
            ExperimentSpec::CacheBench { .. } => "cache_bench",
            ExperimentSpec::FemAttenuation { .. } => "fem_attenuation",
            ExperimentSpec::DetectProfile { .. } => "detect_profile",
            ExperimentSpec::DetectEval { .. } => "detect_eval",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    pub seed: u64,
    pub horizon_s: f64,
    #[serde(default = "default_sample_period")]
    pub sample_period_s: f64,
    /// Calibration file this scenario was tuned against, relative to the
    /// scenario file. Command-line `--calibration` takes precedence.
    #[serde(default)]
    pub calibration: Option<String>,
    #[serde(default)]
    pub source: Option<AcousticSource>,
    #[serde(default)]
    pub medium: Option<Medium>,
    #[serde(default)]
    pub propagation: PropagationSpec,
    #[serde(default)]
    pub storage: StorageSpec,
    pub experiment: ExperimentSpec,
}

impl ScenarioConfig {
    pub fn from_toml(content: &str) -> Result<Self> {
        let scenario: ScenarioConfig =
            toml::from_str(content).map_err(|e| Error::config(format!("scenario: {e}")))?;
        Ok(scenario)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let content =
            fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
        let mut scenario = Self::from_toml(&content)?;
        // Rebase the calibration reference onto the scenario's directory so
        // the pair can move around together.
        if let (Some(reference), Some(parent)) = (&scenario.calibration, path.parent()) {
            if Path::new(reference).is_relative() {
                scenario.calibration = Some(parent.join(reference).to_string_lossy().into_owned());
            }
        }
        Ok(scenario)
    }

    pub fn medium(&self) -> Medium {
        self.medium.clone().unwrap_or(Medium {
            density: 998.0,
            sound_speed: 1481.0,
            attenuation_np_per_m: 1e-4,
            noise_floor_spl: 116.0,
            salinity: None,
            temperature_c: None,
        })
    }

    /// Source or a silent placeholder for experiments that set ΔSPL
    /// directly.
    pub fn source(&self) -> AcousticSource {
        self.source.clone().unwrap_or(AcousticSource {
            amplitude_spl: 0.0,
            frequency_hz: 5100.0,
            position: [0.0; 3],
            orientation_deg: 0.0,
            volume_schedule: VolumeSchedule::Constant,
            base_displacement_nm: 0.0,
        })
    }

    /// Collects every validation problem before reporting any.
    pub fn validate(&self, calibration: &Calibration) -> Result<()> {
        let mut problems: Vec<String> = Vec::new();

        if self.horizon_s <= 0.0 {
            problems.push("horizon_s must be positive".to_string());
        }
        if self.sample_period_s <= 0.0 {
            problems.push("sample_period_s must be positive".to_string());
        }
        if let Some(source) = &self.source {
            if let Err(e) = source.validate() {
                problems.push(e.to_string());
            }
        }
        if let Some(medium) = &self.medium {
            if let Err(e) = medium.validate() {
                problems.push(e.to_string());
            }
        }
        if self.propagation.distance_m < 0.0 {
            problems.push("propagation.distance_m must be non-negative".to_string());
        }
        if self.propagation.passive_attenuation_db < 0.0 {
            problems.push("propagation.passive_attenuation_db must be non-negative".to_string());
        }
        if let Err(e) = calibration.position_factor(&self.propagation.position) {
            problems.push(e.to_string());
        }
        if self.storage.noise_sigma_frac < 0.0 {
            problems.push("storage.noise_sigma_frac must be non-negative".to_string());
        }
        let needs_array = matches!(
            self.experiment,
            ExperimentSpec::Benchmark { .. }
                | ExperimentSpec::VolumeCurve { .. }
                | ExperimentSpec::Sweep { .. }
                | ExperimentSpec::Positions { .. }
                | ExperimentSpec::Angle { .. }
                | ExperimentSpec::HdfsCascade {}
                | ExperimentSpec::VmMigration { .. }
                | ExperimentSpec::SniaReplay { .. }
                | ExperimentSpec::DetectProfile { .. }
                | ExperimentSpec::DetectEval { .. }
        );
        if needs_array && self.storage.disks.len() < 3 {
            problems.push(format!(
                "experiment '{}' needs a RAID 5 array of at least 3 disks, got {}",
                self.experiment.kind_name(),
                self.storage.disks.len()
            ));
        }
        for disk in &self.storage.disks {
            if disk.baseline_throughput_mb_s <= 0.0 {
                problems.push(format!(
                    "disk {}: baseline throughput must be positive",
                    disk.id
                ));
            }
        }
        {
            let mut ids: Vec<&str> = self.storage.disks.iter().map(|d| d.id.as_str()).collect();
            ids.sort_unstable();
            ids.dedup();
            if ids.len() != self.storage.disks.len() {
                problems.push("disk ids must be unique".to_string());
            }
        }

        match &self.experiment {
            ExperimentSpec::Benchmark { duration_s, .. } => {
                if *duration_s <= 0.0 {
                    problems.push("benchmark duration_s must be positive".to_string());
                }
            }
            ExperimentSpec::VolumeCurve {
                volumes_db,
                trials,
                duration_s,
            } => {
                if volumes_db.is_empty() {
                    problems.push("volume_curve needs at least one volume".to_string());
                }
                if *trials == 0 {
                    problems.push("volume_curve trials must be positive".to_string());
                }
                if *duration_s <= 0.0 {
                    problems.push("volume_curve duration_s must be positive".to_string());
                }
            }
            ExperimentSpec::Sweep {
                start_hz,
                end_hz,
                step_hz,
                trials,
                flag_drop_fraction,
                ..
            } => {
                if *start_hz <= 0.0 || *end_hz <= *start_hz {
                    problems.push("sweep frequency range is empty".to_string());
                }
                if *step_hz <= 0.0 {
                    problems.push("sweep step_hz must be positive".to_string());
                }
                if *trials == 0 {
                    problems.push("sweep trials must be positive".to_string());
                }
                if !(0.0..1.0).contains(flag_drop_fraction) {
                    problems.push("sweep flag_drop_fraction must lie in [0, 1)".to_string());
                }
            }
            ExperimentSpec::Positions {
                locations, trials, ..
            } => {
                if locations.is_empty() {
                    problems.push("positions needs at least one location".to_string());
                }
                for location in locations {
                    if let Err(e) = calibration.position_factor(location) {
                        problems.push(e.to_string());
                    }
                }
                if *trials == 0 {
                    problems.push("positions trials must be positive".to_string());
                }
            }
            ExperimentSpec::Angle {
                angles_deg, trials, ..
            } => {
                if angles_deg.is_empty() {
                    problems.push("angle needs at least one angle".to_string());
                }
                if angles_deg.iter().any(|a| !(0.0..=180.0).contains(a)) {
                    problems.push("angles must lie in [0, 180] degrees".to_string());
                }
                if *trials == 0 {
                    problems.push("angle trials must be positive".to_string());
                }
            }
            ExperimentSpec::HdfsCascade {} => {}
            ExperimentSpec::DbLatency {
                node_splits,
                volumes_db,
            } => {
                if node_splits.is_empty() || volumes_db.is_empty() {
                    problems.push("db_latency needs node splits and volumes".to_string());
                }
                for split in node_splits {
                    if calibration.db_latency.table(*split).is_err() {
                        problems.push(format!("no latency table for {split} underwater nodes"));
                    }
                }
            }
            ExperimentSpec::VmMigration {
                vm_count,
                arrival_period_s,
                base_prolog_s,
                base_boot_s,
                base_running_s,
                runtime_jitter_frac,
                monitor_period_s,
                host_capacity,
            } => {
                if *vm_count == 0 {
                    problems.push("vm_migration vm_count must be positive".to_string());
                }
                for (value, what) in [
                    (*arrival_period_s, "arrival_period_s"),
                    (*base_prolog_s, "base_prolog_s"),
                    (*base_boot_s, "base_boot_s"),
                    (*base_running_s, "base_running_s"),
                    (*monitor_period_s, "monitor_period_s"),
                    (*host_capacity, "host_capacity"),
                ] {
                    if value <= 0.0 {
                        problems.push(format!("vm_migration {what} must be positive"));
                    }
                }
                if !(0.0..1.0).contains(runtime_jitter_frac) {
                    problems
                        .push("vm_migration runtime_jitter_frac must lie in [0, 1)".to_string());
                }
            }
            ExperimentSpec::SniaReplay {
                request_limit,
                volumes_db,
                wall_limit_s,
                time_compression,
                synthetic_requests,
                ..
            } => {
                if volumes_db.is_empty() {
                    problems.push("snia_replay needs at least one volume".to_string());
                }
                if *wall_limit_s <= 0.0 {
                    problems.push("snia_replay wall_limit_s must be positive".to_string());
                }
                if *time_compression <= 0.0 {
                    problems.push("snia_replay time_compression must be positive".to_string());
                }
                if *request_limit == 0 && *synthetic_requests == 0 {
                    problems.push("snia_replay needs a request budget".to_string());
                }
            }
            ExperimentSpec::CacheBench {
                cache_sizes_gb,
                workloads,
                samples_per_cell,
                volume_db,
            } => {
                if cache_sizes_gb.is_empty() || workloads.is_empty() {
                    problems.push("cache_bench needs cache sizes and workloads".to_string());
                }
                if *samples_per_cell == 0 {
                    problems.push("cache_bench samples_per_cell must be positive".to_string());
                }
                if *volume_db < 0.0 {
                    problems.push("cache_bench volume_db must be non-negative".to_string());
                }
                for size in cache_sizes_gb {
                    for workload in workloads {
                        if calibration.cache.hit_ratio(*workload, *size).is_err() {
                            problems.push(format!(
                                "no cache hit-ratio entry for {workload:?} at {size} GB"
                            ));
                        }
                    }
                }
            }
            ExperimentSpec::FemAttenuation {
                base_displacement_nm,
                alpha_np_per_km,
                distances_m,
            } => {
                if *base_displacement_nm <= 0.0 {
                    problems.push("fem_attenuation base displacement must be positive".to_string());
                }
                if *alpha_np_per_km < 0.0 {
                    problems.push("fem_attenuation alpha must be non-negative".to_string());
                }
                if distances_m.is_empty() {
                    problems.push("fem_attenuation needs at least one distance".to_string());
                }
            }
            ExperimentSpec::DetectProfile { trials, duration_s } => {
                if *trials < 2 {
                    problems.push("detect_profile needs at least two trials".to_string());
                }
                if *duration_s <= 0.0 {
                    problems.push("detect_profile duration_s must be positive".to_string());
                }
            }
            ExperimentSpec::DetectEval {
                volumes_db,
                combinations,
                benign_trials,
                attacked_trials,
                duration_s,
            } => {
                if volumes_db.is_empty() {
                    problems.push("detect_eval needs at least one volume".to_string());
                }
                if *combinations == 0 {
                    problems.push("detect_eval combinations must be positive".to_string());
                }
                if *benign_trials < 2 || *attacked_trials == 0 {
                    problems.push("detect_eval needs benign and attacked trials".to_string());
                }
                if *duration_s <= 0.0 {
                    problems.push("detect_eval duration_s must be positive".to_string());
                }
            }
        }

        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(problems.join("; ")))
        }
    }
}
