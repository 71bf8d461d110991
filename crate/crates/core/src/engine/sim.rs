//! The single-threaded event-loop simulation core for scenario kinds that
//! evolve state over time (benchmark runs, the heartbeat cascade, and VM
//! placement under a rising volume schedule).

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::acoustics::{
    angle_factor, attenuation_db, empirical_spl_at_distance, resonance_gain, AcousticSource,
    EffectiveExcitation, Medium,
};
use crate::calibration::{Calibration, CurveVariant};
use crate::distsys::{
    dfs_step, Host, Location, Node, NodeEvent, Scheduler, VirtualMachine, VmInflation, VmState,
};
use crate::engine::event::{EventKind, EventQueue};
use crate::engine::metrics::{LoggedEvent, MetricsLog};
use crate::engine::rng::derive_rng;
use crate::engine::scenario::{ExperimentSpec, PropagationMode, ScenarioConfig};
use crate::error::{Error, Result};
use crate::storage::{disk_step, DiskModel, DiskState, Raid5Array, RaidEvent, RaidStatus};
use crate::workload::{ThroughputTrace, WorkloadKind};

/// Everything one simulation run produces.
#[derive(Debug, Clone)]
pub struct SimOutput {
    pub metrics: MetricsLog,
    pub events: Vec<LoggedEvent>,
    pub summary: Vec<(String, String)>,
    pub trace: Option<ThroughputTrace>,
}

/// Precomputed excitation context: ΔSPL over time plus the combined
/// degradation factor, fixed for a run.
pub struct ExcitationModel {
    source: AcousticSource,
    medium: Medium,
    /// SPL arriving at the target before schedule offsets.
    spl_at_target: f64,
    /// Analytic displacement estimate at the target, when the source
    /// declares a reference displacement.
    displacement_nm: f64,
    combined_factor: f64,
    enabled: bool,
}

impl ExcitationModel {
    pub fn build(
        scenario: &ScenarioConfig,
        calibration: &Calibration,
        enabled: bool,
    ) -> Result<Self> {
        let source = scenario.source();
        let medium = scenario.medium();
        let prop = &scenario.propagation;
        let spl_at_target = match prop.mode {
            PropagationMode::Analytic => {
                source.amplitude_spl - attenuation_db(medium.attenuation_np_per_m, prop.distance_m)
            }
            PropagationMode::EmpiricalLab => empirical_spl_at_distance(
                calibration.spl_distance(CurveVariant::Lab),
                prop.distance_m,
            )?,
            PropagationMode::EmpiricalOpenWater => empirical_spl_at_distance(
                calibration.spl_distance(CurveVariant::OpenWater),
                prop.distance_m,
            )?,
        };
        if prop.passive_attenuation_db < 0.0 {
            return Err(Error::validation(
                "passive attenuation must be non-negative",
            ));
        }
        let gain = resonance_gain(source.frequency_hz, &calibration.acoustics.resonance);
        let angle = angle_factor(source.orientation_deg, &calibration.acoustics.angle_table)?;
        let position = calibration.position_factor(&prop.position)?;
        let displacement_nm = if source.base_displacement_nm > 0.0 {
            crate::acoustics::attenuate_amplitude(
                source.base_displacement_nm,
                medium.attenuation_np_per_m,
                prop.distance_m,
            )
        } else {
            0.0
        };
        Ok(ExcitationModel {
            source,
            medium,
            spl_at_target: spl_at_target - prop.passive_attenuation_db,
            displacement_nm,
            combined_factor: gain * angle * position,
            enabled,
        })
    }

    pub fn at(&self, t_s: f64) -> EffectiveExcitation {
        if !self.enabled {
            return EffectiveExcitation::quiet();
        }
        let spl = self.spl_at_target + self.source.volume_schedule.offset_db(t_s);
        EffectiveExcitation {
            delta_spl: spl - self.medium.noise_floor_spl,
            displacement_nm: self.displacement_nm,
            combined_factor: self.combined_factor,
        }
    }
}

const INIT_DURATION_S: f64 = 2.0;

struct SimVm {
    vm: VirtualMachine,
    remaining_s: f64,
    base_prolog_s: f64,
    base_boot_s: f64,
    base_running_s: f64,
}

struct VmWorld {
    scheduler: Scheduler,
    vms: Vec<SimVm>,
    inflation: VmInflation,
    monitor_period_s: f64,
}

struct Engine<'a> {
    scenario: &'a ScenarioConfig,
    excitation: ExcitationModel,
    array: Raid5Array,
    states: Vec<DiskState>,
    models: Vec<DiskModel>,
    node: Node,
    queue: EventQueue,
    metrics: MetricsLog,
    events: Vec<LoggedEvent>,
    sample_rng: ChaCha8Rng,
    trace: Option<ThroughputTrace>,
    vm_world: Option<VmWorld>,
    vm_rng: ChaCha8Rng,
}

impl Engine<'_> {
    fn log(&mut self, t_s: f64, kind: &'static str, detail: impl Into<String>) {
        self.events.push(LoggedEvent {
            t_s,
            kind,
            detail: detail.into(),
        });
    }

    fn observed_throughput(&mut self) -> f64 {
        let raw = self
            .array
            .write_throughput(&self.states, &self.models)
            .unwrap_or(0.0);
        if raw <= 0.0 {
            return 0.0;
        }
        let sigma = self.scenario.storage.noise_sigma_frac;
        if sigma == 0.0 {
            return raw;
        }
        let baseline = self
            .array
            .active_members()
            .map(|i| self.models[i].baseline_throughput_mb_s)
            .fold(f64::INFINITY, f64::min);
        let noise: f64 = rand_distr::Distribution::sample(
            &rand_distr::Normal::new(0.0, sigma * baseline).expect("finite sigma"),
            &mut self.sample_rng,
        );
        (raw + noise).max(0.0)
    }

    /// One integration step: disks, array, node, then VMs.
    fn integrate(&mut self, t_s: f64, dt_s: f64) {
        let excitation = self.excitation.at(t_s);
        for (state, model) in self.states.iter_mut().zip(self.models.iter()) {
            disk_step(state, model, &excitation, excitation.combined_factor, dt_s);
        }
        let raid_events = self.array.step(&self.states, dt_s);
        for event in &raid_events {
            let detail = match event {
                RaidEvent::MemberUnresponsive { member } => {
                    format!("member={} unresponsive", self.models[*member].id)
                }
                RaidEvent::MemberDropped { member } => {
                    format!("member={} dropped", self.models[*member].id)
                }
                RaidEvent::ArrayDegraded => "array degraded".to_string(),
                RaidEvent::ArrayFailed => "array failed".to_string(),
            };
            self.log(t_s, "raid-event", detail);
        }
        let node_events = dfs_step(&mut self.node, &self.array, &self.states);
        for event in &node_events {
            let detail = match event {
                NodeEvent::Blocked => format!("node={} blocked", self.node.id),
                NodeEvent::Live => format!("node={} live", self.node.id),
                NodeEvent::Removed => format!("node={} removed", self.node.id),
            };
            self.log(t_s, "node-event", detail);
        }
        self.step_vms(t_s, dt_s, &excitation);
    }

    fn step_vms(&mut self, t_s: f64, dt_s: f64, excitation: &EffectiveExcitation) {
        let Some(world) = &mut self.vm_world else {
            return;
        };
        let array_failed = self.array.status() == RaidStatus::Failed;
        let storage_flowing = !array_failed
            && self
                .array
                .write_throughput(&self.states, &self.models)
                .map(|t| t > 0.0)
                .unwrap_or(false);
        let delta = if excitation.combined_factor > 0.0 {
            excitation.delta_spl.max(0.0)
        } else {
            0.0
        };
        let factor_scale = excitation.combined_factor.clamp(0.0, 1.0);

        let mut completed: Vec<u32> = Vec::new();
        for sim_vm in &mut world.vms {
            let on_underwater = sim_vm.vm.host.as_deref() == Some("underwater");
            let state = sim_vm.vm.state;
            let rate = match state {
                VmState::Init | VmState::Boot => 1.0,
                VmState::Prolog | VmState::Running if !on_underwater => 1.0,
                VmState::Prolog => {
                    // Image transfer: stretched by the excitation but staged
                    // by the front end, so it never deadlocks outright.
                    let inflation = world.inflation.prolog_factor(delta);
                    1.0 / (1.0 + (inflation - 1.0) * factor_scale)
                }
                VmState::Running => {
                    if array_failed {
                        // Permanently blocked: storage is gone for good.
                        sim_vm.vm.transition(VmState::Blocked, t_s).expect("legal");
                        self.events.push(LoggedEvent {
                            t_s,
                            kind: "vm-event",
                            detail: format!("vm={} BLOCKED", sim_vm.vm.id),
                        });
                        continue;
                    }
                    if !storage_flowing {
                        0.0
                    } else {
                        let inflation = world.inflation.running_factor(delta);
                        1.0 / (1.0 + (inflation - 1.0) * factor_scale)
                    }
                }
                _ => 0.0,
            };
            if rate <= 0.0 {
                continue;
            }
            sim_vm.remaining_s -= rate * dt_s;
            if sim_vm.remaining_s > 1e-9 {
                continue;
            }
            let next = match sim_vm.vm.state {
                VmState::Init => Some((VmState::Prolog, sim_vm.base_prolog_s)),
                VmState::Prolog => Some((VmState::Boot, sim_vm.base_boot_s)),
                VmState::Boot => Some((VmState::Running, sim_vm.base_running_s)),
                VmState::Running => None,
                _ => continue,
            };
            match next {
                Some((state, duration)) => {
                    sim_vm.vm.transition(state, t_s).expect("legal");
                    sim_vm.remaining_s = duration;
                }
                None => {
                    sim_vm.vm.transition(VmState::Done, t_s).expect("legal");
                    completed.push(sim_vm.vm.id);
                    self.events.push(LoggedEvent {
                        t_s,
                        kind: "vm-event",
                        detail: format!("vm={} DONE", sim_vm.vm.id),
                    });
                }
            }
        }
        for vm in completed {
            world.scheduler.release(vm);
        }
    }

    fn handle_vm_arrival(&mut self, t_s: f64, vm_id: u32) {
        let jitter_frac = match &self.scenario.experiment {
            ExperimentSpec::VmMigration {
                runtime_jitter_frac,
                ..
            } => *runtime_jitter_frac,
            _ => 0.0,
        };
        let (base_prolog, base_boot, base_running) = match &self.scenario.experiment {
            ExperimentSpec::VmMigration {
                base_prolog_s,
                base_boot_s,
                base_running_s,
                ..
            } => (*base_prolog_s, *base_boot_s, *base_running_s),
            _ => (20.0, 10.0, 300.0),
        };
        let jitter = if jitter_frac > 0.0 {
            1.0 + self.vm_rng.random_range(-jitter_frac..jitter_frac)
        } else {
            1.0
        };
        let Some(world) = &mut self.vm_world else {
            return;
        };
        let mut vm = VirtualMachine::new(vm_id);
        vm.state_entered_s = t_s;
        match world.scheduler.place(vm_id) {
            Some(host) => {
                vm.host = Some(host.clone());
                self.events.push(LoggedEvent {
                    t_s,
                    kind: "vm-event",
                    detail: format!("vm={vm_id} assigned host={host}"),
                });
            }
            None => {
                self.events.push(LoggedEvent {
                    t_s,
                    kind: "vm-event",
                    detail: format!("vm={vm_id} queued"),
                });
            }
        }
        world.vms.push(SimVm {
            vm,
            remaining_s: INIT_DURATION_S,
            base_prolog_s: base_prolog,
            base_boot_s: base_boot,
            base_running_s: base_running * jitter,
        });
    }

    fn handle_monitor(&mut self, _t_s: f64) {
        let throughput = self.observed_throughput();
        let failed = self.array.status() == RaidStatus::Failed;
        let baseline = self
            .models
            .iter()
            .map(|m| m.baseline_throughput_mb_s)
            .fold(f64::INFINITY, f64::min);
        let Some(world) = &mut self.vm_world else {
            return;
        };
        let ratio = if baseline > 0.0 {
            (throughput / baseline).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let capacity = world
            .scheduler
            .hosts
            .iter()
            .find(|h| h.id == "underwater")
            .map(|h| h.nominal_capacity)
            .unwrap_or(0.0);
        world
            .scheduler
            .update_capacity("underwater", capacity * ratio, failed)
            .expect("underwater host exists");
    }

    fn sample(&mut self, t_s: f64) {
        let throughput = self.observed_throughput();
        self.metrics
            .push(
                t_s,
                "array_throughput_mb_s",
                throughput,
                format!("node={}", self.node.id),
            )
            .expect("time-ordered");
        if let Some(trace) = &mut self.trace {
            if !trace.aborted {
                if self.array.status() == RaidStatus::Failed {
                    trace.aborted = true;
                } else {
                    trace.push(t_s, throughput);
                }
            }
        }
        if let Some(world) = &self.vm_world {
            let under = world.scheduler.assigned_count("underwater") as f64;
            let land = world.scheduler.assigned_count("on_land") as f64;
            self.metrics
                .push(t_s, "vms_assigned_underwater", under, "")
                .expect("time-ordered");
            self.metrics
                .push(t_s, "vms_assigned_on_land", land, "")
                .expect("time-ordered");
        }
    }
}

/// Runs one engine scenario (`benchmark`, `hdfs_cascade`, or
/// `vm_migration`). `attack` disables the source when false (baseline
/// comparison runs); `stream_prefix` isolates this run's RNG streams.
pub fn run_simulation(
    scenario: &ScenarioConfig,
    calibration: &Calibration,
    attack: bool,
    stream_prefix: &str,
) -> Result<SimOutput> {
    scenario.validate(calibration)?;

    let workload = match &scenario.experiment {
        ExperimentSpec::Benchmark { workload, .. } => *workload,
        _ => WorkloadKind::SeqWrite,
    };
    let models = scenario
        .storage
        .build_models(calibration, workload, scenario.seed);
    for model in &models {
        model.validate()?;
    }
    let array = Raid5Array::new(
        models.len(),
        scenario.storage.drop_timeout_s,
        scenario.storage.degraded_drop_timeout_s,
    )?;
    let excitation = ExcitationModel::build(scenario, calibration, attack)?;

    let vm_world = match &scenario.experiment {
        ExperimentSpec::VmMigration {
            host_capacity,
            monitor_period_s,
            ..
        } => Some(VmWorld {
            scheduler: Scheduler::new(vec![
                Host::new("underwater", *host_capacity),
                Host::new("on_land", *host_capacity),
            ]),
            vms: Vec::new(),
            inflation: calibration.vm_inflation.clone(),
            monitor_period_s: *monitor_period_s,
        }),
        _ => None,
    };

    let mut engine = Engine {
        scenario,
        excitation,
        array,
        states: vec![DiskState::new(); models.len()],
        models,
        node: Node::new("underwater-1", Location::Underwater),
        queue: EventQueue::new(),
        metrics: MetricsLog::new(),
        events: Vec::new(),
        sample_rng: derive_rng(scenario.seed, &format!("{stream_prefix}/sample-noise")),
        trace: match &scenario.experiment {
            ExperimentSpec::Benchmark { workload, .. } => Some(ThroughputTrace::new(
                workload.label(),
                scenario.sample_period_s,
            )),
            _ => None,
        },
        vm_world,
        vm_rng: derive_rng(scenario.seed, &format!("{stream_prefix}/vm-runtime")),
    };

    let horizon = match &scenario.experiment {
        ExperimentSpec::Benchmark { duration_s, .. } => *duration_s,
        _ => scenario.horizon_s,
    };

    // Schedule the run's event skeleton.
    for t in engine
        .excitation
        .source
        .volume_schedule
        .change_points(horizon)
    {
        engine
            .queue
            .schedule(t, EventKind::ExcitationChange, "volume-step");
    }
    let dt = 1.0f64;
    let mut t = dt;
    while t <= horizon + 1e-9 {
        engine.queue.schedule(t, EventKind::DiskState, "integrate");
        t += dt;
    }
    let mut t = 0.0;
    while t <= horizon + 1e-9 {
        engine.queue.schedule(t, EventKind::SampleTick, "sample");
        t += scenario.sample_period_s;
    }
    if let ExperimentSpec::VmMigration {
        vm_count,
        arrival_period_s,
        ..
    } = &scenario.experiment
    {
        for i in 0..*vm_count {
            let at = i as f64 * arrival_period_s;
            if at <= horizon {
                engine
                    .queue
                    .schedule(at, EventKind::VmEvent, format!("arrive/{i}"));
            }
        }
        let period = engine.vm_world.as_ref().expect("vm world").monitor_period_s;
        let mut t = period;
        while t <= horizon + 1e-9 {
            engine.queue.schedule(t, EventKind::VmEvent, "monitor");
            t += period;
        }
    }

    while let Some(event) = engine.queue.pop() {
        let t_s = event.time_s;
        match event.kind {
            EventKind::ExcitationChange => {
                let excitation = engine.excitation.at(t_s);
                engine.log(
                    t_s,
                    "excitation-change",
                    format!("delta_spl={:.1}", excitation.delta_spl),
                );
            }
            EventKind::DiskState => engine.integrate(t_s, dt),
            EventKind::VmEvent => {
                if let Some(id) = event.payload.strip_prefix("arrive/") {
                    let vm_id: u32 = id.parse().expect("arrival payload");
                    engine.handle_vm_arrival(t_s, vm_id);
                } else {
                    engine.handle_monitor(t_s);
                }
            }
            EventKind::SampleTick => engine.sample(t_s),
            EventKind::RaidEvent | EventKind::NodeEvent => {}
        }
    }

    let mut summary: Vec<(String, String)> = vec![
        ("scenario".to_string(), scenario.name.clone()),
        ("seed".to_string(), scenario.seed.to_string()),
        ("attack".to_string(), attack.to_string()),
        (
            "array_status".to_string(),
            format!("{:?}", engine.array.status()),
        ),
        (
            "node_status".to_string(),
            format!("{:?}", engine.node.status),
        ),
    ];
    if let Some(trace) = &engine.trace {
        summary.push((
            "mean_throughput_mb_s".to_string(),
            format!("{:.3}", trace.mean()),
        ));
    }
    if let Some(world) = &engine.vm_world {
        let under = world.scheduler.assigned_count("underwater");
        let land = world.scheduler.assigned_count("on_land");
        summary.push(("vms_assigned_underwater".to_string(), under.to_string()));
        summary.push(("vms_assigned_on_land".to_string(), land.to_string()));
        summary.push((
            "vms_queued".to_string(),
            world.scheduler.queue.len().to_string(),
        ));
        let mut counts: std::collections::BTreeMap<&'static str, usize> =
            std::collections::BTreeMap::new();
        for sim_vm in &world.vms {
            *counts.entry(sim_vm.vm.state.label()).or_insert(0) += 1;
        }
        for (state, count) in counts {
            summary.push((format!("vms_{}", state.to_lowercase()), count.to_string()));
        }
        // Whether every VM resident on the underwater host at failure time
        // ended blocked.
        let on_failed_host_not_blocked = world
            .vms
            .iter()
            .filter(|v| v.vm.host.as_deref() == Some("underwater"))
            .filter(|v| {
                !matches!(
                    v.vm.state,
                    VmState::Done | VmState::Blocked | VmState::Failed
                )
            })
            .count();
        summary.push((
            "underwater_vms_unresolved".to_string(),
            on_failed_host_not_blocked.to_string(),
        ));
        let blocked = world
            .vms
            .iter()
            .filter(|v| v.vm.state == VmState::Blocked)
            .count();
        summary.push(("vms_blocked".to_string(), blocked.to_string()));
    }

    Ok(SimOutput {
        metrics: engine.metrics,
        events: engine.events,
        summary,
        trace: engine.trace,
    })
}

/// Convenience wrapper: the scenario as configured, attack enabled.
pub fn run(scenario: &ScenarioConfig, calibration: &Calibration) -> Result<SimOutput> {
    match &scenario.experiment {
        ExperimentSpec::Benchmark { .. }
        | ExperimentSpec::HdfsCascade {}
        | ExperimentSpec::VmMigration { .. } => run_simulation(scenario, calibration, true, "run"),
        other => Err(Error::validation(format!(
            "experiment kind '{}' is a derived recipe, not an engine run",
            other.kind_name()
        ))),
    }
}
