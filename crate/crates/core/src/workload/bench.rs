//! Benchmark execution and block-trace replay against a simulated array.

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::acoustics::EffectiveExcitation;
use crate::error::Result;
use crate::storage::{disk_step, DiskModel, DiskState, Raid5Array};
use crate::workload::{ThroughputTrace, TraceRequest, WorkloadSpec};

/// Zero-mean Gaussian run-to-run throughput noise, σ as a fraction of the
/// baseline.
#[derive(Debug, Clone, Copy)]
pub struct NoiseModel {
    pub sigma_frac: f64,
}

impl NoiseModel {
    pub fn none() -> Self {
        NoiseModel { sigma_frac: 0.0 }
    }

    fn sample(&self, baseline: f64, rng: &mut impl Rng) -> f64 {
        if self.sigma_frac == 0.0 {
            return 0.0;
        }
        let normal = Normal::new(0.0, self.sigma_frac * baseline).expect("finite sigma");
        normal.sample(rng)
    }
}

/// A RAID array together with the per-member state and models it indexes.
pub struct StorageTarget<'a> {
    pub array: &'a mut Raid5Array,
    pub states: &'a mut [DiskState],
    pub models: &'a [DiskModel],
}

impl StorageTarget<'_> {
    fn step(&mut self, excitation: &EffectiveExcitation, dt_s: f64) {
        for (state, model) in self.states.iter_mut().zip(self.models.iter()) {
            disk_step(state, model, excitation, excitation.combined_factor, dt_s);
        }
        self.array.step(self.states, dt_s);
    }

    fn throughput(&self) -> Result<f64> {
        self.array.write_throughput(self.states, self.models)
    }

    fn baseline(&self) -> f64 {
        self.array
            .active_members()
            .map(|i| self.models[i].baseline_throughput_mb_s)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Runs a fixed-duration benchmark, sampling throughput once per second.
///
/// Per-sample throughput is the array throughput under the excitation at that
/// instant plus zero-mean noise. Unresponsive storage yields zero-throughput
/// samples; an array failure mid-run truncates the trace and flags it
/// aborted.
pub fn run_benchmark(
    spec: &WorkloadSpec,
    target: &mut StorageTarget<'_>,
    excitation_feed: &dyn Fn(f64) -> EffectiveExcitation,
    noise: &NoiseModel,
    rng: &mut impl Rng,
) -> Result<ThroughputTrace> {
    spec.validate()?;
    let mut trace = ThroughputTrace::new(spec.kind.label(), 1.0);
    let samples = spec.duration_s.ceil() as usize;
    for tick in 0..samples {
        let t = tick as f64;
        let excitation = excitation_feed(t);
        target.step(&excitation, 1.0);
        match target.throughput() {
            Ok(raw) => {
                let noisy = if raw > 0.0 {
                    (raw + noise.sample(target.baseline(), rng)).max(0.0)
                } else {
                    0.0
                };
                trace.push(t, noisy);
            }
            Err(_) => {
                trace.aborted = true;
                break;
            }
        }
    }
    Ok(trace)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReplayOutcome {
    pub fulfilled: usize,
    pub total: usize,
    /// The array failed mid-replay and the count is frozen.
    pub aborted: bool,
}

/// Replays a block trace through a single-queue fluid approximation: the
/// service rate at any instant is the array's current write throughput, and
/// a request completes once the cumulative bytes ahead of it have been
/// served. Counts requests fulfilled within `wall_limit_s`.
///
/// `time_compression` divides request timestamps so multi-hour traces can be
/// replayed at desk scale.
pub fn replay_trace(
    requests: &[TraceRequest],
    target: &mut StorageTarget<'_>,
    excitation_feed: &dyn Fn(f64) -> EffectiveExcitation,
    wall_limit_s: f64,
    time_compression: f64,
) -> Result<ReplayOutcome> {
    let compression = if time_compression > 0.0 {
        time_compression
    } else {
        1.0
    };
    let arrival_s: Vec<f64> = requests
        .iter()
        .map(|r| r.timestamp_s / compression)
        .collect();
    let demand_mb: Vec<f64> = {
        let mut acc = 0.0;
        requests
            .iter()
            .map(|r| {
                acc += r.size as f64 / (1024.0 * 1024.0);
                acc
            })
            .collect()
    };

    let mut fulfilled = 0usize;
    let mut served_mb = 0.0f64;
    let mut aborted = false;
    let dt = 1.0f64;
    let ticks = wall_limit_s.ceil() as usize;

    for tick in 0..ticks {
        let t = tick as f64;
        let excitation = excitation_feed(t);
        target.step(&excitation, dt);
        let rate = match target.throughput() {
            Ok(rate) => rate,
            Err(_) => {
                aborted = true;
                break;
            }
        };
        // The server cannot bank idle capacity: service is capped by the
        // bytes that have actually arrived by the end of this tick.
        let arrived_mb = match arrival_s.partition_point(|a| *a <= t + dt) {
            0 => 0.0,
            n => demand_mb[n - 1],
        };
        served_mb = (served_mb + rate * dt).min(arrived_mb);
        while fulfilled < requests.len()
            && arrival_s[fulfilled] <= t + dt
            && demand_mb[fulfilled] <= served_mb + 1e-12
        {
            fulfilled += 1;
        }
        if fulfilled == requests.len() {
            break;
        }
    }

    Ok(ReplayOutcome {
        fulfilled,
        total: requests.len(),
        aborted,
    })
}
