//! Virtual-machine lifecycle and per-state latency inflation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum VmState {
    Init,
    Prolog,
    Boot,
    Running,
    Done,
    Failed,
    Blocked,
}

impl VmState {
    pub fn label(self) -> &'static str {
        match self {
            VmState::Init => "INIT",
            VmState::Prolog => "PROLOG",
            VmState::Boot => "BOOT",
            VmState::Running => "RUNNING",
            VmState::Done => "DONE",
            VmState::Failed => "FAILED",
            VmState::Blocked => "BLOCKED",
        }
    }

    /// Legal lifecycle transitions: the happy path INIT → PROLOG → BOOT →
    /// RUNNING → DONE, plus RUNNING → FAILED/BLOCKED.
    pub fn can_transition_to(self, next: VmState) -> bool {
        matches!(
            (self, next),
            (VmState::Init, VmState::Prolog)
                | (VmState::Prolog, VmState::Boot)
                | (VmState::Boot, VmState::Running)
                | (VmState::Running, VmState::Done)
                | (VmState::Running, VmState::Failed)
                | (VmState::Running, VmState::Blocked)
        )
    }
}

#[derive(Debug, Clone)]
pub struct VirtualMachine {
    pub id: u32,
    pub state: VmState,
    pub host: Option<String>,
    pub state_entered_s: f64,
}

impl VirtualMachine {
    pub fn new(id: u32) -> Self {
        VirtualMachine {
            id,
            state: VmState::Init,
            host: None,
            state_entered_s: 0.0,
        }
    }

    pub fn transition(&mut self, next: VmState, t_s: f64) -> Result<()> {
        if !self.state.can_transition_to(next) {
            return Err(Error::validation(format!(
                "vm {}: illegal transition {} -> {}",
                self.id,
                self.state.label(),
                next.label()
            )));
        }
        self.state = next;
        self.state_entered_s = t_s;
        Ok(())
    }
}

/// Per-state latency inflation calibration.
///
/// Storage-dependent states inflate linearly from `onset_db` up to
/// `max_db` (the highest level measured before failure, with volumes stepped
/// 2 dB apart) and hold there; above `failure_db` a RUNNING VM backed by a
/// single disk fails outright.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VmInflation {
    pub onset_db: f64,
    pub max_db: f64,
    /// PROLOG multiplier at `max_db`.
    pub prolog_max: f64,
    /// RUNNING multiplier at `max_db`.
    pub running_max: f64,
    pub failure_db: f64,
}

impl VmInflation {
    fn ramp(&self, delta_spl: f64, max: f64) -> f64 {
        let span = self.max_db - self.onset_db;
        let frac = ((delta_spl - self.onset_db) / span).clamp(0.0, 1.0);
        1.0 + (max - 1.0) * frac
    }

    pub fn prolog_factor(&self, delta_spl: f64) -> f64 {
        self.ramp(delta_spl, self.prolog_max)
    }

    pub fn running_factor(&self, delta_spl: f64) -> f64 {
        self.ramp(delta_spl, self.running_max)
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_db <= self.onset_db {
            return Err(Error::config("vm inflation: max_db must exceed onset_db"));
        }
        if self.prolog_max < 1.0 || self.running_max < 1.0 {
            return Err(Error::config("vm inflation multipliers must be ≥ 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VmDuration {
    Seconds(f64),
    /// The backing disk became unresponsive; the VM transitions to FAILED.
    Failure,
}

/// How long a VM spends in `state` under a given excitation.
///
/// INIT and BOOT run from the application SSD and are unaffected. PROLOG
/// (image transfer) and RUNNING (application I/O) stretch with the
/// calibration curves; RUNNING on a single-disk backing fails at or above
/// the failure threshold.
pub fn vm_state_duration(
    state: VmState,
    base_duration_s: f64,
    delta_spl: f64,
    inflation: &VmInflation,
) -> Result<VmDuration> {
    if base_duration_s <= 0.0 {
        return Err(Error::validation("base duration must be positive"));
    }
    let d = delta_spl.max(0.0);
    Ok(match state {
        VmState::Prolog => VmDuration::Seconds(base_duration_s * inflation.prolog_factor(d)),
        VmState::Running => {
            if d >= inflation.failure_db {
                VmDuration::Failure
            } else {
                VmDuration::Seconds(base_duration_s * inflation.running_factor(d))
            }
        }
        _ => VmDuration::Seconds(base_duration_s),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn test_inflation() -> VmInflation {
        VmInflation {
            onset_db: 26.0,
            max_db: 34.0,
            prolog_max: 1.10,
            running_max: 3.80,
            failure_db: 36.0,
        }
    }

    #[test]
    fn init_is_unaffected() {
        let inf = test_inflation();
        for d in [0.0, 20.0, 35.0, 50.0] {
            assert_eq!(
                vm_state_duration(VmState::Init, 12.0, d, &inf).unwrap(),
                VmDuration::Seconds(12.0)
            );
        }
    }

    #[track_caller]
    fn assert_seconds(actual: VmDuration, expected: f64) {
        match actual {
            VmDuration::Seconds(s) => {
                assert!((s - expected).abs() < 1e-9, "got {s}, expected {expected}")
            }
            VmDuration::Failure => panic!("expected {expected} s, got failure"),
        }
    }

    #[test]
    fn prolog_peaks_at_ten_percent() {
        let inf = test_inflation();
        assert_seconds(
            vm_state_duration(VmState::Prolog, 100.0, 34.0, &inf).unwrap(),
            110.0,
        );
        // Holds at the ceiling up to the failure point.
        assert_seconds(
            vm_state_duration(VmState::Prolog, 100.0, 35.9, &inf).unwrap(),
            110.0,
        );
    }

    #[test]
    fn running_peaks_at_280_percent_then_fails() {
        let inf = test_inflation();
        assert_seconds(
            vm_state_duration(VmState::Running, 100.0, 34.0, &inf).unwrap(),
            380.0,
        );
        let failed = vm_state_duration(VmState::Running, 100.0, 36.0, &inf).unwrap();
        assert_eq!(failed, VmDuration::Failure);
    }

    #[test]
    fn inflation_is_linear_from_onset() {
        let inf = test_inflation();
        // Halfway between onset (26) and max (34).
        assert_seconds(
            vm_state_duration(VmState::Running, 100.0, 30.0, &inf).unwrap(),
            100.0 * (1.0 + 2.8 * 0.5),
        );
        assert_seconds(
            vm_state_duration(VmState::Running, 100.0, 10.0, &inf).unwrap(),
            100.0,
        );
    }

    #[test]
    fn lifecycle_transition_legality() {
        let mut vm = VirtualMachine::new(1);
        assert!(vm.transition(VmState::Prolog, 1.0).is_ok());
        assert!(vm.transition(VmState::Boot, 2.0).is_ok());
        assert!(vm.transition(VmState::Running, 3.0).is_ok());
        assert!(vm.transition(VmState::Init, 4.0).is_err());
        assert!(vm.transition(VmState::Blocked, 4.0).is_ok());
        // Blocked is terminal.
        assert!(vm.transition(VmState::Running, 5.0).is_err());

        let mut vm2 = VirtualMachine::new(2);
        assert!(vm2.transition(VmState::Boot, 1.0).is_err());
        assert!(vm2.transition(VmState::Prolog, 1.0).is_ok());
        assert!(vm2.transition(VmState::Done, 2.0).is_err());
    }
}
