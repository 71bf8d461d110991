//! RAID-5 array state machine.
//!
//! Parity writes touch every member, so array write throughput is pinned to
//! the slowest active member, and a single unresponsive member stalls the
//! whole array until the controller drops it.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::storage::{DiskModel, DiskState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RaidStatus {
    Healthy,
    Degraded,
    Failed,
}

/// Array-level transitions emitted by [`Raid5Array::step`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RaidEvent {
    MemberUnresponsive { member: usize },
    MemberDropped { member: usize },
    ArrayDegraded,
    ArrayFailed,
}

/// A RAID-5 array over `n ≥ 3` members, indexed positionally into the disk
/// state/model slices the caller owns.
#[derive(Debug, Clone)]
pub struct Raid5Array {
    member_count: usize,
    dropped: BTreeSet<usize>,
    status: RaidStatus,
    /// How long an unresponsive member is tolerated before removal while the
    /// array is healthy.
    pub drop_timeout_s: f64,
    /// Removal timeout once degraded. Longer by default: the next drop is
    /// fatal, so controllers hold on to a flaky member much longer.
    pub degraded_drop_timeout_s: f64,
    unresponsive_for_s: Vec<f64>,
    was_responsive: Vec<bool>,
}

impl Raid5Array {
    pub fn new(
        member_count: usize,
        drop_timeout_s: f64,
        degraded_drop_timeout_s: f64,
    ) -> Result<Self> {
        if member_count < 3 {
            return Err(Error::validation(format!(
                "RAID 5 requires at least three members, got {member_count}"
            )));
        }
        if drop_timeout_s < 0.0 || degraded_drop_timeout_s < 0.0 {
            return Err(Error::validation("drop timeouts must be non-negative"));
        }
        Ok(Raid5Array {
            member_count,
            dropped: BTreeSet::new(),
            status: RaidStatus::Healthy,
            drop_timeout_s,
            degraded_drop_timeout_s,
            unresponsive_for_s: vec![0.0; member_count],
            was_responsive: vec![true; member_count],
        })
    }

    pub fn status(&self) -> RaidStatus {
        self.status
    }

    pub fn member_count(&self) -> usize {
        self.member_count
    }

    pub fn dropped(&self) -> &BTreeSet<usize> {
        &self.dropped
    }

    pub fn active_members(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.member_count).filter(move |i| !self.dropped.contains(i))
    }

    /// True when every active member is responsive and the array is not
    /// failed, i.e. the array can currently serve requests.
    pub fn can_serve(&self, states: &[DiskState]) -> bool {
        self.status != RaidStatus::Failed && self.active_members().all(|i| states[i].responsive)
    }

    /// Write throughput in MB/s: the slowest active member bounds the array
    /// because parity lands on every disk. An unresponsive active member
    /// stalls all requests (0 MB/s). A failed array cannot serve at all.
    pub fn write_throughput(&self, states: &[DiskState], models: &[DiskModel]) -> Result<f64> {
        if self.status == RaidStatus::Failed {
            return Err(Error::Unavailable("RAID 5 array has failed".to_string()));
        }
        if !self.can_serve(states) {
            return Ok(0.0);
        }
        let min = self
            .active_members()
            .map(|i| models[i].baseline_throughput_mb_s * states[i].current_multiplier)
            .fold(f64::INFINITY, f64::min);
        Ok(min)
    }

    /// Advances removal bookkeeping by `dt_s` and returns the transitions
    /// that occurred. Failed is absorbing: the array never leaves it, even
    /// after the excitation stops.
    pub fn step(&mut self, states: &[DiskState], dt_s: f64) -> Vec<RaidEvent> {
        let mut events = Vec::new();
        if self.status == RaidStatus::Failed {
            return events;
        }

        for (member, state) in states.iter().enumerate().take(self.member_count) {
            if self.dropped.contains(&member) {
                continue;
            }
            if state.responsive {
                self.unresponsive_for_s[member] = 0.0;
                self.was_responsive[member] = true;
            } else {
                if self.was_responsive[member] {
                    self.was_responsive[member] = false;
                    events.push(RaidEvent::MemberUnresponsive { member });
                }
                self.unresponsive_for_s[member] += dt_s;
            }
        }

        // Drop members one at a time in index order; each drop re-evaluates
        // the array status and the applicable timeout.
        loop {
            if self.status == RaidStatus::Failed {
                break;
            }
            let timeout = match self.status {
                RaidStatus::Healthy => self.drop_timeout_s,
                RaidStatus::Degraded => self.degraded_drop_timeout_s,
                RaidStatus::Failed => unreachable!(),
            };
            let overdue = self
                .active_members()
                .find(|i| !states[*i].responsive && self.unresponsive_for_s[*i] >= timeout);
            let Some(member) = overdue else { break };
            self.dropped.insert(member);
            events.push(RaidEvent::MemberDropped { member });
            let active = self.member_count - self.dropped.len();
            if active < 3 {
                self.status = RaidStatus::Failed;
                events.push(RaidEvent::ArrayFailed);
            } else if self.status == RaidStatus::Healthy {
                self.status = RaidStatus::Degraded;
                events.push(RaidEvent::ArrayDegraded);
            }
        }
        events
    }
}
