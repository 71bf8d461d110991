//! Capacity-proportional VM placement with unavailable-host exclusion.

use std::collections::VecDeque;

use crate::error::{Error, Result};

/// A placement target advertising capacity derived from its monitored
/// storage throughput.
#[derive(Debug, Clone)]
pub struct Host {
    pub id: String,
    /// Capacity in VM slots when storage is fully healthy.
    pub nominal_capacity: f64,
    /// Capacity as currently advertised by monitoring.
    pub effective_capacity: f64,
    /// Blocked hosts (failed storage) receive no placements.
    pub blocked: bool,
    /// VMs currently resident (holding a slot).
    pub resident: Vec<u32>,
}

impl Host {
    pub fn new(id: impl Into<String>, nominal_capacity: f64) -> Self {
        let id = id.into();
        Host {
            id,
            nominal_capacity,
            effective_capacity: nominal_capacity,
            blocked: false,
            resident: Vec::new(),
        }
    }

    /// Fraction of advertised capacity still free. Hosts with no advertised
    /// capacity score below every host with some.
    fn availability_score(&self) -> f64 {
        if self.blocked || self.effective_capacity <= 0.0 {
            return f64::NEG_INFINITY;
        }
        (self.effective_capacity - self.resident.len() as f64) / self.effective_capacity
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    pub vm: u32,
    pub host: String,
}

/// Greedy scheduler: each VM goes to the host with the most available
/// effective capacity at instantiation time. Ties go to the earliest host in
/// declaration order, which alternates assignments between equal hosts as
/// their loads leapfrog.
#[derive(Debug, Clone, Default)]
pub struct Scheduler {
    pub hosts: Vec<Host>,
    pub queue: VecDeque<u32>,
    pub assignments: Vec<Assignment>,
}

impl Scheduler {
    pub fn new(hosts: Vec<Host>) -> Self {
        Scheduler {
            hosts,
            queue: VecDeque::new(),
            assignments: Vec::new(),
        }
    }

    pub fn host_mut(&mut self, id: &str) -> Option<&mut Host> {
        self.hosts.iter_mut().find(|h| h.id == id)
    }

    pub fn update_capacity(&mut self, id: &str, effective: f64, blocked: bool) -> Result<()> {
        let host = self
            .host_mut(id)
            .ok_or_else(|| Error::validation(format!("unknown host '{id}'")))?;
        host.effective_capacity = effective.max(0.0);
        host.blocked = blocked;
        Ok(())
    }

    /// Places one VM, or queues it when no host can take it.
    pub fn place(&mut self, vm: u32) -> Option<String> {
        let mut best: Option<usize> = None;
        let mut best_score = f64::NEG_INFINITY;
        for (idx, host) in self.hosts.iter().enumerate() {
            let score = host.availability_score();
            if score > best_score {
                best_score = score;
                best = Some(idx);
            }
        }
        // A host with zero free slots still "wins" a tie among saturated
        // hosts; only completely unavailable hosts are excluded.
        match best {
            Some(idx) if best_score > f64::NEG_INFINITY => {
                let host = &mut self.hosts[idx];
                host.resident.push(vm);
                let id = host.id.clone();
                self.assignments.push(Assignment {
                    vm,
                    host: id.clone(),
                });
                Some(id)
            }
            _ => {
                self.queue.push_back(vm);
                None
            }
        }
    }

    /// Releases a completed or failed VM's slot.
    pub fn release(&mut self, vm: u32) {
        for host in &mut self.hosts {
            host.resident.retain(|v| *v != vm);
        }
    }

    pub fn assigned_count(&self, host_id: &str) -> usize {
        self.assignments
            .iter()
            .filter(|a| a.host == host_id)
            .count()
    }

    /// Every VM the scheduler has seen, across hosts and the queue.
    pub fn placed_or_queued(&self) -> usize {
        self.assignments.len() + self.queue.len()
    }
}

/// Batch placement: applies a capacity feed, then places each VM of the
/// batch in order. Returns the assignment log for the batch.
pub fn schedule_vms(
    scheduler: &mut Scheduler,
    vm_batch: &[u32],
    capacity_feed: &[(String, f64, bool)],
) -> Result<Vec<Assignment>> {
    for (id, effective, blocked) in capacity_feed {
        scheduler.update_capacity(id, *effective, *blocked)?;
    }
    let start = scheduler.assignments.len();
    for &vm in vm_batch {
        scheduler.place(vm);
    }
    Ok(scheduler.assignments[start..].to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_hosts() -> Scheduler {
        Scheduler::new(vec![
            Host::new("underwater", 25.0),
            Host::new("on_land", 25.0),
        ])
    }

    #[test]
    fn identical_hosts_split_evenly() {
        let mut sched = two_hosts();
        let batch: Vec<u32> = (0..50).collect();
        schedule_vms(&mut sched, &batch, &[]).unwrap();
        let a = sched.assigned_count("underwater");
        let b = sched.assigned_count("on_land");
        assert!(a.abs_diff(b) <= 1, "split {a}/{b}");
        assert_eq!(a + b, 50);
    }

    #[test]
    fn reduced_capacity_shifts_share() {
        let mut sched = two_hosts();
        sched.update_capacity("underwater", 10.0, false).unwrap();
        let batch: Vec<u32> = (0..35).collect();
        schedule_vms(&mut sched, &batch, &[]).unwrap();
        let under = sched.assigned_count("underwater");
        let land = sched.assigned_count("on_land");
        assert!(under < land, "under {under}, land {land}");
        assert_eq!(under + land, 35);
        // Roughly proportional to the advertised 10:25 capacities.
        assert!((8..=13).contains(&under), "under {under}");
    }

    #[test]
    fn blocked_hosts_are_excluded() {
        let mut sched = two_hosts();
        sched.update_capacity("underwater", 25.0, true).unwrap();
        let batch: Vec<u32> = (0..10).collect();
        schedule_vms(&mut sched, &batch, &[]).unwrap();
        assert_eq!(sched.assigned_count("underwater"), 0);
        assert_eq!(sched.assigned_count("on_land"), 10);
    }

    #[test]
    fn no_available_host_queues_the_vm() {
        let mut sched = two_hosts();
        sched.update_capacity("underwater", 0.0, false).unwrap();
        sched.update_capacity("on_land", 0.0, true).unwrap();
        assert_eq!(sched.place(7), None);
        assert_eq!(sched.queue, VecDeque::from(vec![7]));
    }

    #[test]
    fn every_vm_appears_exactly_once() {
        let mut sched = Scheduler::new(vec![
            Host::new("a", 5.0),
            Host::new("b", 3.0),
            Host::new("c", 0.0),
        ]);
        let batch: Vec<u32> = (0..40).collect();
        schedule_vms(&mut sched, &batch, &[]).unwrap();
        let mut seen: Vec<u32> = sched.assignments.iter().map(|a| a.vm).collect();
        seen.extend(sched.queue.iter().copied());
        seen.sort_unstable();
        assert_eq!(seen, batch);
    }

    #[test]
    fn release_frees_the_slot() {
        let mut sched = two_hosts();
        let host = sched.place(1).unwrap();
        assert_eq!(
            sched.hosts.iter().map(|h| h.resident.len()).sum::<usize>(),
            1
        );
        sched.release(1);
        assert_eq!(
            sched.hosts.iter().map(|h| h.resident.len()).sum::<usize>(),
            0
        );
        let _ = host;
    }
}
