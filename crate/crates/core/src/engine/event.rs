//! Discrete-event queue with deterministic tie-breaking.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Event classes, in tie-break priority order: excitation changes apply
/// before disk integration, which precedes array/node/vm processing, and
/// sample ticks run last so samples observe post-transition state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventKind {
    ExcitationChange,
    DiskState,
    RaidEvent,
    NodeEvent,
    VmEvent,
    SampleTick,
}

impl EventKind {
    fn priority(self) -> u8 {
        match self {
            EventKind::ExcitationChange => 0,
            EventKind::DiskState => 1,
            EventKind::RaidEvent => 2,
            EventKind::NodeEvent => 3,
            EventKind::VmEvent => 4,
            EventKind::SampleTick => 5,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            EventKind::ExcitationChange => "excitation-change",
            EventKind::DiskState => "disk-state",
            EventKind::RaidEvent => "raid-event",
            EventKind::NodeEvent => "node-event",
            EventKind::VmEvent => "vm-event",
            EventKind::SampleTick => "sample-tick",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Event {
    pub time_s: f64,
    pub kind: EventKind,
    pub payload: String,
}

#[derive(Debug)]
struct Queued {
    event: Event,
    seq: u64,
}

impl PartialEq for Queued {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Queued {}

impl Ord for Queued {
    fn cmp(&self, other: &Self) -> Ordering {
        // BinaryHeap is a max-heap; invert for earliest-first.
        other
            .event
            .time_s
            .total_cmp(&self.event.time_s)
            .then_with(|| other.event.kind.priority().cmp(&self.event.kind.priority()))
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

impl PartialOrd for Queued {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Time-ordered event queue; ties break by kind priority, then insertion
/// order.
#[derive(Debug, Default)]
pub struct EventQueue {
    heap: BinaryHeap<Queued>,
    seq: u64,
    clock_s: f64,
}

impl EventQueue {
    pub fn new() -> Self {
        EventQueue {
            heap: BinaryHeap::new(),
            seq: 0,
            clock_s: 0.0,
        }
    }

    pub fn clock_s(&self) -> f64 {
        self.clock_s
    }

    /// Schedules an event. Panics on causality violations: no handler may
    /// schedule an event in the past.
    pub fn schedule(&mut self, time_s: f64, kind: EventKind, payload: impl Into<String>) {
        assert!(
            time_s >= self.clock_s,
            "event scheduled in the past: {time_s} < {}",
            self.clock_s
        );
        self.heap.push(Queued {
            event: Event {
                time_s,
                kind,
                payload: payload.into(),
            },
            seq: self.seq,
        });
        self.seq += 1;
    }

    /// Pops the next event and advances the clock to it.
    pub fn pop(&mut self) -> Option<Event> {
        let next = self.heap.pop()?;
        self.clock_s = next.event.time_s;
        Some(next.event)
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }
}
