//! Deterministic discrete-event simulation core: clock, event queue, seeded
//! randomness, metric recording, and scenario configuration.

mod event;
mod metrics;
mod rng;
pub mod scenario;
mod sim;

pub use event::{Event, EventKind, EventQueue};
pub use metrics::{events_to_csv, LoggedEvent, MetricRecord, MetricsLog};
pub use rng::derive_rng;
pub use scenario::{
    DiskSpec, ExperimentSpec, PropagationMode, PropagationSpec, ScenarioConfig, StorageSpec,
};
pub use sim::{run, run_simulation, ExcitationModel, SimOutput};
