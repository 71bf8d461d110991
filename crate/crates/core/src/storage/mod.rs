//! Storage-device models: individual disks under acoustic excitation, the
//! RAID-5 array state machine, and the hybrid SSD write-back cache.

mod cache;
mod disk;
mod raid;

pub use cache::{cache_serve, cache_serve_with_outcome, CacheConfig, HitRatioEntry, LatencyBand};
pub use disk::{
    degradation_multiplier, disk_step, pes_displacement_ratio, DegradationCurve, DiskKind,
    DiskModel, DiskState,
};
pub use raid::{Raid5Array, RaidEvent, RaidStatus};
