//! Throughput-anomaly detection: per-disk profiling, partial-curve-mapping
//! dissimilarity, k-means classification over distance space, the multi-disk
//! alarm rule, and false/true-positive-rate evaluation.

mod eval;
mod kmeans;
mod pcm;
mod profile;

pub use eval::{classify_disks, evaluate, DetectorConfig, EvalSummary, Verdict};
pub use kmeans::{kmeans2, KMeans1d};
pub use pcm::{pcm_distance, AreaRule, Normalization, PcmConfig};
pub use profile::{
    load_profile_store, profile_disk, profile_store_files, save_profile_store, DiskProfile,
};
