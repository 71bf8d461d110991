//! The scenario files shipped with the crate, embedded so every subcommand
//! and example runs without any setup. The same files live under
//! `scenarios/` for editing and for use via `--scenario`.

use crate::engine::scenario::ScenarioConfig;
use crate::error::Result;

macro_rules! shipped {
    ($name:ident, $file:literal) => {
        pub fn $name() -> Result<ScenarioConfig> {
            ScenarioConfig::from_toml(include_str!(concat!("../scenarios/", $file)))
        }
    };
}

shipped!(sweep, "sweep.toml");
shipped!(volume_curve, "volume_curve.toml");
shipped!(volume_curve_open_water, "volume_curve_open_water.toml");
shipped!(positions, "positions.toml");
shipped!(angle, "angle.toml");
shipped!(hdfs_cascade, "hdfs_cascade.toml");
shipped!(db_latency, "db_latency.toml");
shipped!(vm_migration, "vm_migration.toml");
shipped!(snia_replay, "snia_replay.toml");
shipped!(cache_bench, "cache_bench.toml");
shipped!(fem_attenuation, "fem_attenuation.toml");
shipped!(detect_profile, "detect_profile.toml");
shipped!(detect_eval, "detect_eval.toml");
shipped!(benign_benchmark, "benign_benchmark.toml");
