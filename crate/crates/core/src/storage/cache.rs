//! Hybrid SSD write-back cache latency model.
//!
//! Hit ratios are table-driven per (workload kind, cache size); latencies are
//! drawn uniformly from configured bands. The SSD cache itself is immune to
//! excitation, so an attack only widens the miss path.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::workload::WorkloadKind;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatencyBand {
    pub lo_ms: f64,
    pub hi_ms: f64,
}

impl LatencyBand {
    pub fn contains(&self, latency_ms: f64) -> bool {
        latency_ms >= self.lo_ms && latency_ms <= self.hi_ms
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HitRatioEntry {
    pub workload: WorkloadKind,
    pub cache_size_gb: f64,
    pub hit_ratio: f64,
}

/// Write-back cache configuration.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CacheConfig {
    pub hit_ratios: Vec<HitRatioEntry>,
    /// Served from the SSD cache.
    pub hit_latency_band: LatencyBand,
    /// Served by the backing HDDs with no excitation present.
    pub miss_latency_band_benign: LatencyBand,
    /// Served by the backing HDDs while under attack.
    pub miss_latency_band_attacked: LatencyBand,
}

impl CacheConfig {
    pub fn validate(&self) -> Result<()> {
        for entry in &self.hit_ratios {
            if !(0.0..=1.0).contains(&entry.hit_ratio) {
                return Err(Error::config(format!(
                    "cache hit ratio for {:?} at {} GB must lie in [0, 1]",
                    entry.workload, entry.cache_size_gb
                )));
            }
        }
        for band in [
            self.hit_latency_band,
            self.miss_latency_band_benign,
            self.miss_latency_band_attacked,
        ] {
            if band.lo_ms > band.hi_ms || band.lo_ms < 0.0 {
                return Err(Error::config(format!(
                    "latency band [{}, {}] is not ordered",
                    band.lo_ms, band.hi_ms
                )));
            }
        }
        Ok(())
    }

    /// Configured hit probability for a workload at a cache size.
    pub fn hit_ratio(&self, workload: WorkloadKind, cache_size_gb: f64) -> Result<f64> {
        self.hit_ratios
            .iter()
            .find(|e| e.workload == workload && (e.cache_size_gb - cache_size_gb).abs() < 1e-9)
            .map(|e| e.hit_ratio)
            .ok_or_else(|| {
                Error::config(format!(
                    "no cache hit-ratio entry for {workload:?} at {cache_size_gb} GB"
                ))
            })
    }
}

/// Serves one request: hit with the configured probability (drawing from the
/// hit band), otherwise from the benign or attacked miss band. Returns
/// whether it hit and the latency drawn.
pub fn cache_serve_with_outcome(
    cfg: &CacheConfig,
    workload: WorkloadKind,
    cache_size_gb: f64,
    attacked: bool,
    rng: &mut impl Rng,
) -> Result<(bool, f64)> {
    let p_hit = cfg.hit_ratio(workload, cache_size_gb)?;
    let hit = rng.random::<f64>() < p_hit;
    let band = if hit {
        cfg.hit_latency_band
    } else if attacked {
        cfg.miss_latency_band_attacked
    } else {
        cfg.miss_latency_band_benign
    };
    let latency = if band.hi_ms == band.lo_ms {
        band.lo_ms
    } else {
        rng.random_range(band.lo_ms..band.hi_ms)
    };
    Ok((hit, latency))
}

/// Latency of one request; see [`cache_serve_with_outcome`].
pub fn cache_serve(
    cfg: &CacheConfig,
    workload: WorkloadKind,
    cache_size_gb: f64,
    attacked: bool,
    rng: &mut impl Rng,
) -> Result<f64> {
    cache_serve_with_outcome(cfg, workload, cache_size_gb, attacked, rng).map(|(_, l)| l)
}
