//! Per-disk benign throughput profiles and the on-disk profile store.
//!
//! The store is a directory of raw trace CSVs plus a manifest; profiles
//! (centroid, dispersion, calibration distances) are recomputed on load so
//! the stored artifact stays plain data.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::detector::{pcm_distance, PcmConfig};
use crate::error::{Error, Result};
use crate::workload::ThroughputTrace;

/// Benign behavior profile for one disk.
#[derive(Debug, Clone)]
pub struct DiskProfile {
    pub disk_id: String,
    /// Pointwise mean of the member traces.
    pub centroid: Vec<(f64, f64)>,
    /// Pointwise standard deviation.
    pub dispersion: Vec<f64>,
    /// PCM distance of every member trace to the centroid; the known-benign
    /// score population the classifier pools with fresh scores.
    pub calibration_distances: Vec<f64>,
    pub sample_period_s: f64,
}

/// Builds a profile from ≥ 2 benign traces of identical shape.
pub fn profile_disk(
    disk_id: impl Into<String>,
    traces: &[ThroughputTrace],
    pcm: &PcmConfig,
) -> Result<DiskProfile> {
    let disk_id = disk_id.into();
    if traces.len() < 2 {
        return Err(Error::validation(format!(
            "disk {disk_id}: profiling needs at least two traces, got {}",
            traces.len()
        )));
    }
    let len = traces[0].len();
    let period = traces[0].sample_period_s;
    for trace in traces {
        if trace.len() != len || (trace.sample_period_s - period).abs() > 1e-9 {
            return Err(Error::validation(format!(
                "disk {disk_id}: profiling traces must share length and sample period"
            )));
        }
    }
    if len < 2 {
        return Err(Error::validation(format!(
            "disk {disk_id}: traces too short to profile"
        )));
    }

    let n = traces.len() as f64;
    let mut centroid = Vec::with_capacity(len);
    let mut dispersion = Vec::with_capacity(len);
    for i in 0..len {
        let t = traces[0].samples[i].0;
        let mean = traces.iter().map(|tr| tr.samples[i].1).sum::<f64>() / n;
        let var = traces
            .iter()
            .map(|tr| {
                let d = tr.samples[i].1 - mean;
                d * d
            })
            .sum::<f64>()
            / n;
        centroid.push((t, mean));
        dispersion.push(var.sqrt());
    }

    let calibration_distances = traces
        .iter()
        .map(|trace| pcm_distance(&trace.samples, &centroid, pcm))
        .collect::<Result<Vec<f64>>>()?;

    Ok(DiskProfile {
        disk_id,
        centroid,
        dispersion,
        calibration_distances,
        sample_period_s: period,
    })
}

#[derive(Debug, Serialize, Deserialize)]
struct Manifest {
    sample_period_s: f64,
    disks: Vec<ManifestDisk>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ManifestDisk {
    id: String,
    traces: Vec<String>,
}

/// Renders a profile store as (relative path, content) pairs:
/// `<disk>/trace_NNN.csv` files plus a `manifest.toml`.
pub fn profile_store_files(
    traces_by_disk: &[(String, Vec<ThroughputTrace>)],
) -> Result<Vec<(String, String)>> {
    let mut files = Vec::new();
    let mut manifest = Manifest {
        sample_period_s: 1.0,
        disks: Vec::new(),
    };
    for (disk_id, traces) in traces_by_disk {
        let mut entries = Vec::new();
        for (idx, trace) in traces.iter().enumerate() {
            let rel = format!("{disk_id}/trace_{idx:03}.csv");
            files.push((rel.clone(), trace.to_csv()));
            entries.push(rel);
            manifest.sample_period_s = trace.sample_period_s;
        }
        manifest.disks.push(ManifestDisk {
            id: disk_id.clone(),
            traces: entries,
        });
    }
    let toml = toml::to_string_pretty(&manifest)
        .map_err(|e| Error::config(format!("manifest serialization: {e}")))?;
    files.push(("manifest.toml".to_string(), toml));
    Ok(files)
}

/// Persists benign traces as `<dir>/<disk>/trace_NNN.csv` plus
/// `<dir>/manifest.toml`.
pub fn save_profile_store(
    dir: &Path,
    traces_by_disk: &[(String, Vec<ThroughputTrace>)],
) -> Result<()> {
    for (rel, content) in profile_store_files(traces_by_disk)? {
        let path = dir.join(&rel);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(|e| Error::io(parent.display().to_string(), e))?;
        }
        fs::write(&path, content).map_err(|e| Error::io(path.display().to_string(), e))?;
    }
    Ok(())
}

/// Loads a profile store and rebuilds the per-disk profiles.
pub fn load_profile_store(dir: &Path, pcm: &PcmConfig) -> Result<Vec<DiskProfile>> {
    let manifest_path = dir.join("manifest.toml");
    let raw = fs::read_to_string(&manifest_path)
        .map_err(|e| Error::io(manifest_path.display().to_string(), e))?;
    let manifest: Manifest =
        toml::from_str(&raw).map_err(|e| Error::config(format!("profile manifest: {e}")))?;
    let mut profiles = Vec::new();
    for disk in &manifest.disks {
        let traces = disk
            .traces
            .iter()
            .map(|rel| ThroughputTrace::read_csv(&dir.join(rel)))
            .collect::<Result<Vec<_>>>()?;
        profiles.push(profile_disk(&disk.id, &traces, pcm)?);
    }
    Ok(profiles)
}
