//! Classification of fresh traces against disk profiles, and detector
//! accuracy evaluation over randomized disk combinations.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::detector::{kmeans2, pcm_distance, DiskProfile, PcmConfig};
use crate::engine::derive_rng;
use crate::error::{Error, Result};
use crate::workload::ThroughputTrace;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DetectorConfig {
    pub pcm: PcmConfig,
    /// Alarm when at least this many disks look anomalous simultaneously.
    pub alarm_threshold: usize,
    /// If the anomalous cluster captures more than this share of the
    /// known-benign calibration scores, the split is noise, not an attack,
    /// and everything is labeled benign.
    pub max_benign_share_in_hi: f64,
    pub kmeans_max_iter: usize,
    pub kmeans_tol: f64,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        DetectorConfig {
            pcm: PcmConfig::default(),
            alarm_threshold: 3,
            max_benign_share_in_hi: 0.05,
            kmeans_max_iter: 100,
            kmeans_tol: 1e-9,
        }
    }
}

/// Per-disk labels and the alarm decision for one classification round.
#[derive(Debug, Clone)]
pub struct Verdict {
    /// (disk id, anomalous) in input order.
    pub labels: Vec<(String, bool)>,
    pub alarm: bool,
    /// PCM score of each fresh trace against its disk's centroid.
    pub distances: Vec<f64>,
}

/// Scores one fresh trace per profiled disk and clusters the pooled
/// known-benign calibration scores plus the fresh scores with k-means
/// (k = 2). The cluster with the smaller centroid is benign. The alarm
/// fires when at least `alarm_threshold` fresh traces land in the anomalous
/// cluster.
pub fn classify_disks(
    new_traces: &[ThroughputTrace],
    profiles: &[DiskProfile],
    cfg: &DetectorConfig,
) -> Result<Verdict> {
    if new_traces.len() != profiles.len() {
        return Err(Error::validation(format!(
            "expected one trace per profiled disk: {} traces vs {} profiles",
            new_traces.len(),
            profiles.len()
        )));
    }
    let distances = new_traces
        .iter()
        .zip(profiles.iter())
        .map(|(trace, profile)| pcm_distance(&trace.samples, &profile.centroid, &cfg.pcm))
        .collect::<Result<Vec<f64>>>()?;

    let calibration: Vec<f64> = profiles
        .iter()
        .flat_map(|p| p.calibration_distances.iter().copied())
        .collect();
    let mut pooled = calibration.clone();
    pooled.extend(distances.iter().copied());

    let clustering = kmeans2(&pooled, cfg.kmeans_max_iter, cfg.kmeans_tol);

    let anomalous: Vec<bool> = if clustering.degenerate {
        vec![false; distances.len()]
    } else {
        // Share of known-benign calibration scores captured by the high
        // cluster. A genuine attack cluster contains essentially none of
        // them; a forced split of benign noise contains about half.
        let benign_in_hi = clustering.in_hi_cluster[..calibration.len()]
            .iter()
            .filter(|b| **b)
            .count();
        let share = if calibration.is_empty() {
            0.0
        } else {
            benign_in_hi as f64 / calibration.len() as f64
        };
        if share > cfg.max_benign_share_in_hi {
            vec![false; distances.len()]
        } else {
            clustering.in_hi_cluster[calibration.len()..].to_vec()
        }
    };

    let labels = profiles
        .iter()
        .zip(anomalous.iter())
        .map(|(p, a)| (p.disk_id.clone(), *a))
        .collect::<Vec<_>>();
    let alarm = anomalous.iter().filter(|a| **a).count() >= cfg.alarm_threshold;
    Ok(Verdict {
        labels,
        alarm,
        distances,
    })
}

/// Detector accuracy over randomized combinations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalSummary {
    pub combinations: usize,
    pub positives: usize,
    pub negatives: usize,
    /// Rates under the primary ground-truth rule: a combination is an attack
    /// when at least `alarm_threshold` disks carry attacked traces.
    pub fpr: Option<f64>,
    pub tpr: Option<f64>,
    /// Rates under the alternative labeling where any attacked disk makes
    /// the combination an attack case.
    pub fpr_any: Option<f64>,
    pub tpr_any: Option<f64>,
}

/// Draws `n_combinations` random four-disk assignments (each disk
/// independently benign or attacked), classifies each, and reports
/// false/true-positive rates under both ground-truth labelings.
///
/// Trials derive their RNG streams from `master_seed` and the trial index,
/// so results do not depend on evaluation order.
pub fn evaluate(
    profiles: &[DiskProfile],
    benign_pools: &[Vec<ThroughputTrace>],
    attacked_pools: &[Vec<ThroughputTrace>],
    n_combinations: usize,
    cfg: &DetectorConfig,
    master_seed: u64,
) -> Result<EvalSummary> {
    if benign_pools.len() != profiles.len() || attacked_pools.len() != profiles.len() {
        return Err(Error::validation(
            "need one benign and one attacked pool per profiled disk",
        ));
    }
    if benign_pools.iter().any(|p| p.is_empty()) || attacked_pools.iter().any(|p| p.is_empty()) {
        return Err(Error::validation("evaluation pools must be non-empty"));
    }

    let mut tp = 0usize;
    let mut fp = 0usize;
    let mut positives = 0usize;
    let mut negatives = 0usize;
    let mut tp_any = 0usize;
    let mut fp_any = 0usize;
    let mut positives_any = 0usize;
    let mut negatives_any = 0usize;

    for trial in 0..n_combinations {
        let mut rng = derive_rng(master_seed, &format!("detect-eval/{trial}"));
        let mut attacked_count = 0usize;
        let combination: Vec<ThroughputTrace> = (0..profiles.len())
            .map(|disk| {
                let attacked = rng.random::<f64>() < 0.5;
                if attacked {
                    attacked_count += 1;
                    let pool = &attacked_pools[disk];
                    pool[rng.random_range(0..pool.len())].clone()
                } else {
                    let pool = &benign_pools[disk];
                    pool[rng.random_range(0..pool.len())].clone()
                }
            })
            .collect();

        let verdict = classify_disks(&combination, profiles, cfg)?;

        let truth_primary = attacked_count >= cfg.alarm_threshold;
        if truth_primary {
            positives += 1;
            if verdict.alarm {
                tp += 1;
            }
        } else {
            negatives += 1;
            if verdict.alarm {
                fp += 1;
            }
        }

        let truth_any = attacked_count >= 1;
        if truth_any {
            positives_any += 1;
            if verdict.alarm {
                tp_any += 1;
            }
        } else {
            negatives_any += 1;
            if verdict.alarm {
                fp_any += 1;
            }
        }
    }

    let rate = |num: usize, den: usize| {
        if den == 0 {
            None
        } else {
            Some(num as f64 / den as f64)
        }
    };
    Ok(EvalSummary {
        combinations: n_combinations,
        positives,
        negatives,
        fpr: rate(fp, negatives),
        tpr: rate(tp, positives),
        fpr_any: rate(fp_any, negatives_any),
        tpr_any: rate(tp_any, positives_any),
    })
}
