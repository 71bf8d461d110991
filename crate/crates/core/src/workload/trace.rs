//! Throughput time series: the exchange format between workload runs and the
//! detector.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

pub const TRACE_CSV_HEADER: &str = "t_s,throughput_mb_s";

/// A fixed-period series of (time, MB/s) samples.
#[derive(Debug, Clone, PartialEq)]
pub struct ThroughputTrace {
    pub label: String,
    pub sample_period_s: f64,
    pub samples: Vec<(f64, f64)>,
    /// Set when the run ended early because storage failed mid-run.
    pub aborted: bool,
}

impl ThroughputTrace {
    pub fn new(label: impl Into<String>, sample_period_s: f64) -> Self {
        ThroughputTrace {
            label: label.into(),
            sample_period_s,
            samples: Vec::new(),
            aborted: false,
        }
    }

    pub fn push(&mut self, t_s: f64, throughput_mb_s: f64) {
        self.samples.push((t_s, throughput_mb_s.max(0.0)));
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn mean(&self) -> f64 {
        if self.samples.is_empty() {
            return 0.0;
        }
        self.samples.iter().map(|(_, v)| v).sum::<f64>() / self.samples.len() as f64
    }

    pub fn validate(&self) -> Result<()> {
        if self.sample_period_s <= 0.0 {
            return Err(Error::validation("sample period must be positive"));
        }
        for pair in self.samples.windows(2) {
            let dt = pair[1].0 - pair[0].0;
            if (dt - self.sample_period_s).abs() > 1e-6 {
                return Err(Error::validation(format!(
                    "trace {} does not have a fixed sample period: step {dt} vs {}",
                    self.label, self.sample_period_s
                )));
            }
        }
        if self.samples.iter().any(|(_, v)| *v < 0.0) {
            return Err(Error::validation("throughput samples must be non-negative"));
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.samples.len() * 24 + 32);
        out.push_str(TRACE_CSV_HEADER);
        out.push('\n');
        for (t, v) in &self.samples {
            out.push_str(&format!("{t:.6},{v:.6}\n"));
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_csv()).map_err(|e| Error::io(path.display().to_string(), e))
    }

    pub fn from_csv_str(label: impl Into<String>, content: &str) -> Result<Self> {
        let label = label.into();
        let mut samples = Vec::new();
        for (idx, line) in content.lines().enumerate() {
            if idx == 0 {
                if line.trim() != TRACE_CSV_HEADER {
                    return Err(Error::config(format!(
                        "trace {label}: expected header '{TRACE_CSV_HEADER}', got '{line}'"
                    )));
                }
                continue;
            }
            if line.trim().is_empty() {
                continue;
            }
            let mut cols = line.split(',');
            let (Some(t), Some(v)) = (cols.next(), cols.next()) else {
                return Err(Error::config(format!(
                    "trace {label}: malformed line {}",
                    idx + 1
                )));
            };
            let t: f64 = t.trim().parse().map_err(|_| {
                Error::config(format!("trace {label}: bad time on line {}", idx + 1))
            })?;
            let v: f64 = v.trim().parse().map_err(|_| {
                Error::config(format!("trace {label}: bad throughput on line {}", idx + 1))
            })?;
            samples.push((t, v));
        }
        let sample_period_s = if samples.len() >= 2 {
            samples[1].0 - samples[0].0
        } else {
            1.0
        };
        let trace = ThroughputTrace {
            label,
            sample_period_s,
            samples,
            aborted: false,
        };
        trace.validate()?;
        Ok(trace)
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        let content =
            fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
        let label = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "trace".to_string());
        Self::from_csv_str(label, &content)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip() {
        let mut trace = ThroughputTrace::new("hdd0", 1.0);
        for i in 0..10 {
            trace.push(i as f64, 190.0 - i as f64);
        }
        let csv = trace.to_csv();
        let back = ThroughputTrace::from_csv_str("hdd0", &csv).unwrap();
        assert_eq!(back.samples.len(), 10);
        assert_eq!(back.sample_period_s, 1.0);
        assert!((back.samples[3].1 - 187.0).abs() < 1e-9);
    }

    #[test]
    fn uneven_period_rejected() {
        let trace = ThroughputTrace {
            label: "x".to_string(),
            sample_period_s: 1.0,
            samples: vec![(0.0, 1.0), (1.0, 1.0), (2.5, 1.0)],
            aborted: false,
        };
        assert!(trace.validate().is_err());
    }

    #[test]
    fn bad_header_rejected() {
        assert!(ThroughputTrace::from_csv_str("x", "time,mbps\n0,1\n").is_err());
    }
}
