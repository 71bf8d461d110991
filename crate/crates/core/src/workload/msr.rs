//! Parser for MSR-style block traces.
//!
//! Lines are comma-separated:
//! `timestamp,hostname,disk_number,operation,offset,size,response_time`
//! with the timestamp in 100 ns ticks, as published in the MSR Cambridge
//! block-trace collection. Timestamps are rebased to seconds relative to the
//! first request.

use std::fs;
use std::path::Path;

use rand::Rng;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceOp {
    Read,
    Write,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRequest {
    /// Seconds since the first request in the trace.
    pub timestamp_s: f64,
    pub op: TraceOp,
    pub offset: u64,
    pub size: u64,
}

#[derive(Debug, Clone)]
pub struct MsrTrace {
    pub requests: Vec<TraceRequest>,
    pub warnings: Vec<String>,
}

const TICKS_PER_SECOND: f64 = 1e7;

/// Loads up to `limit` requests from an MSR-style CSV file.
///
/// Malformed lines are hard errors naming the line; an empty file yields an
/// empty request list with a warning.
pub fn load_msr_trace(path: &Path, limit: Option<usize>) -> Result<MsrTrace> {
    let content = fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    parse_msr(&path.display().to_string(), &content, limit)
}

fn parse_msr(path: &str, content: &str, limit: Option<usize>) -> Result<MsrTrace> {
    let mut raw: Vec<(u64, TraceOp, u64, u64)> = Vec::new();
    let mut warnings = Vec::new();

    for (idx, line) in content.lines().enumerate() {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        if let Some(limit) = limit {
            if raw.len() >= limit {
                break;
            }
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() < 6 {
            return Err(Error::TraceParse {
                path: path.to_string(),
                line: line_no,
                message: format!(
                    "expected at least 6 comma-separated fields, got {}",
                    cols.len()
                ),
            });
        }
        let parse_u64 = |field: &str, what: &str| -> Result<u64> {
            field.trim().parse().map_err(|_| Error::TraceParse {
                path: path.to_string(),
                line: line_no,
                message: format!("non-numeric {what}: '{field}'"),
            })
        };
        let timestamp = parse_u64(cols[0], "timestamp")?;
        let op = match cols[3].trim().to_ascii_lowercase().as_str() {
            "read" => TraceOp::Read,
            "write" => TraceOp::Write,
            other => {
                return Err(Error::TraceParse {
                    path: path.to_string(),
                    line: line_no,
                    message: format!("unknown operation '{other}'"),
                })
            }
        };
        let offset = parse_u64(cols[4], "offset")?;
        let size = parse_u64(cols[5], "size")?;
        raw.push((timestamp, op, offset, size));
    }

    if raw.is_empty() {
        warnings.push(format!("{path}: trace file contains no requests"));
        return Ok(MsrTrace {
            requests: Vec::new(),
            warnings,
        });
    }

    // Rebase to the earliest timestamp and keep requests time-ordered.
    raw.sort_by_key(|(t, _, _, _)| *t);
    let t0 = raw[0].0;
    let requests = raw
        .into_iter()
        .map(|(t, op, offset, size)| TraceRequest {
            timestamp_s: (t - t0) as f64 / TICKS_PER_SECOND,
            op,
            offset,
            size,
        })
        .collect();
    Ok(MsrTrace { requests, warnings })
}

/// Writes requests back out in the MSR column layout (hostname and disk
/// number are synthesized).
pub fn write_msr_csv(path: &Path, requests: &[TraceRequest]) -> Result<()> {
    let mut out = String::new();
    for req in requests {
        let ticks = (req.timestamp_s * TICKS_PER_SECOND).round() as u64;
        let op = match req.op {
            TraceOp::Read => "Read",
            TraceOp::Write => "Write",
        };
        out.push_str(&format!(
            "{ticks},host0,0,{op},{offset},{size},0\n",
            offset = req.offset,
            size = req.size,
        ));
    }
    fs::write(path, out).map_err(|e| Error::io(path.display().to_string(), e))
}

/// Deterministic synthetic trace with exponential-ish inter-arrivals, used
/// where a real block trace is not configured.
pub fn synthetic_trace(
    count: usize,
    mean_interarrival_s: f64,
    mean_size_kb: f64,
    write_fraction: f64,
    rng: &mut impl Rng,
) -> Vec<TraceRequest> {
    let mut t = 0.0;
    let mut offset = 0u64;
    let mut requests = Vec::with_capacity(count);
    for _ in 0..count {
        let u: f64 = rng.random_range(1e-9..1.0);
        t += -mean_interarrival_s * u.ln();
        let size_kb = (mean_size_kb * rng.random_range(0.5..1.5)).max(4.0);
        let size = (size_kb * 1024.0) as u64;
        let op = if rng.random::<f64>() < write_fraction {
            TraceOp::Write
        } else {
            TraceOp::Read
        };
        requests.push(TraceRequest {
            timestamp_s: t,
            op,
            offset,
            size,
        });
        offset = offset.wrapping_add(size);
    }
    requests
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn parses_well_formed_lines() {
        let content = "\
128166372003061629,hm,0,Read,383496192,32768,1331\n\
128166372016382155,hm,0,Write,2247675904,4096,467\n\
128166372026382245,hm,0,Write,2246938624,4096,374\n";
        let trace = parse_msr("test.csv", content, None).unwrap();
        assert_eq!(trace.requests.len(), 3);
        assert!(trace.warnings.is_empty());
        assert_eq!(trace.requests[0].timestamp_s, 0.0);
        assert_eq!(trace.requests[0].op, TraceOp::Read);
        assert_eq!(trace.requests[1].size, 4096);
        assert!(trace.requests[1].timestamp_s > 1.0 && trace.requests[1].timestamp_s < 2.0);
        let sorted = trace
            .requests
            .windows(2)
            .all(|w| w[0].timestamp_s <= w[1].timestamp_s);
        assert!(sorted);
    }

    #[test]
    fn non_numeric_offset_names_the_line() {
        let content = "\
128166372003061629,hm,0,Read,383496192,32768,1331\n\
128166372016382155,hm,0,Write,not-a-number,4096,467\n";
        let err = parse_msr("bad.csv", content, None).unwrap_err();
        match err {
            Error::TraceParse { line, message, .. } => {
                assert_eq!(line, 2);
                assert!(message.contains("offset"), "{message}");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn empty_file_warns() {
        let trace = parse_msr("empty.csv", "", None).unwrap();
        assert!(trace.requests.is_empty());
        assert_eq!(trace.warnings.len(), 1);
    }

    #[test]
    fn respects_request_limit() {
        let content = "\
1000,hm,0,Read,0,4096,1\n\
2000,hm,0,Read,4096,4096,1\n\
3000,hm,0,Read,8192,4096,1\n";
        let trace = parse_msr("t.csv", content, Some(2)).unwrap();
        assert_eq!(trace.requests.len(), 2);
    }

    #[test]
    fn csv_round_trip_through_files() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("synagain.csv");
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let requests = synthetic_trace(500, 0.01, 64.0, 0.8, &mut rng);
        write_msr_csv(&path, &requests).unwrap();
        let back = load_msr_trace(&path, None).unwrap();
        assert_eq!(back.requests.len(), 500);
        let writes = back
            .requests
            .iter()
            .filter(|r| r.op == TraceOp::Write)
            .count();
        assert!(writes > 300 && writes < 500);
    }
}
