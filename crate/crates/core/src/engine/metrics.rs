//! Append-only metric and event records, serialized as CSV.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct MetricRecord {
    pub t_s: f64,
    pub name: String,
    pub value: f64,
    pub tags: String,
}

/// Time-ordered metric log.
#[derive(Debug, Clone, Default)]
pub struct MetricsLog {
    records: Vec<MetricRecord>,
}

impl MetricsLog {
    pub fn new() -> Self {
        MetricsLog::default()
    }

    pub fn push(
        &mut self,
        t_s: f64,
        name: impl Into<String>,
        value: f64,
        tags: impl Into<String>,
    ) -> Result<()> {
        if let Some(last) = self.records.last() {
            if t_s < last.t_s {
                return Err(Error::validation(format!(
                    "metric record out of order: {t_s} after {}",
                    last.t_s
                )));
            }
        }
        self.records.push(MetricRecord {
            t_s,
            name: name.into(),
            value,
            tags: tags.into(),
        });
        Ok(())
    }

    pub fn records(&self) -> &[MetricRecord] {
        &self.records
    }

    pub fn values_for(&self, name: &str) -> Vec<(f64, f64)> {
        self.records
            .iter()
            .filter(|r| r.name == name)
            .map(|r| (r.t_s, r.value))
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("t_s,metric,value,tags\n");
        for r in &self.records {
            out.push_str(&format!(
                "{:.6},{},{:.6},{}\n",
                r.t_s, r.name, r.value, r.tags
            ));
        }
        out
    }
}

/// A notable transition written to the event log.
#[derive(Debug, Clone, PartialEq)]
pub struct LoggedEvent {
    pub t_s: f64,
    pub kind: &'static str,
    pub detail: String,
}

pub fn events_to_csv(events: &[LoggedEvent]) -> String {
    let mut out = String::from("t_s,kind,detail\n");
    for e in events {
        out.push_str(&format!("{:.6},{},{}\n", e.t_s, e.kind, e.detail));
    }
    out
}
