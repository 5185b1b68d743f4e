use std::fmt;
use std::io::Write;

use crate::error::Result;
use crate::io::format_f64;

pub const REPORT_HEADER: &str = "trial,method,x,cluster,value";

/// Which trial a row belongs to, or which summary it carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum TrialTag {
    Trial(usize),
    Mean,
    Median,
}

impl fmt::Display for TrialTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TrialTag::Trial(i) => write!(f, "{i}"),
            TrialTag::Mean => f.write_str("mean"),
            TrialTag::Median => f.write_str("median"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub trial: TrialTag,
    pub method: String,
    pub x: f64,
    pub cluster: Option<usize>,
    pub value: f64,
}

/// Tabular experiment output with a config echo.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExperimentReport {
    pub metadata: Vec<(String, String)>,
    pub rows: Vec<ReportRow>,
}

impl ExperimentReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn meta(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.metadata.push((key.into(), value.to_string()));
        self
    }

    pub fn push(
        &mut self,
        trial: TrialTag,
        method: &str,
        x: f64,
        cluster: Option<usize>,
        value: f64,
    ) {
        self.rows.push(ReportRow {
            trial,
            method: method.to_string(),
            x,
            cluster,
            value,
        });
    }

    pub fn extend(&mut self, other: ExperimentReport) {
        self.metadata.extend(other.metadata);
        self.rows.extend(other.rows);
    }

    /// Rows matching `trial` and `method`, in insertion order.
    pub fn select<'a>(
        &'a self,
        trial: TrialTag,
        method: &'a str,
    ) -> impl Iterator<Item = &'a ReportRow> + 'a {
        self.rows
            .iter()
            .filter(move |r| r.trial == trial && r.method == method)
    }

    /// `(x, value)` pairs of a summary (or single trial) for one method.
    pub fn series(&self, trial: TrialTag, method: &str) -> Vec<(f64, f64)> {
        self.select(trial, method).map(|r| (r.x, r.value)).collect()
    }

    /// Per-cluster values of a summary row set, indexed by cluster id.
    pub fn by_cluster(&self, trial: TrialTag, method: &str) -> Vec<f64> {
        let rows: Vec<&ReportRow> = self.select(trial, method).filter(|r| r.cluster.is_some()).collect();
        let len = rows.iter().filter_map(|r| r.cluster).max().map_or(0, |m| m + 1);
        let mut out = vec![0.0; len];
        for r in rows {
            out[r.cluster.unwrap()] = r.value;
        }
        out
    }

    pub fn methods(&self) -> Vec<String> {
        let mut seen: Vec<String> = Vec::new();
        for r in &self.rows {
            if !seen.contains(&r.method) {
                seen.push(r.method.clone());
            }
        }
        seen
    }

    /// Writes `#`-prefixed metadata, the fixed header, then one line per row.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> Result<()> {
        for (k, v) in &self.metadata {
            writeln!(w, "# {k}={v}")?;
        }
        writeln!(w, "{REPORT_HEADER}")?;
        for r in &self.rows {
            let cluster = r.cluster.map(|c| c.to_string()).unwrap_or_default();
            writeln!(
                w,
                "{},{},{},{},{}",
                r.trial,
                r.method,
                format_f64(r.x),
                cluster,
                format_f64(r.value)
            )?;
        }
        Ok(())
    }
}

pub(crate) fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

pub(crate) fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}
