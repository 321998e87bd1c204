//! Run reports and their JSON and CSV encodings.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::config::{ExperimentConfig, Format};

pub const SCHEMA_TAG: &str = "asgeirsson-run-report/v1";

/// Report number. Finite values serialize as JSON numbers, the rest as the
/// strings `"Infinity"`, `"-Infinity"` or `"NaN"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

impl fmt::Display for Num {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let x = self.0;
        if x.is_finite() {
            write!(f, "{x:?}")
        } else if x.is_nan() {
            f.write_str("NaN")
        } else if x > 0.0 {
            f.write_str("Infinity")
        } else {
            f.write_str("-Infinity")
        }
    }
}

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            s.serialize_f64(self.0)
        } else {
            s.collect_str(self)
        }
    }
}

impl From<f64> for Num {
    fn from(x: f64) -> Self {
        Self(x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Self::Pass => "pass",
            Self::Fail => "fail",
            Self::Error => "error",
        }
    }
}

/// One verdict. `value_s` and `value_sperp` hold the two compared quantities
/// where the check has them; `gap` is the quantity held against `tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub check: String,
    pub status: Status,
    pub value_s: Option<Num>,
    pub value_sperp: Option<Num>,
    pub gap: Option<Num>,
    pub tolerance: Num,
    pub error: Option<String>,
    pub details: BTreeMap<String, Num>,
}

impl Check {
    /// Passes iff `gap ≤ tolerance`; a non-finite gap fails.
    pub fn compare(name: &str, gap: f64, tolerance: f64) -> Self {
        let status = if gap <= tolerance { Status::Pass } else { Status::Fail };
        Self {
            check: name.to_string(),
            status,
            value_s: None,
            value_sperp: None,
            gap: Some(gap.into()),
            tolerance: tolerance.into(),
            error: None,
            details: BTreeMap::new(),
        }
    }

    pub fn error(name: &str, tolerance: f64, message: impl fmt::Display) -> Self {
        Self {
            check: name.to_string(),
            status: Status::Error,
            value_s: None,
            value_sperp: None,
            gap: None,
            tolerance: tolerance.into(),
            error: Some(message.to_string()),
            details: BTreeMap::new(),
        }
    }

    pub fn values(mut self, s: f64, s_perp: f64) -> Self {
        self.value_s = Some(s.into());
        self.value_sperp = Some(s_perp.into());
        self
    }

    pub fn detail(mut self, key: &str, x: impl Into<f64>) -> Self {
        self.details.insert(key.to_string(), Num(x.into()));
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub errored: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub schema: &'static str,
    pub experiment: String,
    pub name: Option<String>,
    pub config: Option<ExperimentConfig>,
    pub checks: Vec<Check>,
    pub summary: Summary,
    pub artifacts: BTreeMap<String, serde_json::Value>,
}

impl RunReport {
    /// Report with no checks.
    pub fn empty(experiment: &str) -> Self {
        Self {
            schema: SCHEMA_TAG,
            experiment: experiment.to_string(),
            name: None,
            config: None,
            checks: Vec::new(),
            summary: Summary::default(),
            artifacts: BTreeMap::new(),
        }
    }

    pub fn for_config(config: &ExperimentConfig) -> Self {
        Self { name: config.name.clone(), config: Some(config.clone()), ..Self::empty(config.kind.name()) }
    }

    pub fn push(&mut self, check: Check) {
        self.summary.total += 1;
        match check.status {
            Status::Pass => self.summary.passed += 1,
            Status::Fail => self.summary.failed += 1,
            Status::Error => self.summary.errored += 1,
        }
        self.checks.push(check);
    }

    pub fn artifact(&mut self, key: &str, value: impl Serialize) {
        let value = serde_json::to_value(value).expect("artifact values serialize");
        self.artifacts.insert(key.to_string(), value);
    }

    pub fn all_passed(&self) -> bool {
        self.summary.passed == self.summary.total
    }

    pub fn emit(&self, format: Format) -> Vec<u8> {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
        }
    }

    pub fn to_json(&self) -> Vec<u8> {
        let mut out = serde_json::to_vec_pretty(self).expect("reports serialize");
        out.push(b'\n');
        out
    }

    /// One row per check after a `# <schema tag>` comment line.
    pub fn to_csv(&self) -> Vec<u8> {
        let mut out = format!("# {SCHEMA_TAG}\n").into_bytes();
        let mut w = csv::Writer::from_writer(&mut out);
        let cell = |x: Option<Num>| x.map(|n| n.to_string()).unwrap_or_default();
        w.write_record(["experiment", "check", "value_S", "value_Sperp", "gap", "tolerance", "status"])
            .expect("in-memory write");
        for c in &self.checks {
            w.write_record([
                self.experiment.clone(),
                c.check.clone(),
                cell(c.value_s),
                cell(c.value_sperp),
                cell(c.gap),
                c.tolerance.to_string(),
                c.status.name().to_string(),
            ])
            .expect("in-memory write");
        }
        w.flush().expect("in-memory write");
        drop(w);
        out
    }
}
