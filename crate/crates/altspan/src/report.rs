//! Structured reports for command-line runs.
//!
//! A report records what ran, digests of every input file (so disagreements
//! are reproducible bit for bit), the primary result, and any cross-checks
//! performed by independent methods. Exact methods must agree exactly;
//! statistical checks carry their tolerance in the method name.

use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest as _, Sha256};

use crate::error::Error;
use crate::estimator::Estimate;

#[derive(Debug, Clone, Serialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CrossCheck {
    pub method: String,
    pub value: String,
    pub agree: bool,
}

/// The primary result of a run.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportResult {
    /// An exact count, decimal, arbitrary precision.
    Count(String),
    /// A sampling estimate with its standard error.
    Estimate {
        value: f64,
        std_error: f64,
        samples: usize,
    },
    /// A non-numeric outcome (e.g. a file was written, or a yes/no verdict).
    Text(String),
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Vec<FileDigest>,
    pub result: ReportResult,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub cross_checks: Vec<CrossCheck>,
    pub wall_time_ms: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip)]
    started: Instant,
}

impl RunReport {
    pub fn new(command: impl Into<String>) -> RunReport {
        RunReport {
            command: command.into(),
            inputs: Vec::new(),
            result: ReportResult::Text(String::new()),
            notes: Vec::new(),
            cross_checks: Vec::new(),
            wall_time_ms: 0,
            seed: None,
            started: Instant::now(),
        }
    }

    /// Digest an input file into the report.
    pub fn add_input(&mut self, path: &Path) -> Result<(), Error> {
        let bytes = std::fs::read(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        self.inputs.push(FileDigest {
            path: path.display().to_string(),
            sha256: format!("{:x}", Sha256::digest(&bytes)),
        });
        Ok(())
    }

    pub fn set_count(&mut self, count: impl ToString) {
        self.result = ReportResult::Count(count.to_string());
    }

    pub fn set_estimate(&mut self, e: &Estimate) {
        self.result = ReportResult::Estimate {
            value: e.value,
            std_error: e.std_error,
            samples: e.samples,
        };
        self.seed = Some(e.seed);
    }

    pub fn set_text(&mut self, text: impl Into<String>) {
        self.result = ReportResult::Text(text.into());
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    /// Record a cross-check with an explicit agreement verdict.
    pub fn check(&mut self, method: impl Into<String>, value: impl ToString, agree: bool) {
        self.cross_checks.push(CrossCheck {
            method: method.into(),
            value: value.to_string(),
            agree,
        });
    }

    /// Record an exact-method cross-check: agreement is string equality with
    /// the primary count.
    pub fn check_count(&mut self, method: impl Into<String>, value: impl ToString) {
        let value = value.to_string();
        let agree = matches!(&self.result, ReportResult::Count(c) if *c == value);
        self.cross_checks.push(CrossCheck {
            method: method.into(),
            value,
            agree,
        });
    }

    /// True when every cross-check agreed.
    pub fn all_agree(&self) -> bool {
        self.cross_checks.iter().all(|c| c.agree)
    }

    /// Stamp the wall time; call once, just before printing.
    pub fn finish(&mut self) {
        self.wall_time_ms = self.started.elapsed().as_millis();
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is serializable")
    }

    /// Multi-line human rendering.
    pub fn human(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        for input in &self.inputs {
            let _ = writeln!(out, "input: {} sha256={}", input.path, input.sha256);
        }
        match &self.result {
            ReportResult::Count(c) => {
                let _ = writeln!(out, "result: {c}");
            }
            ReportResult::Estimate {
                value,
                std_error,
                samples,
            } => {
                let _ = writeln!(
                    out,
                    "result: {value} ± {std_error} ({samples} samples)"
                );
            }
            ReportResult::Text(t) => {
                let _ = writeln!(out, "result: {t}");
            }
        }
        for note in &self.notes {
            let _ = writeln!(out, "note: {note}");
        }
        for c in &self.cross_checks {
            let _ = writeln!(
                out,
                "check: {} = {} [{}]",
                c.method,
                c.value,
                if c.agree { "agree" } else { "DISAGREE" }
            );
        }
        if let Some(seed) = self.seed {
            let _ = writeln!(out, "seed: {seed}");
        }
        let _ = writeln!(out, "time: {} ms", self.wall_time_ms);
        out
    }
}
