use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::case::CaseResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

impl Summary {
    pub fn tally(cases: &[CaseResult]) -> Self {
        let mut s = Summary::default();
        for c in cases {
            if c.skipped {
                s.skipped += 1;
            } else if c.passed {
                s.passed += 1;
            } else {
                s.failed += 1;
            }
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub sign_flag: i64,
    pub seed: u64,
    pub cases: Vec<CaseResult>,
    pub summary: Summary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

impl Report {
    /// 0 when every case that ran passed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.summary.failed == 0 {
            0
        } else {
            1
        }
    }

    /// Zeroes the per-case timings so that the serialized report depends only on the grid.
    pub fn without_timings(mut self) -> Self {
        for c in &mut self.cases {
            c.elapsed_ms = 0;
        }
        self
    }
}

pub fn emit_report(report: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Text => text_table(report),
    }
}

fn text_table(report: &Report) -> String {
    let opt = |v: Option<u64>| v.map_or_else(|| "-".to_string(), |v| v.to_string());
    let header = ["theorem", "p", "n", "s", "i", "d", "status", "lhs", "rhs", "ms", "witness"];
    let rows: Vec<[String; 11]> = report
        .cases
        .iter()
        .map(|c| {
            let status = if c.skipped {
                "SKIP"
            } else if c.passed {
                "ok"
            } else {
                "FAIL"
            };
            [
                c.spec.theorem.to_string(),
                c.spec.p.to_string(),
                c.spec.n.to_string(),
                opt(c.spec.s.map(|s| s as u64)),
                opt(c.spec.i),
                opt(c.spec.d),
                status.to_string(),
                c.lhs_terms.to_string(),
                c.rhs_terms.to_string(),
                c.elapsed_ms.to_string(),
                c.witness.clone().unwrap_or_default(),
            ]
        })
        .collect();
    let mut widths = header.map(str::len);
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    writeln!(
        out,
        "dickson verify {} (sign flag {:+}, seed {})",
        report.version, report.sign_flag, report.seed
    )
    .unwrap();
    let mut line = |cells: &[String]| {
        let mut l = String::new();
        for (k, (cell, w)) in cells.iter().zip(widths).enumerate() {
            if k > 0 {
                l.push_str("  ");
            }
            // numbers right-aligned, text left-aligned
            if (1..=5).contains(&k) || (7..=9).contains(&k) {
                write!(l, "{cell:>w$}").unwrap();
            } else {
                write!(l, "{cell:<w$}").unwrap();
            }
        }
        writeln!(out, "{}", l.trim_end()).unwrap();
    };
    line(&header.map(String::from));
    for row in &rows {
        line(row);
    }
    let s = report.summary;
    writeln!(out, "PASSED: {}  SKIPPED: {}  FAILED: {}", s.passed, s.skipped, s.failed).unwrap();
    out
}
