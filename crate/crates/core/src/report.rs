//! Verification reports shared by the grid runners and the CLI.

use std::fmt::Display;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

pub const SCHEMA: &str = "blockdeg/1";

pub(crate) fn ser_display<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

pub(crate) fn ser_display_seq<T: Display, S: Serializer>(v: &[T], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&x.to_string())?;
    }
    seq.end()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub cell: String,
    pub kind: String,
    pub detail: String,
}

impl Violation {
    pub fn new(cell: impl Into<String>, kind: impl Into<String>, detail: impl Into<String>) -> Self {
        Violation { cell: cell.into(), kind: kind.into(), detail: detail.into() }
    }
}

/// Outcome of one grid cell.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CellOutcome {
    pub checked: bool,
    pub violations: Vec<Violation>,
    pub ambiguous: Vec<Violation>,
}

impl CellOutcome {
    pub fn skipped() -> Self {
        CellOutcome::default()
    }

    pub fn checked() -> Self {
        CellOutcome { checked: true, ..Default::default() }
    }

    pub fn violation(mut self, v: Violation) -> Self {
        self.violations.push(v);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub schema: &'static str,
    pub command: String,
    pub grid: serde_json::Value,
    pub cells_checked: usize,
    pub cells_skipped: usize,
    pub violations: Vec<Violation>,
    pub ambiguous: Vec<Violation>,
    /// Milliseconds; excluded from equality of reports in practice.
    pub wall_time_ms: u128,
}

impl VerificationReport {
    /// Merges cell outcomes in grid order.
    pub fn from_cells(
        command: impl Into<String>,
        grid: serde_json::Value,
        cells: impl IntoIterator<Item = CellOutcome>,
        wall_time_ms: u128,
    ) -> Self {
        let mut report = VerificationReport {
            schema: SCHEMA,
            command: command.into(),
            grid,
            cells_checked: 0,
            cells_skipped: 0,
            violations: Vec::new(),
            ambiguous: Vec::new(),
            wall_time_ms,
        };
        for cell in cells {
            if cell.checked {
                report.cells_checked += 1;
            } else {
                report.cells_skipped += 1;
            }
            report.violations.extend(cell.violations);
            report.ambiguous.extend(cell.ambiguous);
        }
        report
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// Copy with the timing zeroed, for byte-stable comparisons.
    pub fn without_timing(&self) -> Self {
        VerificationReport { wall_time_ms: 0, ..self.clone() }
    }
}
