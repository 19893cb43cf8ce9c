use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use super::perm::PermUnitary;
use super::{check_extension_detail, ExtCheck};
use crate::error::{Error, Result};
use crate::parse::parse_element;

/// The 40 level-3 extendible unitaries with their images of `U`.
pub const LEVEL3_TABLE: &str = include_str!("../../data/level3_table.tsv");
/// The same table as first transcribed; five rows do not verify.
pub const LEVEL3_TABLE_RAW: &str = include_str!("../../data/level3_table_raw.tsv");

const HEADER: [&str; 3] = ["cycle", "element", "u_tilde"];

/// One data row: cycle notation (`-` if none), the unitary, and `Ũ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub line: usize,
    pub cycle: Option<String>,
    pub element: String,
    pub u_tilde: String,
}

/// Reads the tab-separated table. Blank lines and lines starting with `#`
/// are skipped; the first other line must be the header
/// `cycle<TAB>element<TAB>u_tilde`.
pub fn parse_table(text: &str) -> Result<Vec<TableRow>> {
    let mut rows = Vec::new();
    let mut header_seen = false;
    let mut offset = 0;
    for (i, raw) in text.split('\n').enumerate() {
        let start = offset;
        offset += raw.len() + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
        if !header_seen {
            if fields != HEADER {
                return Err(Error::Parse { position: start, message: format!("line {}: expected header {}", i + 1, HEADER.join("<TAB>")) });
            }
            header_seen = true;
            continue;
        }
        if fields.len() != 3 {
            return Err(Error::Parse {
                position: start,
                message: format!("line {}: expected 3 tab-separated columns, found {}", i + 1, fields.len()),
            });
        }
        rows.push(TableRow {
            line: i + 1,
            cycle: (fields[0] != "-").then(|| fields[0].to_string()),
            element: fields[1].to_string(),
            u_tilde: fields[2].to_string(),
        });
    }
    if !header_seen {
        return Err(Error::Parse { position: 0, message: "missing header line".into() });
    }
    Ok(rows)
}

#[derive(Clone, Debug, Serialize)]
pub struct RowOutcome {
    pub row: usize,
    pub line: usize,
    pub cycle: Option<String>,
    pub verified: bool,
    pub ext: Option<ExtCheck>,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct TableReport {
    pub rows: Vec<RowOutcome>,
}

impl TableReport {
    pub fn verified(&self) -> usize {
        self.rows.iter().filter(|r| r.verified).count()
    }

    pub fn total(&self) -> usize {
        self.rows.len()
    }

    pub fn failures(&self) -> Vec<usize> {
        self.rows.iter().filter(|r| !r.verified).map(|r| r.row).collect()
    }

    pub fn summary(&self) -> String {
        format!("{}/{} verified", self.verified(), self.total())
    }
}

impl fmt::Display for TableReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            let status = if r.verified { "ok  " } else { "FAIL" };
            writeln!(f, "{status} row {:>2}  {:<24} {}", r.row, r.cycle.as_deref().unwrap_or("-"), r.detail)?;
        }
        write!(f, "{}", self.summary())
    }
}

fn verify_row(index: usize, row: &TableRow) -> RowOutcome {
    let mut out = RowOutcome {
        row: index + 1,
        line: row.line,
        cycle: row.cycle.clone(),
        verified: false,
        ext: None,
        detail: String::new(),
    };
    let u = match parse_element(&row.element) {
        Ok(e) => e,
        Err(e) => {
            out.detail = format!("element: {e}");
            return out;
        }
    };
    let perm = match PermUnitary::from_element(&u) {
        Ok(p) => p,
        Err(_) => {
            out.detail = "element is not a permutation unitary".into();
            return out;
        }
    };
    if let Some(c) = &row.cycle {
        match PermUnitary::parse_cycles(perm.level(), c) {
            Ok(p) if p == perm => {}
            Ok(_) => {
                out.detail = format!("cycle column disagrees with the element ({})", perm.cycle_notation());
                return out;
            }
            Err(e) => {
                out.detail = format!("cycle column: {e}");
                return out;
            }
        }
    }
    let tilde = match parse_element(&row.u_tilde) {
        Ok(t) => t,
        Err(e) => {
            out.detail = format!("u_tilde: {e}");
            return out;
        }
    };
    match check_extension_detail(&perm.element(), &tilde) {
        Ok(ext) => {
            out.verified = ext.holds();
            out.ext = Some(ext);
            out.detail = match (ext.ext1, ext.ext2) {
                (true, true) => format!("extends with U -> {}", row.u_tilde),
                (false, true) => "first extension equation fails".into(),
                (true, false) => "second extension equation fails".into(),
                (false, false) => "both extension equations fail".into(),
            };
        }
        Err(e) => out.detail = e.to_string(),
    }
    out
}

/// Checks every row; malformed rows are reported as failures, a malformed
/// table is an error.
pub fn verify_table(text: &str) -> Result<TableReport> {
    let rows = parse_table(text)?;
    let rows = rows.par_iter().enumerate().map(|(i, r)| verify_row(i, r)).collect();
    Ok(TableReport { rows })
}
