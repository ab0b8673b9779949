use gkp_core::exact::triangle;
use gkp_core::ParamTuple;
use rug::Integer;
use serde::Serialize;

use crate::bfile::OeisEntry;
use crate::layout::TriangleLayout;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub n: usize,
    pub k: usize,
    /// Value from the b-file.
    pub expected: String,
    /// Value from the triangle.
    pub got: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerifyStatus {
    Match,
    Mismatch,
    /// The triangle has non-integer entries in the compared range.
    NonInteger,
    /// The b-file ends before row `N`.
    TooShort,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub anum: String,
    pub status: VerifyStatus,
    pub rows: usize,
    pub compared: usize,
    pub first_mismatch: Option<Mismatch>,
    pub note: Option<String>,
}

impl VerifyReport {
    pub fn is_match(&self) -> bool {
        self.status == VerifyStatus::Match
    }
}

/// Compares `|n k|` for rows `layout.row_offset ..= rows` with the entry.
pub fn verify_against(p: &ParamTuple, e: &OeisEntry, layout: &TriangleLayout, rows: usize) -> VerifyReport {
    let mut report = VerifyReport {
        anum: e.anum.clone(),
        status: VerifyStatus::Match,
        rows,
        compared: 0,
        first_mismatch: None,
        note: None,
    };
    let need = layout.len_through(rows);
    if e.values.len() < need {
        report.status = VerifyStatus::TooShort;
        report.note = Some(format!("{} values stored, {need} needed for row {rows}", e.values.len()));
        return report;
    }
    let t = triangle(p, rows);
    for (i, want) in e.values[..need].iter().enumerate() {
        let (n, k) = layout.position(i);
        let got = t.get(n as i64, k as i64);
        if *got.denom() != 1 {
            report.status = VerifyStatus::NonInteger;
            report.note = Some(format!("|{n} {k}| = {got} is not an integer; OEIS stores integers only"));
            return report;
        }
        report.compared += 1;
        if got.numer() != want {
            report.status = VerifyStatus::Mismatch;
            report.first_mismatch =
                Some(Mismatch { n, k, expected: want.to_string(), got: Integer::from(got.numer()).to_string() });
            return report;
        }
    }
    report
}
