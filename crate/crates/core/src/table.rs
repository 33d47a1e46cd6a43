//! Published reference values, shipped as `data/table1.csv`.
//!
//! Each row lists the best lower bound known, the new upper bound and the best
//! upper bound known before. A marker records how the new upper bound was
//! obtained when it did not come from the level-3 program.

use crate::codes::ProblemSpec;
use crate::error::{Error, Result};
use crate::sdp::derived_doubling_bound;
use serde::{Deserialize, Serialize};

const TABLE1: &str = include_str!("../data/table1.csv");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Marker {
    /// Level-4 program (quadruples of words).
    K4,
    /// `N(n2+1, n3, d) <= 2 N(n2, n3, d)`.
    Doubling,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TableRow {
    pub n2: usize,
    pub n3: usize,
    pub d: usize,
    pub lower: u64,
    pub new_upper: u64,
    pub previous_upper: u64,
    #[serde(default, deserialize_with = "marker")]
    pub marker: Option<Marker>,
}

fn marker<'de, D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Option<Marker>, D::Error> {
    match String::deserialize(de)?.as_str() {
        "" => Ok(None),
        "k4" => Ok(Some(Marker::K4)),
        "doubling" => Ok(Some(Marker::Doubling)),
        other => Err(serde::de::Error::custom(format!("unknown marker {other:?}"))),
    }
}

impl TableRow {
    pub fn spec(&self) -> ProblemSpec {
        ProblemSpec::k3(self.n2, self.n3, self.d).expect("table rows are valid")
    }

    pub fn length(&self) -> usize {
        self.n2 + self.n3
    }
}

/// Parse a table in the shipped CSV layout.
pub fn parse_table(text: &str) -> Result<Vec<TableRow>> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    reader
        .deserialize()
        .enumerate()
        .map(|(i, r)| r.map_err(|e| Error::Parse { line: i + 2, msg: e.to_string() }))
        .collect()
}

/// The packaged table of new upper bounds.
pub fn table1() -> Vec<TableRow> {
    parse_table(TABLE1).expect("packaged table parses")
}

pub fn lookup(n2: usize, n3: usize, d: usize) -> Option<TableRow> {
    table1().into_iter().find(|r| (r.n2, r.n3, r.d) == (n2, n3, d))
}

/// A bound obtained from another one by adding a binary coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivedBound {
    pub from: ProblemSpec,
    pub from_bound: u64,
    pub spec: ProblemSpec,
    pub bound: u64,
}

/// Bounds obtained by doubling table entries: the two doubling-marked rows,
/// plus `(5,9,4)` from `(4,9,4)`, which has no row of its own.
pub fn doubling_bounds() -> Vec<DerivedBound> {
    let table = table1();
    let mut out = Vec::new();
    for (n2, n3, d) in [(4, 3, 3), (4, 9, 4), (1, 12, 8)] {
        let row = table.iter().find(|r| (r.n2, r.n3, r.d) == (n2, n3, d)).expect("source row present");
        let from = row.spec();
        let (spec, bound) = derived_doubling_bound(&from, row.new_upper);
        out.push(DerivedBound { from, from_bound: row.new_upper, spec, bound });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn packaged_table() {
        let t = table1();
        assert_eq!(t.len(), 134);
        assert!(t.iter().all(|r| r.lower <= r.new_upper && r.new_upper < r.previous_upper));
        assert_eq!(t.iter().filter(|r| r.marker == Some(Marker::Doubling)).count(), 2);
        assert_eq!(lookup(4, 3, 3).unwrap().marker, Some(Marker::K4));
        assert_eq!(lookup(2, 5, 3).unwrap().new_upper, 65);
    }

    #[test]
    fn doubling_matches_marked_rows() {
        for b in doubling_bounds() {
            if let Some(row) = lookup(b.spec.n2, b.spec.n3, b.spec.d) {
                assert_eq!(row.marker, Some(Marker::Doubling));
                assert_eq!(row.new_upper, b.bound);
            } else {
                assert_eq!((b.spec.n2, b.spec.n3, b.spec.d, b.bound), (5, 9, 4, 9180));
            }
        }
    }

    #[test]
    fn bad_marker_is_a_parse_error() {
        let text = "n2,n3,d,lower,newUpper,previousUpper,marker\n1,1,1,1,1,2,k5\n";
        assert!(matches!(parse_table(text), Err(Error::Parse { line: 2, .. })));
    }
}
