//! Shipped `N_q(g)` tables and a consistency check against the bounds.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moduli_stats::in_pool;
use crate::zeta_bounds::{
    hasse_weil_bound, hasse_weil_serre_bound, ihara_bound, oesterle_search, SearchBudget,
};

/// Table for `q = 2, 4, ..., 128`.
pub const TABLE_P2: &str = include_str!("../data/nqg_p2.csv");
/// Table for `q = 3, 9, 27, 81`.
pub const TABLE_P3: &str = include_str!("../data/nqg_p3.csv");

/// One cell: `"5"`, `"80--91"` or `"--408"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TableValue {
    Exact { value: u64 },
    Interval { lo: u64, hi: u64 },
    UpperOnly { bound: u64 },
}

impl TableValue {
    /// Number of points of a known curve, if any.
    pub fn lower(&self) -> Option<u64> {
        match *self {
            TableValue::Exact { value } => Some(value),
            TableValue::Interval { lo, .. } => Some(lo),
            TableValue::UpperOnly { .. } => None,
        }
    }

    pub fn upper(&self) -> u64 {
        match *self {
            TableValue::Exact { value } => value,
            TableValue::Interval { hi, .. } => hi,
            TableValue::UpperOnly { bound } => bound,
        }
    }
}

impl FromStr for TableValue {
    type Err = Error;

    fn from_str(s: &str) -> Result<TableValue> {
        let bad = || Error::InvalidInput(format!("malformed table cell {s:?}"));
        let num = |t: &str| t.parse::<u64>().map_err(|_| bad());
        let s = s.trim();
        if let Some(b) = s.strip_prefix("--") {
            return Ok(TableValue::UpperOnly { bound: num(b)? });
        }
        match s.split_once("--") {
            Some((lo, hi)) => {
                let (lo, hi) = (num(lo)?, num(hi)?);
                if lo > hi {
                    return Err(bad());
                }
                Ok(TableValue::Interval { lo, hi })
            }
            None => Ok(TableValue::Exact { value: num(s)? }),
        }
    }
}

impl fmt::Display for TableValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableValue::Exact { value } => write!(f, "{value}"),
            TableValue::Interval { lo, hi } => write!(f, "{lo}--{hi}"),
            TableValue::UpperOnly { bound } => write!(f, "--{bound}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntry {
    pub q: u64,
    pub g: u64,
    pub value: TableValue,
}

/// Parses a table with header `g,q1,q2,...` and one row per genus; lines
/// starting with `#` are comments.
pub fn parse_tables(text: &str) -> Result<Vec<TableEntry>> {
    let bad = |why: String| Error::InvalidInput(format!("table: {why}"));
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = rdr.headers().map_err(|e| bad(e.to_string()))?.clone();
    if header.get(0) != Some("g") {
        return Err(bad("header must start with g".into()));
    }
    let qs: Vec<u64> = header
        .iter()
        .skip(1)
        .map(|h| h.parse().map_err(|_| bad(format!("bad field size {h:?}"))))
        .collect::<Result<_>>()?;
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let g: u64 = rec[0]
            .parse()
            .map_err(|_| bad(format!("bad genus {:?}", &rec[0])))?;
        for (q, cell) in qs.iter().zip(rec.iter().skip(1)) {
            out.push(TableEntry {
                q: *q,
                g,
                value: cell.parse()?,
            });
        }
    }
    Ok(out)
}

/// Upper bounds on `N_q(g)` to compare against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundMethod {
    HasseWeil,
    Serre,
    Ihara,
    /// Explicit-formula search with this many coefficients.
    Search(usize),
}

impl BoundMethod {
    pub fn bound(&self, q: u64, g: u64) -> Result<BigInt> {
        Ok(match *self {
            BoundMethod::HasseWeil => hasse_weil_bound(q, g),
            BoundMethod::Serre => hasse_weil_serre_bound(q, g),
            BoundMethod::Ihara => ihara_bound(q, g),
            BoundMethod::Search(m) => oesterle_search(q, g, m, SearchBudget::default())?.bound,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum DiffStatus {
    /// A known curve has more points than our bound allows.
    Violation { excess: BigInt },
    /// Our bound minus the table's upper value.
    Slack { slack: BigInt },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffRow {
    pub entry: TableEntry,
    pub bound: BigInt,
    pub method: BoundMethod,
    pub status: DiffStatus,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffReport {
    pub rows: Vec<DiffRow>,
}

impl DiffReport {
    pub fn violations(&self) -> impl Iterator<Item = &DiffRow> {
        self.rows
            .iter()
            .filter(|r| matches!(r.status, DiffStatus::Violation { .. }))
    }
}

/// Compares every entry with the best bound among `methods`.
pub fn table_diff(entries: &[TableEntry], methods: &[BoundMethod]) -> Result<DiffReport> {
    if methods.is_empty() {
        return Err(Error::InvalidInput("no bound methods".into()));
    }
    let rows = in_pool(|| {
        entries
            .par_iter()
            .map(|e| {
                let (bound, method) = methods
                    .iter()
                    .map(|m| m.bound(e.q, e.g).map(|b| (b, *m)))
                    .collect::<Result<Vec<_>>>()?
                    .into_iter()
                    .min_by(|x, y| x.0.cmp(&y.0))
                    .expect("nonempty");
                let status = match e.value.lower() {
                    Some(lo) if BigInt::from(lo) > bound => DiffStatus::Violation {
                        excess: BigInt::from(lo) - &bound,
                    },
                    _ => DiffStatus::Slack {
                        slack: &bound - BigInt::from(e.value.upper()),
                    },
                };
                Ok(DiffRow {
                    entry: *e,
                    bound,
                    method,
                    status,
                })
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(DiffReport { rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn find(entries: &[TableEntry], q: u64, g: u64) -> TableValue {
        entries.iter().find(|e| e.q == q && e.g == g).unwrap().value
    }

    #[test]
    fn shipped_tables_parse() {
        let p2 = parse_tables(TABLE_P2).unwrap();
        let p3 = parse_tables(TABLE_P3).unwrap();
        assert_eq!(p2.len(), 350);
        assert_eq!(p3.len(), 200);
        assert_eq!(find(&p2, 2, 1), TableValue::Exact { value: 5 });
        assert_eq!(find(&p2, 128, 13), TableValue::UpperOnly { bound: 408 });
        assert_eq!(find(&p2, 16, 5), TableValue::Interval { lo: 49, hi: 53 });
        assert_eq!(find(&p2, 2, 50), TableValue::Exact { value: 40 });
        assert_eq!(find(&p3, 3, 1), TableValue::Exact { value: 7 });
    }

    #[test]
    fn cells_round_trip() {
        for s in ["5", "80--91", "--408"] {
            assert_eq!(s.parse::<TableValue>().unwrap().to_string(), s);
        }
        for s in ["", "a", "9--3", "--", "1--2--3"] {
            assert!(s.parse::<TableValue>().is_err(), "{s:?}");
        }
    }

    #[test]
    fn diff_flags_fabricated_rows() {
        let real = TableEntry {
            q: 2,
            g: 1,
            value: TableValue::Exact { value: 5 },
        };
        let fake = TableEntry {
            q: 2,
            g: 1,
            value: TableValue::Interval { lo: 1000, hi: 1000 },
        };
        let r = table_diff(&[real, fake], &[BoundMethod::Ihara, BoundMethod::Serre]).unwrap();
        assert_eq!(
            r.rows[0].status,
            DiffStatus::Slack {
                slack: BigInt::from(0)
            }
        );
        assert_eq!(r.rows[0].bound, BigInt::from(5));
        assert_eq!(r.violations().count(), 1);
    }
}
