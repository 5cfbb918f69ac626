//! JSONL persistence for tuple records.
//!
//! One record per line. Coordinates travel as decimal strings so
//! arbitrarily large entries survive any JSON reader; `version` is checked
//! on load and `meta` is an open map that round-trips untouched.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use num::bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::constructions::ConstructionKind;
use crate::counting::{make_point, TuplePoint};
use crate::error::{Error, Result};

/// Where a record came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Source {
    #[serde(rename = "search")]
    Search,
    #[serde(rename = "double")]
    Double,
    #[serde(rename = "family2k")]
    Family2k,
    #[serde(rename = "p26-n4")]
    P26N4,
    #[serde(rename = "p26-general")]
    P26General,
    #[serde(rename = "manual")]
    Manual,
}

impl std::fmt::Display for Source {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Source::Search => "search",
            Source::Double => "double",
            Source::Family2k => "family2k",
            Source::P26N4 => "p26-n4",
            Source::P26General => "p26-general",
            Source::Manual => "manual",
        };
        f.write_str(s)
    }
}

impl From<ConstructionKind> for Source {
    fn from(kind: ConstructionKind) -> Source {
        match kind {
            ConstructionKind::Double => Source::Double,
            ConstructionKind::Family2k => Source::Family2k,
            ConstructionKind::P26N4 => Source::P26N4,
            ConstructionKind::P26General => Source::P26General,
        }
    }
}

/// One stored tuple. `x` holds the canonical coordinates as decimal
/// strings; `n` must match its length and `version` must be 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TupleRecord {
    pub version: u32,
    pub n: usize,
    pub x: Vec<String>,
    pub source: Source,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub meta: BTreeMap<String, serde_json::Value>,
}

pub const RECORD_VERSION: u32 = 1;

impl TupleRecord {
    pub fn from_point(point: &TuplePoint, source: Source) -> TupleRecord {
        TupleRecord {
            version: RECORD_VERSION,
            n: point.n(),
            x: point.coords().iter().map(|c| c.to_string()).collect(),
            source,
            meta: BTreeMap::new(),
        }
    }

    /// Parse the coordinates back into a point, insisting that the stored
    /// form is already canonical.
    pub fn to_point(&self) -> Result<TuplePoint> {
        if self.version != RECORD_VERSION {
            return Err(Error::validation(format!(
                "unsupported record version {} (expected {})",
                self.version, RECORD_VERSION
            )));
        }
        if self.n != self.x.len() {
            return Err(Error::validation(format!(
                "field n is {} but x has {} coordinates",
                self.n,
                self.x.len()
            )));
        }
        let mut coords = Vec::with_capacity(self.x.len());
        for (i, s) in self.x.iter().enumerate() {
            let c = BigInt::from_str(s).map_err(|_| {
                Error::validation(format!("x[{}] = {:?} is not a decimal integer", i, s))
            })?;
            coords.push(c);
        }
        let point = make_point(coords.clone())?;
        if point.coords() != coords.as_slice() {
            return Err(Error::validation(
                "coordinates are not in canonical form (shared factor or negative lead)",
            ));
        }
        Ok(point)
    }
}

/// Serialize records as JSON lines.
pub fn write_records<W: Write>(w: &mut W, records: &[TupleRecord]) -> Result<()> {
    for rec in records {
        let line = serde_json::to_string(rec).map_err(|e| Error::validation(e.to_string()))?;
        writeln!(w, "{}", line)?;
    }
    Ok(())
}

/// Parse JSON lines into validated records. Blank lines are skipped; any
/// syntactic or semantic failure reports its 1-based line number.
pub fn read_records<R: BufRead>(r: R) -> Result<Vec<TupleRecord>> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: TupleRecord = serde_json::from_str(&line).map_err(|e| Error::Parse {
            line: i + 1,
            msg: e.to_string(),
        })?;
        rec.to_point().map_err(|e| Error::Parse {
            line: i + 1,
            msg: e.to_string(),
        })?;
        out.push(rec);
    }
    Ok(out)
}

pub fn save_records(path: &Path, records: &[TupleRecord]) -> Result<()> {
    let file = File::create(path)?;
    let mut w = BufWriter::new(file);
    write_records(&mut w, records)?;
    w.flush()?;
    Ok(())
}

pub fn load_records(path: &Path) -> Result<Vec<TupleRecord>> {
    let file = File::open(path)?;
    read_records(BufReader::new(file))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::family_2k;
    use crate::search::search_triples;
    use serde_json::json;

    fn sample_records() -> Vec<TupleRecord> {
        let mut recs: Vec<TupleRecord> = search_triples(100, 1.0, 1)
            .unwrap()
            .into_iter()
            .map(|h| TupleRecord::from_point(&h.point, Source::Search))
            .collect();
        let big = family_2k(15).unwrap();
        recs.push(TupleRecord::from_point(&big, Source::Family2k));
        recs
    }

    #[test]
    fn round_trip_preserves_records_and_meta() {
        let mut recs = sample_records();
        recs[0]
            .meta
            .insert("note".to_string(), json!("hand picked"));
        recs[0]
            .meta
            .insert("tags".to_string(), json!([1, 2, 3]));
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("tuples.jsonl");
        save_records(&path, &recs).unwrap();
        let loaded = load_records(&path).unwrap();
        assert_eq!(loaded, recs);
        // The 3^(2^15) coordinate really is huge and survives the trip.
        assert!(loaded.last().unwrap().x[2].len() > 10_000);
    }

    #[test]
    fn points_round_trip_through_records() {
        for rec in sample_records() {
            let p = rec.to_point().unwrap();
            assert_eq!(TupleRecord::from_point(&p, rec.source), {
                let mut r = rec.clone();
                r.meta.clear();
                r
            });
        }
    }

    #[test]
    fn load_reports_line_numbers() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.jsonl");
        let good = serde_json::to_string(&sample_records()[0]).unwrap();
        std::fs::write(&path, format!("{}\nnot json\n", good)).unwrap();
        match load_records(&path) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {:?}", other),
        }
    }

    #[test]
    fn load_rejects_bad_version_and_shape() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.jsonl");

        let mut rec = sample_records()[0].clone();
        rec.version = 2;
        save_records(&path, std::slice::from_ref(&rec)).unwrap();
        match load_records(&path) {
            Err(Error::Parse { line, msg }) => {
                assert_eq!(line, 1);
                assert!(msg.contains("version"));
            }
            other => panic!("expected parse error, got {:?}", other),
        }

        // Non-canonical coordinates: a shared factor of 2.
        let rec = TupleRecord {
            version: 1,
            n: 3,
            x: vec!["2".into(), "16".into(), "-18".into()],
            source: Source::Manual,
            meta: BTreeMap::new(),
        };
        save_records(&path, std::slice::from_ref(&rec)).unwrap();
        match load_records(&path) {
            Err(Error::Parse { line, msg }) => {
                assert_eq!(line, 1);
                assert!(msg.contains("canonical"));
            }
            other => panic!("expected parse error, got {:?}", other),
        }
    }

    #[test]
    fn to_point_checks_fields() {
        let mut rec = sample_records()[0].clone();
        rec.n = 4;
        assert!(matches!(rec.to_point(), Err(Error::Validation(_))));
        let mut rec = sample_records()[0].clone();
        rec.x[1] = "eight".into();
        let err = rec.to_point().unwrap_err();
        assert!(err.to_string().contains("x[1]"));
    }

    #[test]
    fn source_serialization_is_kebab() {
        assert_eq!(serde_json::to_string(&Source::P26N4).unwrap(), "\"p26-n4\"");
        assert_eq!(
            serde_json::to_string(&Source::P26General).unwrap(),
            "\"p26-general\""
        );
        assert_eq!(Source::from(ConstructionKind::Double), Source::Double);
        assert_eq!(Source::Family2k.to_string(), "family2k");
    }

    #[test]
    fn blank_lines_are_skipped() {
        let good = serde_json::to_string(&sample_records()[0]).unwrap();
        let text = format!("\n{}\n\n", good);
        let recs = read_records(text.as_bytes()).unwrap();
        assert_eq!(recs.len(), 1);
    }
}
