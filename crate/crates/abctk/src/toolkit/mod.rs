//! Record files, batch quality reports, degeneracy probes and a
//! function-field spot check.
//!
//! Everything here consumes or produces [`TupleRecord`]s so pipelines can
//! be chained through ordinary files.

mod degeneracy;
mod records;

pub use degeneracy::{find_degeneracy, DegeneracyReport};
pub use records::{
    load_records, read_records, save_records, write_records, Source, TupleRecord, RECORD_VERSION,
};

use std::collections::BTreeMap;

use num::rational::BigRational;
use num::traits::Zero;
use rand::Rng;

use crate::arith::UniPoly;
use crate::counting::{self, ExcessForm, FFTriple};
use crate::error::{Error, Result};

/// Histogram bin width for excess values.
pub const EXCESS_BIN_WIDTH: f64 = 0.25;

/// Parameters for a batch check.
#[derive(Debug, Clone)]
pub struct CheckConfig {
    pub eps: BigRational,
    pub form: ExcessForm,
    /// Threshold playing the role of the bounding constant: excesses above
    /// it are counted as violations.
    pub c_log: f64,
}

/// Per-record outcome of a batch check.
#[derive(Debug, Clone, PartialEq)]
pub enum RecordOutcome {
    Evaluated {
        index: usize,
        quality: f64,
        excess: f64,
        height: f64,
        counting_trunc: f64,
        infinite_quality: bool,
    },
    Failed {
        index: usize,
        message: String,
    },
}

/// Aggregates over the evaluated records; independent of record order.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckSummary {
    pub evaluated: usize,
    pub failed: usize,
    pub infinite: usize,
    pub violations: usize,
    pub max_excess: Option<f64>,
    /// bin floor(excess / 0.25) -> how many records landed there.
    pub histogram: BTreeMap<i64, usize>,
}

#[derive(Debug, Clone)]
pub struct CheckReport {
    pub entries: Vec<RecordOutcome>,
    pub summary: CheckSummary,
}

/// Evaluate height, truncated counting, quality and excess for every
/// record. A record that cannot be evaluated (bad shape, or factoring it
/// blows the budget) becomes a `Failed` entry and checking continues.
pub fn check(records: &[TupleRecord], cfg: &CheckConfig) -> Result<CheckReport> {
    if cfg.eps < BigRational::zero() {
        return Err(Error::domain("check: epsilon must be nonnegative"));
    }
    let mut entries = Vec::with_capacity(records.len());
    let mut summary = CheckSummary {
        evaluated: 0,
        failed: 0,
        infinite: 0,
        violations: 0,
        max_excess: None,
        histogram: BTreeMap::new(),
    };
    for (index, rec) in records.iter().enumerate() {
        let outcome = (|| -> Result<RecordOutcome> {
            let point = rec.to_point()?;
            let height = counting::height(&point);
            let counting_trunc = counting::counting_trunc(&point)?;
            let quality = if counting_trunc == 0.0 {
                f64::INFINITY
            } else {
                height / counting_trunc
            };
            let excess = counting::excess(&point, &cfg.eps, cfg.form)?;
            Ok(RecordOutcome::Evaluated {
                index,
                quality,
                excess,
                height,
                counting_trunc,
                infinite_quality: quality.is_infinite(),
            })
        })();
        let entry = outcome.unwrap_or_else(|e| RecordOutcome::Failed {
            index,
            message: e.to_string(),
        });
        match &entry {
            RecordOutcome::Evaluated {
                excess,
                infinite_quality,
                ..
            } => {
                summary.evaluated += 1;
                if *infinite_quality {
                    summary.infinite += 1;
                }
                if *excess > cfg.c_log {
                    summary.violations += 1;
                }
                summary.max_excess = Some(match summary.max_excess {
                    None => *excess,
                    Some(m) => m.max(*excess),
                });
                let bin = (excess / EXCESS_BIN_WIDTH).floor() as i64;
                *summary.histogram.entry(bin).or_insert(0) += 1;
            }
            RecordOutcome::Failed { .. } => summary.failed += 1,
        }
        entries.push(entry);
    }
    Ok(CheckReport { entries, summary })
}

fn random_poly<R: Rng + ?Sized>(rng: &mut R, max_deg: usize) -> UniPoly {
    let d = rng.gen_range(1..=max_deg);
    let mut coeffs: Vec<i64> = (0..=d).map(|_| rng.gen_range(-9..=9)).collect();
    while coeffs[d] == 0 {
        coeffs[d] = rng.gen_range(-9..=9);
    }
    UniPoly::from_ints(&coeffs)
}

/// A random zero-sum coprime polynomial triple with degrees up to max_deg,
/// for exercising the function-field inequality.
pub fn random_ff_triple<R: Rng + ?Sized>(rng: &mut R, max_deg: usize) -> FFTriple {
    assert!(max_deg >= 1);
    for _ in 0..10_000 {
        let a = random_poly(rng, max_deg);
        let b = random_poly(rng, max_deg);
        let c = a.add(&b).neg();
        if let Ok(t) = FFTriple::new(a, b, c) {
            return t;
        }
    }
    panic!("random function-field triple: resample limit hit");
}

/// Run `trials` random function-field triples through the degree
/// inequality; returns (passes, trials).
pub fn polyfield_verify<R: Rng + ?Sized>(
    rng: &mut R,
    trials: usize,
    max_deg: usize,
) -> Result<(usize, usize)> {
    let mut passes = 0;
    for _ in 0..trials {
        let t = random_ff_triple(rng, max_deg);
        if counting::ff_abc_check(&t)? {
            passes += 1;
        }
    }
    Ok((passes, trials))
}
