//! Exponent pairs with q1^e1 barely above q2^e2.
//!
//! Because ln q2 / ln q1 is irrational for multiplicatively independent
//! bases, the fractional parts of e2 * ln q2 / ln q1 are dense, so pairs
//! with 0 < q1^e1 - q2^e2 < eps * q1^e1 exist for every eps. The scan walks
//! e2 upward, uses a float approximation of the log ratio only to pick a
//! four-wide candidate window for e1, and certifies every emitted pair by
//! exact big-integer comparison, so floats never decide an answer.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed};

use crate::arith;
use crate::error::{Error, Result};

/// Parity constraint on e1. The n=4 construction needs e1 odd to pin the
/// residues of 9^e1 mod 5.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Any,
    E1Odd,
}

/// A certified solution: 0 < q1^e1 - q2^e2 < eps * q1^e1, with the exact
/// relative gap (q1^e1 - q2^e2) / q1^e1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogRatioSolution {
    pub e1: u64,
    pub e2: u64,
    pub relative_gap: BigRational,
}

pub(crate) enum ScanEvent {
    Certified(LogRatioSolution),
    /// The next candidate power would exceed the digit budget; e1/e2 are the
    /// float-prefiltered exponents that were about to be materialized.
    BudgetHit { e1: u64, e2: u64, digits: usize },
}

const E2_SCAN_CAP: u64 = 10_000_000;
const LOG10_2: f64 = std::f64::consts::LOG10_2;

fn digits_of_bits(bits: u64) -> usize {
    (bits as f64 * LOG10_2).ceil() as usize + 1
}

/// ln q2 / ln q1 is rational iff q1 and q2 are powers of a common integer,
/// i.e. share their prime support with proportional exponent vectors.
fn require_independent(q1: &BigInt, q2: &BigInt) -> Result<()> {
    let f1 = arith::factorize(q1)?;
    let f2 = arith::factorize(q2)?;
    let e1 = f1.prime_powers();
    let e2 = f2.prime_powers();
    if e1.len() != e2.len() || e1.iter().map(|(p, _)| p).ne(e2.iter().map(|(p, _)| p)) {
        return Ok(());
    }
    let proportional = (0..e1.len()).all(|i| {
        (0..e1.len()).all(|j| {
            u64::from(e1[i].1) * u64::from(e2[j].1) == u64::from(e1[j].1) * u64::from(e2[i].1)
        })
    });
    if proportional {
        return Err(Error::domain(format!(
            "log_ratio: ln {} / ln {} is rational, the gap has no dense solutions",
            q2, q1
        )));
    }
    Ok(())
}

/// Walk e2 upward emitting certified solutions (at most one per e2, with
/// the smallest parity-respecting e1). The callback returns false to stop.
/// Hitting the digit budget emits a final BudgetHit event and stops.
pub(crate) fn scan(
    q1: &BigInt,
    q2: &BigInt,
    eps: &BigRational,
    parity: Parity,
    digit_budget: usize,
    mut emit: impl FnMut(ScanEvent) -> bool,
) -> Result<()> {
    let two = BigInt::from(2);
    if q1 < &two || q2 < &two {
        return Err(Error::domain("log_ratio: q1 and q2 must be >= 2"));
    }
    if !eps.is_positive() || eps > &BigRational::one() {
        return Err(Error::domain("log_ratio: eps must satisfy 0 < eps <= 1"));
    }
    require_independent(q1, q2)?;
    let num = eps.numer();
    let den = eps.denom();
    let beta = arith::ln_abs(q2) / arith::ln_abs(q1);
    let q1bits = q1.bits();
    let q2bits = q2.bits();

    let mut q2pow = BigInt::one();
    // q1 accumulator, always parked at the low end of the candidate window;
    // the window start never decreases as e2 grows.
    let mut cur_e: u64 = 0;
    let mut cur_pow = BigInt::one();

    for e2 in 1..=E2_SCAN_CAP {
        if digits_of_bits(q2pow.bits() + q2bits) > digit_budget {
            emit(ScanEvent::BudgetHit {
                e1: cur_e,
                e2,
                digits: digits_of_bits(q2pow.bits() + q2bits),
            });
            return Ok(());
        }
        q2pow *= q2;
        // True candidates are the integers in (e2 b, e2 b + delta); the
        // float floor is off by at most one, so four candidates cover every
        // case including the parity bump.
        let f = (e2 as f64 * beta).floor().max(0.0) as u64;
        let start = f.max(1);
        while cur_e < start {
            if digits_of_bits(cur_pow.bits() + q1bits) > digit_budget {
                emit(ScanEvent::BudgetHit {
                    e1: cur_e + 1,
                    e2,
                    digits: digits_of_bits(cur_pow.bits() + q1bits),
                });
                return Ok(());
            }
            cur_pow *= q1;
            cur_e += 1;
        }
        let mut tmp = cur_pow.clone();
        let mut te = cur_e;
        let mut found = None;
        loop {
            let parity_ok = match parity {
                Parity::Any => true,
                Parity::E1Odd => te % 2 == 1,
            };
            if parity_ok {
                let gap = &tmp - &q2pow;
                if gap.is_positive() && &gap * den < num * &tmp {
                    found = Some((te, gap, tmp.clone()));
                    break;
                }
            }
            if te >= f + 3 {
                break;
            }
            if digits_of_bits(tmp.bits() + q1bits) > digit_budget {
                emit(ScanEvent::BudgetHit {
                    e1: te + 1,
                    e2,
                    digits: digits_of_bits(tmp.bits() + q1bits),
                });
                return Ok(());
            }
            tmp *= q1;
            te += 1;
        }
        if let Some((e1, gap, pow)) = found {
            let sol = LogRatioSolution {
                e1,
                e2,
                relative_gap: BigRational::new(gap, pow),
            };
            if !emit(ScanEvent::Certified(sol)) {
                return Ok(());
            }
        }
    }
    Err(Error::resource(format!(
        "log_ratio: exhausted e2 <= {} without finishing; float prefilter \
         and exact certification disagree persistently",
        E2_SCAN_CAP
    )))
}

/// The first `count` certified solutions ordered by increasing e2, under
/// the default digit budget.
pub fn log_ratio_solutions(
    q1: &BigInt,
    q2: &BigInt,
    eps: &BigRational,
    parity: Parity,
    count: usize,
) -> Result<Vec<LogRatioSolution>> {
    log_ratio_solutions_with(q1, q2, eps, parity, count, super::DEFAULT_DIGIT_BUDGET)
}

/// As [`log_ratio_solutions`] with an explicit digit budget; exceeding it
/// before `count` solutions are certified is a resource error.
pub fn log_ratio_solutions_with(
    q1: &BigInt,
    q2: &BigInt,
    eps: &BigRational,
    parity: Parity,
    count: usize,
    digit_budget: usize,
) -> Result<Vec<LogRatioSolution>> {
    let mut out = Vec::new();
    if count == 0 {
        // Still validate the arguments.
        scan(q1, q2, eps, parity, digit_budget, |_| false)?;
        return Ok(out);
    }
    let mut budget_hit = None;
    scan(q1, q2, eps, parity, digit_budget, |ev| match ev {
        ScanEvent::Certified(s) => {
            out.push(s);
            out.len() < count
        }
        ScanEvent::BudgetHit { e1, e2, digits } => {
            budget_hit = Some((e1, e2, digits));
            false
        }
    })?;
    if out.len() < count {
        let (e1, e2, digits) = budget_hit.expect("scan ended without budget event");
        return Err(Error::resource(format!(
            "log_ratio: digit budget {} exceeded near (e1, e2) = ({}, {}) \
             ({} digits needed); found {} of {} solutions",
            digit_budget,
            e1,
            e2,
            digits,
            out.len(),
            count
        )));
    }
    Ok(out)
}
