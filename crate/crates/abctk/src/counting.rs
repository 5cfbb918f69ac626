//! Heights and counting statistics for rational points on the hyperplane
//! x0 + ... + x_{n-1} = 0, measured against the coordinate divisor.
//!
//! A point is stored as coprime nonzero integers. Its height is the log of
//! the largest coordinate, the full counting function adds up the logs of
//! all coordinates, and the truncated counting function caps every prime
//! multiplicity at one, which makes it the log of the radical. Quality is
//! the ratio height over truncated counting; all-unit tuples get the +inf
//! sentinel. A parallel set of functions treats triples of polynomials over
//! the rationals, where degrees play the role of logs and the analogous
//! inequality is a theorem rather than a conjecture.

use num::bigint::{BigInt, BigUint};
use num::rational::BigRational;
use num::traits::{Signed, ToPrimitive, Zero};

use crate::arith::{self, poly_gcd, poly_radical, UniPoly};
use crate::error::{Error, Result};

/// The ambient setting: the hyperplane X: sum of coordinates = 0 inside
/// projective (n-1)-space, with the divisor cut out by the coordinate
/// hyperplanes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HyperplaneContext {
    n: usize,
}

impl HyperplaneContext {
    pub fn new(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::validation(format!(
                "hyperplane context needs n >= 3, got {}",
                n
            )));
        }
        Ok(HyperplaneContext { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// A rational point of the hyperplane in coprime integer coordinates.
/// Invariants: at least 3 coordinates, all nonzero, sum zero, overall gcd 1,
/// first coordinate positive.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TuplePoint {
    coords: Vec<BigInt>,
}

impl TuplePoint {
    pub fn n(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<BigInt> {
        self.coords
    }

    pub fn context(&self) -> HyperplaneContext {
        HyperplaneContext { n: self.coords.len() }
    }

    /// Largest coordinate in absolute value.
    pub fn max_abs(&self) -> BigUint {
        self.coords
            .iter()
            .map(|x| x.magnitude())
            .max()
            .expect("nonempty coords")
            .clone()
    }

    /// Product of all |x_i|, exact.
    pub fn abs_product(&self) -> BigUint {
        self.coords.iter().map(|x| x.magnitude()).product()
    }
}

/// Canonicalize raw coordinates into a [`TuplePoint`]: divide out the
/// overall gcd and flip all signs if needed so the first coordinate is
/// positive. Rejects short lists, zero entries (naming the index), and a
/// nonzero sum.
pub fn make_point(coords: Vec<BigInt>) -> Result<TuplePoint> {
    if coords.len() < 3 {
        return Err(Error::validation(format!(
            "point needs at least 3 coordinates, got {}",
            coords.len()
        )));
    }
    for (i, x) in coords.iter().enumerate() {
        if x.is_zero() {
            return Err(Error::validation(format!("coordinate {} is zero", i)));
        }
    }
    let sum: BigInt = coords.iter().sum();
    if !sum.is_zero() {
        return Err(Error::validation(format!(
            "coordinates must sum to zero, got {}",
            sum
        )));
    }
    let mut g = BigUint::zero();
    for x in &coords {
        g = num::integer::gcd(g, x.magnitude().clone());
    }
    let gb = BigInt::from(g);
    let mut coords: Vec<BigInt> = coords.into_iter().map(|x| x / &gb).collect();
    if coords[0].is_negative() {
        for x in coords.iter_mut() {
            *x = -&*x;
        }
    }
    Ok(TuplePoint { coords })
}

/// h(P) = ln max |x_i|.
pub fn height(p: &TuplePoint) -> f64 {
    arith::ln_big(&p.max_abs())
}

/// N(P) = sum of ln |x_i|: every finite place counted with its full
/// intersection multiplicity against the coordinate divisor.
pub fn counting_full(p: &TuplePoint) -> f64 {
    p.coords().iter().map(arith::ln_abs).sum()
}

/// The radical of the coordinate product: the product of every prime
/// dividing some coordinate, each taken once.
pub fn point_radical(p: &TuplePoint) -> Result<BigUint> {
    let mut primes = std::collections::BTreeSet::new();
    for x in p.coords() {
        let f = arith::factorize(x)?;
        primes.extend(f.primes().cloned());
    }
    Ok(primes.into_iter().product())
}

/// N^(1)(P) = ln rad(prod |x_i|): multiplicities truncated at one.
/// Factorization of the coordinates can exhaust its budget, hence Result.
pub fn counting_trunc(p: &TuplePoint) -> Result<f64> {
    let mut primes = std::collections::BTreeSet::new();
    for x in p.coords() {
        let f = arith::factorize(x)?;
        primes.extend(f.primes().cloned());
    }
    let sum: f64 = primes
        .into_iter()
        .map(|q| arith::PrimePlace::new(q).mu)
        .sum();
    // An empty place set (radical 1) must read +0.0; the empty f64 sum
    // identity is -0.0.
    Ok(sum + 0.0)
}

/// m(P) = n h(P) - N(P): the archimedean share of the divisor height,
/// with the divisor height normalized to exactly n times the point height.
pub fn proximity(p: &TuplePoint) -> f64 {
    p.n() as f64 * height(p) - counting_full(p)
}

/// Discriminant contribution of the field of definition; identically zero
/// for rational points, which is the only case in scope.
pub fn discriminant_term(_p: &TuplePoint) -> f64 {
    0.0
}

/// quality(P) = h(P) / N^(1)(P), the exponent the abc-style bounds
/// constrain. All-unit tuples have N^(1) = 0 and get +inf.
pub fn quality(p: &TuplePoint) -> Result<f64> {
    let n1 = counting_trunc(p)?;
    if n1 == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(height(p) / n1)
}

/// Which side of the conjectured inequality carries the epsilon.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExcessForm {
    /// h - (1 + eps) N^(1): positive means max > rad^(1+eps) without the
    /// constant.
    Masser,
    /// (1 - eps) h - N^(1).
    Vojta,
}

/// Signed slack of the chosen inequality form. Positive excess means the
/// bound is violated before its additive constant. Requires eps >= 0.
pub fn excess(p: &TuplePoint, eps: &BigRational, form: ExcessForm) -> Result<f64> {
    if eps.is_negative() {
        return Err(Error::domain("excess: eps must be >= 0"));
    }
    let e = eps.numer().to_f64().unwrap() / eps.denom().to_f64().unwrap();
    let h = height(p);
    let n1 = counting_trunc(p)?;
    Ok(match form {
        ExcessForm::Masser => h - (1.0 + e) * n1,
        ExcessForm::Vojta => (1.0 - e) * h - n1,
    })
}

/// A triple of polynomials over the rationals with a + b + c = 0, pairwise
/// coprime, not all constant: the function-field counterpart of a triple
/// point, where every statistic is a degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FFTriple {
    a: UniPoly,
    b: UniPoly,
    c: UniPoly,
}

impl FFTriple {
    pub fn new(a: UniPoly, b: UniPoly, c: UniPoly) -> Result<Self> {
        for (name, f) in [("a", &a), ("b", &b), ("c", &c)] {
            if f.is_zero() {
                return Err(Error::validation(format!("ff triple: {} is zero", name)));
            }
        }
        if !a.add(&b).add(&c).is_zero() {
            return Err(Error::validation("ff triple: a + b + c != 0"));
        }
        if [a.degree(), b.degree(), c.degree()]
            .iter()
            .all(|d| *d == Some(0))
        {
            return Err(Error::validation("ff triple: all three are constant"));
        }
        for (pair, f, g) in [("a,b", &a, &b), ("a,c", &a, &c), ("b,c", &b, &c)] {
            if poly_gcd(f, g)?.degree() != Some(0) {
                return Err(Error::validation(format!(
                    "ff triple: {} share a factor",
                    pair
                )));
            }
        }
        Ok(FFTriple { a, b, c })
    }

    pub fn parts(&self) -> (&UniPoly, &UniPoly, &UniPoly) {
        (&self.a, &self.b, &self.c)
    }
}

/// Height in the function-field dictionary: the largest degree.
pub fn ff_height(t: &FFTriple) -> i64 {
    [&t.a, &t.b, &t.c]
        .iter()
        .map(|f| f.degree().unwrap() as i64)
        .max()
        .unwrap()
}

/// Truncated counting: the degree of the squarefree part of abc, i.e. the
/// number of distinct roots in an algebraic closure. The parts are pairwise
/// coprime, so the radical degrees add and the product never needs to be
/// formed.
pub fn ff_counting_trunc(t: &FFTriple) -> Result<i64> {
    let mut total = 0i64;
    for f in [&t.a, &t.b, &t.c] {
        total += poly_radical(f)?.degree().unwrap() as i64;
    }
    Ok(total)
}

/// The function-field abc inequality: max deg <= deg rad(abc) - 1. A
/// theorem in characteristic zero, so a false return indicates a bug; it
/// doubles as an internal oracle.
pub fn ff_abc_check(t: &FFTriple) -> Result<bool> {
    Ok(ff_height(t) < ff_counting_trunc(t)?)
}
