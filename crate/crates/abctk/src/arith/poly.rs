//! Univariate polynomials over the rationals: exact arithmetic, gcd by a
//! primitive pseudo-remainder sequence over the integers, and the radical
//! `f / gcd(f, f')` that strips repeated factors.

use std::fmt;

use num::bigint::BigInt;
use num::integer::Integer;
use num::rational::BigRational;
use num::traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense polynomial with ascending rational coefficients. The zero
/// polynomial is the empty coefficient list; otherwise the leading
/// coefficient is nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniPoly {
    coeffs: Vec<BigRational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        UniPoly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        UniPoly::new(vec![c])
    }

    /// Convenience constructor from integer coefficients, constant first.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        UniPoly::new(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    /// The monomial c * t^k.
    pub fn monomial(c: BigRational, k: usize) -> Self {
        if c.is_zero() {
            return UniPoly::zero();
        }
        let mut coeffs = vec![BigRational::zero(); k + 1];
        coeffs[k] = c;
        UniPoly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero);
            let b = other
                .coeffs
                .get(i)
                .cloned()
                .unwrap_or_else(BigRational::zero);
            out.push(a + b);
        }
        UniPoly::new(out)
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }

    pub fn scale(&self, c: &BigRational) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Quotient and remainder with `deg r < deg d`. Division by zero is a
    /// domain error.
    pub fn div_rem(&self, d: &UniPoly) -> Result<(UniPoly, UniPoly)> {
        if d.is_zero() {
            return Err(Error::domain("poly div_rem: division by zero"));
        }
        let dd = d.degree().unwrap();
        let lc = d.leading().unwrap();
        let mut r = self.clone();
        let mut q = UniPoly::zero();
        while let Some(dr) = r.degree() {
            if dr < dd {
                break;
            }
            let c = r.leading().unwrap() / lc;
            let term = UniPoly::monomial(c, dr - dd);
            q = q.add(&term);
            r = r.sub(&term.mul(d));
        }
        Ok((q, r))
    }

    pub fn derivative(&self) -> UniPoly {
        if self.coeffs.len() <= 1 {
            return UniPoly::zero();
        }
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// Scale to leading coefficient 1; the zero polynomial stays zero.
    pub fn monic(&self) -> UniPoly {
        match self.leading() {
            None => UniPoly::zero(),
            Some(lc) => self.scale(&lc.recip()),
        }
    }

    /// Clear denominators and divide out the integer content; the sign
    /// follows the leading coefficient.
    fn primitive_int(&self) -> Vec<BigInt> {
        let mut den = BigInt::one();
        for c in &self.coeffs {
            den = den.lcm(c.denom());
        }
        let mut ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        let mut content = BigInt::zero();
        for c in &ints {
            content = content.gcd(c);
        }
        if content.is_zero() {
            return ints;
        }
        if ints.last().is_some_and(|lc| lc.is_negative()) {
            content = -content;
        }
        for c in &mut ints {
            *c /= &content;
        }
        ints
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.abs();
            if i == 0 {
                write!(f, "{}", a)?;
            } else {
                if !a.is_one() {
                    write!(f, "{}*", a)?;
                }
                if i == 1 {
                    write!(f, "t")?;
                } else {
                    write!(f, "t^{}", i)?;
                }
            }
        }
        Ok(())
    }
}

fn int_degree(p: &[BigInt]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

/// Primitive part in place: divide by the gcd of the coefficients, leading
/// coefficient made positive.
fn make_primitive(p: &mut Vec<BigInt>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    let mut content = BigInt::zero();
    for c in p.iter() {
        content = content.gcd(c);
    }
    if content.is_zero() {
        return;
    }
    if p.last().is_some_and(|lc| lc.is_negative()) {
        content = -content;
    }
    for c in p.iter_mut() {
        *c /= &content;
    }
}

/// Pseudo-remainder of lc(g)^(deg f - deg g + 1) * f by g over the integers.
fn pseudo_rem(f: &[BigInt], g: &[BigInt]) -> Vec<BigInt> {
    let dg = int_degree(g).expect("pseudo_rem: zero divisor");
    let lc = g[dg].clone();
    let mut r: Vec<BigInt> = f.to_vec();
    loop {
        let dr = match int_degree(&r) {
            Some(d) if d >= dg => d,
            _ => break,
        };
        let coef = r[dr].clone();
        for c in r.iter_mut() {
            *c *= &lc;
        }
        let shift = dr - dg;
        for (i, gc) in g.iter().enumerate().take(dg + 1) {
            r[i + shift] -= &coef * gc;
        }
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
    }
    r
}

/// Monic gcd over the rationals via a primitive pseudo-remainder sequence.
/// Both inputs zero is a domain error; a constant gcd is returned as 1.
pub fn poly_gcd(f: &UniPoly, g: &UniPoly) -> Result<UniPoly> {
    if f.is_zero() && g.is_zero() {
        return Err(Error::domain("poly_gcd: both arguments are zero"));
    }
    if f.is_zero() {
        return Ok(g.monic());
    }
    if g.is_zero() {
        return Ok(f.monic());
    }
    let mut a = f.primitive_int();
    let mut b = g.primitive_int();
    if int_degree(&a) < int_degree(&b) {
        std::mem::swap(&mut a, &mut b);
    }
    while int_degree(&b).is_some() {
        let mut r = pseudo_rem(&a, &b);
        make_primitive(&mut r);
        a = b;
        b = r;
    }
    let rat = UniPoly::new(
        a.into_iter()
            .map(BigRational::from_integer)
            .collect::<Vec<_>>(),
    );
    if rat.degree() == Some(0) {
        return Ok(UniPoly::one());
    }
    Ok(rat.monic())
}

/// Product of the distinct irreducible factors of `f`, monic: the exact
/// division `f / gcd(f, f')`. Zero input is a domain error; constants have
/// radical 1.
pub fn poly_radical(f: &UniPoly) -> Result<UniPoly> {
    if f.is_zero() {
        return Err(Error::domain("poly_radical: zero polynomial"));
    }
    if f.degree() == Some(0) {
        return Ok(UniPoly::one());
    }
    let g = poly_gcd(f, &f.derivative())?;
    let (q, r) = f.div_rem(&g)?;
    debug_assert!(r.is_zero(), "radical division must be exact");
    Ok(q.monic())
}
