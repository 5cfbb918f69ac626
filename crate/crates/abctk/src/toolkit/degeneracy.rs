//! Exact detection of polynomial relations among stored points.
//!
//! Each point lies on the zero-sum hyperplane, so the last coordinate is
//! eliminated and forms of a fixed degree live in the first n-1 variables.
//! The monomial-evaluation matrix is reduced by fraction-free (Bareiss)
//! elimination; every kernel vector is cleared to a primitive integer
//! vector and re-verified against the original matrix.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Pow, Signed, Zero};

use crate::counting::TuplePoint;
use crate::error::{Error, Result};

/// Result of a degeneracy probe.
#[derive(Debug, Clone)]
pub struct DegeneracyReport {
    pub degree: u32,
    pub n_points: usize,
    pub n: usize,
    /// Exponent vectors over x0..x_{n-2}, lexicographically descending.
    pub monomial_basis: Vec<Vec<u32>>,
    /// Primitive integer coefficient vectors, first nonzero entry positive,
    /// one per form vanishing on every point.
    pub kernel_basis: Vec<Vec<BigInt>>,
    /// True when there are fewer points than monomials, so a nonzero
    /// kernel is forced and says nothing about the points.
    pub underdetermined: bool,
}

/// All exponent vectors of total degree d in nvars variables, in
/// lexicographically descending order.
fn monomials(nvars: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(prefix: &mut Vec<u32>, left: u32, pos: usize, nvars: usize, out: &mut Vec<Vec<u32>>) {
        if pos == nvars - 1 {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=left).rev() {
            prefix.push(e);
            rec(prefix, left - e, pos + 1, nvars, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(nvars), d, 0, nvars, &mut out);
    out
}

fn evaluate_row(point: &TuplePoint, basis: &[Vec<u32>]) -> Vec<BigInt> {
    basis
        .iter()
        .map(|expo| {
            let mut v = BigInt::one();
            for (coord, &e) in point.coords().iter().zip(expo) {
                if e > 0 {
                    v *= Pow::pow(coord, e);
                }
            }
            v
        })
        .collect()
}

/// Divide out the content and make the first nonzero entry positive.
fn make_primitive(v: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for x in v.iter() {
        g = num::integer::gcd(g, x.clone());
    }
    if g.is_zero() {
        return;
    }
    for x in v.iter_mut() {
        *x = &*x / &g;
    }
    if let Some(first) = v.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in v.iter_mut() {
                *x = -&*x;
            }
        }
    }
}

/// Search for homogeneous forms of the given degree, in the coordinates
/// x0..x_{n-2}, that vanish at every point. The kernel basis is exact and
/// deterministic; vectors are indexed by the free columns of the
/// monomial-evaluation matrix in ascending order.
pub fn find_degeneracy(points: &[TuplePoint], degree: u32) -> Result<DegeneracyReport> {
    if points.is_empty() {
        return Err(Error::validation("find_degeneracy: no points given"));
    }
    if degree == 0 {
        return Err(Error::validation("find_degeneracy: degree must be >= 1"));
    }
    let n = points[0].n();
    if let Some(p) = points.iter().find(|p| p.n() != n) {
        return Err(Error::validation(format!(
            "find_degeneracy: mixed tuple lengths {} and {}",
            n,
            p.n()
        )));
    }
    let basis = monomials(n - 1, degree);
    let cols = basis.len();
    let rows: Vec<Vec<BigInt>> = points.iter().map(|p| evaluate_row(p, &basis)).collect();

    // Fraction-free forward elimination. After k pivots every entry is a
    // (k+1)x(k+1) minor of the original matrix, so the division by the
    // previous pivot is exact (Sylvester's identity).
    let mut m = rows.clone();
    let nrows = m.len();
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0usize;
    for c in 0..cols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..nrows {
            for j in c + 1..cols {
                let t = &m[r][c] * &m[i][j] - &m[i][c] * &m[r][j];
                debug_assert!((&t % &prev).is_zero());
                m[i][j] = t / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        pivot_cols.push(c);
        r += 1;
    }

    // One kernel vector per free column: set it to 1, other free columns
    // to 0, and solve the pivot rows bottom-up over the rationals.
    let mut kernel: Vec<Vec<BigInt>> = Vec::new();
    let is_pivot: Vec<bool> = {
        let mut v = vec![false; cols];
        for &c in &pivot_cols {
            v[c] = true;
        }
        v
    };
    for f in 0..cols {
        if is_pivot[f] {
            continue;
        }
        let mut v = vec![BigRational::zero(); cols];
        v[f] = BigRational::one();
        for (i, &pc) in pivot_cols.iter().enumerate().rev() {
            let mut s = BigRational::zero();
            for j in pc + 1..cols {
                if !m[i][j].is_zero() && !v[j].is_zero() {
                    s += BigRational::from(m[i][j].clone()) * &v[j];
                }
            }
            v[pc] = -s / BigRational::from(m[i][pc].clone());
        }
        // Clear denominators to a primitive integer vector.
        let mut den = BigInt::one();
        for x in &v {
            den = num::integer::lcm(den, x.denom().clone());
        }
        let mut w: Vec<BigInt> = v.iter().map(|x| x.numer() * (&den / x.denom())).collect();
        make_primitive(&mut w);
        // The kernel claim is exact; verify it against the raw matrix.
        for row in &rows {
            let acc: BigInt = row.iter().zip(&w).map(|(a, b)| a * b).sum();
            assert!(acc.is_zero(), "kernel vector fails exact re-verification");
        }
        kernel.push(w);
    }

    Ok(DegeneracyReport {
        degree,
        n_points: nrows,
        n,
        monomial_basis: basis,
        kernel_basis: kernel,
        underdetermined: nrows < cols,
    })
}
