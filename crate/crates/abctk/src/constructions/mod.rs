//! Generators for tuples of provably high quality: the doubling map that
//! squares a triple into a quadruple on a quadric while preserving the
//! radical, the 3-power triple family whose radical collapse is certified
//! 2-adically, and the n = 4 and general n >= 5 constructions built from
//! near-ties between powers of multiplicatively independent bases.
//!
//! Every generator re-verifies its postconditions with exact integer
//! arithmetic before returning; nothing is certified through floats.
//! Generators refuse to materialize integers above a digit budget and
//! return the plan alone in that case.

use num::bigint::{BigInt, BigUint};
use num::integer::Integer;
use num::rational::BigRational;
use num::traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{self, is_prime_u64, mult_order};
use crate::counting::{make_point, TuplePoint};
use crate::error::{Error, Result};

mod logratio;

pub use logratio::{log_ratio_solutions, log_ratio_solutions_with, LogRatioSolution, Parity};
use logratio::{scan, ScanEvent};

/// Generators refuse to build integers beyond this many decimal digits
/// unless told otherwise.
pub const DEFAULT_DIGIT_BUDGET: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstructionKind {
    Double,
    Family2k,
    P26N4,
    P26General,
}

impl std::fmt::Display for ConstructionKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ConstructionKind::Double => "double",
            ConstructionKind::Family2k => "family2k",
            ConstructionKind::P26N4 => "p26-n4",
            ConstructionKind::P26General => "p26-general",
        };
        f.write_str(s)
    }
}

/// The parameters that pin down one construction instance; enough to
/// reproduce the tuple without storing it.
#[derive(Debug, Clone)]
pub struct ConstructionPlan {
    pub kind: ConstructionKind,
    pub n: usize,
    pub eps: Option<BigRational>,
    pub e1: Option<u64>,
    pub e2: Option<u64>,
    pub k: Option<u32>,
    pub primes: Vec<u64>,
    pub orders: Vec<u64>,
    pub extra_exponents: Vec<u64>,
    pub seed: Option<u64>,
}

impl ConstructionPlan {
    fn bare(kind: ConstructionKind, n: usize) -> Self {
        ConstructionPlan {
            kind,
            n,
            eps: None,
            e1: None,
            e2: None,
            k: None,
            primes: Vec::new(),
            orders: Vec::new(),
            extra_exponents: Vec::new(),
            seed: None,
        }
    }

    /// q_i = p_i^{r_i} for the general construction.
    pub fn q_values(&self) -> Vec<BigInt> {
        self.primes
            .iter()
            .zip(&self.orders)
            .map(|(&p, &r)| num::pow::pow(BigInt::from(p), r as usize))
            .collect()
    }
}

/// Outcome of a generator run: the tuple with its plan, or the plan alone
/// when materializing the tuple would break the digit budget.
#[derive(Debug, Clone)]
pub enum Constructed {
    Realized {
        point: TuplePoint,
        plan: ConstructionPlan,
    },
    PlanOnly {
        plan: ConstructionPlan,
        reason: String,
    },
}

impl Constructed {
    pub fn plan(&self) -> &ConstructionPlan {
        match self {
            Constructed::Realized { plan, .. } => plan,
            Constructed::PlanOnly { plan, .. } => plan,
        }
    }

    pub fn point(&self) -> Option<&TuplePoint> {
        match self {
            Constructed::Realized { point, .. } => Some(point),
            Constructed::PlanOnly { .. } => None,
        }
    }
}

/// Square a triple (a, b, c) into (a^2, 2ab, b^2, -c^2). The result stays
/// coprime, keeps the parent's radical (abc is always even for a coprime
/// zero-sum triple), exactly doubles the height up to one factor of 2, and
/// lies on the quadric x1^2 = 4 x0 x2.
pub fn double_triple(t: &TuplePoint) -> Result<TuplePoint> {
    if t.n() != 3 {
        return Err(Error::domain(format!(
            "double_triple: expected a triple, got n = {}",
            t.n()
        )));
    }
    let (a, b, c) = (&t.coords()[0], &t.coords()[1], &t.coords()[2]);
    let raw = vec![a * a, BigInt::from(2) * a * b, b * b, -(c * c)];
    let point = make_point(raw.clone())?;
    // gcd(a, b) = 1 forces gcd(a^2, b^2) = 1, so nothing was divided out.
    assert_eq!(point.coords(), &raw[..], "doubled tuple must stay primitive");
    // Radical preservation: rad(a'b'c'd') = rad(2 a^3 b^3 c^2) = rad(2abc),
    // and 2 | abc because three odd numbers cannot sum to zero.
    assert!(
        (a * b * c).is_even(),
        "coprime zero-sum triple must contain an even coordinate"
    );
    // Height law, exactly: max^2 <= max' <= 2 max^2 gives |h' - 2h| <= ln 2.
    let m = BigInt::from(t.max_abs());
    let m2 = &m * &m;
    let md = BigInt::from(point.max_abs());
    assert!(m2 <= md && md <= BigInt::from(2) * &m2);
    // The quadric relation (2ab)^2 = 4 a^2 b^2.
    assert_eq!(&point.coords()[1] * &point.coords()[1], BigInt::from(4) * &point.coords()[0] * &point.coords()[2]);
    Ok(point)
}

/// The triple (1, 3^(2^k) - 1, -3^(2^k)). Repeated squaring piles factors
/// of 2 into the middle coordinate: v_2(3^(2^k) - 1) = k + 2 exactly, so
/// rad(abc) <= 6 (3^(2^k) - 1) / 2^(k+2) < 3^(2^k) and the quality exceeds
/// 1 for every k with room that grows with k.
pub fn family_2k(k: u32) -> Result<TuplePoint> {
    family_2k_with(k, DEFAULT_DIGIT_BUDGET)
}

/// As [`family_2k`] with an explicit digit budget.
pub fn family_2k_with(k: u32, digit_budget: usize) -> Result<TuplePoint> {
    if k < 1 {
        return Err(Error::domain("family_2k: k must be >= 1"));
    }
    let digits = 3f64.log10() * 2f64.powi(k.min(2000) as i32);
    if digits > digit_budget as f64 {
        let shown = if digits < 1e15 {
            format!("{:.0}", digits)
        } else {
            format!("{:.3e}", digits)
        };
        return Err(Error::resource(format!(
            "family_2k: 3^(2^{}) needs about {} digits, over the budget of {}",
            k, shown, digit_budget
        )));
    }
    let pow = num::pow::pow(BigInt::from(3), 1usize << k);
    let m = &pow - 1;
    let v2 = arith::valuation(&m, &BigUint::from(2u32))?;
    assert_eq!(v2, k + 2, "2-adic valuation certificate");
    // Certified radical bound: rad(abc) = 3 rad(m) <= 3 * 2 * odd(m).
    let bound = BigInt::from(6) * (&m >> ((k + 2) as usize));
    assert!(bound < pow, "certified radical bound must beat the height");
    make_point(vec![BigInt::one(), m, -pow])
}

/// r_i = lcm over j != i of the order of p_i mod p_j: the least exponents
/// with p_i^{r_i} = 1 mod p_j for every j != i.
pub fn order_exponents(primes: &[u64]) -> Result<Vec<u64>> {
    for (i, &p) in primes.iter().enumerate() {
        if !is_prime_u64(p) {
            return Err(Error::domain(format!("order_exponents: {} is not prime", p)));
        }
        if primes[..i].contains(&p) {
            return Err(Error::domain(format!(
                "order_exponents: repeated prime {}",
                p
            )));
        }
    }
    let mut out = Vec::with_capacity(primes.len());
    for (i, &p) in primes.iter().enumerate() {
        let mut r: u128 = 1;
        for (j, &q) in primes.iter().enumerate() {
            if i == j {
                continue;
            }
            let ord = mult_order(&BigInt::from(p), &BigUint::from(q))?
                .to_u64()
                .expect("order bounded by the modulus");
            r = r / num::integer::gcd(r, ord as u128) * ord as u128;
        }
        let r = u64::try_from(r).map_err(|_| {
            Error::resource("order_exponents: lcm of orders overflows u64".to_string())
        })?;
        out.push(r);
    }
    // Defining property, re-verified.
    for (i, &p) in primes.iter().enumerate() {
        for (j, &q) in primes.iter().enumerate() {
            if i != j {
                let mut x = 1u64;
                let mut base = p % q;
                let mut e = out[i];
                while e > 0 {
                    if e & 1 == 1 {
                        x = x * base % q;
                    }
                    base = base * base % q;
                    e >>= 1;
                }
                assert_eq!(x, 1 % q, "p_i^(r_i) = 1 mod p_j");
            }
        }
    }
    Ok(out)
}

/// Quadruples (x0, -9^e1, 25^e2, 1) with e1 odd and x0 = 9^e1 - 25^e2 - 1.
/// The odd exponent pins x0 = 1 mod 3 and 3 mod 5, so the coordinates are
/// pairwise coprime and rad of the product is 15 rad(x0) <= 15 x0, while
/// the gap certificate keeps x0 below eps times the height coordinate.
pub fn construct_n4(eps: &BigRational, count: usize) -> Result<Vec<Constructed>> {
    construct_n4_with(eps, count, DEFAULT_DIGIT_BUDGET)
}

/// As [`construct_n4`] with an explicit digit budget.
pub fn construct_n4_with(
    eps: &BigRational,
    count: usize,
    digit_budget: usize,
) -> Result<Vec<Constructed>> {
    if !eps.is_positive() || eps >= &BigRational::one() {
        return Err(Error::domain("construct_n4: eps must satisfy 0 < eps < 1"));
    }
    let q1 = BigInt::from(9);
    let q2 = BigInt::from(25);
    let mut out = Vec::new();
    if count == 0 {
        return Ok(out);
    }
    scan(&q1, &q2, eps, Parity::E1Odd, digit_budget, |ev| match ev {
        ScanEvent::Certified(sol) => {
            let p1 = num::pow::pow(q1.clone(), sol.e1 as usize);
            let p2 = num::pow::pow(q2.clone(), sol.e2 as usize);
            let gap = &p1 - &p2;
            // Gap certificate, re-verified exactly.
            assert!(gap.is_positive() && &gap * eps.denom() < eps.numer() * &p1);
            let x0 = &gap - BigInt::one();
            if x0.is_zero() {
                // A gap of exactly 1 would zero out x0; skip it.
                return true;
            }
            let coords = vec![x0.clone(), -p1, p2, BigInt::one()];
            let point = make_point(coords.clone()).expect("construction is a valid point");
            assert_eq!(point.coords(), &coords[..]);
            assert!(arith::pairwise_coprime(point.coords()).unwrap());
            // The congruences that make the coprimality structural, hence
            // rad(prod) = 15 rad(x0) <= 15 x0 with no factorization needed.
            assert_eq!(x0.mod_floor(&BigInt::from(3)), BigInt::one());
            assert_eq!(x0.mod_floor(&BigInt::from(5)), BigInt::from(3));
            let mut plan = ConstructionPlan::bare(ConstructionKind::P26N4, 4);
            plan.eps = Some(eps.clone());
            plan.e1 = Some(sol.e1);
            plan.e2 = Some(sol.e2);
            out.push(Constructed::Realized { point, plan });
            out.len() < count
        }
        ScanEvent::BudgetHit { e1, e2, digits } => {
            let mut plan = ConstructionPlan::bare(ConstructionKind::P26N4, 4);
            plan.eps = Some(eps.clone());
            plan.e1 = Some(e1);
            plan.e2 = Some(e2);
            out.push(Constructed::PlanOnly {
                plan,
                reason: format!(
                    "9^{} needs about {} digits, over the budget of {}",
                    e1, digits, digit_budget
                ),
            });
            false
        }
    })?;
    Ok(out)
}

/// Largest e >= 0 with q^e <= bound; the float estimate is corrected by
/// exact comparisons.
fn pow_cap(q: &BigInt, bound: &BigInt) -> u64 {
    if bound < q {
        return 0;
    }
    let est = (arith::ln_abs(bound) / arith::ln_abs(q)).floor().max(1.0) as u64;
    let mut e = est;
    let mut p = num::pow::pow(q.clone(), e as usize);
    while &p > bound {
        p /= q;
        e -= 1;
    }
    loop {
        let next = &p * q;
        if &next > bound {
            return e;
        }
        p = next;
        e += 1;
    }
}

/// The first n-1 primes above n.
pub fn default_general_primes(n: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(n - 1);
    let mut c = n as u64 + 1;
    while out.len() < n - 1 {
        if is_prime_u64(c) {
            out.push(c);
        }
        c += 1;
    }
    out
}

/// Tuples (x0, -q1^e1, q2^e2, q3^e3, ..., q_{n-1}^{e_{n-1}}) for n >= 5,
/// with q_i = p_i^{r_i} chosen so every q_i is 1 mod every other p_j. The
/// extra exponents are drawn (seeded) from the widest ranges that keep the
/// tail sum below the certified gap q1^e1 - q2^e2, which forces x0 >= 1,
/// makes the tuple pairwise coprime, and bounds rad of the product by
/// p_1 ... p_{n-1} x0 < p_1 ... p_{n-1} eps max.
pub fn construct_general(
    n: usize,
    eps: &BigRational,
    primes: Option<&[u64]>,
    count: usize,
    seed: u64,
) -> Result<Vec<Constructed>> {
    construct_general_with(n, eps, primes, count, seed, DEFAULT_DIGIT_BUDGET)
}

/// As [`construct_general`] with an explicit digit budget.
pub fn construct_general_with(
    n: usize,
    eps: &BigRational,
    primes: Option<&[u64]>,
    count: usize,
    seed: u64,
    digit_budget: usize,
) -> Result<Vec<Constructed>> {
    if n < 5 {
        return Err(Error::domain("construct_general: n must be >= 5"));
    }
    if !eps.is_positive() || eps >= &BigRational::one() {
        return Err(Error::domain(
            "construct_general: eps must satisfy 0 < eps < 1",
        ));
    }
    let primes: Vec<u64> = match primes {
        Some(ps) => {
            if ps.len() != n - 1 {
                return Err(Error::domain(format!(
                    "construct_general: need exactly {} primes, got {}",
                    n - 1,
                    ps.len()
                )));
            }
            for (i, &p) in ps.iter().enumerate() {
                if !is_prime_u64(p) {
                    return Err(Error::domain(format!(
                        "construct_general: {} is not prime",
                        p
                    )));
                }
                if p <= n as u64 {
                    return Err(Error::domain(format!(
                        "construct_general: prime {} is not greater than n = {}",
                        p, n
                    )));
                }
                if ps[..i].contains(&p) {
                    return Err(Error::domain(format!(
                        "construct_general: repeated prime {}",
                        p
                    )));
                }
            }
            ps.to_vec()
        }
        None => default_general_primes(n),
    };
    let orders = order_exponents(&primes)?;
    let qs: Vec<BigInt> = primes
        .iter()
        .zip(&orders)
        .map(|(&p, &r)| num::pow::pow(BigInt::from(p), r as usize))
        .collect();
    let make_plan = |e1: Option<u64>, e2: Option<u64>, extras: Vec<u64>| {
        let mut plan = ConstructionPlan::bare(ConstructionKind::P26General, n);
        plan.eps = Some(eps.clone());
        plan.e1 = e1;
        plan.e2 = e2;
        plan.primes = primes.clone();
        plan.orders = orders.clone();
        plan.extra_exponents = extras;
        plan.seed = Some(seed);
        plan
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    if count == 0 {
        return Ok(out);
    }
    const RESAMPLE_LIMIT: usize = 16;
    scan(&qs[0], &qs[1], eps, Parity::Any, digit_budget, |ev| match ev {
        ScanEvent::Certified(sol) => {
            let p1 = num::pow::pow(qs[0].clone(), sol.e1 as usize);
            let p2 = num::pow::pow(qs[1].clone(), sol.e2 as usize);
            let gap = &p1 - &p2;
            for _attempt in 0..RESAMPLE_LIMIT {
                // Draw e_3 .. e_{n-1} left to right, each from the widest
                // range that still reserves one copy of every later q.
                let budget = &gap - 1;
                let mut spent = BigInt::zero();
                let mut extras = Vec::with_capacity(n - 3);
                let mut ok = true;
                for i in 2..n - 1 {
                    let reserve: BigInt = qs[i + 1..].iter().sum();
                    let avail = &budget - &spent - reserve;
                    if avail < qs[i] {
                        ok = false;
                        break;
                    }
                    let cap = pow_cap(&qs[i], &avail);
                    let e = rng.gen_range(1..=cap);
                    extras.push(e);
                    spent += num::pow::pow(qs[i].clone(), e as usize);
                }
                if !ok {
                    // No room for the tail at this (e1, e2); a resample
                    // cannot fix that, move on to the next solution.
                    return true;
                }
                let x0 = &gap - &spent;
                let mut coords = Vec::with_capacity(n);
                coords.push(x0.clone());
                coords.push(-p1.clone());
                coords.push(p2.clone());
                for (i, &e) in extras.iter().enumerate() {
                    coords.push(num::pow::pow(qs[i + 2].clone(), e as usize));
                }
                let valid = x0.is_positive()
                    && &x0 * eps.denom() < eps.numer() * &p1
                    && primes.iter().enumerate().all(|(j, &p)| {
                        let want = if j == 0 {
                            BigInt::from(p) - BigInt::from((n - 2) as u64)
                        } else {
                            BigInt::from(p) - BigInt::from((n - 4) as u64)
                        };
                        x0.mod_floor(&BigInt::from(p)) == want.mod_floor(&BigInt::from(p))
                    })
                    && arith::pairwise_coprime(&coords).unwrap_or(false);
                if !valid {
                    continue;
                }
                let point = make_point(coords.clone()).expect("construction is a valid point");
                assert_eq!(point.coords(), &coords[..]);
                out.push(Constructed::Realized {
                    point,
                    plan: make_plan(Some(sol.e1), Some(sol.e2), extras),
                });
                return out.len() < count;
            }
            true // resamples exhausted: advance to the next (e1, e2)
        }
        ScanEvent::BudgetHit { e1, e2, digits } => {
            out.push(Constructed::PlanOnly {
                plan: make_plan(Some(e1), Some(e2), Vec::new()),
                reason: format!(
                    "{}^{} needs about {} digits, over the budget of {}",
                    qs[0], e1, digits, digit_budget
                ),
            });
            false
        }
    })?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::{self, point_radical};

    fn pt(coords: &[i64]) -> TuplePoint {
        make_point(coords.iter().map(|&v| BigInt::from(v)).collect()).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn coords_i64(p: &TuplePoint) -> Vec<i64> {
        p.coords().iter().map(|c| c.to_i64().unwrap()).collect()
    }

    #[test]
    fn double_examples() {
        assert_eq!(
            coords_i64(&double_triple(&pt(&[1, 8, -9])).unwrap()),
            vec![1, 16, 64, -81]
        );
        assert_eq!(
            coords_i64(&double_triple(&pt(&[1, 1, -2])).unwrap()),
            vec![1, 2, 1, -4]
        );
        assert_eq!(
            coords_i64(&double_triple(&pt(&[5, 27, -32])).unwrap()),
            vec![25, 270, 729, -1024]
        );
    }

    #[test]
    fn double_preserves_radical() {
        for t in [&[1i64, 8, -9][..], &[1, 1, -2], &[5, 27, -32], &[9, -1, -8]] {
            let parent = pt(t);
            let d = double_triple(&parent).unwrap();
            assert_eq!(
                point_radical(&parent).unwrap(),
                point_radical(&d).unwrap(),
                "radical changed for {:?}",
                t
            );
        }
    }

    #[test]
    fn double_rejects_non_triples() {
        let q = pt(&[1, 1, 1, -3]);
        assert!(matches!(double_triple(&q), Err(Error::Domain(_))));
    }

    #[test]
    fn double_height_law() {
        for t in [&[1i64, 8, -9][..], &[5, 27, -32], &[3, 125, -128]] {
            let parent = pt(t);
            let d = double_triple(&parent).unwrap();
            let gap = counting::height(&d) - 2.0 * counting::height(&parent);
            assert!(gap.abs() <= 2f64.ln() + 1e-12);
        }
    }

    #[test]
    fn family_examples() {
        assert_eq!(coords_i64(&family_2k(1).unwrap()), vec![1, 8, -9]);
        assert_eq!(coords_i64(&family_2k(2).unwrap()), vec![1, 80, -81]);
        let k3 = family_2k(3).unwrap();
        assert_eq!(coords_i64(&k3), vec![1, 6560, -6561]);
        assert_eq!(point_radical(&k3).unwrap(), BigUint::from(1230u32));
        assert_eq!(
            arith::valuation(&BigInt::from(6560), &BigUint::from(2u32)).unwrap(),
            5
        );
        assert_eq!(
            point_radical(&family_2k(2).unwrap()).unwrap(),
            BigUint::from(30u32)
        );
    }

    #[test]
    fn family_rejects_bad_k_and_budget() {
        assert!(matches!(family_2k(0), Err(Error::Domain(_))));
        assert!(matches!(family_2k(18), Err(Error::Resource(_))));
        assert!(matches!(family_2k_with(5, 10), Err(Error::Resource(_))));
    }

    #[test]
    fn n4_first_output_at_eps_15_percent() {
        let got = construct_n4(&rat(15, 100), 1).unwrap();
        assert_eq!(got.len(), 1);
        let point = got[0].point().unwrap();
        assert_eq!(coords_i64(point), vec![103, -729, 625, 1]);
        let plan = got[0].plan();
        assert_eq!((plan.e1, plan.e2), (Some(3), Some(2)));
        assert_eq!(point_radical(point).unwrap(), BigUint::from(1545u32));
    }

    #[test]
    fn n4_outputs_pass_postconditions() {
        let eps = rat(1, 10);
        let got = construct_n4(&eps, 3).unwrap();
        assert_eq!(got.len(), 3);
        for c in &got {
            let p = c.point().unwrap();
            let x0 = &p.coords()[0];
            assert!(x0.is_positive());
            assert_eq!(x0.mod_floor(&BigInt::from(3)), BigInt::from(1));
            assert_eq!(x0.mod_floor(&BigInt::from(5)), BigInt::from(3));
            assert!(arith::pairwise_coprime(p.coords()).unwrap());
            assert_eq!(c.plan().e1.unwrap() % 2, 1);
        }
    }

    #[test]
    fn n4_rejects_eps_out_of_range() {
        assert!(matches!(
            construct_n4(&rat(1, 1), 1),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            construct_n4(&rat(0, 1), 1),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn n4_reports_plan_when_budget_blocks() {
        // 9^3 = 729 fits in 10 digits; the next odd solution does not.
        let got = construct_n4_with(&rat(15, 100), 2, 10).unwrap();
        assert_eq!(got.len(), 2);
        assert!(got[0].point().is_some());
        match &got[1] {
            Constructed::PlanOnly { reason, .. } => assert!(reason.contains("budget")),
            other => panic!("expected plan-only, got {:?}", other),
        }
    }

    #[test]
    fn order_exponent_examples() {
        assert_eq!(
            order_exponents(&[7, 11, 13, 17]).unwrap(),
            vec![240, 48, 20, 30]
        );
        assert_eq!(order_exponents(&[3, 5]).unwrap(), vec![4, 2]);
        assert!(matches!(
            order_exponents(&[7, 7]),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            order_exponents(&[6, 11]),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn general_n5_passes_postconditions() {
        let eps = rat(1, 2);
        let got = construct_general(5, &eps, None, 1, 42).unwrap();
        assert_eq!(got.len(), 1);
        let plan = got[0].plan();
        assert_eq!(plan.primes, vec![7, 11, 13, 17]);
        assert_eq!(plan.orders, vec![240, 48, 20, 30]);
        assert_eq!((plan.e1, plan.e2), (Some(87), Some(353)));
        assert_eq!(plan.extra_exponents.len(), 2);
        let p = got[0].point().unwrap();
        assert_eq!(p.n(), 5);
        let x0 = &p.coords()[0];
        assert!(x0.is_positive());
        // x0 = -(n-2) mod p1 and -(n-4) mod the other primes.
        assert_eq!(x0.mod_floor(&BigInt::from(7)), BigInt::from(4));
        for p_j in [11u32, 13, 17] {
            assert_eq!(
                x0.mod_floor(&BigInt::from(p_j)),
                BigInt::from(p_j - 1),
                "x0 mod {}",
                p_j
            );
        }
        assert!(arith::pairwise_coprime(p.coords()).unwrap());
        // x0 < eps * max, exactly.
        let max = BigInt::from(p.max_abs());
        assert!(x0 * eps.denom() < eps.numer() * max);
    }

    #[test]
    fn general_is_deterministic_per_seed() {
        let eps = rat(1, 2);
        let a = construct_general(5, &eps, None, 1, 7).unwrap();
        let b = construct_general(5, &eps, None, 1, 7).unwrap();
        assert_eq!(
            a[0].point().unwrap().coords(),
            b[0].point().unwrap().coords()
        );
        let c = construct_general(5, &eps, None, 1, 8).unwrap();
        // A different seed draws different tail exponents.
        assert_ne!(
            a[0].plan().extra_exponents,
            c[0].plan().extra_exponents
        );
    }

    #[test]
    fn general_reports_plan_on_tiny_budget() {
        let got = construct_general_with(5, &rat(1, 2), None, 1, 42, 1000).unwrap();
        assert_eq!(got.len(), 1);
        match &got[0] {
            Constructed::PlanOnly { plan, reason } => {
                assert_eq!(plan.primes, vec![7, 11, 13, 17]);
                assert!(reason.contains("budget"));
            }
            other => panic!("expected plan-only, got {:?}", other),
        }
    }

    #[test]
    fn general_validates_arguments() {
        let eps = rat(1, 2);
        assert!(matches!(
            construct_general(4, &eps, None, 1, 0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            construct_general(5, &rat(1, 1), None, 1, 0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            construct_general(5, &eps, Some(&[7, 11, 13]), 1, 0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            construct_general(5, &eps, Some(&[5, 11, 13, 17]), 1, 0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            construct_general(5, &eps, Some(&[7, 11, 13, 13]), 1, 0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn default_primes_examples() {
        assert_eq!(default_general_primes(5), vec![7, 11, 13, 17]);
        assert_eq!(default_general_primes(6), vec![7, 11, 13, 17, 19]);
        assert_eq!(default_general_primes(7), vec![11, 13, 17, 19, 23, 29]);
    }
}
