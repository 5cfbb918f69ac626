//! Integer arithmetic: factorization, radicals, valuations, multiplicative
//! orders, and natural logs of big integers.
//!
//! Factorization runs trial division by sieve primes first, then splits any
//! remaining cofactor with deterministic 64-bit Miller-Rabin, perfect-power
//! detection, and Brent's variant of Pollard rho under an iteration budget.
//! Primality above 64 bits is probabilistic Miller-Rabin with 64 rounds of
//! deterministically derived bases (error below 2^-128); everything at or
//! below 64 bits is decided exactly.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num::bigint::{BigInt, BigUint};
use num::integer::Integer;
use num::traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub mod poly;

pub use poly::{poly_gcd, poly_radical, UniPoly};

/// Effort limits for [`factorize_with`]. `trial_limit` bounds the sieve
/// primes used for trial division; `rho_budget` bounds the total number of
/// rho iterations spent on cofactors above 64 bits before giving up with a
/// resource error.
#[derive(Debug, Clone)]
pub struct FactorConfig {
    pub trial_limit: u64,
    pub rho_budget: u64,
}

impl Default for FactorConfig {
    fn default() -> Self {
        FactorConfig {
            trial_limit: 1_000_000,
            rho_budget: 8_000_000,
        }
    }
}

/// Prime factorization of `|value|`. `prime_powers` is sorted by prime and
/// every exponent is at least 1; the product of the prime powers equals
/// `value`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    value: BigUint,
    prime_powers: Vec<(BigUint, u32)>,
}

impl Factorization {
    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn prime_powers(&self) -> &[(BigUint, u32)] {
        &self.prime_powers
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigUint> {
        self.prime_powers.iter().map(|(p, _)| p)
    }

    /// Product of the distinct primes.
    pub fn radical(&self) -> BigUint {
        self.primes().product()
    }

    /// Exponent of `p` in the factorization (0 when `p` does not divide).
    pub fn exponent_of(&self, p: &BigUint) -> u32 {
        self.prime_powers
            .iter()
            .find(|(q, _)| q == p)
            .map(|&(_, e)| e)
            .unwrap_or(0)
    }
}

/// A finite place: a prime together with its weight `mu = ln p`, the unit
/// every counting sum is measured in.
#[derive(Debug, Clone)]
pub struct PrimePlace {
    pub prime: BigUint,
    pub mu: f64,
}

impl PrimePlace {
    pub fn new(prime: BigUint) -> Self {
        let mu = ln_big(&prime);
        PrimePlace { prime, mu }
    }
}

/// The places of `n`: one [`PrimePlace`] per distinct prime divisor,
/// in increasing prime order.
pub fn places(n: &BigInt) -> Result<Vec<PrimePlace>> {
    let f = factorize(n)?;
    Ok(f.primes().cloned().map(PrimePlace::new).collect())
}

fn sieve_flags(limit: u64) -> Vec<bool> {
    let n = limit as usize;
    let mut is_comp = vec![false; n + 1];
    let mut p = 2usize;
    while p * p <= n {
        if !is_comp[p] {
            let mut m = p * p;
            while m <= n {
                is_comp[m] = true;
                m += p;
            }
        }
        p += 1;
    }
    is_comp
}

/// All primes `<= limit`, ascending.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let is_comp = sieve_flags(limit);
    (2..=limit).filter(|&p| !is_comp[p as usize]).collect()
}

fn default_sieve() -> &'static [u64] {
    static SIEVE: OnceLock<Vec<u64>> = OnceLock::new();
    SIEVE.get_or_init(|| primes_up_to(FactorConfig::default().trial_limit))
}

fn mulmod64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod64(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod64(acc, a, m);
        }
        a = mulmod64(a, a, m);
        e >>= 1;
    }
    acc
}

const MR_BASES_64: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic Miller-Rabin, exact for all of u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES_64 {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for &a in &MR_BASES_64 {
        let mut x = powmod64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod64(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn mr_round_big(n: &BigUint, a: &BigUint, d: &BigUint, s: u64) -> bool {
    let n1 = n - 1u32;
    let mut x = a.modpow(d, n);
    if x.is_one() || x == n1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == n1 {
            return true;
        }
    }
    false
}

/// Primality test: exact below 2^64, otherwise 64 Miller-Rabin rounds with
/// deterministically seeded bases (error probability below 2^-128).
pub fn is_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    if n.is_even() {
        return false;
    }
    for &p in default_sieve().iter().take_while(|&&p| p < 1000) {
        if (n % p).is_zero() {
            return false;
        }
    }
    let n1 = n - 1u32;
    let s = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> s;
    // Bases are pseudorandom but a deterministic function of n, so the
    // verdict never changes between runs.
    let seed = n
        .to_bytes_le()
        .iter()
        .fold(0xa076_1d64_78bd_642fu64, |h, &b| {
            (h ^ b as u64).wrapping_mul(0x100_0000_01b3)
        });
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nbytes = (n.bits() as usize).div_ceil(8);
    let three = BigUint::from(3u32);
    for _ in 0..64 {
        let mut buf = vec![0u8; nbytes];
        rng.fill(&mut buf[..]);
        let a = BigUint::from_bytes_le(&buf) % (&n1 - &three) + BigUint::from(2u32);
        if !mr_round_big(n, &a, &d, s) {
            return false;
        }
    }
    true
}

/// `n = base^k` with k >= 2, preferring the smallest prime k.
fn perfect_power(n: &BigUint) -> Option<(BigUint, u32)> {
    let bits = n.bits();
    for &k in default_sieve() {
        let k = k as u32;
        if (k as u64) > bits {
            break;
        }
        let r = n.nth_root(k);
        if num::pow::pow(r.clone(), k as usize) == *n {
            return Some((r, k));
        }
    }
    None
}

enum RhoOutcome {
    Factor(BigUint),
    Degenerate,
    Budget,
}

/// Brent's rho with batched gcds. Deterministic for a given (n, c).
fn rho_brent(n: &BigUint, c: u64, budget: &mut u64) -> RhoOutcome {
    let cbig = BigUint::from(c);
    let step = |y: &BigUint| (y * y + &cbig) % n;
    let mut y = BigUint::from(2u32);
    let mut r: u64 = 1;
    let mut q = BigUint::one();
    let mut g = BigUint::one();
    let mut x = y.clone();
    let mut ys = y.clone();
    const BATCH: u64 = 128;
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = step(&y);
        }
        if *budget < r {
            *budget = 0;
            return RhoOutcome::Budget;
        }
        *budget -= r;
        let mut k: u64 = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            let m = BATCH.min(r - k);
            for _ in 0..m {
                y = step(&y);
                let diff = if x > y { &x - &y } else { &y - &x };
                q = (&q * &diff) % n;
            }
            if *budget < m {
                *budget = 0;
                return RhoOutcome::Budget;
            }
            *budget -= m;
            g = q.gcd(n);
            k += m;
        }
        r *= 2;
    }
    if g == *n {
        // Batch overshot; retry one step at a time from the last snapshot.
        loop {
            ys = step(&ys);
            let diff = if x > ys { &x - &ys } else { &ys - &x };
            g = diff.gcd(n);
            if !g.is_one() {
                break;
            }
            if *budget == 0 {
                return RhoOutcome::Budget;
            }
            *budget -= 1;
        }
    }
    if g == *n || g.is_one() {
        RhoOutcome::Degenerate
    } else {
        RhoOutcome::Factor(g)
    }
}

fn rho_u64(n: u64) -> u64 {
    // n odd composite, no factor below the trial limit. Always succeeds.
    for c in 1u64.. {
        let mut x = 2u64;
        let mut y = 2u64;
        let mut d = 1u64;
        let f = |v: u64| (mulmod64(v, v, n) + c) % n;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = x.abs_diff(y).gcd(&n);
        }
        if d != n {
            return d;
        }
    }
    unreachable!()
}

fn factorize_u64_into(mut n: u64, trial_limit: u64, out: &mut BTreeMap<BigUint, u32>) {
    for &p in default_sieve() {
        if p > trial_limit || p * p > n {
            break;
        }
        if n.is_multiple_of(p) {
            let mut e = 0u32;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            *out.entry(BigUint::from(p)).or_insert(0) += e;
        }
    }
    if n == 1 {
        return;
    }
    if is_prime_u64(n) {
        *out.entry(BigUint::from(n)).or_insert(0) += 1;
        return;
    }
    let d = rho_u64(n);
    factorize_u64_into(d, trial_limit, out);
    factorize_u64_into(n / d, trial_limit, out);
}

/// Factor `|n|` under explicit effort limits.
pub fn factorize_with(n: &BigInt, cfg: &FactorConfig) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::domain("factorize: input must be nonzero"));
    }
    let value = n.magnitude().clone();
    let mut m = value.clone();
    let mut powers: BTreeMap<BigUint, u32> = BTreeMap::new();

    if let Some(small) = m.to_u64() {
        factorize_u64_into(small, cfg.trial_limit, &mut powers);
        return Ok(assemble(value, powers));
    }

    for &p in default_sieve() {
        if p > cfg.trial_limit {
            break;
        }
        let pb = BigUint::from(p);
        if (&m % &pb).is_zero() {
            let mut e = 0u32;
            while (&m % &pb).is_zero() {
                m /= &pb;
                e += 1;
            }
            *powers.entry(pb).or_insert(0) += e;
        }
        if m.to_u64().is_some() {
            break;
        }
    }

    let mut budget = cfg.rho_budget;
    let mut todo: Vec<(BigUint, u32)> = vec![(m, 1)];
    while let Some((c, mult)) = todo.pop() {
        if c.is_one() {
            continue;
        }
        if let Some(small) = c.to_u64() {
            let mut sub = BTreeMap::new();
            factorize_u64_into(small, cfg.trial_limit, &mut sub);
            for (p, e) in sub {
                *powers.entry(p).or_insert(0) += e * mult;
            }
            continue;
        }
        if is_prime(&c) {
            *powers.entry(c).or_insert(0) += mult;
            continue;
        }
        if let Some((base, k)) = perfect_power(&c) {
            todo.push((base, mult * k));
            continue;
        }
        let mut split = None;
        for c0 in 1..=8u64 {
            match rho_brent(&c, c0, &mut budget) {
                RhoOutcome::Factor(d) => {
                    split = Some(d);
                    break;
                }
                RhoOutcome::Degenerate => continue,
                RhoOutcome::Budget => {
                    return Err(Error::resource(format!(
                        "factorize: rho budget of {} iterations exhausted on a \
                         {}-digit cofactor",
                        cfg.rho_budget,
                        c.to_string().len()
                    )));
                }
            }
        }
        match split {
            Some(d) => {
                let q = &c / &d;
                todo.push((d, mult));
                todo.push((q, mult));
            }
            None => {
                return Err(Error::resource(format!(
                    "factorize: rho failed to split a {}-digit cofactor",
                    c.to_string().len()
                )));
            }
        }
    }
    Ok(assemble(value, powers))
}

fn assemble(value: BigUint, powers: BTreeMap<BigUint, u32>) -> Factorization {
    Factorization {
        value,
        prime_powers: powers.into_iter().collect(),
    }
}

/// Factor `|n|` with default effort limits.
pub fn factorize(n: &BigInt) -> Result<Factorization> {
    factorize_with(n, &FactorConfig::default())
}

/// Product of the distinct primes dividing `n`; `radical(±1) = 1`.
pub fn radical(n: &BigInt) -> Result<BigUint> {
    Ok(factorize(n)?.radical())
}

/// Largest e with `p^e | n`. Requires `n != 0` and `p` prime.
pub fn valuation(n: &BigInt, p: &BigUint) -> Result<u32> {
    if n.is_zero() {
        return Err(Error::domain("valuation: n must be nonzero"));
    }
    if !is_prime(p) {
        return Err(Error::domain(format!("valuation: {} is not prime", p)));
    }
    let mut m = n.magnitude().clone();
    let mut e = 0u32;
    loop {
        let (q, r) = m.div_rem(p);
        if !r.is_zero() {
            return Ok(e);
        }
        m = q;
        e += 1;
    }
}

/// Least r >= 1 with `a^r = 1 (mod p)`, found by shrinking p-1 along the
/// prime factorization of p-1. Requires p prime and a invertible mod p.
pub fn mult_order(a: &BigInt, p: &BigUint) -> Result<BigUint> {
    if !is_prime(p) {
        return Err(Error::domain(format!("mult_order: {} is not prime", p)));
    }
    let pb = BigInt::from(p.clone());
    let ared = a.mod_floor(&pb).magnitude().clone();
    if ared.is_zero() {
        return Err(Error::domain(format!(
            "mult_order: {} is not invertible mod {}",
            a, p
        )));
    }
    let p1 = p - 1u32;
    let f = factorize(&BigInt::from(p1.clone()))?;
    let mut r = p1;
    for (q, e) in f.prime_powers() {
        for _ in 0..*e {
            let cand = &r / q;
            if ared.modpow(&cand, p).is_one() {
                r = cand;
            } else {
                break;
            }
        }
    }
    Ok(r)
}

/// True when every pair of entries is coprime. Lists with fewer than two
/// entries qualify vacuously. Zero entries are rejected.
pub fn pairwise_coprime(xs: &[BigInt]) -> Result<bool> {
    for (i, x) in xs.iter().enumerate() {
        if x.is_zero() {
            return Err(Error::domain(format!(
                "pairwise_coprime: entry {} is zero",
                i
            )));
        }
    }
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            if !xs[i].gcd(&xs[j]).is_one() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Natural log of a positive big integer, accurate to the last few ulps:
/// the top 64 bits carry the mantissa, the rest contributes `bits * ln 2`.
pub fn ln_big(n: &BigUint) -> f64 {
    debug_assert!(!n.is_zero());
    let bits = n.bits();
    if bits <= 64 {
        return (n.to_u64().unwrap() as f64).ln();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_u64().unwrap();
    (top as f64).ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural log of `|n|` for nonzero `n`.
pub fn ln_abs(n: &BigInt) -> f64 {
    ln_big(n.magnitude())
}
