//! Enumeration of high-quality zero-sum tuples up to a coordinate bound.
//!
//! A smallest-prime-factor sieve turns into an exact radical table shared
//! read-only by worker threads that own disjoint slices of the range.
//! Every worker's hits carry a totally ordered rank (quality descending,
//! then largest coordinate, then the coordinates themselves), so merged
//! results are identical no matter how many threads ran.

use std::cmp::Ordering;

use num::bigint::BigInt;
use num::integer::gcd;

use crate::counting::{make_point, TuplePoint};
use crate::error::{Error, Result};

/// Hard cap on the radical table size: one u32 per integer.
pub const MAX_SIEVE_LIMIT: u64 = 200_000_000;

/// Quadruple enumeration is cubic in the bound; this keeps it a probe.
pub const MAX_QUADRUPLE_LIMIT: u64 = 600;

/// Exact radicals for every integer up to a limit.
pub struct RadicalTable {
    limit: u64,
    rad: Vec<u32>,
}

impl RadicalTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// radical(m) for 1 <= m <= limit.
    pub fn radical(&self, m: u64) -> u64 {
        debug_assert!(m >= 1 && m <= self.limit);
        self.rad[m as usize] as u64
    }
}

/// Build the table: a smallest-prime-factor sieve, then an in-place pass
/// that rewrites spf(m) to rad(m) in increasing order using
/// rad(m) = rad(m/p) * (p if p does not divide m/p).
pub fn build_radical_sieve(n: u64) -> Result<RadicalTable> {
    if n < 2 {
        return Err(Error::validation(format!(
            "radical sieve needs a limit >= 2, got {}",
            n
        )));
    }
    if n > MAX_SIEVE_LIMIT {
        return Err(Error::resource(format!(
            "radical sieve limit {} exceeds the memory budget of {}",
            n, MAX_SIEVE_LIMIT
        )));
    }
    let len = n as usize + 1;
    let mut a = vec![0u32; len];
    let mut i = 2usize;
    while i < len {
        if a[i] == 0 {
            let mut m = i;
            while m < len {
                if a[m] == 0 {
                    a[m] = i as u32;
                }
                m += i;
            }
        }
        i += 1;
    }
    a[1] = 1;
    for m in 2..len {
        let p = a[m] as usize;
        let q = m / p;
        a[m] = if q.is_multiple_of(p) { a[q] } else { a[q] * p as u32 };
    }
    Ok(RadicalTable { limit: n, rad: a })
}

/// One search result: the canonical point, its quality, and the largest
/// coordinate in absolute value.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchHit {
    pub point: TuplePoint,
    pub quality: f64,
    pub c_max: u64,
}

fn quantize(q: f64) -> i64 {
    if q.is_infinite() {
        i64::MAX
    } else {
        (q * 1e12).round() as i64
    }
}

/// Total rank: quality descending (quantized at 1e-12), then c_max
/// ascending, then the coordinates lexicographically. Distinct points never
/// compare equal, which makes parallel merges deterministic.
pub fn hit_order(a: &SearchHit, b: &SearchHit) -> Ordering {
    quantize(b.quality)
        .cmp(&quantize(a.quality))
        .then(a.c_max.cmp(&b.c_max))
        .then_with(|| a.point.coords().cmp(b.point.coords()))
}

fn push_triple(a: u64, b: u64, c: u64, q: f64, hits: &mut Vec<SearchHit>) {
    let point = make_point(vec![BigInt::from(a), BigInt::from(b), -BigInt::from(c)])
        .expect("triple is canonical by construction");
    hits.push(SearchHit {
        point,
        quality: q,
        c_max: c,
    });
}

/// Exhaustive scan over a <= c/2, used when no positive quality threshold
/// is available to prune with.
fn triple_hits_plain(c: u64, table: &RadicalTable, min_quality: f64, hits: &mut Vec<SearchHit>) {
    let rc = table.radical(c);
    let ln_c = (c as f64).ln();
    for a in 1..=c / 2 {
        let b = c - a;
        if gcd(a, b) != 1 {
            continue;
        }
        let radprod = table.radical(a) as u128 * table.radical(b) as u128 * rc as u128;
        let q = ln_c / (radprod as f64).ln();
        if q > min_quality {
            push_triple(a, b, c, q, hits);
        }
    }
}

/// Prefix scan: a hit with quality above q0 > 0 satisfies
/// rad(a) rad(b) rad(c) < c^(1/q0), so the coordinate with the smaller
/// radical obeys rad < sqrt(c^(1/q0) / rad(c)). Walking integers in radical
/// order visits exactly those candidates and stops early; the margin on the
/// bound keeps float rounding from ever cutting a true hit.
fn triple_hits_indexed(
    c: u64,
    table: &RadicalTable,
    by_rad: &[u32],
    min_quality: f64,
    hits: &mut Vec<SearchHit>,
) {
    let rc = table.radical(c);
    let ln_c = (c as f64).ln();
    let ln_r = 0.5 * (ln_c / min_quality - (rc as f64).ln());
    let r_bound = if ln_r > 60.0 {
        f64::INFINITY
    } else {
        ln_r.exp() * (1.0 + 1e-9)
    };
    for &u32_u in by_rad {
        let u = u32_u as u64;
        let ru = table.radical(u);
        if (ru as f64) > r_bound {
            break;
        }
        if u >= c {
            continue;
        }
        let w = c - u;
        let rw = table.radical(w);
        // Enumerate each pair once, from its smaller-radical side.
        if ru > rw || (ru == rw && u > w) {
            continue;
        }
        if gcd(u, w) != 1 {
            continue;
        }
        let radprod = ru as u128 * rw as u128 * rc as u128;
        let q = ln_c / (radprod as f64).ln();
        if q > min_quality {
            push_triple(u.min(w), u.max(w), c, q, hits);
        }
    }
}

/// All triples (a, b, -c) with 1 <= a <= b, a + b = c <= n, gcd(a, b) = 1
/// and quality strictly above the threshold, ranked by [`hit_order`]. The
/// result is identical for every thread count.
pub fn search_triples(n: u64, min_quality: f64, threads: usize) -> Result<Vec<SearchHit>> {
    if threads == 0 {
        return Err(Error::validation("search_triples: threads must be >= 1"));
    }
    if n < 2 {
        return Err(Error::validation(format!(
            "search_triples: bound must be >= 2, got {}",
            n
        )));
    }
    let table = build_radical_sieve(n)?;
    // Integers sorted by (radical, value); the prefix scan walks this.
    let by_rad: Vec<u32> = if min_quality > 0.0 {
        let mut idx: Vec<u32> = (1..=n as u32).collect();
        idx.sort_unstable_by_key(|&a| (table.rad[a as usize], a));
        idx
    } else {
        Vec::new()
    };
    let mut partials: Vec<Vec<SearchHit>> = Vec::with_capacity(threads);
    std::thread::scope(|sc| {
        let table = &table;
        let by_rad = &by_rad;
        let handles: Vec<_> = (0..threads)
            .map(|t| {
                sc.spawn(move || {
                    let mut hits = Vec::new();
                    let mut c = 2 + t as u64;
                    while c <= n {
                        if min_quality > 0.0 {
                            triple_hits_indexed(c, table, by_rad, min_quality, &mut hits);
                        } else {
                            triple_hits_plain(c, table, min_quality, &mut hits);
                        }
                        c += threads as u64;
                    }
                    hits
                })
            })
            .collect();
        for h in handles {
            partials.push(h.join().expect("search worker panicked"));
        }
    });
    let mut all: Vec<SearchHit> = partials.into_iter().flatten().collect();
    all.sort_by(hit_order);
    Ok(all)
}

/// Which coprimality requirement quadruples must meet: gcd of all four
/// equal to 1, or every pair coprime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoprimalityMode {
    Overall,
    Pairwise,
}

fn gcd4(v: &[i64; 4]) -> u64 {
    v.iter()
        .fold(0u64, |g, &x| gcd(g, x.unsigned_abs()))
}

fn pairwise_ok(v: &[i64; 4]) -> bool {
    for i in 0..4 {
        for j in i + 1..4 {
            if gcd(v[i].unsigned_abs(), v[j].unsigned_abs()) != 1 {
                return false;
            }
        }
    }
    true
}

/// Canonical coordinate order: positives ascending, then negatives by
/// absolute value ascending.
fn canonical_form(mut pos: Vec<i64>, mut neg: Vec<i64>) -> [i64; 4] {
    pos.sort_unstable();
    neg.sort_unstable_by_key(|v| v.unsigned_abs());
    let mut out = [0i64; 4];
    for (i, v) in pos.iter().chain(neg.iter()).enumerate() {
        out[i] = *v;
    }
    out
}

/// The same tuple with all signs flipped, re-canonicalized.
fn flipped(v: &[i64; 4]) -> [i64; 4] {
    let pos: Vec<i64> = v.iter().filter(|&&x| x < 0).map(|&x| -x).collect();
    let neg: Vec<i64> = v.iter().filter(|&&x| x > 0).map(|&x| -x).collect();
    canonical_form(pos, neg)
}

fn quadruple_quality(v: &[i64; 4], table: &RadicalTable) -> (f64, u64) {
    let max = v.iter().map(|x| x.unsigned_abs()).max().unwrap();
    // Coordinate radicals are squarefree, so folding r*s/gcd(r,s) yields
    // the radical of the product; it stays far below u64 range.
    let mut rad = 1u64;
    for x in v {
        let r = table.radical(x.unsigned_abs());
        rad = rad / gcd(rad, r) * r;
    }
    let q = if rad == 1 {
        f64::INFINITY
    } else {
        ((max as f64).ln()) / ((rad as f64).ln())
    };
    (q, max)
}

fn emit_quadruple(
    v: [i64; 4],
    table: &RadicalTable,
    min_quality: f64,
    mode: CoprimalityMode,
    hits: &mut Vec<SearchHit>,
) {
    if gcd4(&v) != 1 {
        return;
    }
    if mode == CoprimalityMode::Pairwise && !pairwise_ok(&v) {
        return;
    }
    // Keep exactly one of the tuple and its global sign flip.
    if v > flipped(&v) {
        return;
    }
    let (q, max) = quadruple_quality(&v, table);
    if q > min_quality {
        let point = make_point(v.iter().map(|&x| BigInt::from(x)).collect())
            .expect("quadruple is canonical by construction");
        hits.push(SearchHit {
            point,
            quality: q,
            c_max: max,
        });
    }
}

/// Work item: positives-count k and the anchor sum s it iterates.
fn quadruples_for_item(
    k: usize,
    s: i64,
    n: i64,
    table: &RadicalTable,
    min_quality: f64,
    mode: CoprimalityMode,
    hits: &mut Vec<SearchHit>,
) {
    match k {
        1 => {
            // (s, -a, -b, -c) with a <= b <= c, a + b + c = s <= n.
            for a in 1..=s / 3 {
                for b in a..=(s - a) / 2 {
                    let c = s - a - b;
                    emit_quadruple([s, -a, -b, -c], table, min_quality, mode, hits);
                }
            }
        }
        2 => {
            // (p, q, -a, -b) with p <= q, a <= b, p + q = a + b = s.
            let lo = 1.max(s - n);
            for p in lo..=s / 2 {
                for a in lo..=s / 2 {
                    emit_quadruple([p, s - p, -a, -(s - a)], table, min_quality, mode, hits);
                }
            }
        }
        _ => {
            // (p, q, r, -s) with p <= q <= r, p + q + r = s <= n.
            for p in 1..=s / 3 {
                for q in p..=(s - p) / 2 {
                    let r = s - p - q;
                    emit_quadruple([p, q, r, -s], table, min_quality, mode, hits);
                }
            }
        }
    }
}

/// All canonical quadruples with coordinates bounded by n, zero sum, the
/// chosen coprimality, and quality strictly above the threshold, one
/// representative per permutation-and-sign class, ranked by [`hit_order`].
pub fn search_quadruples(
    n: u64,
    min_quality: f64,
    mode: CoprimalityMode,
    threads: usize,
) -> Result<Vec<SearchHit>> {
    if threads == 0 {
        return Err(Error::validation("search_quadruples: threads must be >= 1"));
    }
    if n < 4 {
        return Err(Error::validation(format!(
            "search_quadruples: bound must be >= 4, got {}",
            n
        )));
    }
    if n > MAX_QUADRUPLE_LIMIT {
        return Err(Error::resource(format!(
            "search_quadruples: bound {} exceeds the probe budget of {}",
            n, MAX_QUADRUPLE_LIMIT
        )));
    }
    let table = build_radical_sieve(n)?;
    let ni = n as i64;
    // Deterministic work list: (k, s) pairs in a fixed order.
    let mut items: Vec<(usize, i64)> = Vec::new();
    for s in 3..=ni {
        items.push((1, s));
    }
    for s in 2..=2 * ni {
        items.push((2, s));
    }
    for s in 3..=ni {
        items.push((3, s));
    }
    let mut partials: Vec<Vec<SearchHit>> = Vec::with_capacity(threads);
    std::thread::scope(|sc| {
        let table = &table;
        let items = &items;
        let handles: Vec<_> = (0..threads)
            .map(|t| {
                sc.spawn(move || {
                    let mut hits = Vec::new();
                    let mut i = t;
                    while i < items.len() {
                        let (k, s) = items[i];
                        quadruples_for_item(k, s, ni, table, min_quality, mode, &mut hits);
                        i += threads;
                    }
                    hits
                })
            })
            .collect();
        for h in handles {
            partials.push(h.join().expect("search worker panicked"));
        }
    });
    let mut all: Vec<SearchHit> = partials.into_iter().flatten().collect();
    all.sort_by(hit_order);
    Ok(all)
}

/// Merge rank-sorted partial lists into the global top k, dropping
/// duplicate points. Equivalent to sorting the concatenation, deduplicating
/// and truncating, but consumes the inputs in order.
pub fn top_k_merge(partials: &[Vec<SearchHit>], k: usize) -> Vec<SearchHit> {
    let mut idx = vec![0usize; partials.len()];
    let mut out: Vec<SearchHit> = Vec::new();
    while out.len() < k {
        let mut best: Option<usize> = None;
        for (i, part) in partials.iter().enumerate() {
            if idx[i] >= part.len() {
                continue;
            }
            best = match best {
                None => Some(i),
                Some(j) => {
                    if hit_order(&part[idx[i]], &partials[j][idx[j]]) == Ordering::Less {
                        Some(i)
                    } else {
                        Some(j)
                    }
                }
            };
        }
        let Some(i) = best else { break };
        let hit = partials[i][idx[i]].clone();
        idx[i] += 1;
        if out.last().is_none_or(|last| last.point != hit.point) {
            out.push(hit);
        }
    }
    out
}
