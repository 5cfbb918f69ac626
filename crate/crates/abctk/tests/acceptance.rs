//! End-to-end acceptance gates. Each test covers one criterion and prints
//! a single pass/fail line (shown with --nocapture, or on failure).

use std::collections::BTreeSet;
use std::process::Command;
use std::time::Instant;

use num::bigint::{BigInt, BigUint};
use num::integer::Integer;
use num::rational::BigRational;
use num::traits::{One, Signed, ToPrimitive, Zero};

use abctk::arith;
use abctk::constructions::{
    construct_general, construct_n4, double_triple, family_2k, order_exponents,
};
use abctk::counting::{self, TuplePoint};
use abctk::search::search_triples;
use abctk::toolkit::find_degeneracy;

fn report(label: &str, f: impl FnOnce() + std::panic::UnwindSafe) {
    match std::panic::catch_unwind(f) {
        Ok(()) => println!("{}: PASS", label),
        Err(e) => {
            println!("{}: FAIL", label);
            std::panic::resume_unwind(e);
        }
    }
}

fn cli(args: &[&str]) -> (String, String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_abctk"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        String::from_utf8(out.stdout).expect("stdout is utf-8"),
        String::from_utf8(out.stderr).expect("stderr is utf-8"),
        out.status.code().unwrap_or(-1),
    )
}

fn coords(p: &TuplePoint) -> Vec<i64> {
    p.coords().iter().map(|c| c.to_i64().unwrap()).collect()
}

#[test]
fn criterion_1_sieve_matches_factorization_oracle() {
    report(
        "criterion 1 (sieve search equals the factorizer oracle for c <= 2000, under 10 s)",
        || {
            let start = Instant::now();
            let hits = search_triples(2000, 1.0, 2).unwrap();
            // Independent radical path: the general-purpose factorizer.
            let mut rad = vec![0u64; 2001];
            for m in 1..=2000u64 {
                rad[m as usize] = arith::radical(&BigInt::from(m))
                    .unwrap()
                    .to_u64()
                    .unwrap();
            }
            let mut want: Vec<(u64, u64, u64, f64)> = Vec::new();
            for c in 2..=2000u64 {
                for a in 1..=c / 2 {
                    let b = c - a;
                    if num::integer::gcd(a, b) != 1 {
                        continue;
                    }
                    let rp = rad[a as usize] as u128 * rad[b as usize] as u128 * rad[c as usize] as u128;
                    let q = (c as f64).ln() / (rp as f64).ln();
                    if q > 1.0 {
                        want.push((a, b, c, q));
                    }
                }
            }
            let mut got: Vec<(u64, u64, u64, f64)> = hits
                .iter()
                .map(|h| {
                    let c = h.point.coords();
                    (
                        c[0].to_u64().unwrap(),
                        c[1].to_u64().unwrap(),
                        c[2].magnitude().to_u64().unwrap(),
                        h.quality,
                    )
                })
                .collect();
            assert_eq!(got.len(), want.len());
            got.sort_by_key(|t| (t.2, t.0));
            want.sort_by_key(|t| (t.2, t.0));
            for (g, w) in got.iter().zip(&want) {
                assert_eq!((g.0, g.1, g.2), (w.0, w.1, w.2));
                assert!((g.3 - w.3).abs() < 1e-12);
            }
            assert_eq!(hits.len(), 40);
            let top: Vec<Vec<i64>> = hits.iter().take(5).map(|h| coords(&h.point)).collect();
            assert_eq!(
                top,
                vec![
                    vec![3, 125, -128],
                    vec![1, 512, -513],
                    vec![1, 242, -243],
                    vec![5, 1024, -1029],
                    vec![1, 80, -81]
                ]
            );
            assert!(
                start.elapsed().as_secs_f64() < 10.0,
                "took {:?}",
                start.elapsed()
            );
        },
    );
}

#[test]
fn criterion_2_search_milestones() {
    report(
        "criterion 2 (named best triples at bounds 10 and 10^4)",
        || {
            let small = search_triples(10, 1.0, 1).unwrap();
            assert_eq!(small.len(), 1);
            assert_eq!(coords(&small[0].point), vec![1, 8, -9]);

            let big = search_triples(10_000, 1.0, 4).unwrap();
            assert_eq!(big.len(), 121);
            assert_eq!(coords(&big[0].point), vec![1, 4374, -4375]);
            assert!((big[0].quality - 1.56788726).abs() < 1e-4);
        },
    );
}

#[test]
fn criterion_2_deep_milestone() {
    report("criterion 2, deep run (best triple up to 10^7)", || {
        let hits = search_triples(10_000_000, 1.0, 8).unwrap();
        assert_eq!(coords(&hits[0].point), vec![2, 6436341, -6436343]);
        assert!((hits[0].quality - 1.6299).abs() < 1e-4);
    });
}

#[test]
fn criterion_3_doubling_law() {
    report(
        "criterion 3 (doubling every hit with c <= 1000: radical kept, height doubled, quadric exact)",
        || {
            let hits = search_triples(1000, 1.0, 1).unwrap();
            assert_eq!(hits.len(), 31);
            let mut failures = 0;
            for h in &hits {
                let d = double_triple(&h.point).unwrap();
                let sum: BigInt = d.coords().iter().sum();
                assert!(sum.is_zero());
                let mut g = BigInt::zero();
                for c in d.coords() {
                    g = num::integer::gcd(g, c.clone());
                }
                assert!(g.is_one());
                if counting::point_radical(&h.point).unwrap()
                    != counting::point_radical(&d).unwrap()
                {
                    failures += 1;
                }
                let parent_h = counting::height(&h.point);
                let child_h = counting::height(&d);
                assert!((child_h - 2.0 * parent_h).abs() <= std::f64::consts::LN_2 + 1e-9);
                let c = d.coords();
                assert_eq!(&c[1] * &c[1], BigInt::from(4) * &c[0] * &c[2]);
            }
            assert_eq!(failures, 0);
        },
    );
}

#[test]
fn criterion_4_cli_exponential_quadruples() {
    report(
        "criterion 4 (CLI p26-n4: 5 tuples at eps 1/10 under 10 s; first tuple at eps 15/100)",
        || {
            let start = Instant::now();
            let (stdout, _stderr, code) =
                cli(&["construct", "p26-n4", "--epsilon", "1/10", "--count", "5"]);
            assert_eq!(code, 0);
            let lines: Vec<&str> = stdout.lines().collect();
            assert_eq!(lines.len(), 5);
            assert!(
                start.elapsed().as_secs_f64() < 10.0,
                "took {:?}",
                start.elapsed()
            );
            for line in &lines {
                let v: serde_json::Value = serde_json::from_str(line).unwrap();
                assert_eq!(v["n"], 4);
                assert_eq!(v["version"], 1);
            }

            let (stdout, _stderr, code) =
                cli(&["construct", "p26-n4", "--epsilon", "15/100", "--count", "1"]);
            assert_eq!(code, 0);
            let v: serde_json::Value =
                serde_json::from_str(stdout.lines().next().unwrap()).unwrap();
            let xs: Vec<&str> = v["x"]
                .as_array()
                .unwrap()
                .iter()
                .map(|x| x.as_str().unwrap())
                .collect();
            assert_eq!(xs, vec!["103", "-729", "625", "1"]);
        },
    );
}

#[test]
fn criterion_5_general_construction() {
    report(
        "criterion 5 (n = 5: tail orders brute-confirmed, tuple meets size and congruence bounds)",
        || {
            let primes = [7u64, 11, 13, 17];
            let orders = order_exponents(&primes).unwrap();
            assert_eq!(orders, vec![240, 48, 20, 30]);
            // 240 really is the least r with 7^r = 1 mod 11, 13 and 17.
            let powmod = |mut b: u64, mut e: u64, m: u64| {
                let mut acc = 1u64;
                b %= m;
                while e > 0 {
                    if e & 1 == 1 {
                        acc = acc * b % m;
                    }
                    b = b * b % m;
                    e >>= 1;
                }
                acc
            };
            for r in 1..240u64 {
                assert!(
                    [11u64, 13, 17].iter().any(|&m| powmod(7, r, m) != 1),
                    "7 has order dividing {}",
                    r
                );
            }
            assert!([11u64, 13, 17].iter().all(|&m| powmod(7, 240, m) == 1));

            let eps = BigRational::new(1.into(), 2.into());
            let results = construct_general(5, &eps, None, 1, 0).unwrap();
            assert_eq!(results.len(), 1);
            let plan = results[0].plan();
            assert_eq!(plan.primes, vec![7, 11, 13, 17]);
            assert_eq!(plan.orders, vec![240, 48, 20, 30]);
            let point = results[0].point().expect("realized within budget").clone();
            let cs = point.coords();
            assert_eq!(cs.len(), 5);
            let x0 = &cs[0];
            assert!(x0.is_positive());
            // x0 < eps * max, exactly.
            assert!(x0.magnitude() * BigUint::from(2u32) < point.max_abs());
            // x0 = -(n-2) mod p1 and -(n-4) mod the other primes; in
            // particular x0 is coprime to every construction prime.
            assert_eq!(x0.mod_floor(&BigInt::from(7)), BigInt::from(4));
            for p in [11u32, 13, 17] {
                assert_eq!(x0.mod_floor(&BigInt::from(p)), BigInt::from(p - 1));
            }
            assert!(arith::pairwise_coprime(cs).unwrap());
            // Each remaining coordinate is a pure power of its prime, so
            // rad of the product is rad(x0) * 7 * 11 * 13 * 17, which the
            // trivial bound rad(x0) <= x0 caps at 7 * 11 * 13 * 17 * x0.
            for (i, &p) in [7u32, 11, 13, 17].iter().enumerate() {
                let mut v = cs[i + 1].magnitude().clone();
                while (&v % p).is_zero() {
                    v /= p;
                }
                assert!(v.is_one(), "coordinate {} is not a power of {}", i + 1, p);
            }
        },
    );
}

#[test]
fn criterion_6_family_2k() {
    report(
        "criterion 6 (family k = 1..10: 2-adic valuation k+2; radical-to-max ratios strictly fall)",
        || {
            let mut prev_bound: Option<BigRational> = None;
            let mut prev_true: Option<BigRational> = None;
            let true_rads = [6u64, 30, 1230, 4035630, 86860321352430];
            for k in 1..=10u32 {
                let p = family_2k(k).unwrap();
                let m = &p.coords()[1];
                let pow = p.coords()[2].magnitude().clone();
                assert_eq!(
                    arith::valuation(m, &BigUint::from(2u32)).unwrap(),
                    k + 2
                );
                // Certified bound: rad <= 6 * odd part of m; its ratio to
                // the largest coordinate strictly decreases.
                let odd = m.magnitude() >> (k as usize + 2);
                let bound = BigRational::new(
                    BigInt::from(6) * BigInt::from(odd),
                    BigInt::from(pow.clone()),
                );
                if let Some(prev) = &prev_bound {
                    assert!(&bound < prev, "bound ratio rose at k = {}", k);
                }
                prev_bound = Some(bound);
                // For small k the radical is exactly computable; the true
                // ratio strictly decreases as well.
                if k <= 5 {
                    let rad = counting::point_radical(&p).unwrap();
                    assert_eq!(rad, BigUint::from(true_rads[k as usize - 1]));
                    let true_ratio =
                        BigRational::new(BigInt::from(rad), BigInt::from(pow));
                    if let Some(prev) = &prev_true {
                        assert!(&true_ratio < prev, "true ratio rose at k = {}", k);
                    }
                    prev_true = Some(true_ratio);
                }
            }
        },
    );
}

#[test]
fn criterion_7_function_field_inequality() {
    report(
        "criterion 7 (1000 random polynomial triples all satisfy the degree inequality)",
        || {
            let (stdout, _stderr, code) = cli(&[
                "polyfield", "verify", "--trials", "1000", "--max-deg", "30", "--seed", "7",
            ]);
            assert_eq!(code, 0);
            assert_eq!(stdout.trim(), "1000/1000 pass");
        },
    );
}

#[test]
fn criterion_8_degeneracy_probe() {
    report(
        "criterion 8 (doubled tuples share the quadric; exponential tuples show no degree-2 relation)",
        || {
            let doubled: Vec<TuplePoint> = search_triples(1000, 1.0, 1)
                .unwrap()
                .into_iter()
                .take(12)
                .map(|h| double_triple(&h.point).unwrap())
                .collect();
            let rep = find_degeneracy(&doubled, 2).unwrap();
            let quadric: Vec<BigInt> = [0, 0, 4, -1, 0, 0]
                .iter()
                .map(|&k| BigInt::from(k))
                .collect();
            assert!(rep.kernel_basis.contains(&quadric));
            for p in &doubled {
                let c = p.coords();
                assert!((BigInt::from(4) * &c[0] * &c[2] - &c[1] * &c[1]).is_zero());
            }

            let eps = BigRational::new(15.into(), 100.into());
            let results = construct_n4(&eps, 12).unwrap();
            let mut pairs = BTreeSet::new();
            let pts: Vec<TuplePoint> = results
                .iter()
                .map(|r| {
                    let plan = r.plan();
                    pairs.insert((plan.e1.unwrap(), plan.e2.unwrap()));
                    r.point().expect("realized").clone()
                })
                .collect();
            assert_eq!(pairs.len(), 12);
            let rep = find_degeneracy(&pts, 2).unwrap();
            assert!(rep.kernel_basis.is_empty());
            assert!(!rep.underdetermined);
        },
    );
}

#[test]
fn criterion_9_cli_determinism() {
    report(
        "criterion 9 (byte-identical output across thread counts and repeated seeds)",
        || {
            let a = cli(&["search", "triples", "--max-c", "2000", "--threads", "1"]);
            let b = cli(&["search", "triples", "--max-c", "2000", "--threads", "4"]);
            assert_eq!(a.2, 0);
            assert_eq!(b.2, 0);
            assert!(!a.0.is_empty());
            assert_eq!(a.0, b.0);

            let qa = cli(&[
                "search", "quadruples", "--max-c", "100", "--min-quality", "1.5",
                "--threads", "1",
            ]);
            let qb = cli(&[
                "search", "quadruples", "--max-c", "100", "--min-quality", "1.5",
                "--threads", "4",
            ]);
            assert_eq!(qa.2, 0);
            assert_eq!(qa.0, qb.0);
            assert!(!qa.0.is_empty());

            let g1 = cli(&[
                "construct", "p26-general", "--n", "5", "--epsilon", "1/2", "--seed", "7",
                "--count", "1",
            ]);
            let g2 = cli(&[
                "construct", "p26-general", "--n", "5", "--epsilon", "1/2", "--seed", "7",
                "--count", "1",
            ]);
            assert_eq!(g1.2, 0);
            assert!(!g1.0.is_empty());
            assert_eq!(g1.0, g2.0);

            let f1 = cli(&[
                "polyfield", "verify", "--trials", "200", "--max-deg", "20", "--seed", "3",
            ]);
            let f2 = cli(&[
                "polyfield", "verify", "--trials", "200", "--max-deg", "20", "--seed", "3",
            ]);
            assert_eq!(f1.2, 0);
            assert_eq!(f1.0, f2.0);
        },
    );
}
