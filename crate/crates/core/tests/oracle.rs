//! Independent brute-force oracle for the minimal denominator, built only from
//! polynomial division: the first `n` tail digits of `P/Q` are the coefficients
//! of `floor(P x^n / Q)`.

use std::collections::BTreeMap;

use ffminden::dist::{continuous_dist, discrete_dist, numerator_from_rank, EngineOptions, Outcome};
use ffminden::laurent::enumerate_truncations;
use ffminden::minden::q_min;
use ffminden::poly::{enumerate_polys, PolyConstraint};
use ffminden::{DenomSet, Field, Poly, PolyVec, Statistic, TruncVec};

/// Tail digits `a_1..a_n` of `num / den`, `deg num < deg den`.
fn digits(num: &Poly, den: &Poly, n: usize) -> Vec<u32> {
    let shifted = num * &Poly::monomial(num.field(), 1, n);
    let (quot, _) = shifted.div_rem(den).unwrap();
    (1..=n).map(|j| quot.coeff(n - j)).collect()
}

struct Found {
    degree: usize,
    /// Every accepting denominator of the minimal degree, ascending.
    denominators: Vec<Poly>,
}

fn tuples(f: &Field, m: usize, d: usize) -> Vec<Vec<Poly>> {
    let polys: Vec<Poly> = enumerate_polys(f, PolyConstraint::DegLess(d)).collect();
    let mut out = vec![Vec::new()];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|t| {
                polys.iter().map(move |p| {
                    let mut t = t.clone();
                    t.push(p.clone());
                    t
                })
            })
            .collect();
    }
    out
}

/// Straight from the definition: least `d` such that some `Q` in `S` of
/// degree `d` and primitive `(P, Q)` with `||P|| < |Q|` match all `n` digits.
fn oracle(f: &Field, s: &DenomSet, target: &[Vec<u32>], n: usize) -> Found {
    let m = target.len();
    for d in 0.. {
        let numerators = tuples(f, m, d);
        let mut hits = Vec::new();
        for q in enumerate_polys(f, PolyConstraint::MonicDegEq(d)).filter(|q| s.contains(q)) {
            let ok = numerators.iter().any(|p| {
                let mut all = p.clone();
                all.push(q.clone());
                let g = all.iter().fold(Poly::zero(f), |g, x| g.gcd(x).unwrap());
                g.is_one() && p.iter().zip(target).all(|(pi, t)| digits(pi, &q, n) == *t)
            });
            if ok {
                hits.push(q);
            }
        }
        if !hits.is_empty() {
            return Found { degree: d, denominators: hits };
        }
    }
    unreachable!()
}

fn configs() -> Vec<(u64, usize, usize)> {
    let mut out = Vec::new();
    for n in 1..=3 {
        out.push((2, 1, n));
        out.push((3, 1, n));
    }
    out.extend([(2, 2, 1), (2, 2, 2), (3, 2, 1), (4, 1, 1), (4, 1, 2), (5, 1, 2)]);
    out
}

const SETS: [&str; 6] = ["all-monic", "powers:x", "powers:x+1", "irreducible", "degrees:even", "degrees:odd"];

#[test]
fn solver_matches_definition_on_every_class() {
    for (q, m, n) in configs() {
        let f = Field::with_order(q).unwrap();
        for text in SETS {
            let s = DenomSet::parse(&f, text).unwrap();
            for alpha in enumerate_truncations(&f, m, n, u64::MAX).unwrap() {
                let target: Vec<Vec<u32>> = (0..m).map(|i| alpha.coord(i).to_vec()).collect();
                let want = oracle(&f, &s, &target, n);
                let got = q_min(&alpha, n, &s).unwrap();
                assert_eq!(got.degree, want.degree, "q={q} m={m} n={n} S={text} alpha={alpha}");
                assert_eq!(got.denominator, want.denominators[0], "q={q} m={m} n={n} S={text} alpha={alpha}");
                let mut all = vec![got.denominator.clone()];
                all.extend(got.competitors.iter().cloned());
                all.sort();
                assert_eq!(all, want.denominators, "q={q} m={m} n={n} S={text} alpha={alpha}");
            }
        }
    }
}

fn oracle_law(f: &Field, s: &DenomSet, m: usize, n: usize, modulus: Option<&Poly>) -> BTreeMap<Poly, u64> {
    let total = (f.order() as u64).pow((m * n) as u32);
    let mut law = BTreeMap::new();
    for rank in 0..total {
        let target: Vec<Vec<u32>> = match modulus {
            None => {
                let alpha = TruncVec::from_rank(f, m, n, rank);
                (0..m).map(|i| alpha.coord(i).to_vec()).collect()
            }
            Some(big_n) => {
                let a: PolyVec = numerator_from_rank(f, m, n, rank);
                a.coords().iter().map(|ai| digits(ai, big_n, n)).collect()
            }
        };
        *law.entry(oracle(f, s, &target, n).denominators[0].clone()).or_insert(0) += 1;
    }
    law
}

#[test]
fn laws_match_oracle_tallies() {
    let opts = EngineOptions::default();
    for (q, m, n) in configs() {
        let f = Field::with_order(q).unwrap();
        let moduli = [Poly::monomial(&f, 1, n), &Poly::monomial(&f, 1, n) + &Poly::one(&f)];
        for text in SETS {
            let s = DenomSet::parse(&f, text).unwrap();
            let expect = oracle_law(&f, &s, m, n, None);
            let got = continuous_dist(&s, m, n, Statistic::QMin, &opts).unwrap();
            let got: BTreeMap<Poly, u64> = got
                .counts
                .into_iter()
                .map(|(o, c)| match o {
                    Outcome::Denominator(p) => (p, c),
                    Outcome::Degree(_) => unreachable!(),
                })
                .collect();
            assert_eq!(got, expect, "continuous q={q} m={m} n={n} S={text}");
            for big_n in &moduli {
                let expect = oracle_law(&f, &s, m, n, Some(big_n));
                let got = discrete_dist(&s, m, big_n, Statistic::QMin, &opts).unwrap();
                let got: BTreeMap<Poly, u64> = got
                    .counts
                    .into_iter()
                    .map(|(o, c)| match o {
                        Outcome::Denominator(p) => (p, c),
                        Outcome::Degree(_) => unreachable!(),
                    })
                    .collect();
                assert_eq!(got, expect, "discrete q={q} m={m} n={n} S={text} N={big_n}");
            }
        }
    }
}

#[test]
fn oracle_digits_agree_with_known_expansions() {
    let f = Field::with_order(2).unwrap();
    let p = |t: &str| Poly::parse(&f, t).unwrap();
    assert_eq!(digits(&p("1"), &p("x"), 3), [1, 0, 0]);
    assert_eq!(digits(&p("1"), &p("x+1"), 3), [1, 1, 1]);
    assert_eq!(digits(&p("1"), &p("x^2+x+1"), 4), [0, 1, 1, 0]);
}
