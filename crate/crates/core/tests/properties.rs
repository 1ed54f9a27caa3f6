use ffminden::dist::{continuous_dist, EngineOptions};
use ffminden::laurent::expand_fraction;
use ffminden::minden::{check_witness, deg_min, discrete_minden, q_min};
use ffminden::{DenomSet, Field, Poly, PolyVec, Statistic, TruncVec};
use proptest::prelude::*;

const ORDERS: [u64; 10] = [2, 3, 4, 5, 7, 8, 9, 16, 25, 27];
const SETS: [&str; 7] = ["all-monic", "powers:x", "powers:x+1", "irreducible", "degrees:even", "degrees:odd", "powers:x^2+1"];

fn field_strategy() -> impl Strategy<Value = Field> {
    prop::sample::select(ORDERS.to_vec()).prop_map(|q| Field::with_order(q).unwrap())
}

fn small_field() -> impl Strategy<Value = Field> {
    prop::sample::select(vec![2u64, 3, 4, 5]).prop_map(|q| Field::with_order(q).unwrap())
}

fn poly_in(f: &Field, max_len: usize) -> impl Strategy<Value = Poly> {
    let f = f.clone();
    prop::collection::vec(0..f.order(), 0..=max_len).prop_map(move |c| Poly::new(&f, c).unwrap())
}

fn field_and_polys(n: usize, max_len: usize) -> impl Strategy<Value = (Field, Vec<Poly>)> {
    field_strategy().prop_flat_map(move |f| {
        let polys = prop::collection::vec(poly_in(&f, max_len), n);
        (Just(f), polys)
    })
}

/// A field, a set, `m`, `n` and a tail class.
fn tail_case() -> impl Strategy<Value = (Field, String, usize, usize, Vec<u32>)> {
    (small_field(), prop::sample::select(SETS.to_vec()), 1..=2usize, 1..=5usize).prop_flat_map(|(f, s, m, n)| {
        let digits = prop::collection::vec(0..f.order(), m * n);
        (Just(f), Just(s.to_string()), Just(m), Just(n), digits)
    })
}

fn tail(f: &Field, n: usize, digits: &[u32]) -> TruncVec {
    let tails = digits.chunks(n).map(|c| ffminden::TruncTail::new(f, c.to_vec()).unwrap()).collect();
    TruncVec::new(tails).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn field_axioms(f in field_strategy(), a in 0u32..27, b in 0u32..27, c in 0u32..27) {
        let q = f.order();
        let (a, b, c) = (a % q, b % q, c % q);
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        } else {
            prop_assert!(f.inv(a).is_none());
        }
        prop_assert_eq!(f.parse_raw(&f.format_raw(a)).unwrap(), a);
    }

    #[test]
    fn division_reconstructs((f, ps) in field_and_polys(2, 7)) {
        let (a, b) = (&ps[0], &ps[1]);
        prop_assume!(!b.is_zero());
        let (quot, rem) = a.div_rem(b).unwrap();
        prop_assert_eq!(&(&quot * b) + &rem, a.clone());
        prop_assert!(rem.degree() < b.degree());
        prop_assert_eq!(Poly::parse(&f, &a.to_string()).unwrap(), a.clone());
    }

    #[test]
    fn gcd_is_monic_common_divisor_and_scales((_f, ps) in field_and_polys(3, 5)) {
        let (a, b, c) = (&ps[0], &ps[1], &ps[2]);
        prop_assume!(!(a.is_zero() && b.is_zero()) && !c.is_zero());
        let g = a.gcd(b).unwrap();
        prop_assert!(g.is_monic() && g.divides(a) && g.divides(b));
        prop_assert_eq!((a * c).gcd(&(b * c)).unwrap(), &g * &c.monic());
    }

    #[test]
    fn factorization_and_mobius((f, ps) in field_and_polys(1, 6)) {
        let p = ps[0].monic();
        prop_assume!(!p.is_zero());
        let fact = p.factor().unwrap();
        let rebuilt = fact.factors.iter().fold(Poly::one(&f), |acc, (r, e)| &acc * &r.pow(*e));
        prop_assert_eq!(rebuilt, p.clone());
        prop_assert!(fact.factors.iter().all(|(r, _)| r.is_irreducible().unwrap()));
        let sum: i64 = p.monic_divisors().unwrap().iter().map(|d| d.mobius().unwrap() as i64).sum();
        prop_assert_eq!(sum, p.is_one() as i64);
        prop_assert_eq!(p.monic_divisors().unwrap().len() as u64, p.divisor_count().unwrap());
    }

    #[test]
    fn expansion_recomposes((f, ps) in field_and_polys(2, 5), n in 1usize..7) {
        let (a, den) = (&ps[0], &ps[1]);
        prop_assume!(den.degree() > a.degree());
        let t = expand_fraction(&PolyVec::new(vec![a.clone()]).unwrap(), den, n).unwrap();
        // a x^n - den * sum t_j x^(n-j) has degree below deg den.
        let digits: Vec<u32> = t.coord(0).iter().rev().copied().collect();
        let tpoly = Poly::new(&f, digits).unwrap();
        let shifted = a * &Poly::monomial(&f, 1, n);
        let rest = &shifted - &(den * &tpoly);
        prop_assert!(rest.degree() < den.degree());
    }

    #[test]
    fn rank_round_trip((f, _s, m, n, digits) in tail_case()) {
        let alpha = tail(&f, n, &digits);
        prop_assert_eq!(TruncVec::from_rank(&f, m, n, alpha.rank()), alpha.clone());
        prop_assert_eq!(TruncVec::parse(&f, &alpha.to_string()).unwrap(), alpha);
    }

    #[test]
    fn witness_is_valid((f, s, _m, n, digits) in tail_case()) {
        let set = DenomSet::parse(&f, &s).unwrap();
        let alpha = tail(&f, n, &digits);
        let r = q_min(&alpha, n, &set).unwrap();
        prop_assert!(check_witness(&alpha, n, &set, &r).is_ok(), "{:?}", check_witness(&alpha, n, &set, &r));
        prop_assert!(r.competitors.iter().all(|c| c > &r.denominator && c.deg() == Some(r.degree)));
        prop_assert_eq!(deg_min(&alpha, n, &set).unwrap().degree, r.degree);
    }

    #[test]
    fn minimal_degree_grows_with_precision((f, s, _m, n, digits) in tail_case()) {
        let set = DenomSet::parse(&f, &s).unwrap();
        let alpha = tail(&f, n, &digits);
        let top = deg_min(&alpha, n, &set).unwrap().degree;
        for k in 1..n {
            prop_assert!(deg_min(&alpha.retruncate(k).unwrap(), k, &set).unwrap().degree <= top);
        }
    }

    #[test]
    fn larger_sets_never_need_larger_degree((f, s, _m, n, digits) in tail_case()) {
        let set = DenomSet::parse(&f, &s).unwrap();
        let all = DenomSet::parse(&f, "all-monic").unwrap();
        let alpha = tail(&f, n, &digits);
        prop_assert!(deg_min(&alpha, n, &all).unwrap().degree <= deg_min(&alpha, n, &set).unwrap().degree);
    }

    #[test]
    fn discrete_point_is_its_expansion(
        (f, s, ps) in small_field().prop_flat_map(|f| {
            let polys = prop::collection::vec(poly_in(&f, 4), 3);
            (Just(f), prop::sample::select(SETS.to_vec()), polys)
        })
    ) {
        let big_n = &ps[2];
        prop_assume!(big_n.degree() > ps[0].degree() && big_n.degree() > ps[1].degree());
        let n = big_n.deg().unwrap();
        prop_assume!(n >= 1);
        let set = DenomSet::parse(&f, s).unwrap();
        let a = PolyVec::new(vec![ps[0].clone(), ps[1].clone()]).unwrap();
        for stat in [Statistic::Degree, Statistic::QMin] {
            let direct = discrete_minden(&a, big_n, &set, stat).unwrap();
            let via = q_min(&expand_fraction(&a, big_n, n).unwrap(), n, &set).unwrap();
            prop_assert_eq!(direct.degree, via.degree);
            if stat == Statistic::QMin {
                prop_assert_eq!(direct, via);
            }
        }
    }

    #[test]
    fn set_text_round_trips(f in small_field(), s in prop::sample::select(SETS.to_vec())) {
        let set = DenomSet::parse(&f, s).unwrap();
        prop_assert_eq!(DenomSet::parse(&f, &set.to_string()).unwrap(), set);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn laws_sum_to_class_count_and_marginalize(
        f in small_field(),
        s in prop::sample::select(SETS.to_vec()),
        m in 1usize..=2,
        n in 1usize..=3,
    ) {
        let set = DenomSet::parse(&f, s).unwrap();
        let opts = EngineOptions::default();
        let deg = continuous_dist(&set, m, n, Statistic::Degree, &opts).unwrap();
        let qmin = continuous_dist(&set, m, n, Statistic::QMin, &opts).unwrap();
        prop_assert_eq!(deg.counts.values().sum::<u64>(), deg.total);
        prop_assert_eq!(qmin.counts.values().sum::<u64>(), qmin.total);
        prop_assert_eq!(qmin.by_degree().counts, deg.counts.clone());
        let parallel = continuous_dist(&set, m, n, Statistic::QMin, &EngineOptions { workers: 3, ..opts }).unwrap();
        prop_assert_eq!(parallel, qmin);
    }
}
