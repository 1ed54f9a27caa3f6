//! Restricted denominator sets `S` of monic polynomials.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::ff::Field;
use crate::laurent::pow_sat;
use crate::poly::{enumerate_polys, Poly, PolyConstraint};

/// Default upper bound for degree scans.
pub const DEFAULT_DEGREE_CAP: usize = 64;

/// Largest degree slice that will be enumerated explicitly.
const SLICE_LIMIT: u128 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DegreeFilter {
    Even,
    Odd,
    List(BTreeSet<usize>),
    /// Inclusive range.
    Range(usize, usize),
}

impl DegreeFilter {
    pub fn admits(&self, d: usize) -> bool {
        match self {
            DegreeFilter::Even => d.is_multiple_of(2),
            DegreeFilter::Odd => d % 2 == 1,
            DegreeFilter::List(ds) => ds.contains(&d),
            DegreeFilter::Range(a, b) => (*a..=*b).contains(&d),
        }
    }

    fn max_degree(&self) -> Option<usize> {
        match self {
            DegreeFilter::Even | DegreeFilter::Odd => None,
            DegreeFilter::List(ds) => ds.last().copied(),
            DegreeFilter::Range(_, b) => Some(*b),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SetKind {
    /// Every monic polynomial, including 1.
    AllMonic,
    /// `{P^d : d >= 0}` for a monic non-constant `P`.
    Powers(Poly),
    /// Monic irreducibles (so 1 is not a member).
    Irreducibles,
    /// All monic polynomials whose degree passes the filter; degree 0 means 1.
    Degrees(DegreeFilter),
    /// A finite explicit list (sorted, deduplicated).
    List(Vec<Poly>),
}

struct Inner {
    field: Field,
    kind: SetKind,
    slices: Mutex<HashMap<usize, Arc<[Poly]>>>,
}

/// A queryable set `S`. Cheap to clone; degree slices are memoized.
#[derive(Clone)]
pub struct DenomSet {
    inner: Arc<Inner>,
}

impl DenomSet {
    pub fn new(field: &Field, kind: SetKind) -> Result<DenomSet> {
        let kind = match kind {
            SetKind::Powers(p) => {
                field.check_same(p.field())?;
                if p.is_constant() {
                    return Err(Error::ConstantBase);
                }
                if !p.is_monic() {
                    return Err(Error::NonMonicBase);
                }
                SetKind::Powers(p)
            }
            SetKind::List(items) => {
                for p in &items {
                    field.check_same(p.field())?;
                    if !p.is_monic() {
                        return Err(Error::NotMonic(p.to_string()));
                    }
                }
                let sorted: BTreeSet<Poly> = items.into_iter().collect();
                if sorted.is_empty() {
                    return Err(Error::EmptySet);
                }
                SetKind::List(sorted.into_iter().collect())
            }
            SetKind::Degrees(DegreeFilter::List(ds)) if ds.is_empty() => return Err(Error::EmptySet),
            SetKind::Degrees(DegreeFilter::Range(a, b)) if a > b => return Err(Error::EmptySet),
            other => other,
        };
        Ok(DenomSet {
            inner: Arc::new(Inner { field: field.clone(), kind, slices: Mutex::new(HashMap::new()) }),
        })
    }

    /// Parses `all-monic | powers:<poly> | irreducible |
    /// degrees:<even|odd|d1,d2,...|a..b> | list:<poly>;<poly>;...`.
    pub fn parse(field: &Field, text: &str) -> Result<DenomSet> {
        let t = text.trim();
        let kind = match t.split_once(':') {
            None => match t {
                "all-monic" => SetKind::AllMonic,
                "irreducible" => SetKind::Irreducibles,
                _ => return Err(set_syntax(t, "unknown set kind")),
            },
            Some(("powers", p)) => SetKind::Powers(Poly::parse(field, p)?),
            Some(("degrees", spec)) => SetKind::Degrees(parse_degrees(spec)?),
            Some(("list", items)) => SetKind::List(
                items
                    .split(';')
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| Poly::parse(field, s))
                    .collect::<Result<Vec<_>>>()?,
            ),
            Some((kind, _)) => return Err(set_syntax(kind, "unknown set kind")),
        };
        DenomSet::new(field, kind)
    }

    pub fn field(&self) -> &Field {
        &self.inner.field
    }

    pub fn kind(&self) -> &SetKind {
        &self.inner.kind
    }

    /// True for explicit finite lists, which the infinite-set statements do
    /// not strictly cover.
    pub fn is_finite(&self) -> bool {
        matches!(self.inner.kind, SetKind::List(_))
    }

    pub fn contains_one(&self) -> bool {
        self.has_degree(0)
    }

    pub fn contains(&self, q: &Poly) -> bool {
        if q.field() != self.field() || !q.is_monic() {
            return false;
        }
        let d = q.deg().unwrap_or(0);
        match &self.inner.kind {
            SetKind::AllMonic => true,
            SetKind::Powers(p) => {
                let dp = p.deg().unwrap_or(1);
                d.is_multiple_of(dp) && p.pow((d / dp) as u32) == *q
            }
            SetKind::Irreducibles => q.is_irreducible().unwrap_or(false),
            SetKind::Degrees(f) => f.admits(d),
            SetKind::List(items) => items.binary_search(q).is_ok(),
        }
    }

    /// Whether the degree-`d` slice is nonempty, decided without enumerating.
    pub fn has_degree(&self, d: usize) -> bool {
        match &self.inner.kind {
            SetKind::AllMonic => true,
            SetKind::Powers(p) => d.is_multiple_of(p.deg().unwrap_or(1)),
            // Monic irreducibles exist in every positive degree.
            SetKind::Irreducibles => d >= 1,
            SetKind::Degrees(f) => f.admits(d),
            SetKind::List(items) => items.iter().any(|p| p.deg() == Some(d)),
        }
    }

    /// Size of the degree-`d` slice.
    pub fn slice_size(&self, d: usize) -> u128 {
        let q = self.field().order() as u64;
        match &self.inner.kind {
            SetKind::AllMonic => pow_sat(q, d as u64),
            SetKind::Degrees(f) => {
                if f.admits(d) {
                    pow_sat(q, d as u64)
                } else {
                    0
                }
            }
            SetKind::Powers(_) => self.has_degree(d) as u128,
            SetKind::Irreducibles => irreducible_count(q, d),
            SetKind::List(items) => items.iter().filter(|p| p.deg() == Some(d)).count() as u128,
        }
    }

    /// Monic members of degree `d` in canonical order.
    pub fn members(&self, d: usize) -> Result<Arc<[Poly]>> {
        if let Some(s) = self.inner.slices.lock().unwrap().get(&d) {
            return Ok(s.clone());
        }
        let size = self.slice_size(d);
        if size > SLICE_LIMIT {
            return Err(Error::BudgetExceeded { required: size, budget: SLICE_LIMIT as u64 });
        }
        let field = self.field();
        let slice: Vec<Poly> = match &self.inner.kind {
            SetKind::AllMonic => enumerate_polys(field, PolyConstraint::MonicDegEq(d)).collect(),
            SetKind::Degrees(f) if f.admits(d) => enumerate_polys(field, PolyConstraint::MonicDegEq(d)).collect(),
            SetKind::Degrees(_) => Vec::new(),
            SetKind::Powers(p) => {
                let dp = p.deg().unwrap_or(1);
                if d.is_multiple_of(dp) {
                    vec![p.pow((d / dp) as u32)]
                } else {
                    Vec::new()
                }
            }
            SetKind::Irreducibles if d == 0 => Vec::new(),
            SetKind::Irreducibles => enumerate_polys(field, PolyConstraint::MonicDegEq(d))
                .filter(|p| p.is_irreducible().unwrap_or(false))
                .collect(),
            SetKind::List(items) => items.iter().filter(|p| p.deg() == Some(d)).cloned().collect(),
        };
        let slice: Arc<[Poly]> = slice.into();
        self.inner.slices.lock().unwrap().insert(d, slice.clone());
        Ok(slice)
    }

    /// Largest degree with a member, for finite lists and bounded filters.
    pub fn max_degree(&self) -> Option<usize> {
        match &self.inner.kind {
            SetKind::List(items) => items.iter().filter_map(Poly::deg).max(),
            SetKind::Degrees(f) => f.max_degree(),
            _ => None,
        }
    }

    /// `m_S(n)`: the least `k >= n` with a member of degree `k`, searched up to `cap`.
    pub fn m_s(&self, n: usize, cap: usize) -> Result<usize> {
        if cap < n {
            return Err(Error::InvalidArgument(format!("degree cap {cap} is below n = {n}")));
        }
        (n..=cap).find(|&k| self.has_degree(k)).ok_or(Error::CapExceeded { from: n, cap })
    }
}

impl fmt::Display for DenomSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.inner.kind {
            SetKind::AllMonic => write!(f, "all-monic"),
            SetKind::Powers(p) => write!(f, "powers:{p}"),
            SetKind::Irreducibles => write!(f, "irreducible"),
            SetKind::Degrees(DegreeFilter::Even) => write!(f, "degrees:even"),
            SetKind::Degrees(DegreeFilter::Odd) => write!(f, "degrees:odd"),
            SetKind::Degrees(DegreeFilter::Range(a, b)) => write!(f, "degrees:{a}..{b}"),
            SetKind::Degrees(DegreeFilter::List(ds)) => {
                let parts: Vec<String> = ds.iter().map(|d| d.to_string()).collect();
                write!(f, "degrees:{}", parts.join(","))
            }
            SetKind::List(items) => {
                let parts: Vec<String> = items.iter().map(|p| p.to_string()).collect();
                write!(f, "list:{}", parts.join(";"))
            }
        }
    }
}

impl fmt::Debug for DenomSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DenomSet({self})")
    }
}

impl PartialEq for DenomSet {
    fn eq(&self, other: &Self) -> bool {
        self.field() == other.field() && self.kind() == other.kind()
    }
}

fn set_syntax(token: &str, reason: &str) -> Error {
    Error::syntax(
        "denominator set",
        token,
        format!("{reason}; expected all-monic | powers:<poly> | irreducible | degrees:<even|odd|d1,d2,..|a..b> | list:<poly>;..."),
    )
}

fn parse_degree(s: &str) -> Result<usize> {
    s.trim().parse().map_err(|_| set_syntax(s, "expected a degree"))
}

fn parse_degrees(spec: &str) -> Result<DegreeFilter> {
    let spec = spec.trim();
    Ok(match spec {
        "even" => DegreeFilter::Even,
        "odd" => DegreeFilter::Odd,
        _ => match spec.split_once("..") {
            Some((a, b)) => DegreeFilter::Range(parse_degree(a)?, parse_degree(b)?),
            None => DegreeFilter::List(
                spec.split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(parse_degree)
                    .collect::<Result<_>>()?,
            ),
        },
    })
}

/// Number of monic irreducibles of degree `d` over `F_q`: `(1/d) sum_{k|d} mu(d/k) q^k`.
fn irreducible_count(q: u64, d: usize) -> u128 {
    if d == 0 {
        return 0;
    }
    let mu = |mut k: usize| -> i128 {
        let mut sign = 1;
        let mut p = 2;
        while p * p <= k {
            if k.is_multiple_of(p) {
                k /= p;
                if k.is_multiple_of(p) {
                    return 0;
                }
                sign = -sign;
            }
            p += 1;
        }
        if k > 1 {
            sign = -sign;
        }
        sign
    };
    let total: i128 = (1..=d)
        .filter(|k| d.is_multiple_of(*k))
        .map(|k| mu(d / k) * pow_sat(q, k as u64).min(i128::MAX as u128 / 4) as i128)
        .sum();
    (total / d as i128) as u128
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u64) -> Field {
        Field::with_order(q).unwrap()
    }

    fn names(s: &DenomSet, d: usize) -> Vec<String> {
        s.members(d).unwrap().iter().map(|p| p.to_string()).collect()
    }

    #[test]
    fn parse_examples() {
        let f2 = f(2);
        assert_eq!(*DenomSet::parse(&f2, "all-monic").unwrap().kind(), SetKind::AllMonic);
        let s = DenomSet::parse(&f2, "powers:x^2+x+1").unwrap();
        assert_eq!(s.to_string(), "powers:x^2+x+1");
        assert_eq!(DenomSet::parse(&f2, "powers:1").unwrap_err(), Error::ConstantBase);
        let f3 = f(3);
        assert_eq!(DenomSet::parse(&f3, "powers:2*x+1").unwrap_err(), Error::NonMonicBase);
        assert!(matches!(DenomSet::parse(&f2, "primes"), Err(Error::Syntax { .. })));
        assert!(matches!(DenomSet::parse(&f2, "degrees:x"), Err(Error::Syntax { .. })));
        assert_eq!(DenomSet::parse(&f2, "list:").unwrap_err(), Error::EmptySet);
        assert_eq!(DenomSet::parse(&f2, "degrees:4..2").unwrap_err(), Error::EmptySet);
        assert!(matches!(DenomSet::parse(&f3, "list:x;2*x"), Err(Error::NotMonic(_))));
        for text in ["degrees:even", "degrees:odd", "degrees:1,3,4", "degrees:2..5", "list:x;x^2+1", "irreducible"] {
            assert_eq!(DenomSet::parse(&f2, text).unwrap().to_string(), text);
        }
        assert!(DenomSet::parse(&f2, "list:x^2+1;x").unwrap().is_finite());
    }

    #[test]
    fn member_examples() {
        let f2 = f(2);
        assert_eq!(names(&DenomSet::parse(&f2, "all-monic").unwrap(), 1), ["x", "x+1"]);
        assert!(names(&DenomSet::parse(&f2, "powers:x^2+x+1").unwrap(), 3).is_empty());
        assert_eq!(names(&DenomSet::parse(&f2, "powers:x^2+x+1").unwrap(), 4), ["x^4+x^2+1"]);
        assert_eq!(names(&DenomSet::parse(&f2, "irreducible").unwrap(), 2), ["x^2+x+1"]);
        assert!(names(&DenomSet::parse(&f2, "irreducible").unwrap(), 0).is_empty());
        assert_eq!(names(&DenomSet::parse(&f2, "degrees:even").unwrap(), 0), ["1"]);
        assert_eq!(names(&DenomSet::parse(&f2, "powers:x").unwrap(), 0), ["1"]);
        assert!(DenomSet::parse(&f2, "all-monic").unwrap().contains_one());
        assert!(!DenomSet::parse(&f2, "degrees:1..3").unwrap().contains_one());
    }

    #[test]
    fn m_s_examples() {
        let f2 = f(2);
        let set = |t: &str| DenomSet::parse(&f2, t).unwrap();
        assert_eq!(set("all-monic").m_s(3, 64).unwrap(), 3);
        assert_eq!(set("powers:x^2+x+1").m_s(3, 64).unwrap(), 4);
        assert_eq!(set("powers:x").m_s(5, 64).unwrap(), 5);
        assert_eq!(set("degrees:even").m_s(5, 64).unwrap(), 6);
        assert_eq!(set("list:x;x^2").m_s(3, 64).unwrap_err(), Error::CapExceeded { from: 3, cap: 64 });
        assert_eq!(set("powers:x^3+x+1").m_s(4, 5).unwrap_err(), Error::CapExceeded { from: 4, cap: 5 });
        for n in 1..=10 {
            assert_eq!(set("all-monic").m_s(n, 64).unwrap(), n);
            assert_eq!(set("irreducible").m_s(n, 64).unwrap(), n);
            for base in ["x", "x^2+x+1", "x^3+x+1", "x^4+x+1"] {
                let s = set(&format!("powers:{base}"));
                let dp = Poly::parse(&f2, base).unwrap().deg().unwrap();
                assert_eq!(s.m_s(n, 64).unwrap(), dp * n.div_ceil(dp));
            }
        }
    }

    #[test]
    fn members_match_membership_exhaustive() {
        for q in [2u64, 3] {
            let field = f(q);
            let base = if q == 2 { "powers:x^2+x+1" } else { "powers:x^2+1" };
            for text in ["all-monic", "powers:x", "powers:x+1", base, "irreducible", "degrees:even", "degrees:1,3", "list:x;x^2;x^3+1"] {
                let s = DenomSet::parse(&field, text).unwrap();
                for d in 0..=5 {
                    let slice = s.members(d).unwrap();
                    assert_eq!(slice.len() as u128, s.slice_size(d), "{text} degree {d}");
                    assert_eq!(!slice.is_empty(), s.has_degree(d), "{text} degree {d}");
                    assert!(slice.windows(2).all(|w| w[0] < w[1]));
                    let all: Vec<Poly> = enumerate_polys(&field, PolyConstraint::MonicDegEq(d)).collect();
                    let filtered: Vec<Poly> = all.into_iter().filter(|p| s.contains(p)).collect();
                    assert_eq!(&filtered[..], &slice[..], "{text} degree {d}");
                }
            }
        }
    }

    #[test]
    fn irreducible_counts() {
        assert_eq!((1..=6).map(|d| irreducible_count(2, d)).collect::<Vec<_>>(), [2, 1, 2, 3, 6, 9]);
        assert_eq!((1..=4).map(|d| irreducible_count(3, d)).collect::<Vec<_>>(), [3, 3, 8, 18]);
    }
}
