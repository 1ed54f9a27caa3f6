//! Truncated Laurent tails.
//!
//! A point of `m = { alpha : |alpha| <= q^-1 }` is never stored as an infinite
//! series. The question "is `|alpha - P/Q| < q^-n`?" depends only on the first
//! `n` coefficients `a_1, ..., a_n` of `alpha = sum a_j x^-j`, so a
//! [`TruncTail`] of precision `n` stands for the whole class of series sharing
//! that prefix, a set of Haar measure `q^-n`. Two closed balls of radius
//! `q^-(n+1)` are equal exactly when their centres share the `n`-prefix, which
//! is what [`BallKey`] captures.

use std::fmt;

use crate::error::{Error, Result};
use crate::ff::Field;
use crate::poly::{Degree, Poly, PolyVec};

/// `base^exp` saturated into `u128`, for budget arithmetic.
pub(crate) fn pow_sat(base: u64, exp: u64) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base as u128);
    }
    acc
}

/// Lexicographic rank of a digit string (first digit most significant).
pub(crate) fn digits_rank(digits: &[u32], radix: u32) -> u64 {
    digits.iter().fold(0u64, |acc, &d| acc * radix as u64 + d as u64)
}

pub(crate) fn rank_digits(mut rank: u64, radix: u32, len: usize) -> Vec<u32> {
    let mut out = vec![0u32; len];
    for slot in out.iter_mut().rev() {
        *slot = (rank % radix as u64) as u32;
        rank /= radix as u64;
    }
    out
}

/// The first `n` tail coefficients of `num/den` (`deg num < deg den`), written
/// into `out`. Plain long division on raw encodings.
pub(crate) fn expand_raw(field: &Field, num: &[u32], den: &[u32], out: &mut [u32]) {
    let d = den.len() - 1;
    let lead_inv = field.inv(den[d]).expect("nonzero leading coefficient");
    let mut r = vec![0u32; d + 1];
    r[..num.len()].copy_from_slice(num);
    for slot in out.iter_mut() {
        // r <- x * r
        r.rotate_right(1);
        let c = field.mul(r[d], lead_inv);
        *slot = c;
        if c != 0 {
            for (ri, &nc) in r.iter_mut().zip(den) {
                *ri = field.sub(*ri, field.mul(c, nc));
            }
        }
    }
}

fn check_coeffs(field: &Field, coeffs: &[u32]) -> Result<()> {
    match coeffs.iter().find(|&&c| c >= field.order()) {
        Some(c) => Err(Error::InvalidArgument(format!("coefficient encoding {c} outside the field"))),
        None => Ok(()),
    }
}

fn tail_norm(coeffs: &[u32]) -> Degree {
    match coeffs.iter().position(|&c| c != 0) {
        Some(j) => Degree::Finite(-(j as i64 + 1)),
        None => Degree::NegInf,
    }
}

fn format_tail(field: &Field, coeffs: &[u32]) -> String {
    let parts: Vec<String> = coeffs.iter().map(|&c| field.format_raw(c)).collect();
    format!("[{}]", parts.join(","))
}

/// One coordinate: coefficients of `x^-1, ..., x^-n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruncTail {
    field: Field,
    coeffs: Vec<u32>,
}

impl TruncTail {
    pub fn new(field: &Field, coeffs: Vec<u32>) -> Result<TruncTail> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("precision must be at least 1".into()));
        }
        check_coeffs(field, &coeffs)?;
        Ok(TruncTail { field: field.clone(), coeffs })
    }

    pub fn zero(field: &Field, n: usize) -> TruncTail {
        TruncTail { field: field.clone(), coeffs: vec![0; n.max(1)] }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    /// `-j` for the first nonzero `a_j`; `NegInf` when the prefix vanishes.
    pub fn norm_degree(&self) -> Degree {
        tail_norm(&self.coeffs)
    }

    fn zip_with(&self, other: &TruncTail, op: impl Fn(u32, u32) -> u32) -> Result<TruncTail> {
        self.field.check_same(&other.field)?;
        if self.precision() != other.precision() {
            return Err(Error::PrecisionMismatch(self.precision(), other.precision()));
        }
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| op(a, b)).collect();
        Ok(TruncTail { field: self.field.clone(), coeffs })
    }

    pub fn add(&self, other: &TruncTail) -> Result<TruncTail> {
        self.zip_with(other, |a, b| self.field.add(a, b))
    }

    pub fn sub(&self, other: &TruncTail) -> Result<TruncTail> {
        self.zip_with(other, |a, b| self.field.sub(a, b))
    }

    /// Drops coefficients beyond precision `n`.
    pub fn retruncate(&self, n: usize) -> Result<TruncTail> {
        if n > self.precision() {
            return Err(Error::PrecisionTooLow { have: self.precision(), need: n });
        }
        TruncTail::new(&self.field, self.coeffs[..n].to_vec())
    }

    /// Parses `[a1,a2,...,an]` using the field-element text forms.
    pub fn parse(field: &Field, text: &str) -> Result<TruncTail> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = s
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::syntax("tail", text, "expected [a1,...,an]"))?;
        if inner.is_empty() {
            return Err(Error::syntax("tail", text, "precision must be at least 1"));
        }
        let coeffs = inner
            .split(',')
            .map(|c| field.parse_raw(c.trim_start_matches('(').trim_end_matches(')')))
            .collect::<Result<Vec<_>>>()?;
        TruncTail::new(field, coeffs)
    }
}

impl fmt::Display for TruncTail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_tail(&self.field, &self.coeffs))
    }
}

impl fmt::Debug for TruncTail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A point of `m^m` known to precision `n`: `m` tails stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruncVec {
    field: Field,
    m: usize,
    n: usize,
    coeffs: Vec<u32>,
}

impl TruncVec {
    pub fn new(tails: Vec<TruncTail>) -> Result<TruncVec> {
        let first = tails
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty tail vector".into()))?;
        let (field, n) = (first.field.clone(), first.precision());
        let mut coeffs = Vec::with_capacity(tails.len() * n);
        for t in &tails {
            field.check_same(&t.field)?;
            if t.precision() != n {
                return Err(Error::PrecisionMismatch(n, t.precision()));
            }
            coeffs.extend_from_slice(&t.coeffs);
        }
        Ok(TruncVec { field, m: tails.len(), n, coeffs })
    }

    pub(crate) fn from_flat(field: &Field, m: usize, n: usize, coeffs: Vec<u32>) -> TruncVec {
        debug_assert_eq!(coeffs.len(), m * n);
        TruncVec { field: field.clone(), m, n, coeffs }
    }

    pub fn zero(field: &Field, m: usize, n: usize) -> TruncVec {
        TruncVec::from_flat(field, m, n, vec![0; m * n])
    }

    /// The class with lexicographic rank `rank` among all `q^(mn)` classes.
    pub fn from_rank(field: &Field, m: usize, n: usize, rank: u64) -> TruncVec {
        TruncVec::from_flat(field, m, n, rank_digits(rank, field.order(), m * n))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn precision(&self) -> usize {
        self.n
    }

    /// Coefficients of coordinate `i`.
    pub fn coord(&self, i: usize) -> &[u32] {
        &self.coeffs[i * self.n..(i + 1) * self.n]
    }

    pub fn tail(&self, i: usize) -> TruncTail {
        TruncTail { field: self.field.clone(), coeffs: self.coord(i).to_vec() }
    }

    pub fn flat(&self) -> &[u32] {
        &self.coeffs
    }

    /// Exponent of the sup norm over coordinates.
    pub fn norm_degree(&self) -> Degree {
        (0..self.m).map(|i| tail_norm(self.coord(i))).max().unwrap_or(Degree::NegInf)
    }

    /// Lexicographic rank of the full coefficient tuple.
    pub fn rank(&self) -> u64 {
        digits_rank(&self.coeffs, self.field.order())
    }

    fn zip_with(&self, other: &TruncVec, op: impl Fn(u32, u32) -> u32) -> Result<TruncVec> {
        self.field.check_same(&other.field)?;
        if self.m != other.m {
            return Err(Error::DimensionMismatch(self.m, other.m));
        }
        if self.n != other.n {
            return Err(Error::PrecisionMismatch(self.n, other.n));
        }
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| op(a, b)).collect();
        Ok(TruncVec::from_flat(&self.field, self.m, self.n, coeffs))
    }

    pub fn add(&self, other: &TruncVec) -> Result<TruncVec> {
        self.zip_with(other, |a, b| self.field.add(a, b))
    }

    pub fn sub(&self, other: &TruncVec) -> Result<TruncVec> {
        self.zip_with(other, |a, b| self.field.sub(a, b))
    }

    pub fn retruncate(&self, n: usize) -> Result<TruncVec> {
        if n > self.n || n == 0 {
            return Err(Error::PrecisionTooLow { have: self.n, need: n.max(1) });
        }
        let coeffs = (0..self.m).flat_map(|i| self.coord(i)[..n].to_vec()).collect();
        Ok(TruncVec::from_flat(&self.field, self.m, n, coeffs))
    }

    /// Key of the closed ball of radius `q^-(n_ball+1)` around this point.
    pub fn ball_key(&self, n_ball: usize) -> Result<BallKey> {
        if n_ball > self.n {
            return Err(Error::PrecisionTooLow { have: self.n, need: n_ball });
        }
        let coeffs = (0..self.m).flat_map(|i| self.coord(i)[..n_ball].to_vec()).collect();
        Ok(BallKey { q: self.field.order(), m: self.m, n: n_ball, coeffs })
    }

    /// Parses `[..]` for one coordinate or `[..];[..];...` for several.
    pub fn parse(field: &Field, text: &str) -> Result<TruncVec> {
        let tails = text
            .split(';')
            .map(|t| TruncTail::parse(field, t))
            .collect::<Result<Vec<_>>>()?;
        TruncVec::new(tails)
    }
}

impl fmt::Display for TruncVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.m {
            if i > 0 {
                write!(f, ";")?;
            }
            write!(f, "{}", format_tail(&self.field, self.coord(i)))?;
        }
        Ok(())
    }
}

impl fmt::Debug for TruncVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Canonical key of a radius-`q^-(n+1)` ball in `m^m`: the `m x n` prefix.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct BallKey {
    q: u32,
    m: usize,
    n: usize,
    coeffs: Vec<u32>,
}

impl BallKey {
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn precision(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> u64 {
        digits_rank(&self.coeffs, self.q)
    }
}

/// First `n` Laurent coefficients of each `a_i / den` by exact long division.
pub fn expand_fraction(a: &PolyVec, den: &Poly, n: usize) -> Result<TruncVec> {
    let field = den.field();
    field.check_same(a.field())?;
    let d = den.deg().ok_or(Error::ZeroDenominator)?;
    if a.coords().iter().any(|p| p.deg().is_some_and(|k| k >= d)) {
        return Err(Error::DegreeOverflow);
    }
    if n == 0 {
        return Err(Error::InvalidArgument("precision must be at least 1".into()));
    }
    let m = a.dim();
    let mut coeffs = vec![0u32; m * n];
    for (i, p) in a.coords().iter().enumerate() {
        expand_raw(field, p.coeffs(), den.coeffs(), &mut coeffs[i * n..(i + 1) * n]);
    }
    Ok(TruncVec::from_flat(field, m, n, coeffs))
}

/// Splits `f/g` into its polynomial part and the first `n` tail coefficients.
pub fn split_integer_fractional(f: &Poly, g: &Poly, n: usize) -> Result<(Poly, TruncTail)> {
    if g.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    let (quot, rem) = f.div_rem(g)?;
    let v = expand_fraction(&PolyVec::new(vec![rem])?, g, n)?;
    Ok((quot, v.tail(0)))
}

/// Number of truncation classes `q^(mn)`, checked against `budget`.
pub fn class_count(field: &Field, m: usize, n: usize, budget: u64) -> Result<u64> {
    let required = pow_sat(field.order() as u64, (m * n) as u64);
    if required > budget as u128 {
        return Err(Error::BudgetExceeded { required, budget });
    }
    Ok(required as u64)
}

/// All `q^(mn)` truncation classes of `m^m` at precision `n`, in rank order.
pub fn enumerate_truncations(
    field: &Field,
    m: usize,
    n: usize,
    budget: u64,
) -> Result<impl Iterator<Item = TruncVec> + '_> {
    let total = class_count(field, m, n, budget)?;
    Ok((0..total).map(move |r| TruncVec::from_rank(field, m, n, r)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{enumerate_polys, PolyConstraint};
    use crate::DEFAULT_BUDGET;

    fn f(q: u64) -> Field {
        Field::with_order(q).unwrap()
    }

    fn pv(field: &Field, s: &str) -> PolyVec {
        PolyVec::parse(field, s).unwrap()
    }

    fn p(field: &Field, s: &str) -> Poly {
        Poly::parse(field, s).unwrap()
    }

    #[test]
    fn expansion_examples() {
        let f2 = f(2);
        assert_eq!(expand_fraction(&pv(&f2, "1"), &p(&f2, "x^2"), 2).unwrap().to_string(), "[0,1]");
        assert_eq!(expand_fraction(&pv(&f2, "1"), &p(&f2, "x+1"), 3).unwrap().to_string(), "[1,1,1]");
        assert_eq!(expand_fraction(&pv(&f2, "0"), &p(&f2, "x^3+x"), 4).unwrap().to_string(), "[0,0,0,0]");
        assert_eq!(
            expand_fraction(&pv(&f2, "x"), &p(&f2, "x"), 2).unwrap_err(),
            Error::DegreeOverflow
        );
        assert_eq!(
            expand_fraction(&pv(&f2, "0"), &Poly::zero(&f2), 2).unwrap_err(),
            Error::ZeroDenominator
        );
        // 1/(2x+1) over F_3 = 2x^-1 (1/(1 + 2x^-1)) = 2x^-1 - 4x^-2 + ... = 2, 2, 2, ...
        let f3 = f(3);
        assert_eq!(expand_fraction(&pv(&f3, "1"), &p(&f3, "2*x+1"), 3).unwrap().to_string(), "[2,2,2]");
    }

    #[test]
    fn split_examples() {
        let f2 = f(2);
        let (s, t) = split_integer_fractional(&p(&f2, "x^2+1"), &p(&f2, "x"), 2).unwrap();
        assert_eq!((s.to_string(), t.to_string()), ("x".into(), "[1,0]".into()));
        let (s, t) = split_integer_fractional(&p(&f2, "x^3+x"), &Poly::one(&f2), 3).unwrap();
        assert_eq!((s.to_string(), t.to_string()), ("x^3+x".into(), "[0,0,0]".into()));
        let f3 = f(3);
        let (s, t) = split_integer_fractional(&p(&f3, "x"), &p(&f3, "x"), 1).unwrap();
        assert_eq!((s.to_string(), t.to_string()), ("1".into(), "[0]".into()));
    }

    #[test]
    fn ball_key_examples() {
        let f2 = f(2);
        let v = TruncVec::parse(&f2, "[1,0,1]").unwrap();
        let w = TruncVec::parse(&f2, "[1,0,0]").unwrap();
        assert_eq!(v.ball_key(2).unwrap(), w.ball_key(2).unwrap());
        assert_ne!(v.ball_key(3).unwrap(), w.ball_key(3).unwrap());
        assert_eq!(v.ball_key(4).unwrap_err(), Error::PrecisionTooLow { have: 3, need: 4 });
        let keys: std::collections::HashSet<BallKey> = ["[0,0]", "[1,0]", "[1,1]"]
            .iter()
            .map(|s| TruncVec::parse(&f2, s).unwrap().ball_key(2).unwrap())
            .collect();
        assert_eq!(keys.len(), 3);
    }

    #[test]
    fn truncation_enumeration() {
        let count = |q, m, n| enumerate_truncations(&f(q), m, n, DEFAULT_BUDGET).unwrap().count();
        assert_eq!(count(2, 1, 1), 2);
        assert_eq!(count(2, 1, 2), 4);
        assert_eq!(count(3, 2, 1), 9);
        let f2 = f(2);
        let names: Vec<String> = enumerate_truncations(&f2, 1, 1, 10).unwrap().map(|v| v.to_string()).collect();
        assert_eq!(names, ["[0]", "[1]"]);
        assert!(matches!(enumerate_truncations(&f2, 3, 4, 100), Err(Error::BudgetExceeded { .. })));
        let keys: std::collections::HashSet<BallKey> = enumerate_truncations(&f(3), 2, 2, DEFAULT_BUDGET)
            .unwrap()
            .map(|v| v.ball_key(2).unwrap())
            .collect();
        assert_eq!(keys.len(), 81);
    }

    #[test]
    fn ultrametric_inequality_exhaustive() {
        let f2 = f(2);
        for m in 1..=2 {
            for n in 1..=3 {
                let all: Vec<TruncVec> = enumerate_truncations(&f2, m, n, DEFAULT_BUDGET).unwrap().collect();
                for u in &all {
                    for v in &all {
                        let s = u.add(v).unwrap();
                        let (nu, nv) = (u.norm_degree(), v.norm_degree());
                        assert!(s.norm_degree() <= nu.max(nv));
                        if nu != nv {
                            assert_eq!(s.norm_degree(), nu.max(nv));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn ball_dichotomy_exhaustive() {
        // Balls of radius q^-(j+1) around u and v coincide iff ||u - v|| <= q^-(j+1),
        // i.e. iff the j-prefixes agree; otherwise they are disjoint.
        let f2 = f(2);
        for m in 1..=2 {
            for n in 1..=3 {
                let all: Vec<TruncVec> = enumerate_truncations(&f2, m, n, DEFAULT_BUDGET).unwrap().collect();
                for u in &all {
                    for v in &all {
                        let dist = u.sub(v).unwrap().norm_degree();
                        for j in 1..=n {
                            let close = dist <= Degree::Finite(-(j as i64 + 1));
                            assert_eq!(close, u.ball_key(j).unwrap() == v.ball_key(j).unwrap());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn expansion_recomposes() {
        // a * x^n = (sum c_j x^(n-j)) * N + r with deg r < deg N.
        for q in [2u64, 3] {
            let field = f(q);
            for den in enumerate_polys(&field, PolyConstraint::DegLess(4)).filter(|d| !d.is_zero()) {
                let d = den.deg().unwrap();
                for a in enumerate_polys(&field, PolyConstraint::DegLess(d)) {
                    let n = 4;
                    let tail = expand_fraction(&PolyVec::new(vec![a.clone()]).unwrap(), &den, n).unwrap();
                    let mut quot = vec![0u32; n];
                    for (j, &c) in tail.coord(0).iter().enumerate() {
                        quot[n - 1 - j] = c;
                    }
                    let quot = Poly::new(&field, quot).unwrap();
                    let shifted = &a * &Poly::monomial(&field, 1, n);
                    let r = &shifted - &(&quot * &den);
                    assert!(r.degree() < den.degree(), "{a}/{den}");
                }
            }
        }
    }

    #[test]
    fn rank_round_trip() {
        let f3 = f(3);
        for (r, v) in enumerate_truncations(&f3, 2, 2, DEFAULT_BUDGET).unwrap().enumerate() {
            assert_eq!(v.rank(), r as u64);
        }
        assert_eq!(TruncVec::parse(&f3, "[1,2];[0,1]").unwrap().to_string(), "[1,2];[0,1]");
    }

    #[test]
    fn precision_mixing_is_an_error() {
        let f2 = f(2);
        let a = TruncTail::parse(&f2, "[1,0]").unwrap();
        let b = TruncTail::parse(&f2, "[1,0,1]").unwrap();
        assert_eq!(a.add(&b).unwrap_err(), Error::PrecisionMismatch(2, 3));
        assert_eq!(b.retruncate(2).unwrap(), a);
    }
}
