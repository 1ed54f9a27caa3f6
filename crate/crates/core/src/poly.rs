//! The polynomial ring `R = F_q[x]`.
//!
//! Polynomials are dense little-endian vectors of raw field encodings with no
//! trailing zeros; the zero polynomial is the empty vector and has degree
//! [`Degree::NegInf`]. Norms `|f| = q^deg f` are never materialized: every norm
//! comparison is a comparison of degree exponents.
//!
//! Canonical order (used for enumeration, tie-breaking and reports): by degree,
//! then lexicographically on coefficient encodings from the leading
//! coefficient downward. For polynomials of bounded degree this coincides with
//! the order of the integer `sum c_i q^i`.

use std::cmp::Ordering;
use std::collections::VecDeque;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::ff::Field;

/// A degree or norm exponent. `NegInf` (the degree of zero) sorts below every
/// finite value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInf,
    Finite(i64),
}

impl Degree {
    pub fn finite(self) -> Option<i64> {
        match self {
            Degree::NegInf => None,
            Degree::Finite(d) => Some(d),
        }
    }
}

impl From<usize> for Degree {
    fn from(d: usize) -> Self {
        Degree::Finite(d as i64)
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInf => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// A polynomial over a finite field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    field: Field,
    coeffs: Vec<u32>,
}

impl Poly {
    /// Builds a polynomial from little-endian coefficient encodings.
    pub fn new(field: &Field, coeffs: Vec<u32>) -> Result<Poly> {
        if let Some(&c) = coeffs.iter().find(|&&c| c >= field.order()) {
            return Err(Error::InvalidArgument(format!(
                "coefficient encoding {c} outside [0, {})",
                field.order()
            )));
        }
        Ok(Poly::from_raw(field, coeffs))
    }

    /// Normalizing constructor for encodings already known to be in range.
    pub(crate) fn from_raw(field: &Field, mut coeffs: Vec<u32>) -> Poly {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { field: field.clone(), coeffs }
    }

    pub fn zero(field: &Field) -> Poly {
        Poly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &Field) -> Poly {
        Poly { field: field.clone(), coeffs: vec![1] }
    }

    pub fn x(field: &Field) -> Poly {
        Poly::monomial(field, 1, 1)
    }

    /// `c * x^k` for a raw coefficient encoding `c`.
    pub fn monomial(field: &Field, c: u32, k: usize) -> Poly {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = c;
        Poly::from_raw(field, coeffs)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    /// Coefficient of `x^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::NegInf,
            n => Degree::Finite(n as i64 - 1),
        }
    }

    /// Degree as an index; `None` for zero.
    pub fn deg(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    pub fn leading(&self) -> Option<u32> {
        self.coeffs.last().copied()
    }

    /// Multiplies every coefficient by the raw encoding `c`.
    pub fn scale(&self, c: u32) -> Poly {
        let f = &self.field;
        Poly::from_raw(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    /// The monic associate (zero stays zero).
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None | Some(1) => self.clone(),
            Some(l) => self.scale(self.field.inv(l).expect("nonzero leading coefficient")),
        }
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly> {
        self.field.check_same(&other.field)?;
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect();
        Ok(Poly::from_raw(f, coeffs))
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly> {
        self.field.check_same(&other.field)?;
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect();
        Ok(Poly::from_raw(f, coeffs))
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly> {
        self.field.check_same(&other.field)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Poly::zero(&self.field));
        }
        let f = &self.field;
        let mut out = vec![0u32; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Ok(Poly::from_raw(f, out))
    }

    /// Euclidean division: `self = quotient * divisor + remainder` with
    /// `deg remainder < deg divisor`.
    pub fn div_rem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        self.field.check_same(&divisor.field)?;
        let f = &self.field;
        let db = divisor.deg().ok_or(Error::DivisionByZero)?;
        let lead_inv = f.inv(divisor.coeffs[db]).expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        if rem.len() <= db {
            return Ok((Poly::zero(f), self.clone()));
        }
        let mut quot = vec![0u32; rem.len() - db];
        for top in (db..rem.len()).rev() {
            let c = f.mul(rem[top], lead_inv);
            if c == 0 {
                continue;
            }
            let shift = top - db;
            quot[shift] = c;
            for (i, &b) in divisor.coeffs.iter().enumerate() {
                rem[shift + i] = f.sub(rem[shift + i], f.mul(c, b));
            }
        }
        rem.truncate(db);
        Ok((Poly::from_raw(f, quot), Poly::from_raw(f, rem)))
    }

    pub fn rem(&self, divisor: &Poly) -> Result<Poly> {
        Ok(self.div_rem(divisor)?.1)
    }

    /// True when `self` divides `other` (zero divides only zero).
    pub fn divides(&self, other: &Poly) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.rem(self).map(|r| r.is_zero()).unwrap_or(false)
    }

    pub fn pow(&self, mut k: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(&self.field);
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    /// Monic gcd of two polynomials; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Result<Poly> {
        self.field.check_same(&other.field)?;
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    /// Monic gcd of a nonempty list that is not entirely zero.
    pub fn gcd_all(polys: &[Poly]) -> Result<Poly> {
        let first = polys.first().ok_or(Error::AllZero)?;
        let mut g = Poly::zero(&first.field);
        for p in polys {
            g = g.gcd(p)?;
            if g.is_one() {
                break;
            }
        }
        if g.is_zero() {
            Err(Error::AllZero)
        } else {
            Ok(g)
        }
    }

    /// Irreducibility by trial division with monic candidates of degree up to
    /// half the degree.
    pub fn is_irreducible(&self) -> Result<bool> {
        let d = match self.deg() {
            Some(d) if d >= 1 => d,
            _ => return Err(Error::DegreeTooSmall),
        };
        for k in 1..=d / 2 {
            for g in enumerate_polys(&self.field, PolyConstraint::MonicDegEq(k)) {
                if g.divides(self) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Factorization into monic irreducibles by trial division.
    pub fn factor(&self) -> Result<Factorization> {
        let unit = self.leading().ok_or(Error::ZeroInput)?;
        let mut rest = self.monic();
        let mut factors = Vec::new();
        let mut k = 1;
        while rest.deg().unwrap_or(0) >= 2 * k {
            for g in enumerate_polys(&self.field, PolyConstraint::MonicDegEq(k)) {
                let mut exp = 0;
                loop {
                    let (quot, r) = rest.div_rem(&g)?;
                    if !r.is_zero() {
                        break;
                    }
                    rest = quot;
                    exp += 1;
                }
                if exp > 0 {
                    factors.push((g, exp));
                }
                if rest.deg().unwrap_or(0) < 2 * k {
                    break;
                }
            }
            k += 1;
        }
        if rest.deg().unwrap_or(0) >= 1 {
            factors.push((rest, 1));
        }
        factors.sort();
        Ok(Factorization { unit, factors })
    }

    /// All monic divisors in canonical order.
    pub fn monic_divisors(&self) -> Result<Vec<Poly>> {
        let fact = self.factor()?;
        let mut divs = vec![Poly::one(&self.field)];
        for (g, e) in &fact.factors {
            let mut next = Vec::with_capacity(divs.len() * (*e as usize + 1));
            for d in &divs {
                let mut cur = d.clone();
                next.push(cur.clone());
                for _ in 0..*e {
                    cur = &cur * g;
                    next.push(cur.clone());
                }
            }
            divs = next;
        }
        divs.sort();
        Ok(divs)
    }

    /// Number of monic divisors, `prod (e_i + 1)`.
    pub fn divisor_count(&self) -> Result<u64> {
        Ok(self.factor()?.factors.iter().map(|(_, e)| *e as u64 + 1).product())
    }

    /// Möbius function of the monic associate.
    pub fn mobius(&self) -> Result<i8> {
        let fact = self.factor()?;
        if fact.factors.iter().any(|(_, e)| *e >= 2) {
            return Ok(0);
        }
        Ok(if fact.factors.len() % 2 == 0 { 1 } else { -1 })
    }

    /// Parses the polynomial text grammar (`2*x^2+x+1`, `(t+1)*x+(t)`) or the
    /// little-endian list form `[a0,a1,...]`.
    pub fn parse(field: &Field, text: &str) -> Result<Poly> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::syntax("polynomial", text, "empty"));
        }
        if let Some(inner) = s.strip_prefix('[') {
            let inner = inner
                .strip_suffix(']')
                .ok_or_else(|| Error::syntax("polynomial", text, "unterminated list"))?;
            if inner.is_empty() {
                return Ok(Poly::zero(field));
            }
            let coeffs = split_top_level(inner, ',')
                .iter()
                .map(|c| field.parse_raw(strip_parens(c)))
                .collect::<Result<Vec<_>>>()?;
            return Ok(Poly::from_raw(field, coeffs));
        }
        let mut coeffs: Vec<u32> = Vec::new();
        for term in split_top_level(&s, '+') {
            if term.is_empty() {
                return Err(Error::syntax("polynomial", text, "empty term"));
            }
            let (coef_text, mono) = match term.rfind('x') {
                Some(pos) if paren_depth(term, pos) == 0 => {
                    let (head, mono) = term.split_at(pos);
                    let head = if head.is_empty() {
                        None
                    } else {
                        Some(head.strip_suffix('*').ok_or_else(|| {
                            Error::syntax("polynomial", term, "expected '*' between coefficient and x")
                        })?)
                    };
                    (head, Some(mono))
                }
                _ => (Some(term), None),
            };
            let power = match mono {
                None => 0,
                Some("x") => 1,
                Some(m) => m
                    .strip_prefix("x^")
                    .and_then(|e| e.parse::<usize>().ok())
                    .ok_or_else(|| Error::syntax("polynomial", term, "expected x or x^<nat>"))?,
            };
            let c = match coef_text {
                None => 1,
                Some(t) => {
                    if t.is_empty() {
                        return Err(Error::syntax("polynomial", term, "empty coefficient"));
                    }
                    field.parse_raw(strip_parens(t))?
                }
            };
            if coeffs.len() <= power {
                coeffs.resize(power + 1, 0);
            }
            coeffs[power] = field.add(coeffs[power], c);
        }
        Ok(Poly::from_raw(field, coeffs))
    }

    fn format_coeff(&self, c: u32) -> String {
        let s = self.field.format_raw(c);
        if s.contains('t') {
            format!("({s})")
        } else {
            s
        }
    }
}

fn paren_depth(s: &str, pos: usize) -> i32 {
    s[..pos].chars().fold(0, |d, ch| match ch {
        '(' => d + 1,
        ')' => d - 1,
        _ => d,
    })
}

fn split_top_level(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

fn strip_parens(s: &str) -> &str {
    s.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(s)
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            let mono = match i {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            };
            match (i, c) {
                (0, _) => write!(f, "{}", self.format_coeff(c))?,
                (_, 1) => write!(f, "{mono}")?,
                _ => write!(f, "{}*{mono}", self.format_coeff(c))?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

macro_rules! forward_op {
    ($trait:ident, $method:ident, $checked:ident) => {
        /// Panics when the operands live in different fields; use the
        /// `try_*` method for a checked variant.
        impl $trait<&Poly> for &Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                self.$checked(rhs).expect("polynomials over different fields")
            }
        }
    };
}

forward_op!(Add, add, try_add);
forward_op!(Sub, sub, try_sub);
forward_op!(Mul, mul, try_mul);

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let f = &self.field;
        Poly::from_raw(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }
}

/// `unit * prod g_i^e_i` with monic irreducible `g_i` in canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: u32,
    pub factors: Vec<(Poly, u32)>,
}

impl Factorization {
    pub fn product(&self, field: &Field) -> Poly {
        self.factors
            .iter()
            .fold(Poly::monomial(field, self.unit, 0), |acc, (g, e)| &acc * &g.pow(*e))
    }
}

/// A vector of polynomials over one field: the numerator `P` of `P/Q`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PolyVec(Vec<Poly>);

impl PolyVec {
    pub fn new(polys: Vec<Poly>) -> Result<PolyVec> {
        if let Some(first) = polys.first() {
            for p in &polys[1..] {
                first.field().check_same(p.field())?;
            }
        } else {
            return Err(Error::InvalidArgument("empty polynomial vector".into()));
        }
        Ok(PolyVec(polys))
    }

    pub fn zero(field: &Field, m: usize) -> PolyVec {
        PolyVec(vec![Poly::zero(field); m])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn field(&self) -> &Field {
        self.0[0].field()
    }

    pub fn coords(&self) -> &[Poly] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Poly::is_zero)
    }

    /// Exponent of `||v|| = max |v_i|`.
    pub fn norm_degree(&self) -> Degree {
        self.0.iter().map(Poly::degree).max().unwrap_or(Degree::NegInf)
    }

    /// Parses `p1,p2,...` (top-level commas), optionally wrapped in one pair
    /// of parentheses as printed by `Display`, or a single polynomial.
    pub fn parse(field: &Field, text: &str) -> Result<PolyVec> {
        let mut s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if wrapped(&s) {
            s = s[1..s.len() - 1].to_string();
        }
        let mut parts = Vec::new();
        let mut depth = 0;
        let mut start = 0;
        for (i, ch) in s.char_indices() {
            match ch {
                '(' | '[' => depth += 1,
                ')' | ']' => depth -= 1,
                ',' if depth == 0 => {
                    parts.push(&s[start..i]);
                    start = i + 1;
                }
                _ => {}
            }
        }
        parts.push(&s[start..]);
        PolyVec::new(parts.iter().map(|p| Poly::parse(field, p)).collect::<Result<_>>()?)
    }
}

/// True when the whole text is one parenthesized group.
fn wrapped(s: &str) -> bool {
    if !s.starts_with('(') || !s.ends_with(')') {
        return false;
    }
    let mut depth = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 && i + 1 < s.len() {
                    return false;
                }
            }
            _ => {}
        }
    }
    true
}

impl fmt::Display for PolyVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            return write!(f, "{}", self.0[0]);
        }
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for PolyVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// True iff `gcd(p_1, ..., p_m, q) = 1`. An all-zero input is not primitive.
pub fn is_primitive(p: &PolyVec, q: &Poly) -> bool {
    let mut all: Vec<Poly> = p.coords().to_vec();
    all.push(q.clone());
    matches!(Poly::gcd_all(&all), Ok(g) if g.is_one())
}

/// Degree slice selector for [`enumerate_polys`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyConstraint {
    DegLess(usize),
    DegEq(usize),
    MonicDegEq(usize),
    MonicDegLess(usize),
}

/// Odometer over coefficient vectors in canonical order (index 0 fastest).
pub(crate) struct Odometer {
    digits: Vec<u32>,
    radix: u32,
    exhausted: bool,
}

impl Odometer {
    pub(crate) fn new(len: usize, radix: u32) -> Self {
        Odometer { digits: vec![0; len], radix, exhausted: false }
    }

    pub(crate) fn digits(&self) -> &[u32] {
        &self.digits
    }

    /// Steps to the next vector; returns the lowest index that changed, or
    /// `None` once every vector has been visited.
    pub(crate) fn step(&mut self) -> Option<usize> {
        for (i, d) in self.digits.iter_mut().enumerate() {
            *d += 1;
            if *d < self.radix {
                return Some(i);
            }
            *d = 0;
        }
        self.exhausted = true;
        None
    }
}

impl Iterator for Odometer {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        if self.exhausted {
            return None;
        }
        let out = self.digits.clone();
        self.step();
        Some(out)
    }
}

/// Iterator produced by [`enumerate_polys`].
pub struct PolyIter {
    field: Field,
    /// Pending blocks: (number of free low coefficients, fixed leading coefficient).
    blocks: VecDeque<(usize, Option<u32>)>,
    current: Option<(Option<u32>, Odometer)>,
}

impl Iterator for PolyIter {
    type Item = Poly;

    fn next(&mut self) -> Option<Poly> {
        loop {
            if let Some((lead, odo)) = &mut self.current {
                if let Some(mut coeffs) = odo.next() {
                    coeffs.extend(*lead);
                    return Some(Poly::from_raw(&self.field, coeffs));
                }
                self.current = None;
            }
            let (len, lead) = self.blocks.pop_front()?;
            self.current = Some((lead, Odometer::new(len, self.field.order())));
        }
    }
}

/// Enumerates a degree slice of `R` in canonical order.
pub fn enumerate_polys(field: &Field, constraint: PolyConstraint) -> PolyIter {
    let blocks = match constraint {
        PolyConstraint::DegLess(n) => vec![(n, None)],
        PolyConstraint::DegEq(n) => (1..field.order()).map(|l| (n, Some(l))).collect(),
        PolyConstraint::MonicDegEq(n) => vec![(n, Some(1))],
        PolyConstraint::MonicDegLess(n) => (0..n).map(|d| (d, Some(1))).collect(),
    };
    PolyIter { field: field.clone(), blocks: blocks.into(), current: None }
}
