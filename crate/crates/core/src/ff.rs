//! Finite fields `F_q` for prime and small prime-power `q`.
//!
//! Elements are identified with their canonical encoding, the integer in
//! `[0, q)` whose base-`p` digits are the coefficients of the element in the
//! basis `1, t, t^2, ...` of `F_p[t]/(modulus)`. Zero encodes to 0 and one to 1,
//! and the encoding order is the canonical total order of the field.
//!
//! Hot paths (polynomial arithmetic, enumeration) work directly on raw `u32`
//! encodings through the lookup tables held by [`Field`]; [`FieldElement`] is
//! the checked, self-describing value type for the public surface.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest field order for which arithmetic tables are built.
pub const MAX_ORDER: u64 = 1024;

/// Built-in moduli (little-endian over `F_p`) for the small extension fields.
const DEFAULT_MODULI: &[(u32, u32, &[u32])] = &[
    (2, 2, &[1, 1, 1]),       // t^2 + t + 1
    (2, 3, &[1, 1, 0, 1]),    // t^3 + t + 1
    (3, 2, &[1, 0, 1]),       // t^2 + 1
    (2, 4, &[1, 1, 0, 0, 1]), // t^4 + t + 1
    (5, 2, &[2, 0, 1]),       // t^2 + 2
    (3, 3, &[1, 2, 0, 1]),    // t^3 + 2t + 1
];

/// A finite field `F_q`, `q = p^e`. Cheap to clone.
#[derive(Clone)]
pub struct Field {
    inner: Arc<Inner>,
}

struct Inner {
    p: u32,
    e: u32,
    q: u32,
    modulus: Option<Vec<u32>>,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Remainder of `a` modulo monic `b` over `F_p`.
fn fp_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    while r.len() > db {
        let lead = r[r.len() - 1];
        let shift = r.len() - 1 - db;
        for (i, &c) in b.iter().enumerate() {
            let sub = (lead as u64 * c as u64 % p as u64) as u32;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        trim(&mut r);
    }
    r
}

fn fp_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    let mut v: Vec<u32> = out.into_iter().map(|c| c as u32).collect();
    trim(&mut v);
    v
}

fn digits_of(mut v: u32, p: u32, e: u32) -> Vec<u32> {
    let mut d = Vec::with_capacity(e as usize);
    for _ in 0..e {
        d.push(v % p);
        v /= p;
    }
    d
}

fn from_digits_base(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// True when the monic `modulus` of degree `e` has no monic factor of degree
/// `1..=e/2` over `F_p`.
fn fp_irreducible(modulus: &[u32], p: u32) -> bool {
    let e = modulus.len() - 1;
    for k in 1..=e / 2 {
        let count = (p as u64).pow(k as u32);
        for low in 0..count {
            let mut g = digits_of(low as u32, p, k as u32);
            g.push(1);
            if fp_rem(modulus, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn format_fp_poly(c: &[u32], var: &str) -> String {
    let mut terms = Vec::new();
    for (i, &a) in c.iter().enumerate().rev() {
        if a == 0 {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        terms.push(match (i, a) {
            (0, _) => a.to_string(),
            (_, 1) => mono,
            _ => format!("{a}*{mono}"),
        });
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join("+")
    }
}

impl Field {
    /// Builds `F_{p^e}`. For `e > 1` the modulus (monic, degree `e`,
    /// little-endian over `F_p`) may be omitted when `q` has a built-in one.
    pub fn new(p: u64, e: u32, modulus: Option<&[u32]>) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NonPrimeCharacteristic(p));
        }
        if e == 0 {
            return Err(Error::InvalidModulus("extension degree must be positive".into()));
        }
        let q = (p as u128).pow(e);
        if q > MAX_ORDER as u128 {
            return Err(Error::FieldTooLarge(q.min(u64::MAX as u128) as u64, MAX_ORDER));
        }
        let (p, q) = (p as u32, q as u32);
        let modulus = match (e, modulus) {
            (1, None) => None,
            (1, Some(_)) => {
                return Err(Error::InvalidModulus("prime fields take no modulus".into()));
            }
            (_, None) => {
                let found = DEFAULT_MODULI
                    .iter()
                    .find(|(mp, me, _)| *mp == p && *me == e)
                    .map(|(_, _, m)| m.to_vec());
                Some(found.ok_or(Error::NoDefaultModulus(q as u64))?)
            }
            (_, Some(m)) => {
                let mut m = m.to_vec();
                trim(&mut m);
                if m.iter().any(|&c| c >= p) {
                    return Err(Error::InvalidModulus(format!("coefficient outside [0, {p})")));
                }
                if m.len() != e as usize + 1 || m[e as usize] != 1 {
                    return Err(Error::InvalidModulus(format!(
                        "{} must be monic of degree {e}",
                        format_fp_poly(&m, "t")
                    )));
                }
                if !fp_irreducible(&m, p) {
                    return Err(Error::ReducibleModulus(format_fp_poly(&m, "t"), p));
                }
                Some(m)
            }
        };
        Ok(Self::build(p, e, q, modulus))
    }

    /// The prime field `F_p`.
    pub fn prime(p: u64) -> Result<Field> {
        Field::new(p, 1, None)
    }

    /// The field of order `q` with its built-in modulus when `q` is not prime.
    pub fn with_order(q: u64) -> Result<Field> {
        let (p, e) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        Field::new(p, e, None)
    }

    fn build(p: u32, e: u32, q: u32, modulus: Option<Vec<u32>>) -> Field {
        let qs = q as usize;
        let mut add = vec![0u32; qs * qs];
        let mut mul = vec![0u32; qs * qs];
        let mut neg = vec![0u32; qs];
        let digits: Vec<Vec<u32>> = (0..q).map(|v| digits_of(v, p, e)).collect();
        for a in 0..qs {
            let na: Vec<u32> = digits[a].iter().map(|&c| (p - c) % p).collect();
            neg[a] = from_digits_base(&na, p);
            for b in 0..qs {
                let s: Vec<u32> = digits[a]
                    .iter()
                    .zip(&digits[b])
                    .map(|(&x, &y)| (x + y) % p)
                    .collect();
                add[a * qs + b] = from_digits_base(&s, p);
                let prod = match &modulus {
                    None => vec![((a as u64 * b as u64) % p as u64) as u32],
                    Some(m) => fp_rem(&fp_mul(&digits[a], &digits[b], p), m, p),
                };
                let mut padded = prod;
                padded.resize(e as usize, 0);
                mul[a * qs + b] = from_digits_base(&padded, p);
            }
        }
        let mut inv = vec![0u32; qs];
        for a in 1..qs {
            inv[a] = (1..qs).find(|&b| mul[a * qs + b] == 1).expect("field has inverses") as u32;
        }
        Field {
            inner: Arc::new(Inner {
                p,
                e,
                q,
                modulus,
                add,
                mul,
                neg,
                inv,
            }),
        }
    }

    pub fn characteristic(&self) -> u32 {
        self.inner.p
    }

    /// Extension degree `e` over the prime field.
    pub fn extension_degree(&self) -> u32 {
        self.inner.e
    }

    /// The order `q`.
    pub fn order(&self) -> u32 {
        self.inner.q
    }

    pub fn modulus(&self) -> Option<&[u32]> {
        self.inner.modulus.as_deref()
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.inner.add[(a * self.inner.q + b) as usize]
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.inner.neg[a as usize]
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.inner.mul[(a * self.inner.q + b) as usize]
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.inner.inv[a as usize])
    }

    pub fn div(&self, a: u32, b: u32) -> Option<u32> {
        self.inv(b).map(|ib| self.mul(a, ib))
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { field: self.clone(), value: 0 }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement { field: self.clone(), value: 1 }
    }

    /// The element with canonical encoding `value`.
    pub fn element(&self, value: u32) -> Result<FieldElement> {
        if value >= self.inner.q {
            return Err(Error::InvalidArgument(format!(
                "encoding {value} outside [0, {})",
                self.inner.q
            )));
        }
        Ok(FieldElement { field: self.clone(), value })
    }

    /// Element from its coefficient vector over `F_p` (length `e`).
    pub fn from_coefficients(&self, coeffs: &[u32]) -> Result<FieldElement> {
        if coeffs.len() != self.inner.e as usize || coeffs.iter().any(|&c| c >= self.inner.p) {
            return Err(Error::InvalidArgument(format!(
                "expected {} coefficients in [0, {})",
                self.inner.e, self.inner.p
            )));
        }
        self.element(from_digits_base(coeffs, self.inner.p))
    }

    /// All `q` elements in canonical-encoding order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.inner.q).map(move |v| FieldElement { field: self.clone(), value: v })
    }

    pub(crate) fn digits(&self, v: u32) -> Vec<u32> {
        digits_of(v, self.inner.p, self.inner.e)
    }

    /// Text form of a raw encoding: decimal for prime fields, a polynomial in
    /// the generator `t` otherwise.
    pub fn format_raw(&self, v: u32) -> String {
        if self.inner.e == 1 {
            v.to_string()
        } else {
            let mut d = self.digits(v);
            trim(&mut d);
            format_fp_poly(&d, "t")
        }
    }

    /// Parses an element text form into its raw encoding.
    pub fn parse_raw(&self, text: &str) -> Result<u32> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::syntax("field element", text, "empty"));
        }
        let p = self.inner.p;
        let e = self.inner.e as usize;
        let parse_int = |tok: &str| -> Result<u32> {
            let v: u64 = tok
                .parse()
                .map_err(|_| Error::syntax("field element", tok, "expected an integer"))?;
            if v >= p as u64 {
                return Err(Error::syntax("field element", tok, format!("coefficient must lie in [0, {p})")));
            }
            Ok(v as u32)
        };
        if e == 1 {
            return parse_int(&s);
        }
        let mut coeffs = vec![0u32; e];
        for term in s.split('+') {
            let (coef, power) = if let Some(pos) = term.find('t') {
                let (head, tail) = term.split_at(pos);
                let coef = if head.is_empty() {
                    1
                } else {
                    let h = head
                        .strip_suffix('*')
                        .ok_or_else(|| Error::syntax("field element", term, "expected '*' before t"))?;
                    parse_int(h)?
                };
                let power = match &tail[1..] {
                    "" => 1,
                    rest => {
                        let r = rest
                            .strip_prefix('^')
                            .ok_or_else(|| Error::syntax("field element", term, "expected '^'"))?;
                        r.parse::<usize>()
                            .map_err(|_| Error::syntax("field element", term, "bad exponent"))?
                    }
                };
                (coef, power)
            } else {
                (parse_int(term)?, 0)
            };
            if power >= e {
                return Err(Error::syntax("field element", term, format!("power of t must be below {e}")));
            }
            coeffs[power] = (coeffs[power] + coef) % p;
        }
        Ok(from_digits_base(&coeffs, p))
    }

    pub fn parse_element(&self, text: &str) -> Result<FieldElement> {
        let v = self.parse_raw(text)?;
        Ok(FieldElement { field: self.clone(), value: v })
    }

    pub(crate) fn check_same(&self, other: &Field) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }
}

/// Splits `q` as `p^e` with `p` prime.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut e = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p
                && self.inner.e == other.inner.e
                && self.inner.modulus == other.inner.modulus)
    }
}

impl Eq for Field {}

impl Hash for Field {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.inner.p.hash(state);
        self.inner.e.hash(state);
        self.inner.modulus.hash(state);
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.inner.modulus {
            None => write!(f, "F_{}", self.inner.q),
            Some(m) => write!(f, "F_{}[t]/({})", self.inner.p, format_fp_poly(m, "t")),
        }
    }
}

/// An element of a [`Field`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    field: Field,
    value: u32,
}

impl FieldElement {
    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Canonical integer encoding in `[0, q)`.
    pub fn encode(&self) -> u32 {
        self.value
    }

    /// Coefficients over `F_p` in the basis `1, t, ..., t^(e-1)`.
    pub fn coefficients(&self) -> Vec<u32> {
        self.field.digits(self.value)
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn with(&self, value: u32) -> FieldElement {
        FieldElement { field: self.field.clone(), value }
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement> {
        self.field.check_same(&other.field)?;
        Ok(self.with(self.field.add(self.value, other.value)))
    }

    pub fn sub(&self, other: &FieldElement) -> Result<FieldElement> {
        self.field.check_same(&other.field)?;
        Ok(self.with(self.field.sub(self.value, other.value)))
    }

    pub fn mul(&self, other: &FieldElement) -> Result<FieldElement> {
        self.field.check_same(&other.field)?;
        Ok(self.with(self.field.mul(self.value, other.value)))
    }

    pub fn div(&self, other: &FieldElement) -> Result<FieldElement> {
        self.field.check_same(&other.field)?;
        let v = self.field.div(self.value, other.value).ok_or(Error::DivisionByZero)?;
        Ok(self.with(v))
    }

    pub fn inv(&self) -> Result<FieldElement> {
        let v = self.field.inv(self.value).ok_or(Error::DivisionByZero)?;
        Ok(self.with(v))
    }

    pub fn neg(&self) -> FieldElement {
        self.with(self.field.neg(self.value))
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical order: encoding order (only meaningful within one field).
impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value.cmp(&other.value)
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field.format_raw(self.value))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field.format_raw(self.value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_builtin() -> Vec<Field> {
        [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27]
            .iter()
            .map(|&q| Field::with_order(q).unwrap())
            .collect()
    }

    #[test]
    fn make_fields() {
        let f2 = Field::new(2, 1, None).unwrap();
        assert_eq!(f2.order(), 2);
        let f4 = Field::new(2, 2, None).unwrap();
        assert_eq!(f4.modulus(), Some(&[1, 1, 1][..]));
        assert_eq!(
            Field::new(2, 2, Some(&[1, 0, 1])).unwrap_err(),
            Error::ReducibleModulus("t^2+1".into(), 2)
        );
        assert_eq!(Field::new(6, 1, None).unwrap_err(), Error::NonPrimeCharacteristic(6));
        assert_eq!(Field::new(7, 2, None).unwrap_err(), Error::NoDefaultModulus(49));
        assert!(Field::new(7, 2, Some(&[1, 0, 1])).is_ok()); // -1 is a non-residue mod 7
        assert!(matches!(Field::new(2, 2, Some(&[1, 1])), Err(Error::InvalidModulus(_))));
        assert_eq!(Field::with_order(6).unwrap_err(), Error::NotPrimePower(6));
    }

    #[test]
    fn builtin_moduli_are_irreducible() {
        for (p, _, m) in DEFAULT_MODULI {
            assert!(fp_irreducible(m, *p), "{m:?}");
        }
    }

    #[test]
    fn small_ops() {
        let f4 = Field::with_order(4).unwrap();
        let t = f4.parse_element("t").unwrap();
        assert_eq!(t.mul(&t).unwrap().to_string(), "t+1");
        let f5 = Field::prime(5).unwrap();
        let s = f5.element(2).unwrap().add(&f5.element(3).unwrap()).unwrap();
        assert!(s.is_zero());
        let f3 = Field::prime(3).unwrap();
        assert_eq!(f3.element(2).unwrap().inv().unwrap().encode(), 2);
        assert_eq!(f3.zero().inv().unwrap_err(), Error::DivisionByZero);
        assert_eq!(f3.one().add(&f5.one()).unwrap_err(), Error::FieldMismatch);
    }

    #[test]
    fn enumeration_order() {
        let names = |q| {
            Field::with_order(q)
                .unwrap()
                .elements()
                .map(|e| e.to_string())
                .collect::<Vec<_>>()
        };
        assert_eq!(names(2), ["0", "1"]);
        assert_eq!(names(3), ["0", "1", "2"]);
        assert_eq!(names(4), ["0", "1", "t", "t+1"]);
    }

    #[test]
    fn field_axioms_exhaustive() {
        for f in all_builtin() {
            let q = f.order();
            for a in 0..q {
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1, "{f} {a}");
                }
                for b in 0..q {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in 0..q {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
            assert_eq!(f.elements().count(), q as usize);
        }
    }

    #[test]
    fn encoding_and_text_round_trip() {
        for f in all_builtin() {
            for x in f.elements() {
                assert_eq!(f.element(x.encode()).unwrap(), x);
                assert_eq!(f.from_coefficients(&x.coefficients()).unwrap(), x);
                assert_eq!(f.parse_element(&x.to_string()).unwrap(), x);
            }
        }
        let f9 = Field::with_order(9).unwrap();
        assert_eq!(f9.parse_element("2*t+1").unwrap().coefficients(), vec![1, 2]);
        assert!(f9.parse_element("3").is_err());
        assert!(f9.parse_element("t^2").is_err());
    }
}
