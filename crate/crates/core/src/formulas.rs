//! Closed-form laws, evaluated exactly.
//!
//! The printed expressions are evaluated as written, including where they
//! fail to be probability laws; every such case carries a diagnostic. The
//! brute-force distributions in [`crate::dist`] are the ground truth.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::poly::Poly;

/// `numerator / q^(mn)`, kept unreduced. Formula outputs may have a
/// negative or non-integral numerator; brute-force counts never do.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactProb {
    pub numerator: BigRational,
    pub q: u64,
    pub m: usize,
    pub n: usize,
}

impl ExactProb {
    pub fn new(numerator: impl Into<BigInt>, q: u64, m: usize, n: usize) -> ExactProb {
        ExactProb { numerator: BigRational::from_integer(numerator.into()), q, m, n }
    }

    pub fn from_rational(numerator: BigRational, q: u64, m: usize, n: usize) -> ExactProb {
        ExactProb { numerator, q, m, n }
    }

    /// `q^(mn)`.
    pub fn denominator(&self) -> BigInt {
        BigInt::from(self.q).pow((self.m * self.n) as u32)
    }

    pub fn value(&self) -> BigRational {
        &self.numerator / BigRational::from_integer(self.denominator())
    }

    /// Numerator as an integer count, when it is one.
    pub fn count(&self) -> Option<BigInt> {
        self.numerator.is_integer().then(|| self.numerator.to_integer())
    }

    /// `0 <= value <= 1`.
    pub fn is_probability(&self) -> bool {
        !self.numerator.is_negative() && self.numerator <= BigRational::from_integer(self.denominator())
    }

    /// The numerator as text: an integer, or `a/b` when it is not one.
    pub fn numerator_text(&self) -> String {
        format_rational(&self.numerator)
    }

    pub fn reduced_text(&self) -> String {
        format_rational(&self.value())
    }
}

pub(crate) fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.to_integer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for ExactProb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.numerator.is_integer() {
            write!(f, "{}/{}", self.numerator_text(), self.denominator())
        } else {
            write!(f, "({})/{}", self.numerator_text(), self.denominator())
        }
    }
}

fn big_pow(base: u64, exp: usize) -> BigInt {
    BigInt::from(base).pow(exp as u32)
}

/// A law given by a printed formula, with its total mass and any problems.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeLawFormula {
    pub q: u64,
    pub n: usize,
    pub masses: BTreeMap<usize, ExactProb>,
    pub mass: BigRational,
    pub diagnostics: Vec<String>,
}

/// The printed law of `deg_min` for all monic denominators, `m = 1`:
/// `n = 1`: `{0: 1/q, 1: (q-1)/q}`; `n >= 2`: `{0: q^-n, k <= ceil(n/2): (q-1)/q^(n-2k+1)}`.
pub fn formula_degdist_monic(q: u64, n: usize) -> Result<DegreeLawFormula> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let mut masses = BTreeMap::new();
    masses.insert(0, ExactProb::new(1, q, 1, n));
    if n == 1 {
        masses.insert(1, ExactProb::new(q - 1, q, 1, n));
    } else {
        for k in 1..=n.div_ceil(2) {
            // (q-1)/q^(n-2k+1) = (q-1) q^(2k-1) / q^n
            masses.insert(k, ExactProb::new(BigInt::from(q - 1) * big_pow(q, 2 * k - 1), q, 1, n));
        }
    }
    let mass: BigRational = masses.values().map(ExactProb::value).sum();
    let mut diagnostics = Vec::new();
    for (k, p) in &masses {
        if !p.is_probability() {
            diagnostics.push(format!("printed mass at k={k} is {}, outside [0,1]", p.reduced_text()));
        }
    }
    if !mass.is_one() {
        diagnostics.push(format!("printed masses sum to {}, not 1", format_rational(&mass)));
    }
    Ok(DegreeLawFormula { q, n, masses, mass, diagnostics })
}

/// Which inner factorial term to use in the divisor-sum law of `Q_min`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum QminVariant {
    /// `D(Q/M)! / (D(Q/N) - l)!` as printed, with `N` the discrete modulus.
    #[default]
    Printed,
    /// `D(Q/M)! / (D(Q/M) - l)!`.
    Corrected,
}

impl QminVariant {
    pub fn name(self) -> &'static str {
        match self {
            QminVariant::Printed => "printed",
            QminVariant::Corrected => "corrected",
        }
    }

    pub fn parse(text: &str) -> Result<QminVariant> {
        match text {
            "printed" => Ok(QminVariant::Printed),
            "corrected" => Ok(QminVariant::Corrected),
            _ => Err(Error::syntax("variant", text, "expected printed | corrected")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QminFormula {
    pub value: ExactProb,
    pub diagnostics: Vec<String>,
}

fn factorial(k: u64) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * i)
}

/// `a! / b!` for `a, b >= 0`, or `None` when `b < 0`.
fn factorial_ratio(a: u64, b: i64) -> Option<BigRational> {
    (b >= 0).then(|| BigRational::new(factorial(a), factorial(b as u64)))
}

/// The divisor-sum law for `P(Q_N(a) = Q)`, all monic denominators, `m = 1`:
/// `(1/q^n)(|Q| + sum_{M in S(Q)} |M| sum_{l=1}^{D(M)} (-1)^l (T_l + sum_{R in S(Q/M), D(Q/(RM)) >= l} mu(R) D(R)!/(D(R)-l)!))`.
///
/// `big_n` is the discrete modulus (default `x^n`), used only by the printed
/// variant. Terms needing a factorial of a negative number, or `Q/N` when
/// `N` does not divide `Q`, are dropped and reported.
pub fn formula_qmin_monic(q_poly: &Poly, n: usize, big_n: Option<&Poly>, variant: QminVariant) -> Result<QminFormula> {
    let field = q_poly.field();
    let q = field.order() as u64;
    if !q_poly.is_monic() {
        return Err(Error::NotMonic(q_poly.to_string()));
    }
    let dq = q_poly.deg().unwrap_or(0);
    if dq > n {
        return Err(Error::DegreeTooLarge { degree: dq, max: n });
    }
    let default_n = Poly::monomial(field, 1, n);
    let big_n = big_n.unwrap_or(&default_n);
    let mut diags = BTreeSet::new();
    // D(Q/N), when N divides Q.
    let d_q_over_n = match q_poly.div_rem(big_n)? {
        (quot, r) if r.is_zero() => Some(quot.divisor_count()? as i64),
        _ => None,
    };
    let norm = |p: &Poly| big_pow(q, p.deg().unwrap_or(0));
    let mut total = BigRational::from_integer(norm(q_poly));
    for m_div in q_poly.monic_divisors()? {
        let d_m = m_div.divisor_count()?;
        let q_over_m = q_poly.div_rem(&m_div)?.0;
        let d_qm = q_over_m.divisor_count()?;
        let mut inner = BigRational::zero();
        for l in 1..=d_m {
            let mut term = BigRational::zero();
            let lead = match variant {
                QminVariant::Printed => match d_q_over_n {
                    Some(dqn) => factorial_ratio(d_qm, dqn - l as i64),
                    None => {
                        diags.insert(format!("{big_n} does not divide {q_poly}; the D(Q/N) term is dropped"));
                        None
                    }
                },
                QminVariant::Corrected => factorial_ratio(d_qm, d_qm as i64 - l as i64),
            };
            match lead {
                Some(v) => term += v,
                None if d_q_over_n.is_some() || variant == QminVariant::Corrected => {
                    diags.insert(format!("negative factorial in the leading term at l={l}; term dropped"));
                }
                None => {}
            }
            for r in q_over_m.monic_divisors()? {
                let rest = q_over_m.div_rem(&r)?.0;
                if rest.divisor_count()? < l {
                    continue;
                }
                let mu = r.mobius()?;
                if mu == 0 {
                    continue;
                }
                let d_r = r.divisor_count()?;
                match factorial_ratio(d_r, d_r as i64 - l as i64) {
                    Some(v) => term += v * BigRational::from_integer(BigInt::from(mu)),
                    None => {
                        diags.insert(format!("negative factorial D(R)-l for R={r}, l={l}; term dropped"));
                    }
                }
            }
            if l % 2 == 1 {
                inner -= term;
            } else {
                inner += term;
            }
        }
        total += inner * BigRational::from_integer(norm(&m_div));
    }
    Ok(QminFormula { value: ExactProb::from_rational(total, q, 1, n), diagnostics: diags.into_iter().collect() })
}

/// Law of `Q_min` for `S = {P^d}`: `{0: 1, 1..=k: |P|^(md) - |P|^(m(d-1)), k+1: q^(mn) - |P|^(mk)}`
/// over `q^(mn)`, with `k = floor(n / deg P)`. Keys are the exponents `d`.
pub fn formula_lacunary(p: &Poly, m: usize, n: usize) -> Result<BTreeMap<usize, ExactProb>> {
    if p.is_constant() {
        return Err(Error::ConstantBase);
    }
    if !p.is_monic() {
        return Err(Error::NonMonicBase);
    }
    if m == 0 || n == 0 {
        return Err(Error::InvalidArgument("m and n must be at least 1".into()));
    }
    let q = p.field().order() as u64;
    let dp = p.deg().unwrap_or(1);
    let k = n / dp;
    let norm = |d: usize| big_pow(q, dp * m * d);
    let mut law = BTreeMap::new();
    law.insert(0, ExactProb::new(1, q, m, n));
    for d in 1..=k {
        law.insert(d, ExactProb::new(norm(d) - norm(d - 1), q, m, n));
    }
    law.insert(k + 1, ExactProb::new(big_pow(q, m * n) - norm(k), q, m, n));
    Ok(law)
}

/// Sum of a law's values.
pub fn total_mass<'a>(law: impl IntoIterator<Item = &'a ExactProb>) -> BigRational {
    law.into_iter().map(ExactProb::value).sum()
}

/// `u64` view of an integral count, if it fits.
pub fn count_u64(p: &ExactProb) -> Option<u64> {
    p.count().and_then(|c| c.to_u64())
}
