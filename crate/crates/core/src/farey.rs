//! Farey fractions with restricted denominators and the balls around them.
//!
//! The forward engine here never calls the minimal-denominator search. It
//! walks denominators degree by degree, expands every admissible numerator
//! and records which prefix-`n` classes (radius `q^-(n+1)` balls) it lands
//! in. This gives `f_{m,n,S}(k)` and the per-denominator separated counts
//! from an independent route.

use std::fmt;

use crate::denomset::{DenomSet, DEFAULT_DEGREE_CAP};
use crate::error::{Error, Result};
use crate::ff::Field;
use crate::laurent::{class_count, digits_rank, expand_fraction, expand_raw, pow_sat, BallKey, TruncVec};
use crate::par::Pool;
use crate::poly::{enumerate_polys, is_primitive, Odometer, Poly, PolyConstraint, PolyVec};

/// A reduced fraction `P/Q` with `Q` monic, `(P, Q)` primitive and
/// `||P|| < |Q|`. Zero is `0/1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FareyFraction {
    numerator: PolyVec,
    denominator: Poly,
}

impl FareyFraction {
    pub fn new(numerator: PolyVec, denominator: Poly) -> Result<FareyFraction> {
        numerator.field().check_same(denominator.field())?;
        if !denominator.is_monic() {
            return Err(Error::NotMonic(denominator.to_string()));
        }
        if numerator.norm_degree() >= denominator.degree() && !(numerator.is_zero() && denominator.is_one()) {
            return Err(Error::DegreeOverflow);
        }
        if !is_primitive(&numerator, &denominator) {
            return Err(Error::InvalidArgument(format!("({numerator}, {denominator}) is not primitive")));
        }
        Ok(FareyFraction { numerator, denominator })
    }

    pub fn zero(field: &Field, m: usize) -> FareyFraction {
        FareyFraction { numerator: PolyVec::zero(field, m), denominator: Poly::one(field) }
    }

    pub fn numerator(&self) -> &PolyVec {
        &self.numerator
    }

    pub fn denominator(&self) -> &Poly {
        &self.denominator
    }

    pub fn degree(&self) -> usize {
        self.denominator.deg().unwrap_or(0)
    }

    pub fn expansion(&self, n: usize) -> Result<TruncVec> {
        expand_fraction(&self.numerator, &self.denominator, n)
    }

    pub fn key(&self, n: usize) -> Result<BallKey> {
        self.expansion(n)?.ball_key(n)
    }
}

impl Ord for FareyFraction {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (&self.denominator, &self.numerator).cmp(&(&other.denominator, &other.numerator))
    }
}

impl PartialOrd for FareyFraction {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

fn several_terms(p: &Poly) -> bool {
    p.coeffs().iter().filter(|&&c| c != 0).count() > 1
}

impl fmt::Display for FareyFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = &self.numerator;
        if num.dim() == 1 && several_terms(&num.coords()[0]) {
            write!(f, "({num})/")?;
        } else {
            write!(f, "{num}/")?;
        }
        if several_terms(&self.denominator) {
            write!(f, "({})", self.denominator)
        } else {
            write!(f, "{}", self.denominator)
        }
    }
}

fn numerators(field: &Field, m: usize, d: usize) -> Vec<PolyVec> {
    let polys: Vec<Poly> = enumerate_polys(field, PolyConstraint::DegLess(d)).collect();
    let mut out = vec![Vec::new()];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|pre: Vec<Poly>| {
                polys.iter().map(move |p| {
                    let mut v = pre.clone();
                    v.push(p.clone());
                    v
                })
            })
            .collect();
    }
    out.into_iter().map(|v| PolyVec::new(v).expect("nonempty")).collect()
}

/// Every element of `F^m_{k,S}` ordered by `(deg Q, Q, P)`. `0/1` is included
/// iff `1` is in `S`.
pub fn farey_enumerate(field: &Field, m: usize, k: usize, s: &DenomSet, budget: u64) -> Result<Vec<FareyFraction>> {
    field.check_same(s.field())?;
    let q = field.order() as u64;
    let required = (0..=k)
        .map(|d| s.slice_size(d).saturating_mul(pow_sat(q, (m * d) as u64)))
        .fold(0u128, u128::saturating_add);
    if required > budget as u128 {
        return Err(Error::BudgetExceeded { required, budget });
    }
    let mut out = Vec::new();
    for d in 0..=k {
        let candidates = numerators(field, m, d.max(1));
        for den in s.members(d)?.iter() {
            if d == 0 {
                out.push(FareyFraction::zero(field, m));
                continue;
            }
            out.extend(
                candidates
                    .iter()
                    .filter(|p| is_primitive(p, den))
                    .map(|p| FareyFraction { numerator: p.clone(), denominator: den.clone() }),
            );
        }
    }
    Ok(out)
}

/// Number of primitive numerators for `Q`: the Jordan totient
/// `prod_{F^e || Q} (|F|^(me) - |F|^(m(e-1)))`.
pub fn primitive_numerator_count(q: &Poly, m: usize) -> Result<u128> {
    if q.is_one() {
        return Ok(1);
    }
    let order = q.field().order() as u64;
    let factors = q.factor()?.factors;
    Ok(factors.iter().fold(1u128, |acc, (g, e)| {
        let norm_m = (g.deg().unwrap_or(0) * m) as u64;
        let hi = pow_sat(order, norm_m * *e as u64);
        let lo = pow_sat(order, norm_m * (*e as u64 - 1));
        acc.saturating_mul(hi - lo)
    }))
}

/// `#F^m_{k,S}` via the totient count per denominator.
pub fn farey_count(field: &Field, m: usize, k: usize, s: &DenomSet) -> Result<u128> {
    field.check_same(s.field())?;
    let mut total = 0u128;
    for d in 0..=k {
        for den in s.members(d)?.iter() {
            total += primitive_numerator_count(den, m)?;
        }
    }
    Ok(total)
}

/// When does a fraction count as separated from the rest of `F^m_{deg Q,S}`?
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum SeparationRule {
    /// Its ball avoids every fraction of lower degree and every fraction whose
    /// denominator has the same degree and precedes `Q` canonically. These
    /// are exactly the balls on which `Q` is the canonical minimal denominator.
    #[default]
    Canonical,
    /// Its ball avoids every fraction with a different denominator.
    OtherDenominators,
    /// Its ball avoids every other fraction, including other numerators over `Q`.
    AllOthers,
}

impl SeparationRule {
    pub fn name(self) -> &'static str {
        match self {
            SeparationRule::Canonical => "canonical",
            SeparationRule::OtherDenominators => "other-denominators",
            SeparationRule::AllOthers => "all-others",
        }
    }

    pub fn parse(text: &str) -> Result<SeparationRule> {
        match text {
            "canonical" => Ok(SeparationRule::Canonical),
            "other-denominators" => Ok(SeparationRule::OtherDenominators),
            "all-others" => Ok(SeparationRule::AllOthers),
            _ => Err(Error::syntax("separation rule", text, "expected canonical | other-denominators | all-others")),
        }
    }
}

/// Prefix-`n` keys of all primitive `P/Q` for one `Q`, as ranks in
/// `0..q^(mn)`. The key is linear in `P`, so it is updated incrementally
/// while an odometer walks the numerators that influence the prefix.
struct KeyGen<'a> {
    field: &'a Field,
    m: usize,
    n: usize,
    d: usize,
    /// Lowest numerator exponent that can reach the prefix.
    e0: usize,
    /// Prefix of `x^(e0+t)/Q`.
    basis: Vec<Vec<u32>>,
    /// For each distinct irreducible factor: residues of `x^e`, `e < d`.
    residues: Vec<Vec<Vec<u32>>>,
}

impl<'a> KeyGen<'a> {
    fn new(field: &'a Field, m: usize, n: usize, q: &Poly) -> Result<KeyGen<'a>> {
        let d = q.deg().unwrap_or(0);
        let e0 = d.saturating_sub(n);
        let basis = (e0..d)
            .map(|e| {
                let mut out = vec![0u32; n];
                let mono = Poly::monomial(field, 1, e);
                expand_raw(field, mono.coeffs(), q.coeffs(), &mut out);
                out
            })
            .collect();
        let residues = if d == 0 {
            Vec::new()
        } else {
            q.factor()?
                .factors
                .iter()
                .map(|(g, _)| {
                    let k = g.deg().unwrap_or(0);
                    (0..d)
                        .map(|e| {
                            let r = Poly::monomial(field, 1, e).rem(g).expect("nonzero factor");
                            let mut v = r.coeffs().to_vec();
                            v.resize(k, 0);
                            v
                        })
                        .collect()
                })
                .collect()
        };
        Ok(KeyGen { field, m, n, d, e0, basis, residues })
    }

    fn add_scaled(&self, acc: &mut [u32], c: u32, v: &[u32]) {
        for (a, &b) in acc.iter_mut().zip(v) {
            *a = self.field.add(*a, self.field.mul(c, b));
        }
    }

    /// `res[i][j]` is the residue of coordinate `i` modulo factor `j`.
    fn primitive(&self, res: &[Vec<Vec<u32>>]) -> bool {
        (0..self.residues.len()).all(|j| res.iter().any(|ri| ri[j].iter().any(|&c| c != 0)))
    }

    /// Number of low parts `L` (capped at `limit`) making `H + L` primitive.
    fn completions(&self, res_h: &[Vec<Vec<u32>>], limit: usize) -> usize {
        let free = self.e0;
        let radix = self.field.order();
        let mut res = res_h.to_vec();
        let mut odo = Odometer::new(self.m * free, radix);
        let mut found = 0;
        loop {
            if self.primitive(&res) {
                found += 1;
                if found >= limit {
                    return found;
                }
            }
            let Some(i0) = odo.step() else { return found };
            for idx in 0..=i0 {
                let new = odo.digits()[idx];
                let old = if idx < i0 { radix - 1 } else { new - 1 };
                let delta = self.field.sub(new, old);
                let (i, e) = (idx / free, idx % free);
                for (j, rj) in self.residues.iter().enumerate() {
                    let r = &mut res[i][j];
                    for (a, &b) in r.iter_mut().zip(&rj[e]) {
                        *a = self.field.add(*a, self.field.mul(delta, b));
                    }
                }
            }
        }
    }

    /// `(rank, several primitive numerators share it)`, one entry per key.
    fn keys(&self, want_multi: bool) -> Vec<(u64, bool)> {
        if self.d == 0 {
            return vec![(0, false)];
        }
        let (m, n) = (self.m, self.n);
        let w = self.d - self.e0;
        let radix = self.field.order();
        let mut key = vec![0u32; m * n];
        let mut res: Vec<Vec<Vec<u32>>> =
            vec![self.residues.iter().map(|rj| vec![0u32; rj[0].len()]).collect(); m];
        let mut odo = Odometer::new(m * w, radix);
        let mut out = Vec::new();
        let limit = if want_multi { 2 } else { 1 };
        loop {
            if self.e0 == 0 {
                if self.primitive(&res) {
                    out.push((digits_rank(&key, radix), false));
                }
            } else {
                let c = self.completions(&res, limit);
                if c > 0 {
                    out.push((digits_rank(&key, radix), c > 1));
                }
            }
            let Some(i0) = odo.step() else { return out };
            for idx in 0..=i0 {
                let new = odo.digits()[idx];
                let old = if idx < i0 { radix - 1 } else { new - 1 };
                let delta = self.field.sub(new, old);
                let (i, t) = (idx / w, idx % w);
                let e = self.e0 + t;
                self.add_scaled(&mut key[i * n..(i + 1) * n], delta, &self.basis[t]);
                for (j, rj) in self.residues.iter().enumerate() {
                    let r = &mut res[i][j];
                    for (a, &b) in r.iter_mut().zip(&rj[e]) {
                        *a = self.field.add(*a, self.field.mul(delta, b));
                    }
                }
            }
        }
    }
}

/// Options for [`ball_cover`].
#[derive(Clone, Debug)]
pub struct CoverOptions {
    /// Last degree to process; `None` runs until every class is covered.
    pub max_degree: Option<usize>,
    pub rule: SeparationRule,
    /// Bound on `sum_d |S_d| * q^(m min(d,n))` key evaluations.
    pub budget: u64,
    /// 1 = serial, 0 = all cores.
    pub workers: usize,
    pub degree_cap: usize,
}

impl Default for CoverOptions {
    fn default() -> Self {
        CoverOptions {
            max_degree: None,
            rule: SeparationRule::Canonical,
            budget: crate::DEFAULT_BUDGET,
            workers: 1,
            degree_cap: DEFAULT_DEGREE_CAP,
        }
    }
}

/// Coverage after processing one degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeCover {
    pub degree: usize,
    pub denominators: u64,
    /// Classes first reached at this degree.
    pub new_balls: u64,
    /// `f_{m,n,S}(degree)`.
    pub covered: u64,
    /// Classes reached by two or more denominators of this degree and by no
    /// lower-degree fraction.
    pub shared: u64,
}

/// Result of the forward ball-cover walk.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallCover {
    pub m: usize,
    pub n: usize,
    pub total: u64,
    /// `m_S(n)`.
    pub bound: usize,
    pub rule: SeparationRule,
    pub levels: Vec<DegreeCover>,
    /// Separated ball count per processed denominator, canonical order.
    pub separated: Vec<(Poly, u64)>,
}

impl BallCover {
    /// `f_{m,n,S}(k)`; degrees past the last processed one inherit its value.
    pub fn f(&self, k: usize) -> u64 {
        self.levels
            .iter()
            .take_while(|l| l.degree <= k)
            .last()
            .map_or(0, |l| l.covered)
    }

    pub fn is_full(&self) -> bool {
        self.levels.last().is_some_and(|l| l.covered == self.total)
    }

    /// `f_{m,n,S,Q}(deg Q)`; zero for denominators never reached.
    pub fn separated_count(&self, q: &Poly) -> u64 {
        self.separated
            .binary_search_by(|(p, _)| p.cmp(q))
            .map_or(0, |i| self.separated[i].1)
    }

    pub fn separated_total(&self) -> u64 {
        self.separated.iter().map(|(_, c)| c).sum()
    }

    /// Sum of separated counts over denominators of degree `<= k`.
    pub fn separated_total_upto(&self, k: usize) -> u64 {
        self.separated
            .iter()
            .filter(|(p, _)| p.deg().unwrap_or(0) <= k)
            .map(|(_, c)| c)
            .sum()
    }

    pub fn last_degree(&self) -> Option<usize> {
        self.levels.last().map(|l| l.degree)
    }
}

const CHUNK: usize = 256;
const NONE: u32 = u32::MAX;
const MANY: u32 = u32::MAX - 1;

/// Walks `S` degree by degree, marking the prefix-`n` classes reached by
/// `F^m_{d,S}`, until `max_degree` or full coverage.
pub fn ball_cover(field: &Field, m: usize, n: usize, s: &DenomSet, opts: &CoverOptions) -> Result<BallCover> {
    field.check_same(s.field())?;
    if m == 0 || n == 0 {
        return Err(Error::InvalidArgument("m and n must be at least 1".into()));
    }
    let bound = s.m_s(n, opts.degree_cap)?;
    let total = class_count(field, m, n, opts.budget)?;
    let q = field.order() as u64;
    let mut last = opts.max_degree.unwrap_or(opts.degree_cap).min(opts.degree_cap);
    if let Some(top) = s.max_degree() {
        last = last.min(top);
    }
    let pool = Pool::new(opts.workers);
    // Degree (plus one) at which each class was first reached; 0 = uncovered.
    let mut stamp = vec![0u32; total as usize];
    let mut owner = vec![NONE; total as usize];
    let mut covered = 0u64;
    let mut units = 0u128;
    let mut levels = Vec::new();
    let mut separated = Vec::new();
    for d in 0..=last {
        if covered == total {
            break;
        }
        let level = d as u32 + 1;
        let mut cover = DegreeCover { degree: d, denominators: 0, new_balls: 0, covered, shared: 0 };
        if !s.has_degree(d) {
            levels.push(cover);
            continue;
        }
        units = units.saturating_add(s.slice_size(d).saturating_mul(pow_sat(q, (m * d.min(n)) as u64)));
        if units > opts.budget as u128 {
            return Err(Error::BudgetExceeded { required: units, budget: opts.budget });
        }
        let slice = s.members(d)?;
        cover.denominators = slice.len() as u64;
        let gens = |chunk: &[Poly], multi: bool| -> Result<Vec<Vec<(u64, bool)>>> {
            pool.map(chunk, |den| KeyGen::new(field, m, n, den).map(|g| g.keys(multi)))
                .into_iter()
                .collect()
        };
        match opts.rule {
            SeparationRule::Canonical => {
                'outer: for chunk in slice.chunks(CHUNK) {
                    for (den, keys) in chunk.iter().zip(gens(chunk, false)?) {
                        let mut count = 0;
                        for (k, _) in keys {
                            match stamp[k as usize] {
                                0 => {
                                    stamp[k as usize] = level;
                                    count += 1;
                                }
                                s if s == level => cover.shared += 1,
                                _ => {}
                            }
                        }
                        separated.push((den.clone(), count));
                        covered += count;
                        if covered == total {
                            break 'outer;
                        }
                    }
                }
                // `shared` above counts incidences; recount as classes.
                cover.shared = 0;
            }
            SeparationRule::OtherDenominators | SeparationRule::AllOthers => {
                let multi = opts.rule == SeparationRule::AllOthers;
                let mut touched = Vec::new();
                for (ci, chunk) in slice.chunks(CHUNK).enumerate() {
                    for (qi, keys) in gens(chunk, multi)?.into_iter().enumerate() {
                        let idx = (ci * CHUNK + qi) as u32;
                        for (k, several) in keys {
                            let k = k as usize;
                            if stamp[k] != 0 {
                                continue;
                            }
                            match owner[k] {
                                NONE => {
                                    touched.push(k);
                                    owner[k] = if several { MANY } else { idx };
                                }
                                o if o != idx => owner[k] = MANY,
                                _ => {}
                            }
                        }
                    }
                }
                let mut counts = vec![0u64; slice.len()];
                for &k in &touched {
                    match owner[k] {
                        MANY => cover.shared += 1,
                        o => counts[o as usize] += 1,
                    }
                    owner[k] = NONE;
                    stamp[k] = level;
                }
                covered += touched.len() as u64;
                separated.extend(slice.iter().cloned().zip(counts));
            }
        }
        cover.new_balls = covered - cover.covered;
        cover.covered = covered;
        levels.push(cover);
    }
    if opts.rule == SeparationRule::Canonical {
        recount_shared(field, m, n, s, &mut levels, &stamp, &pool)?;
    }
    Ok(BallCover { m, n, total, bound, rule: opts.rule, levels, separated })
}

/// Fills `shared` for the canonical rule: classes first reached at degree
/// `d` that more than one degree-`d` denominator reaches.
fn recount_shared(
    field: &Field,
    m: usize,
    n: usize,
    s: &DenomSet,
    levels: &mut [DegreeCover],
    stamp: &[u32],
    pool: &Pool,
) -> Result<()> {
    let mut hits = vec![0u8; stamp.len()];
    for level in levels.iter_mut() {
        let d = level.degree;
        let dens = s.members(d)?;
        if dens.len() < 2 {
            continue;
        }
        let mut touched = Vec::new();
        for chunk in dens.chunks(CHUNK) {
            let keys: Vec<Vec<(u64, bool)>> = pool
                .map(chunk, |den| KeyGen::new(field, m, n, den).map(|g| g.keys(false)))
                .into_iter()
                .collect::<Result<_>>()?;
            for (k, _) in keys.into_iter().flatten() {
                let k = k as usize;
                if stamp[k] == d as u32 + 1 {
                    if hits[k] == 0 {
                        touched.push(k);
                    }
                    hits[k] = hits[k].saturating_add(1);
                }
            }
        }
        level.shared = touched.iter().filter(|&&k| hits[k] > 1).count() as u64;
        for k in touched {
            hits[k] = 0;
        }
    }
    Ok(())
}

/// `f_{m,n,S}(k)`: distinct radius-`q^-(n+1)` balls centred at `F^m_{k,S}`.
pub fn ball_count_f(field: &Field, m: usize, n: usize, s: &DenomSet, k: usize, budget: u64) -> Result<u64> {
    let opts = CoverOptions { max_degree: Some(k), budget, ..CoverOptions::default() };
    Ok(ball_cover(field, m, n, s, &opts)?.f(k))
}

/// `f_{m,n,S,Q}(deg Q)`: distinct balls around the separated fractions `P/Q`.
pub fn separated_ball_count(
    field: &Field,
    m: usize,
    n: usize,
    s: &DenomSet,
    q: &Poly,
    rule: SeparationRule,
    budget: u64,
) -> Result<u64> {
    if !s.contains(q) {
        return Ok(0);
    }
    let opts = CoverOptions { max_degree: q.deg(), rule, budget, ..CoverOptions::default() };
    Ok(ball_cover(field, m, n, s, &opts)?.separated_count(q))
}

/// Direct check of separation against the whole of `F^m_{deg Q,S}`.
pub fn is_separated(fr: &FareyFraction, s: &DenomSet, n: usize, rule: SeparationRule, budget: u64) -> Result<bool> {
    let field = s.field();
    let d = fr.degree();
    let key = fr.key(n)?;
    for other in farey_enumerate(field, fr.numerator().dim(), d, s, budget)? {
        let relevant = match rule {
            SeparationRule::AllOthers => other != *fr,
            SeparationRule::OtherDenominators => other.denominator() != fr.denominator(),
            SeparationRule::Canonical => other.denominator() < fr.denominator(),
        };
        if relevant && other.key(n)? == key {
            return Ok(false);
        }
    }
    Ok(true)
}
