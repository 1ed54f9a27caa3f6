//! Minimal denominators: `deg_min`, `Q_min` and their discrete versions.
//!
//! For a denominator `Q` of degree `d` and a tail prefix `a_1..a_n`, write
//! `Q * alpha = sum_e c_e x^e` with `c_e = sum_i q_i a_(i-e)`. A numerator `P`
//! with `|alpha - P/Q| < q^-n` exists iff `|Q alpha - P| < q^(d-n)`:
//!
//! * `d <= n`: `P` is forced to be the polynomial part of `Q alpha`, and the
//!   coefficients `c_e` for `d-n <= e < 0` must vanish;
//! * `d > n`: the coefficients of `P` from `x^(d-n)` up are forced, the lower
//!   ones are free, and the first free choice making `(P, Q)` primitive is
//!   taken (canonical order).
//!
//! Either way only the prefix `a_1..a_n` is read.

use std::sync::Arc;

use crate::denomset::{DenomSet, DEFAULT_DEGREE_CAP};
use crate::error::{Error, Result};
use crate::ff::Field;
use crate::laurent::{expand_fraction, TruncVec};
use crate::poly::{is_primitive, Odometer, Poly, PolyVec};

/// Which quantity a distribution or query reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Statistic {
    Degree,
    QMin,
}

impl Statistic {
    pub fn name(self) -> &'static str {
        match self {
            Statistic::Degree => "deg",
            Statistic::QMin => "qmin",
        }
    }
}

/// A minimal-degree approximation `P/Q` to a tail class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinDenResult {
    pub degree: usize,
    pub denominator: Poly,
    pub numerator: PolyVec,
    /// Other members of `S` of the same degree that also admit a numerator.
    /// Only populated by the `QMin` search.
    pub competitors: Vec<Poly>,
    /// `m_S(n)` for the query.
    pub bound: usize,
}

impl MinDenResult {
    pub fn is_unique(&self) -> bool {
        self.competitors.is_empty()
    }

    /// True when no member of degree `<= m_S(n)` admits a numerator. This
    /// happens for sets without 1 near `alpha = 0`.
    pub fn exceeds_bound(&self) -> bool {
        self.degree > self.bound
    }
}

/// Reusable minimal-denominator search for fixed `(S, m, n)`.
#[derive(Clone)]
pub struct MinDenSolver {
    set: DenomSet,
    m: usize,
    n: usize,
    bound: usize,
    cap: usize,
    slices: Vec<Arc<[Poly]>>,
}

impl MinDenSolver {
    pub fn new(set: &DenomSet, m: usize, n: usize) -> Result<MinDenSolver> {
        MinDenSolver::with_cap(set, m, n, DEFAULT_DEGREE_CAP)
    }

    /// `cap` bounds both `m_S(n)` and the search past it.
    pub fn with_cap(set: &DenomSet, m: usize, n: usize, cap: usize) -> Result<MinDenSolver> {
        if m == 0 || n == 0 {
            return Err(Error::InvalidArgument("m and n must be at least 1".into()));
        }
        let bound = set.m_s(n, cap)?;
        let slices = (0..=bound).map(|d| set.members(d)).collect::<Result<_>>()?;
        Ok(MinDenSolver { set: set.clone(), m, n, bound, cap, slices })
    }

    pub fn set(&self) -> &DenomSet {
        &self.set
    }

    pub fn field(&self) -> &Field {
        self.set.field()
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn precision(&self) -> usize {
        self.n
    }

    /// `m_S(n)`.
    pub fn bound(&self) -> usize {
        self.bound
    }

    fn slice(&self, d: usize) -> Result<Arc<[Poly]>> {
        match self.slices.get(d) {
            Some(s) => Ok(s.clone()),
            None => self.set.members(d),
        }
    }

    /// Numerator witnessing `|alpha - P/Q| < q^-n`, if one exists.
    /// `alpha` is the flat `m x n` prefix.
    pub fn witness(&self, q: &Poly, alpha: &[u32]) -> Option<PolyVec> {
        let field = self.field();
        let (n, d) = (self.n, q.deg()?);
        let qc = q.coeffs();
        // Lowest exponent whose coefficient is constrained.
        let lo = d as i64 - n as i64;
        let mut coords = Vec::with_capacity(self.m);
        for i in 0..self.m {
            let a = &alpha[i * n..(i + 1) * n];
            let c = |e: i64| -> u32 {
                let from = (e + 1).max(0) as usize;
                let to = (e + n as i64).min(d as i64) as usize;
                (from..=to).fold(0, |acc, t| field.add(acc, field.mul(qc[t], a[(t as i64 - e - 1) as usize])))
            };
            if (lo..0).any(|e| c(e) != 0) {
                return None;
            }
            let mut p = vec![0u32; d];
            for e in lo.max(0)..d as i64 {
                p[e as usize] = c(e);
            }
            coords.push(p);
        }
        if d <= n {
            let pv = PolyVec::new(coords.into_iter().map(|c| Poly::from_raw(field, c)).collect()).ok()?;
            return is_primitive(&pv, q).then_some(pv);
        }
        // Free low part: search R_{<d-n}^m in canonical order.
        let free = d - n;
        let mut odo = Odometer::new(self.m * free, field.order());
        loop {
            let pv = PolyVec::new(
                coords
                    .iter()
                    .enumerate()
                    .map(|(i, c)| {
                        let mut c = c.clone();
                        c[..free].copy_from_slice(&odo.digits()[i * free..(i + 1) * free]);
                        Poly::from_raw(field, c)
                    })
                    .collect(),
            )
            .ok()?;
            if is_primitive(&pv, q) {
                return Some(pv);
            }
            odo.step()?;
        }
    }

    /// Scans degrees upward; with `all` set, collects every accepting member
    /// of the minimal degree.
    fn search(&self, alpha: &[u32], all: bool) -> Result<MinDenResult> {
        let last = match self.set.max_degree() {
            Some(top) => top.min(self.cap),
            None => self.cap,
        };
        for d in 0..=last {
            if !self.set.has_degree(d) {
                continue;
            }
            let slice = self.slice(d)?;
            let mut found: Option<MinDenResult> = None;
            for q in slice.iter() {
                if let Some(p) = self.witness(q, alpha) {
                    match &mut found {
                        None => {
                            found = Some(MinDenResult {
                                degree: d,
                                denominator: q.clone(),
                                numerator: p,
                                competitors: Vec::new(),
                                bound: self.bound,
                            });
                            if !all {
                                break;
                            }
                        }
                        Some(r) => r.competitors.push(q.clone()),
                    }
                }
            }
            if let Some(r) = found {
                return Ok(r);
            }
        }
        Err(Error::CapExceeded { from: 0, cap: last })
    }

    /// Minimal denominator for a flat prefix, stopping at the first hit.
    pub fn solve_raw(&self, alpha: &[u32], statistic: Statistic) -> Result<MinDenResult> {
        debug_assert_eq!(alpha.len(), self.m * self.n);
        self.search(alpha, statistic == Statistic::QMin)
    }

    fn prefix(&self, alpha: &TruncVec) -> Result<Vec<u32>> {
        self.field().check_same(alpha.field())?;
        if alpha.dim() != self.m {
            return Err(Error::DimensionMismatch(self.m, alpha.dim()));
        }
        Ok(alpha.retruncate(self.n)?.flat().to_vec())
    }

    pub fn deg_min(&self, alpha: &TruncVec) -> Result<MinDenResult> {
        self.search(&self.prefix(alpha)?, false)
    }

    pub fn q_min(&self, alpha: &TruncVec) -> Result<MinDenResult> {
        self.search(&self.prefix(alpha)?, true)
    }
}

/// `deg_min,S(alpha, q^-n)` with a witness. Reads only the first `n` tail
/// coefficients.
pub fn deg_min(alpha: &TruncVec, n: usize, s: &DenomSet) -> Result<MinDenResult> {
    MinDenSolver::new(s, alpha.dim(), n)?.deg_min(alpha)
}

/// `Q_min,S(alpha, q^-n)`: the canonically smallest accepting denominator of
/// minimal degree, with every other accepting one listed as a competitor.
pub fn q_min(alpha: &TruncVec, n: usize, s: &DenomSet) -> Result<MinDenResult> {
    MinDenSolver::new(s, alpha.dim(), n)?.q_min(alpha)
}

/// `d_{N,S}(a)` or `Q_{N,S}(a)`: the query for `a/N` at precision `deg N`.
pub fn discrete_minden(a: &PolyVec, big_n: &Poly, s: &DenomSet, statistic: Statistic) -> Result<MinDenResult> {
    let n = big_n.deg().ok_or(Error::ZeroDenominator)?;
    if n == 0 {
        return Err(Error::InvalidArgument("N must have degree at least 1".into()));
    }
    let alpha = expand_fraction(a, big_n, n)?;
    let solver = MinDenSolver::new(s, a.dim(), n)?;
    match statistic {
        Statistic::Degree => solver.deg_min(&alpha),
        Statistic::QMin => solver.q_min(&alpha),
    }
}

/// Checks that a result is a valid approximation of `alpha` at precision `n`
/// (membership, degree, primitivity, `||P|| < |Q|`, prefix agreement).
/// Minimality is not checked here.
pub fn check_witness(alpha: &TruncVec, n: usize, s: &DenomSet, r: &MinDenResult) -> std::result::Result<(), String> {
    let q = &r.denominator;
    if !s.contains(q) {
        return Err(format!("{q} is not in {s}"));
    }
    if q.deg() != Some(r.degree) {
        return Err(format!("{q} does not have degree {}", r.degree));
    }
    if !is_primitive(&r.numerator, q) {
        return Err(format!("({}, {q}) is not primitive", r.numerator));
    }
    if r.numerator.norm_degree() >= q.degree() {
        return Err(format!("||{}|| >= |{q}|", r.numerator));
    }
    let expansion = expand_fraction(&r.numerator, q, n).map_err(|e| e.to_string())?;
    let target = alpha.retruncate(n).map_err(|e| e.to_string())?;
    if expansion != target {
        return Err(format!("{}/{q} expands to {expansion}, not {target}", r.numerator));
    }
    Ok(())
}
