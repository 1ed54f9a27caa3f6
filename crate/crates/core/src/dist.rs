//! Exact laws of `deg_min` / `Q_min` and the reports comparing them.
//!
//! The continuous law counts the `q^(mn)` prefix classes of `m^m` (each of
//! Haar measure `q^-(mn)`); the discrete law counts the `q^(mn)` numerators
//! `a` with `deg a_i < deg N`. Both are exact integer tallies.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::denomset::{DenomSet, SetKind};
use crate::error::{Error, Result};
use crate::farey::{ball_cover, farey_count, CoverOptions, SeparationRule};
use crate::ff::Field;
use crate::formulas::{format_rational, formula_degdist_monic, formula_lacunary, formula_qmin_monic, total_mass, ExactProb, QminVariant};
use crate::laurent::{class_count, expand_raw, rank_digits};
use crate::minden::{MinDenSolver, Statistic};
use crate::par::{ranges, Pool};
use crate::poly::{enumerate_polys, Poly, PolyConstraint, PolyVec};

/// A value of the statistic.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Outcome {
    Degree(usize),
    Denominator(Poly),
}

impl Outcome {
    pub fn degree(&self) -> usize {
        match self {
            Outcome::Degree(d) => *d,
            Outcome::Denominator(q) => q.deg().unwrap_or(0),
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Degree(d) => write!(f, "{d}"),
            Outcome::Denominator(q) => write!(f, "{q}"),
        }
    }
}

/// An exact law: outcome counts over `total = q^(mn)` equally likely cases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Distribution {
    pub statistic: Statistic,
    pub m: usize,
    pub n: usize,
    pub q: u64,
    /// `N` for a discrete law.
    pub modulus: Option<Poly>,
    /// `m_S(n)`.
    pub bound: usize,
    pub counts: BTreeMap<Outcome, u64>,
    pub total: u64,
    /// Cases whose minimal degree admits more than one denominator (only
    /// tracked for the `QMin` statistic).
    pub non_unique: u64,
    /// Cases whose minimal degree exceeds `m_S(n)`.
    pub beyond_bound: u64,
}

impl Distribution {
    pub fn count(&self, outcome: &Outcome) -> u64 {
        self.counts.get(outcome).copied().unwrap_or(0)
    }

    pub fn prob(&self, outcome: &Outcome) -> ExactProb {
        ExactProb::new(self.count(outcome), self.q, self.m, self.n)
    }

    /// The degree marginal (identity for degree laws).
    pub fn by_degree(&self) -> Distribution {
        let mut counts = BTreeMap::new();
        for (o, c) in &self.counts {
            *counts.entry(Outcome::Degree(o.degree())).or_insert(0) += c;
        }
        Distribution { statistic: Statistic::Degree, counts, ..self.clone() }
    }

    /// `sum k * count_k / q^(mn)`, reduced.
    pub fn expectation(&self) -> Result<BigRational> {
        if self.statistic != Statistic::Degree {
            return Err(Error::WrongStatistic);
        }
        let weighted: BigInt = self.counts.iter().map(|(o, &c)| BigInt::from(o.degree()) * c).sum();
        Ok(BigRational::new(weighted, BigInt::from(self.total)))
    }
}

/// Work limits shared by the engines.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EngineOptions {
    /// Bound on enumerated cases (and on ball-cover key evaluations).
    pub budget: u64,
    /// 1 = serial, 0 = all cores.
    pub workers: usize,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions { budget: crate::DEFAULT_BUDGET, workers: 1 }
    }
}

const RANGE: u64 = 2048;

#[derive(Default)]
struct Tally {
    counts: BTreeMap<Outcome, u64>,
    non_unique: u64,
    beyond_bound: u64,
}

/// Runs the solver over `0..total`, `prefix(rank, buf)` writing each case's
/// flat tail prefix.
fn tally<F>(solver: &MinDenSolver, total: u64, statistic: Statistic, workers: usize, prefix: F) -> Result<Tally>
where
    F: Fn(u64, &mut [u32]) + Sync + Send,
{
    let pool = Pool::new(workers);
    let width = solver.dim() * solver.precision();
    let parts = pool.map(&ranges(total, RANGE), |range| -> Result<Tally> {
        let mut t = Tally::default();
        let mut buf = vec![0u32; width];
        for rank in range.clone() {
            prefix(rank, &mut buf);
            let r = solver.solve_raw(&buf, statistic)?;
            let outcome = match statistic {
                Statistic::Degree => Outcome::Degree(r.degree),
                Statistic::QMin => Outcome::Denominator(r.denominator.clone()),
            };
            *t.counts.entry(outcome).or_insert(0) += 1;
            t.non_unique += !r.is_unique() as u64;
            t.beyond_bound += r.exceeds_bound() as u64;
        }
        Ok(t)
    });
    let mut out = Tally::default();
    for part in parts {
        let part = part?;
        for (o, c) in part.counts {
            *out.counts.entry(o).or_insert(0) += c;
        }
        out.non_unique += part.non_unique;
        out.beyond_bound += part.beyond_bound;
    }
    Ok(out)
}

/// Law of the statistic for Haar-random `alpha` in `m^m` at precision `n`.
pub fn continuous_dist(s: &DenomSet, m: usize, n: usize, statistic: Statistic, opts: &EngineOptions) -> Result<Distribution> {
    let field = s.field();
    let total = class_count(field, m, n, opts.budget)?;
    let solver = MinDenSolver::new(s, m, n)?;
    let radix = field.order();
    let t = tally(&solver, total, statistic, opts.workers, |rank, buf| {
        buf.copy_from_slice(&rank_digits(rank, radix, m * n));
    })?;
    Ok(Distribution {
        statistic,
        m,
        n,
        q: radix as u64,
        modulus: None,
        bound: solver.bound(),
        counts: t.counts,
        total,
        non_unique: t.non_unique,
        beyond_bound: t.beyond_bound,
    })
}

/// The numerator with canonical rank `rank` in `R_{<n}^m` (coordinate 0 most
/// significant, each coordinate in canonical polynomial order).
pub fn numerator_from_rank(field: &Field, m: usize, n: usize, rank: u64) -> PolyVec {
    let digits = rank_digits(rank, field.order(), m * n);
    let coords = digits
        .chunks(n)
        .map(|c| Poly::new(field, c.iter().rev().copied().collect()).expect("digits in range"))
        .collect();
    PolyVec::new(coords).expect("m >= 1")
}

/// Law of the statistic for uniform `a` in `R_{<n}^m`, `n = deg N`.
pub fn discrete_dist(s: &DenomSet, m: usize, big_n: &Poly, statistic: Statistic, opts: &EngineOptions) -> Result<Distribution> {
    let field = s.field();
    field.check_same(big_n.field())?;
    let n = big_n.deg().ok_or(Error::ZeroDenominator)?;
    if n == 0 {
        return Err(Error::InvalidArgument("N must have degree at least 1".into()));
    }
    let total = class_count(field, m, n, opts.budget)?;
    let solver = MinDenSolver::new(s, m, n)?;
    let radix = field.order();
    let den = big_n.coeffs();
    let t = tally(&solver, total, statistic, opts.workers, |rank, buf| {
        let digits = rank_digits(rank, radix, m * n);
        for (i, chunk) in digits.chunks(n).enumerate() {
            let mut num: Vec<u32> = chunk.iter().rev().copied().collect();
            while num.last() == Some(&0) {
                num.pop();
            }
            expand_raw(field, &num, den, &mut buf[i * n..(i + 1) * n]);
        }
    })?;
    Ok(Distribution {
        statistic,
        m,
        n,
        q: radix as u64,
        modulus: Some(big_n.clone()),
        bound: solver.bound(),
        counts: t.counts,
        total,
        non_unique: t.non_unique,
        beyond_bound: t.beyond_bound,
    })
}

/// A probability cell: unreduced `count/total` and the reduced value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cell {
    pub count: String,
    pub total: String,
    pub reduced: String,
}

impl Cell {
    pub fn counted(count: u64, total: u64) -> Cell {
        Cell::from_prob_parts(BigRational::from_integer(count.into()), BigInt::from(total))
    }

    pub fn prob(p: &ExactProb) -> Cell {
        Cell::from_prob_parts(p.numerator.clone(), p.denominator())
    }

    fn from_prob_parts(count: BigRational, total: BigInt) -> Cell {
        let reduced = &count / BigRational::from_integer(total.clone());
        Cell { count: format_rational(&count), total: total.to_string(), reduced: format_rational(&reduced) }
    }

    pub fn short(&self) -> String {
        if self.count.contains('/') {
            format!("({})/{}", self.count, self.total)
        } else {
            format!("{}/{}", self.count, self.total)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowStatus {
    Match,
    Mismatch,
    /// Compared but not asserted.
    Reported,
}

/// One outcome of a report; absent columns are omitted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Row {
    pub outcome: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub continuous: Option<Cell>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub discrete: Vec<Cell>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub formula: Option<Cell>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<Cell>,
    /// Ball count from the forward Farey walk.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub balls: Option<Cell>,
    /// `#F_k - #F_(k-1)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub farey: Option<Cell>,
    /// `#F_k`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub farey_cumulative: Option<Cell>,
    pub status: RowStatus,
}

impl Row {
    fn new(outcome: impl Into<String>) -> Row {
        Row {
            outcome: outcome.into(),
            continuous: None,
            discrete: Vec::new(),
            formula: None,
            oracle: None,
            balls: None,
            farey: None,
            farey_cumulative: None,
            status: RowStatus::Match,
        }
    }
}

/// What was checked and under which parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReportContext {
    pub check: String,
    pub field: String,
    pub q: u64,
    pub m: usize,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub set: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_s: Option<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub moduli: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub statistic: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rule: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
}

impl ReportContext {
    fn new(check: &str, field: &Field, m: usize, n: usize) -> ReportContext {
        ReportContext {
            check: check.into(),
            field: field.to_string(),
            q: field.order() as u64,
            m,
            n,
            set: None,
            m_s: None,
            moduli: Vec::new(),
            statistic: None,
            rule: None,
            variant: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    ExactMatch,
    Mismatch,
}

/// Outcome-by-outcome comparison with a verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub context: ReportContext,
    pub outcomes: Vec<Row>,
    pub verdict: Verdict,
    /// One line per failed comparison.
    pub mismatches: Vec<String>,
    /// Observations that do not affect the verdict.
    pub flags: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl VerifyReport {
    fn finish(context: ReportContext, outcomes: Vec<Row>, mut mismatches: Vec<String>, flags: Vec<String>) -> VerifyReport {
        for row in &outcomes {
            if row.status == RowStatus::Mismatch {
                mismatches.push(format!("outcome {} differs", row.outcome));
            }
        }
        let verdict = if mismatches.is_empty() { Verdict::ExactMatch } else { Verdict::Mismatch };
        VerifyReport { context, outcomes, verdict, mismatches, flags, elapsed_ms: None }
    }

    pub fn is_match(&self) -> bool {
        self.verdict == Verdict::ExactMatch
    }

    /// Column headers and cells for CSV and table output.
    pub fn table(&self) -> Table {
        rows_table(&self.context, &self.outcomes)
    }
}

type CellGetter = fn(&Row) -> Option<&Cell>;

fn rows_table(context: &ReportContext, outcomes: &[Row]) -> Table {
    let ndisc = outcomes.iter().map(|r| r.discrete.len()).max().unwrap_or(0);
    let has = |f: fn(&Row) -> bool| outcomes.iter().any(f);
    let mut columns = vec!["outcome".to_string()];
    if has(|r| r.continuous.is_some()) {
        columns.push("continuous".into());
    }
    for i in 0..ndisc {
        columns.push(match context.moduli.get(i) {
            Some(n) => format!("discrete[N={n}]"),
            None => format!("discrete[{i}]"),
        });
    }
    let optional: [(&str, CellGetter); 5] = [
        ("formula", |r| r.formula.as_ref()),
        ("oracle", |r| r.oracle.as_ref()),
        ("balls", |r| r.balls.as_ref()),
        ("farey", |r| r.farey.as_ref()),
        ("farey_cumulative", |r| r.farey_cumulative.as_ref()),
    ];
    let present: Vec<_> = optional.iter().filter(|(_, get)| outcomes.iter().any(|r| get(r).is_some())).collect();
    columns.extend(present.iter().map(|(name, _)| name.to_string()));
    columns.push("status".into());
    let show = |c: Option<&Cell>| c.map(Cell::short).unwrap_or_default();
    let rows = outcomes
        .iter()
        .map(|r| {
            let mut cells = vec![r.outcome.clone()];
            if has(|r| r.continuous.is_some()) {
                cells.push(show(r.continuous.as_ref()));
            }
            for i in 0..ndisc {
                cells.push(show(r.discrete.get(i)));
            }
            cells.extend(present.iter().map(|(_, get)| show(get(r))));
            cells.push(serde_json::to_value(r.status).unwrap().as_str().unwrap_or_default().to_string());
            cells
        })
        .collect();
    Table { columns, rows }
}

/// Flat tabular view used for CSV and aligned text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for line in std::iter::once(&self.columns).chain(&self.rows) {
            let cells: Vec<String> = line.iter().map(|c| csv_field(c)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_pretty(&self) -> String {
        let widths: Vec<usize> = (0..self.columns.len())
            .map(|i| {
                std::iter::once(&self.columns)
                    .chain(&self.rows)
                    .map(|r| r.get(i).map_or(0, |c| c.chars().count()))
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let mut out = String::new();
        for line in std::iter::once(&self.columns).chain(&self.rows) {
            let cells: Vec<String> = line.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
            out.push_str(cells.join("  ").trim_end());
            out.push('\n');
        }
        out
    }
}

/// Options for the verification reports.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct VerifyOptions {
    pub engine: EngineOptions,
    pub rule: SeparationRule,
}

fn check_moduli(field: &Field, n: usize, moduli: &[Poly]) -> Result<()> {
    if moduli.is_empty() {
        return Err(Error::InvalidArgument("at least one N is required".into()));
    }
    for big_n in moduli {
        field.check_same(big_n.field())?;
        if big_n.deg() != Some(n) {
            return Err(Error::InvalidArgument(format!("N = {big_n} does not have degree n = {n}")));
        }
    }
    Ok(())
}

fn set_context(check: &str, s: &DenomSet, m: usize, n: usize, moduli: &[Poly]) -> Result<ReportContext> {
    let mut ctx = ReportContext::new(check, s.field(), m, n);
    ctx.set = Some(s.to_string());
    ctx.m_s = Some(s.m_s(n, crate::denomset::DEFAULT_DEGREE_CAP)?);
    ctx.moduli = moduli.iter().map(Poly::to_string).collect();
    Ok(ctx)
}

fn common_flags(s: &DenomSet, d: &Distribution) -> Vec<String> {
    let mut flags = Vec::new();
    if s.is_finite() {
        flags.push("finite-set: the denominator set is an explicit finite list".into());
    }
    if d.beyond_bound > 0 {
        flags.push(format!(
            "beyond-m_S: {} of {} classes have minimal degree above m_S(n) = {}",
            d.beyond_bound, d.total, d.bound
        ));
    }
    flags
}

/// Degree law, continuous versus discrete for every listed `N` (each of degree `n`),
/// plus equality of the expectations.
pub fn verify_same_dist(s: &DenomSet, m: usize, n: usize, moduli: &[Poly], opts: &VerifyOptions) -> Result<VerifyReport> {
    check_moduli(s.field(), n, moduli)?;
    let cont = continuous_dist(s, m, n, Statistic::Degree, &opts.engine)?;
    let discs = moduli
        .iter()
        .map(|big_n| discrete_dist(s, m, big_n, Statistic::Degree, &opts.engine))
        .collect::<Result<Vec<_>>>()?;
    let mut ctx = set_context("same-dist", s, m, n, moduli)?;
    ctx.statistic = Some(Statistic::Degree.name().into());
    let top = cont.counts.keys().chain(discs.iter().flat_map(|d| d.counts.keys())).map(Outcome::degree).max().unwrap_or(0);
    let rows = (0..=top.max(cont.bound))
        .map(|k| {
            let o = Outcome::Degree(k);
            let mut row = Row::new(k.to_string());
            row.continuous = Some(Cell::counted(cont.count(&o), cont.total));
            row.discrete = discs.iter().map(|d| Cell::counted(d.count(&o), d.total)).collect();
            if discs.iter().any(|d| d.count(&o) != cont.count(&o)) {
                row.status = RowStatus::Mismatch;
            }
            row
        })
        .collect();
    let mut mismatches = Vec::new();
    let expected = cont.expectation()?;
    for (big_n, d) in moduli.iter().zip(&discs) {
        let e = d.expectation()?;
        if e != expected {
            mismatches.push(format!(
                "expectation for N = {big_n} is {}, continuous value {}",
                format_rational(&e),
                format_rational(&expected)
            ));
        }
    }
    let mut flags = common_flags(s, &cont);
    flags.push(format!("expectation: {}", format_rational(&expected)));
    Ok(VerifyReport::finish(ctx, rows, mismatches, flags))
}

/// Law of `Q_min`: continuous versus discrete for each `N`, and both against
/// the separated ball count of the forward Farey walk.
pub fn verify_qmin_equals(s: &DenomSet, m: usize, n: usize, moduli: &[Poly], opts: &VerifyOptions) -> Result<VerifyReport> {
    check_moduli(s.field(), n, moduli)?;
    let field = s.field();
    let cont = continuous_dist(s, m, n, Statistic::QMin, &opts.engine)?;
    let discs = moduli
        .iter()
        .map(|big_n| discrete_dist(s, m, big_n, Statistic::QMin, &opts.engine))
        .collect::<Result<Vec<_>>>()?;
    let cover_opts = CoverOptions {
        max_degree: None,
        rule: opts.rule,
        budget: opts.engine.budget,
        workers: opts.engine.workers,
        ..CoverOptions::default()
    };
    let cover = ball_cover(field, m, n, s, &cover_opts)?;
    let mut ctx = set_context("qmin-equals", s, m, n, moduli)?;
    ctx.statistic = Some(Statistic::QMin.name().into());
    ctx.rule = Some(opts.rule.name().into());
    let mut outcomes: BTreeSet<Outcome> = cont.counts.keys().cloned().collect();
    outcomes.extend(discs.iter().flat_map(|d| d.counts.keys().cloned()));
    outcomes.extend(cover.separated.iter().filter(|(_, c)| *c > 0).map(|(q, _)| Outcome::Denominator(q.clone())));
    let rows = outcomes
        .iter()
        .map(|o| {
            let Outcome::Denominator(q) = o else { unreachable!("qmin outcomes are denominators") };
            let balls = cover.separated_count(q);
            let mut row = Row::new(o.to_string());
            row.continuous = Some(Cell::counted(cont.count(o), cont.total));
            row.discrete = discs.iter().map(|d| Cell::counted(d.count(o), d.total)).collect();
            row.balls = Some(Cell::counted(balls, cover.total));
            if discs.iter().any(|d| d.count(o) != cont.count(o)) || balls != cont.count(o) {
                row.status = RowStatus::Mismatch;
            }
            row
        })
        .collect();
    let mut flags = common_flags(s, &cont);
    if cont.non_unique > 0 {
        flags.push(format!(
            "non-unique-minimal-denominator: {} of {} classes admit several denominators of minimal degree; the canonically smallest is reported",
            cont.non_unique, cont.total
        ));
    }
    let upto = cover.separated_total_upto(cover.bound);
    if upto != cover.total {
        flags.push(format!(
            "separated-partition: balls of separated fractions with deg Q <= m_S(n) number {upto} of {}",
            cover.total
        ));
    }
    let shared: u64 = cover.levels.iter().map(|l| l.shared).sum();
    if shared > 0 {
        flags.push(format!("shared-balls: {shared} balls are reached by several denominators of their first degree"));
    }
    Ok(VerifyReport::finish(ctx, rows, Vec::new(), flags))
}

/// The modulus `x^r P^k` with `k = floor(n / deg P)`, `r = n - k deg P`.
pub fn lacunary_modulus(p: &Poly, n: usize) -> Poly {
    let dp = p.deg().unwrap_or(1);
    let k = n / dp;
    &Poly::monomial(p.field(), 1, n - k * dp) * &p.pow(k as u32)
}

/// Closed-form law for `S = {P^d}` against both brute-force laws, with the
/// divisibility of the discrete numerators checked on every case.
pub fn verify_lacunary(p: &Poly, m: usize, n: usize, opts: &VerifyOptions) -> Result<VerifyReport> {
    let field = p.field();
    let s = DenomSet::new(field, SetKind::Powers(p.clone()))?;
    let law = formula_lacunary(p, m, n)?;
    let dp = p.deg().unwrap_or(1);
    let k = n / dp;
    let big_n = lacunary_modulus(p, n);
    let cont = continuous_dist(&s, m, n, Statistic::QMin, &opts.engine)?;
    let disc = discrete_dist(&s, m, &big_n, Statistic::QMin, &opts.engine)?;
    let mut ctx = set_context("lacunary", &s, m, n, std::slice::from_ref(&big_n))?;
    ctx.statistic = Some(Statistic::QMin.name().into());
    let mut mismatches = Vec::new();
    let mut rows = Vec::new();
    let mut seen = BTreeSet::new();
    for (&d, prob) in &law {
        let o = Outcome::Denominator(p.pow(d as u32));
        seen.insert(o.clone());
        let mut row = Row::new(o.to_string());
        row.formula = Some(Cell::prob(prob));
        row.continuous = Some(Cell::counted(cont.count(&o), cont.total));
        row.discrete = vec![Cell::counted(disc.count(&o), disc.total)];
        let want = BigRational::from_integer(BigInt::from(cont.count(&o)));
        if prob.numerator != want || disc.count(&o) != cont.count(&o) {
            row.status = RowStatus::Mismatch;
        }
        rows.push(row);
    }
    for o in cont.counts.keys().chain(disc.counts.keys()) {
        if seen.insert(o.clone()) {
            let mut row = Row::new(o.to_string());
            row.formula = Some(Cell::counted(0, cont.total));
            row.continuous = Some(Cell::counted(cont.count(o), cont.total));
            row.discrete = vec![Cell::counted(disc.count(o), disc.total)];
            row.status = RowStatus::Mismatch;
            rows.push(row);
        }
    }
    if !total_mass(law.values()).is_integer() || total_mass(law.values()) != BigRational::from_integer(1.into()) {
        mismatches.push("closed-form masses do not sum to 1".into());
    }
    // Each a with Q_N(a) = P^d, d <= k, must be divisible by x^r P^(k-d).
    let solver = MinDenSolver::new(&s, m, n)?;
    let r = n - k * dp;
    let mut bad = 0u64;
    for rank in 0..disc.total {
        let a = numerator_from_rank(field, m, n, rank);
        let mut buf = vec![0u32; m * n];
        for (i, c) in a.coords().iter().enumerate() {
            expand_raw(field, c.coeffs(), big_n.coeffs(), &mut buf[i * n..(i + 1) * n]);
        }
        let res = solver.solve_raw(&buf, Statistic::QMin)?;
        let d = res.degree / dp;
        if d <= k {
            let modulus = &Poly::monomial(field, 1, r) * &p.pow((k - d) as u32);
            if !a.coords().iter().all(|c| modulus.divides(c)) {
                bad += 1;
            }
        }
    }
    if bad > 0 {
        mismatches.push(format!("{bad} numerators break the divisibility a = 0 mod x^r P^(k-d)"));
    }
    let flags = vec![format!("k = {k}, r = {r}, N = {big_n}")];
    Ok(VerifyReport::finish(ctx, rows, mismatches, flags))
}

/// Small-degree regime: for `2k <= n` the continuous degree law equals
/// `#F_k - #F_(k-1)` and the ball count equals `#F_k`; also `f(m_S(n)) = q^(mn)`.
pub fn verify_farey_regime(s: &DenomSet, m: usize, n: usize, opts: &VerifyOptions) -> Result<VerifyReport> {
    let field = s.field();
    let cont = continuous_dist(s, m, n, Statistic::Degree, &opts.engine)?;
    let bound = s.m_s(n, crate::denomset::DEFAULT_DEGREE_CAP)?;
    let cover_opts = CoverOptions {
        max_degree: Some(bound),
        budget: opts.engine.budget,
        workers: opts.engine.workers,
        ..CoverOptions::default()
    };
    let cover = ball_cover(field, m, n, s, &cover_opts)?;
    let ctx = set_context("farey-regime", s, m, n, &[])?;
    let mut rows = Vec::new();
    let mut prev = 0u128;
    for k in 0..=n / 2 {
        let count = farey_count(field, m, k, s)?;
        let diff = (count - prev) as u64;
        prev = count;
        let o = Outcome::Degree(k);
        let mut row = Row::new(k.to_string());
        row.continuous = Some(Cell::counted(cont.count(&o), cont.total));
        row.farey = Some(Cell::counted(diff, cont.total));
        row.farey_cumulative = Some(Cell::counted(count as u64, cont.total));
        row.balls = Some(Cell::counted(cover.f(k), cover.total));
        if cont.count(&o) != diff || cover.f(k) as u128 != count {
            row.status = RowStatus::Mismatch;
        }
        rows.push(row);
    }
    let mut full = Row::new(format!("f(m_S(n)={bound})"));
    full.balls = Some(Cell::counted(cover.f(bound), cover.total));
    if cover.f(bound) != cover.total {
        full.status = RowStatus::Mismatch;
    }
    rows.push(full);
    Ok(VerifyReport::finish(ctx, rows, Vec::new(), common_flags(s, &cont)))
}

/// Closed forms for all monic denominators (`m = 1`) against the brute-force
/// laws, with `variant` selecting the `Q_min` evaluator. Only the degree law
/// at `n = 1` or `2k <= n` is asserted; other disagreements become flags.
pub fn verify_formulas(
    field: &Field,
    n: usize,
    big_n: Option<&Poly>,
    variant: QminVariant,
    opts: &VerifyOptions,
) -> Result<VerifyReport> {
    let s = DenomSet::new(field, SetKind::AllMonic)?;
    let default_n = Poly::monomial(field, 1, n);
    let big_n = big_n.unwrap_or(&default_n);
    check_moduli(field, n, std::slice::from_ref(big_n))?;
    let degree_law = continuous_dist(&s, 1, n, Statistic::Degree, &opts.engine)?;
    let qmin_law = discrete_dist(&s, 1, big_n, Statistic::QMin, &opts.engine)?;
    let printed = formula_degdist_monic(field.order() as u64, n)?;
    let mut ctx = set_context("formulas", &s, 1, n, std::slice::from_ref(big_n))?;
    ctx.statistic = Some("deg,qmin".into());
    ctx.variant = Some(variant.name().into());
    let mut rows = Vec::new();
    let mut mismatches = Vec::new();
    let mut flags: Vec<String> = printed.diagnostics.iter().map(|d| format!("degree-law: {d}")).collect();
    let top = printed.masses.keys().chain(degree_law.counts.keys().map(|o| match o {
        Outcome::Degree(k) => k,
        Outcome::Denominator(_) => unreachable!(),
    }));
    let top = top.copied().max().unwrap_or(0);
    for k in 0..=top {
        let o = Outcome::Degree(k);
        let formula = printed.masses.get(&k).cloned().unwrap_or_else(|| ExactProb::new(0, degree_law.q, 1, n));
        let oracle = degree_law.count(&o);
        let mut row = Row::new(format!("deg={k}"));
        row.formula = Some(Cell::prob(&formula));
        row.oracle = Some(Cell::counted(oracle, degree_law.total));
        let agrees = formula.numerator == BigRational::from_integer(oracle.into());
        row.status = if n == 1 || 2 * k <= n {
            if agrees {
                RowStatus::Match
            } else {
                RowStatus::Mismatch
            }
        } else {
            if !agrees {
                flags.push(format!("degree-law-discrepancy: k={k} printed {} oracle {oracle}", formula.numerator_text()));
            }
            RowStatus::Reported
        };
        rows.push(row);
    }
    for q in enumerate_polys(field, PolyConstraint::MonicDegLess(n + 1)) {
        let o = Outcome::Denominator(q.clone());
        let oracle = qmin_law.count(&o);
        let value = formula_qmin_monic(&q, n, Some(big_n), variant)?;
        let mut row = Row::new(format!("Q={q}"));
        row.formula = Some(Cell::prob(&value.value));
        row.oracle = Some(Cell::counted(oracle, qmin_law.total));
        row.status = RowStatus::Reported;
        if value.value.numerator != BigRational::from_integer(oracle.into()) {
            flags.push(format!(
                "qmin-law-discrepancy: Q={q} {} {} oracle {oracle}",
                variant.name(),
                value.value.numerator_text()
            ));
        }
        for d in &value.diagnostics {
            flags.push(format!("qmin-law-diagnostic: Q={q} {}: {d}", variant.name()));
        }
        rows.push(row);
    }
    for (name, law) in [("degree", &degree_law), ("qmin", &qmin_law)] {
        let sum: u64 = law.counts.values().sum();
        if sum != law.total {
            mismatches.push(format!("{name} oracle law sums to {sum}/{}", law.total));
        }
    }
    Ok(VerifyReport::finish(ctx, rows, mismatches, flags))
}

/// A single law with its context, one row per outcome.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LawReport {
    pub context: ReportContext,
    pub outcomes: Vec<Row>,
    pub flags: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl LawReport {
    pub fn table(&self) -> Table {
        rows_table(&self.context, &self.outcomes)
    }
}

/// A law as a report: one row per outcome.
pub fn distribution_report(s: &DenomSet, d: &Distribution) -> Result<LawReport> {
    let kind = if d.modulus.is_some() { "discrete" } else { "continuous" };
    let moduli: Vec<Poly> = d.modulus.iter().cloned().collect();
    let mut ctx = set_context(kind, s, d.m, d.n, &moduli)?;
    ctx.statistic = Some(d.statistic.name().into());
    let rows = d
        .counts
        .iter()
        .map(|(o, &c)| {
            let mut row = Row::new(o.to_string());
            let cell = Cell::counted(c, d.total);
            if d.modulus.is_some() {
                row.discrete = vec![cell];
            } else {
                row.continuous = Some(cell);
            }
            row.status = RowStatus::Reported;
            row
        })
        .collect();
    let mut flags = common_flags(s, d);
    if d.statistic == Statistic::Degree {
        flags.push(format!("expectation: {}", format_rational(&d.expectation()?)));
    }
    if d.non_unique > 0 {
        flags.push(format!(
            "non-unique-minimal-denominator: {} of {} cases admit several denominators of minimal degree; the canonically smallest is reported",
            d.non_unique, d.total
        ));
    }
    Ok(LawReport { context: ctx, outcomes: rows, flags, elapsed_ms: None })
}

/// Four distinct moduli of degree `n` (all monic ones when fewer exist):
/// `x^n`, `x^n + 1`, `x^n + x^(n-1)`, one seeded random polynomial of degree
/// `n` (leading coefficient random too), then monic ones in canonical order.
pub fn default_moduli(field: &Field, n: usize, seed: u64) -> Result<Vec<Poly>> {
    use rand::{Rng, SeedableRng};
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let xn = Poly::monomial(field, 1, n);
    let mut out = vec![xn.clone(), &xn + &Poly::one(field), &xn + &Poly::monomial(field, 1, n - 1)];
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut coeffs: Vec<u32> = (0..n).map(|_| rng.gen_range(0..field.order())).collect();
    coeffs.push(rng.gen_range(1..field.order()));
    out.push(Poly::new(field, coeffs)?);
    let mut seen = BTreeSet::new();
    out.retain(|p| seen.insert(p.clone()));
    const WANT: usize = 4;
    for p in enumerate_polys(field, PolyConstraint::MonicDegEq(n)) {
        if out.len() >= WANT {
            break;
        }
        if seen.insert(p.clone()) {
            out.push(p);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u64) -> Field {
        Field::with_order(q).unwrap()
    }

    fn set(field: &Field, s: &str) -> DenomSet {
        DenomSet::parse(field, s).unwrap()
    }

    fn degree_counts(d: &Distribution) -> Vec<(usize, u64)> {
        d.counts.iter().map(|(o, c)| (o.degree(), *c)).collect()
    }

    fn p(field: &Field, s: &str) -> Poly {
        Poly::parse(field, s).unwrap()
    }

    #[test]
    fn continuous_examples() {
        let f2 = f(2);
        let all = set(&f2, "all-monic");
        let o = EngineOptions::default();
        let d = continuous_dist(&all, 1, 2, Statistic::Degree, &o).unwrap();
        assert_eq!(degree_counts(&d), [(0, 1), (1, 2), (2, 1)]);
        assert_eq!(d.total, 4);
        let d = continuous_dist(&all, 1, 1, Statistic::Degree, &o).unwrap();
        assert_eq!(degree_counts(&d), [(0, 1), (1, 1)]);
        let d = continuous_dist(&all, 1, 2, Statistic::QMin, &o).unwrap();
        let named: Vec<(String, u64)> = d.counts.iter().map(|(o, c)| (o.to_string(), *c)).collect();
        assert_eq!(named, [("1".into(), 1), ("x".into(), 1), ("x+1".into(), 1), ("x^2".into(), 1)]);
        assert_eq!(d.non_unique, 1);
        assert_eq!(d.by_degree().counts, continuous_dist(&all, 1, 2, Statistic::Degree, &o).unwrap().counts);
    }

    #[test]
    fn discrete_examples() {
        let f2 = f(2);
        let all = set(&f2, "all-monic");
        let o = EngineOptions::default();
        for modulus in ["x^2", "x^2+x"] {
            let d = discrete_dist(&all, 1, &p(&f2, modulus), Statistic::Degree, &o).unwrap();
            assert_eq!(degree_counts(&d), [(0, 1), (1, 2), (2, 1)]);
        }
        assert_eq!(numerator_from_rank(&f2, 1, 2, 2).to_string(), "x");
        assert_eq!(numerator_from_rank(&f2, 2, 2, 7).to_string(), "(1,x+1)");
    }

    #[test]
    fn expectation_examples() {
        let f2 = f(2);
        let all = set(&f2, "all-monic");
        let o = EngineOptions::default();
        let e = |n| continuous_dist(&all, 1, n, Statistic::Degree, &o).unwrap().expectation().unwrap();
        assert_eq!(e(2), BigRational::from_integer(1.into()));
        assert_eq!(e(1), BigRational::new(1.into(), 2.into()));
        let point = Distribution {
            statistic: Statistic::Degree,
            m: 1,
            n: 1,
            q: 2,
            modulus: None,
            bound: 1,
            counts: [(Outcome::Degree(0), 2)].into(),
            total: 2,
            non_unique: 0,
            beyond_bound: 0,
        };
        assert_eq!(point.expectation().unwrap(), BigRational::from_integer(0.into()));
        let qmin = continuous_dist(&all, 1, 1, Statistic::QMin, &o).unwrap();
        assert_eq!(qmin.expectation().unwrap_err(), Error::WrongStatistic);
    }

    #[test]
    fn verification_examples() {
        let f2 = f(2);
        let all = set(&f2, "all-monic");
        let o = VerifyOptions::default();
        let moduli: Vec<Poly> = ["x^2", "x^2+1", "x^2+x", "x^2+x+1"].iter().map(|s| p(&f2, s)).collect();
        assert!(verify_same_dist(&all, 1, 2, &moduli, &o).unwrap().is_match());
        let r = verify_qmin_equals(&all, 1, 2, &moduli[..1], &o).unwrap();
        assert!(r.is_match(), "{:?}", r.mismatches);
        let px = set(&f2, "powers:x");
        let r = verify_qmin_equals(&px, 1, 3, &[p(&f2, "x^3")], &o).unwrap();
        let counts: Vec<(String, String)> =
            r.outcomes.iter().map(|row| (row.outcome.clone(), row.continuous.as_ref().unwrap().count.clone())).collect();
        assert_eq!(counts, [("1".into(), "1".into()), ("x".into(), "1".into()), ("x^2".into(), "2".into()), ("x^3".into(), "4".into())]);
        assert!(r.is_match());
        assert!(verify_same_dist(&px, 1, 3, &[p(&f2, "x^3")], &o).unwrap().is_match());
        for base in ["x", "x^2+x+1"] {
            assert!(verify_lacunary(&p(&f2, base), 1, 3, &o).unwrap().is_match());
        }
        assert!(verify_lacunary(&Poly::x(&f(3)), 2, 2, &o).unwrap().is_match());
        let r = verify_farey_regime(&all, 1, 2, &o).unwrap();
        assert!(r.is_match());
        assert_eq!(r.outcomes[1].continuous.as_ref().unwrap().count, "2");
        let r = verify_farey_regime(&all, 2, 2, &o).unwrap();
        assert_eq!(r.outcomes[1].continuous.as_ref().unwrap().count, "6");
        assert!(r.is_match());
        assert!(verify_same_dist(&all, 1, 2, &[p(&f2, "x^3")], &o).is_err());
    }

    #[test]
    fn formula_report_flags_printed_regimes() {
        let f2 = f(2);
        let r = verify_formulas(&f2, 3, None, QminVariant::Printed, &VerifyOptions::default()).unwrap();
        assert!(r.is_match());
        assert!(r.flags.iter().any(|f| f.starts_with("degree-law-discrepancy: k=2")));
        let r = verify_formulas(&f2, 1, None, QminVariant::Corrected, &VerifyOptions::default()).unwrap();
        assert!(r.is_match());
    }

    #[test]
    fn serial_and_parallel_laws_agree() {
        let f3 = f(3);
        for text in ["all-monic", "irreducible", "degrees:even"] {
            let s = set(&f3, text);
            for stat in [Statistic::Degree, Statistic::QMin] {
                let serial = continuous_dist(&s, 1, 4, stat, &EngineOptions { workers: 1, ..Default::default() }).unwrap();
                let parallel = continuous_dist(&s, 1, 4, stat, &EngineOptions { workers: 3, ..Default::default() }).unwrap();
                assert_eq!(serial, parallel);
            }
        }
    }

    #[test]
    fn default_moduli_are_distinct() {
        let f2 = f(2);
        let one: Vec<String> = default_moduli(&f2, 1, 0).unwrap().iter().map(Poly::to_string).collect();
        assert_eq!(one, ["x", "x+1"]);
        for n in 2..5 {
            let ms = default_moduli(&f(3), n, 7).unwrap();
            assert_eq!(ms.len(), 4);
            assert_eq!(ms.iter().collect::<BTreeSet<_>>().len(), 4);
            assert!(ms.iter().all(|p| p.deg() == Some(n)));
        }
        assert_eq!(default_moduli(&f2, 3, 1).unwrap(), default_moduli(&f2, 3, 1).unwrap());
    }

    #[test]
    fn tables_render() {
        let f2 = f(2);
        let all = set(&f2, "all-monic");
        let r = verify_same_dist(&all, 1, 1, &[p(&f2, "x")], &VerifyOptions::default()).unwrap();
        let t = r.table();
        assert_eq!(t.columns, ["outcome", "continuous", "discrete[N=x]", "status"]);
        assert_eq!(t.to_csv(), "outcome,continuous,discrete[N=x],status\n0,1/2,1/2,match\n1,1/2,1/2,match\n");
        assert!(t.to_pretty().starts_with("outcome  continuous"));
    }
}
