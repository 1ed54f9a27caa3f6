//! The `ffminden` command line. Every command is a thin wrapper over library calls.

use std::io::Write;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::denomset::{DenomSet, SetKind, DEFAULT_DEGREE_CAP};
use crate::dist::{
    continuous_dist, default_moduli, discrete_dist, distribution_report, verify_farey_regime, verify_formulas,
    verify_lacunary, verify_qmin_equals, verify_same_dist, EngineOptions, Table, VerifyOptions,
};
use crate::error::{Error, Result};
use crate::farey::{ball_cover, farey_count, farey_enumerate, CoverOptions, SeparationRule};
use crate::ff::Field;
use crate::formulas::{format_rational, QminVariant};
use crate::laurent::{expand_fraction, TruncVec};
use crate::minden::{MinDenResult, MinDenSolver, Statistic};
use crate::poly::{Poly, PolyVec};

const GRAMMAR: &str = "\
grammar:
  field   -q <q> | -q <p> --ext <e>[:<modulus over F_p>]
  poly    terms joined by + or -, e.g. x^3+2x+1; extension elements as (a+b*t)x^2
  vector  <poly>,<poly>,...
  tail    [c1,c2,...] per coordinate, coordinates joined by ;
  set     all-monic | powers:<poly> | irreducible | degrees:even|odd|<d,d,...>|<a>..<b> | list:<poly>;<poly>;...";

const ORDERING: &str = "outcomes in canonical order: degree first, then coefficients from the leading one down; \
tail classes ranked lexicographically with the first coefficient most significant";

#[derive(Parser, Debug)]
#[command(name = "ffminden", version, about = "Minimal denominators over F_q[x]: exact laws, Farey balls and closed forms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact law of the statistic.
    Dist {
        #[arg(value_enum)]
        kind: DistKind,
        #[command(flatten)]
        common: Common,
    },
    /// Compare laws, ball counts and closed forms outcome by outcome.
    Verify {
        #[arg(value_enum)]
        check: Check,
        #[command(flatten)]
        common: Common,
    },
    /// Farey fractions and the radius q^-n balls around them.
    Farey {
        #[arg(value_enum)]
        action: FareyAction,
        #[command(flatten)]
        common: Common,
    },
    /// Minimal denominator of one tail (`--tail`) or one discrete point (`--a` with `--N`).
    Minden {
        #[command(flatten)]
        common: Common,
    },
    /// Expected minimal degree, continuous and discrete.
    Expect {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum DistKind {
    Continuous,
    Discrete,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Check {
    SameDist,
    QminEquals,
    Lacunary,
    FareyRegime,
    Formulas,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum FareyAction {
    List,
    Count,
    Balls,
    Separated,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum OutFormat {
    Json,
    Csv,
    Pretty,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum StatArg {
    Deg,
    Qmin,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum VariantArg {
    Printed,
    Corrected,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum RuleArg {
    Canonical,
    OtherDenominators,
    AllOthers,
}

#[derive(Args, Debug, Serialize)]
struct Common {
    /// Field order q (or the characteristic p together with --ext).
    #[arg(short = 'q', default_value_t = 2)]
    q: u64,
    /// Extension degree e with an optional modulus over F_p, as `e` or `e:modulus`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    ext: Option<String>,
    /// Number of coordinates.
    #[arg(short = 'm', default_value_t = 1)]
    m: usize,
    /// Precision; taken from --tail when omitted there.
    #[arg(short = 'n')]
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    /// Denominator set.
    #[arg(long, default_value = "all-monic")]
    set: String,
    /// Discrete modulus N (repeatable).
    #[arg(long = "N")]
    #[serde(rename = "N", skip_serializing_if = "Vec::is_empty")]
    moduli: Vec<String>,
    #[arg(long, value_enum, default_value = "deg")]
    stat: StatArg,
    /// Tail prefix for `minden`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    tail: Option<String>,
    /// Numerator vector for `minden`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    a: Option<String>,
    /// Farey degree bound (list, count) or last cover degree (balls, separated).
    #[arg(short = 'k')]
    #[serde(skip_serializing_if = "Option::is_none")]
    k: Option<usize>,
    #[arg(long, value_enum, default_value = "json")]
    out: OutFormat,
    /// Enumeration budget in elementary units.
    #[arg(long, default_value_t = crate::DEFAULT_BUDGET)]
    budget: u64,
    /// Worker threads: 1 = serial, 0 = all cores.
    #[arg(long, default_value_t = 1)]
    #[serde(skip)]
    workers: usize,
    #[arg(long = "qmin-law-variant", value_enum, default_value = "printed")]
    qmin_law_variant: VariantArg,
    /// Which other fractions a ball must avoid to count as separated.
    #[arg(long, value_enum, default_value = "canonical")]
    rule: RuleArg,
    /// Seed for the randomly chosen default modulus.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Report elapsed wall time (makes output run-dependent).
    #[arg(long)]
    #[serde(skip)]
    timing: bool,
}

impl Common {
    fn field(&self) -> Result<Field> {
        let Some(ext) = &self.ext else {
            return Field::with_order(self.q);
        };
        let (e, modulus) = match ext.split_once(':') {
            Some((e, m)) => (e, Some(m)),
            None => (ext.as_str(), None),
        };
        let e: u32 = e.trim().parse().map_err(|_| bad("--ext", e, "expected an extension degree"))?;
        if e == 0 {
            return Err(bad("--ext", "0", "extension degree must be at least 1"));
        }
        // -q may be the characteristic p or the full order p^e.
        let p = match crate::ff::prime_power(self.q) {
            Some((p, 1)) => p,
            Some((p, k)) if k == e => p,
            _ => return Err(bad("-q", &self.q.to_string(), "with --ext give the prime p or p^e")),
        };
        let coeffs = match modulus {
            Some(text) => Some(Poly::parse(&Field::prime(p)?, text)?.coeffs().to_vec()),
            None => None,
        };
        Field::new(p, e, coeffs.as_deref())
    }

    fn n(&self) -> Result<usize> {
        match self.n {
            Some(0) => Err(bad("-n", "0", "precision must be at least 1")),
            Some(n) => Ok(n),
            None => Err(bad("-n", "", "precision -n is required")),
        }
    }

    fn m(&self) -> Result<usize> {
        if self.m == 0 {
            return Err(bad("-m", "0", "dimension must be at least 1"));
        }
        Ok(self.m)
    }

    fn set(&self, field: &Field) -> Result<DenomSet> {
        DenomSet::parse(field, &self.set)
    }

    fn moduli(&self, field: &Field) -> Result<Vec<Poly>> {
        self.moduli.iter().map(|t| Poly::parse(field, t)).collect()
    }

    /// Given moduli, or the default list when none are given.
    fn moduli_or_default(&self, field: &Field, n: usize) -> Result<Vec<Poly>> {
        let given = self.moduli(field)?;
        if given.is_empty() {
            default_moduli(field, n, self.seed)
        } else {
            Ok(given)
        }
    }

    fn engine(&self) -> Result<EngineOptions> {
        if self.budget == 0 {
            return Err(bad("--budget", "0", "budget must be at least 1"));
        }
        Ok(EngineOptions { budget: self.budget, workers: self.workers })
    }

    fn statistic(&self) -> Statistic {
        match self.stat {
            StatArg::Deg => Statistic::Degree,
            StatArg::Qmin => Statistic::QMin,
        }
    }

    fn rule(&self) -> SeparationRule {
        match self.rule {
            RuleArg::Canonical => SeparationRule::Canonical,
            RuleArg::OtherDenominators => SeparationRule::OtherDenominators,
            RuleArg::AllOthers => SeparationRule::AllOthers,
        }
    }

    fn variant(&self) -> QminVariant {
        match self.qmin_law_variant {
            VariantArg::Printed => QminVariant::Printed,
            VariantArg::Corrected => QminVariant::Corrected,
        }
    }
}

fn bad(flag: &'static str, token: &str, reason: &str) -> Error {
    Error::Syntax { what: flag, token: token.into(), reason: reason.into() }
}

/// Rendered result of one command.
struct Output {
    body: Value,
    table: Table,
    /// `Some(false)` makes the exit code 1.
    verdict: Option<bool>,
    flags: Vec<String>,
}

fn rows_table(columns: &[&str], rows: Vec<Vec<String>>) -> Table {
    Table { columns: columns.iter().map(|c| c.to_string()).collect(), rows }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn execute(command: &Command) -> Result<Output> {
    match command {
        Command::Dist { kind, common } => {
            let field = common.field()?;
            let (m, n) = (common.m()?, common.n()?);
            let s = common.set(&field)?;
            let engine = common.engine()?;
            let d = match kind {
                DistKind::Continuous => continuous_dist(&s, m, n, common.statistic(), &engine)?,
                DistKind::Discrete => {
                    let moduli = common.moduli(&field)?;
                    let big_n = match moduli.as_slice() {
                        [] => Poly::monomial(&field, 1, n),
                        [one] => one.clone(),
                        _ => return Err(bad("--N", &common.moduli[1], "dist discrete takes one modulus")),
                    };
                    if big_n.deg() != Some(n) {
                        return Err(bad("--N", &big_n.to_string(), "N must have degree n"));
                    }
                    discrete_dist(&s, m, &big_n, common.statistic(), &engine)?
                }
            };
            let report = distribution_report(&s, &d)?;
            Ok(Output { body: to_value(&report), table: report.table(), verdict: None, flags: report.flags })
        }
        Command::Verify { check, common } => {
            let field = common.field()?;
            let (m, n) = (common.m()?, common.n()?);
            let opts = VerifyOptions { engine: common.engine()?, rule: common.rule() };
            let report = match check {
                Check::SameDist => verify_same_dist(&common.set(&field)?, m, n, &common.moduli_or_default(&field, n)?, &opts)?,
                Check::QminEquals => {
                    verify_qmin_equals(&common.set(&field)?, m, n, &common.moduli_or_default(&field, n)?, &opts)?
                }
                Check::Lacunary => {
                    let s = common.set(&field)?;
                    let SetKind::Powers(p) = s.kind() else {
                        return Err(bad("--set", &common.set, "lacunary needs --set powers:<P>"));
                    };
                    verify_lacunary(p, m, n, &opts)?
                }
                Check::FareyRegime => verify_farey_regime(&common.set(&field)?, m, n, &opts)?,
                Check::Formulas => {
                    if m != 1 {
                        return Err(bad("-m", &m.to_string(), "closed forms are for m = 1"));
                    }
                    let moduli = common.moduli(&field)?;
                    if moduli.len() > 1 {
                        return Err(bad("--N", &common.moduli[1], "formulas takes at most one modulus"));
                    }
                    verify_formulas(&field, n, moduli.first(), common.variant(), &opts)?
                }
            };
            Ok(Output {
                body: to_value(&report),
                table: report.table(),
                verdict: Some(report.is_match()),
                flags: report.flags.iter().chain(&report.mismatches).cloned().collect(),
            })
        }
        Command::Farey { action, common } => farey(*action, common),
        Command::Minden { common } => minden(common),
        Command::Expect { common } => expect(common),
    }
}

fn farey(action: FareyAction, common: &Common) -> Result<Output> {
    let field = common.field()?;
    let m = common.m()?;
    let s = common.set(&field)?;
    let need_k = || common.k.ok_or_else(|| bad("-k", "", "this action needs a degree bound -k"));
    match action {
        FareyAction::List => {
            let k = need_k()?;
            let list = farey_enumerate(&field, m, k, &s, common.budget)?;
            let rows: Vec<Vec<String>> =
                list.iter().map(|f| vec![f.to_string(), f.degree().to_string()]).collect();
            let body = json!({
                "context": {"field": field.to_string(), "m": m, "k": k, "set": s.to_string()},
                "count": list.len(),
                "fractions": list.iter().map(|f| json!({"fraction": f.to_string(), "degree": f.degree()})).collect::<Vec<_>>(),
            });
            Ok(Output { body, table: rows_table(&["fraction", "degree"], rows), verdict: None, flags: Vec::new() })
        }
        FareyAction::Count => {
            let k = need_k()?;
            let counts = (0..=k).map(|j| farey_count(&field, m, j, &s)).collect::<Result<Vec<_>>>()?;
            let rows = counts.iter().enumerate().map(|(j, c)| vec![j.to_string(), c.to_string()]).collect();
            let body = json!({
                "context": {"field": field.to_string(), "m": m, "k": k, "set": s.to_string()},
                "counts": counts.iter().enumerate().map(|(j, c)| json!({"k": j, "count": c.to_string()})).collect::<Vec<_>>(),
            });
            Ok(Output { body, table: rows_table(&["k", "count"], rows), verdict: None, flags: Vec::new() })
        }
        FareyAction::Balls | FareyAction::Separated => {
            let n = common.n()?;
            let opts = CoverOptions {
                max_degree: common.k,
                rule: common.rule(),
                budget: common.engine()?.budget,
                workers: common.workers,
                degree_cap: DEFAULT_DEGREE_CAP,
            };
            let cover = ball_cover(&field, m, n, &s, &opts)?;
            let context = json!({
                "field": field.to_string(), "m": m, "n": n, "set": s.to_string(),
                "m_s": cover.bound, "rule": cover.rule.name(), "total": cover.total,
            });
            if action == FareyAction::Balls {
                let rows = cover
                    .levels
                    .iter()
                    .map(|l| {
                        [l.degree as u64, l.denominators, l.new_balls, l.covered, l.shared].iter().map(u64::to_string).collect()
                    })
                    .collect();
                let body = json!({
                    "context": context,
                    "levels": cover.levels.iter().map(|l| json!({
                        "degree": l.degree, "denominators": l.denominators, "new_balls": l.new_balls,
                        "covered": l.covered, "shared": l.shared,
                    })).collect::<Vec<_>>(),
                    "full": cover.is_full(),
                });
                let table = rows_table(&["degree", "denominators", "new_balls", "covered", "shared"], rows);
                Ok(Output { body, table, verdict: None, flags: Vec::new() })
            } else {
                let rows = cover.separated.iter().map(|(q, c)| vec![q.to_string(), c.to_string()]).collect();
                let body = json!({
                    "context": context,
                    "separated": cover.separated.iter().map(|(q, c)| json!({"denominator": q.to_string(), "balls": c})).collect::<Vec<_>>(),
                    "sum": cover.separated_total(),
                });
                Ok(Output { body, table: rows_table(&["denominator", "balls"], rows), verdict: None, flags: Vec::new() })
            }
        }
    }
}

fn minden(common: &Common) -> Result<Output> {
    let field = common.field()?;
    let s = common.set(&field)?;
    let (alpha, source) = match (&common.tail, &common.a) {
        (Some(t), None) => {
            let alpha = TruncVec::parse(&field, t)?;
            if common.n.is_some_and(|n| n != alpha.precision()) {
                return Err(bad("-n", &common.n()?.to_string(), "must equal the tail length"));
            }
            (alpha, json!({"tail": t}))
        }
        (None, Some(a)) => {
            let text = a.trim();
            let inner = text.strip_prefix('(').and_then(|t| t.strip_suffix(')')).unwrap_or(text);
            let a = PolyVec::parse(&field, inner)?;
            let moduli = common.moduli(&field)?;
            let [big_n] = moduli.as_slice() else {
                return Err(bad("--N", "", "--a needs exactly one --N"));
            };
            let n = big_n.deg().ok_or(Error::ZeroDenominator)?;
            if a.coords().iter().any(|c| c.deg().is_some_and(|d| d >= n)) {
                return Err(bad("--a", &a.to_string(), "each coordinate must have degree below deg N"));
            }
            (expand_fraction(&a, big_n, n)?, json!({"a": a.to_string(), "N": big_n.to_string()}))
        }
        _ => return Err(bad("--tail", "", "give exactly one of --tail or --a with --N")),
    };
    let solver = MinDenSolver::new(&s, alpha.dim(), alpha.precision())?;
    let r: MinDenResult = solver.solve_raw(alpha.flat(), Statistic::QMin)?;
    let rows = vec![
        vec!["d".into(), r.degree.to_string()],
        vec!["Q".into(), r.denominator.to_string()],
        vec!["P".into(), r.numerator.to_string()],
        vec!["unique".into(), r.is_unique().to_string()],
        vec!["exceeds_m_S".into(), r.exceeds_bound().to_string()],
    ];
    let mut flags = Vec::new();
    if !r.is_unique() {
        flags.push(format!(
            "non-unique-minimal-denominator: also {}",
            r.competitors.iter().map(Poly::to_string).collect::<Vec<_>>().join(", ")
        ));
    }
    let body = json!({
        "context": {"field": field.to_string(), "m": alpha.dim(), "n": alpha.precision(), "set": s.to_string(), "m_s": r.bound},
        "input": source,
        "tail": alpha.to_string(),
        "degree": r.degree,
        "denominator": r.denominator.to_string(),
        "numerator": r.numerator.to_string(),
        "competitors": r.competitors.iter().map(Poly::to_string).collect::<Vec<_>>(),
        "exceeds_m_S": r.exceeds_bound(),
    });
    Ok(Output { body, table: rows_table(&["field", "value"], rows), verdict: None, flags })
}

fn expect(common: &Common) -> Result<Output> {
    let field = common.field()?;
    let (m, n) = (common.m()?, common.n()?);
    let s = common.set(&field)?;
    let engine = common.engine()?;
    let continuous = continuous_dist(&s, m, n, Statistic::Degree, &engine)?.expectation()?;
    let mut rows = vec![vec!["continuous".to_string(), format_rational(&continuous)]];
    let mut agree = true;
    let mut discrete = Vec::new();
    for big_n in common.moduli_or_default(&field, n)? {
        let e = discrete_dist(&s, m, &big_n, Statistic::Degree, &engine)?.expectation()?;
        agree &= e == continuous;
        rows.push(vec![format!("discrete[N={big_n}]"), format_rational(&e)]);
        discrete.push(json!({"N": big_n.to_string(), "expectation": format_rational(&e)}));
    }
    let body = json!({
        "context": {"field": field.to_string(), "m": m, "n": n, "set": s.to_string()},
        "continuous": format_rational(&continuous),
        "discrete": discrete,
        "verdict": if agree { "exact-match" } else { "mismatch" },
    });
    Ok(Output { body, table: rows_table(&["law", "expectation"], rows), verdict: Some(agree), flags: Vec::new() })
}

fn command_name(c: &Command) -> (&'static str, String, &Common) {
    let kebab = |v: Value| v.as_str().unwrap_or_default().to_string();
    match c {
        Command::Dist { kind, common } => ("dist", kebab(to_value(kind)), common),
        Command::Verify { check, common } => ("verify", kebab(to_value(check)), common),
        Command::Farey { action, common } => ("farey", kebab(to_value(action)), common),
        Command::Minden { common } => ("minden", String::new(), common),
        Command::Expect { common } => ("expect", String::new(), common),
    }
}

fn reproducibility(c: &Command) -> Value {
    let (name, sub, common) = command_name(c);
    let mut config = to_value(common);
    config["command"] = json!(if sub.is_empty() { name.to_string() } else { format!("{name} {sub}") });
    json!({
        "version": env!("CARGO_PKG_VERSION"),
        "config": config,
        "ordering": ORDERING,
    })
}

fn render(c: &Command, output: Output, elapsed_ms: Option<u64>) -> String {
    let (_, _, common) = command_name(c);
    let stanza = reproducibility(c);
    match common.out {
        OutFormat::Json => {
            let mut body = output.body;
            if let Some(ms) = elapsed_ms {
                body["elapsed_ms"] = json!(ms);
            }
            body["reproducibility"] = stanza;
            serde_json::to_string_pretty(&body).expect("json") + "\n"
        }
        OutFormat::Csv => {
            let mut s = output.table.to_csv();
            if let Some(v) = output.verdict {
                s.push_str(&format!("# verdict: {}\n", if v { "exact-match" } else { "mismatch" }));
            }
            for f in &output.flags {
                s.push_str(&format!("# flag: {f}\n"));
            }
            if let Some(ms) = elapsed_ms {
                s.push_str(&format!("# elapsed_ms: {ms}\n"));
            }
            s.push_str(&format!("# version: {}\n", stanza["version"].as_str().unwrap_or_default()));
            s.push_str(&format!("# config: {}\n", stanza["config"]));
            s.push_str(&format!("# ordering: {ORDERING}\n"));
            s
        }
        OutFormat::Pretty => {
            let mut s = output.table.to_pretty();
            if let Some(v) = output.verdict {
                s.push_str(&format!("\nverdict: {}\n", if v { "exact-match" } else { "mismatch" }));
            }
            for f in &output.flags {
                s.push_str(&format!("flag: {f}\n"));
            }
            if let Some(ms) = elapsed_ms {
                s.push_str(&format!("elapsed: {ms} ms\n"));
            }
            s.push_str(&format!(
                "\nffminden {}\nconfig: {}\nordering: {ORDERING}\n",
                stanza["version"].as_str().unwrap_or_default(),
                stanza["config"]
            ));
            s
        }
    }
}

/// Runs the command line `args` (program name first). Returns the exit code:
/// 0 on success or exact match, 1 on a verification mismatch, 2 on usage or
/// validation errors.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = writeln!(err, "{text}\n{GRAMMAR}");
            }
            return code;
        }
    };
    let start = Instant::now();
    match execute(&cli.command) {
        Ok(output) => {
            let verdict = output.verdict;
            let (_, _, common) = command_name(&cli.command);
            let elapsed = common.timing.then(|| start.elapsed().as_millis() as u64);
            let _ = out.write_all(render(&cli.command, output, elapsed).as_bytes());
            match verdict {
                Some(false) => 1,
                _ => 0,
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}\n{GRAMMAR}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &str) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("ffminden").chain(args.split_whitespace()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn examples() {
        let (code, out, _) = call("verify same-dist -q 2 -m 1 -n 2 --set all-monic");
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["verdict"], "exact-match");
        assert!(out.trim_end().ends_with('}'));
        assert!(v["reproducibility"]["config"].get("workers").is_none());

        let (code, out, _) = call("dist continuous -q 2 -m 1 -n 3 --set powers:x --stat qmin --out csv");
        assert_eq!(code, 0);
        assert!(out.starts_with("outcome,continuous,status\n1,1/8,reported\nx,1/8,reported\nx^2,2/8,reported\nx^3,4/8,reported\n"));

        let (code, out, _) = call("minden --tail [0,1] -q 2 -n 2 --set all-monic");
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!((v["degree"].as_u64(), v["denominator"].as_str(), v["numerator"].as_str()), (Some(2), Some("x^2"), Some("1")));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(call("dist continuous -q 6 -n 2").0, 2);
        let (code, _, err) = call("dist continuous -q 2 -n 2 --set powers:2x");
        assert_eq!(code, 2);
        assert!(err.contains("grammar:"));
        assert_eq!(call("dist sideways -n 2").0, 2);
        assert_eq!(call("dist continuous -q 5 -m 3 -n 5").0, 2);
        assert_eq!(call("--help").0, 0);
        assert_eq!(call("verify farey-regime -q 2 -n 3 --set irreducible").0, 1);
    }

    #[test]
    fn extension_fields() {
        let (code, out, _) = call("dist continuous -q 2 --ext 2:x^2+x+1 -n 1 --out pretty");
        assert_eq!(code, 0);
        assert!(out.contains("1/4"));
        assert_eq!(call("dist continuous -q 4 --ext 2 -n 1").0, 0);
        assert_eq!(call("dist continuous -q 8 --ext 2 -n 1").0, 2);
    }

    #[test]
    fn worker_count_does_not_change_output() {
        for cmd in ["verify qmin-equals -q 3 -m 1 -n 3 --set irreducible", "farey balls -q 2 -m 2 -n 2"] {
            let serial = call(&format!("{cmd} --workers 1"));
            let parallel = call(&format!("{cmd} --workers 4"));
            assert_eq!(serial, parallel);
        }
    }
}
