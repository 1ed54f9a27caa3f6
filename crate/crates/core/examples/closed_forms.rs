//! Closed-form laws next to the exhaustive counts, m = 1, all monic denominators.
use ffminden::dist::{continuous_dist, EngineOptions, Outcome};
use ffminden::formulas::{formula_degdist_monic, formula_lacunary, formula_qmin_monic, QminVariant};
use ffminden::{DenomSet, Field, Poly, Statistic};

fn main() -> ffminden::Result<()> {
    let (q, n) = (2, 4);
    let f = Field::with_order(q)?;
    let s = DenomSet::parse(&f, "all-monic")?;
    let opts = EngineOptions::default();

    let law = continuous_dist(&s, 1, n, Statistic::Degree, &opts)?;
    let printed = formula_degdist_monic(q, n)?;
    for (outcome, count) in &law.counts {
        let formula = printed.masses.get(&outcome.degree()).map_or("-".into(), |p| p.reduced_text());
        println!("deg {outcome}: counted {count}/{}  formula {formula}", law.total);
    }
    for d in &printed.diagnostics {
        println!("  note: {d}");
    }

    let law = continuous_dist(&s, 1, n, Statistic::QMin, &opts)?;
    for (outcome, count) in law.counts.iter().take(6) {
        let Outcome::Denominator(den) = outcome else { continue };
        let r = formula_qmin_monic(den, n, None, QminVariant::Corrected)?;
        println!("Q = {den}: counted {count}/{}  formula {}", law.total, r.value.reduced_text());
    }

    let p = Poly::parse(&f, "x+1")?;
    for (k, prob) in formula_lacunary(&p, 1, n)? {
        println!("powers of x+1, degree {k}: {}", prob.reduced_text());
    }
    Ok(())
}
