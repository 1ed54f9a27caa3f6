//! Minimal denominators of a few truncated tails, for several sets.
use ffminden::minden::{check_witness, discrete_minden, q_min};
use ffminden::{DenomSet, FareyFraction, Field, Poly, PolyVec, Statistic, TruncVec};

fn main() -> ffminden::Result<()> {
    let f = Field::with_order(2)?;
    let n = 4;
    for tail in ["[1,0,1,1]", "[0,0,0,0]", "[1,1,1,1]", "[1,0];[1,1]"] {
        let alpha = TruncVec::parse(&f, tail)?;
        let n = alpha.precision();
        for text in ["all-monic", "powers:x+1", "irreducible"] {
            let s = DenomSet::parse(&f, text)?;
            let r = q_min(&alpha, n, &s)?;
            check_witness(&alpha, n, &s, &r).expect("witness");
            let note = if r.is_unique() { String::new() } else { format!("  ties: {}", r.competitors.len()) };
            let fr = FareyFraction::new(r.numerator.clone(), r.denominator.clone())?;
            println!("{tail:<12} {text:<12} {fr:<22} degree {}{note}", r.degree);
        }
    }

    let s = DenomSet::parse(&f, "all-monic")?;
    let a = PolyVec::parse(&f, "x^3+x")?;
    let big_n = Poly::parse(&f, &format!("x^{n}+x+1"))?;
    let r = discrete_minden(&a, &big_n, &s, Statistic::QMin)?;
    println!("({a})/({big_n}) reduces to {}", FareyFraction::new(r.numerator, r.denominator)?);
    Ok(())
}
