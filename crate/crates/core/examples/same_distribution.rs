//! Continuous versus discrete laws of the minimal denominator, with the report table.
use ffminden::dist::{default_moduli, verify_qmin_equals, verify_same_dist, VerifyOptions};
use ffminden::{DenomSet, Field};

fn main() -> ffminden::Result<()> {
    let f = Field::with_order(3)?;
    let (m, n) = (1, 3);
    let moduli = default_moduli(&f, n, 0)?;
    let opts = VerifyOptions::default();
    for text in ["all-monic", "degrees:even"] {
        let s = DenomSet::parse(&f, text)?;
        let report = verify_same_dist(&s, m, n, &moduli, &opts)?;
        println!("S = {text}: {:?}", report.verdict);
        print!("{}", report.table().to_pretty());

        let report = verify_qmin_equals(&s, m, n, &moduli, &opts)?;
        println!("Q_min, ball cover and separated counts agree: {}", report.is_match());
        for flag in &report.flags {
            println!("  {flag}");
        }
        println!();
    }
    Ok(())
}
