//! Denominators restricted to powers of one polynomial.
use ffminden::dist::{lacunary_modulus, verify_lacunary, VerifyOptions};
use ffminden::{Field, Poly};

fn main() -> ffminden::Result<()> {
    let f = Field::with_order(2)?;
    for (p, n) in [("x", 4), ("x+1", 5), ("x^2+x+1", 5)] {
        let p = Poly::parse(&f, p)?;
        let report = verify_lacunary(&p, 1, n, &VerifyOptions::default())?;
        println!("P = {p}, n = {n}, N = {}: {:?}", lacunary_modulus(&p, n), report.verdict);
        print!("{}", report.table().to_pretty());
        println!();
    }
    Ok(())
}
