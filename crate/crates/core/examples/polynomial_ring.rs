//! Division, gcd, factorization and the Mobius function in F_2[x].
use ffminden::{Field, Poly};

fn main() -> ffminden::Result<()> {
    let f = Field::with_order(2)?;
    let a = Poly::parse(&f, "x^6+x^5+x^4+x^2+x+1")?;
    let b = Poly::parse(&f, "x^3+1")?;

    let (quot, rem) = a.div_rem(&b)?;
    println!("{a} = ({b})({quot}) + {rem}");
    println!("gcd = {}", a.gcd(&b)?);

    for p in [&a, &b] {
        let fact = p.factor()?;
        let parts: Vec<String> = fact.factors.iter().map(|(r, e)| format!("({r})^{e}")).collect();
        println!("{p} = {}  mu = {}  divisors = {}", parts.join(" "), p.mobius()?, p.divisor_count()?);
    }
    Ok(())
}
