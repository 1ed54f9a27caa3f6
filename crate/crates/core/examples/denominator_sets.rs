//! Membership and m_S(n) for the built-in denominator sets over F_2.
use ffminden::{DenomSet, Field, Poly};

fn main() -> ffminden::Result<()> {
    let f = Field::with_order(2)?;
    let probe = Poly::parse(&f, "x^2+x+1")?;
    println!("{:<18} {:>6} {:>6} {:>6}  contains {probe}", "set", "|S_2|", "|S_3|", "m_S(4)");
    for text in ["all-monic", "powers:x", "powers:x+1", "irreducible", "degrees:even", "list:1;x;x^3"] {
        let s = DenomSet::parse(&f, text)?;
        let m_s = s.m_s(4, 64).map_or("-".to_string(), |m| m.to_string());
        println!("{:<18} {:>6} {:>6} {:>6}  {}", s.to_string(), s.slice_size(2), s.slice_size(3), m_s, s.contains(&probe));
    }
    Ok(())
}
