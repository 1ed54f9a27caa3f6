//! Expanding P/Q in 1/x and splitting off the polynomial part.
use ffminden::laurent::{expand_fraction, split_integer_fractional};
use ffminden::{Field, Poly, PolyVec, TruncVec};

fn main() -> ffminden::Result<()> {
    let f = Field::with_order(3)?;
    let den = Poly::parse(&f, "x^2+1")?;
    let num = PolyVec::parse(&f, "(x,2)")?;
    let alpha = expand_fraction(&num, &den, 6)?;
    println!("{num}/({den}) = {alpha} to 6 digits");

    let g = Poly::parse(&f, "x^4+2*x+1")?;
    let (int, frac) = split_integer_fractional(&g, &den, 4)?;
    println!("({g})/({den}) = {int} + {frac}...");

    let rank = alpha.retruncate(3)?.rank();
    println!("prefix of length 3 has rank {rank}: {}", TruncVec::from_rank(&f, 2, 3, rank));
    Ok(())
}
