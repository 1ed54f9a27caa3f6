//! Farey fractions of F_3[x] and the prefix balls they cover.
use ffminden::farey::{ball_cover, farey_count, farey_enumerate};
use ffminden::{CoverOptions, DenomSet, Field};

fn main() -> ffminden::Result<()> {
    let f = Field::with_order(3)?;
    let s = DenomSet::parse(&f, "all-monic")?;

    let list = farey_enumerate(&f, 1, 1, &s, 1_000)?;
    let shown: Vec<String> = list.iter().map(ToString::to_string).collect();
    println!("degree <= 1: {}", shown.join(", "));
    for k in 0..4 {
        println!("count k={k}: {}", farey_count(&f, 1, k, &s)?);
    }

    let cover = ball_cover(&f, 1, 4, &s, &CoverOptions::default())?;
    for l in &cover.levels {
        println!("d={} covered {}/{} (new {}, shared {})", l.degree, l.covered, cover.total, l.new_balls, l.shared);
    }
    Ok(())
}
