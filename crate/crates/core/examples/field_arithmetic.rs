//! Arithmetic in F_9 built as F_3[t]/(t^2+1).
use ffminden::Field;

fn main() -> ffminden::Result<()> {
    let f = Field::new(3, 2, Some(&[1, 0, 1]))?;
    println!("{f}, characteristic {}, order {}", f.characteristic(), f.order());

    let t = f.parse_element("t")?;
    let one_plus_t = f.parse_element("1+t")?;
    println!("t^2 = {}", t.mul(&t)?);
    println!("(1+t)^-1 = {}", one_plus_t.inv()?);
    println!("(1+t)/t = {}", one_plus_t.div(&t)?);

    let units = f.elements().filter(|e| !e.is_zero()).count();
    println!("{units} units");
    Ok(())
}
