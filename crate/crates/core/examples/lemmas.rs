//! Finite checks of the root alternation and the vertex fraction parity.

use tropper::period::{alternating_roots, gamma_v_fraction, root_sets};

fn main() -> tropper::Result<()> {
    let (a, b) = root_sets(2, 3)?;
    let show = |v: &[num_rational::BigRational]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    println!("m = 2, n = 3, angles in turns");
    println!("  A: {}", show(&a));
    println!("  B: {}", show(&b));
    let all = (1..=40).all(|m| (1..=40).all(|n| alternating_roots(m, n).unwrap_or(false)));
    println!("alternation for 1 <= m, n <= 40: {all}");
    for v in 3..=8 {
        println!("valency {v}: {}", gamma_v_fraction(v)?);
    }
    Ok(())
}
