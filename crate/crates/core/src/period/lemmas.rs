use std::collections::BTreeSet;

use num_rational::BigRational;

use crate::error::{Error, Result};

/// Fractional part of `(2πi)^{-n}∫_{Γ_v}Ω` at a vertex of the given
/// valency: `1/2` for odd valency, `0` for even.
pub fn gamma_v_fraction(valency: u32) -> Result<BigRational> {
    if valency < 3 {
        return Err(Error::Invalid(format!("valency {valency} is below 3")));
    }
    Ok(BigRational::new((valency % 2).into(), 2.into()))
}

fn roots(k: u32) -> impl Iterator<Item = BigRational> {
    (0..k).map(move |j| BigRational::new(j.into(), k.into()))
}

/// Angles in `[0, 1)` of `A = μ_m ∪ μ_n` and `B = μ_{m+n} \ A`, sorted.
pub fn root_sets(m: u32, n: u32) -> Result<(Vec<BigRational>, Vec<BigRational>)> {
    if m == 0 || n == 0 {
        return Err(Error::Invalid(format!("orders must be positive, got ({m}, {n})")));
    }
    let a: BTreeSet<BigRational> = roots(m).chain(roots(n)).collect();
    let b: BTreeSet<BigRational> = roots(m + n).filter(|x| !a.contains(x)).collect();
    Ok((a.into_iter().collect(), b.into_iter().collect()))
}

/// Whether the points of `A` and `B` alternate around the circle.
pub fn alternating_roots(m: u32, n: u32) -> Result<bool> {
    let (a, b) = root_sets(m, n)?;
    if a.len() != b.len() {
        return Ok(false);
    }
    let mut all: Vec<(&BigRational, bool)> = a.iter().map(|x| (x, true)).chain(b.iter().map(|x| (x, false))).collect();
    all.sort();
    // cyclic: an even number of strictly alternating points wraps around correctly
    Ok(all.windows(2).all(|w| w[0].1 != w[1].1 && w[0].0 != w[1].0))
}
