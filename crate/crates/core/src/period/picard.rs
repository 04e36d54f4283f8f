use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::{pair_c1, pair_gluing};
use crate::cycle::{Overrides, TropicalCycle};
use crate::error::{Error, Result};
use crate::exact::lcm_orders;
use crate::exact::{kernel_sublattice, IntMatrix, IntVector, Lattice, MultiplicativeValue};
use crate::scene::Scene;

/// A generator of `H₁(B, ι_*Λ)` described by its two pairings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PicardGenerator {
    pub id: String,
    pub c1: i64,
    pub gluing: MultiplicativeValue,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PicardGeneratorSpec {
    pub id: String,
    pub c1: i64,
    #[serde(default = "one")]
    pub gluing: String,
}

fn one() -> String {
    "1".into()
}

/// File form of precomputed pairings.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PicardFile {
    /// Free generators allowed in gluing values; any name is accepted when
    /// absent.
    #[serde(default)]
    pub gluing_generators: Option<Vec<String>>,
    #[serde(rename = "generator")]
    pub generators: Vec<PicardGeneratorSpec>,
}

impl PicardFile {
    pub fn parse(text: &str) -> Result<Vec<PicardGenerator>> {
        let f: PicardFile = toml::from_str(text)?;
        f.generators
            .iter()
            .map(|g| {
                let s = MultiplicativeValue::parse(&g.gluing)?;
                if let Some(allowed) = &f.gluing_generators {
                    if let Some((name, _)) = s.exponents().find(|(n, _)| !allowed.iter().any(|a| a == n)) {
                        return Err(Error::Invalid(format!("generator {} pairs to unknown gluing generator {name}", g.id)));
                    }
                }
                Ok(PicardGenerator { id: g.id.clone(), c1: g.c1, gluing: s })
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PicardLattice {
    pub rank: usize,
    /// Basis in the coordinates of the generators.
    pub basis: Vec<IntVector>,
}

/// The sublattice `{β : ⟨c₁, β⟩ = 0, ⟨s, β⟩ = 1}` of the lattice spanned by
/// the generators, in generator coordinates.
pub fn picard_sublattice(gens: &[PicardGenerator]) -> Result<PicardLattice> {
    let r = gens.len();
    let mut names: Vec<&str> = gens.iter().flat_map(|g| g.gluing.exponents().map(|(n, _)| n)).collect();
    names.sort();
    names.dedup();
    let l = lcm_orders(gens.iter().map(|g| &g.gluing));
    let torsion = l != BigInt::from(1);
    let cols = r + usize::from(torsion);
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    rows.push(gens.iter().map(|g| BigInt::from(g.c1)).chain(torsion.then(BigInt::default)).collect());
    for n in &names {
        rows.push(gens.iter().map(|g| BigInt::from(g.gluing.exponent(n))).chain(torsion.then(BigInt::default)).collect());
    }
    if torsion {
        let mut row: Vec<BigInt> = gens.iter().map(|g| (g.gluing.angle() * &l).to_integer()).collect();
        row.push(-l.clone());
        rows.push(row);
    }
    let m = IntMatrix::from_rows(rows, cols);
    let kernel = kernel_sublattice(&m);
    let projected: Vec<IntVector> = kernel.iter().map(|v| IntVector::new(v.as_slice()[..r].to_vec())).collect();
    let lattice = Lattice::from_generators(&projected, r);
    Ok(PicardLattice { rank: lattice.rank(), basis: lattice.basis() })
}

/// Pairings of cycles, for [`picard_sublattice`].
pub fn picard_from_cycles(cycles: &[TropicalCycle], scene: &Scene, overrides: &Overrides) -> Result<Vec<PicardGenerator>> {
    cycles
        .iter()
        .map(|c| {
            Ok(PicardGenerator {
                id: c.id.clone(),
                c1: pair_c1(c, scene, overrides)?,
                gluing: pair_gluing(c, scene, overrides)?,
            })
        })
        .collect()
}

/// Whether `v` satisfies both conditions.
pub fn in_picard(gens: &[PicardGenerator], v: &[i64]) -> bool {
    let c1: i64 = gens.iter().zip(v).map(|(g, &x)| g.c1 * x).sum();
    let s = gens.iter().zip(v).fold(MultiplicativeValue::identity(), |acc, (g, &x)| acc.mul(&g.gluing.pow(x)));
    c1 == 0 && s.is_identity()
}
