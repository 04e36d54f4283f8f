//! Picard sublattice from precomputed pairings.

use tropper::period::{in_picard, picard_sublattice, PicardFile};

fn main() -> tropper::Result<()> {
    for name in ["picard4", "picard20", "picard20_torsion"] {
        let path = format!("{}/fixtures/{name}.toml", env!("CARGO_MANIFEST_DIR"));
        let text = std::fs::read_to_string(path).map_err(|e| tropper::Error::Invalid(e.to_string()))?;
        let gens = PicardFile::parse(&text)?;
        let lattice = picard_sublattice(&gens)?;
        println!("{name}: {} generators, rank {}", gens.len(), lattice.rank);
        if gens.len() == 4 {
            for b in &lattice.basis {
                println!("  basis {:?}", b.as_slice());
            }
            println!("  (1,0,0,0) in lattice: {}", in_picard(&gens, &[1, 0, 0, 0]));
        }
    }
    Ok(())
}
