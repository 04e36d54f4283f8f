//! Homology of an annulus with focus-focus monodromy in its local system.

use tropper::cycle::{twisted_homology, TwistedComplex, TwistedComplexFile};

fn main() -> tropper::Result<()> {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/annulus_ff.toml"))
        .map_err(|e| tropper::Error::Invalid(e.to_string()))?;
    let file: TwistedComplexFile = toml::from_str(&text).map_err(|e| tropper::Error::Invalid(e.to_string()))?;
    let complex = TwistedComplex::new(&file)?;
    for q in 0..=2 {
        let h = twisted_homology(&complex, q)?;
        println!("H{q}: rank {} torsion {:?}", h.rank, h.torsion);
    }
    Ok(())
}
