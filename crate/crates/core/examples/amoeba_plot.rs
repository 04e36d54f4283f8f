//! Raster of the amoeba of the cubic slab, written as SVG to the temp dir.

use num_complex::Complex64;
use tropper::amoeba::{amoeba_raster, SpecializedLaurent};

fn main() -> tropper::Result<()> {
    let one = Complex64::new(1.0, 0.0);
    let f = SpecializedLaurent::new(
        2,
        vec![(vec![0, 0], one), (vec![1, 0], one), (vec![0, 1], one), (vec![-1, -1], Complex64::new(0.001, 0.0))],
    )?;
    let raster = amoeba_raster(&f, &[-5.0, -5.0], &[5.0, 5.0], 48)?;
    let path = std::env::temp_dir().join("tropper_amoeba.svg");
    std::fs::write(&path, raster.to_svg()).map_err(|e| tropper::Error::Invalid(e.to_string()))?;
    let inside = raster.inside.iter().filter(|&&b| b).count();
    println!("{inside} of {} cells on the amoeba; svg at {}", raster.inside.len(), path.display());
    Ok(())
}
