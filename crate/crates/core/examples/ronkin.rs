//! Ronkin function of the cubic slab, as a series and by quadrature.

use num_complex::Complex64;
use tropper::amoeba::{complement_order, ronkin_numeric, RonkinOptions, SpecializedLaurent};
use tropper::cycle::Overrides;
use tropper::period::ronkin_series;
use tropper::scene::Scene;

fn main() -> tropper::Result<()> {
    let scene = Scene::load(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/kp2.toml"))?;
    let slab = &scene.slabs[0];
    let names = &scene.rhos[slab.rho].lambda_names;
    let mut vals = scene.numeric_values(&Overrides::new());
    vals.insert("s".into(), Complex64::new(0.001, 0.0));
    let g = SpecializedLaurent::from_laurent(&slab.function, names, &vals)?;
    for x in [[-2.3, -2.3], [1.5, -1.0], [-1.0, 1.5]] {
        let m = complement_order(&g, &x)?;
        let series = ronkin_series(&slab.function, &m, &x, names, &scene.parameters, &scene.series_var, &vals, 3)?;
        let numeric = ronkin_numeric(&g, &m, &x, RonkinOptions::default())?;
        let approx = series.value.series.eval(&vals)?.re;
        println!("x = {x:?}  order {m}  series {} = {approx:.6}  quadrature {:.6}", series.value, numeric.re);
    }
    Ok(())
}
