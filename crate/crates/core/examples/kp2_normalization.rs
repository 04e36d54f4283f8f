//! Cubic slab: its normalization and the period before and after.

use tropper::cycle::{Overrides, TropicalCycle};
use tropper::period::{normalize_scene_slabs, period, slab_normalization};
use tropper::scene::Scene;

fn main() -> tropper::Result<()> {
    let scene = Scene::load(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/kp2.toml"))?;
    let none = Overrides::new();
    let k = 3;
    let g = slab_normalization(&scene, &scene.slabs[0], &none, k)?;
    println!("slab correction: {g}");

    let green = TropicalCycle::from_scene(&scene, Some("green"))?;
    println!("period: {}", period(&green, &scene, &none, k)?);

    let normalized = normalize_scene_slabs(&scene, &none, k)?;
    println!("normalized slab: {}", normalized.slabs[0].function);
    let green = TropicalCycle::from_scene(&normalized, Some("green"))?;
    println!("normalized period: {}", period(&green, &normalized, &none, k)?);
    Ok(())
}
