//! Normalizing a cycle leaves its pairings and period unchanged.

use tropper::cycle::{normalize_cycle, Overrides, TropicalCycle};
use tropper::period::{pair_c1, period};
use tropper::scene::Scene;

fn main() -> tropper::Result<()> {
    let scene = Scene::load(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/kp2_local.toml"))?;
    let none = Overrides::new();
    let c = TropicalCycle::from_scene(&scene, Some("tripod"))?;
    let n = normalize_cycle(&c, &scene, &none)?;
    println!("vertices {} -> {}", c.vertices.len(), n.vertices.len());
    println!("c1 {} -> {}", pair_c1(&c, &scene, &none)?, pair_c1(&n, &scene, &none)?);
    println!("period {}", period(&c, &scene, &none, 3)?);
    println!("period {}", period(&n, &scene, &none, 3)?);
    Ok(())
}
