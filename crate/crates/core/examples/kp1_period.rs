//! Period of the circle in the two-chart degeneration of P^1.

use tropper::cycle::{Overrides, TropicalCycle};
use tropper::period::{pair_c1, period, per_vertex_report};
use tropper::scene::Scene;

fn main() -> tropper::Result<()> {
    let scene = Scene::load(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/kp1.toml"))?;
    let cycle = TropicalCycle::from_scene(&scene, Some("circle"))?;
    let none = Overrides::new();
    for v in per_vertex_report(&cycle, &scene, &none, 4)? {
        println!("{:>4}  order {:>2}  weight {:>2}  {}", v.vertex, v.order, v.weight, v.contribution);
    }
    println!("c1 pairing: {}", pair_c1(&cycle, &scene, &none)?);
    println!("period: {}", period(&cycle, &scene, &none, 4)?);
    Ok(())
}
