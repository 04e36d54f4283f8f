//! Consistency of three walls around a loop, and failure without the third.

use tropper::scene::{rationals, Scene};
use tropper::walls::check_consistency_codim0;

fn main() -> tropper::Result<()> {
    let scene = Scene::load(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/ks.toml"))?;
    let lp = &scene.source().loops[0];
    let cell = scene.cell_index(&lp.cell)?;
    let polygon = lp.points.iter().map(|p| rationals(p)).collect::<tropper::Result<Vec<_>>>()?;
    for k in 1..=3 {
        println!("k = {k}: consistent {}", check_consistency_codim0(&scene, cell, &polygon, k)?);
    }
    let mut cut = scene.clone();
    cut.walls.retain(|w| w.id != "wxy");
    println!("without wxy, k = 2: consistent {}", check_consistency_codim0(&cut, cell, &polygon, 2)?);
    Ok(())
}
