#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use tropper::cycle::TropicalCycle;
use tropper::scene::{CycleSpec, Scene};

pub fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

pub fn scene(name: &str) -> Scene {
    Scene::load(fixture(&format!("{name}.toml"))).unwrap()
}

/// The K_P1 scene with gluing `g` on the first chart coordinate of `R`.
pub fn kp1_glued() -> Scene {
    let text = std::fs::read_to_string(fixture("kp1.toml")).unwrap();
    let text = text.replacen("k = 4\n", "k = 4\ngluing_generators = [\"g\"]\n", 1)
        + "\n[[gluing]]\ncell = \"R\"\nrho = \"rho\"\nvalues = [\"g\", \"1\"]\n";
    Scene::from_toml_str(&text).unwrap()
}

/// A rational in `[lo, hi]` with denominator 16, avoiding 0 where the two
/// pieces of the slab meet.
fn rat(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> String {
    let den = 16i64;
    let a = (lo * den as f64).ceil() as i64;
    let b = (hi * den as f64).floor() as i64;
    let n = loop {
        let n = rng.gen_range(a..=b);
        if n != 0 {
            break n;
        }
    };
    format!("\"{n}/{den}\"")
}

struct Builder {
    vertices: Vec<String>,
    edges: Vec<String>,
}

impl Builder {
    fn v(&mut self, id: &str, cell: &str, w: i64, u: &str) {
        self.vertices.push(format!("{{ id = \"{id}\", cell = \"{cell}\", position = [{w}, {u}] }}"));
    }
    fn e(&mut self, tail: &str, head: &str, cell: &str, xi: (i64, i64)) {
        self.edges.push(format!("{{ tail = \"{tail}\", head = \"{head}\", cell = \"{cell}\", xi = [{}, {}] }}", xi.0, xi.1));
    }
}

/// Complement regions of the K_P1 slab along `ρ`, as `(order, lo, hi)` in
/// the `u` coordinate, kept away from the amoeba points `log 0.3` and `log 4`.
const REGIONS: [(i64, f64, f64); 3] = [(-1, -3.5, -1.5), (0, -0.9, 1.1), (1, 1.7, 3.5)];

/// A random balanced cycle on the K_P1 scene: the two-leg circle scaled by
/// a random factor with random crossing heights, plus a loop through one
/// complement region with a random section.
pub fn random_kp1_cycle(s: &Scene, rng: &mut ChaCha8Rng) -> TropicalCycle {
    let c = rng.gen_range(1..=3i64);
    let mut b = Builder { vertices: Vec::new(), edges: Vec::new() };
    let (lo_m1, hi_m1) = (REGIONS[0].1, REGIONS[0].2);
    let (lo0, hi0) = (REGIONS[1].1, REGIONS[1].2);
    let (lo1, hi1) = (REGIONS[2].1, REGIONS[2].2);
    let c1 = rat(rng, lo_m1, hi_m1);
    let c2 = rat(rng, lo0, -0.1);
    let c3 = rat(rng, lo1, hi1);
    let c4 = rat(rng, 0.1, hi0);
    b.v("v0", "L", -1, "\"-3/2\"");
    b.v("v1", "L", -1, "\"3/2\"");
    b.v("c1", "L", 0, &c1);
    b.v("r1", "R", 1, "\"-3/2\"");
    b.v("c2", "L", 0, &c2);
    b.v("c3", "L", 0, &c3);
    b.v("r2", "R", 1, "\"3/2\"");
    b.v("c4", "L", 0, &c4);
    b.e("v0", "c1", "L", (-c, 0));
    b.e("c1", "r1", "R", (-c, -c));
    b.e("r1", "c2", "R", (-c, -c));
    b.e("c2", "v0", "L", (-c, -c));
    b.e("v0", "v1", "L", (0, -c));
    b.e("v1", "c3", "L", (-c, 0));
    b.e("c3", "r2", "R", (-c, c));
    b.e("r2", "c4", "R", (-c, c));
    b.e("c4", "v1", "L", (-c, c));
    let (m, lo, hi) = REGIONS[rng.gen_range(0..3)];
    let mid = (lo + hi) / 2.0;
    let y1 = rat(rng, lo, mid - 0.1);
    let y2 = rat(rng, mid + 0.1, hi);
    let mut p = 0;
    while p == 0 {
        p = rng.gen_range(-3..=3i64);
    }
    let q = rng.gen_range(-3..=3i64);
    let yb = rat(rng, -3.0, 3.0);
    b.v("e0", "L", -2, &yb);
    b.v("e1", "L", 0, &y1);
    b.v("e2", "R", 2, &yb);
    b.v("e3", "L", 0, &y2);
    b.e("e0", "e1", "L", (p, q));
    b.e("e1", "e2", "R", (p, q - p * m));
    b.e("e2", "e3", "R", (p, q - p * m));
    b.e("e3", "e0", "L", (p, q));
    let text = format!("id = \"random\"\nvertex = [{}]\nedge = [{}]\n", b.vertices.join(", "), b.edges.join(", "));
    let spec: CycleSpec = toml::from_str(&text).unwrap();
    TropicalCycle::from_spec(s, &spec).unwrap()
}
