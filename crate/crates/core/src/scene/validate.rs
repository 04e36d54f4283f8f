use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::Scene;
use crate::exact::{divisibility_index, IntMatrix, IntVector};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: String,
    pub message: String,
}

impl Violation {
    pub fn new(kind: &str, message: String) -> Self {
        Violation { kind: kind.to_string(), message }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.kind, self.message)
    }
}

fn det_of(cols: &[&IntVector]) -> BigInt {
    let rows: Vec<Vec<i64>> = cols.iter().map(|c| c.as_slice().to_vec()).collect();
    IntMatrix::from_rows_i64(&rows, cols.len()).det()
}

/// Checks the well-formedness of a scene and returns every violation found.
pub fn validate_scene(s: &Scene) -> Vec<Violation> {
    let mut out = s.load_notes.clone();
    let mut push = |kind: &str, msg: String| out.push(Violation::new(kind, msg));
    let n = s.dimension;
    if !s.parameters.iter().any(|p| p == &s.series_var) {
        push("parameters", format!("series variable {} is not among the parameters", s.series_var));
    }
    for (i, c) in s.cells.iter().enumerate() {
        if s.cells[..i].iter().any(|d| d.id == c.id) {
            push("cell", format!("duplicate cell id {}", c.id));
        }
        if c.facets.len() < n + 1 {
            push("cell", format!("cell {} has only {} facets", c.id, c.facets.len()));
        }
        for (fi, f) in c.facets.iter().enumerate() {
            if f.normal.is_zero() {
                push("cell", format!("cell {} facet {fi} has zero normal", c.id));
                continue;
            }
            let glued: Vec<_> = s
                .rhos
                .iter()
                .filter(|r| (0..r.cells.len()).any(|k| r.cells[k] == i && r.facets[k] == fi))
                .collect();
            let on_boundary = c.boundary.contains(&fi);
            match (glued.len(), on_boundary) {
                (0, false) => push(
                    "facet",
                    format!("facet {fi} of cell {} is neither glued nor on the boundary", c.id),
                ),
                (0, true) => {}
                (1, false) => {}
                (1, true) if glued[0].boundary => {}
                (_, true) => push("facet", format!("facet {fi} of cell {} is glued and on the boundary", c.id)),
                (_, false) => push("facet", format!("facet {fi} of cell {} is glued more than once", c.id)),
            }
        }
    }
    for r in &s.rhos {
        if r.cells.len() == 1 && !r.boundary {
            push("rho", format!("rho {} has one incident maximal cell and is not on the boundary", r.id));
        }
        if r.cells.len() == 2 && r.boundary {
            push("rho", format!("rho {} has two incident cells but is marked as boundary", r.id));
        }
        for side in 0..r.cells.len() {
            let cell = &s.cells[r.cells[side]];
            let facet = &cell.facets[r.facets[side]];
            let (basis, origin) = if side == 0 { (&r.lambda_basis, &r.origin) } else { (&r.lambda_image, &r.origin_image) };
            for l in basis {
                if facet.normal.dot(l) != 0 {
                    push("rho", format!("rho {}: lambda vector {l} is not tangent to facet of {}", r.id, cell.id));
                }
            }
            if !facet.slack(origin).is_zero() {
                push("rho", format!("rho {}: origin is not on the facet of {}", r.id, cell.id));
            }
            let normals: Vec<IntVector> = if side == 0 {
                vec![r.zeta.clone()]
            } else {
                r.pieces.iter().map(|p| p.zeta_image.clone()).collect()
            };
            for z in &normals {
                let mut cols: Vec<&IntVector> = basis.iter().collect();
                cols.push(z);
                if det_of(&cols).abs() != BigInt::one() {
                    push("rho", format!("rho {}: lambda basis and {z} do not form a lattice basis in {}", r.id, cell.id));
                }
                let d = facet.normal.dot(z);
                let ok = if side == 0 { d < 0 } else { d > 0 };
                if !ok {
                    push(
                        "rho",
                        format!("rho {}: normal vector {z} has the wrong orientation relative to {}", r.id, cell.id),
                    );
                }
            }
        }
        if r.cells.len() == 2 && s.oriented {
            let mut src: Vec<&IntVector> = r.lambda_basis.iter().collect();
            src.push(&r.zeta);
            let ds = det_of(&src);
            for p in &r.pieces {
                let mut dst: Vec<&IntVector> = r.lambda_image.iter().collect();
                dst.push(&p.zeta_image);
                if det_of(&dst) != ds {
                    push("orientation", format!("rho {} piece {}: transition reverses orientation", r.id, p.id));
                }
            }
        }
        for p in &r.pieces {
            match p.kappa {
                None => push("kink", format!("no kink on piece {} of rho {}", p.id, r.id)),
                Some(k) if k <= 0 => push("kink", format!("kink {k} on piece {} of rho {} is not positive", p.id, r.id)),
                _ => {}
            }
        }
    }
    for &(c, ri, _) in s.gluing.keys() {
        let r = &s.rhos[ri];
        if r.side_of(c).is_none() {
            push("gluing", format!("cell {} is not incident to rho {}", s.cells[c].id, r.id));
        }
    }
    // s_σ and s_σ' agree on Λ_ρ
    for (ri, r) in s.rhos.iter().enumerate() {
        if r.cells.len() != 2 {
            continue;
        }
        for p in 0..r.pieces.len() {
            for (l, li) in r.lambda_basis.iter().zip(&r.lambda_image) {
                let a = s.gluing_value(r.cells[0], ri, p, l);
                let b = s.gluing_value(r.cells[1], ri, p, li);
                if a != b {
                    push(
                        "gluing",
                        format!("gluing on rho {} piece {} disagrees on {l}: {a} vs {b}", r.id, r.pieces[p].id),
                    );
                }
            }
        }
    }
    for slab in &s.slabs {
        let r = &s.rhos[slab.rho];
        for v in slab.function.variables() {
            if !r.lambda_names.contains(&v) && !s.parameters.contains(&v) {
                push("slab", format!("slab {}: unknown variable {v}", slab.id));
            }
        }
        if slab.function.is_zero() {
            push("slab", format!("slab {} has zero function", slab.id));
        }
    }
    for (ri, r) in s.rhos.iter().enumerate() {
        if r.cells.len() != 2 {
            continue;
        }
        for (pi, p) in r.pieces.iter().enumerate() {
            if !s.slabs.iter().any(|b| b.rho == ri && b.piece.is_none_or(|q| q == pi)) {
                push("slab", format!("piece {} of rho {} carries no slab", p.id, r.id));
            }
        }
    }
    for w in &s.walls {
        let cell = &s.cells[w.cell];
        if divisibility_index(&w.normal).map_or(true, |g| g != 1) {
            push("wall", format!("wall {}: normal {} is not primitive", w.id, w.normal));
        }
        if w.normal.dot(&w.exponent) != 0 {
            push("wall", format!("wall {}: exponent {} is not tangent to the wall", w.id, w.exponent));
        }
        if w.t_order <= 0 {
            push("wall", format!("wall {}: function has no positive power of {}", w.id, s.series_var));
        }
        for v in w.function.variables() {
            if !cell.coordinates.contains(&v) && !s.parameters.contains(&v) {
                push("wall", format!("wall {}: unknown variable {v}", w.id));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQUARES: &str = r#"
dimension = 2
series_var = "t"
parameters = ["t"]

[[maximal_cell]]
id = "A"
facets = [[1, 0, 1], [-1, 0, 0], [0, 1, 1], [0, -1, 0]]
boundary = [1, 2, 3]

[[maximal_cell]]
id = "B"
facets = [[-1, 0, -1], [1, 0, 2], [0, 1, 1], [0, -1, 0]]
boundary = [1, 2, 3]

[[rho]]
id = "e"
cells = ["A", "B"]
facets = [0, 0]
lambda_names = ["u"]
lambda_basis = [[0, 1]]
origin = [1, 0]
zeta = [-1, 0]

[[rho.piece]]
id = "all"
zeta_image = [-1, 0]

[[kink]]
rho = "e"
kappa = KAPPA

[[slab]]
id = "f"
rho = "e"
function = "1 + u"
"#;

    fn squares(kappa: i64) -> Scene {
        Scene::from_toml_str(&SQUARES.replace("KAPPA", &kappa.to_string())).unwrap()
    }

    #[test]
    fn two_squares_valid() {
        let v = validate_scene(&squares(1));
        assert!(v.is_empty(), "{v:?}");
    }

    #[test]
    fn zero_kink_rejected() {
        let v = validate_scene(&squares(0));
        assert!(v.iter().any(|x| x.kind == "kink"), "{v:?}");
    }

    #[test]
    fn lonely_rho_needs_boundary() {
        let text = SQUARES.replace("KAPPA", "1").replace(r#"cells = ["A", "B"]"#, r#"cells = ["A"]"#).replace(
            "facets = [0, 0]",
            "facets = [0]",
        );
        let s = Scene::from_toml_str(&text).unwrap();
        let v = validate_scene(&s);
        assert!(v.iter().any(|x| x.kind == "rho" && x.message.contains("not on the boundary")), "{v:?}");
    }

    #[test]
    fn wrong_orientation_reported() {
        let text = SQUARES.replace("KAPPA", "1").replace("zeta = [-1, 0]", "zeta = [1, 0]");
        let s = Scene::from_toml_str(&text).unwrap();
        assert!(validate_scene(&s).iter().any(|x| x.message.contains("orientation")));
    }

    #[test]
    fn shipped_fixtures_valid() {
        for name in ["kp1", "focus_focus", "ks", "kp2", "kp2_local"] {
            let path = format!("{}/fixtures/{name}.toml", env!("CARGO_MANIFEST_DIR"));
            let s = Scene::load(&path).unwrap();
            let v = validate_scene(&s);
            assert!(v.is_empty(), "{name}: {v:?}");
        }
    }
}
