use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{det2, place, TropicalCycle, VertexPlace};
use crate::error::{Error, Result};
use crate::scene::Scene;

enum Meet {
    None,
    Transverse(i64),
    Degenerate,
}

fn meet(p1: &[BigRational], q1: &[BigRational], p2: &[BigRational], q2: &[BigRational]) -> Meet {
    let d1: Vec<BigRational> = q1.iter().zip(p1).map(|(a, b)| a - b).collect();
    let d2: Vec<BigRational> = q2.iter().zip(p2).map(|(a, b)| a - b).collect();
    let w: Vec<BigRational> = p2.iter().zip(p1).map(|(a, b)| a - b).collect();
    let den = det2(&d1, &d2);
    if den.is_zero() {
        if !det2(&w, &d1).is_zero() {
            return Meet::None;
        }
        // collinear: overlap test along d1
        let len = d1.iter().map(|x| x * x).fold(BigRational::zero(), |a, b| a + b);
        let t = |p: &[BigRational]| {
            p.iter().zip(p1).zip(&d1).map(|((x, y), d)| (x - y) * d).fold(BigRational::zero(), |a, b| a + b) / &len
        };
        let (a, b) = (t(p2), t(q2));
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        if hi < BigRational::zero() || lo > BigRational::one() {
            return Meet::None;
        }
        return Meet::Degenerate;
    }
    let s = det2(&w, &d2) / &den;
    let u = det2(&w, &d1) / &den;
    let zero = BigRational::zero();
    let one = BigRational::one();
    let inside = |x: &BigRational| x > &zero && x < &one;
    let closed = |x: &BigRational| x >= &zero && x <= &one;
    if inside(&s) && inside(&u) {
        Meet::Transverse(if den.is_positive() { 1 } else { -1 })
    } else if closed(&s) && closed(&u) {
        Meet::Degenerate
    } else {
        Meet::None
    }
}

/// Moves every vertex by a small amount: interior vertices along a fixed
/// generic direction, vertices on codimension-one cells along `ρ`.
fn perturbed(c: &TropicalCycle, scene: &Scene, step: usize) -> Result<TropicalCycle> {
    let eps = BigRational::new(1.into(), (1009 * step as i64).into());
    let dir = [BigRational::one(), BigRational::new(7.into(), 13.into())];
    let mut out = c.clone();
    for v in &mut out.vertices {
        let shift: Vec<BigRational> = match place(scene, v)? {
            VertexPlace::Interior => dir.iter().map(|d| d * &eps).collect(),
            VertexPlace::OnRho { rho, side } => {
                let r = &scene.rhos[rho];
                let l = if side == 0 { &r.lambda_basis[0] } else { &r.lambda_image[0] };
                l.as_slice().iter().map(|&x| BigRational::from_integer(x.into()) * &eps).collect()
            }
        };
        for (x, s) in v.position.iter_mut().zip(shift) {
            *x += s;
        }
    }
    for v in &out.vertices {
        place(scene, v)?;
        if !scene.cells[v.cell].contains(&v.position) {
            return Err(Error::Cycle(format!("perturbation moves vertex {} out of its cell", v.id)));
        }
    }
    Ok(out)
}

fn count(a: &TropicalCycle, b: &TropicalCycle, scene: &Scene) -> Result<Option<i64>> {
    let mut total = 0i64;
    for (i, e1) in a.edges.iter().enumerate() {
        let (p1, q1) = a.edge_points(scene, i)?;
        for (j, e2) in b.edges.iter().enumerate() {
            if e1.cell != e2.cell {
                continue;
            }
            let (p2, q2) = b.edge_points(scene, j)?;
            match meet(&p1, &q1, &p2, &q2) {
                Meet::None => {}
                Meet::Degenerate => return Ok(None),
                Meet::Transverse(sign) => {
                    let x1: Vec<BigRational> = e1.xi.as_slice().iter().map(|&x| BigRational::from_integer(x.into())).collect();
                    let x2: Vec<BigRational> = e2.xi.as_slice().iter().map(|&x| BigRational::from_integer(x.into())).collect();
                    let d = det2(&x1, &x2);
                    total += sign * d.to_integer().to_i64().ok_or_else(|| Error::Cycle("determinant overflow".into()))?;
                }
            }
        }
    }
    Ok(Some(total))
}

/// Intersection number of two cycles on a surface: the sum over transverse
/// intersection points of `sign(d₁, d₂)·det(ξ₁, ξ₂)`, where `dᵢ` are the edge
/// directions. Non-transverse configurations are resolved by moving the
/// second cycle along a fixed sequence of rational displacements.
pub fn intersection_pairing(a: &TropicalCycle, b: &TropicalCycle, scene: &Scene) -> Result<i64> {
    if scene.dimension != 2 {
        return Err(Error::Invalid(format!("intersection pairing needs a surface, scene has dimension {}", scene.dimension)));
    }
    if let Some(n) = count(a, b, scene)? {
        return Ok(n);
    }
    for step in 1..=16 {
        let moved = perturbed(b, scene, step)?;
        if let Some(n) = count(a, &moved, scene)? {
            return Ok(n);
        }
    }
    Err(Error::Cycle("cycles stay non-transverse after perturbation".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::CycleSpec;

    fn scene(name: &str) -> Scene {
        Scene::load(format!("{}/fixtures/{name}.toml", env!("CARGO_MANIFEST_DIR"))).unwrap()
    }

    fn segment_cycle(s: &Scene, id: &str, pts: [(i64, i64); 4], xi: [i64; 2]) -> TropicalCycle {
        let v: Vec<String> = pts
            .iter()
            .enumerate()
            .map(|(i, (x, y))| format!(r#"{{ id = "{i}", cell = "L", position = [{x}, {y}] }}"#))
            .collect();
        let e: Vec<String> = (0..4)
            .map(|i| format!(r#"{{ tail = "{i}", head = "{}", cell = "L", xi = [{}, {}] }}"#, (i + 1) % 4, xi[0], xi[1]))
            .collect();
        let text = format!("id = \"{id}\"\nvertex = [{}]\nedge = [{}]\n", v.join(", "), e.join(", "));
        let spec: CycleSpec = toml::from_str(&text).unwrap();
        TropicalCycle::from_spec(s, &spec).unwrap()
    }

    #[test]
    fn disjoint_zero() {
        let s = scene("kp1");
        let a = segment_cycle(&s, "a", [(-3, -3), (-2, -3), (-2, -2), (-3, -2)], [1, 0]);
        let b = segment_cycle(&s, "b", [(-2, 2), (-1, 2), (-1, 3), (-2, 3)], [0, 1]);
        assert_eq!(intersection_pairing(&a, &b, &s).unwrap(), 0);
    }

    #[test]
    fn meet_signs() {
        let r = |x: i64| BigRational::from_integer(x.into());
        let p = |x: i64, y: i64| vec![r(x), r(y)];
        assert!(matches!(meet(&p(0, 0), &p(2, 0), &p(1, -1), &p(1, 1)), Meet::Transverse(1)));
        assert!(matches!(meet(&p(1, -1), &p(1, 1), &p(0, 0), &p(2, 0)), Meet::Transverse(-1)));
        assert!(matches!(meet(&p(0, 0), &p(2, 0), &p(1, 0), &p(3, 0)), Meet::Degenerate));
        assert!(matches!(meet(&p(0, 0), &p(2, 0), &p(2, 0), &p(3, 1)), Meet::Degenerate));
        assert!(matches!(meet(&p(0, 0), &p(2, 0), &p(0, 1), &p(2, 1)), Meet::None));
    }

    #[test]
    fn single_transverse_crossing() {
        let s = scene("kp1");
        let spec = |id: &str, a: (i64, i64), b: (i64, i64), xi: [i64; 2]| -> CycleSpec {
            toml::from_str(&format!(
                r#"
id = "{id}"
vertex = [{{ id = "a", cell = "L", position = [{}, {}] }}, {{ id = "b", cell = "L", position = [{}, {}] }}]
edge = [{{ tail = "a", head = "b", cell = "L", xi = [{}, {}] }}]
"#,
                a.0, a.1, b.0, b.1, xi[0], xi[1]
            ))
            .unwrap()
        };
        let h = TropicalCycle::from_spec(&s, &spec("h", (-3, 0), (-1, 0), [1, 0])).unwrap();
        let v = TropicalCycle::from_spec(&s, &spec("v", (-2, -1), (-2, 1), [0, 1])).unwrap();
        assert_eq!(intersection_pairing(&h, &v, &s).unwrap(), 1);
        assert_eq!(intersection_pairing(&v, &h, &s).unwrap(), 1);
    }

    #[test]
    fn invariant_loop_self_pairing() {
        let s = scene("focus_focus");
        let c = TropicalCycle::from_scene(&s, Some("invariant")).unwrap();
        assert_eq!(intersection_pairing(&c, &c, &s).unwrap(), 0);
    }

    #[test]
    fn needs_surface() {
        let s = scene("kp1");
        let mut s3 = s.clone();
        s3.dimension = 3;
        let c = TropicalCycle::from_scene(&s, Some("circle")).unwrap();
        assert!(matches!(intersection_pairing(&c, &c, &s3), Err(Error::Invalid(_))));
    }
}
