use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{crossings, place, site_and_order, CycleEdge, CycleVertex, Overrides, TropicalCycle, VertexPlace};
use crate::error::{Error, Result};
use crate::exact::{divisibility_index, gcd_i64, IntVector};
use crate::scene::{int_to_rat, rat_to_int, solve_columns, Scene};

fn fresh_id(c: &TropicalCycle, base: &str) -> String {
    if c.vertex_index(base).is_none() {
        return base.to_string();
    }
    (1..).map(|i| format!("{base}.{i}")).find(|id| c.vertex_index(id).is_none()).expect("unbounded range")
}

/// Puts a cycle in standard position:
///
/// - no edge joins two points of codimension-one cells;
/// - every slab crossing carries a primitive vector that is either tangent
///   to `ρ` or a generator of `Λ_σ/Λ_ρ`, obtained by replacing an edge pair
///   with `ξ = aζ + b·m` by `|a|` copies carrying `±ζ` and `b` copies
///   carrying `m`, crossing at nearby points of the same complement
///   component;
/// - every intersection with a wall is a vertex.
pub fn normalize_cycle(c: &TropicalCycle, scene: &Scene, overrides: &Overrides) -> Result<TropicalCycle> {
    let mut c = c.clone();
    separate_slab_vertices(&mut c, scene)?;
    split_crossings(&mut c, scene, overrides)?;
    split_at_walls(&mut c, scene)?;
    Ok(c)
}

fn separate_slab_vertices(c: &mut TropicalCycle, scene: &Scene) -> Result<()> {
    let on_rho: Vec<bool> = c
        .vertices
        .iter()
        .map(|v| place(scene, v).map(|p| p != VertexPlace::Interior))
        .collect::<Result<_>>()?;
    let two = BigRational::from_integer(2.into());
    for ei in 0..c.edges.len() {
        let e = c.edges[ei].clone();
        if !(on_rho[e.tail] && on_rho[e.head]) {
            continue;
        }
        let (p, q) = c.edge_points(scene, ei)?;
        let mid: Vec<BigRational> = p.iter().zip(&q).map(|(a, b)| (a + b) / &two).collect();
        let id = fresh_id(c, &format!("{}~{}", c.vertices[e.tail].id, c.vertices[e.head].id));
        c.vertices.push(CycleVertex { id, cell: e.cell, position: mid });
        let m = c.vertices.len() - 1;
        c.edges[ei].head = m;
        c.edges.push(CycleEdge { tail: m, head: e.head, cell: e.cell, xi: e.xi });
    }
    Ok(())
}

/// Writes `ξ = Σ wᵢλᵢ + aζ` in the basis of the chart on `side`.
fn decompose(scene: &Scene, rho: usize, piece: usize, side: usize, xi: &IntVector) -> Result<(IntVector, i64, IntVector)> {
    let r = &scene.rhos[rho];
    let (basis, zeta) =
        if side == 0 { (&r.lambda_basis, r.zeta.clone()) } else { (&r.lambda_image, r.pieces[piece].zeta_image.clone()) };
    let mut cols: Vec<Vec<BigRational>> = basis.iter().map(int_to_rat).collect();
    cols.push(int_to_rat(&zeta));
    let coords = solve_columns(&cols, &int_to_rat(xi))
        .and_then(|c| rat_to_int(&c))
        .ok_or_else(|| Error::Scene(format!("rho {}: lambda basis and normal are not a lattice basis", r.id)))?;
    let n = scene.dimension;
    let a = coords.as_slice()[n - 1];
    let w = IntVector::new(coords.as_slice()[..n - 1].to_vec());
    Ok((w, a, zeta))
}

fn split_crossings(c: &mut TropicalCycle, scene: &Scene, overrides: &Overrides) -> Result<()> {
    let events = crossings(c, scene, overrides)?;
    let mut dropped = vec![false; c.edges.len()];
    let mut added: Vec<CycleEdge> = Vec::new();
    for ev in &events {
        let rho = ev.site.rho;
        let r = &scene.rhos[rho];
        if divisibility_index(&ev.xi_in)? == 1 && {
            let (_, a, _) = decompose(scene, rho, ev.site.piece, ev.from_side, &ev.xi_in)?;
            a.abs() <= 1
        } {
            continue;
        }
        let (w, a, zeta) = decompose(scene, rho, ev.site.piece, ev.from_side, &ev.xi_in)?;
        let basis = if ev.from_side == 0 { &r.lambda_basis } else { &r.lambda_image };
        let g = w.as_slice().iter().fold(0, |acc, &x| gcd_i64(acc, x));
        let mut parts: Vec<IntVector> = vec![zeta.scale(a.signum()); a.unsigned_abs() as usize];
        if g != 0 {
            let mut m = IntVector::zeros(scene.dimension);
            for (wi, l) in w.as_slice().iter().zip(basis) {
                m = m.add(&l.scale(wi / g));
            }
            parts.extend(std::iter::repeat_n(m, g.unsigned_abs() as usize));
        }
        let v = &c.vertices[ev.vertex_index];
        let VertexPlace::OnRho { side, .. } = place(scene, v)? else { unreachable!("crossing vertex lies on rho") };
        let step = if side == 0 { &r.lambda_basis[0] } else { &r.lambda_image[0] };
        let points = crossing_points(scene, rho, side, &v.position, step, parts.len(), ev, overrides)?;
        dropped[ev.in_edge] = true;
        dropped[ev.out_edge] = true;
        let (vcell, vid) = (v.cell, v.id.clone());
        let from = c.edges[ev.in_edge].cell;
        let to = c.edges[ev.out_edge].cell;
        for (j, (part, p)) in parts.iter().zip(points).enumerate() {
            let at = if j == 0 {
                ev.vertex_index
            } else {
                let id = fresh_id(c, &format!("{vid}#{j}"));
                c.vertices.push(CycleVertex { id, cell: vcell, position: p.clone() });
                c.vertices.len() - 1
            };
            let (site, m) = site_and_order(scene, rho, side, &p, overrides)?;
            let image = scene.transport_with_shift(&site, ev.from_side, &m, part)?;
            added.push(CycleEdge { tail: ev.source, head: at, cell: from, xi: part.clone() });
            added.push(CycleEdge { tail: at, head: ev.target, cell: to, xi: image });
        }
    }
    let mut edges: Vec<CycleEdge> =
        c.edges.iter().zip(&dropped).filter(|(_, &d)| !d).map(|(e, _)| e.clone()).collect();
    edges.extend(added);
    c.edges = edges;
    Ok(())
}

/// `count` points `p + jδ·step` of `ρ` in the same piece, slab and
/// complement component as `p`, shrinking `δ` until they are.
#[allow(clippy::too_many_arguments)]
fn crossing_points(
    scene: &Scene,
    rho: usize,
    side: usize,
    p: &[BigRational],
    step: &IntVector,
    count: usize,
    ev: &super::CrossingEvent,
    overrides: &Overrides,
) -> Result<Vec<Vec<BigRational>>> {
    let mut delta = BigRational::new(BigRational::one().to_integer(), 16.into());
    let slab_id = &ev.slab;
    'shrink: for _ in 0..40 {
        let mut pts = Vec::with_capacity(count);
        for j in 0..count {
            let s = &delta * BigRational::from_integer(j.into());
            let q: Vec<BigRational> =
                p.iter().zip(step.as_slice()).map(|(x, &d)| x + &s * BigRational::from_integer(d.into())).collect();
            let ok = match site_and_order(scene, rho, side, &q, overrides) {
                Ok((site, m)) => {
                    site.piece == ev.site.piece
                        && m == ev.order
                        && scene.slab_at(&site).map(|b| &b.id == slab_id).unwrap_or(false)
                }
                Err(_) => false,
            };
            if !ok {
                delta /= BigRational::from_integer(2.into());
                continue 'shrink;
            }
            pts.push(q);
        }
        return Ok(pts);
    }
    Err(Error::Cycle(format!("no room to split the crossing at vertex {}", ev.vertex)))
}

fn split_at_walls(c: &mut TropicalCycle, scene: &Scene) -> Result<()> {
    let mut ei = 0;
    while ei < c.edges.len() {
        let e = c.edges[ei].clone();
        let (p, q) = c.edge_points(scene, ei)?;
        let mut cuts: Vec<BigRational> = Vec::new();
        for w in scene.walls.iter().filter(|w| w.cell == e.cell) {
            let (a, b) = (w.side(&p), w.side(&q));
            if a.is_zero() && b.is_zero() {
                if w.in_region(&p) || w.in_region(&q) {
                    return Err(Error::Forbidden(format!("a cycle edge runs along wall {}", w.id)));
                }
                continue;
            }
            if a.is_zero() || b.is_zero() || a.is_positive() == b.is_positive() {
                continue;
            }
            let s = &a / (&a - &b);
            let r: Vec<BigRational> = p.iter().zip(&q).map(|(x, y)| x + &s * (y - x)).collect();
            if w.in_region_strictly(&r) {
                cuts.push(s);
            } else if w.in_region(&r) {
                return Err(Error::Forbidden(format!("a cycle edge meets the boundary of wall {}", w.id)));
            }
        }
        if cuts.is_empty() {
            ei += 1;
            continue;
        }
        cuts.sort();
        cuts.dedup();
        let mut prev = e.tail;
        let base = format!("{}|{}", c.vertices[e.tail].id, c.vertices[e.head].id);
        for s in cuts {
            let r: Vec<BigRational> = p.iter().zip(&q).map(|(x, y)| x + &s * (y - x)).collect();
            let id = fresh_id(c, &base);
            c.vertices.push(CycleVertex { id, cell: e.cell, position: r });
            let v = c.vertices.len() - 1;
            c.edges.push(CycleEdge { tail: prev, head: v, cell: e.cell, xi: e.xi.clone() });
            prev = v;
        }
        c.edges[ei].tail = prev;
        ei += 1;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycle::{check_balancing, crossings};
    use crate::scene::CycleSpec;

    fn kp1() -> Scene {
        Scene::load(format!("{}/fixtures/kp1.toml", env!("CARGO_MANIFEST_DIR"))).unwrap()
    }

    fn middle_loop(s: &Scene, xi: [i64; 2]) -> TropicalCycle {
        let text = format!(
            r#"
id = "middle"
vertex = [
  {{ id = "v", cell = "L", position = [-1, "-1/2"] }},
  {{ id = "c1", cell = "L", position = [0, "-1/2"] }},
  {{ id = "r", cell = "R", position = [1, 0] }},
  {{ id = "c2", cell = "L", position = [0, "1/2"] }},
]
edge = [
  {{ tail = "v", head = "c1", cell = "L", xi = [{a}, {b}] }},
  {{ tail = "c1", head = "r", cell = "R", xi = [{a}, {b}] }},
  {{ tail = "r", head = "c2", cell = "R", xi = [{a}, {b}] }},
  {{ tail = "c2", head = "v", cell = "L", xi = [{a}, {b}] }},
]
"#,
            a = xi[0],
            b = xi[1]
        );
        let spec: CycleSpec = toml::from_str(&text).unwrap();
        TropicalCycle::from_spec(s, &spec).unwrap()
    }

    #[test]
    fn normalized_fixture_unchanged() {
        let s = kp1();
        let c = TropicalCycle::from_scene(&s, Some("circle")).unwrap();
        assert_eq!(normalize_cycle(&c, &s, &Overrides::new()).unwrap(), c);
    }

    #[test]
    fn split_two_zeta_one_lambda() {
        let s = kp1();
        let none = Overrides::new();
        let c = middle_loop(&s, [-2, 1]);
        assert!(check_balancing(&c, &s, &none).unwrap());
        let n = normalize_cycle(&c, &s, &none).unwrap();
        assert!(check_balancing(&n, &s, &none).unwrap());
        let from_v: Vec<&IntVector> = n.edges.iter().filter(|e| e.tail == 0).map(|e| &e.xi).collect();
        let mut got: Vec<Vec<i64>> = from_v.iter().map(|x| x.as_slice().to_vec()).collect();
        got.sort();
        assert_eq!(got, vec![vec![-1, 0], vec![-1, 0], vec![0, 1]]);
        for ev in crossings(&n, &s, &none).unwrap() {
            assert_eq!(divisibility_index(&ev.xi_in).unwrap(), 1);
        }
        assert_eq!(crossings(&n, &s, &none).unwrap().len(), 6);
    }
}
