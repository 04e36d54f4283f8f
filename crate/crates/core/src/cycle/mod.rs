//! Tropical one-cycles: balanced graphs in `B` carrying integral tangent
//! vectors, their crossings with slabs, normalization, twisted homology
//! and the intersection pairing on surfaces.

mod crossing;
mod homology;
mod normalize;
mod pairing;

use std::collections::HashMap;
use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::IntVector;
use crate::scene::{rationals, CycleSpec, EdgeSpec, Num, VertexSpec};
use crate::scene::{RhoSite, Scene, TransportMode};

pub use crossing::{crossings, CrossingEvent};
pub use homology::{twisted_homology, HomologyGroup, MonodromySpec, TwistedComplex, TwistedComplexFile};
pub use normalize::normalize_cycle;
pub use pairing::intersection_pairing;

/// Parameter values overriding those declared in the scene.
pub type Overrides = HashMap<String, Complex64>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleVertex {
    pub id: String,
    pub cell: usize,
    pub position: Vec<BigRational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleEdge {
    pub tail: usize,
    pub head: usize,
    pub cell: usize,
    pub xi: IntVector,
}

/// A graph in `B` with an integral tangent vector on every edge, written in
/// the chart of the maximal cell containing the edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropicalCycle {
    pub id: String,
    pub vertices: Vec<CycleVertex>,
    pub edges: Vec<CycleEdge>,
}

/// Where a vertex sits relative to the codimension-one cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VertexPlace {
    Interior,
    /// On `rho`, seen from the vertex's own cell on `side`.
    OnRho { rho: usize, side: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BalancingDefect {
    pub vertex: String,
    pub defect: IntVector,
}

impl fmt::Display for BalancingDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "vertex {}: defect {}", self.vertex, self.defect)
    }
}

impl TropicalCycle {
    /// Builds a cycle from its file form and checks its geometry: every edge
    /// lies in its cell, has distinct endpoints and a nonzero vector, and
    /// does not run inside a codimension-one cell.
    pub fn from_spec(scene: &Scene, spec: &CycleSpec) -> Result<TropicalCycle> {
        let n = scene.dimension;
        let mut vertices = Vec::new();
        for v in &spec.vertices {
            if vertices.iter().any(|w: &CycleVertex| w.id == v.id) {
                return Err(Error::Cycle(format!("duplicate vertex {}", v.id)));
            }
            let position = rationals(&v.position)?;
            if position.len() != n {
                return Err(Error::Invalid(format!("vertex {} has {} coordinates", v.id, position.len())));
            }
            let cell = scene.cell_index(&v.cell)?;
            if !scene.cells[cell].contains(&position) {
                return Err(Error::Cycle(format!("vertex {} is not in cell {}", v.id, v.cell)));
            }
            vertices.push(CycleVertex { id: v.id.clone(), cell, position });
        }
        let find = |id: &str| {
            vertices
                .iter()
                .position(|v| v.id == id)
                .ok_or_else(|| Error::Cycle(format!("unknown vertex {id}")))
        };
        let mut edges = Vec::new();
        for e in &spec.edges {
            let tail = find(&e.tail)?;
            let head = find(&e.head)?;
            let cell = scene.cell_index(&e.cell)?;
            if e.xi.len() != n {
                return Err(Error::Invalid(format!("edge {}->{} has a {}-vector", e.tail, e.head, e.xi.len())));
            }
            edges.push(CycleEdge { tail, head, cell, xi: IntVector::new(e.xi.clone()) });
        }
        let c = TropicalCycle { id: spec.id.clone(), vertices, edges };
        c.check_geometry(scene)?;
        Ok(c)
    }

    /// Loads the cycle with the given id from the scene, or the only cycle
    /// when `id` is `None`.
    pub fn from_scene(scene: &Scene, id: Option<&str>) -> Result<TropicalCycle> {
        let spec = match id {
            Some(id) => scene
                .cycle_specs
                .iter()
                .find(|c| c.id == id)
                .ok_or_else(|| Error::Cycle(format!("no cycle {id} in the scene")))?,
            None => match scene.cycle_specs.as_slice() {
                [c] => c,
                [] => return Err(Error::Cycle("the scene declares no cycle".into())),
                _ => return Err(Error::Cycle("the scene declares several cycles; pick one".into())),
            },
        };
        TropicalCycle::from_spec(scene, spec)
    }

    pub fn to_spec(&self, scene: &Scene) -> CycleSpec {
        let num = |x: &BigRational| {
            if x.is_integer() {
                match num_traits::ToPrimitive::to_i64(x.numer()) {
                    Some(i) => Num::Int(i),
                    None => Num::Str(x.to_string()),
                }
            } else {
                Num::Str(x.to_string())
            }
        };
        CycleSpec {
            id: self.id.clone(),
            vertices: self
                .vertices
                .iter()
                .map(|v| VertexSpec {
                    id: v.id.clone(),
                    cell: scene.cells[v.cell].id.clone(),
                    position: v.position.iter().map(num).collect(),
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeSpec {
                    tail: self.vertices[e.tail].id.clone(),
                    head: self.vertices[e.head].id.clone(),
                    cell: scene.cells[e.cell].id.clone(),
                    xi: e.xi.as_slice().to_vec(),
                })
                .collect(),
        }
    }

    /// The cycle with every section multiplied by `c`.
    pub fn scaled(&self, c: i64) -> TropicalCycle {
        let mut out = self.clone();
        for e in &mut out.edges {
            e.xi = e.xi.scale(c);
        }
        out
    }

    /// Disjoint union, renaming the vertices of `other` with a prefix.
    pub fn disjoint_union(&self, other: &TropicalCycle, prefix: &str) -> TropicalCycle {
        let mut out = self.clone();
        let off = out.vertices.len();
        for v in &other.vertices {
            out.vertices.push(CycleVertex { id: format!("{prefix}{}", v.id), ..v.clone() });
        }
        for e in &other.edges {
            out.edges.push(CycleEdge { tail: e.tail + off, head: e.head + off, ..e.clone() });
        }
        out
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.id == id)
    }

    /// Edges at a vertex with `ε = +1` for incoming and `−1` for outgoing.
    pub fn incident(&self, v: usize) -> Vec<(usize, i64)> {
        let mut out = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if e.head == v {
                out.push((i, 1));
            }
            if e.tail == v {
                out.push((i, -1));
            }
        }
        out
    }

    /// Position of vertex `v` in the chart of `cell`.
    pub fn position_in(&self, scene: &Scene, v: usize, cell: usize) -> Result<Vec<BigRational>> {
        let vx = &self.vertices[v];
        if vx.cell == cell {
            return Ok(vx.position.clone());
        }
        match place(scene, vx)? {
            VertexPlace::OnRho { rho, side } if scene.rhos[rho].cells.get(1 - side) == Some(&cell) => {
                let lambda = scene.rho_coordinates(rho, side, &vx.position)?;
                Ok(scene.rho_point(rho, 1 - side, &lambda))
            }
            _ => Err(Error::Cycle(format!(
                "vertex {} is not on a face shared with cell {}",
                vx.id, scene.cells[cell].id
            ))),
        }
    }

    /// Tail and head of an edge in the chart of its cell.
    pub fn edge_points(&self, scene: &Scene, e: usize) -> Result<(Vec<BigRational>, Vec<BigRational>)> {
        let ed = &self.edges[e];
        Ok((self.position_in(scene, ed.tail, ed.cell)?, self.position_in(scene, ed.head, ed.cell)?))
    }

    fn check_geometry(&self, scene: &Scene) -> Result<()> {
        for v in 0..self.vertices.len() {
            place(scene, &self.vertices[v])?;
        }
        for (i, e) in self.edges.iter().enumerate() {
            let (p, q) = self.edge_points(scene, i)?;
            let name = format!("{}->{}", self.vertices[e.tail].id, self.vertices[e.head].id);
            if e.xi.is_zero() {
                return Err(Error::Cycle(format!("edge {name} carries the zero vector")));
            }
            if p == q {
                return Err(Error::Cycle(format!("edge {name} has coincident endpoints")));
            }
            let cell = &scene.cells[e.cell];
            if !cell.contains(&p) || !cell.contains(&q) {
                return Err(Error::Cycle(format!("edge {name} leaves cell {}", cell.id)));
            }
            let shared: Vec<usize> = cell.facets_through(&p).into_iter().filter(|f| cell.on_facet(&q, *f)).collect();
            if !shared.is_empty() {
                return Err(Error::Cycle(format!("edge {name} runs inside the boundary of cell {}", cell.id)));
            }
        }
        Ok(())
    }
}

/// Classifies a vertex: interior to its cell or on one glued facet.
pub fn place(scene: &Scene, v: &CycleVertex) -> Result<VertexPlace> {
    let through = scene.cells[v.cell].facets_through(&v.position);
    match through.as_slice() {
        [] => Ok(VertexPlace::Interior),
        [f] => match scene.rho_at_facet(v.cell, *f) {
            Some((rho, side)) if scene.rhos[rho].cells.len() == 2 => Ok(VertexPlace::OnRho { rho, side }),
            _ => Err(Error::Cycle(format!("vertex {} lies on the boundary of B", v.id))),
        },
        _ => Err(Error::Forbidden(format!("vertex {} lies on a codimension-two cell", v.id))),
    }
}

/// Locates a point of `ρ` strictly inside one piece and returns it with the
/// order of the amoeba complement component containing it.
pub(crate) fn site_and_order(
    scene: &Scene,
    rho: usize,
    side: usize,
    p: &[BigRational],
    overrides: &Overrides,
) -> Result<(RhoSite, IntVector)> {
    let site = scene.locate(rho, side, p, TransportMode::Standard)?;
    let m = scene.order_at(&site, overrides)?;
    Ok((site, m))
}

/// Sum of `ε_{e,v} ξ_e` at every vertex, in the chart of the vertex's cell,
/// with sections in the other cell brought over by the adapted transport.
pub fn balancing_defects(c: &TropicalCycle, scene: &Scene, overrides: &Overrides) -> Result<Vec<BalancingDefect>> {
    let mut out = Vec::new();
    for (vi, v) in c.vertices.iter().enumerate() {
        let mut sum = IntVector::zeros(scene.dimension);
        let pl = place(scene, v)?;
        let mut site: Option<(RhoSite, IntVector)> = None;
        for (ei, eps) in c.incident(vi) {
            let e = &c.edges[ei];
            let xi = if e.cell == v.cell {
                e.xi.clone()
            } else {
                let VertexPlace::OnRho { rho, side } = pl else {
                    return Err(Error::Cycle(format!("edge at vertex {} lies in another cell", v.id)));
                };
                if site.is_none() {
                    site = Some(site_and_order(scene, rho, side, &v.position, overrides)?);
                }
                let (s, m) = site.as_ref().expect("site computed above");
                scene.transport_with_shift(s, 1 - side, m, &e.xi)?
            };
            sum = sum.add(&xi.scale(eps));
        }
        if !sum.is_zero() {
            out.push(BalancingDefect { vertex: v.id.clone(), defect: sum });
        }
    }
    Ok(out)
}

/// Whether `Σ_{e∋v} ε_{e,v} ξ_e = 0` holds at every vertex.
pub fn check_balancing(c: &TropicalCycle, scene: &Scene, overrides: &Overrides) -> Result<bool> {
    Ok(balancing_defects(c, scene, overrides)?.is_empty())
}

pub(crate) fn det2(a: &[BigRational], b: &[BigRational]) -> BigRational {
    &a[0] * &b[1] - &a[1] * &b[0]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kp1() -> Scene {
        Scene::load(format!("{}/fixtures/kp1.toml", env!("CARGO_MANIFEST_DIR"))).unwrap()
    }

    #[test]
    fn kp1_circle_balanced() {
        let s = kp1();
        let c = TropicalCycle::from_scene(&s, Some("circle")).unwrap();
        let d = balancing_defects(&c, &s, &Overrides::new()).unwrap();
        assert!(d.is_empty(), "{d:?}");
    }

    #[test]
    fn perturbed_section_unbalanced() {
        let s = kp1();
        let mut c = TropicalCycle::from_scene(&s, Some("circle")).unwrap();
        c.edges[4].xi = IntVector::new(vec![1, -1]);
        let d = balancing_defects(&c, &s, &Overrides::new()).unwrap();
        let ids: Vec<&str> = d.iter().map(|x| x.vertex.as_str()).collect();
        assert_eq!(ids, ["v0", "v1"]);
    }

    #[test]
    fn trivalent_star() {
        let s = kp1();
        let spec: CycleSpec = toml::from_str(
            r#"
id = "star"
vertex = [
  { id = "o", cell = "L", position = [-2, 0] },
  { id = "a", cell = "L", position = [-3, 0] },
  { id = "b", cell = "L", position = [-2, 1] },
  { id = "c", cell = "L", position = [-1, -1] },
]
edge = [
  { tail = "o", head = "a", cell = "L", xi = [-1, 0] },
  { tail = "o", head = "b", cell = "L", xi = [0, 1] },
  { tail = "o", head = "c", cell = "L", xi = [1, -1] },
]
"#,
        )
        .unwrap();
        let c = TropicalCycle::from_spec(&s, &spec).unwrap();
        let d = balancing_defects(&c, &s, &Overrides::new()).unwrap();
        assert_eq!(d.len(), 3);
        assert!(d.iter().all(|x| x.vertex != "o"));
    }

    #[test]
    fn geometry_errors() {
        let s = kp1();
        let mut spec = s.cycle_specs[0].clone();
        spec.edges[0].xi = vec![0, 0];
        assert!(TropicalCycle::from_spec(&s, &spec).is_err());
        let mut spec = s.cycle_specs[0].clone();
        spec.edges[0].cell = "R".into();
        assert!(TropicalCycle::from_spec(&s, &spec).is_err());
        let mut spec = s.cycle_specs[0].clone();
        spec.vertices[0].position = vec![Num::Int(0), Num::Int(4)];
        assert!(matches!(TropicalCycle::from_spec(&s, &spec), Err(Error::Forbidden(_))));
    }

    #[test]
    fn spec_round_trip() {
        let s = kp1();
        let c = TropicalCycle::from_scene(&s, Some("circle")).unwrap();
        let back = TropicalCycle::from_spec(&s, &c.to_spec(&s)).unwrap();
        assert_eq!(c, back);
    }
}
