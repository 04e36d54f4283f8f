use serde::Serialize;

use super::{place, site_and_order, Overrides, TropicalCycle, VertexPlace};
use crate::error::{Error, Result};
use crate::exact::{IntVector, MultiplicativeValue};
use crate::scene::{RhoSite, Scene};

/// A vertex of a cycle on a slab, with the edge arriving from cell `from`
/// and the edge leaving into cell `to`.
#[derive(Clone, Debug, Serialize)]
pub struct CrossingEvent {
    pub vertex: String,
    pub rho: String,
    pub piece: String,
    pub slab: String,
    pub from: String,
    pub to: String,
    /// Section on the arriving edge, in the chart of `from`.
    pub xi_in: IntVector,
    /// Section on the leaving edge, in the chart of `to`.
    pub xi_out: IntVector,
    /// Primitive covector vanishing on `Λ_ρ`, positive towards `from`.
    pub d_check: IntVector,
    /// `⟨ď_e, ξ_e⟩`.
    pub weight: i64,
    pub kappa: i64,
    /// Order of the amoeba complement component at the vertex.
    pub order: IntVector,
    pub gluing_ratio: MultiplicativeValue,
    /// `Λ_ρ`-coordinates of the vertex.
    pub lambda: Vec<f64>,
    #[serde(skip)]
    pub site: RhoSite,
    #[serde(skip)]
    pub vertex_index: usize,
    #[serde(skip)]
    pub in_edge: usize,
    #[serde(skip)]
    pub out_edge: usize,
    /// Far endpoint of the arriving edge.
    #[serde(skip)]
    pub source: usize,
    /// Far endpoint of the leaving edge.
    #[serde(skip)]
    pub target: usize,
    #[serde(skip)]
    pub from_side: usize,
}

impl CrossingEvent {
    /// `⟨ď_e, ξ_e⟩·κ`.
    pub fn c1_term(&self) -> i64 {
        self.weight * self.kappa
    }
}

/// The slab crossings of a cycle, in vertex order.
///
/// Every vertex on a codimension-one cell must be bivalent with one edge on
/// each side. Edges pointing the same way through the vertex are read with
/// one of them reversed.
pub fn crossings(c: &TropicalCycle, scene: &Scene, overrides: &Overrides) -> Result<Vec<CrossingEvent>> {
    let mut out = Vec::new();
    for (vi, v) in c.vertices.iter().enumerate() {
        let VertexPlace::OnRho { rho, side } = place(scene, v)? else {
            continue;
        };
        let inc = c.incident(vi);
        if inc.len() != 2 {
            return Err(Error::NotNormalized(format!(
                "vertex {} on {} has valence {}",
                v.id,
                scene.rhos[rho].id,
                inc.len()
            )));
        }
        let (a, ea) = inc[0];
        let (b, eb) = inc[1];
        if c.edges[a].cell == c.edges[b].cell {
            return Err(Error::Cycle(format!("vertex {} touches {} without crossing it", v.id, scene.rhos[rho].id)));
        }
        let (i, o, xi_in, xi_out) = match (ea, eb) {
            (1, -1) => (a, b, c.edges[a].xi.clone(), c.edges[b].xi.clone()),
            (-1, 1) => (b, a, c.edges[b].xi.clone(), c.edges[a].xi.clone()),
            (1, 1) => (a, b, c.edges[a].xi.clone(), c.edges[b].xi.neg()),
            _ => (b, a, c.edges[b].xi.neg(), c.edges[a].xi.clone()),
        };
        let far = |e: usize| if c.edges[e].head == vi { c.edges[e].tail } else { c.edges[e].head };
        let r = &scene.rhos[rho];
        let from_cell = c.edges[i].cell;
        let to_cell = c.edges[o].cell;
        let from_side = r
            .side_of(from_cell)
            .ok_or_else(|| Error::Cycle(format!("edge at vertex {} is not in a cell of {}", v.id, r.id)))?;
        if r.cells[1 - from_side] != to_cell {
            return Err(Error::Cycle(format!("edge at vertex {} is not in a cell of {}", v.id, r.id)));
        }
        let (site, order) = site_and_order(scene, rho, side, &v.position, overrides)?;
        let d_check = scene.d_check(rho, from_side)?;
        let weight = d_check.dot(&xi_in);
        let slab = scene.slab_at(&site)?.id.clone();
        let kappa = r.kappa(site.piece)?;
        let gluing_ratio = scene
            .gluing_value(to_cell, rho, site.piece, &xi_out)
            .div(&scene.gluing_value(from_cell, rho, site.piece, &xi_in));
        out.push(CrossingEvent {
            vertex: v.id.clone(),
            rho: r.id.clone(),
            piece: r.pieces[site.piece].id.clone(),
            slab,
            from: scene.cells[from_cell].id.clone(),
            to: scene.cells[to_cell].id.clone(),
            xi_in,
            xi_out,
            d_check,
            weight,
            kappa,
            order,
            gluing_ratio,
            lambda: site.lambda_f64(),
            site,
            vertex_index: vi,
            in_edge: i,
            out_edge: o,
            source: far(i),
            target: far(o),
            from_side,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kp1() -> Scene {
        Scene::load(format!("{}/fixtures/kp1.toml", env!("CARGO_MANIFEST_DIR"))).unwrap()
    }

    #[test]
    fn kp1_circle_events() {
        let s = kp1();
        let c = TropicalCycle::from_scene(&s, Some("circle")).unwrap();
        let ev = crossings(&c, &s, &Overrides::new()).unwrap();
        let orders: Vec<i64> = ev.iter().map(|e| e.order.as_slice()[0]).collect();
        let weights: Vec<i64> = ev.iter().map(|e| e.weight).collect();
        assert_eq!(orders, [-1, 0, 1, 0]);
        assert_eq!(weights, [1, -1, 1, -1]);
        assert!(ev.iter().all(|e| e.gluing_ratio.is_identity()));
        assert_eq!(ev.iter().map(CrossingEvent::c1_term).sum::<i64>(), 0);
    }

    #[test]
    fn no_slab_vertices_no_events() {
        let s = kp1();
        let mut c = TropicalCycle::from_scene(&s, Some("circle")).unwrap();
        c.vertices.retain(|v| v.cell == 0 && v.position[0] != num_rational::BigRational::from_integer(0.into()));
        c.edges = vec![super::super::CycleEdge { tail: 0, head: 1, cell: 0, xi: IntVector::new(vec![0, 1]) }];
        assert!(crossings(&c, &s, &Overrides::new()).unwrap().is_empty());
    }

    #[test]
    fn touching_slab_rejected() {
        let s = kp1();
        let mut c = TropicalCycle::from_scene(&s, Some("circle")).unwrap();
        c.edges[1].cell = 0;
        c.vertices[3].cell = 0;
        c.vertices[3].position[0] = -c.vertices[3].position[0].clone();
        c.edges[2].cell = 0;
        assert!(matches!(crossings(&c, &s, &Overrides::new()), Err(Error::Cycle(_))));
    }
}
