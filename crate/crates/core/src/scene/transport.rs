use std::collections::HashMap;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{int_to_rat, rat_to_int, solve_columns, Scene};
use crate::amoeba::{complement_order, SpecializedLaurent};
use crate::error::{Error, Result};
use crate::exact::IntVector;
use crate::walls::Slab;

/// Which affine structure to transport in: the one with singularities
/// along the barycentric pieces, or the one whose singular locus is the
/// amoeba of the slab functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransportMode {
    Standard,
    Adapted,
}

/// A point of a codimension-one cell located in its pieces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RhoSite {
    pub rho: usize,
    pub piece: usize,
    /// Coordinates in the basis of `Λ_ρ`, relative to the origin of `ρ`.
    pub lambda: Vec<BigRational>,
    /// The point in the chart of the first incident cell.
    pub point: Vec<BigRational>,
}

impl RhoSite {
    pub fn lambda_f64(&self) -> Vec<f64> {
        self.lambda.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()
    }
}

/// One crossing of a transport path: through `rho` out of cell `from` at
/// `point`, given in the chart of `from`.
#[derive(Clone, Debug)]
pub struct TransportStep {
    pub rho: String,
    pub from: String,
    pub point: Vec<BigRational>,
}

impl Scene {
    /// `Λ_ρ`-coordinates of a point `p` of `ρ` given in the chart of the
    /// cell on `side`.
    pub fn rho_coordinates(&self, rho: usize, side: usize, p: &[BigRational]) -> Result<Vec<BigRational>> {
        let r = &self.rhos[rho];
        let (basis, origin, normal_dir) = if side == 0 {
            (&r.lambda_basis, &r.origin, r.zeta.clone())
        } else {
            (&r.lambda_image, &r.origin_image, r.pieces[0].zeta_image.clone())
        };
        let mut cols: Vec<Vec<BigRational>> = basis.iter().map(int_to_rat).collect();
        cols.push(int_to_rat(&normal_dir));
        let d: Vec<BigRational> = p.iter().zip(origin).map(|(a, b)| a - b).collect();
        let c = solve_columns(&cols, &d)
            .ok_or_else(|| Error::Scene(format!("rho {}: lambda basis and normal are dependent", r.id)))?;
        if !c[self.dimension - 1].is_zero() {
            return Err(Error::Scene(format!("point is not on rho {}", r.id)));
        }
        Ok(c[..self.dimension - 1].to_vec())
    }

    /// The point of `ρ` with `Λ_ρ`-coordinates `c` in the chart of `side`.
    pub fn rho_point(&self, rho: usize, side: usize, c: &[BigRational]) -> Vec<BigRational> {
        let r = &self.rhos[rho];
        let (basis, origin) = if side == 0 { (&r.lambda_basis, &r.origin) } else { (&r.lambda_image, &r.origin_image) };
        let mut p = origin.clone();
        for (ci, b) in c.iter().zip(basis) {
            for (x, &bi) in p.iter_mut().zip(b.as_slice()) {
                *x += ci * BigRational::from_integer(bi.into());
            }
        }
        p
    }

    /// Locates a point of `ρ` given in the chart of the cell on `side`.
    ///
    /// Points on lower-dimensional cells are rejected. In the standard
    /// structure the point must also avoid the boundaries of the pieces.
    pub fn locate(&self, rho: usize, side: usize, p: &[BigRational], mode: TransportMode) -> Result<RhoSite> {
        let r = &self.rhos[rho];
        let cell = &self.cells[r.cells[side]];
        if p.len() != self.dimension {
            return Err(Error::Invalid(format!("point has {} coordinates", p.len())));
        }
        if !cell.on_facet(p, r.facets[side]) {
            return Err(Error::Scene(format!("point is not on rho {}", r.id)));
        }
        for (i, f) in cell.facets.iter().enumerate() {
            if i != r.facets[side] && !f.slack(p).is_negative() {
                return Err(Error::Forbidden(format!(
                    "point lies on a codimension-two cell at the boundary of rho {}",
                    r.id
                )));
            }
        }
        let lambda = self.rho_coordinates(rho, side, p)?;
        let point = self.rho_point(rho, 0, &lambda);
        let piece = match mode {
            TransportMode::Standard => {
                let strict: Vec<usize> =
                    (0..r.pieces.len()).filter(|&i| r.pieces[i].contains_strictly(&point)).collect();
                if strict.len() != 1 {
                    return Err(Error::Forbidden(format!(
                        "point on rho {} lies on the discriminant between pieces",
                        r.id
                    )));
                }
                strict[0]
            }
            TransportMode::Adapted => (0..r.pieces.len())
                .find(|&i| r.pieces[i].contains(&point))
                .ok_or_else(|| Error::Scene(format!("point on rho {} is in no piece", r.id)))?,
        };
        Ok(RhoSite { rho, piece, lambda, point })
    }

    /// The slab containing a located point.
    pub fn slab_at(&self, site: &RhoSite) -> Result<&Slab> {
        let hits: Vec<&Slab> = self
            .slabs
            .iter()
            .filter(|s| {
                s.rho == site.rho
                    && s.piece.is_none_or(|p| p == site.piece)
                    && s.region.iter().all(|h| !h.slack(&site.point).is_positive())
            })
            .collect();
        match hits.len() {
            0 => Err(Error::Scene(format!("no slab at the point {:?} of rho {}", site.lambda, self.rhos[site.rho].id))),
            _ => Ok(hits[0]),
        }
    }

    /// The numeric slab function at a site, as a polynomial on `Λ_ρ`.
    pub fn specialized_slab(&self, site: &RhoSite, overrides: &HashMap<String, Complex64>) -> Result<SpecializedLaurent> {
        let slab = self.slab_at(site)?;
        let vals = self.numeric_values(overrides);
        SpecializedLaurent::from_laurent(&slab.function, &self.rhos[site.rho].lambda_names, &vals)
    }

    /// The order `m_x` of the amoeba complement component containing the
    /// site, in the basis of `Λ_ρ`.
    pub fn order_at(&self, site: &RhoSite, overrides: &HashMap<String, Complex64>) -> Result<IntVector> {
        let f = self.specialized_slab(site, overrides)?;
        complement_order(&f, &site.lambda_f64())
    }

    /// Matrix columns of the transport from side 0 to side 1 through
    /// `piece`, with `ζ` sent to `zeta_image + m`.
    fn forward_columns(&self, rho: usize, piece: usize, m: &IntVector) -> (Vec<Vec<BigRational>>, Vec<Vec<BigRational>>) {
        let r = &self.rhos[rho];
        let mut src: Vec<Vec<BigRational>> = r.lambda_basis.iter().map(int_to_rat).collect();
        src.push(int_to_rat(&r.zeta));
        let mut dst: Vec<Vec<BigRational>> = r.lambda_image.iter().map(int_to_rat).collect();
        let mut z = r.pieces[piece].zeta_image.clone();
        for (mi, l) in m.as_slice().iter().zip(&r.lambda_image) {
            z = z.add(&l.scale(*mi));
        }
        dst.push(int_to_rat(&z));
        (src, dst)
    }

    /// Transport of `v` through a located site out of the cell on `from_side`
    /// with shift `m ∈ Λ_ρ` (zero for the standard structure).
    pub fn transport_with_shift(&self, site: &RhoSite, from_side: usize, m: &IntVector, v: &IntVector) -> Result<IntVector> {
        let r = &self.rhos[site.rho];
        if r.cells.len() != 2 {
            return Err(Error::Scene(format!("rho {} has only one incident cell", r.id)));
        }
        let (src, dst) = self.forward_columns(site.rho, site.piece, m);
        let (a, b) = if from_side == 0 { (src, dst) } else { (dst, src) };
        let c = solve_columns(&a, &int_to_rat(v))
            .ok_or_else(|| Error::Scene(format!("rho {}: transition is singular", r.id)))?;
        let mut out = vec![BigRational::zero(); self.dimension];
        for (ci, col) in c.iter().zip(&b) {
            for (o, x) in out.iter_mut().zip(col) {
                *o += ci * x;
            }
        }
        rat_to_int(&out).ok_or_else(|| Error::Scene(format!("rho {}: transition is not integral", r.id)))
    }

    /// Transport of `v` across `ρ` at `p` (in the chart of `from_side`).
    pub fn transport_across(
        &self,
        rho: usize,
        from_side: usize,
        p: &[BigRational],
        v: &IntVector,
        mode: TransportMode,
        overrides: &HashMap<String, Complex64>,
    ) -> Result<IntVector> {
        let site = self.locate(rho, from_side, p, mode)?;
        let m = match mode {
            TransportMode::Standard => IntVector::zeros(self.dimension - 1),
            TransportMode::Adapted => self.order_at(&site, overrides)?,
        };
        self.transport_with_shift(&site, from_side, &m, v)
    }

    /// Transport along a sequence of crossings. Consecutive steps must
    /// chain: each step leaves the cell the previous one entered.
    pub fn parallel_transport(
        &self,
        path: &[TransportStep],
        v: &IntVector,
        mode: TransportMode,
        overrides: &HashMap<String, Complex64>,
    ) -> Result<IntVector> {
        let mut cur = v.clone();
        let mut at: Option<usize> = None;
        for step in path {
            let rho = self.rho_index(&step.rho)?;
            let from = self.cell_index(&step.from)?;
            if at.is_some_and(|a| a != from) {
                return Err(Error::Invalid(format!("path step through {} does not start where the last ended", step.rho)));
            }
            let r = &self.rhos[rho];
            let side = r
                .side_of(from)
                .ok_or_else(|| Error::Invalid(format!("cell {} is not incident to {}", step.from, step.rho)))?;
            cur = self.transport_across(rho, side, &step.point, &cur, mode, overrides)?;
            at = Some(r.cells[1 - side]);
        }
        Ok(cur)
    }
}
