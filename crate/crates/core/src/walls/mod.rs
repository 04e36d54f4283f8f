//! Walls and slabs, wall-crossing automorphisms and consistency checks.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{IntVector, Laurent, Monomial};
use crate::scene::{dot, int_to_rat, HalfSpace, Scene};
use crate::series::{SeriesSpace, TruncatedSeries};

/// A codimension-one wall function on part of `ρ`.
#[derive(Clone, Debug)]
pub struct Slab {
    pub id: String,
    pub rho: usize,
    /// `None` when the slab covers all pieces.
    pub piece: Option<usize>,
    pub function: Laurent,
    /// Extra half-spaces, in the chart of the first cell of `ρ`.
    pub region: Vec<HalfSpace>,
}

/// A codimension-zero wall `normal·p = offset` inside a maximal cell, with
/// function `1 + a z^m t^ℓ`.
#[derive(Clone, Debug)]
pub struct Wall {
    pub id: String,
    pub cell: usize,
    pub normal: IntVector,
    pub offset: BigRational,
    pub region: Vec<HalfSpace>,
    pub function: Laurent,
    pub exponent: IntVector,
    pub t_order: i64,
    /// `a`, a monomial in the remaining parameters times a number.
    pub coeff: Laurent,
}

impl Wall {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        id: &str,
        cell: usize,
        coordinates: &[String],
        normal: IntVector,
        offset: BigRational,
        region: Vec<HalfSpace>,
        function: Laurent,
        series_var: &str,
    ) -> Result<Wall> {
        let bad = || Error::Wall(format!("wall {id}: function {function} is not of the form 1 + a z^m t^l"));
        let one = Monomial::one();
        if function.num_terms() != 2 || !function.coeff(&one).is_one() {
            return Err(bad());
        }
        let (m, c) = function.terms().find(|(m, _)| !m.is_one()).ok_or_else(bad)?;
        let exponent = IntVector::new(coordinates.iter().map(|x| m.exponent(x)).collect());
        let t_order = m.exponent(series_var);
        let rest = Monomial::from_pairs(
            m.iter().filter(|(v, _)| !coordinates.iter().any(|x| x == v) && *v != series_var),
        );
        Ok(Wall {
            id: id.to_string(),
            cell,
            normal,
            offset,
            region,
            function: function.clone(),
            exponent,
            t_order,
            coeff: Laurent::term(c.clone(), rest),
        })
    }

    /// `normal·p − offset`.
    pub fn side(&self, p: &[BigRational]) -> BigRational {
        dot(&int_to_rat(&self.normal), p) - &self.offset
    }

    pub fn in_region(&self, p: &[BigRational]) -> bool {
        self.region.iter().all(|h| !h.slack(p).is_positive())
    }

    pub fn in_region_strictly(&self, p: &[BigRational]) -> bool {
        self.region.iter().all(|h| h.slack(p).is_negative())
    }
}

/// A ring automorphism of a truncated series ring over a cell, given by the
/// images `z^{e_i} ↦ z^{e_i}·u_i` of the coordinate monomials, with units
/// `u_i ≡ 1` modulo the series variable.
#[derive(Clone, Debug, PartialEq)]
pub struct Automorphism {
    space: Arc<SeriesSpace>,
    units: Vec<TruncatedSeries>,
    inverses: Vec<TruncatedSeries>,
}

/// Inverse of a unit `1 + g` with `g` of positive weight.
pub fn unit_inverse(u: &TruncatedSeries) -> Result<TruncatedSeries> {
    let sp = u.space().clone();
    let g = u.sub(&TruncatedSeries::one(&sp));
    if let Some((e, _)) = g.terms().find(|(e, _)| sp.weight(e) <= 0) {
        return Err(Error::Wall(format!("cannot invert: term with exponent {e:?} has no positive weight")));
    }
    let mut acc = TruncatedSeries::one(&sp);
    let mut p = TruncatedSeries::one(&sp);
    let neg = g.neg();
    loop {
        p = p.mul(&neg);
        if p.is_zero() {
            break;
        }
        acc = acc.add(&p);
    }
    Ok(acc)
}

fn power(u: &TruncatedSeries, inv: &TruncatedSeries, e: i64) -> TruncatedSeries {
    if e >= 0 {
        u.pow(e as u32)
    } else {
        inv.pow((-e) as u32)
    }
}

impl Automorphism {
    pub fn identity(space: &Arc<SeriesSpace>) -> Self {
        let one = TruncatedSeries::one(space);
        let n = space.n_lambda();
        Automorphism { space: space.clone(), units: vec![one.clone(); n], inverses: vec![one; n] }
    }

    /// `z^m ↦ f^{⟨d,m⟩} z^m`.
    pub fn from_wall_function(f: &TruncatedSeries, d: &IntVector) -> Result<Self> {
        let space = f.space().clone();
        let finv = unit_inverse(f)?;
        let units: Vec<TruncatedSeries> = d.as_slice().iter().map(|&di| power(f, &finv, di)).collect();
        let inverses: Vec<TruncatedSeries> = d.as_slice().iter().map(|&di| power(f, &finv, -di)).collect();
        if units.len() != space.n_lambda() {
            return Err(Error::Wall("covector length does not match the torus rank".into()));
        }
        Ok(Automorphism { space, units, inverses })
    }

    pub fn space(&self) -> &Arc<SeriesSpace> {
        &self.space
    }

    /// Image of `z^{e_i}` divided by `z^{e_i}`.
    pub fn unit(&self, i: usize) -> &TruncatedSeries {
        &self.units[i]
    }

    /// Applies the automorphism to a series.
    pub fn apply(&self, f: &TruncatedSeries) -> TruncatedSeries {
        let n = self.space.n_lambda();
        let mut out = TruncatedSeries::zero(&self.space);
        for (e, c) in f.terms() {
            let mut factor = TruncatedSeries::one(&self.space);
            for i in 0..n {
                if e[i] != 0 {
                    factor = factor.mul(&power(&self.units[i], &self.inverses[i], e[i]));
                }
            }
            out = out.add(&factor.mul_monomial(e, c));
        }
        out.truncate_weight()
    }

    /// `after ∘ self`.
    pub fn then(&self, after: &Automorphism) -> Automorphism {
        // after(z_i u_i) = z_i · after.u_i · after(u_i)
        let units: Vec<TruncatedSeries> =
            self.units.iter().enumerate().map(|(i, u)| after.apply(u).mul(&after.units[i])).collect();
        let inverses = units.iter().map(|u| unit_inverse(u).expect("units stay invertible")).collect();
        Automorphism { space: self.space.clone(), units, inverses }
    }

    /// Whether every unit is `1` up to the truncation.
    pub fn is_identity(&self) -> bool {
        self.units.iter().all(|u| u.truncate_t().is_one())
    }
}

impl fmt::Display for Automorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = (0..self.space.n_lambda())
            .map(|i| {
                let v = &self.space.lambda_names()[i];
                format!("{v} -> {v}*({})", self.units[i].truncate_t())
            })
            .collect();
        write!(f, "{}", parts.join(", "))
    }
}

/// A wall crossed along a path, with the direction relative to its normal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SignedWall {
    pub wall: String,
    pub direction: i64,
}

/// The truncated ring over a maximal cell: the cell coordinates as torus
/// variables and the scene parameters, graded by the series variable.
pub fn cell_space(scene: &Scene, cell: usize, k: u32) -> Result<Arc<SeriesSpace>> {
    let coords = scene.cells[cell].coordinates.clone();
    let params: Vec<String> = scene.parameters.iter().filter(|p| !coords.contains(p)).cloned().collect();
    SeriesSpace::t_adic(coords, params, &scene.series_var, k)
}

/// The wall-crossing automorphism `z^m ↦ f^{⟨ď,m⟩} z^m` for crossing `wall`
/// in `direction` (+1 along its normal, −1 against it), where `ď` is
/// positive on vectors pointing back into the chamber being left.
pub fn wall_crossing(wall: &Wall, direction: i64, space: &Arc<SeriesSpace>) -> Result<Automorphism> {
    if direction != 1 && direction != -1 {
        return Err(Error::Invalid(format!("direction must be ±1, got {direction}")));
    }
    let f = TruncatedSeries::from_laurent(space, &wall.function)?.truncate_weight();
    if !f.truncate_weight().sub(&TruncatedSeries::one(space)).terms().all(|(e, _)| space.weight(e) > 0) {
        return Err(Error::Wall(format!("wall {}: function is not 1 modulo the series variable", wall.id)));
    }
    Automorphism::from_wall_function(&f, &wall.normal.scale(-direction))
}

/// Composes the crossings of a sequence of signed walls in one cell.
pub fn compose_crossings(scene: &Scene, cell: usize, walls: &[SignedWall], k: u32) -> Result<Automorphism> {
    let space = cell_space(scene, cell, k)?;
    let mut acc = Automorphism::identity(&space);
    for sw in walls {
        let w = scene
            .walls
            .iter()
            .find(|w| w.id == sw.wall)
            .ok_or_else(|| Error::Wall(format!("unknown wall {}", sw.wall)))?;
        if w.cell != cell {
            return Err(Error::Wall(format!("wall {} is not in cell {}", w.id, scene.cells[cell].id)));
        }
        acc = acc.then(&wall_crossing(w, sw.direction, &space)?);
    }
    Ok(acc)
}

/// Whether the composite along a sequence of signed walls is the identity
/// modulo `t^{k+1}`.
pub fn check_consistency_signed(scene: &Scene, cell: usize, walls: &[SignedWall], k: u32) -> Result<bool> {
    Ok(compose_crossings(scene, cell, walls, k)?.is_identity())
}

fn perturbation(step: usize, dim: usize) -> Vec<BigRational> {
    (0..dim)
        .map(|i| BigRational::new(1.into(), (97 * (step as i64 + 1) * (2 * i as i64 + 3)).into()))
        .collect()
}

/// Walls met by a closed polygon in a cell, in order, with directions.
///
/// A polygon passing through a wall boundary, meeting two walls at once or
/// having a corner on a wall is shifted by a small deterministic rational
/// vector.
pub fn crossings_along(scene: &Scene, cell: usize, polygon: &[Vec<BigRational>]) -> Result<Vec<SignedWall>> {
    if polygon.len() < 2 {
        return Ok(Vec::new());
    }
    if polygon.first() != polygon.last() {
        return Err(Error::OpenLoop("first and last points of the path differ".into()));
    }
    let walls: Vec<&Wall> = scene.walls.iter().filter(|w| w.cell == cell).collect();
    'attempt: for step in 0..9 {
        let shift = if step == 0 { vec![BigRational::zero(); scene.dimension] } else { perturbation(step, scene.dimension) };
        let pts: Vec<Vec<BigRational>> =
            polygon.iter().map(|p| p.iter().zip(&shift).map(|(a, b)| a + b).collect()).collect();
        let mut out = Vec::new();
        for seg in pts.windows(2) {
            let (p, q) = (&seg[0], &seg[1]);
            let mut hits: Vec<(BigRational, SignedWall)> = Vec::new();
            for w in &walls {
                let (a, b) = (w.side(p), w.side(q));
                if a.is_zero() || b.is_zero() {
                    if w.in_region(if a.is_zero() { p } else { q }) {
                        continue 'attempt;
                    }
                    continue;
                }
                if a.is_positive() == b.is_positive() {
                    continue;
                }
                let s = &a / (&a - &b);
                let r: Vec<BigRational> = p.iter().zip(q).map(|(x, y)| x + &s * (y - x)).collect();
                if w.in_region_strictly(&r) {
                    let direction = if b.is_positive() { 1 } else { -1 };
                    hits.push((s, SignedWall { wall: w.id.clone(), direction }));
                } else if w.in_region(&r) {
                    continue 'attempt;
                }
            }
            hits.sort_by(|x, y| x.0.cmp(&y.0));
            if hits.windows(2).any(|h| h[0].0 == h[1].0) {
                continue 'attempt;
            }
            out.extend(hits.into_iter().map(|(_, w)| w));
        }
        return Ok(out);
    }
    Err(Error::Wall("path stays degenerate after perturbation".into()))
}

/// Whether the wall crossings along a closed polygon compose to the
/// identity modulo `t^{k+1}`.
pub fn check_consistency_codim0(scene: &Scene, cell: usize, polygon: &[Vec<BigRational>], k: u32) -> Result<bool> {
    let walls = crossings_along(scene, cell, polygon)?;
    check_consistency_signed(scene, cell, &walls, k)
}

/// Reduction of a slab function modulo the series variable.
pub fn reduce_mod_t(f: &Laurent, t: &str) -> Laurent {
    let mut r = Laurent::zero();
    for (m, c) in f.terms() {
        if m.exponent(t) <= 0 {
            r.add_term(m.clone(), c);
        }
    }
    r
}

/// Whether all slabs meeting each piece of `ρ` agree modulo the series
/// variable.
pub fn check_consistency_codim1(scene: &Scene, rho: usize) -> bool {
    let r = &scene.rhos[rho];
    (0..r.pieces.len()).all(|p| {
        let reductions: Vec<Laurent> = scene
            .slabs
            .iter()
            .filter(|s| s.rho == rho && s.piece.is_none_or(|q| q == p))
            .map(|s| reduce_mod_t(&s.function, &scene.series_var))
            .collect();
        reductions.windows(2).all(|w| w[0] == w[1])
    })
}

/// Per-piece mod-`t` reductions, for reports.
pub fn slab_reductions(scene: &Scene, rho: usize) -> BTreeMap<String, Vec<String>> {
    let r = &scene.rhos[rho];
    r.pieces
        .iter()
        .enumerate()
        .map(|(p, piece)| {
            let v = scene
                .slabs
                .iter()
                .filter(|s| s.rho == rho && s.piece.is_none_or(|q| q == p))
                .map(|s| reduce_mod_t(&s.function, &scene.series_var).to_string())
                .collect();
            (piece.id.clone(), v)
        })
        .collect()
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse_rational;

    fn ks() -> Scene {
        Scene::load(format!("{}/fixtures/ks.toml", env!("CARGO_MANIFEST_DIR"))).unwrap()
    }

    fn polygon(pts: &[(i64, i64)]) -> Vec<Vec<BigRational>> {
        pts.iter().map(|&(a, b)| vec![BigRational::from_integer(a.into()), BigRational::from_integer(b.into())]).collect()
    }

    const LOOP: [(i64, i64); 5] = [(2, 1), (-1, 2), (-2, -1), (1, -2), (2, 1)];

    #[test]
    fn crossing_formula() {
        let s = ks();
        let sp = cell_space(&s, 0, 3).unwrap();
        let theta = wall_crossing(&s.walls[0], 1, &sp).unwrap();
        let y = TruncatedSeries::parse(&sp, "y").unwrap();
        let expect = TruncatedSeries::parse(&sp, "y - x*y*t + x^2*y*t^2 - x^3*y*t^3").unwrap();
        assert_eq!(theta.apply(&y).truncate_t(), expect.truncate_t());
        let x = TruncatedSeries::parse(&sp, "x").unwrap();
        assert_eq!(theta.apply(&x), x);
    }

    #[test]
    fn crossing_back_is_inverse() {
        let s = ks();
        let sp = cell_space(&s, 0, 4).unwrap();
        for w in &s.walls {
            let a = wall_crossing(w, 1, &sp).unwrap();
            let b = wall_crossing(w, -1, &sp).unwrap();
            assert!(a.then(&b).is_identity());
            assert!(b.then(&a).is_identity());
        }
    }

    #[test]
    fn scattering_diagram_consistent() {
        let s = ks();
        let seq = crossings_along(&s, 0, &polygon(&LOOP)).unwrap();
        assert_eq!(seq.len(), 5, "{seq:?}");
        assert!(check_consistency_codim0(&s, 0, &polygon(&LOOP), 4).unwrap());
    }

    #[test]
    fn missing_wall_inconsistent() {
        let mut f = ks().source().clone();
        f.walls.retain(|w| w.id != "wxy");
        let s = Scene::from_file(f).unwrap();
        assert!(!check_consistency_codim0(&s, 0, &polygon(&LOOP), 4).unwrap());
    }

    #[test]
    fn opposite_ray_inconsistent() {
        let mut f = ks().source().clone();
        for w in f.walls.iter_mut().filter(|w| w.id == "wxy") {
            w.region = vec![vec![(-1).into(), 0.into(), 0.into()]];
        }
        let s = Scene::from_file(f).unwrap();
        assert!(!check_consistency_codim0(&s, 0, &polygon(&LOOP), 4).unwrap());
    }

    #[test]
    fn loop_avoiding_walls() {
        let s = ks();
        let p = polygon(&[(1, -3), (3, -3), (3, -1), (1, -1), (1, -3)]);
        assert!(crossings_along(&s, 0, &p).unwrap().is_empty());
        assert!(check_consistency_codim0(&s, 0, &p, 4).unwrap());
    }

    #[test]
    fn open_path_rejected() {
        let s = ks();
        let p = polygon(&[(1, 1), (3, 1)]);
        assert!(matches!(crossings_along(&s, 0, &p), Err(Error::OpenLoop(_))));
    }

    #[test]
    fn corner_on_wall_perturbed() {
        let s = ks();
        let p = vec![
            vec![parse_rational("2").unwrap(), parse_rational("0").unwrap()],
            vec![parse_rational("0").unwrap(), parse_rational("2").unwrap()],
            vec![parse_rational("-2").unwrap(), parse_rational("0").unwrap()],
            vec![parse_rational("0").unwrap(), parse_rational("-2").unwrap()],
            vec![parse_rational("2").unwrap(), parse_rational("0").unwrap()],
        ];
        assert!(check_consistency_codim0(&s, 0, &p, 4).unwrap());
    }

    #[test]
    fn non_wall_function_rejected() {
        let text = std::fs::read_to_string(format!("{}/fixtures/ks.toml", env!("CARGO_MANIFEST_DIR")))
            .unwrap()
            .replace("\"1 + x*t\"", "\"1 + x*t + y*t\"");
        assert!(Scene::from_toml_str(&text).is_err());
    }
}
