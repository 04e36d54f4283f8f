//! The polyhedral scene: maximal cells in their own charts, codimension-one
//! cells with transition data, kinks, gluing data, slabs, walls and cycles.

mod file;
mod transport;
mod validate;

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{divisibility_index, IntVector, Laurent, MultiplicativeValue};
use crate::walls::{Slab, Wall};

pub use file::{
    rationals, CellSpec, CycleSpec, EdgeSpec, GluingSpec, KinkSpec, LoopSpec, Num, PieceSpec, RhoSpec, SceneFile, SlabSpec,
    VertexSpec, WallSpec,
};
pub use transport::{RhoSite, TransportMode, TransportStep};
pub use validate::{validate_scene, Violation};

/// The half-space `a·p ≤ b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfSpace {
    pub a: Vec<BigRational>,
    pub b: BigRational,
}

impl HalfSpace {
    fn parse(raw: &[Num], dim: usize) -> Result<Self> {
        if raw.len() != dim + 1 {
            return Err(Error::Scene(format!("half-space needs {} numbers, got {}", dim + 1, raw.len())));
        }
        let v = rationals(raw)?;
        Ok(HalfSpace { a: v[..dim].to_vec(), b: v[dim].clone() })
    }

    /// `a·p − b`; nonpositive inside.
    pub fn slack(&self, p: &[BigRational]) -> BigRational {
        dot(&self.a, p) - &self.b
    }
}

/// A facet `normal·p ≤ offset` of a maximal cell, with integral normal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Facet {
    pub normal: IntVector,
    pub offset: BigRational,
}

impl Facet {
    pub fn slack(&self, p: &[BigRational]) -> BigRational {
        dot(&int_to_rat(&self.normal), p) - &self.offset
    }
}

#[derive(Clone, Debug)]
pub struct Cell {
    pub id: String,
    pub coordinates: Vec<String>,
    pub facets: Vec<Facet>,
    pub boundary: Vec<usize>,
}

impl Cell {
    pub fn contains(&self, p: &[BigRational]) -> bool {
        self.facets.iter().all(|f| !f.slack(p).is_positive())
    }

    pub fn on_facet(&self, p: &[BigRational], i: usize) -> bool {
        self.facets[i].slack(p).is_zero()
    }

    /// Facets whose hyperplane contains `p`.
    pub fn facets_through(&self, p: &[BigRational]) -> Vec<usize> {
        (0..self.facets.len()).filter(|&i| self.on_facet(p, i)).collect()
    }
}

#[derive(Clone, Debug)]
pub struct Piece {
    pub id: String,
    pub region: Vec<HalfSpace>,
    pub zeta_image: IntVector,
    pub kappa: Option<i64>,
}

impl Piece {
    pub fn contains(&self, p: &[BigRational]) -> bool {
        self.region.iter().all(|h| !h.slack(p).is_positive())
    }

    pub fn contains_strictly(&self, p: &[BigRational]) -> bool {
        self.region.iter().all(|h| h.slack(p).is_negative())
    }
}

#[derive(Clone, Debug)]
pub struct Rho {
    pub id: String,
    /// Indices of the incident maximal cells.
    pub cells: Vec<usize>,
    pub facets: Vec<usize>,
    pub boundary: bool,
    pub lambda_names: Vec<String>,
    pub lambda_basis: Vec<IntVector>,
    pub lambda_image: Vec<IntVector>,
    pub origin: Vec<BigRational>,
    pub origin_image: Vec<BigRational>,
    pub zeta: IntVector,
    pub pieces: Vec<Piece>,
}

impl Rho {
    /// Which side (0 or 1) of `ρ` the cell with index `cell` is on.
    pub fn side_of(&self, cell: usize) -> Option<usize> {
        self.cells.iter().position(|&c| c == cell)
    }

    pub fn piece_index(&self, id: &str) -> Option<usize> {
        self.pieces.iter().position(|p| p.id == id)
    }

    pub fn kappa(&self, piece: usize) -> Result<i64> {
        self.pieces[piece]
            .kappa
            .ok_or_else(|| Error::Scene(format!("no kink on piece {} of {}", self.pieces[piece].id, self.id)))
    }
}

/// A loaded scene. Immutable after construction.
#[derive(Clone, Debug)]
pub struct Scene {
    pub dimension: usize,
    pub series_var: String,
    pub kink_var: String,
    pub parameters: Vec<String>,
    pub gluing_generators: Vec<String>,
    pub k: u32,
    pub oriented: bool,
    pub values: BTreeMap<String, Complex64>,
    pub cells: Vec<Cell>,
    pub rhos: Vec<Rho>,
    /// Gluing data `s_{σρ̲}` on the chart basis, keyed by (cell, ρ, piece).
    pub gluing: BTreeMap<(usize, usize, usize), Vec<MultiplicativeValue>>,
    pub slabs: Vec<Slab>,
    pub walls: Vec<Wall>,
    pub cycle_specs: Vec<CycleSpec>,
    /// Problems found while loading that do not prevent construction.
    pub(crate) load_notes: Vec<Violation>,
    source: SceneFile,
}

impl Scene {
    pub fn load(path: impl AsRef<Path>) -> Result<Scene> {
        let text = std::fs::read_to_string(path)?;
        Scene::from_toml_str(&text)
    }

    pub fn from_toml_str(text: &str) -> Result<Scene> {
        let f: SceneFile = toml::from_str(text)?;
        Scene::from_file(f)
    }

    pub fn source(&self) -> &SceneFile {
        &self.source
    }

    /// Builds a scene from its file form. Dangling references and malformed
    /// numbers are errors; geometric problems are left to [`validate_scene`].
    pub fn from_file(f: SceneFile) -> Result<Scene> {
        let n = f.dimension;
        if n == 0 {
            return Err(Error::Scene("dimension must be positive".into()));
        }
        let mut notes = Vec::new();
        let cells = f
            .maximal_cells
            .iter()
            .map(|c| {
                let coordinates = if c.coordinates.is_empty() {
                    (1..=n).map(|i| format!("z{i}")).collect()
                } else if c.coordinates.len() == n {
                    c.coordinates.clone()
                } else {
                    return Err(Error::Scene(format!("cell {}: {} coordinate names", c.id, c.coordinates.len())));
                };
                let facets = c
                    .facets
                    .iter()
                    .map(|raw| {
                        let h = HalfSpace::parse(raw, n)?;
                        let normal = h
                            .a
                            .iter()
                            .map(|x| {
                                if x.is_integer() {
                                    num_traits::ToPrimitive::to_i64(x.numer())
                                        .ok_or_else(|| Error::Scene("facet normal too large".into()))
                                } else {
                                    Err(Error::Scene(format!("cell {}: facet normals must be integral", c.id)))
                                }
                            })
                            .collect::<Result<Vec<i64>>>()?;
                        Ok(Facet { normal: IntVector::new(normal), offset: h.b })
                    })
                    .collect::<Result<Vec<_>>>()?;
                if let Some(&b) = c.boundary.iter().find(|&&b| b >= facets.len()) {
                    return Err(Error::Scene(format!("cell {}: boundary facet {b} out of range", c.id)));
                }
                Ok(Cell { id: c.id.clone(), coordinates, facets, boundary: c.boundary.clone() })
            })
            .collect::<Result<Vec<_>>>()?;
        let cell_index = |id: &str| {
            cells
                .iter()
                .position(|c| c.id == id)
                .ok_or_else(|| Error::Scene(format!("unknown cell {id}")))
        };
        let vec_n = |v: &[i64], what: &str| -> Result<IntVector> {
            if v.len() != n {
                return Err(Error::Scene(format!("{what} has length {}, expected {n}", v.len())));
            }
            Ok(IntVector::new(v.to_vec()))
        };
        let mut rhos = Vec::new();
        for r in &f.rhos {
            let ctx = format!("rho {}", r.id);
            if r.cells.is_empty() || r.cells.len() > 2 || r.cells.len() != r.facets.len() {
                return Err(Error::Scene(format!("{ctx}: needs one or two cells with one facet index each")));
            }
            let cidx = r.cells.iter().map(|c| cell_index(c)).collect::<Result<Vec<_>>>()?;
            for (&c, &fi) in cidx.iter().zip(&r.facets) {
                if fi >= cells[c].facets.len() {
                    return Err(Error::Scene(format!("{ctx}: facet {fi} out of range in cell {}", cells[c].id)));
                }
            }
            if r.lambda_names.len() != n - 1 || r.lambda_basis.len() != n - 1 {
                return Err(Error::Scene(format!("{ctx}: needs {} lambda names and basis vectors", n - 1)));
            }
            let lambda_basis =
                r.lambda_basis.iter().map(|v| vec_n(v, &format!("{ctx} lambda_basis"))).collect::<Result<Vec<_>>>()?;
            let lambda_image = match &r.lambda_basis_image {
                Some(b) => {
                    if b.len() != n - 1 {
                        return Err(Error::Scene(format!("{ctx}: lambda_basis_image needs {} vectors", n - 1)));
                    }
                    b.iter().map(|v| vec_n(v, &format!("{ctx} lambda_basis_image"))).collect::<Result<Vec<_>>>()?
                }
                None => lambda_basis.clone(),
            };
            let origin = rationals(&r.origin)?;
            let origin_image = match &r.origin_image {
                Some(o) => rationals(o)?,
                None => origin.clone(),
            };
            if origin.len() != n || origin_image.len() != n {
                return Err(Error::Scene(format!("{ctx}: origin must have {n} coordinates")));
            }
            let zeta = vec_n(&r.zeta, &format!("{ctx} zeta"))?;
            let mut pieces = Vec::new();
            for p in &r.pieces {
                pieces.push(Piece {
                    id: p.id.clone(),
                    region: p.region.iter().map(|h| HalfSpace::parse(h, n)).collect::<Result<Vec<_>>>()?,
                    zeta_image: vec_n(&p.zeta_image, &format!("{ctx} piece {} zeta_image", p.id))?,
                    kappa: None,
                });
            }
            if pieces.is_empty() {
                // a single piece covering ρ, with the standard transport of ζ
                pieces.push(Piece {
                    id: "all".into(),
                    region: Vec::new(),
                    zeta_image: zeta.clone(),
                    kappa: None,
                });
            }
            for (i, p) in pieces.iter().enumerate() {
                if pieces[..i].iter().any(|q| q.id == p.id) {
                    return Err(Error::Scene(format!("{ctx}: duplicate piece {}", p.id)));
                }
            }
            if rhos.iter().any(|x: &Rho| x.id == r.id) {
                return Err(Error::Scene(format!("duplicate rho {}", r.id)));
            }
            rhos.push(Rho {
                id: r.id.clone(),
                cells: cidx,
                facets: r.facets.clone(),
                boundary: r.boundary,
                lambda_names: r.lambda_names.clone(),
                lambda_basis,
                lambda_image,
                origin,
                origin_image,
                zeta,
                pieces,
            });
        }
        let mut kink_assign = Vec::new();
        for kk in &f.kinks {
            let r = find_rho(&rhos, &kk.rho)?;
            for p in piece_indices(&rhos, r, &kk.piece)? {
                kink_assign.push((r, p, kk.kappa));
            }
        }
        for (r, p, kappa) in kink_assign {
            if let Some(old) = rhos[r].pieces[p].kappa {
                if old != kappa {
                    notes.push(Violation::new(
                        "kink",
                        format!("conflicting kinks {old} and {kappa} on {}/{}", rhos[r].id, rhos[r].pieces[p].id),
                    ));
                }
            }
            rhos[r].pieces[p].kappa = Some(kappa);
        }
        let mut gluing = BTreeMap::new();
        for g in &f.gluing {
            let c = cell_index(&g.cell)?;
            let r = find_rho(&rhos, &g.rho)?;
            if g.values.len() != n {
                return Err(Error::Scene(format!("gluing on {}/{}: needs {n} values", g.cell, g.rho)));
            }
            let vals = g.values.iter().map(|s| MultiplicativeValue::parse(s)).collect::<Result<Vec<_>>>()?;
            for v in &vals {
                for (name, _) in v.exponents() {
                    if !f.gluing_generators.iter().any(|x| x == name) {
                        return Err(Error::Gluing(format!("{name} is not a declared gluing generator")));
                    }
                }
            }
            for p in piece_indices(&rhos, r, &g.piece)? {
                gluing.insert((c, r, p), vals.clone());
            }
        }
        let mut slabs = Vec::new();
        for s in &f.slabs {
            let r = find_rho(&rhos, &s.rho)?;
            let piece = match &s.piece {
                None => None,
                Some(_) => Some(piece_indices(&rhos, r, &s.piece)?[0]),
            };
            slabs.push(Slab {
                id: s.id.clone(),
                rho: r,
                piece,
                function: Laurent::parse(&s.function)?,
                region: s.region.iter().map(|h| HalfSpace::parse(h, n)).collect::<Result<Vec<_>>>()?,
            });
        }
        let mut walls = Vec::new();
        for w in &f.walls {
            let c = cell_index(&w.cell)?;
            walls.push(Wall::new(
                &w.id,
                c,
                &cells[c].coordinates,
                vec_n(&w.normal, &format!("wall {} normal", w.id))?,
                w.offset.to_rational()?,
                w.region.iter().map(|h| HalfSpace::parse(h, n)).collect::<Result<Vec<_>>>()?,
                Laurent::parse(&w.function)?,
                &f.series_var,
            )?);
        }
        let mut values = BTreeMap::new();
        for (name, v) in &f.values {
            let z = match v {
                Num::Int(i) => Complex64::new(*i as f64, 0.0),
                Num::Float(x) => Complex64::new(*x, 0.0),
                Num::Str(s) => Laurent::parse(s)?
                    .as_constant()
                    .ok_or_else(|| Error::Scene(format!("value of {name} is not a number")))?
                    .to_complex(),
            };
            values.insert(name.clone(), z);
        }
        for cs in &f.cycles {
            for v in &cs.vertices {
                cell_index(&v.cell)?;
            }
            for e in &cs.edges {
                cell_index(&e.cell)?;
            }
        }
        Ok(Scene {
            dimension: n,
            series_var: f.series_var.clone(),
            kink_var: f.kink_var.clone().unwrap_or_else(|| f.series_var.clone()),
            parameters: f.parameters.clone(),
            gluing_generators: f.gluing_generators.clone(),
            k: f.k,
            oriented: f.oriented,
            values,
            cells,
            rhos,
            gluing,
            slabs,
            walls,
            cycle_specs: f.cycles.clone(),
            load_notes: notes,
            source: f,
        })
    }

    pub fn cell_index(&self, id: &str) -> Result<usize> {
        self.cells
            .iter()
            .position(|c| c.id == id)
            .ok_or_else(|| Error::Scene(format!("unknown cell {id}")))
    }

    pub fn rho_index(&self, id: &str) -> Result<usize> {
        self.rhos
            .iter()
            .position(|r| r.id == id)
            .ok_or_else(|| Error::Scene(format!("unknown rho {id}")))
    }

    /// The `ρ` glued to facet `facet` of cell `cell`, with the side index.
    pub fn rho_at_facet(&self, cell: usize, facet: usize) -> Option<(usize, usize)> {
        self.rhos.iter().enumerate().find_map(|(ri, r)| {
            (0..r.cells.len()).find(|&s| r.cells[s] == cell && r.facets[s] == facet).map(|s| (ri, s))
        })
    }

    /// Numeric parameter values with `overrides` applied; the series
    /// variable defaults to zero.
    pub fn numeric_values(&self, overrides: &HashMap<String, Complex64>) -> HashMap<String, Complex64> {
        let mut v: HashMap<String, Complex64> = self.values.iter().map(|(k, x)| (k.clone(), *x)).collect();
        v.entry(self.series_var.clone()).or_insert(Complex64::new(0.0, 0.0));
        for (k, x) in overrides {
            v.insert(k.clone(), *x);
        }
        v
    }

    /// Gluing value `s_{σρ̲}(ξ)`; trivial when no data is declared.
    pub fn gluing_value(&self, cell: usize, rho: usize, piece: usize, xi: &IntVector) -> MultiplicativeValue {
        match self.gluing.get(&(cell, rho, piece)) {
            None => MultiplicativeValue::identity(),
            Some(vals) => vals
                .iter()
                .zip(xi.as_slice())
                .fold(MultiplicativeValue::identity(), |acc, (v, &e)| acc.mul(&v.pow(e))),
        }
    }

    /// The primitive covector `ď` vanishing on `Λ_ρ` and positive on vectors
    /// pointing from `ρ` into the cell on `side`.
    pub fn d_check(&self, rho: usize, side: usize) -> Result<IntVector> {
        let r = &self.rhos[rho];
        let a = &self.cells[r.cells[side]].facets[r.facets[side]].normal;
        let g = divisibility_index(a)?;
        Ok(IntVector::new(a.as_slice().iter().map(|x| -x / g).collect()))
    }
}

fn find_rho(rhos: &[Rho], id: &str) -> Result<usize> {
    rhos.iter()
        .position(|r| r.id == id)
        .ok_or_else(|| Error::Scene(format!("unknown rho {id}")))
}

fn piece_indices(rhos: &[Rho], rho: usize, piece: &Option<String>) -> Result<Vec<usize>> {
    match piece {
        None => Ok((0..rhos[rho].pieces.len()).collect()),
        Some(p) => rhos[rho]
            .piece_index(p)
            .map(|i| vec![i])
            .ok_or_else(|| Error::Scene(format!("unknown piece {p} of rho {}", rhos[rho].id))),
    }
}

pub(crate) fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).fold(BigRational::zero(), |acc, (x, y)| acc + x * y)
}

pub(crate) fn int_to_rat(v: &IntVector) -> Vec<BigRational> {
    v.as_slice().iter().map(|&x| BigRational::from_integer(x.into())).collect()
}

/// Solves `Σ c_j cols[j] = v` for a square nonsingular system.
pub(crate) fn solve_columns(cols: &[Vec<BigRational>], v: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = v.len();
    if cols.len() != n {
        return None;
    }
    let mut m: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = cols.iter().map(|c| c[i].clone()).collect();
            row.push(v[i].clone());
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let p = m[col][col].clone();
        for x in m[col].iter_mut() {
            *x = &*x / &p;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..=n {
                    let d = &f * &m[col][c];
                    m[r][c] = &m[r][c] - d;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

pub(crate) fn rat_to_int(v: &[BigRational]) -> Option<IntVector> {
    v.iter()
        .map(|x| if x.is_integer() { num_traits::ToPrimitive::to_i64(x.numer()) } else { None })
        .collect::<Option<Vec<i64>>>()
        .map(IntVector::new)
}
