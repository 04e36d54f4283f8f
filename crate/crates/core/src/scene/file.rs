use std::collections::BTreeMap;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::parse_rational;

/// A rational number in a scene file: an integer, a decimal or a string
/// such as `"-3/2"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Int(i64),
    Float(f64),
    Str(String),
}

impl Num {
    pub fn to_rational(&self) -> Result<BigRational> {
        match self {
            Num::Int(n) => Ok(BigRational::from_integer((*n).into())),
            Num::Float(x) => {
                if !x.is_finite() {
                    return Err(Error::Parse(format!("non-finite number {x}")));
                }
                parse_rational(&format!("{x}"))
            }
            Num::Str(s) => parse_rational(s),
        }
    }
}

impl Default for Num {
    fn default() -> Self {
        Num::Int(0)
    }
}

impl From<i64> for Num {
    fn from(n: i64) -> Self {
        Num::Int(n)
    }
}

impl From<&str> for Num {
    fn from(s: &str) -> Self {
        Num::Str(s.to_string())
    }
}

pub fn rationals(v: &[Num]) -> Result<Vec<BigRational>> {
    v.iter().map(Num::to_rational).collect()
}

/// Scene file root.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneFile {
    pub dimension: usize,
    /// Grading variable for truncation.
    pub series_var: String,
    /// Symbol of the kink variable in `t^{c₁}`; defaults to `series_var`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kink_var: Option<String>,
    #[serde(default)]
    pub parameters: Vec<String>,
    #[serde(default)]
    pub gluing_generators: Vec<String>,
    #[serde(default = "default_k")]
    pub k: u32,
    #[serde(default = "default_true")]
    pub oriented: bool,
    /// Numeric values of parameters, used for amoebas and weight search.
    #[serde(default)]
    pub values: BTreeMap<String, Num>,
    #[serde(default, rename = "maximal_cell")]
    pub maximal_cells: Vec<CellSpec>,
    #[serde(default, rename = "rho")]
    pub rhos: Vec<RhoSpec>,
    #[serde(default, rename = "kink")]
    pub kinks: Vec<KinkSpec>,
    #[serde(default)]
    pub gluing: Vec<GluingSpec>,
    #[serde(default, rename = "slab")]
    pub slabs: Vec<SlabSpec>,
    #[serde(default, rename = "wall")]
    pub walls: Vec<WallSpec>,
    #[serde(default, rename = "cycle")]
    pub cycles: Vec<CycleSpec>,
    #[serde(default, rename = "loop")]
    pub loops: Vec<LoopSpec>,
}

fn default_k() -> u32 {
    4
}

fn default_true() -> bool {
    true
}

/// A maximal cell in its own chart, as an intersection of half-spaces
/// `a·p ≤ b`, each written `[a₁, …, aₙ, b]`.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellSpec {
    pub id: String,
    /// Names of the chart monomials; defaults to `z1, …, zn`.
    #[serde(default)]
    pub coordinates: Vec<String>,
    pub facets: Vec<Vec<Num>>,
    /// Indices of facets on the boundary of `B`.
    #[serde(default)]
    pub boundary: Vec<usize>,
}

/// A codimension-one cell with its transition data.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RhoSpec {
    pub id: String,
    pub cells: Vec<String>,
    /// Facet index of `ρ` in each incident cell.
    pub facets: Vec<usize>,
    #[serde(default)]
    pub boundary: bool,
    pub lambda_names: Vec<String>,
    /// Basis of `Λ_ρ` in the chart of the first cell.
    pub lambda_basis: Vec<Vec<i64>>,
    /// The same basis in the chart of the second cell; defaults to
    /// `lambda_basis`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_basis_image: Option<Vec<Vec<i64>>>,
    pub origin: Vec<Num>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub origin_image: Option<Vec<Num>>,
    /// Generator of `Λ_σ/Λ_ρ` pointing from `ρ` into the first cell.
    pub zeta: Vec<i64>,
    #[serde(default, rename = "piece")]
    pub pieces: Vec<PieceSpec>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceSpec {
    pub id: String,
    /// Half-spaces `a·p ≤ b` in the first cell's chart cutting the piece
    /// out of `ρ`.
    #[serde(default)]
    pub region: Vec<Vec<Num>>,
    /// Parallel transport of `zeta` through the piece into the second cell.
    pub zeta_image: Vec<i64>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KinkSpec {
    pub rho: String,
    /// All pieces of `rho` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub piece: Option<String>,
    pub kappa: i64,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GluingSpec {
    pub cell: String,
    pub rho: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub piece: Option<String>,
    /// Values on the chart basis `e₁, …, eₙ` of the cell.
    pub values: Vec<String>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SlabSpec {
    pub id: String,
    pub rho: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub piece: Option<String>,
    /// Laurent polynomial in the `lambda_names` of `rho` and the parameters.
    pub function: String,
    #[serde(default)]
    pub region: Vec<Vec<Num>>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WallSpec {
    pub id: String,
    pub cell: String,
    /// Primitive covector; the wall lies in `normal·p = offset`.
    pub normal: Vec<i64>,
    #[serde(default = "zero_num")]
    pub offset: Num,
    #[serde(default)]
    pub region: Vec<Vec<Num>>,
    /// `1 + a z^m t^ℓ` in the cell coordinates and parameters.
    pub function: String,
}

fn zero_num() -> Num {
    Num::Int(0)
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CycleSpec {
    pub id: String,
    #[serde(default, rename = "vertex")]
    pub vertices: Vec<VertexSpec>,
    #[serde(default, rename = "edge")]
    pub edges: Vec<EdgeSpec>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexSpec {
    pub id: String,
    pub cell: String,
    pub position: Vec<Num>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeSpec {
    pub tail: String,
    pub head: String,
    pub cell: String,
    pub xi: Vec<i64>,
}

/// A closed polygon in one cell, for codimension-zero consistency checks.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoopSpec {
    pub id: String,
    pub cell: String,
    pub points: Vec<Vec<Num>>,
}
