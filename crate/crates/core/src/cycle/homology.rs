use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{smith_normal_form, IntMatrix};

/// Transport matrix on one edge of a [`TwistedComplexFile`].
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonodromySpec {
    pub edge: [usize; 2],
    pub matrix: Vec<Vec<i64>>,
}

/// File form of a twisted complex: a simplicial complex of dimension at
/// most two with transport matrices on some edges (identity elsewhere).
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwistedComplexFile {
    pub rank: usize,
    pub vertices: usize,
    #[serde(default)]
    pub edges: Vec<[usize; 2]>,
    #[serde(default)]
    pub triangles: Vec<[usize; 3]>,
    #[serde(default)]
    pub monodromy: Vec<MonodromySpec>,
}

/// A simplicial complex with a local system of free modules of rank
/// `rank`. Simplices have increasing vertex labels; a chain on a simplex
/// takes values in the fibre over its first vertex, and the matrix on an
/// edge `[a, b]` transports the fibre over `a` to the fibre over `b`.
#[derive(Clone, Debug)]
pub struct TwistedComplex {
    rank: usize,
    vertices: usize,
    edges: Vec<[usize; 2]>,
    triangles: Vec<[usize; 3]>,
    transport: BTreeMap<[usize; 2], IntMatrix>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyGroup {
    pub degree: usize,
    pub rank: usize,
    /// Orders of the cyclic torsion factors.
    pub torsion: Vec<BigInt>,
}

impl std::fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if self.rank > 0 {
            parts.push(if self.rank == 1 { "Z".into() } else { format!("Z^{}", self.rank) });
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            parts.push("0".into());
        }
        write!(f, "H_{} = {}", self.degree, parts.join(" + "))
    }
}

impl TwistedComplex {
    pub fn new(file: &TwistedComplexFile) -> Result<TwistedComplex> {
        let n = file.rank;
        if n == 0 {
            return Err(Error::Invalid("local system of rank zero".into()));
        }
        let mut edges = file.edges.clone();
        for e in &edges {
            if e[0] >= e[1] || e[1] >= file.vertices {
                return Err(Error::Invalid(format!("edge {e:?} is not an increasing pair of vertices")));
            }
        }
        edges.sort();
        edges.dedup();
        for t in &file.triangles {
            if !(t[0] < t[1] && t[1] < t[2] && t[2] < file.vertices) {
                return Err(Error::Invalid(format!("triangle {t:?} is not an increasing triple of vertices")));
            }
            for f in [[t[0], t[1]], [t[0], t[2]], [t[1], t[2]]] {
                if edges.binary_search(&f).is_err() {
                    return Err(Error::Invalid(format!("face {f:?} of triangle {t:?} is missing")));
                }
            }
        }
        let mut transport = BTreeMap::new();
        for m in &file.monodromy {
            if edges.binary_search(&m.edge).is_err() {
                return Err(Error::Invalid(format!("monodromy on unknown edge {:?}", m.edge)));
            }
            if m.matrix.len() != n || m.matrix.iter().any(|r| r.len() != n) {
                return Err(Error::Invalid(format!("monodromy on {:?} is not {n}x{n}", m.edge)));
            }
            let g = IntMatrix::from_rows_i64(&m.matrix, n);
            if !g.det().abs().is_one() {
                return Err(Error::Invalid(format!("monodromy on {:?} is not invertible over Z", m.edge)));
            }
            transport.insert(m.edge, g);
        }
        Ok(TwistedComplex { rank: n, vertices: file.vertices, edges, triangles: file.triangles.clone(), transport })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    fn g(&self, a: usize, b: usize) -> IntMatrix {
        self.transport.get(&[a, b]).cloned().unwrap_or_else(|| IntMatrix::identity(self.rank))
    }

    fn place(m: &mut IntMatrix, row: usize, col: usize, block: &IntMatrix, sign: i64) {
        for i in 0..block.nrows() {
            for j in 0..block.ncols() {
                m[(row + i, col + j)] += &block[(i, j)] * sign;
            }
        }
    }

    /// Matrix of `∂_q : C_q → C_{q−1}`.
    pub fn boundary(&self, q: usize) -> IntMatrix {
        let n = self.rank;
        let id = IntMatrix::identity(n);
        match q {
            1 => {
                let mut m = IntMatrix::zeros(self.vertices * n, self.edges.len() * n);
                for (k, &[a, b]) in self.edges.iter().enumerate() {
                    Self::place(&mut m, b * n, k * n, &self.g(a, b), 1);
                    Self::place(&mut m, a * n, k * n, &id, -1);
                }
                m
            }
            2 => {
                let mut m = IntMatrix::zeros(self.edges.len() * n, self.triangles.len() * n);
                let idx = |e: [usize; 2]| self.edges.binary_search(&e).expect("faces checked on construction");
                for (k, &[a, b, c]) in self.triangles.iter().enumerate() {
                    Self::place(&mut m, idx([b, c]) * n, k * n, &self.g(a, b), 1);
                    Self::place(&mut m, idx([a, c]) * n, k * n, &id, -1);
                    Self::place(&mut m, idx([a, b]) * n, k * n, &id, 1);
                }
                m
            }
            _ => IntMatrix::zeros(self.dim(q - 1), self.dim(q)),
        }
    }

    fn dim(&self, q: usize) -> usize {
        self.rank
            * match q {
                0 => self.vertices,
                1 => self.edges.len(),
                2 => self.triangles.len(),
                _ => 0,
            }
    }
}

/// `H_q` of a twisted complex, from Smith normal forms of the boundary maps.
pub fn twisted_homology(t: &TwistedComplex, q: usize) -> Result<HomologyGroup> {
    let d1 = t.boundary(1);
    let d2 = t.boundary(2);
    if !d1.mul(&d2).is_zero() {
        return Err(Error::BoundarySquared(2));
    }
    let rank_of = |k: usize| -> usize {
        if k == 0 || t.dim(k) == 0 || t.dim(k - 1) == 0 {
            0
        } else {
            smith_normal_form(&t.boundary(k)).rank
        }
    };
    let rank = t.dim(q) - rank_of(q) - rank_of(q + 1);
    let torsion = if t.dim(q + 1) == 0 || t.dim(q) == 0 || q + 1 > 2 {
        Vec::new()
    } else {
        smith_normal_form(&t.boundary(q + 1)).torsion()
    };
    Ok(HomologyGroup { degree: q, rank, torsion })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle(rank: usize, mono: Option<Vec<Vec<i64>>>) -> TwistedComplex {
        TwistedComplex::new(&TwistedComplexFile {
            rank,
            vertices: 3,
            edges: vec![[0, 1], [1, 2], [0, 2]],
            triangles: vec![],
            monodromy: mono.map(|m| vec![MonodromySpec { edge: [0, 2], matrix: m }]).unwrap_or_default(),
        })
        .unwrap()
    }

    /// Square annulus: inner vertices 0..4, outer 4..8, with a cut on `[0, 4]`.
    fn annulus(mono: Vec<Vec<i64>>) -> TwistedComplex {
        let mut tris = Vec::new();
        for i in 0..4 {
            let (a, b) = (i, (i + 1) % 4);
            let (c, d) = (i + 4, (i + 1) % 4 + 4);
            let mut t1 = [a, b, d];
            let mut t2 = [a, c, d];
            t1.sort();
            t2.sort();
            tris.push(t1);
            tris.push(t2);
        }
        let mut edges = Vec::new();
        for t in &tris {
            edges.extend([[t[0], t[1]], [t[0], t[2]], [t[1], t[2]]]);
        }
        edges.sort();
        edges.dedup();
        // transport is the identity except across the cut between the last
        // and the first sector
        let inv = {
            let m = IntMatrix::from_rows_i64(&mono, 2);
            let (a, b, c, d) = (&m[(0, 0)], &m[(0, 1)], &m[(1, 0)], &m[(1, 1)]);
            let det = a * d - b * c;
            vec![
                vec![i64::try_from(d * &det).unwrap(), i64::try_from(-b * &det).unwrap()],
                vec![i64::try_from(-c * &det).unwrap(), i64::try_from(a * &det).unwrap()],
            ]
        };
        let cut: Vec<MonodromySpec> = edges
            .iter()
            .filter(|e| {
                let s = |v: usize| v % 4;
                (s(e[0]) == 0 && s(e[1]) == 3) || (s(e[0]) == 3 && s(e[1]) == 0)
            })
            .map(|&e| MonodromySpec { edge: e, matrix: if e[0] % 4 == 0 { inv.clone() } else { mono.clone() } })
            .collect();
        TwistedComplex::new(&TwistedComplexFile { rank: 2, vertices: 8, edges, triangles: tris, monodromy: cut }).unwrap()
    }

    #[test]
    fn circle_trivial_system() {
        let t = circle(2, None);
        assert_eq!(twisted_homology(&t, 1).unwrap().rank, 2);
        assert_eq!(twisted_homology(&t, 0).unwrap().rank, 2);
    }

    #[test]
    fn circle_focus_focus_monodromy() {
        let t = circle(2, Some(vec![vec![1, 0], vec![1, 1]]));
        let h1 = twisted_homology(&t, 1).unwrap();
        assert_eq!(h1.rank, 1);
        assert!(h1.torsion.is_empty());
        let h0 = twisted_homology(&t, 0).unwrap();
        assert_eq!(h0.rank, 1);
    }

    #[test]
    fn circle_twice_dehn_twist_torsion() {
        let t = circle(2, Some(vec![vec![1, 0], vec![2, 1]]));
        let h0 = twisted_homology(&t, 0).unwrap();
        assert_eq!((h0.rank, h0.torsion.clone()), (1, vec![BigInt::from(2)]));
    }

    #[test]
    fn annulus_focus_focus() {
        let t = annulus(vec![vec![1, 0], vec![1, 1]]);
        assert_eq!(twisted_homology(&t, 1).unwrap().rank, 1);
        assert_eq!(twisted_homology(&t, 2).unwrap().rank, 0);
        let triv = annulus(vec![vec![1, 0], vec![0, 1]]);
        assert_eq!(twisted_homology(&triv, 1).unwrap().rank, 2);
    }

    #[test]
    fn non_flat_rejected() {
        let file = TwistedComplexFile {
            rank: 2,
            vertices: 3,
            edges: vec![[0, 1], [0, 2], [1, 2]],
            triangles: vec![[0, 1, 2]],
            monodromy: vec![MonodromySpec { edge: [0, 2], matrix: vec![vec![1, 0], vec![1, 1]] }],
        };
        let t = TwistedComplex::new(&file).unwrap();
        assert!(matches!(twisted_homology(&t, 1), Err(Error::BoundarySquared(_))));
    }

    #[test]
    fn bad_input() {
        let mut f = TwistedComplexFile { rank: 2, vertices: 2, edges: vec![[1, 0]], triangles: vec![], monodromy: vec![] };
        assert!(TwistedComplex::new(&f).is_err());
        f.edges = vec![[0, 1]];
        f.monodromy = vec![MonodromySpec { edge: [0, 1], matrix: vec![vec![2, 0], vec![0, 1]] }];
        assert!(TwistedComplex::new(&f).is_err());
    }
}
