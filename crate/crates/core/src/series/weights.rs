use minilp::{ComparisonOp, OptimizationDirection, Problem};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// Input to the weight search: the exponent vectors of a Laurent series
/// (torus directions first) and the modulus of each term at a numeric
/// point, used to pick the unit.
#[derive(Clone, Debug)]
pub struct WeightProblem<'a> {
    pub n_lambda: usize,
    pub t: Option<usize>,
    pub exponents: &'a [Vec<i64>],
    pub moduli: &'a [f64],
    pub k: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeightChoice {
    pub weights: Vec<BigRational>,
    /// Index of the unit term.
    pub unit: usize,
    pub cap: BigRational,
    /// Whether non-series parameters needed nonzero weight.
    pub parameter_weights: bool,
}

/// Best rational approximation with bounded denominator.
pub fn rationalize(x: f64, max_den: i64) -> BigRational {
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut y = x;
    for _ in 0..64 {
        let a = y.floor();
        if a.abs() > 1e12 {
            break;
        }
        let ai = a as i64;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        if k2 > max_den {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = y - a;
        if frac.abs() < 1e-12 {
            break;
        }
        y = 1.0 / frac;
    }
    if k1 == 0 {
        return BigRational::from_integer(BigInt::from(x.round() as i64));
    }
    BigRational::new(h1.into(), k1.into())
}

/// Chooses the unit as the λ-free term of largest modulus, then solves the
/// linear program
///
/// maximize ε subject to `w·(e_j − e_unit) ≥ ε` for every other term,
/// `w_t ≥ ε`, and `|w_i| ≤ 1`,
///
/// first with all non-series parameters at weight zero and then with free
/// parameter weights. The solution is rounded to small rationals and
/// re-verified exactly.
pub fn find_weights(p: &WeightProblem) -> Result<WeightChoice> {
    let n = p.exponents.first().map_or(0, |e| e.len());
    if p.exponents.is_empty() {
        return Err(Error::WeightSearch("empty series".into()));
    }
    let unit = (0..p.exponents.len())
        .filter(|&i| p.exponents[i][..p.n_lambda].iter().all(|&x| x == 0))
        .max_by(|&a, &b| {
            p.moduli[a]
                .partial_cmp(&p.moduli[b])
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(b.cmp(&a))
        })
        .ok_or_else(|| Error::WeightSearch("no term is free of torus variables".into()))?;
    let rel: Vec<Vec<i64>> = p
        .exponents
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != unit)
        .map(|(_, e)| e.iter().zip(&p.exponents[unit]).map(|(a, b)| a - b).collect())
        .collect();
    for free_params in [false, true] {
        if let Some(w) = solve_lp(&rel, n, p.n_lambda, p.t, free_params) {
            let weights = w;
            let cap = default_cap(&weights, &rel, p.t, p.k);
            let parameter_weights = weights
                .iter()
                .enumerate()
                .any(|(i, x)| i >= p.n_lambda && Some(i) != p.t && !x.is_zero());
            return Ok(WeightChoice { weights, unit, cap, parameter_weights });
        }
    }
    Err(Error::WeightSearch(
        "no grading makes the series positive around a single unit term".into(),
    ))
}

fn default_cap(w: &[BigRational], rel: &[Vec<i64>], t: Option<usize>, k: u32) -> BigRational {
    let k = BigRational::from_integer(k.into());
    if let Some(ti) = t {
        if w[ti].is_positive() {
            return &w[ti] * &k;
        }
    }
    let min = rel
        .iter()
        .map(|d| dot(w, d))
        .min()
        .unwrap_or_else(|| BigRational::from_integer(1.into()));
    min * k
}

fn dot(w: &[BigRational], d: &[i64]) -> BigRational {
    w.iter()
        .zip(d)
        .map(|(a, &b)| a * BigRational::from_integer(b.into()))
        .fold(BigRational::zero(), |x, y| x + y)
}

fn solve_lp(
    rel: &[Vec<i64>],
    n: usize,
    n_lambda: usize,
    t: Option<usize>,
    free_params: bool,
) -> Option<Vec<BigRational>> {
    let mut lp = Problem::new(OptimizationDirection::Maximize);
    let vars: Vec<_> = (0..n)
        .map(|i| {
            let bounds = if i < n_lambda || free_params || Some(i) == t {
                (-1.0, 1.0)
            } else {
                (0.0, 0.0)
            };
            lp.add_var(0.0, bounds)
        })
        .collect();
    let eps = lp.add_var(1.0, (-1.0, 1.0));
    for d in rel {
        let mut expr: Vec<_> = d
            .iter()
            .enumerate()
            .filter(|(_, &x)| x != 0)
            .map(|(i, &x)| (vars[i], x as f64))
            .collect();
        expr.push((eps, -1.0));
        lp.add_constraint(&expr[..], ComparisonOp::Ge, 0.0);
    }
    if let Some(ti) = t {
        lp.add_constraint(&[(vars[ti], 1.0), (eps, -1.0)][..], ComparisonOp::Ge, 0.0);
    }
    let sol = lp.solve().ok()?;
    if sol[eps] < 1e-9 {
        return None;
    }
    for max_den in [12, 1000, 100_000] {
        let w: Vec<BigRational> = vars.iter().map(|&v| rationalize(sol[v], max_den)).collect();
        let ok = rel.iter().all(|d| dot(&w, d).is_positive())
            && t.is_none_or(|ti| w[ti].is_positive());
        if ok {
            return Some(w);
        }
    }
    None
}
