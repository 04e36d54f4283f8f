use std::fmt;

use num_traits::One;
use serde::Serialize;

use super::trunc::{monomial_of, TruncatedSeries};
use crate::error::{Error, Result};
use crate::exact::{GaussRat, IntVector, Laurent};

/// `log(c·z^e) + L` where `c·z^e` is a unit term kept as a formal
/// logarithm and `L` is a weight-positive series.
#[derive(Clone, Debug, PartialEq)]
pub struct LogSeries {
    pub unit: GaussRat,
    pub unit_exp: Vec<i64>,
    pub series: TruncatedSeries,
}

impl LogSeries {
    pub fn exp(&self) -> Result<TruncatedSeries> {
        Ok(exp_series(&self.series)?.mul_monomial(&self.unit_exp, &self.unit))
    }

    pub fn unit_is_one(&self) -> bool {
        self.unit.is_one() && self.unit_exp.iter().all(|&x| x == 0)
    }

    pub fn add(&self, o: &LogSeries) -> LogSeries {
        LogSeries {
            unit: &self.unit * &o.unit,
            unit_exp: self.unit_exp.iter().zip(&o.unit_exp).map(|(a, b)| a + b).collect(),
            series: self.series.add(&o.series),
        }
    }
}

impl fmt::Display for LogSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let unit = Laurent::term(self.unit.clone(), monomial_of(self.series.space(), &self.unit_exp));
        write!(f, "log({unit}) + {}", self.series)
    }
}

/// Splits `f = c·z^e·(1 + g)` where `c·z^e` is the unique term of lowest
/// weight and every term of `g` has strictly positive weight.
pub fn split_unit(f: &TruncatedSeries) -> Result<(GaussRat, Vec<i64>, TruncatedSeries)> {
    let (_, low) = f
        .lowest_weight_terms()
        .ok_or_else(|| Error::NotWeightPositive("zero series".into()))?;
    if low.len() != 1 {
        let names: Vec<String> = low
            .iter()
            .map(|(e, c)| Laurent::term((*c).clone(), monomial_of(f.space(), e)).to_string())
            .collect();
        return Err(Error::NotWeightPositive(format!(
            "several terms of lowest weight: {}",
            names.join(", ")
        )));
    }
    let (e0, c0) = (low[0].0.clone(), low[0].1.clone());
    let inv_e: Vec<i64> = e0.iter().map(|x| -x).collect();
    let g = f
        .mul_monomial(&inv_e, &c0.inv())
        .sub(&TruncatedSeries::one(f.space()))
        .truncate_weight();
    Ok((c0, e0, g))
}

fn check_positive(g: &TruncatedSeries, what: &str) -> Result<()> {
    let sp = g.space();
    if let Some((e, _)) = g.terms().find(|(e, _)| sp.weight(e) <= 0) {
        return Err(Error::NotWeightPositive(format!(
            "{what} contains {} of non-positive weight",
            monomial_of(sp, e)
        )));
    }
    Ok(())
}

/// `Σ_{j≥1} (−1)^{j−1} g^j / j` up to the weight cap.
fn log1p(g: &TruncatedSeries) -> TruncatedSeries {
    let mut acc = TruncatedSeries::zero(g.space());
    let mut p = g.clone();
    let mut j: i64 = 1;
    while !p.is_zero() {
        let c = GaussRat::from_ratio(if j % 2 == 1 { 1 } else { -1 }, j);
        acc = acc.add(&p.scale(&c));
        p = p.mul(g);
        j += 1;
    }
    acc
}

pub fn log_series(f: &TruncatedSeries) -> Result<LogSeries> {
    let (unit, unit_exp, g) = split_unit(f)?;
    check_positive(&g, "the relative series")?;
    Ok(LogSeries { unit, unit_exp, series: log1p(&g) })
}

/// `Σ g^j / j!` for a series all of whose terms have positive weight.
pub fn exp_series(g: &TruncatedSeries) -> Result<TruncatedSeries> {
    check_positive(g, "the exponent")?;
    let g = g.truncate_weight();
    let mut acc = TruncatedSeries::one(g.space());
    let mut p = g.clone();
    let mut j: i64 = 1;
    let mut fact = GaussRat::one();
    while !p.is_zero() {
        fact = &fact * &GaussRat::from_int(j);
        acc = acc.add(&p.scale(&fact.inv()));
        p = p.mul(&g);
        j += 1;
    }
    Ok(acc)
}

pub fn zero_exponent_part(f: &TruncatedSeries) -> TruncatedSeries {
    f.zero_exponent_part()
}

/// A factor `1 + a·z^m·t^ℓ`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BinomialFactor {
    /// Coefficient together with its parameter monomial.
    #[serde(serialize_with = "ser_display")]
    pub coeff: Laurent,
    pub lambda: IntVector,
    pub t_order: i64,
    #[serde(skip)]
    pub exponent: Vec<i64>,
    #[serde(skip)]
    pub scalar: GaussRat,
}

fn ser_display<S: serde::Serializer, T: fmt::Display>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

impl BinomialFactor {
    pub fn as_series(&self, like: &TruncatedSeries) -> TruncatedSeries {
        TruncatedSeries::one(like.space()).add(&TruncatedSeries::monomial(
            like.space(),
            self.exponent.clone(),
            self.scalar.clone(),
        ))
    }
}

impl fmt::Display for BinomialFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(1 + ({})*z^{}*t^{})", self.coeff, self.lambda, self.t_order)
    }
}

/// Result of [`factorize_binomials`]: `unit · z^unit_exp · ∏ factors`.
#[derive(Clone, Debug, PartialEq)]
pub struct Factorization {
    pub unit: GaussRat,
    pub unit_exp: Vec<i64>,
    pub factors: Vec<BinomialFactor>,
}

impl Factorization {
    pub fn expand(&self, like: &TruncatedSeries) -> TruncatedSeries {
        let mut acc = TruncatedSeries::one(like.space());
        for b in &self.factors {
            acc = acc.mul(&b.as_series(like));
        }
        acc.mul_monomial(&self.unit_exp, &self.unit)
    }
}

/// `1 / (1 + a z^m)` up to the cap.
fn inv_binomial(space_of: &TruncatedSeries, e: &[i64], a: &GaussRat) -> TruncatedSeries {
    let x = TruncatedSeries::monomial(space_of.space(), e.to_vec(), -a);
    let mut acc = TruncatedSeries::one(space_of.space());
    let mut p = x.clone();
    while !p.is_zero() {
        acc = acc.add(&p);
        p = p.mul(&x);
    }
    acc
}

/// Writes `f = c·z^e·∏(1 + a_m z^m)` up to the weight cap, peeling off the
/// lowest-weight surviving term at each step.
pub fn factorize_binomials(f: &TruncatedSeries) -> Result<Factorization> {
    let (unit, unit_exp, g) = split_unit(f)?;
    check_positive(&g, "the relative series")?;
    let sp = g.space().clone();
    let nl = sp.n_lambda();
    let ti = sp.t_index();
    let mut h = TruncatedSeries::one(&sp).add(&g);
    let mut factors = Vec::new();
    loop {
        let rest = h.sub(&TruncatedSeries::one(&sp));
        let Some((_, low)) = rest.lowest_weight_terms() else { break };
        let (e, a) = (low[0].0.clone(), low[0].1.clone());
        h = h.mul(&inv_binomial(&h, &e, &a));
        let mut coeff_exp = e.clone();
        for x in coeff_exp.iter_mut().take(nl) {
            *x = 0;
        }
        if let Some(i) = ti {
            coeff_exp[i] = 0;
        }
        factors.push(BinomialFactor {
            coeff: Laurent::term(a.clone(), monomial_of(&sp, &coeff_exp)),
            lambda: IntVector(e[..nl].to_vec()),
            t_order: ti.map_or(0, |i| e[i]),
            exponent: e,
            scalar: a,
        });
    }
    Ok(Factorization { unit, unit_exp, factors })
}

/// Finds the λ-free series `g` such that `log(f + g)` has no λ-free terms
/// through `t`-order `k`.
pub fn normalize_slab(f: &TruncatedSeries) -> Result<TruncatedSeries> {
    let (unit, unit_exp, _) = split_unit(f)?;
    if !unit.is_one() || unit_exp.iter().any(|&x| x != 0) {
        return Err(Error::NotWeightPositive(format!(
            "leading term {} is not 1",
            Laurent::term(unit, monomial_of(f.space(), &unit_exp))
        )));
    }
    let sp = f.space();
    let min_w = f
        .terms()
        .map(|(e, _)| sp.weight(e))
        .filter(|&w| w > 0)
        .min()
        .unwrap_or(1);
    let max_iter = (sp.cap_scaled() / min_w.max(1)) as usize + 2;
    let mut g = TruncatedSeries::zero(sp);
    for _ in 0..=max_iter {
        let l = log_series(&f.add(&g))?;
        let z = l.series.zero_exponent_part().truncate_t();
        if z.is_zero() {
            return Ok(g.truncate_t());
        }
        g = g.sub(&z);
    }
    Err(Error::NotWeightPositive("normalization did not converge".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::space::SeriesSpace;
    use num_rational::BigRational;
    use std::sync::Arc;

    fn r(p: i64) -> BigRational {
        BigRational::from_integer(p.into())
    }

    fn kp2_space(k: u32) -> Arc<SeriesSpace> {
        SeriesSpace::new(
            vec!["x".into(), "y".into()],
            vec!["s".into()],
            Some("s"),
            vec![r(1), r(1), r(3)],
            k,
            Some(r(3 * k as i64)),
        )
        .unwrap()
    }

    #[test]
    fn log_of_binomial() {
        let sp = SeriesSpace::t_adic(vec![], vec!["a".into(), "t".into()], "t", 3).unwrap();
        let f = TruncatedSeries::parse(&sp, "1 + a*t").unwrap();
        let l = log_series(&f).unwrap();
        assert!(l.unit_is_one());
        let want = TruncatedSeries::parse(&sp, "a*t - 1/2*a^2*t^2 + 1/3*a^3*t^3").unwrap();
        assert_eq!(l.series, want);
    }

    #[test]
    fn log_of_square() {
        let sp = SeriesSpace::t_adic(vec![], vec!["t".into()], "t", 4).unwrap();
        let f = TruncatedSeries::parse(&sp, "(1+t)^2").unwrap();
        let one = log_series(&TruncatedSeries::parse(&sp, "1+t").unwrap()).unwrap();
        assert_eq!(log_series(&f).unwrap().series, one.series.scale(&GaussRat::from_int(2)));
    }

    #[test]
    fn local_p2_zero_part() {
        let sp = kp2_space(3);
        let f = TruncatedSeries::parse(&sp, "1 + x + y + s/(x*y)").unwrap();
        let z = log_series(&f).unwrap().series.zero_exponent_part().truncate_t();
        assert_eq!(z, TruncatedSeries::parse(&sp, "2*s - 15*s^2 + 560/3*s^3").unwrap());
        let h = exp_series(&z).unwrap().truncate_t();
        assert_eq!(h.coeff(&[0, 0, 1]), GaussRat::from_int(2));
        assert_eq!(h.coeff(&[0, 0, 2]), GaussRat::from_int(-13));
    }

    #[test]
    fn local_p2_normalization() {
        let sp = kp2_space(3);
        let f = TruncatedSeries::parse(&sp, "1 + x + y + s/(x*y)").unwrap();
        let g = normalize_slab(&f).unwrap();
        assert_eq!(g, TruncatedSeries::parse(&sp, "-2*s + 5*s^2 - 32*s^3").unwrap());
        assert!(normalize_slab(&f.add(&g)).unwrap().is_zero());
    }

    #[test]
    fn normalization_with_pure_t_term() {
        let sp = SeriesSpace::new(
            vec!["u".into()],
            vec!["t".into()],
            Some("t"),
            vec![r(0), r(1)],
            3,
            None,
        )
        .unwrap();
        let f = TruncatedSeries::parse(&sp, "1 + (1+u)*t").unwrap();
        let g = normalize_slab(&f).unwrap();
        assert_eq!(g.coeff(&[0, 1]), GaussRat::from_int(-1));
        let z = log_series(&f.add(&g)).unwrap().series.zero_exponent_part().truncate_t();
        assert!(z.is_zero());
    }

    #[test]
    fn factorization_of_plane() {
        let sp = SeriesSpace::new(
            vec!["x".into(), "y".into(), "z".into()],
            vec![],
            None,
            vec![r(1), r(1), r(1)],
            2,
            Some(r(2)),
        )
        .unwrap();
        let f = TruncatedSeries::parse(&sp, "1 + x + y + z").unwrap();
        let fac = factorize_binomials(&f).unwrap();
        let get = |e: [i64; 3]| {
            fac.factors
                .iter()
                .find(|b| b.exponent == e.to_vec())
                .map(|b| b.scalar.clone())
        };
        for e in [[1, 0, 0], [0, 1, 0], [0, 0, 1]] {
            assert_eq!(get(e), Some(GaussRat::from_int(1)));
        }
        for e in [[1, 1, 0], [1, 0, 1], [0, 1, 1]] {
            assert_eq!(get(e), Some(GaussRat::from_int(-1)));
        }
        assert_eq!(fac.expand(&f), f);
    }

    #[test]
    fn rejects_tied_leading_terms() {
        let sp = SeriesSpace::new(
            vec!["u".into(), "v".into()],
            vec![],
            None,
            vec![r(1), r(1)],
            2,
            None,
        )
        .unwrap();
        let f = TruncatedSeries::parse(&sp, "u + v + u*v").unwrap();
        assert!(log_series(&f).is_err());
        let g = TruncatedSeries::parse(&sp, "1 + u").unwrap();
        assert!(exp_series(&g).is_err());
    }
}
