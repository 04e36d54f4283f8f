use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::space::SeriesSpace;
use crate::error::{Error, Result};
use crate::exact::{GaussRat, IntVector, Laurent, Monomial};

/// An element of the truncated graded ring over a [`SeriesSpace`].
///
/// Products drop every term whose weight exceeds the cap. The `t`-order
/// bound is applied by [`TruncatedSeries::truncate_t`] at output
/// boundaries, since negative `t`-exponents may occur in intermediate
/// relative series.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries {
    space: Arc<SeriesSpace>,
    terms: BTreeMap<Vec<i64>, GaussRat>,
}

/// One entry of the canonical JSON form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesTermJson {
    pub lambda: Vec<i64>,
    pub t: i64,
    pub coeff: String,
}

impl TruncatedSeries {
    pub fn zero(space: &Arc<SeriesSpace>) -> Self {
        TruncatedSeries { space: space.clone(), terms: BTreeMap::new() }
    }

    pub fn one(space: &Arc<SeriesSpace>) -> Self {
        Self::monomial(space, vec![0; space.nvars()], GaussRat::one())
    }

    pub fn constant(space: &Arc<SeriesSpace>, c: GaussRat) -> Self {
        Self::monomial(space, vec![0; space.nvars()], c)
    }

    pub fn monomial(space: &Arc<SeriesSpace>, e: Vec<i64>, c: GaussRat) -> Self {
        assert_eq!(e.len(), space.nvars(), "exponent length mismatch");
        let mut s = Self::zero(space);
        if !c.is_zero() {
            s.terms.insert(e, c);
        }
        s
    }

    /// Converts a Laurent polynomial whose variables all belong to the
    /// space. No truncation is applied.
    pub fn from_laurent(space: &Arc<SeriesSpace>, f: &Laurent) -> Result<Self> {
        let mut s = Self::zero(space);
        for (m, c) in f.terms() {
            let e = exponent_of(space, m)?;
            s.add_term(e, c);
        }
        Ok(s)
    }

    pub fn parse(space: &Arc<SeriesSpace>, src: &str) -> Result<Self> {
        Self::from_laurent(space, &Laurent::parse(src)?)
    }

    pub fn to_laurent(&self) -> Laurent {
        let mut l = Laurent::zero();
        for (e, c) in &self.terms {
            l.add_term(monomial_of(&self.space, e), c);
        }
        l
    }

    pub fn space(&self) -> &Arc<SeriesSpace> {
        &self.space
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &GaussRat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: &[i64]) -> GaussRat {
        self.terms.get(e).cloned().unwrap_or_else(GaussRat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.coeff(&vec![0; self.space.nvars()]).is_one()
    }

    pub fn add_term(&mut self, e: Vec<i64>, c: &GaussRat) {
        if c.is_zero() {
            return;
        }
        let zero = {
            let slot = self.terms.entry(e.clone()).or_insert_with(GaussRat::zero);
            *slot += c;
            slot.is_zero()
        };
        if zero {
            self.terms.remove(&e);
        }
    }

    fn check_space(&self, o: &Self) {
        assert!(
            Arc::ptr_eq(&self.space, &o.space) || self.space == o.space,
            "series from different spaces"
        );
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check_space(o);
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), c);
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        TruncatedSeries {
            space: self.space.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &GaussRat) -> Self {
        if c.is_zero() {
            return Self::zero(&self.space);
        }
        TruncatedSeries {
            space: self.space.clone(),
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    /// Product, dropping terms of weight above the cap.
    pub fn mul(&self, o: &Self) -> Self {
        self.check_space(o);
        let cap = self.space.cap_scaled();
        let wo: Vec<(i64, &Vec<i64>, &GaussRat)> =
            o.terms.iter().map(|(e, c)| (self.space.weight(e), e, c)).collect();
        let mut r = Self::zero(&self.space);
        for (e1, c1) in &self.terms {
            let w1 = self.space.weight(e1);
            for (w2, e2, c2) in &wo {
                if w1 + w2 > cap {
                    continue;
                }
                let e: Vec<i64> = e1.iter().zip(e2.iter()).map(|(a, b)| a + b).collect();
                r.add_term(e, &(c1 * c2));
            }
        }
        r
    }

    /// Multiplication by a single term, without truncation.
    pub fn mul_monomial(&self, e: &[i64], c: &GaussRat) -> Self {
        let mut r = Self::zero(&self.space);
        if c.is_zero() {
            return r;
        }
        for (e1, c1) in &self.terms {
            let ee: Vec<i64> = e1.iter().zip(e).map(|(a, b)| a + b).collect();
            r.terms.insert(ee, c1 * c);
        }
        r
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(&self.space);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Drops terms of weight above the cap.
    pub fn truncate_weight(&self) -> Self {
        let cap = self.space.cap_scaled();
        self.filter(|e| self.space.weight(e) <= cap)
    }

    /// Drops terms of `t`-order above `k`.
    pub fn truncate_t(&self) -> Self {
        let k = self.space.k() as i64;
        self.filter(|e| self.space.t_order(e) <= k)
    }

    pub fn filter(&self, keep: impl Fn(&[i64]) -> bool) -> Self {
        TruncatedSeries {
            space: self.space.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| keep(e))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Terms with vanishing torus exponent.
    pub fn zero_exponent_part(&self) -> Self {
        self.filter(|e| self.space.is_lambda_free(e))
    }

    /// The minimal weight among the terms, with the terms attaining it.
    pub fn lowest_weight_terms(&self) -> Option<(i64, Vec<(&Vec<i64>, &GaussRat)>)> {
        let w = self.terms.keys().map(|e| self.space.weight(e)).min()?;
        let ts = self.terms.iter().filter(|(e, _)| self.space.weight(e) == w).collect();
        Some((w, ts))
    }

    /// Moves the series to another space over the same variables.
    pub fn in_space(&self, space: &Arc<SeriesSpace>) -> Result<Self> {
        if space.vars() != self.space.vars() {
            return Err(Error::Invalid("series spaces have different variables".into()));
        }
        Ok(TruncatedSeries { space: space.clone(), terms: self.terms.clone() })
    }

    /// Canonical JSON form: terms grouped by torus exponent and `t`-order,
    /// the coefficient being a Laurent polynomial in the other parameters.
    pub fn to_json(&self) -> Vec<SeriesTermJson> {
        let nl = self.space.n_lambda();
        let ti = self.space.t_index();
        let mut groups: BTreeMap<(Vec<i64>, i64), Laurent> = BTreeMap::new();
        for (e, c) in &self.terms {
            let lam = e[..nl].to_vec();
            let t = ti.map_or(0, |i| e[i]);
            let m = Monomial::from_pairs(
                self.space
                    .vars()
                    .iter()
                    .enumerate()
                    .skip(nl)
                    .filter(|(i, _)| Some(*i) != ti)
                    .map(|(i, v)| (v.as_str(), e[i])),
            );
            groups.entry((lam, t)).or_default().add_term(m, c);
        }
        groups
            .into_iter()
            .map(|((lambda, t), coeff)| SeriesTermJson { lambda, t, coeff: coeff.to_string() })
            .collect()
    }

    pub fn from_json(space: &Arc<SeriesSpace>, items: &[SeriesTermJson]) -> Result<Self> {
        let nl = space.n_lambda();
        let mut s = Self::zero(space);
        for it in items {
            if it.lambda.len() != nl {
                return Err(Error::Parse(format!("lambda exponent of length {}", it.lambda.len())));
            }
            if it.t != 0 && space.t_index().is_none() {
                return Err(Error::Parse("t exponent without a series variable".into()));
            }
            let coeff = Laurent::parse(&it.coeff)?;
            for (m, c) in coeff.terms() {
                let mut e = exponent_of(space, m)?;
                if !e[..nl].iter().all(|&x| x == 0) {
                    return Err(Error::Parse("torus variable inside a coefficient".into()));
                }
                if let Some(ti) = space.t_index() {
                    if e[ti] != 0 {
                        return Err(Error::Parse("series variable inside a coefficient".into()));
                    }
                    e[ti] = it.t;
                }
                for (slot, l) in e.iter_mut().zip(&it.lambda) {
                    *slot = *l;
                }
                s.add_term(e, c);
            }
        }
        Ok(s)
    }

    pub fn lambda_part(&self, e: &[i64]) -> IntVector {
        IntVector(e[..self.space.n_lambda()].to_vec())
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_laurent())
    }
}

pub(crate) fn exponent_of(space: &SeriesSpace, m: &Monomial) -> Result<Vec<i64>> {
    let mut e = vec![0; space.nvars()];
    for (name, x) in m.iter() {
        let i = space
            .index(name)
            .ok_or_else(|| Error::Invalid(format!("unknown variable {name}")))?;
        e[i] = x;
    }
    Ok(e)
}

pub(crate) fn monomial_of(space: &SeriesSpace, e: &[i64]) -> Monomial {
    Monomial::from_pairs(space.vars().iter().zip(e).map(|(v, &x)| (v.as_str(), x)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn space() -> Arc<SeriesSpace> {
        let w = |p: i64| BigRational::from_integer(p.into());
        SeriesSpace::new(
            vec!["u".into()],
            vec!["a".into(), "t".into()],
            Some("t"),
            vec![w(1), w(0), w(1)],
            3,
            None,
        )
        .unwrap()
    }

    #[test]
    fn product_truncates_by_weight() {
        let sp = space();
        let f = TruncatedSeries::parse(&sp, "1 + a*t + u").unwrap();
        let g = f.pow(4);
        assert!(g.terms().all(|(e, _)| sp.weight(e) <= sp.cap_scaled()));
        assert_eq!(g.coeff(&[0, 3, 3]), GaussRat::from_int(4));
    }

    #[test]
    fn json_roundtrip() {
        let sp = space();
        let f = TruncatedSeries::parse(&sp, "3/2*a^2*t*u^-1 + a*t - 2*u + 7").unwrap();
        let j = f.to_json();
        let text = serde_json::to_string(&j).unwrap();
        let back: Vec<SeriesTermJson> = serde_json::from_str(&text).unwrap();
        assert_eq!(TruncatedSeries::from_json(&sp, &back).unwrap(), f);
    }

    #[test]
    fn zero_part_drops_torus_terms() {
        let sp = space();
        let f = TruncatedSeries::parse(&sp, "a*t + u*t").unwrap();
        assert_eq!(f.zero_exponent_part(), TruncatedSeries::parse(&sp, "a*t").unwrap());
    }
}
