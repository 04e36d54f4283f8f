use std::sync::Arc;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// The variables of a truncated series ring together with its grading.
///
/// Variables are ordered: the `n_lambda` torus directions first, then the
/// parameters. One parameter may be marked as the series variable `t`.
/// Weights are rational; internally they are scaled by a common
/// denominator so that term weights are machine integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesSpace {
    vars: Vec<String>,
    n_lambda: usize,
    t: Option<usize>,
    weights: Vec<BigRational>,
    scaled: Vec<i64>,
    denom: i64,
    k: u32,
    cap: BigRational,
    cap_scaled: i64,
}

impl SeriesSpace {
    pub fn new(
        lambda: Vec<String>,
        params: Vec<String>,
        t: Option<&str>,
        weights: Vec<BigRational>,
        k: u32,
        cap: Option<BigRational>,
    ) -> Result<Arc<Self>> {
        let n_lambda = lambda.len();
        let vars: Vec<String> = lambda.into_iter().chain(params).collect();
        if weights.len() != vars.len() {
            return Err(Error::Invalid(format!(
                "{} weights for {} variables",
                weights.len(),
                vars.len()
            )));
        }
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return Err(Error::Invalid(format!("duplicate variable {v}")));
            }
        }
        let t = match t {
            Some(name) => Some(
                vars.iter()
                    .skip(n_lambda)
                    .position(|v| v == name)
                    .map(|p| p + n_lambda)
                    .ok_or_else(|| Error::Invalid(format!("series variable {name} is not a parameter")))?,
            ),
            None => None,
        };
        let cap = match cap {
            Some(c) => c,
            None => {
                let base = match t {
                    Some(ti) if weights[ti].is_positive() => weights[ti].clone(),
                    _ => weights
                        .iter()
                        .filter(|w| w.is_positive())
                        .min()
                        .cloned()
                        .ok_or_else(|| Error::Invalid("no positive weight to derive a cap".into()))?,
                };
                base * BigRational::from_integer(k.into())
            }
        };
        let denom = weights
            .iter()
            .chain(std::iter::once(&cap))
            .fold(num_bigint::BigInt::from(1), |l, w| l.lcm(w.denom()));
        let denom_r = BigRational::from_integer(denom.clone());
        let to_i64 = |r: BigRational| {
            r.to_integer()
                .to_i64()
                .ok_or_else(|| Error::Invalid("weights too large".into()))
        };
        let scaled = weights
            .iter()
            .map(|w| to_i64(w * &denom_r))
            .collect::<Result<Vec<_>>>()?;
        let cap_scaled = to_i64((&cap * &denom_r).floor())?;
        Ok(Arc::new(SeriesSpace {
            vars,
            n_lambda,
            t,
            weights,
            scaled,
            denom: denom.to_i64().ok_or_else(|| Error::Invalid("weights too large".into()))?,
            k,
            cap,
            cap_scaled,
        }))
    }

    /// Pure `t`-adic grading: `t` has weight one, everything else zero.
    pub fn t_adic(lambda: Vec<String>, params: Vec<String>, t: &str, k: u32) -> Result<Arc<Self>> {
        let n = lambda.len() + params.len();
        let mut w = vec![BigRational::zero(); n];
        let ti = lambda.len()
            + params
                .iter()
                .position(|p| p == t)
                .ok_or_else(|| Error::Invalid(format!("series variable {t} is not a parameter")))?;
        w[ti] = BigRational::from_integer(1.into());
        Self::new(lambda, params, Some(t), w, k, None)
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn lambda_names(&self) -> &[String] {
        &self.vars[..self.n_lambda]
    }

    pub fn param_names(&self) -> &[String] {
        &self.vars[self.n_lambda..]
    }

    pub fn n_lambda(&self) -> usize {
        self.n_lambda
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn t_index(&self) -> Option<usize> {
        self.t
    }

    pub fn t_name(&self) -> Option<&str> {
        self.t.map(|i| self.vars[i].as_str())
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn weights(&self) -> &[BigRational] {
        &self.weights
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn cap(&self) -> &BigRational {
        &self.cap
    }

    /// Weight of an exponent vector, scaled by the common denominator.
    pub fn weight(&self, e: &[i64]) -> i64 {
        e.iter().zip(&self.scaled).map(|(a, w)| a * w).sum()
    }

    pub fn weight_rational(&self, e: &[i64]) -> BigRational {
        BigRational::new(self.weight(e).into(), self.denom.into())
    }

    pub(crate) fn cap_scaled(&self) -> i64 {
        self.cap_scaled
    }

    pub fn t_order(&self, e: &[i64]) -> i64 {
        self.t.map_or(0, |i| e[i])
    }

    pub fn is_lambda_free(&self, e: &[i64]) -> bool {
        e[..self.n_lambda].iter().all(|&x| x == 0)
    }

    /// Same variables and weights with another truncation.
    pub fn with_truncation(&self, k: u32, cap: Option<BigRational>) -> Result<Arc<Self>> {
        SeriesSpace::new(
            self.lambda_names().to_vec(),
            self.param_names().to_vec(),
            self.t_name(),
            self.weights.clone(),
            k,
            cap,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn scaling_and_cap() {
        let sp = SeriesSpace::new(
            vec!["x".into(), "y".into()],
            vec!["s".into()],
            Some("s"),
            vec![r(1, 3), r(1, 3), r(1, 1)],
            3,
            None,
        )
        .unwrap();
        assert_eq!(sp.cap(), &r(3, 1));
        assert_eq!(sp.weight_rational(&[-1, -1, 1]), r(1, 3));
        assert_eq!(sp.weight(&[0, 0, 3]), sp.cap_scaled());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(SeriesSpace::new(vec!["x".into()], vec![], Some("t"), vec![r(1, 1)], 2, None).is_err());
        assert!(SeriesSpace::new(vec!["x".into(), "x".into()], vec![], None, vec![r(1, 1); 2], 2, None).is_err());
        assert!(SeriesSpace::new(vec!["x".into()], vec![], None, vec![r(-1, 1)], 2, None).is_err());
    }
}
