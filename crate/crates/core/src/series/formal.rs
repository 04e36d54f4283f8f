use std::fmt;

use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{GaussRat, Laurent, Monomial};

/// A λ-free value `log(c·p^e) + L(params)`: the formal logarithm of a unit
/// monomial in the parameters plus a polynomial series in the parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalLog {
    pub constant: GaussRat,
    pub monomial: Monomial,
    pub series: Laurent,
}

impl Default for FormalLog {
    fn default() -> Self {
        Self::zero()
    }
}

impl FormalLog {
    pub fn zero() -> Self {
        FormalLog { constant: GaussRat::one(), monomial: Monomial::one(), series: Laurent::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_one() && self.monomial.is_one() && self.series.is_zero()
    }

    pub fn has_trivial_log(&self) -> bool {
        self.constant.is_one() && self.monomial.is_one()
    }

    pub fn add(&self, o: &FormalLog) -> FormalLog {
        FormalLog {
            constant: &self.constant * &o.constant,
            monomial: self.monomial.mul(&o.monomial),
            series: self.series.add(&o.series),
        }
    }

    pub fn scale(&self, n: i64) -> FormalLog {
        FormalLog {
            constant: self.constant.powi(n),
            monomial: self.monomial.pow(n),
            series: self.series.scale(&GaussRat::from_int(n)),
        }
    }

    /// The unit `c·p^e` whose logarithm is carried formally.
    pub fn unit(&self) -> Laurent {
        Laurent::term(self.constant.clone(), self.monomial.clone())
    }

    /// `exp` of the value, truncated in the `t`-adic grading when every
    /// series term has positive `t`-order, otherwise in the total degree of
    /// the parameters.
    pub fn exp(&self, t: Option<&str>, k: u32) -> Result<Laurent> {
        let positive_t = t.is_some_and(|t| self.series.terms().all(|(m, _)| m.exponent(t) > 0));
        let degree = |m: &Monomial| -> i64 {
            match t {
                Some(t) if positive_t => m.exponent(t),
                _ => m.iter().map(|(_, e)| e).sum(),
            }
        };
        if let Some((m, _)) = self.series.terms().find(|(m, _)| degree(m) <= 0) {
            return Err(Error::NotWeightPositive(format!(
                "cannot exponentiate the series term {m}"
            )));
        }
        let k = k as i64;
        let trunc = |l: Laurent| {
            let mut r = Laurent::zero();
            for (m, c) in l.terms() {
                if degree(m) <= k {
                    r.add_term(m.clone(), c);
                }
            }
            r
        };
        let mut acc = Laurent::one();
        let mut p = self.series.clone();
        let mut fact = GaussRat::one();
        let mut j = 1;
        while !p.is_zero() {
            fact = &fact * &GaussRat::from_int(j);
            acc = acc.add(&p.scale(&fact.inv()));
            p = trunc(p.mul(&self.series));
            j += 1;
        }
        Ok(acc.mul(&self.unit()))
    }
}

impl fmt::Display for FormalLog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.constant.is_one() {
            parts.push(format!("log({})", self.constant));
        }
        for (name, e) in self.monomial.iter() {
            parts.push(if e == 1 { format!("log({name})") } else { format!("{e}*log({name})") });
        }
        if !self.series.is_zero() {
            parts.push(self.series.to_string());
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl Serialize for FormalLog {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("FormalLog", 3)?;
        st.serialize_field("log_of", &self.unit().to_string())?;
        st.serialize_field("series", &self.series.to_string())?;
        st.serialize_field("text", &self.to_string())?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_of_local_p2_log() {
        let l = FormalLog {
            constant: GaussRat::one(),
            monomial: Monomial::var("s"),
            series: Laurent::parse("3*(2*s - 15*s^2 + 560/3*s^3)").unwrap(),
        };
        let h3s = l.exp(Some("s"), 4).unwrap();
        let h = Laurent::parse("1 + 2*s - 13*s^2").unwrap();
        let expect = h.pow(3).mul(&Laurent::var("s"));
        for d in 1..=3 {
            let m = Monomial::from_pairs([("s", d)]);
            assert_eq!(h3s.coeff(&m), expect.coeff(&m));
        }
    }

    #[test]
    fn units_multiply() {
        let a = FormalLog { constant: GaussRat::one(), monomial: Monomial::var("a"), series: Laurent::zero() };
        let b = FormalLog { constant: GaussRat::one(), monomial: Monomial::var("b"), series: Laurent::zero() };
        let ab = a.add(&b);
        assert_eq!(ab.exp(None, 4).unwrap(), Laurent::parse("a*b").unwrap());
        assert!(a.add(&a.scale(-1)).is_zero());
        assert_eq!(ab.to_string(), "log(a) + log(b)");
    }
}
