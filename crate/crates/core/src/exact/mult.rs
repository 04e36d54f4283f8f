use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::gauss::parse_rational;
use crate::error::{Error, Result};

/// Element of `μ_∞ × Z^r`: a root of unity `exp(2πi·angle)` times a
/// monomial in named free generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiplicativeValue {
    angle: BigRational,
    exps: BTreeMap<String, i64>,
}

fn reduce_angle(a: BigRational) -> BigRational {
    let fl = a.floor();
    a - fl
}

impl Default for MultiplicativeValue {
    fn default() -> Self {
        Self::identity()
    }
}

impl MultiplicativeValue {
    pub fn identity() -> Self {
        MultiplicativeValue { angle: BigRational::zero(), exps: BTreeMap::new() }
    }

    pub fn generator(name: &str) -> Self {
        Self::identity().with_exponent(name, 1)
    }

    /// `exp(2πi·p/q)`.
    pub fn root_of_unity(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        MultiplicativeValue {
            angle: reduce_angle(BigRational::new(p.into(), q.into())),
            exps: BTreeMap::new(),
        }
    }

    pub fn with_exponent(mut self, name: &str, e: i64) -> Self {
        let v = self.exps.entry(name.to_string()).or_insert(0);
        *v = v.checked_add(e).expect("exponent overflow");
        if *v == 0 {
            self.exps.remove(name);
        }
        self
    }

    pub fn angle(&self) -> &BigRational {
        &self.angle
    }

    pub fn exponent(&self, name: &str) -> i64 {
        self.exps.get(name).copied().unwrap_or(0)
    }

    pub fn exponents(&self) -> impl Iterator<Item = (&str, i64)> {
        self.exps.iter().map(|(k, &e)| (k.as_str(), e))
    }

    pub fn is_identity(&self) -> bool {
        self.angle.is_zero() && self.exps.is_empty()
    }

    /// True when some power is the identity.
    pub fn has_finite_order(&self) -> bool {
        self.exps.is_empty()
    }

    /// Order of the root-of-unity part.
    pub fn torsion_order(&self) -> BigInt {
        self.angle.denom().clone()
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut r = MultiplicativeValue {
            angle: reduce_angle(&self.angle + &o.angle),
            exps: self.exps.clone(),
        };
        for (k, &e) in &o.exps {
            r = r.with_exponent(k, e);
        }
        r
    }

    pub fn pow(&self, n: i64) -> Self {
        MultiplicativeValue {
            angle: reduce_angle(&self.angle * BigRational::from_integer(n.into())),
            exps: self
                .exps
                .iter()
                .filter(|_| n != 0)
                .map(|(k, &e)| (k.clone(), e.checked_mul(n).expect("exponent overflow")))
                .collect(),
        }
    }

    pub fn inv(&self) -> Self {
        self.pow(-1)
    }

    pub fn div(&self, o: &Self) -> Self {
        self.mul(&o.inv())
    }

    /// Parses products of factors `g`, `g^k`, `zeta(p/q)`, `1` and `-1`,
    /// joined by `*` or `/`.
    pub fn parse(s: &str) -> Result<Self> {
        let src = s;
        let err = |m: &str| Error::Parse(format!("{m} in multiplicative value {src:?}"));
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(err("empty input"));
        }
        let mut acc = Self::identity();
        let mut rest = s.as_str();
        let mut invert = false;
        if let Some(r) = rest.strip_prefix('-') {
            acc = Self::root_of_unity(1, 2);
            rest = r;
        }
        loop {
            let end = {
                let mut depth = 0;
                let mut end = rest.len();
                for (i, c) in rest.char_indices() {
                    match c {
                        '(' => depth += 1,
                        ')' => depth -= 1,
                        '*' | '/' if depth == 0 => {
                            end = i;
                            break;
                        }
                        _ => {}
                    }
                }
                end
            };
            let factor = &rest[..end];
            let f = Self::parse_factor(factor).map_err(|_| err(&format!("bad factor {factor:?}")))?;
            acc = if invert { acc.div(&f) } else { acc.mul(&f) };
            if end == rest.len() {
                break;
            }
            invert = rest.as_bytes()[end] == b'/';
            rest = &rest[end + 1..];
        }
        Ok(acc)
    }

    fn parse_factor(f: &str) -> Result<Self> {
        let bad = || Error::Parse(f.to_string());
        if let Some(inner) = f.strip_prefix("zeta(").and_then(|x| x.strip_suffix(')')) {
            let a = parse_rational(inner)?;
            return Ok(MultiplicativeValue { angle: reduce_angle(a), exps: BTreeMap::new() });
        }
        if f == "1" {
            return Ok(Self::identity());
        }
        if f == "-1" {
            return Ok(Self::root_of_unity(1, 2));
        }
        let (name, e) = match f.split_once('^') {
            Some((n, e)) => {
                let e = e.trim_start_matches('(').trim_end_matches(')');
                (n, e.parse::<i64>().map_err(|_| bad())?)
            }
            None => (f, 1),
        };
        let ok = name.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
            && name.chars().all(|c| c.is_alphanumeric() || c == '_')
            && name != "zeta";
        if !ok {
            return Err(bad());
        }
        Ok(Self::identity().with_exponent(name, e))
    }
}

impl fmt::Display for MultiplicativeValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let negative = self.angle == half;
        if !self.angle.is_zero() && !negative {
            parts.push(format!("zeta({}/{})", self.angle.numer(), self.angle.denom()));
        }
        for (k, &e) in &self.exps {
            parts.push(if e == 1 { k.clone() } else { format!("{k}^{e}") });
        }
        match (negative, parts.is_empty()) {
            (false, true) => write!(f, "1"),
            (true, true) => write!(f, "-1"),
            (false, false) => write!(f, "{}", parts.join("*")),
            (true, false) => write!(f, "-{}", parts.join("*")),
        }
    }
}

impl Serialize for MultiplicativeValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for MultiplicativeValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        MultiplicativeValue::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Least common multiple of torsion orders, used when encoding roots of
/// unity as integer congruences.
pub(crate) fn lcm_orders<'a>(vals: impl IntoIterator<Item = &'a MultiplicativeValue>) -> BigInt {
    vals.into_iter().fold(BigInt::one(), |l, v| l.lcm(&v.torsion_order()))
}
