use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::gauss::{parse_rational, GaussRat};
use crate::error::{Error, Result};

/// A monomial in named variables; only nonzero exponents are stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(BTreeMap<String, i64>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(BTreeMap::new())
    }

    pub fn var(name: &str) -> Self {
        Monomial::from_pairs([(name, 1)])
    }

    pub fn from_pairs<'a>(it: impl IntoIterator<Item = (&'a str, i64)>) -> Self {
        let mut m = Monomial::one();
        for (k, e) in it {
            m.add_exp(k, e);
        }
        m
    }

    pub fn exponent(&self, name: &str) -> i64 {
        self.0.get(name).copied().unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, i64)> {
        self.0.iter().map(|(k, &e)| (k.as_str(), e))
    }

    fn add_exp(&mut self, name: &str, e: i64) {
        let v = self.0.entry(name.to_string()).or_insert(0);
        *v = v.checked_add(e).expect("exponent overflow");
        if *v == 0 {
            self.0.remove(name);
        }
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        let mut r = self.clone();
        for (k, &e) in &o.0 {
            r.add_exp(k, e);
        }
        r
    }

    pub fn pow(&self, e: i64) -> Monomial {
        Monomial(
            self.0
                .iter()
                .filter(|_| e != 0)
                .map(|(k, &v)| (k.clone(), v.checked_mul(e).expect("exponent overflow")))
                .collect(),
        )
    }

    pub fn inv(&self) -> Monomial {
        self.pow(-1)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(k, &e)| if e == 1 { k.clone() } else { format!("{k}^{e}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Laurent polynomial over Q(i) in named parameters.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Laurent {
    terms: BTreeMap<Monomial, GaussRat>,
}

impl Laurent {
    pub fn zero() -> Self {
        Laurent::default()
    }

    pub fn one() -> Self {
        Laurent::constant(GaussRat::one())
    }

    pub fn constant(c: GaussRat) -> Self {
        Laurent::term(c, Monomial::one())
    }

    pub fn var(name: &str) -> Self {
        Laurent::term(GaussRat::one(), Monomial::var(name))
    }

    pub fn term(c: GaussRat, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Laurent { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &GaussRat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> GaussRat {
        self.terms.get(m).cloned().unwrap_or_else(GaussRat::zero)
    }

    pub fn variables(&self) -> BTreeSet<String> {
        self.terms
            .keys()
            .flat_map(|m| m.iter().map(|(k, _)| k.to_string()))
            .collect()
    }

    pub fn as_constant(&self) -> Option<GaussRat> {
        match self.terms.len() {
            0 => Some(GaussRat::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    /// A single nonzero term, which is a unit in the Laurent ring.
    pub fn as_unit(&self) -> Option<(GaussRat, Monomial)> {
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            Some((c.clone(), m.clone()))
        } else {
            None
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: &GaussRat) {
        if c.is_zero() {
            return;
        }
        let zero = {
            let e = self.terms.entry(m.clone()).or_insert_with(GaussRat::zero);
            *e += c;
            e.is_zero()
        };
        if zero {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, o: &Laurent) -> Laurent {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c);
        }
        r
    }

    pub fn neg(&self) -> Laurent {
        Laurent {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, o: &Laurent) -> Laurent {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Laurent) -> Laurent {
        let mut r = Laurent::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                r.add_term(m1.mul(m2), &(c1 * c2));
            }
        }
        r
    }

    pub fn scale(&self, c: &GaussRat) -> Laurent {
        if c.is_zero() {
            return Laurent::zero();
        }
        Laurent {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Laurent {
        let mut acc = Laurent::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Integer power; negative exponents require a unit.
    pub fn powi(&self, e: i64) -> Result<Laurent> {
        if e >= 0 {
            return Ok(self.pow(e as u32));
        }
        self.inv()?.powi(-e)
    }

    pub fn inv(&self) -> Result<Laurent> {
        let (c, m) = self
            .as_unit()
            .ok_or_else(|| Error::Invalid(format!("{self} is not a unit")))?;
        Ok(Laurent::term(c.inv(), m.inv()))
    }

    pub fn div(&self, o: &Laurent) -> Result<Laurent> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn eval(&self, vals: &HashMap<String, Complex64>) -> Result<Complex64> {
        let mut acc = Complex64::zero();
        for (m, c) in &self.terms {
            let mut v = c.to_complex();
            for (k, e) in m.iter() {
                let x = vals
                    .get(k)
                    .ok_or_else(|| Error::Invalid(format!("no value for parameter {k}")))?;
                v *= x.powi(e as i32);
            }
            acc += v;
        }
        Ok(acc)
    }

    pub fn parse(s: &str) -> Result<Laurent> {
        let toks = tokenize(s)?;
        let mut p = Parser { toks, pos: 0, src: s };
        let r = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(p.err("trailing input"));
        }
        Ok(r)
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_real() && c.re.is_negative();
            let c_abs = if negative { -c } else { c.clone() };
            if i == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { "-" } else { "+" })?;
            }
            let cs = if c_abs.is_compound() { format!("({c_abs})") } else { c_abs.to_string() };
            match (c_abs.is_one(), m.is_one()) {
                (_, true) => write!(f, "{cs}")?,
                (true, false) => write!(f, "{m}")?,
                (false, false) => write!(f, "{cs}*{m}")?,
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigRational),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let cs: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let st = i;
            while i < cs.len() && (cs[i].is_ascii_digit() || cs[i] == '.') {
                i += 1;
            }
            let txt: String = cs[st..i].iter().collect();
            out.push(Tok::Num(parse_rational(&txt)?));
        } else if c.is_alphabetic() || c == '_' {
            let st = i;
            while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(cs[st..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?} in {s:?}")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    src: &'a str,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at token {} in {:?}", self.pos, self.src))
    }

    fn peek_op(&self) -> Option<char> {
        match self.toks.get(self.pos) {
            Some(Tok::Op(c)) => Some(*c),
            _ => None,
        }
    }

    fn expr(&mut self) -> Result<Laurent> {
        let mut acc = self.term()?;
        while let Some(op @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let t = self.term()?;
            acc = if op == '+' { acc.add(&t) } else { acc.sub(&t) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Laurent> {
        let mut acc = self.unary()?;
        while let Some(op @ ('*' | '/')) = self.peek_op() {
            self.pos += 1;
            let t = self.unary()?;
            acc = if op == '*' {
                acc.mul(&t)
            } else {
                acc.div(&t).map_err(|_| self.err("division by a non-monomial"))?
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Laurent> {
        match self.peek_op() {
            Some('-') => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Laurent> {
        let base = self.atom()?;
        if self.peek_op() != Some('^') {
            return Ok(base);
        }
        self.pos += 1;
        let e = self.exponent()?;
        base.powi(e).map_err(|_| self.err("negative power of a non-monomial"))
    }

    fn exponent(&mut self) -> Result<i64> {
        let paren = self.peek_op() == Some('(');
        if paren {
            self.pos += 1;
        }
        let mut sign = 1;
        if let Some(c @ ('-' | '+')) = self.peek_op() {
            self.pos += 1;
            if c == '-' {
                sign = -1;
            }
        }
        let e = match self.toks.get(self.pos) {
            Some(Tok::Num(r)) if r.is_integer() => {
                let v: i64 = r.numer().try_into().map_err(|_| self.err("exponent too large"))?;
                v * sign
            }
            _ => return Err(self.err("expected integer exponent")),
        };
        self.pos += 1;
        if paren {
            if self.peek_op() != Some(')') {
                return Err(self.err("expected ')'"));
            }
            self.pos += 1;
        }
        Ok(e)
    }

    fn atom(&mut self) -> Result<Laurent> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(r)) => {
                self.pos += 1;
                Ok(Laurent::constant(GaussRat::from_rational(r)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if name == "i" {
                    Ok(Laurent::constant(GaussRat::i()))
                } else {
                    Ok(Laurent::var(&name))
                }
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek_op() != Some(')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            _ => Err(self.err("expected a number, name or '('")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_expand() {
        let f = Laurent::parse("(a*u^-1+1)*(1+b*u)").unwrap();
        let g = Laurent::parse("a*u^-1 + a*b + 1 + b*u").unwrap();
        assert_eq!(f, g);
        assert_eq!(f.num_terms(), 4);
    }

    #[test]
    fn decimals_and_imaginary_unit() {
        let f = Laurent::parse("0.3*x + i*i").unwrap();
        assert_eq!(f, Laurent::parse("3/10*x - 1").unwrap());
        let g = Laurent::parse("(1+i)^2").unwrap();
        assert_eq!(g, Laurent::constant(GaussRat::i().scale(&BigRational::from_integer(2.into()))));
    }

    #[test]
    fn division_by_monomials_only() {
        assert_eq!(
            Laurent::parse("s/(x*y)").unwrap(),
            Laurent::parse("s*x^-1*y^(-1)").unwrap()
        );
        assert!(Laurent::parse("1/(1+x)").is_err());
        assert!(Laurent::parse("(1+x)^-1").is_err());
        assert!(Laurent::parse("1+").is_err());
        assert!(Laurent::parse("1 $ 2").is_err());
    }

    #[test]
    fn display_roundtrip() {
        for s in ["1+x+y+s*x^-1*y^-1", "-3/2*a^2*b - (1+2*i)*c + 7", "0", "-x"] {
            let f = Laurent::parse(s).unwrap();
            assert_eq!(Laurent::parse(&f.to_string()).unwrap(), f, "{s} -> {f}");
        }
    }

    #[test]
    fn ring_axioms_on_samples() {
        let a = Laurent::parse("1+x^-1*y").unwrap();
        let b = Laurent::parse("2*x - i").unwrap();
        let c = Laurent::parse("y^2 + 1/3").unwrap();
        assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn evaluation() {
        let f = Laurent::parse("a*b + u^-1").unwrap();
        let vals: HashMap<String, Complex64> = [
            ("a".to_string(), Complex64::new(0.3, 0.0)),
            ("b".to_string(), Complex64::new(0.25, 0.0)),
            ("u".to_string(), Complex64::new(0.0, 2.0)),
        ]
        .into();
        let v = f.eval(&vals).unwrap();
        assert!((v - Complex64::new(0.075, -0.5)).norm() < 1e-15);
    }
}
