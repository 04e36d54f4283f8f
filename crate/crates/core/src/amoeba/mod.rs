//! Amoebas of Laurent polynomials: complement orders, the complex Ronkin
//! function by quadrature, and raster images.

mod order;
mod raster;
mod ronkin;

use std::collections::HashMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exact::{IntVector, Laurent};

pub use order::{complement_order, polynomial_roots, root_count_order, winding_number, winding_numbers};
pub use raster::{amoeba_raster, AmoebaRaster};
pub use ronkin::{ronkin_numeric, RonkinOptions};

/// A Laurent polynomial in `nvars` torus variables with floating complex
/// coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct SpecializedLaurent {
    nvars: usize,
    terms: Vec<(Vec<i64>, Complex64)>,
}

impl SpecializedLaurent {
    pub fn new(nvars: usize, terms: Vec<(Vec<i64>, Complex64)>) -> Result<Self> {
        let mut merged: Vec<(Vec<i64>, Complex64)> = Vec::new();
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::Invalid(format!("exponent {e:?} has length != {nvars}")));
            }
            match merged.iter_mut().find(|(m, _)| *m == e) {
                Some((_, acc)) => *acc += c,
                None => merged.push((e, c)),
            }
        }
        merged.retain(|(_, c)| c.norm() > 0.0);
        merged.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(SpecializedLaurent { nvars, terms: merged })
    }

    /// Substitutes `values` for every variable of `f` that is not a torus
    /// variable. Variables without a value are an error.
    pub fn from_laurent(
        f: &Laurent,
        torus: &[String],
        values: &HashMap<String, Complex64>,
    ) -> Result<Self> {
        let mut terms = Vec::new();
        for (m, c) in f.terms() {
            let mut e = vec![0i64; torus.len()];
            let mut coeff = c.to_complex();
            for (name, k) in m.iter() {
                if let Some(i) = torus.iter().position(|v| v == name) {
                    e[i] = k;
                } else {
                    let v = values
                        .get(name)
                        .ok_or_else(|| Error::Invalid(format!("no numeric value for parameter {name}")))?;
                    coeff *= v.powi(k as i32);
                }
            }
            terms.push((e, coeff));
        }
        Self::new(torus.len(), terms)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Vec<i64>, Complex64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Value at `z = exp(x + iθ)` componentwise.
    pub fn eval_polar(&self, x: &[f64], theta: &[f64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                let (mut re, mut im) = (0.0, 0.0);
                for i in 0..self.nvars {
                    re += e[i] as f64 * x[i];
                    im += e[i] as f64 * theta[i];
                }
                c * Complex64::from_polar(re.exp(), im)
            })
            .sum()
    }

    /// Moduli of the individual terms on the torus over `x`.
    pub fn term_moduli(&self, x: &[f64]) -> Vec<f64> {
        self.terms
            .iter()
            .map(|(e, c)| c.norm() * e.iter().zip(x).map(|(&a, b)| a as f64 * b).sum::<f64>().exp())
            .collect()
    }

    /// `z^{-m} f`.
    pub fn shift(&self, m: &IntVector) -> SpecializedLaurent {
        SpecializedLaurent {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(m.as_slice()).map(|(a, b)| a - b).collect(), *c))
                .collect(),
        }
    }

    fn check_dim(&self) -> Result<()> {
        match self.nvars {
            1 | 2 => Ok(()),
            n => Err(Error::Dimension(n)),
        }
    }
}
