use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::{complement_order, SpecializedLaurent};
use crate::error::{Error, Result};
use crate::exact::IntVector;

#[derive(Clone, Copy, Debug)]
pub struct RonkinOptions {
    pub n_start: usize,
    pub n_max: usize,
    pub tol: f64,
}

impl Default for RonkinOptions {
    fn default() -> Self {
        RonkinOptions { n_start: 256, n_max: 4096, tol: 1e-9 }
    }
}

fn unwrap_step(prev: Complex64, cur: Complex64) -> Option<f64> {
    let d = (cur / prev).arg();
    (d.abs() < PI / 2.0 && cur.norm() > 0.0).then_some(d)
}

/// Mean of a continuous branch of `log g` over `n` equally spaced angles,
/// starting from the principal branch at angle zero.
fn mean_log_1d(g: &SpecializedLaurent, x: &[f64], n: usize) -> Option<Complex64> {
    let mut prev = g.eval_polar(x, &[0.0]);
    if prev.norm() == 0.0 {
        return None;
    }
    let mut l = prev.ln();
    let mut sum = l;
    for k in 1..n {
        let cur = g.eval_polar(x, &[2.0 * PI * k as f64 / n as f64]);
        l = Complex64::new(cur.norm().ln(), l.im + unwrap_step(prev, cur)?);
        sum += l;
        prev = cur;
    }
    Some(sum / n as f64)
}

fn mean_log_2d(g: &SpecializedLaurent, x: &[f64], n: usize) -> Option<Complex64> {
    let angle = |k: usize| 2.0 * PI * k as f64 / n as f64;
    // branch along the first column, then along each row
    let mut column = Vec::with_capacity(n);
    let mut prev = g.eval_polar(x, &[0.0, 0.0]);
    if prev.norm() == 0.0 {
        return None;
    }
    let mut phase = prev.arg();
    column.push((prev, phase));
    for b in 1..n {
        let cur = g.eval_polar(x, &[0.0, angle(b)]);
        phase += unwrap_step(prev, cur)?;
        column.push((cur, phase));
        prev = cur;
    }
    let rows: Option<Vec<Complex64>> = column
        .par_iter()
        .enumerate()
        .map(|(b, &(v0, p0))| {
            let mut prev = v0;
            let mut phase = p0;
            let mut sum = Complex64::new(v0.norm().ln(), p0);
            for a in 1..n {
                let cur = g.eval_polar(x, &[angle(a), angle(b)]);
                phase += unwrap_step(prev, cur)?;
                sum += Complex64::new(cur.norm().ln(), phase);
                prev = cur;
            }
            Some(sum)
        })
        .collect();
    Some(rows?.into_iter().sum::<Complex64>() / (n * n) as f64)
}

/// The complex Ronkin function: the average of `log(z^{-m} f)` over the
/// torus `Log⁻¹(x)` by the trapezoidal rule, doubling the number of samples
/// per circle until successive estimates agree.
///
/// `m` must be the complement order at `x`, so that `z^{-m} f` has a
/// continuous logarithm on the torus. The branch is the principal one at
/// the base point of the torus.
pub fn ronkin_numeric(f: &SpecializedLaurent, m: &IntVector, x: &[f64], opts: RonkinOptions) -> Result<Complex64> {
    let order = complement_order(f, x)?;
    if &order != m {
        return Err(Error::Invalid(format!("complement order at x is {order}, not {m}")));
    }
    let g = f.shift(m);
    let eval = |n: usize| match g.nvars() {
        1 => mean_log_1d(&g, x, n),
        _ => mean_log_2d(&g, x, n),
    };
    let mut n = opts.n_start;
    let mut last: Option<Complex64> = None;
    while n <= opts.n_max {
        if let Some(v) = eval(n) {
            if let Some(p) = last {
                if (v - p).norm() < opts.tol {
                    return Ok(v);
                }
            }
            last = Some(v);
        }
        n *= 2;
    }
    Err(Error::Inconclusive(format!(
        "Ronkin quadrature did not settle to {:e} by N = {}",
        opts.tol, opts.n_max
    )))
}
