use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::order::polynomial_roots;
use super::SpecializedLaurent;
use crate::error::{Error, Result};

/// A sampled amoeba image over a box in `ℝ¹` or `ℝ²`.
#[derive(Clone, Debug, Serialize)]
pub struct AmoebaRaster {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    /// Cells per axis.
    pub resolution: usize,
    /// Row-major flags, first axis fastest; a single row in dimension one.
    pub inside: Vec<bool>,
}

impl AmoebaRaster {
    fn rows(&self) -> usize {
        if self.lo.len() == 1 {
            1
        } else {
            self.resolution
        }
    }

    fn cell(&self, axis: usize) -> f64 {
        (self.hi[axis] - self.lo[axis]) / self.resolution as f64
    }

    pub fn count(&self) -> usize {
        self.inside.iter().filter(|&&b| b).count()
    }

    pub fn is_inside(&self, i: usize, j: usize) -> bool {
        self.inside[j * self.resolution + i]
    }

    /// Centre of cell `(i, j)`.
    pub fn center(&self, i: usize, j: usize) -> Vec<f64> {
        let mut c = vec![self.lo[0] + (i as f64 + 0.5) * self.cell(0)];
        if self.lo.len() == 2 {
            c.push(self.lo[1] + (j as f64 + 0.5) * self.cell(1));
        }
        c
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        if self.lo.len() == 1 {
            out.push_str("x,inside\n");
        } else {
            out.push_str("x,y,inside\n");
        }
        for j in 0..self.rows() {
            for i in 0..self.resolution {
                let c = self.center(i, j);
                let cs: Vec<String> = c.iter().map(|v| format!("{v:.6}")).collect();
                let _ = writeln!(out, "{},{}", cs.join(","), u8::from(self.is_inside(i, j)));
            }
        }
        out
    }

    pub fn to_svg(&self) -> String {
        let px = 4usize;
        let w = self.resolution * px;
        let h = self.rows() * px;
        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
        );
        let _ = writeln!(out, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
        for j in 0..self.rows() {
            for i in 0..self.resolution {
                if self.is_inside(i, j) {
                    // y axis points up
                    let y = (self.rows() - 1 - j) * px;
                    let _ = writeln!(
                        out,
                        r#"<rect x="{}" y="{y}" width="{px}" height="{px}" fill="red"/>"#,
                        i * px
                    );
                }
            }
        }
        out.push_str("</svg>\n");
        out
    }
}

/// Marks the cells of a box met by the amoeba of `f`.
///
/// For each cell row the torus angle of the second coordinate is sampled
/// and the roots of the resulting polynomial in the first coordinate are
/// projected to the first axis. In dimension one the cells containing the
/// log-moduli of the roots are marked.
pub fn amoeba_raster(f: &SpecializedLaurent, lo: &[f64], hi: &[f64], resolution: usize) -> Result<AmoebaRaster> {
    let n = f.nvars();
    if n != 1 && n != 2 {
        return Err(Error::Dimension(n));
    }
    if lo.len() != n || hi.len() != n {
        return Err(Error::Invalid("box dimension does not match the polynomial".into()));
    }
    let mut raster = AmoebaRaster { lo: lo.to_vec(), hi: hi.to_vec(), resolution, inside: Vec::new() };
    if resolution == 0 || (0..n).any(|i| hi[i] <= lo[i]) || f.is_zero() {
        raster.inside = vec![false; resolution * raster.rows()];
        return Ok(raster);
    }
    let dx = raster.cell(0);
    let column_of = |l: f64| -> Option<usize> {
        let c = ((l - lo[0]) / dx).floor();
        (c >= 0.0 && (c as usize) < resolution).then_some(c as usize)
    };
    let lo_e = f.terms().iter().map(|(e, _)| e[0]).min().unwrap_or(0);
    let hi_e = f.terms().iter().map(|(e, _)| e[0]).max().unwrap_or(0);
    let roots_at = |y: &[f64], theta: f64| -> Vec<Complex64> {
        let mut c = vec![Complex64::new(0.0, 0.0); (hi_e - lo_e + 1) as usize];
        for (e, a) in f.terms() {
            let mut v = *a;
            if n == 2 {
                v *= Complex64::from_polar((e[1] as f64 * y[0]).exp(), e[1] as f64 * theta);
            }
            c[(e[0] - lo_e) as usize] += v;
        }
        let first = c.iter().position(|a| a.norm() > 0.0).unwrap_or(0);
        polynomial_roots(&c[first..])
    };
    if n == 1 {
        let mut row = vec![false; resolution];
        for r in roots_at(&[], 0.0) {
            if let Some(i) = column_of(r.norm().ln()) {
                row[i] = true;
            }
        }
        raster.inside = row;
        return Ok(raster);
    }
    let dy = raster.cell(1);
    let samples = 4 * resolution.max(16);
    let sub = 4;
    raster.inside = (0..resolution)
        .into_par_iter()
        .flat_map_iter(|j| {
            let mut row = vec![false; resolution];
            for s in 0..sub {
                let y = lo[1] + (j as f64 + (s as f64 + 0.5) / sub as f64) * dy;
                for k in 0..samples {
                    let theta = 2.0 * PI * k as f64 / samples as f64;
                    for r in roots_at(&[y], theta) {
                        if let Some(i) = column_of(r.norm().ln()) {
                            row[i] = true;
                        }
                    }
                }
            }
            row
        })
        .collect();
    Ok(raster)
}
