use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::SpecializedLaurent;
use crate::error::{Error, Result};
use crate::exact::IntVector;

const ROOT_TOL: f64 = 1e-9;
const MAX_N: usize = 4096;

/// Roots of `c[0] + c[1] u + … + c[d] u^d` from the eigenvalues of the
/// companion matrix.
pub fn polynomial_roots(c: &[Complex64]) -> Vec<Complex64> {
    let mut c = c.to_vec();
    while c.last().is_some_and(|x| x.norm() == 0.0) {
        c.pop();
    }
    let d = c.len().saturating_sub(1);
    if d == 0 {
        return Vec::new();
    }
    let lead = c[d];
    let mut m = DMatrix::<Complex64>::zeros(d, d);
    for i in 1..d {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..d {
        m[(i, d - 1)] = -c[i] / lead;
    }
    let ev = m.schur().eigenvalues().expect("complex Schur form of a companion matrix");
    ev.iter()
        .map(|&r| {
            // two Newton steps
            let mut r = r;
            for _ in 0..2 {
                let (mut p, mut dp) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
                for &a in c.iter().rev() {
                    dp = dp * r + p;
                    p = p * r + a;
                }
                if dp.norm() > 0.0 {
                    let step = p / dp;
                    if step.is_finite() {
                        r -= step;
                    }
                }
            }
            r
        })
        .collect()
}

/// The one-variable restriction of `f` to coordinate `i` with all other
/// coordinates fixed: returns the lowest exponent and the coefficient list.
fn restrict(f: &SpecializedLaurent, i: usize, x: &[f64], theta: &[f64]) -> (i64, Vec<Complex64>) {
    let lo = f.terms().iter().map(|(e, _)| e[i]).min().unwrap_or(0);
    let hi = f.terms().iter().map(|(e, _)| e[i]).max().unwrap_or(0);
    let mut c = vec![Complex64::new(0.0, 0.0); (hi - lo + 1) as usize];
    for (e, a) in f.terms() {
        let mut re = 0.0;
        let mut im = 0.0;
        for j in 0..f.nvars() {
            if j != i {
                re += e[j] as f64 * x[j];
                im += e[j] as f64 * theta[j];
            }
        }
        c[(e[i] - lo) as usize] += a * Complex64::from_polar(re.exp(), im);
    }
    (lo, c)
}

/// Root count of the restriction in coordinate `i`, together with the
/// distance of the nearest root's log-modulus from `x_i`.
fn root_order(f: &SpecializedLaurent, i: usize, x: &[f64], theta: &[f64]) -> (i64, f64) {
    let (lo, c) = restrict(f, i, x, theta);
    let lo_nonzero = c.iter().position(|a| a.norm() > 0.0).unwrap_or(0) as i64;
    let roots = polynomial_roots(&c[lo_nonzero as usize..]);
    let mut inside = 0;
    let mut gap = f64::INFINITY;
    for r in roots {
        let l = r.norm().ln();
        gap = gap.min((l - x[i]).abs());
        if l < x[i] {
            inside += 1;
        }
    }
    (lo + lo_nonzero + inside, gap)
}

fn lopsided(f: &SpecializedLaurent, x: &[f64]) -> Option<IntVector> {
    let moduli = f.term_moduli(x);
    let total: f64 = moduli.iter().sum();
    let (j, &max) = moduli.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1))?;
    (max > (total - max) * (1.0 + 1e-12)).then(|| IntVector::new(f.terms()[j].0.clone()))
}

fn min_abs_sampled(f: &SpecializedLaurent, x: &[f64], n: usize) -> f64 {
    let mut best = f64::INFINITY;
    let grid = |k: usize| 2.0 * PI * k as f64 / n as f64;
    match f.nvars() {
        1 => {
            for a in 0..n {
                best = best.min(f.eval_polar(x, &[grid(a)]).norm());
            }
        }
        _ => {
            for a in 0..n {
                for b in 0..n {
                    best = best.min(f.eval_polar(x, &[grid(a), grid(b)]).norm());
                }
            }
        }
    }
    best
}

/// Winding number of `θ ↦ f(exp(x + iθ e_i))` with the other angles fixed,
/// by phase unwrapping over `n` samples. Returns `None` when adjacent
/// samples are too far apart in phase.
pub fn winding_number(f: &SpecializedLaurent, x: &[f64], theta: &[f64], i: usize, n: usize) -> Option<f64> {
    let mut th = theta.to_vec();
    let mut prev = f.eval_polar(x, &th);
    if prev.norm() == 0.0 {
        return None;
    }
    let start = th[i];
    let mut total = 0.0;
    for k in 1..=n {
        th[i] = start + 2.0 * PI * k as f64 / n as f64;
        let cur = f.eval_polar(x, &th);
        if cur.norm() == 0.0 {
            return None;
        }
        let d = (cur / prev).arg();
        if d.abs() > PI / 2.0 {
            return None;
        }
        total += d;
        prev = cur;
    }
    Some(total / (2.0 * PI))
}

/// Winding numbers of all coordinates at angle base point `theta`,
/// refining the sample count from 256 up to 4096.
pub fn winding_numbers(f: &SpecializedLaurent, x: &[f64], theta: &[f64]) -> Result<Vec<i64>> {
    let mut out = Vec::with_capacity(f.nvars());
    for i in 0..f.nvars() {
        let mut n = 256;
        let w = loop {
            if let Some(w) = winding_number(f, x, theta, i, n) {
                break w;
            }
            n *= 2;
            if n > MAX_N {
                return Err(Error::Inconclusive(format!("phase jumps persist at N = {MAX_N}")));
            }
        };
        let r = w.round();
        if (w - r).abs() >= 0.1 {
            return Err(Error::Inconclusive(format!("winding residual {:.3}", (w - r).abs())));
        }
        out.push(r as i64);
    }
    Ok(out)
}

/// The order `m_x` of the complement component of the amoeba of `f`
/// containing `x`: the winding numbers of `f` on the torus `Log⁻¹(x)`.
///
/// One variable: lowest exponent plus the number of roots of modulus
/// below `e^x`. Two variables: phase-unwrapped winding numbers, checked for
/// independence of the base angle and for distance of the torus to the
/// zero set.
pub fn complement_order(f: &SpecializedLaurent, x: &[f64]) -> Result<IntVector> {
    f.check_dim()?;
    if x.len() != f.nvars() {
        return Err(Error::Invalid(format!("point has {} coordinates, expected {}", x.len(), f.nvars())));
    }
    if f.is_zero() {
        return Err(Error::OnAmoeba { x: x.to_vec(), min_abs: 0.0 });
    }
    if let Some(m) = lopsided(f, x) {
        return Ok(m);
    }
    let on_amoeba = || Error::OnAmoeba { x: x.to_vec(), min_abs: min_abs_sampled(f, x, 64) };
    if f.nvars() == 1 {
        let (m, gap) = root_order(f, 0, x, &[0.0]);
        if gap < ROOT_TOL * (1.0 + x[0].abs()) {
            return Err(on_amoeba());
        }
        return Ok(IntVector::new(vec![m]));
    }
    // the root count in each coordinate must not depend on the other angle
    let mut gap = f64::INFINITY;
    for i in 0..2 {
        let mut seen = None;
        for k in 0..32 {
            let mut th = [0.0, 0.0];
            th[1 - i] = 2.0 * PI * (k as f64 + 0.5) / 32.0;
            let (m, g) = root_order(f, i, x, &th);
            gap = gap.min(g);
            if seen.is_some_and(|s| s != m) {
                return Err(on_amoeba());
            }
            seen = Some(m);
        }
    }
    if gap < ROOT_TOL * (1.0 + x[0].abs() + x[1].abs()) {
        return Err(on_amoeba());
    }
    let w = winding_numbers(f, x, &[0.1, 0.2])?;
    Ok(IntVector::new(w))
}

/// Exact one-variable order by root counting, without the lopsided
/// shortcut; used as an oracle.
pub fn root_count_order(f: &SpecializedLaurent, x: f64) -> Result<i64> {
    if f.nvars() != 1 {
        return Err(Error::Dimension(f.nvars()));
    }
    let (m, gap) = root_order(f, 0, &[x], &[0.0]);
    if gap < ROOT_TOL * (1.0 + x.abs()) {
        return Err(Error::OnAmoeba { x: vec![x], min_abs: min_abs_sampled(f, &[x], 64) });
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn kp1() -> SpecializedLaurent {
        // (0.3 u^-1 + 1)(1 + 0.25 u)
        SpecializedLaurent::new(
            1,
            vec![(vec![-1], c(0.3)), (vec![0], c(1.075)), (vec![1], c(0.25))],
        )
        .unwrap()
    }

    #[test]
    fn one_plus_u() {
        let f = SpecializedLaurent::new(1, vec![(vec![0], c(1.0)), (vec![1], c(1.0))]).unwrap();
        assert_eq!(complement_order(&f, &[0.5f64.ln()]).unwrap().0, vec![0]);
        assert_eq!(complement_order(&f, &[2f64.ln()]).unwrap().0, vec![1]);
        assert!(matches!(complement_order(&f, &[0.0]), Err(Error::OnAmoeba { .. })));
    }

    #[test]
    fn kp1_orders() {
        let f = kp1();
        for (x, m) in [(0.1f64.ln(), -1), (0.0, 0), (10f64.ln(), 1)] {
            assert_eq!(complement_order(&f, &[x]).unwrap().0, vec![m]);
            assert_eq!(root_count_order(&f, x).unwrap(), m);
            assert_eq!(winding_numbers(&f, &[x], &[0.0]).unwrap(), vec![m]);
        }
    }

    #[test]
    fn local_p2_regions() {
        let s = 0.001;
        let f = SpecializedLaurent::new(
            2,
            vec![(vec![0, 0], c(1.0)), (vec![1, 0], c(1.0)), (vec![0, 1], c(1.0)), (vec![-1, -1], c(s))],
        )
        .unwrap();
        assert_eq!(complement_order(&f, &[-2.0, -2.0]).unwrap().0, vec![0, 0]);
        assert_eq!(complement_order(&f, &[-8.0, -8.0]).unwrap().0, vec![-1, -1]);
        assert_eq!(complement_order(&f, &[4.0, 0.0]).unwrap().0, vec![1, 0]);
        assert_eq!(complement_order(&f, &[0.0, 4.0]).unwrap().0, vec![0, 1]);
        // the winding computation alone agrees away from the lopsided regime
        assert_eq!(winding_numbers(&f, &[-2.3, -2.3], &[0.3, 0.7]).unwrap(), vec![0, 0]);
        assert!(matches!(complement_order(&f, &[0.0, -5.0]), Err(Error::OnAmoeba { .. })));
    }

    #[test]
    fn higher_dimension_rejected() {
        let f = SpecializedLaurent::new(3, vec![(vec![0, 0, 0], c(1.0))]).unwrap();
        assert!(matches!(complement_order(&f, &[0.0; 3]), Err(Error::Dimension(3))));
    }
}
