//! Periods of tropical cycles: the kink pairing, the gluing pairing and the
//! Ronkin pairing, their product, and related lattice computations.

mod lemmas;
mod picard;

use std::collections::HashMap;
use std::fmt;

use num_complex::Complex64;
use num_traits::One;
use serde::Serialize;

use crate::cycle::{crossings, CrossingEvent, Overrides, TropicalCycle};
use crate::error::{Error, Result};
use crate::exact::{GaussRat, IntVector, Laurent, Monomial, MultiplicativeValue};
use crate::scene::Scene;
use crate::walls::Slab;
use crate::series::{find_weights, log_series, normalize_slab, FormalLog, SeriesSpace, TruncatedSeries, WeightChoice, WeightProblem};

pub use lemmas::{alternating_roots, gamma_v_fraction, root_sets};
pub use picard::{in_picard, picard_from_cycles, picard_sublattice, PicardFile, PicardGenerator, PicardLattice};

/// `Σ ⟨ď_e, ξ_e⟩·κ` over the slab crossings.
pub fn pair_c1(c: &TropicalCycle, scene: &Scene, overrides: &Overrides) -> Result<i64> {
    Ok(crossings(c, scene, overrides)?.iter().map(CrossingEvent::c1_term).sum())
}

/// The integer by which a loop around the central fibre adds the vanishing
/// cycle to the cycle; equal to [`pair_c1`].
pub fn monodromy(c: &TropicalCycle, scene: &Scene, overrides: &Overrides) -> Result<i64> {
    pair_c1(c, scene, overrides)
}

/// Product over crossings of `s_{σ'}(ξ_{e'}) / s_σ(ξ_e)`.
pub fn pair_gluing(c: &TropicalCycle, scene: &Scene, overrides: &Overrides) -> Result<MultiplicativeValue> {
    Ok(crossings(c, scene, overrides)?
        .iter()
        .fold(MultiplicativeValue::identity(), |acc, e| acc.mul(&e.gluing_ratio)))
}

/// Ronkin value of one slab in a complement component, with the grading
/// used to expand it.
#[derive(Clone, Debug, PartialEq)]
pub struct RonkinTerm {
    pub value: FormalLog,
    pub weights: WeightChoice,
    /// Variable order of `weights`.
    pub variables: Vec<String>,
}

/// `z^{−m} f` as a truncated series, graded so that its dominant λ-free
/// term at the point `x` (with parameters at `values`) is the unit.
///
/// `f` is a Laurent polynomial in `lambda` and `params`; the result is
/// truncated at order `k` in the series variable.
#[allow(clippy::too_many_arguments)]
pub fn slab_series(
    f: &Laurent,
    m: &IntVector,
    x: &[f64],
    lambda: &[String],
    params: &[String],
    series_var: &str,
    values: &HashMap<String, Complex64>,
    k: u32,
) -> Result<(TruncatedSeries, WeightChoice)> {
    if m.len() != lambda.len() || x.len() != lambda.len() {
        return Err(Error::Invalid(format!("{} torus variables, order {m}, point of length {}", lambda.len(), x.len())));
    }
    for v in f.variables() {
        if !lambda.contains(&v) && !params.contains(&v) {
            return Err(Error::Invalid(format!("unknown variable {v} in slab function")));
        }
    }
    let shift = Monomial::from_pairs(lambda.iter().map(|s| s.as_str()).zip(m.as_slice().iter().map(|e| -e)));
    let g = f.mul(&Laurent::term(GaussRat::one(), shift));
    let vars: Vec<String> = lambda.iter().chain(params).cloned().collect();
    let mut point = values.clone();
    for (name, xi) in lambda.iter().zip(x) {
        point.insert(name.clone(), Complex64::new(xi.exp(), 0.0));
    }
    let mut exponents = Vec::new();
    let mut moduli = Vec::new();
    for (mono, c) in g.terms() {
        exponents.push(vars.iter().map(|v| mono.exponent(v)).collect::<Vec<i64>>());
        moduli.push(Laurent::term(c.clone(), mono.clone()).eval(&point)?.norm());
    }
    let t = vars.iter().position(|v| v == series_var);
    let choice = find_weights(&WeightProblem { n_lambda: lambda.len(), t, exponents: &exponents, moduli: &moduli, k })?;
    let space = SeriesSpace::new(
        lambda.to_vec(),
        params.to_vec(),
        t.map(|_| series_var),
        choice.weights.clone(),
        k,
        Some(choice.cap.clone()),
    )?;
    Ok((TruncatedSeries::from_laurent(&space, &g)?, choice))
}

/// The λ-free part of `log(z^{−m} f)`, expanded around the term of `z^{−m} f`
/// that dominates at `x` among the λ-free ones. Arguments as in
/// [`slab_series`].
#[allow(clippy::too_many_arguments)]
pub fn ronkin_series(
    f: &Laurent,
    m: &IntVector,
    x: &[f64],
    lambda: &[String],
    params: &[String],
    series_var: &str,
    values: &HashMap<String, Complex64>,
    k: u32,
) -> Result<RonkinTerm> {
    let (series, choice) = slab_series(f, m, x, lambda, params, series_var, values, k)?;
    let log = log_series(&series)?;
    let zero = log.series.zero_exponent_part();
    let zero = if series.space().t_index().is_some() { zero.truncate_t() } else { zero };
    let n = lambda.len();
    if log.unit_exp[..n].iter().any(|&e| e != 0) {
        return Err(Error::WeightSearch("the unit term depends on the torus variables".into()));
    }
    let monomial = Monomial::from_pairs(params.iter().map(|s| s.as_str()).zip(log.unit_exp[n..].iter().copied()));
    Ok(RonkinTerm {
        value: FormalLog { constant: log.unit, monomial, series: zero.to_laurent() },
        weights: choice,
        variables: series.space().vars().to_vec(),
    })
}

fn ronkin_at(event: &CrossingEvent, scene: &Scene, overrides: &Overrides, k: u32) -> Result<FormalLog> {
    let slab = scene.slab_at(&event.site)?;
    let r = &scene.rhos[event.site.rho];
    let vals = scene.numeric_values(overrides);
    Ok(ronkin_series(&slab.function, &event.order, &event.lambda, &r.lambda_names, &scene.parameters, &scene.series_var, &vals, k)?
        .value)
}

/// One row of the per-vertex decomposition of a period.
#[derive(Clone, Debug, Serialize)]
pub struct VertexContribution {
    pub vertex: String,
    pub rho: String,
    pub slab: String,
    pub order: IntVector,
    /// `⟨ď_e, ξ_e⟩`.
    pub weight: i64,
    pub kappa: i64,
    /// `⟨ď_e, ξ_e⟩·κ`, the power of the kink variable.
    pub t_exponent: i64,
    pub gluing: MultiplicativeValue,
    /// Ronkin value of the slab in the component of the vertex.
    pub ronkin: FormalLog,
    /// `⟨ď_e, ξ_e⟩` times the Ronkin value.
    pub contribution: FormalLog,
}

/// The exponentiated period `⟨s, β⟩ · t^{⟨c₁, β⟩} · exp(ℛ(β))`, defined up to
/// the ambiguity of the logarithm.
#[derive(Clone, Debug, Serialize)]
pub struct PeriodExpression {
    pub gluing: MultiplicativeValue,
    pub t_exponent: i64,
    pub kink_var: String,
    pub ronkin: FormalLog,
    /// `exp(ronkin)` as a Laurent polynomial, truncated at order `k`.
    #[serde(serialize_with = "ser_display")]
    pub exp_ronkin: Laurent,
    pub report: Vec<VertexContribution>,
}

fn ser_display<S: serde::Serializer, T: fmt::Display>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

impl PeriodExpression {
    /// `t^{c₁}·exp(ℛ)` without the gluing factor.
    pub fn monomial_part(&self) -> Laurent {
        let t = Laurent::term(GaussRat::one(), Monomial::from_pairs([(self.kink_var.as_str(), self.t_exponent)]));
        self.exp_ronkin.mul(&t)
    }
}

impl fmt::Display for PeriodExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.gluing.is_identity() {
            write!(f, "[{}] * ", self.gluing)?;
        }
        write!(f, "({})", self.exp_ronkin)?;
        if self.t_exponent != 0 {
            write!(f, " * {}^{}", self.kink_var, self.t_exponent)?;
        }
        Ok(())
    }
}

/// Rows of the period formula, one per slab crossing.
pub fn per_vertex_report(c: &TropicalCycle, scene: &Scene, overrides: &Overrides, k: u32) -> Result<Vec<VertexContribution>> {
    crossings(c, scene, overrides)?
        .iter()
        .map(|e| {
            let ronkin = ronkin_at(e, scene, overrides, k)?;
            Ok(VertexContribution {
                vertex: e.vertex.clone(),
                rho: e.rho.clone(),
                slab: e.slab.clone(),
                order: e.order.clone(),
                weight: e.weight,
                kappa: e.kappa,
                t_exponent: e.c1_term(),
                gluing: e.gluing_ratio.clone(),
                contribution: ronkin.scale(e.weight),
                ronkin,
            })
        })
        .collect()
}

/// Sums the rows of a report into a period.
pub fn assemble(report: Vec<VertexContribution>, scene: &Scene, k: u32) -> Result<PeriodExpression> {
    let gluing = report.iter().fold(MultiplicativeValue::identity(), |acc, r| acc.mul(&r.gluing));
    let t_exponent = report.iter().map(|r| r.t_exponent).sum();
    let ronkin = report.iter().fold(FormalLog::zero(), |acc, r| acc.add(&r.contribution));
    let exp_ronkin = ronkin.exp(Some(&scene.series_var), k)?;
    Ok(PeriodExpression { gluing, t_exponent, kink_var: scene.kink_var.clone(), ronkin, exp_ronkin, report })
}

/// The exponentiated period of a cycle, truncated at order `k` in the series
/// variable.
pub fn period(c: &TropicalCycle, scene: &Scene, overrides: &Overrides, k: u32) -> Result<PeriodExpression> {
    assemble(per_vertex_report(c, scene, overrides, k)?, scene, k)
}

/// A copy of the scene in which every slab function `f` is replaced by
/// `f + g` with `g` λ-free, chosen so that `log(f + g)` has no λ-free terms
/// up to order `k`.
pub fn normalize_scene_slabs(scene: &Scene, overrides: &Overrides, k: u32) -> Result<Scene> {
    let mut out = scene.clone();
    for slab in &mut out.slabs {
        slab.function = slab.function.add(&slab_normalization(scene, slab, overrides, k)?);
    }
    Ok(out)
}

/// The λ-free correction `g` of one slab, see [`normalize_scene_slabs`].
pub fn slab_normalization(scene: &Scene, slab: &Slab, overrides: &Overrides, k: u32) -> Result<Laurent> {
    let r = &scene.rhos[slab.rho];
    let n = r.lambda_names.len();
    let (f, _) = slab_series(
        &slab.function,
        &IntVector::zeros(n),
        &vec![0.0; n],
        &r.lambda_names,
        &scene.parameters,
        &scene.series_var,
        &scene.numeric_values(overrides),
        k,
    )?;
    Ok(normalize_slab(&f)?.to_laurent())
}
