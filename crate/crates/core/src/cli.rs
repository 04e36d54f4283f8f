//! Command-line front end. [`run`] parses arguments, dispatches and writes
//! to the given stream; the binary is a thin wrapper around it.

use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::amoeba::{amoeba_raster, complement_order, ronkin_numeric, RonkinOptions, SpecializedLaurent};
use crate::cycle::{
    check_balancing, normalize_cycle, twisted_homology, Overrides, TropicalCycle, TwistedComplex, TwistedComplexFile,
};
use crate::error::{Error, Result};
use crate::exact::IntVector;
use crate::period::{
    alternating_roots, gamma_v_fraction, pair_c1, pair_gluing, period, picard_from_cycles, picard_sublattice,
    ronkin_series, slab_normalization, slab_series, PicardFile,
};
use crate::scene::{validate_scene, Scene};
use crate::series::factorize_binomials;
use crate::walls::{check_consistency_codim0, check_consistency_codim1, slab_reductions};

#[derive(Parser, Debug)]
#[command(name = "tropper", version, about = "Periods of toric degenerations from tropical data")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct SceneArgs {
    /// Scene file (TOML).
    #[arg(long)]
    pub scene: PathBuf,
    /// Truncation order; defaults to the scene's `k`.
    #[arg(short = 'k')]
    pub k: Option<u32>,
    /// Numeric parameter overrides, e.g. `a=0.3,b=0.25`.
    #[arg(long, value_parser = parse_params)]
    pub params: Option<Overrides>,
    /// Also write the JSON result to this file.
    #[arg(long)]
    pub json_out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct CycleArgs {
    #[command(flatten)]
    pub scene: SceneArgs,
    /// Cycle id in the scene; the first cycle when absent.
    #[arg(long)]
    pub cycle: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct SlabPointArgs {
    #[command(flatten)]
    pub scene: SceneArgs,
    /// Slab id; the first slab when absent.
    #[arg(long)]
    pub slab: Option<String>,
    /// Point of `Λ_ρ ⊗ R` as comma-separated coordinates.
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
    pub at: Option<Vec<f64>>,
}

#[derive(Args, Debug, Clone)]
pub struct PlotArgs {
    #[command(flatten)]
    pub scene: SceneArgs,
    #[arg(long)]
    pub slab: Option<String>,
    /// Lower corner of the window.
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
    pub lo: Vec<f64>,
    /// Upper corner of the window.
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
    pub hi: Vec<f64>,
    #[arg(long, default_value_t = 64)]
    pub resolution: usize,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum AmoebaCommand {
    /// Order of the complement component at a point.
    Order(SlabPointArgs),
    /// Ronkin value at a point, as a series and numerically.
    Ronkin(SlabPointArgs),
    /// Raster of the amoeba of a slab.
    Plot(PlotArgs),
}

#[derive(Subcommand, Debug)]
pub enum LemmaCommand {
    /// Alternation of roots of unity for all `1 ≤ m, n ≤ max`.
    Alternating {
        #[arg(long, default_value_t = 40)]
        max: u32,
    },
    /// Fractional part of the vertex integral for valencies `3..=max`.
    Gamma {
        #[arg(long, default_value_t = 12)]
        max: u32,
    },
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a scene for well-formedness.
    Validate(SceneArgs),
    /// Exponentiated period of a cycle.
    Period(CycleArgs),
    /// Pairing of a cycle with the kinks.
    PairC1(CycleArgs),
    /// Pairing of a cycle with the gluing data.
    PairGluing(CycleArgs),
    /// Picard-Lefschetz coefficient of a cycle.
    Monodromy(CycleArgs),
    /// Ronkin value of a slab at a point of its ρ.
    Ronkin(SlabPointArgs),
    /// Order of the amoeba complement component at a point.
    Order(SlabPointArgs),
    /// Binomial factorization of a slab function around a point.
    Factor(SlabPointArgs),
    /// Normalized slab functions, or a normalized cycle with `--cycle`.
    Normalize(CycleArgs),
    /// Twisted homology of a simplicial complex with monodromy.
    Homology {
        /// Complex file (TOML).
        #[arg(long)]
        complex: PathBuf,
        /// Degree; all degrees when absent.
        #[arg(short = 'q')]
        degree: Option<usize>,
    },
    /// Picard sublattice from pairings or from cycles of a scene.
    Picard {
        /// Precomputed pairings (TOML).
        #[arg(long, conflicts_with = "scene")]
        pairings: Option<PathBuf>,
        #[arg(long)]
        scene: Option<PathBuf>,
        /// Comma-separated cycle ids; all cycles when absent.
        #[arg(long, value_delimiter = ',')]
        cycles: Vec<String>,
    },
    /// Consistency of walls around the scene's loops and of slabs mod t.
    Consistency(SceneArgs),
    /// Raster of the amoeba of a slab.
    AmoebaPlot(PlotArgs),
    /// Amoeba computations.
    #[command(subcommand)]
    Amoeba(AmoebaCommand),
    /// Finite checks of the combinatorial lemmas.
    #[command(subcommand)]
    Lemmas(LemmaCommand),
}

fn parse_params(s: &str) -> std::result::Result<Overrides, String> {
    let mut out = HashMap::new();
    for item in s.split(',').filter(|x| !x.trim().is_empty()) {
        let (k, v) = item.split_once('=').ok_or_else(|| format!("expected name=value, got {item}"))?;
        let x: f64 = v.trim().parse().map_err(|_| format!("bad number {v}"))?;
        out.insert(k.trim().to_string(), Complex64::new(x, 0.0));
    }
    Ok(out)
}

/// Outcome of a subcommand: text for stdout and whether it signals failure.
struct Output {
    text: String,
    json: Option<Value>,
    failed: bool,
}

impl Output {
    fn json(v: Value) -> Output {
        Output { text: pretty(&v), json: Some(v), failed: false }
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize")
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable output")
}

struct Loaded {
    scene: Scene,
    k: u32,
    overrides: Overrides,
}

fn load(a: &SceneArgs) -> Result<Loaded> {
    let scene = Scene::load(&a.scene)?;
    let k = a.k.unwrap_or(scene.k);
    Ok(Loaded { scene, k, overrides: a.params.clone().unwrap_or_default() })
}

fn cycle_of(l: &Loaded, id: &Option<String>) -> Result<TropicalCycle> {
    TropicalCycle::from_scene(&l.scene, id.as_deref())
}

fn slab_index(scene: &Scene, id: &Option<String>) -> Result<usize> {
    match id {
        None if scene.slabs.is_empty() => Err(Error::Invalid("scene has no slabs".into())),
        None => Ok(0),
        Some(id) => scene
            .slabs
            .iter()
            .position(|s| &s.id == id)
            .ok_or_else(|| Error::Invalid(format!("unknown slab {id}"))),
    }
}

struct SlabPoint {
    slab: usize,
    x: Vec<f64>,
    specialized: SpecializedLaurent,
    order: IntVector,
}

fn slab_point(l: &Loaded, a: &SlabPointArgs) -> Result<SlabPoint> {
    let i = slab_index(&l.scene, &a.slab)?;
    let slab = &l.scene.slabs[i];
    let names = &l.scene.rhos[slab.rho].lambda_names;
    let x = a.at.clone().unwrap_or_else(|| vec![0.0; names.len()]);
    let mut vals = l.scene.numeric_values(&l.overrides);
    vals.insert(l.scene.series_var.clone(), Complex64::new(0.0, 0.0));
    let specialized = SpecializedLaurent::from_laurent(&slab.function, names, &vals)?;
    let order = complement_order(&specialized, &x)?;
    Ok(SlabPoint { slab: i, x, specialized, order })
}

fn cmd_ronkin(a: &SlabPointArgs) -> Result<Output> {
    let l = load(&a.scene)?;
    let p = slab_point(&l, a)?;
    let slab = &l.scene.slabs[p.slab];
    let r = &l.scene.rhos[slab.rho];
    let vals = l.scene.numeric_values(&l.overrides);
    let series = ronkin_series(&slab.function, &p.order, &p.x, &r.lambda_names, &l.scene.parameters, &l.scene.series_var, &vals, l.k)?;
    let numeric = ronkin_numeric(&p.specialized, &p.order, &p.x, RonkinOptions::default())?;
    Ok(Output::json(json!({
        "slab": slab.id,
        "at": p.x,
        "order": p.order,
        "series": to_value(&series.value),
        "numeric_mod_t": [numeric.re, numeric.im],
    })))
}

fn cmd_order(a: &SlabPointArgs) -> Result<Output> {
    let l = load(&a.scene)?;
    let p = slab_point(&l, a)?;
    Ok(Output::json(json!({ "slab": l.scene.slabs[p.slab].id, "at": p.x, "order": p.order })))
}

fn cmd_factor(a: &SlabPointArgs) -> Result<Output> {
    let l = load(&a.scene)?;
    let p = slab_point(&l, a)?;
    let slab = &l.scene.slabs[p.slab];
    let r = &l.scene.rhos[slab.rho];
    let vals = l.scene.numeric_values(&l.overrides);
    let (f, _) = slab_series(&slab.function, &p.order, &p.x, &r.lambda_names, &l.scene.parameters, &l.scene.series_var, &vals, l.k)?;
    let fac = factorize_binomials(&f)?;
    let unit = crate::exact::Laurent::term(fac.unit.clone(), monomial_of_vars(f.space().vars(), &fac.unit_exp));
    Ok(Output::json(json!({
        "slab": slab.id,
        "order": p.order,
        "unit": unit.to_string(),
        "factors": to_value(&fac.factors),
    })))
}

fn monomial_of_vars(vars: &[String], e: &[i64]) -> crate::exact::Monomial {
    crate::exact::Monomial::from_pairs(vars.iter().map(|s| s.as_str()).zip(e.iter().copied()))
}

fn cmd_normalize(a: &CycleArgs) -> Result<Output> {
    let l = load(&a.scene)?;
    if a.cycle.is_some() {
        let c = cycle_of(&l, &a.cycle)?;
        let n = normalize_cycle(&c, &l.scene, &l.overrides)?;
        let spec = n.to_spec(&l.scene);
        let text = toml::to_string(&spec).map_err(|e| Error::Invalid(e.to_string()))?;
        return Ok(Output { text, json: Some(to_value(&spec)), failed: false });
    }
    let mut rows = Vec::new();
    for slab in &l.scene.slabs {
        let g = slab_normalization(&l.scene, slab, &l.overrides, l.k)?;
        rows.push(json!({
            "slab": slab.id,
            "correction": g.to_string(),
            "normalized": slab.function.add(&g).to_string(),
        }));
    }
    Ok(Output::json(Value::Array(rows)))
}

fn cmd_period(a: &CycleArgs) -> Result<Output> {
    let l = load(&a.scene)?;
    let c = cycle_of(&l, &a.cycle)?;
    if !check_balancing(&c, &l.scene, &l.overrides)? {
        return Err(Error::Cycle(format!("cycle {} is not balanced", c.id)));
    }
    let p = period(&c, &l.scene, &l.overrides, l.k)?;
    let mut v = to_value(&p);
    v["value"] = Value::String(p.to_string());
    v["cycle"] = Value::String(c.id.clone());
    Ok(Output::json(v))
}

fn cmd_pairing(a: &CycleArgs, what: &str) -> Result<Output> {
    let l = load(&a.scene)?;
    let c = cycle_of(&l, &a.cycle)?;
    let value = match what {
        "gluing" => to_value(&pair_gluing(&c, &l.scene, &l.overrides)?),
        _ => json!(pair_c1(&c, &l.scene, &l.overrides)?),
    };
    Ok(Output::json(json!({ "cycle": c.id, what: value })))
}

fn cmd_validate(a: &SceneArgs) -> Result<Output> {
    let l = load(a)?;
    let v = validate_scene(&l.scene);
    let text = if v.is_empty() {
        "ok".to_string()
    } else {
        v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("\n")
    };
    Ok(Output { text, json: Some(to_value(&v)), failed: !v.is_empty() })
}

fn cmd_homology(path: &Path, degree: Option<usize>) -> Result<Output> {
    let file: TwistedComplexFile = toml::from_str(&fs::read_to_string(path)?)?;
    let t = TwistedComplex::new(&file)?;
    let degrees: Vec<usize> = degree.map_or_else(|| vec![0, 1, 2], |q| vec![q]);
    let groups = degrees.iter().map(|&q| twisted_homology(&t, q)).collect::<Result<Vec<_>>>()?;
    let text = groups.iter().map(|g| g.to_string()).collect::<Vec<_>>().join("\n");
    Ok(Output { text, json: Some(to_value(&groups)), failed: false })
}

fn cmd_picard(pairings: &Option<PathBuf>, scene: &Option<PathBuf>, cycles: &[String]) -> Result<Output> {
    let gens = match (pairings, scene) {
        (Some(p), _) => PicardFile::parse(&fs::read_to_string(p)?)?,
        (None, Some(s)) => {
            let scene = Scene::load(s)?;
            let ids: Vec<String> =
                if cycles.is_empty() { scene.cycle_specs.iter().map(|c| c.id.clone()).collect() } else { cycles.to_vec() };
            let cs = ids.iter().map(|id| TropicalCycle::from_scene(&scene, Some(id))).collect::<Result<Vec<_>>>()?;
            picard_from_cycles(&cs, &scene, &Overrides::new())?
        }
        (None, None) => return Err(Error::Invalid("picard needs --pairings or --scene".into())),
    };
    let lat = picard_sublattice(&gens)?;
    Ok(Output::json(json!({
        "generators": gens.iter().map(|g| g.id.clone()).collect::<Vec<_>>(),
        "rank": lat.rank,
        "basis": lat.basis,
    })))
}

fn cmd_consistency(a: &SceneArgs) -> Result<Output> {
    let l = load(a)?;
    let mut rows = Vec::new();
    let mut ok = true;
    for lp in &l.scene.source().loops {
        let cell = l.scene.cell_index(&lp.cell)?;
        let pts = lp.points.iter().map(|p| crate::scene::rationals(p)).collect::<Result<Vec<_>>>()?;
        let good = check_consistency_codim0(&l.scene, cell, &pts, l.k)?;
        ok &= good;
        rows.push(json!({ "loop": lp.id, "consistent": good }));
    }
    for (i, r) in l.scene.rhos.iter().enumerate() {
        if l.scene.slabs.iter().any(|s| s.rho == i) {
            let good = check_consistency_codim1(&l.scene, i);
            ok &= good;
            rows.push(json!({ "rho": r.id, "consistent": good, "reductions": slab_reductions(&l.scene, i) }));
        }
    }
    let v = json!({ "consistent": ok, "checks": rows });
    Ok(Output { text: pretty(&v), json: Some(v), failed: !ok })
}

fn cmd_plot(a: &PlotArgs) -> Result<Output> {
    let l = load(&a.scene)?;
    let i = slab_index(&l.scene, &a.slab)?;
    let slab = &l.scene.slabs[i];
    let mut vals = l.scene.numeric_values(&l.overrides);
    vals.insert(l.scene.series_var.clone(), Complex64::new(0.0, 0.0));
    let f = SpecializedLaurent::from_laurent(&slab.function, &l.scene.rhos[slab.rho].lambda_names, &vals)?;
    let r = amoeba_raster(&f, &a.lo, &a.hi, a.resolution)?;
    if let Some(p) = &a.svg {
        fs::write(p, r.to_svg())?;
    }
    if let Some(p) = &a.csv {
        fs::write(p, r.to_csv())?;
    }
    Ok(Output::json(json!({ "slab": slab.id, "resolution": a.resolution, "inside": r.count() })))
}

fn cmd_lemmas(c: &LemmaCommand) -> Result<Output> {
    match *c {
        LemmaCommand::Alternating { max } => {
            let mut failures = Vec::new();
            for m in 1..=max {
                for n in 1..=max {
                    if !alternating_roots(m, n)? {
                        failures.push(format!("({m}, {n})"));
                    }
                }
            }
            let text = if failures.is_empty() {
                format!("alternating roots for 1 <= m, n <= {max}: all pass")
            } else {
                format!("alternating roots fail for {}", failures.join(", "))
            };
            Ok(Output { text, json: Some(json!({ "max": max, "failures": failures })), failed: !failures.is_empty() })
        }
        LemmaCommand::Gamma { max } => {
            let rows = (3..=max.max(3))
                .map(|v| Ok((v, gamma_v_fraction(v)?)))
                .collect::<Result<Vec<_>>>()?;
            let text = rows.iter().map(|(v, f)| format!("{v}\t{f}")).collect::<Vec<_>>().join("\n");
            let json = json!(rows.iter().map(|(v, f)| json!({ "valency": v, "fraction": f.to_string() })).collect::<Vec<_>>());
            Ok(Output { text, json: Some(json), failed: false })
        }
    }
}

fn json_target(c: &Command) -> Option<&PathBuf> {
    match c {
        Command::Validate(a) | Command::Consistency(a) => a.json_out.as_ref(),
        Command::Period(a) | Command::PairC1(a) | Command::PairGluing(a) | Command::Monodromy(a) | Command::Normalize(a) => {
            a.scene.json_out.as_ref()
        }
        Command::Ronkin(a) | Command::Order(a) | Command::Factor(a) => a.scene.json_out.as_ref(),
        Command::Amoeba(AmoebaCommand::Order(a)) | Command::Amoeba(AmoebaCommand::Ronkin(a)) => a.scene.json_out.as_ref(),
        Command::AmoebaPlot(a) | Command::Amoeba(AmoebaCommand::Plot(a)) => a.scene.json_out.as_ref(),
        _ => None,
    }
}

fn dispatch(c: &Command) -> Result<Output> {
    match c {
        Command::Validate(a) => cmd_validate(a),
        Command::Period(a) => cmd_period(a),
        Command::PairC1(a) => cmd_pairing(a, "c1"),
        Command::PairGluing(a) => cmd_pairing(a, "gluing"),
        Command::Monodromy(a) => cmd_pairing(a, "monodromy"),
        Command::Ronkin(a) | Command::Amoeba(AmoebaCommand::Ronkin(a)) => cmd_ronkin(a),
        Command::Order(a) | Command::Amoeba(AmoebaCommand::Order(a)) => cmd_order(a),
        Command::Factor(a) => cmd_factor(a),
        Command::Normalize(a) => cmd_normalize(a),
        Command::Homology { complex, degree } => cmd_homology(complex, *degree),
        Command::Picard { pairings, scene, cycles } => cmd_picard(pairings, scene, cycles),
        Command::Consistency(a) => cmd_consistency(a),
        Command::AmoebaPlot(a) | Command::Amoeba(AmoebaCommand::Plot(a)) => cmd_plot(a),
        Command::Lemmas(l) => cmd_lemmas(l),
    }
}

/// Caps the rayon pool at `TROPPER_THREADS` when set.
fn configure_threads() {
    if let Some(n) = std::env::var("TROPPER_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // a pool may already exist when called twice in one process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

/// Runs the command line `args` (including the program name), writing
/// results to `out` and errors to `err`. Returns the exit code: 0 on
/// success, 1 on a domain error or failed check, 2 on a usage error.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    configure_threads();
    match dispatch(&cli.command) {
        Ok(o) => {
            let _ = writeln!(out, "{}", o.text);
            if let (Some(path), Some(v)) = (json_target(&cli.command), &o.json) {
                if let Err(e) = fs::write(path, pretty(v)) {
                    let _ = writeln!(err, "error: {e}");
                    return 1;
                }
            }
            i32::from(o.failed)
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}
