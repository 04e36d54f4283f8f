//! Acceptance run: one line per criterion, with its tolerance and time
//! budget. Exits nonzero when any criterion fails.

mod common;

use std::collections::HashMap;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{kp1_glued, random_kp1_cycle, scene};
use tropper::amoeba::{complement_order, root_count_order, ronkin_numeric, winding_number, RonkinOptions, SpecializedLaurent};
use tropper::cycle::{normalize_cycle, Overrides, TropicalCycle};
use tropper::exact::{GaussRat, IntVector, Laurent, Lattice, Monomial};
use tropper::period::{
    alternating_roots, gamma_v_fraction, in_picard, monodromy, normalize_scene_slabs, pair_c1, pair_gluing, period,
    picard_sublattice, ronkin_series, slab_normalization, PicardFile,
};
use tropper::scene::rationals;
use tropper::series::{factorize_binomials, log_series, SeriesSpace, TruncatedSeries};
use tropper::walls::check_consistency_codim0;

const RONKIN_NUMERIC_TOL: f64 = 1e-8;
const WINDING_RESIDUAL_TOL: f64 = 0.1;
const PICARD_BOX: i64 = 5;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn poly_s(coeffs: &[BigRational], shift: i64) -> Laurent {
    let mut out = Laurent::zero();
    for (i, c) in coeffs.iter().enumerate() {
        if !c.is_zero() {
            let e = i as i64 + shift;
            out = out.add(&Laurent::term(GaussRat::from_rational(c.clone()), Monomial::from_pairs([("s", e)])));
        }
    }
    out
}

/// `log h = Σ_{n≥1} (−1)^{n−1}/n [x⁰y⁰](x + y + s/(xy))^n` through `s^k`.
fn log_h_oracle(k: usize) -> Vec<BigRational> {
    let fact = |m: usize| (1..=m).fold(BigInt::one(), |a, b| a * b);
    let mut out = vec![BigRational::zero(); k + 1];
    for (j, slot) in out.iter_mut().enumerate().skip(1) {
        let n = 3 * j;
        let sign: i64 = if n % 2 == 1 { 1 } else { -1 };
        *slot = BigRational::new(fact(n) * sign, fact(j).pow(3) * BigInt::from(n));
    }
    out
}

/// `exp` of a power series without constant term, by `n e_n = Σ k L_k e_{n−k}`.
fn exp_oracle(l: &[BigRational]) -> Vec<BigRational> {
    let mut e = vec![BigRational::one()];
    for n in 1..l.len() {
        let mut acc = BigRational::zero();
        for k in 1..=n {
            acc += BigRational::from_integer(k.into()) * &l[k] * &e[n - k];
        }
        e.push(acc / BigRational::from_integer(n.into()));
    }
    e
}

fn criterion_1() -> Outcome {
    let s = scene("kp1");
    let c = TropicalCycle::from_scene(&s, Some("circle")).map_err(|e| e.to_string())?;
    let p = period(&c, &s, &Overrides::new(), 4).map_err(|e| e.to_string())?;
    ensure(p.gluing.is_identity(), || format!("gluing {}", p.gluing))?;
    ensure(p.t_exponent == 0, || format!("t-exponent {}", p.t_exponent))?;
    let want = Laurent::parse("a*b").unwrap();
    ensure(p.exp_ronkin == want, || format!("exp(R) = {}", p.exp_ronkin))?;
    Ok(format!("period {p}"))
}

fn criterion_2() -> Outcome {
    let s = scene("kp2");
    let g = slab_normalization(&s, &s.slabs[0], &Overrides::new(), 3).map_err(|e| e.to_string())?;
    let want = Laurent::parse("-2*s + 5*s^2 - 32*s^3").unwrap();
    ensure(g == want, || format!("g = {g}"))?;
    Ok(format!("g = {g}"))
}

fn criterion_3() -> Outcome {
    let s = scene("kp2");
    let c = TropicalCycle::from_scene(&s, Some("green")).map_err(|e| e.to_string())?;
    let p = period(&c, &s, &Overrides::new(), 3).map_err(|e| e.to_string())?;
    let log_h = log_h_oracle(3);
    let three: Vec<BigRational> = log_h.iter().map(|x| x * BigRational::from_integer(3.into())).collect();
    let want = poly_s(&exp_oracle(&three), 1);
    ensure(p.gluing.is_identity(), || format!("gluing {}", p.gluing))?;
    ensure(p.exp_ronkin == want, || format!("exp(R) = {}, oracle {}", p.exp_ronkin, want))?;
    let n = normalize_scene_slabs(&s, &Overrides::new(), 3).map_err(|e| e.to_string())?;
    let cn = TropicalCycle::from_scene(&n, Some("green")).map_err(|e| e.to_string())?;
    let pn = period(&cn, &n, &Overrides::new(), 3).map_err(|e| e.to_string())?;
    ensure(pn.exp_ronkin == Laurent::parse("s").unwrap(), || format!("normalized exp(R) = {}", pn.exp_ronkin))?;
    Ok(format!("exp(R) = {} (h^3 s); normalized {}; log h = {}", p.exp_ronkin, pn.exp_ronkin, poly_s(&log_h, 0)))
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0f64;
    for trial in 0..50 {
        let dim = 1 + trial % 2;
        let names: Vec<String> = ["x", "y"][..dim].iter().map(|s| s.to_string()).collect();
        let mut f = Laurent::one();
        let mut specialized = vec![(vec![0i64; dim], Complex64::new(1.0, 0.0))];
        for _ in 0..rng.gen_range(1..=4) {
            let m: Vec<i64> = loop {
                let m: Vec<i64> = (0..dim).map(|_| rng.gen_range(-3..=3)).collect();
                if m.iter().any(|&x| x != 0) {
                    break m;
                }
            };
            let a = loop {
                let a = rng.gen_range(-30..=30i64);
                if a != 0 {
                    break a;
                }
            };
            let mono = Monomial::from_pairs(names.iter().map(|s| s.as_str()).zip(m.iter().copied()).chain([("t", 1)]));
            f = f.mul(&Laurent::one().add(&Laurent::term(GaussRat::from_ratio(a, 100), mono)));
            let mut next = Vec::new();
            for (e, c) in &specialized {
                next.push((e.clone(), *c));
                let e2: Vec<i64> = e.iter().zip(&m).map(|(x, y)| x + y).collect();
                next.push((e2, c * (a as f64 / 100.0)));
            }
            specialized = next;
        }
        let g = SpecializedLaurent::new(dim, specialized).map_err(|e| e.to_string())?;
        let x = vec![0.0; dim];
        let m = complement_order(&g, &x).map_err(|e| e.to_string())?;
        ensure(m.is_zero(), || format!("trial {trial}: order {m} on the unit torus"))?;
        let numeric = ronkin_numeric(&g, &m, &x, RonkinOptions::default()).map_err(|e| e.to_string())?;
        worst = worst.max(numeric.norm());
        ensure(numeric.norm() < RONKIN_NUMERIC_TOL, || format!("trial {trial}: numeric {numeric}"))?;
        let vals: HashMap<String, Complex64> = [("t".to_string(), Complex64::new(1.0, 0.0))].into();
        let r = ronkin_series(&f, &m, &x, &names, &["t".to_string()], "t", &vals, 6).map_err(|e| e.to_string())?;
        ensure(r.value.is_zero(), || format!("trial {trial}: series {}", r.value))?;
    }
    Ok(format!("50 products: series exactly 0, numeric max |R| = {worst:.1e} (tol {RONKIN_NUMERIC_TOL:.0e})"))
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0f64;
    let mut done = 0;
    while done < 100 {
        let deg = rng.gen_range(1..=6i64);
        let lo = rng.gen_range(-3..=0i64);
        let terms: Vec<(Vec<i64>, Complex64)> = (0..=deg)
            .map(|i| (vec![lo + i], Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))))
            .collect();
        let f = SpecializedLaurent::new(1, terms).map_err(|e| e.to_string())?;
        let x: f64 = rng.gen_range(-2.0..2.0);
        let Ok(exact) = root_count_order(&f, x) else { continue };
        let w = winding_number(&f, &[x], &[0.0], 0, 8192).ok_or_else(|| format!("phase jump at x = {x}"))?;
        let r = w.round();
        worst = worst.max((w - r).abs());
        ensure((w - r).abs() < WINDING_RESIDUAL_TOL, || format!("residual {:.3} at x = {x}", (w - r).abs()))?;
        ensure(r as i64 == exact, || format!("winding {r} vs root count {exact} at x = {x}"))?;
        done += 1;
    }
    let s = scene("kp1");
    let names = &s.rhos[0].lambda_names;
    let f = SpecializedLaurent::from_laurent(&s.slabs[0].function, names, &s.numeric_values(&Overrides::new()))
        .map_err(|e| e.to_string())?;
    let orders: Vec<i64> = [-2.5, 0.0, 2.5]
        .iter()
        .map(|&x| complement_order(&f, &[x]).map(|m| m.as_slice()[0]))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    ensure(orders == [-1, 0, 1], || format!("K_P1 orders {orders:?}"))?;
    Ok(format!("100 polynomials agree, max residual {worst:.1e} (tol {WINDING_RESIDUAL_TOL}); K_P1 orders {orders:?}"))
}

fn criterion_6() -> Outcome {
    let s = scene("ks");
    let lp = &s.source().loops[0];
    let cell = s.cell_index(&lp.cell).map_err(|e| e.to_string())?;
    let pts = lp.points.iter().map(|p| rationals(p)).collect::<Result<Vec<_>, _>>().map_err(|e| e.to_string())?;
    let full = check_consistency_codim0(&s, cell, &pts, 2).map_err(|e| e.to_string())?;
    ensure(full, || "three walls inconsistent".into())?;
    let mut cut = s.clone();
    cut.walls.retain(|w| w.id != "wxy");
    let without = check_consistency_codim0(&cut, cell, &pts, 2).map_err(|e| e.to_string())?;
    ensure(!without, || "consistent without 1 + xy t^2".into())?;
    Ok("consistent at k = 2; inconsistent without the third wall".into())
}

fn criterion_7() -> Outcome {
    let mut report = Vec::new();
    for (name, id) in [("kp1", "circle"), ("focus_focus", "invariant"), ("kp2", "green"), ("kp2_local", "tripod")] {
        let s = scene(name);
        let c = TropicalCycle::from_scene(&s, Some(id)).map_err(|e| e.to_string())?;
        let a = monodromy(&c, &s, &Overrides::new()).map_err(|e| e.to_string())?;
        let b = pair_c1(&c, &s, &Overrides::new()).map_err(|e| e.to_string())?;
        ensure(a == b, || format!("{name}: monodromy {a} vs c1 {b}"))?;
        if name == "kp1" {
            ensure(a == 0, || format!("K_P1 monodromy {a}"))?;
        }
        report.push(format!("{name}={a}"));
    }
    Ok(report.join(", "))
}

fn box_vectors(dim: usize, max_nonzero: usize, bound: i64, out: &mut Vec<Vec<i64>>, cur: &mut Vec<i64>, from: usize, used: usize) {
    out.push(cur.clone());
    if used == max_nonzero {
        return;
    }
    for i in from..dim {
        for v in -bound..=bound {
            if v != 0 {
                cur[i] = v;
                box_vectors(dim, max_nonzero, bound, out, cur, i + 1, used + 1);
                cur[i] = 0;
            }
        }
    }
}

fn check_box(gens: &[tropper::period::PicardGenerator], lattice: &Lattice, vectors: &[Vec<i64>]) -> std::result::Result<(), String> {
    for v in vectors {
        let a = in_picard(gens, v);
        let b = lattice.contains(&IntVector::new(v.clone()));
        ensure(a == b, || format!("{v:?}: conditions {a}, lattice {b}"))?;
    }
    Ok(())
}

fn criterion_8() -> Outcome {
    let load = |name: &str| PicardFile::parse(&std::fs::read_to_string(common::fixture(&format!("{name}.toml"))).unwrap());
    let mut ranks = Vec::new();
    for name in ["picard20", "picard20_torsion"] {
        let gens = load(name).map_err(|e| e.to_string())?;
        ensure(gens.iter().any(|g| g.c1 != 0), || "c1 vanishes".into())?;
        let p = picard_sublattice(&gens).map_err(|e| e.to_string())?;
        ensure(p.rank == 19, || format!("{name}: rank {}", p.rank))?;
        let lat = Lattice::from_generators(&p.basis, 20);
        let mut vs = Vec::new();
        box_vectors(20, 2, PICARD_BOX, &mut vs, &mut vec![0; 20], 0, 0);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..2000 {
            vs.push((0..20).map(|_| rng.gen_range(-PICARD_BOX..=PICARD_BOX)).collect());
        }
        check_box(&gens, &lat, &vs)?;
        ranks.push(format!("{name}: rank 19 ({} box vectors)", vs.len()));
    }
    let gens = load("picard4").map_err(|e| e.to_string())?;
    let p = picard_sublattice(&gens).map_err(|e| e.to_string())?;
    let lat = Lattice::from_generators(&p.basis, 4);
    let mut vs = Vec::new();
    box_vectors(4, 4, PICARD_BOX, &mut vs, &mut vec![0; 4], 0, 0);
    check_box(&gens, &lat, &vs)?;
    ranks.push(format!("picard4: rank {} (exhaustive box, {} vectors)", p.rank, vs.len()));
    Ok(ranks.join("; "))
}

fn criterion_9() -> Outcome {
    for m in 1..=40 {
        for n in 1..=40 {
            ensure(alternating_roots(m, n).unwrap_or(false), || format!("({m}, {n}) do not alternate"))?;
        }
    }
    for v in 3..=12u32 {
        let f = gamma_v_fraction(v).map_err(|e| e.to_string())?;
        let want = if v % 2 == 1 { q(1, 2) } else { BigRational::zero() };
        ensure(f == want, || format!("valency {v}: {f}"))?;
    }
    Ok("alternation for 1 <= m, n <= 40; parity table for valencies 3..12".into())
}

fn criterion_10() -> Outcome {
    let s = kp1_glued();
    let none = Overrides::new();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut cycles = Vec::new();
    for i in 0..20 {
        let c = random_kp1_cycle(&s, &mut rng);
        let n = normalize_cycle(&c, &s, &none).map_err(|e| format!("cycle {i}: {e}"))?;
        let e = |x: tropper::Error| format!("cycle {i}: {x}");
        ensure(pair_c1(&c, &s, &none).map_err(e)? == pair_c1(&n, &s, &none).map_err(e)?, || format!("cycle {i}: c1"))?;
        ensure(pair_gluing(&c, &s, &none).map_err(e)? == pair_gluing(&n, &s, &none).map_err(e)?, || format!("cycle {i}: gluing"))?;
        let (a, b) = (period(&c, &s, &none, 4).map_err(e)?, period(&n, &s, &none, 4).map_err(e)?);
        ensure(a.ronkin == b.ronkin && a.t_exponent == b.t_exponent, || format!("cycle {i}: {a} vs {b}"))?;
        cycles.push(c);
    }
    for (i, pair) in cycles.chunks(2).enumerate() {
        let u = pair[0].disjoint_union(&pair[1], "b_");
        let (pu, p0, p1) = (
            period(&u, &s, &none, 4).map_err(|e| e.to_string())?,
            period(&pair[0], &s, &none, 4).map_err(|e| e.to_string())?,
            period(&pair[1], &s, &none, 4).map_err(|e| e.to_string())?,
        );
        ensure(pu.t_exponent == p0.t_exponent + p1.t_exponent, || format!("pair {i}: t-exponent"))?;
        ensure(pu.gluing == p0.gluing.mul(&p1.gluing), || format!("pair {i}: gluing"))?;
        ensure(pu.ronkin == p0.ronkin.add(&p1.ronkin), || format!("pair {i}: ronkin"))?;
    }
    let mut trips = 0;
    for k in 1..=6u32 {
        let sp = SeriesSpace::t_adic(vec!["x".into(), "y".into()], vec!["t".into()], "t", k).map_err(|e| e.to_string())?;
        for _ in 0..3 {
            let mut f = TruncatedSeries::one(&sp);
            for _ in 0..rng.gen_range(1..=4) {
                let e = vec![rng.gen_range(-2..=2), rng.gen_range(-2..=2), rng.gen_range(1..=k as i64)];
                f.add_term(e, &GaussRat::from_ratio(rng.gen_range(-5..=5), rng.gen_range(1..=4)));
            }
            let l = log_series(&f).map_err(|e| e.to_string())?;
            ensure(l.exp().map_err(|e| e.to_string())? == f, || format!("k = {k}: exp(log f) != f"))?;
            let fac = factorize_binomials(&f).map_err(|e| e.to_string())?;
            ensure(fac.expand(&f) == f, || format!("k = {k}: factorization does not expand to f"))?;
            trips += 1;
        }
    }
    Ok(format!("20 random cycles invariant under normalization; 10 unions additive; {trips} log/exp/factor round trips"))
}

fn main() {
    let criteria: [(u32, &str, u64, fn() -> Outcome); 10] = [
        (1, "K_P1 period a*b", 1, criterion_1),
        (2, "K_P2 slab normalization", 10, criterion_2),
        (3, "K_P2 period h^3 s, normalized s", 10, criterion_3),
        (4, "Ronkin of binomial products vanishes", 30, criterion_4),
        (5, "complement orders", 10, criterion_5),
        (6, "scattering consistency", 1, criterion_6),
        (7, "monodromy equals c1 pairing", 1, criterion_7),
        (8, "Picard rank 19", 15, criterion_8),
        (9, "lemma suite", 5, criterion_9),
        (10, "property suites", 60, criterion_10),
    ];
    let mut failed = 0;
    for (id, name, budget, run) in criteria {
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let over = elapsed > Duration::from_secs(budget);
        let (tag, detail) = match (&out, over) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("{d}; over time budget")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if tag == "FAIL" {
            failed += 1;
        }
        println!("criterion {id:>2} {tag} {name}: {detail} [{:.2} s / {budget} s]", elapsed.as_secs_f64());
    }
    println!("acceptance: {} of 10 criteria pass", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
