//! Acceptance criteria 1–10, run in order with one pass/fail line each.
//!
//! Lines go straight to the stderr handle so they are visible even when the
//! harness captures output.

mod common;

use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::{Arc, OnceLock};
use std::time::Instant;

use soergel_core::bsmod::f2::{f2, f2_three, preserves_one_from_left};
use soergel_core::bsmod::fsr::{f_sr, inclusion_holds, normalization_holds};
use soergel_core::bsmod::hom::{dz, graded_rank_image, hom_dense, span_dim};
use soergel_core::bsmod::leaves::{standard_homs, Pruning};
use soergel_core::bsmod::localize::k_blocks;
use soergel_core::bsmod::BSMorphism;
use soergel_core::catbases::{default_truncation, kl_positive, BasisElement, Engine, Kind};
use soergel_core::polyring::monomials;
use soergel_core::{CoxeterSystem, GroupElement, HeckeElement, LaurentPoly, Ring};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);
type Suite = (&'static str, fn(u64) -> bool);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return Err(format!($($msg)*));
        }
    };
}

fn report(line: &str) {
    let mut err = std::io::stderr();
    let _ = writeln!(err, "{line}");
}

fn rank3_system() -> Arc<CoxeterSystem> {
    CoxeterSystem::build(&[vec![1, 4, 4], vec![4, 1, 4], vec![4, 4, 1]], true).unwrap()
}

const EXAMPLE2: [usize; 7] = [0, 1, 0, 1, 2, 0, 2];

struct Tables {
    engine: Engine,
    e: Vec<BasisElement>,
    d: Vec<BasisElement>,
}

/// e- and d-tables over the whole dihedral group, computed once.
fn tables(m: u32) -> &'static Tables {
    static T4: OnceLock<Tables> = OnceLock::new();
    static T5: OnceLock<Tables> = OnceLock::new();
    let cell = if m == 4 { &T4 } else { &T5 };
    cell.get_or_init(|| {
        let engine = Engine::new(CoxeterSystem::dihedral(m).unwrap()).unwrap();
        let elems = engine.system().elements_up_to(m as usize);
        let mut e = Vec::new();
        let mut d = Vec::new();
        for x in &elems {
            e.push(engine.decategorify(&engine.build_e(x.word()).unwrap()).unwrap());
            d.push(engine.decategorify(&engine.build_d(x.word()).unwrap()).unwrap());
        }
        Tables { engine, e, d }
    })
}

fn y_product(engine: &Engine, word: &[usize]) -> HeckeElement {
    let h = &engine.hecke;
    word.iter().fold(h.one(), |acc, &s| h.mul(&acc, &h.c_gen(s)))
}

fn criterion1() -> Outcome {
    for m in [4u32, 5] {
        let ring = Ring::new(CoxeterSystem::dihedral(m).unwrap());
        for (s, r) in [(0, 1), (1, 0)] {
            let f = f_sr(&ring, s, r).map_err(|e| e.to_string())?;
            let g = f_sr(&ring, r, s).map_err(|e| e.to_string())?;
            ensure!(f.degree == 0, "m={m}: degree {}", f.degree);
            ensure!(f.verify_bimodule(), "m={m}: bimodule certificate failed");
            ensure!(normalization_holds(&f), "m={m}: normalization");
            let budget = default_truncation(m as usize);
            ensure!(inclusion_holds(&f, budget).map_err(|e| e.to_string())?, "m={m}: inclusion");
            ensure!(f.compose(&g).unwrap().compose(&f).unwrap() == f, "m={m}: f∘g∘f ≠ f");
        }
    }
    Ok("m=4,5, both orientations".into())
}

fn criterion2() -> Outcome {
    for m in [4u32, 5] {
        let ring = Ring::new(CoxeterSystem::dihedral(m).unwrap());
        let basis = dz(&ring, 0, 1).map_err(|e| e.to_string())?;
        ensure!(span_dim(&basis) == 1, "m={m}: dim DZ = {}", span_dim(&basis));
        let mut with_f = basis.clone();
        with_f.push(f_sr(&ring, 0, 1).unwrap());
        ensure!(span_dim(&with_f) == 1, "m={m}: f_sr outside DZ");
    }
    Ok("dim DZ = 1 for m=4,5".into())
}

fn criterion3() -> Outcome {
    for m in [4u32, 5] {
        let ring = Ring::new(CoxeterSystem::dihedral(m).unwrap());
        let err = |e: soergel_core::Error| e.to_string();
        ensure!(f2(&ring, 0, 1, 2).map_err(err)? == BSMorphism::identity(&ring, &[0, 1]), "m={m}: f2(2) ≠ id");
        ensure!(f2(&ring, 0, 1, 3).map_err(err)? == f2_three(&ring, 0, 1).map_err(err)?, "m={m}: f2(3) ≠ closed formula");
        let rt = f_sr(&ring, 1, 0).unwrap().compose(&f_sr(&ring, 0, 1).unwrap()).unwrap();
        ensure!(f2(&ring, 0, 1, m as usize).map_err(err)? == rt, "m={m}: f2(m) ≠ f_rs∘f_sr");
    }
    let ring = Ring::new(CoxeterSystem::dihedral(5).unwrap());
    let e = f2(&ring, 0, 1, 4).map_err(|e| e.to_string())?;
    ensure!(e.is_idempotent() && e.degree == 0 && e.verify_bimodule(), "f2(4) at m=5 is not a degree-0 idempotent");
    ensure!(preserves_one_from_left(&e), "f2(4) at m=5 breaks the one-from-left inclusion");
    let sys = ring.system();
    let top = sys.element(&[0, 1, 0, 1]);
    let k = k_blocks(&ring, &e.src, &e.mat).map_err(|e| e.to_string())?;
    let below: Vec<GroupElement> = sys.elements_up_to(4).into_iter().filter(|y| sys.bruhat_leq(y, &top)).collect();
    ensure!(k.len() == below.len() && below.iter().all(|y| k.get(y) == Some(&1)), "k_blocks of f2(4): {k:?}");
    Ok("f2(2), f2(3), f2(m) for m=4,5; f2(4) at m=5".into())
}

fn all_words(len: usize) -> Vec<Vec<usize>> {
    (0..1usize << len).map(|b| (0..len).map(|i| b >> i & 1).collect()).collect()
}

fn dihedral8() -> Arc<CoxeterSystem> {
    let json = r#"{"generators":["s","r"],"bond":[[1,8],[8,1]],
                  "field":{"minpoly":[2,0,-4,0,1],"cos":{"8":"θ/2"},"root":[1.8,1.9]}}"#;
    CoxeterSystem::from_json(json, true).unwrap()
}

fn criterion4() -> Outcome {
    let mut counted = 0;
    // The bound holds for 1 ≤ n ≤ m only; m = 8 reaches n = 8.
    for sys in [CoxeterSystem::dihedral(4).unwrap(), CoxeterSystem::dihedral(5).unwrap(), dihedral8()] {
        let m = sys.bond(0, 1);
        let engine = Engine::new(sys).unwrap();
        // ⋯(1+T_s)(1+T_r)(1+T_s) with n factors: deg_q p_y ≤ (n − ℓ(y))/2 if
        // ys < y, ≤ (n − ℓ(y) − 1)/2 otherwise, and p_{sr(n)} = 1.
        let sys = engine.system().clone();
        for n in 1..=m as usize {
            let mut w = CoxeterSystem::alternating(0, 1, n);
            w.reverse();
            let h = engine.hecke.bs_class(&w);
            for (y, p) in h.support() {
                ensure!(p.max_degree().unwrap_or(0) <= 0, "positive v-power in {w:?}");
                let qdeg = -p.min_degree().unwrap_or(0) / 2;
                let slack = if sys.is_right_descent(y, 0) { 0 } else { 1 };
                ensure!(2 * qdeg <= n as i32 - y.length() as i32 - slack, "m={m} n={n}: p_{:?} has q-degree {qdeg}", y.word());
            }
            ensure!(h.coeff(&sys.element(&w)) == LaurentPoly::one(), "m={m} n={n}: top coefficient ≠ 1");
            counted += 1;
        }
    }
    for m in [4u32, 5] {
        let engine = Engine::new(CoxeterSystem::dihedral(m).unwrap()).unwrap();
        let ring = engine.ring.clone();
        let e = engine.system().identity();
        // Hom(θ_word, R) graded rank agrees with τ of the class.
        for n in 0..=6 {
            for w in all_words(n) {
                let homs = standard_homs(&ring, &w, &Pruning { max_degree: None, labels: Some(vec![e.clone()]) })
                    .map_err(|e| e.to_string())?;
                let tau = engine.hecke.bs_class(&w).tau();
                ensure!(homs.graded_rank(&e) == tau, "m={m} word {w:?}: rank {} vs τ {}", homs.graded_rank(&e), tau);
                if n <= 3 {
                    // Independent degreewise dimensions from the dense solver.
                    for k in (-2 * n as i64..=4).step_by(2) {
                        let predicted: usize = homs
                            .get(&e)
                            .iter()
                            .filter(|g| g.degree <= k)
                            .map(|g| monomials(2, ((k - g.degree) / 2) as u32).len())
                            .sum();
                        let dense = hom_dense(&ring, &w, &[], k).len();
                        ensure!(predicted == dense, "m={m} word {w:?} degree {k}: {predicted} vs dense {dense}");
                    }
                }
            }
        }
    }
    // Minimal degree on θ^r_{sr}(n) = ⋯θ_sθ_rθ_s.
    for m in [4u32, 5, 6] {
        let ring = Ring::new(CoxeterSystem::dihedral(m).unwrap());
        let e = ring.system().identity();
        for n in 1..=6.min(m as usize) {
            let mut w = CoxeterSystem::alternating(0, 1, n);
            w.reverse();
            let homs = standard_homs(&ring, &w, &Pruning { max_degree: None, labels: Some(vec![e.clone()]) })
                .map_err(|e| e.to_string())?;
            let min = homs.get(&e).iter().map(|g| g.degree).min().unwrap_or(0);
            let bound = -2 * ((n as i64 - 1) / 2);
            ensure!(min >= bound, "m={m} n={n}: minimal degree {min} < {bound}");
        }
    }
    Ok(format!("{counted} alternating products, ranks for all words of length ≤ 6"))
}

fn criterion5() -> Outcome {
    let t = tables(4);
    let eng = &t.engine;
    let sys = eng.system();
    let find = |w: &[usize]| t.e.iter().find(|b| b.w == sys.element(w)).unwrap();
    ensure!(find(&[0, 1, 0]).h == y_product(eng, &[0, 1, 0]).shift(-3), "e_srs ≠ v⁻³C'_sC'_rC'_s");
    let srsr = sys.element(&[0, 1, 0, 1]);
    ensure!(find(&[0, 1, 0, 1]).h == eng.hecke.kl(&srsr).shift(-4), "e_srsr ≠ v⁻⁴C'_srsr");
    for el in &t.e {
        ensure!(el.h.is_unitriangular(sys, &el.w) && el.h.is_positive(), "e_{:?} not unitriangular/positive", el.w);
        let b = eng.build_e(el.w.word()).unwrap();
        ensure!(eng.q1_crosscheck(&b, el).map_err(|e| e.to_string())?, "q=1 crosscheck fails at {:?}", el.w);
        let total: i64 = k_blocks(&eng.ring, &b.word, &b.e.mat).unwrap().values().sum();
        ensure!(graded_rank_image(&b.e).unwrap().eval_at_one() == total, "image rank vs k_blocks at {:?}", el.w);
    }
    Ok(format!("{} elements", t.e.len()))
}

fn criterion6() -> Outcome {
    for m in [4u32, 5] {
        let t = tables(m);
        let eng = &t.engine;
        for el in &t.d {
            let x = &el.w;
            if x.length() == 3 {
                let y = y_product(eng, x.word());
                ensure!(el.h == y, "m={m}: d_{:?} ≠ C'C'C'", x.word());
                ensure!(el.h != eng.hecke.kl(x), "m={m}: d_{:?} unexpectedly equals C'", x.word());
            } else {
                ensure!(el.h == eng.hecke.kl(x), "m={m}: d_{:?} ≠ C'_x", x.word());
            }
            let b = eng.build_d(x.word()).unwrap();
            ensure!(eng.q1_crosscheck(&b, el).map_err(|e| e.to_string())?, "m={m}: q=1 crosscheck at {:?}", x.word());
        }
    }
    Ok("m=4,5, all x".into())
}

fn rank3_engine() -> &'static Engine {
    static E: OnceLock<Engine> = OnceLock::new();
    E.get_or_init(|| Engine::new(rank3_system()).unwrap())
}

fn criterion7() -> Outcome {
    let eng = rank3_engine();
    let b = eng.build_d(&EXAMPLE2).map_err(|e| e.to_string())?;
    let d = eng.decategorify(&b).map_err(|e| e.to_string())?;
    let x = eng.system().element(&EXAMPLE2);
    ensure!(d.h == eng.hecke.kl(&x), "d_srsrtst = {}", d.h.display(eng.system()));
    Ok("d_srsrtst = C'_srsrtst".into())
}

fn well_defined(eng: &Engine, x: &GroupElement, kinds: &[Kind]) -> Result<usize, String> {
    let sys = eng.system();
    let rexes = sys.rex_set(x);
    let first = &rexes[0];
    let mut checks = 0;
    for &kind in kinds {
        ensure!(eng.tuple_independence_check(first, kind, 3).map_err(|e| e.to_string())?, "tuple dependence at {:?}", first);
        for t in rexes.iter().skip(1) {
            ensure!(eng.iso_check(first, t, kind).map_err(|e| e.to_string())?, "iso_check {:?} vs {:?}", first, t);
            checks += 1;
        }
        checks += 1;
    }
    Ok(checks)
}

fn criterion8() -> Outcome {
    let mut checks = 0;
    for m in [4u32, 5] {
        let eng = &tables(m).engine;
        for x in eng.system().elements_up_to(5) {
            checks += well_defined(eng, &x, &[Kind::E, Kind::D])?;
        }
    }
    let eng = rank3_engine();
    checks += well_defined(eng, &eng.system().element(&EXAMPLE2), &[Kind::E, Kind::D])?;
    Ok(format!("{checks} checks"))
}

fn criterion9() -> Outcome {
    const CASES: u64 = 100;
    let suites: [Suite; 5] = [
        ("Demazure braid identity", common::demazure_braid),
        ("Leibniz rule", common::leibniz),
        ("normal form reassembly", common::normal_form_reassembly),
        ("random composites are bimodule maps", common::composite_is_bimodule),
        ("adjunction dimension", common::adjunction_dimension),
    ];
    for (name, check) in suites {
        for seed in 0..CASES {
            ensure!(check(seed), "{name}: seed {seed}");
        }
    }
    let ring = Ring::new(CoxeterSystem::dihedral(4).unwrap());
    for s in 0..2 {
        for g in [BSMorphism::m(&ring, s), BSMorphism::j(&ring, s), BSMorphism::alpha(&ring, s)] {
            ensure!(g.verify_bimodule(), "generator fails verify_bimodule");
        }
    }
    let mut effective = 0;
    let mut seed = 0;
    while effective < CASES {
        if let Some(ok) = common::one_from_left_preserved(seed) {
            ensure!(ok, "one-from-left: seed {seed}");
            effective += 1;
        }
        seed += 1;
    }
    Ok(format!("{CASES} seeded instances per suite"))
}

fn criterion10() -> Outcome {
    let mut pairs = 0;
    for m in [4u32, 5] {
        let t = tables(m);
        let report = t.engine.basis_report(&t.e, &t.d).map_err(|e| e.to_string())?;
        for row in &report.rows {
            ensure!(row.e_minus_d_positive == Some(true), "m={m}: v^ℓ e − d not positive at {}", row.w);
            ensure!(row.d_minus_kl_positive == Some(true), "m={m}: d − C' not positive at {}", row.w);
            pairs += 1;
        }
    }
    let eng = rank3_engine();
    let e = eng.decategorify(&eng.build_e(&EXAMPLE2).unwrap()).unwrap();
    let d = eng.decategorify(&eng.build_d(&EXAMPLE2).unwrap()).unwrap();
    ensure!(kl_positive(&eng.hecke, &e.h.shift(7).sub(&d.h)), "rank 3: v^7 e − d not positive");
    Ok(format!("{} pairs", pairs + 1))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 10] = [
        ("f_sr certificate", criterion1),
        ("DZ is one-dimensional", criterion2),
        ("f2 correctness", criterion3),
        ("degree bounds", criterion4),
        ("E-basis reproduction", criterion5),
        ("D-basis reproduction", criterion6),
        ("rank-3 d_srsrtst", criterion7),
        ("idempotent well-definedness", criterion8),
        ("property suites", criterion9),
        ("summand-chain positivity", criterion10),
    ];
    // ACCEPTANCE_ONLY=3,7 restricts the run to the listed criteria.
    let only: Option<Vec<usize>> =
        std::env::var("ACCEPTANCE_ONLY").ok().map(|v| v.split(',').filter_map(|x| x.trim().parse().ok()).collect());
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        if only.as_ref().is_some_and(|o| !o.contains(&(i + 1))) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => report(&format!("criterion {:>2} PASS {name} ({detail}; {secs:.1} s)", i + 1)),
            Err(why) => {
                report(&format!("criterion {:>2} FAIL {name}: {why} ({secs:.1} s)", i + 1));
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

