//! `verify`: runs check suites and reports every failure with a dump.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use soergel_core::bsmod::f2::{f2_three, preserves_one_from_left};
use soergel_core::bsmod::fsr::{inclusion_holds, normalization_holds};
use soergel_core::bsmod::hom::hom_dense;
use soergel_core::bsmod::BSMorphism;
use soergel_core::catbases::{default_truncation, kl_positive, Engine, Kind};
use soergel_core::poly::Mono;
use soergel_core::{CoxeterSystem, Fe, GroupElement, HeckeElement, LaurentPoly, Poly};

use super::Ctx;
use crate::report::{Report, Table};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    All,
    Fsr,
    F2,
    Idem,
    Bases,
    Oracle,
}

/// Deliberate corruption, to check that the verifier notices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Fault {
    /// Adds 1 to the top-left entry of every `f_sr`.
    Fsr,
}

#[derive(Clone, Debug, Serialize)]
struct Check {
    suite: &'static str,
    name: String,
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    dump: Option<Value>,
}

#[derive(Default)]
struct Log {
    checks: Vec<Check>,
}

impl Log {
    fn record(&mut self, suite: &'static str, name: impl Into<String>, pass: bool, dump: impl FnOnce() -> Value) {
        let dump = if pass { None } else { Some(dump()) };
        self.checks.push(Check { suite, name: name.into(), pass, detail: None, dump });
    }

    /// An error during a check counts as a failure carrying the message.
    fn error(&mut self, suite: &'static str, name: impl Into<String>, e: impl std::fmt::Display) {
        self.checks.push(Check { suite, name: name.into(), pass: false, detail: Some(e.to_string()), dump: None });
    }
}

fn pairs(sys: &CoxeterSystem) -> Vec<(usize, usize)> {
    let n = sys.rank();
    (0..n).flat_map(|s| (0..n).filter(move |&r| r != s).map(move |r| (s, r))).collect()
}

fn mutate(f: &BSMorphism) -> BSMorphism {
    let mut g = f.clone();
    let v = g.mat.get(0, 0).add(&Poly::one());
    g.mat.set(0, 0, v);
    g
}

fn fsr_suite(ctx: &Ctx, engine: &Engine, fault: Option<Fault>, log: &mut Log) {
    const S: &str = "fsr";
    let sys = &ctx.sys;
    let get = |s, r| -> anyhow::Result<BSMorphism> {
        let f = (*engine.fsr(s, r)?).clone();
        Ok(if fault == Some(Fault::Fsr) { mutate(&f) } else { f })
    };
    for (s, r) in pairs(sys) {
        let label = format!("f_{}", ctx.fmt(&[s, r]));
        let (f, g) = match (get(s, r), get(r, s)) {
            (Ok(f), Ok(g)) => (f, g),
            (Err(e), _) | (_, Err(e)) => {
                log.error(S, label, e);
                continue;
            }
        };
        let dump = || serde_json::to_value(f.to_json()).unwrap();
        log.record(S, format!("{label} has degree 0"), f.degree == 0, dump);
        log.record(S, format!("{label} is a bimodule map"), f.verify_bimodule(), dump);
        log.record(S, format!("{label} is normalized"), normalization_holds(&f), dump);
        let budget = ctx.config.truncation.unwrap_or_else(|| default_truncation(f.src.len()));
        match inclusion_holds(&f, budget) {
            Ok(b) => log.record(S, format!("{label} inclusion"), b, dump),
            Err(e) => log.error(S, format!("{label} inclusion"), e),
        }
        let round = g.compose(&f).and_then(|gf| f.compose(&gf));
        match round {
            Ok(fgf) => log.record(S, format!("{label} f∘g∘f = f"), fgf == f, || {
                json!({"f": f.to_json(), "fgf": fgf.to_json()})
            }),
            Err(e) => log.error(S, format!("{label} f∘g∘f = f"), e),
        }
    }
}

fn f2_suite(ctx: &Ctx, engine: &Engine, log: &mut Log) {
    const S: &str = "f2";
    let ring = &engine.ring;
    for (s, r) in pairs(&ctx.sys) {
        let m = ctx.sys.bond(s, r) as usize;
        for n in 1..=m {
            let label = format!("f2_{}({n})", ctx.fmt(&[s, r]));
            let e = match engine.f2(s, r, n) {
                Ok(e) => e,
                Err(err) => {
                    log.error(S, label, err);
                    continue;
                }
            };
            let dump = || serde_json::to_value(e.to_json()).unwrap();
            log.record(S, format!("{label} has degree 0"), e.degree == 0, dump);
            log.record(S, format!("{label} is a bimodule map"), e.verify_bimodule(), dump);
            log.record(S, format!("{label} is idempotent"), e.is_idempotent(), dump);
            log.record(S, format!("{label} preserves one-from-left"), preserves_one_from_left(&e), dump);
            let expected = match n {
                1 | 2 => Some(("identity", Ok(BSMorphism::identity(ring, &e.src)))),
                3 => Some(("closed formula", f2_three(ring, s, r))),
                _ if n == m => Some((
                    "braid round trip",
                    engine.fsr(s, r).and_then(|f| engine.fsr(r, s).and_then(|g| g.compose(&f))),
                )),
                _ => None,
            };
            if let Some((what, want)) = expected {
                match want {
                    Ok(want) => log.record(S, format!("{label} equals the {what}"), *e == want, || {
                        json!({"f2": e.to_json(), "expected": want.to_json()})
                    }),
                    Err(err) => log.error(S, format!("{label} equals the {what}"), err),
                }
            }
        }
    }
}

fn idem_suite(ctx: &Ctx, engine: &Engine, up_to: usize, log: &mut Log) {
    const S: &str = "idem";
    for x in ctx.sys.elements_up_to(up_to) {
        for kind in [Kind::E, Kind::D] {
            let label = format!("{:?} idempotent for {}", kind, ctx.fmt(x.word()));
            match engine.build(x.word(), kind) {
                Ok(b) => {
                    log.record(S, format!("{label} is a bimodule map"), b.e.verify_bimodule(), || {
                        serde_json::to_value(b.e.to_json()).unwrap()
                    });
                }
                Err(e) => {
                    log.error(S, label, e);
                    continue;
                }
            }
            match engine.tuple_independence_check(x.word(), kind, 2) {
                Ok(b) => log.record(S, format!("{label} is independent of the tuple"), b, || json!(ctx.fmt(x.word()))),
                Err(e) => log.error(S, format!("{label} is independent of the tuple"), e),
            }
        }
    }
}

fn bases_suite(ctx: &Ctx, engine: &Engine, up_to: usize, log: &mut Log) {
    const S: &str = "bases";
    let sys = &ctx.sys;
    let mut es = Vec::new();
    let mut ds = Vec::new();
    for x in sys.elements_up_to(up_to) {
        for kind in [Kind::E, Kind::D] {
            let label = format!("{}_{}", if kind == Kind::E { "e" } else { "d" }, ctx.fmt(x.word()));
            let built = engine.build(x.word(), kind).and_then(|b| engine.decategorify(&b).map(|el| (b, el)));
            let (b, el) = match built {
                Ok(v) => v,
                Err(e) => {
                    log.error(S, format!("{label} is positive and unitriangular"), e);
                    continue;
                }
            };
            log.record(S, format!("{label} is positive and unitriangular"), true, || Value::Null);
            match engine.q1_crosscheck(&b, &el) {
                Ok(ok) => log.record(S, format!("{label} q=1 crosscheck"), ok, || el.h.to_json(sys)),
                Err(e) => log.error(S, format!("{label} q=1 crosscheck"), e),
            }
            log.record(S, format!("{label} is KL-positive"), kl_positive(&engine.hecke, &el.h), || el.h.to_json(sys));
            if kind == Kind::E { es.push(el) } else { ds.push(el) }
        }
    }
    if es.len() == ds.len() {
        match engine.basis_report(&es, &ds) {
            Ok(rep) => log.record(S, "B ⊆ D ⊆ E positivity chain", rep.chain_positive(), || json!(rep.rows)),
            Err(e) => log.error(S, "B ⊆ D ⊆ E positivity chain", e),
        }
    }
}

fn random_poly(rng: &mut ChaCha8Rng, nvars: usize, maxdeg: u32) -> Poly {
    let mut terms = Vec::new();
    for _ in 0..rng.gen_range(1..5) {
        let exps: Vec<u32> = (0..nvars).map(|_| rng.gen_range(0..=maxdeg)).collect();
        if exps.iter().sum::<u32>() <= maxdeg {
            terms.push((Mono::from_exps(&exps), Fe::from_int(rng.gen_range(-3..=3))));
        }
    }
    Poly::from_terms(terms)
}

/// Independent oracles on seeded random instances.
fn oracle_suite(ctx: &Ctx, engine: &Engine, up_to: usize, log: &mut Log) {
    const S: &str = "oracle";
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.config.seed);
    let ring = &engine.ring;
    let nv = ring.nvars();
    for (s, r) in pairs(&ctx.sys).into_iter().filter(|(s, r)| s < r) {
        let m = ctx.sys.bond(s, r) as usize;
        for _ in 0..10 {
            let p = random_poly(&mut rng, nv, 6);
            let a = CoxeterSystem::alternating(s, r, m);
            let b = CoxeterSystem::alternating(r, s, m);
            let (da, db) = (ring.demazure_word(&a, &p), ring.demazure_word(&b, &p));
            let pass = matches!((&da, &db), (Ok(x), Ok(y)) if x == y);
            log.record(S, format!("Demazure braid relation for {}", ctx.fmt(&[s, r])), pass, || {
                json!({"p": ring.format(&p)})
            });
        }
    }
    for _ in 0..20 {
        let s = rng.gen_range(0..ctx.sys.rank());
        let f = random_poly(&mut rng, nv, 4);
        let g = random_poly(&mut rng, nv, 4);
        let lhs = ring.demazure(s, &f.mul(&g));
        let rhs = ring.demazure(s, &f).mul(&g).add(&ring.act_gen(s, &f).mul(&ring.demazure(s, &g)));
        log.record(S, "twisted Leibniz rule", lhs == rhs, || json!({"s": s, "f": ring.format(&f), "g": ring.format(&g)}));
    }
    for x in ctx.sys.elements_up_to(up_to) {
        let c = engine.hecke.kl(&x);
        let pass = engine.hecke.bar(&c) == c && kl_coeffs_ok(&ctx.sys, &c, &x);
        log.record(S, format!("C'_{} is bar-invariant with KL degree bounds", ctx.fmt(x.word())), pass, || c.to_json(&ctx.sys));
    }
    for _ in 0..6 {
        let rank = ctx.sys.rank();
        let word = |rng: &mut ChaCha8Rng| (0..rng.gen_range(0..=2)).map(|_| rng.gen_range(0..rank)).collect::<Vec<_>>();
        let (a, b) = (word(&mut rng), word(&mut rng));
        let s = rng.gen_range(0..rank);
        let k = 2 * rng.gen_range(-2i64..=1);
        let (as_, bs) = ([a.clone(), vec![s]].concat(), [b.clone(), vec![s]].concat());
        let lhs = hom_dense(ring, &as_, &b, k).len();
        let rhs = hom_dense(ring, &a, &bs, k + 2).len();
        log.record(S, "Hom adjunction dimensions", lhs == rhs, || {
            json!({"m": ctx.fmt(&a), "n": ctx.fmt(&b), "s": s, "degree": k, "dims": [lhs, rhs]})
        });
    }
}

/// `C'_x = Σ_{y≤x} v^{ℓ(x)} P_{y,x}(v⁻²) T_y` with `P_{x,x} = 1` and
/// `deg P_{y,x} < (ℓ(x) − ℓ(y))/2`, so off the diagonal every exponent lies
/// strictly between `ℓ(y)` and `ℓ(x)`.
fn kl_coeffs_ok(sys: &CoxeterSystem, c: &HeckeElement, x: &GroupElement) -> bool {
    let lx = x.length() as i32;
    c.coeff(x) == LaurentPoly::monomial(lx, 1)
        && c.support().all(|(y, p)| {
            let ly = y.length() as i32;
            sys.bruhat_leq(y, x) && (y == x || p.terms().keys().all(|&k| ly < k && k <= lx && (lx - k) % 2 == 0))
        })
}

pub fn verify(ctx: &mut Ctx, suite: Suite, up_to: usize, fault: Option<Fault>) -> anyhow::Result<Report> {
    let engine = ctx.engine()?;
    let mut log = Log::default();
    let want = |s: Suite| suite == Suite::All || suite == s;
    if want(Suite::Fsr) {
        fsr_suite(ctx, &engine, fault, &mut log);
    }
    if want(Suite::F2) {
        f2_suite(ctx, &engine, &mut log);
    }
    if want(Suite::Idem) {
        idem_suite(ctx, &engine, up_to, &mut log);
    }
    if want(Suite::Bases) {
        bases_suite(ctx, &engine, up_to, &mut log);
    }
    if want(Suite::Oracle) {
        oracle_suite(ctx, &engine, up_to, &mut log);
    }

    let failed: Vec<&Check> = log.checks.iter().filter(|c| !c.pass).collect();
    let mut t = Table::new(&["suite", "check", "result"]);
    for c in &log.checks {
        t.push(vec![c.suite.into(), c.name.clone(), if c.pass { "pass" } else { "FAIL" }.into()]);
    }
    let data = json!({
        "passed": log.checks.len() - failed.len(),
        "failed": failed.len(),
        "checks": log.checks,
    });
    let mut r = Report::new(format!("verify {suite:?}").to_lowercase(), data).table("checks", t);
    r.ok = failed.is_empty();
    r.notes.push(format!("{} checks, {} failed", log.checks.len(), failed.len()));
    for c in failed {
        r.notes.push(format!("counterexample [{}] {}", c.suite, c.name));
        if let Some(d) = &c.detail {
            r.notes.push(format!("  error: {d}"));
        }
        if let Some(d) = &c.dump {
            r.notes.push(format!("  dump: {d}"));
        }
    }
    Ok(r)
}
