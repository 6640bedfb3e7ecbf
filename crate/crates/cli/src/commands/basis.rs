use std::collections::BTreeMap;

use rayon::prelude::*;
use serde_json::{json, Value};
use soergel_core::catbases::{BasisElement, Engine, Kind};
use soergel_core::{CoxeterSystem, GroupElement, HeckeElement, LaurentPoly};

use super::Ctx;
use crate::report::{Report, Table};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum BasisKind {
    /// `e_w`, images of the `f` idempotents.
    E,
    /// `d_w`, images of the `Gf` idempotents, shifted by `ℓ(w)`.
    D,
    /// Kazhdan–Lusztig `C'_w`.
    Kl,
    /// Bott–Samelson products `C'_s C'_r ⋯` along the reduced word.
    Bs,
}

impl BasisKind {
    fn name(self) -> &'static str {
        match self {
            BasisKind::E => "e",
            BasisKind::D => "d",
            BasisKind::Kl => "kl",
            BasisKind::Bs => "bs",
        }
    }
}

fn coords_string(sys: &CoxeterSystem, m: &BTreeMap<GroupElement, LaurentPoly>) -> String {
    if m.is_empty() {
        return "0".into();
    }
    m.iter()
        .map(|(y, p)| format!("({p})C'_{}", sys.format_word(y.word())))
        .collect::<Vec<_>>()
        .join(" + ")
}

fn coords_json(sys: &CoxeterSystem, m: &BTreeMap<GroupElement, LaurentPoly>) -> Value {
    m.iter().map(|(y, p)| (sys.format_word(y.word()), Value::from(p.to_string()))).collect::<serde_json::Map<_, _>>().into()
}

fn build(engine: &Engine, x: &GroupElement, kind: Kind) -> anyhow::Result<(BasisElement, bool)> {
    let b = engine.build(x.word(), kind)?;
    let el = engine.decategorify(&b)?;
    let q1 = engine.q1_crosscheck(&b, &el)?;
    Ok((el, q1))
}

/// `basis`: one basis element per `w` with `ℓ(w) ≤ up_to`. A failing
/// element is reported in its row and marks the whole report as failed.
pub fn basis(ctx: &mut Ctx, kind: BasisKind, up_to: usize) -> anyhow::Result<Report> {
    ctx.cached("basis", json!({"kind": kind.name(), "up_to": up_to}), |ctx| {
        let engine = ctx.engine()?;
        let sys = ctx.sys.clone();
        let elems = sys.elements_up_to(up_to);
        let rows: Vec<(Value, Vec<String>, bool)> = elems
            .par_iter()
            .map(|x| {
                let name = sys.format_word(x.word());
                let (h, extra): (anyhow::Result<HeckeElement>, Value) = match kind {
                    BasisKind::Kl => (Ok(engine.hecke.kl(x)), Value::Null),
                    BasisKind::Bs => (Ok(engine.hecke.y_basis(x)), Value::Null),
                    BasisKind::E | BasisKind::D => {
                        let k = if kind == BasisKind::E { Kind::E } else { Kind::D };
                        match build(&engine, x, k) {
                            Ok((el, q1)) => (
                                Ok(el.h),
                                json!({"tuple": el.provenance.tuple, "truncation": el.provenance.truncation, "q1_crosscheck": q1}),
                            ),
                            Err(e) => (Err(e), Value::Null),
                        }
                    }
                };
                match h {
                    Ok(h) => {
                        let kl = engine.hecke.in_kl_basis(&h);
                        let q1_ok = extra.get("q1_crosscheck").and_then(Value::as_bool).unwrap_or(true);
                        let row = vec![name.clone(), h.display(&sys), coords_string(&sys, &kl)];
                        let v = json!({"w": name, "standard": h.to_json(&sys), "kl": coords_json(&sys, &kl), "details": extra});
                        (v, row, q1_ok)
                    }
                    Err(e) => {
                        let msg = format!("{e:#}");
                        (json!({"w": name, "error": msg}), vec![name, format!("error: {msg}"), String::new()], false)
                    }
                }
            })
            .collect();
        let mut t = Table::new(&["w", "standard basis", "KL basis"]);
        let ok = rows.iter().all(|r| r.2);
        let data: Vec<Value> = rows.iter().map(|r| r.0.clone()).collect();
        for (_, row, _) in rows {
            t.push(row);
        }
        let mut r = Report::new(format!("basis {} up to length {up_to}", kind.name()), json!({"kind": kind.name(), "up_to": up_to, "elements": data}))
            .table("basis", t);
        r.ok = ok;
        r.notes.push(format!("{} elements{}", elems.len(), if ok { "" } else { ", some failed" }));
        Ok(r)
    })
}

/// `compare`: `e`, `d` and KL side by side, with the positivity chain.
pub fn compare(ctx: &mut Ctx, up_to: usize) -> anyhow::Result<Report> {
    ctx.cached("compare", json!({"up_to": up_to}), |ctx| {
        let engine = ctx.engine()?;
        let elems = ctx.sys.elements_up_to(up_to);
        let built: Vec<(BasisElement, BasisElement)> = elems
            .par_iter()
            .map(|x| -> anyhow::Result<_> {
                let e = engine.decategorify(&engine.build_e(x.word())?)?;
                let d = engine.decategorify(&engine.build_d(x.word())?)?;
                Ok((e, d))
            })
            .collect::<anyhow::Result<_>>()?;
        let (es, ds): (Vec<_>, Vec<_>) = built.into_iter().unzip();
        let report = engine.basis_report(&es, &ds)?;
        let flag = |b: Option<bool>| b.map_or("n/a".to_string(), |b| if b { "yes" } else { "NO" }.into());
        let coords = |m: &Option<BTreeMap<String, String>>| {
            m.as_ref().map_or("n/a".to_string(), |m| {
                m.iter().map(|(y, p)| format!("({p})C'_{y}")).collect::<Vec<_>>().join(" + ")
            })
        };
        let mut t = Table::new(&["w", "e in KL", "d in KL", "v^l e - d >= 0", "d - C' >= 0", "d = C'"]);
        let mut equal = 0;
        for (row, d) in report.rows.iter().zip(&ds) {
            let is_kl = d.h == engine.hecke.kl(&d.w);
            equal += is_kl as usize;
            t.push(vec![
                row.w.clone(),
                coords(&row.e_in_kl),
                coords(&row.d_in_kl),
                flag(row.e_minus_d_positive),
                flag(row.d_minus_kl_positive),
                if is_kl { "yes" } else { "no" }.into(),
            ]);
        }
        let chain = report.chain_positive();
        let mut r = Report::new(format!("compare up to length {up_to}"), json!({"up_to": up_to, "rows": report.rows, "chain_positive": chain}))
            .table("comparison", t);
        r.ok = chain;
        r.notes.push(format!("d_w = C'_w for {equal} of {} elements; positivity chain holds: {chain}", ds.len()));
        Ok(r)
    })
}
