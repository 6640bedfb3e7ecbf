use serde_json::json;
use soergel_core::bsmod::f2::preserves_one_from_left;
use soergel_core::bsmod::fsr::{inclusion_holds, normalization_holds};
use soergel_core::bsmod::BSMorphism;
use soergel_core::catbases::default_truncation;

use super::Ctx;
use crate::report::{Report, Table};

fn entries_table(f: &BSMorphism) -> Table {
    let mut t = Table::new(&["row", "column", "entry"]);
    for (r, c, p) in f.to_json().entries {
        t.push(vec![r.to_string(), c.to_string(), p]);
    }
    t
}

fn describe(ctx: &Ctx, title: String, f: &BSMorphism, checks: Vec<(&str, bool)>) -> Report {
    let ok = checks.iter().all(|(_, b)| *b);
    let check_json: serde_json::Map<String, serde_json::Value> =
        checks.iter().map(|(n, b)| (n.to_string(), (*b).into())).collect();
    let data = json!({ "morphism": f.to_json(), "checks": check_json });
    let mut r = Report::new(title, data).table("entries", entries_table(f));
    r.ok = ok;
    r.notes.push(format!("{} → {}, degree {}", ctx.fmt(&f.src), ctx.fmt(&f.tgt), f.degree));
    for (n, b) in checks {
        r.notes.push(format!("{n}: {}", if b { "yes" } else { "NO" }));
    }
    r
}

/// `morphism fsr s r`: the degree-zero map `θ_sθ_r⋯ → θ_rθ_s⋯`.
pub fn fsr(ctx: &mut Ctx, s: &str, r: &str) -> anyhow::Result<Report> {
    let (s, r) = (ctx.generator(s)?, ctx.generator(r)?);
    let names = (ctx.sys.names()[s].clone(), ctx.sys.names()[r].clone());
    ctx.cached("morphism fsr", json!([names.0, names.1]), |ctx| {
        let engine = ctx.engine()?;
        let f = engine.fsr(s, r)?;
        let budget = ctx.config.truncation.unwrap_or_else(|| default_truncation(f.src.len()));
        let checks = vec![
            ("degree zero", f.degree == 0),
            ("bimodule map", f.verify_bimodule()),
            ("normalized", normalization_holds(&f)),
            ("inclusion", inclusion_holds(&f, budget)?),
        ];
        Ok(describe(ctx, format!("f_{}{}", names.0, names.1), &f, checks))
    })
}

/// `morphism f2 s r n`: the idempotent on the alternating word of length `n`.
pub fn f2(ctx: &mut Ctx, s: &str, r: &str, n: usize) -> anyhow::Result<Report> {
    let (s, r) = (ctx.generator(s)?, ctx.generator(r)?);
    let names = (ctx.sys.names()[s].clone(), ctx.sys.names()[r].clone());
    ctx.cached("morphism f2", json!([names.0, names.1, n]), |ctx| {
        let engine = ctx.engine()?;
        let f = engine.f2(s, r, n)?;
        let checks = vec![
            ("degree zero", f.degree == 0),
            ("bimodule map", f.verify_bimodule()),
            ("idempotent", f.is_idempotent()),
            ("preserves one-from-left", preserves_one_from_left(&f)),
        ];
        Ok(describe(ctx, format!("f2_{}{}({n})", names.0, names.1), &f, checks))
    })
}
