use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde_json::json;
use soergel_core::cores::{core_decomposition, f_tuple, gf_tuple, CoreKind, Interval, Move};

use super::Ctx;
use crate::report::{Report, Table};

/// `rex`: the braid graph on the reduced expressions of the element.
pub fn rex(ctx: &mut Ctx, word: &str) -> anyhow::Result<Report> {
    let w = ctx.word(word)?;
    let x = ctx.sys.element(&w);
    let name = ctx.fmt(x.word());
    ctx.cached("rex", json!(name), |ctx| {
        let g = ctx.sys.rex_graph(&x);
        let words: Vec<String> = g.vertices.iter().map(|v| ctx.fmt(v)).collect();
        let mut edges = Table::new(&["from", "to", "position", "length"]);
        let mut edge_json = Vec::new();
        let mut dot = String::from("graph rex {\n");
        for v in &words {
            let _ = writeln!(dot, "  \"{v}\";");
        }
        for (a, b, mv) in &g.edges {
            edges.push(vec![words[*a].clone(), words[*b].clone(), mv.pos.to_string(), mv.len.to_string()]);
            edge_json.push(json!({"from": words[*a], "to": words[*b], "position": mv.pos, "length": mv.len}));
            let _ = writeln!(dot, "  \"{}\" -- \"{}\" [label=\"{}:{}\"];", words[*a], words[*b], mv.pos, mv.len);
        }
        dot.push_str("}\n");
        let data = json!({
            "element": name,
            "length": x.length(),
            "reduced_words": words,
            "edges": edge_json,
            "connected": g.is_connected(),
        });
        let mut vt = Table::new(&["word"]);
        for v in &words {
            vt.push(vec![v.clone()]);
        }
        let mut r = Report::new(format!("rex {name}"), data).table("reduced words", vt).table("braid moves", edges);
        r.dot = Some(dot);
        r.notes.push(format!("{} reduced words, connected: {}", words.len(), g.is_connected()));
        Ok(r)
    })
}

fn kind_name(k: CoreKind) -> &'static str {
    match k {
        CoreKind::Left => "left",
        CoreKind::Right => "right",
        CoreKind::Empty => "empty",
        CoreKind::Filled => "filled",
    }
}

fn moves_table(ctx: &Ctx, word: &[usize], tuple: &[Move]) -> anyhow::Result<Table> {
    let words = soergel_core::cores::replay(&ctx.sys, word, tuple)?;
    let mut t = Table::new(&["step", "move", "position", "length", "word after"]);
    for (i, (mv, after)) in tuple.iter().zip(words.iter().skip(1)).enumerate() {
        let kind = match mv {
            Move::Braid { .. } => "braid",
            Move::Jw { .. } => "jw",
        };
        t.push(vec![(i + 1).to_string(), kind.into(), mv.pos().to_string(), mv.len().to_string(), ctx.fmt(after)]);
    }
    Ok(t)
}

/// `cores`: interval combinatorics of a reduced word and its move tuples.
pub fn cores(ctx: &mut Ctx, word: &str) -> anyhow::Result<Report> {
    let w = ctx.word(word)?;
    ctx.sys.require_reduced(&w)?;
    let name = ctx.fmt(&w);
    ctx.cached("cores", json!(name), |ctx| {
        let d = core_decomposition(&ctx.sys, &w)?;
        let f = f_tuple(&ctx.sys, &w)?;
        let gf = gf_tuple(&ctx.sys, &w)?;
        let strs = |v: &[Interval]| v.iter().map(|i| i.to_string()).collect::<Vec<_>>();
        let data = json!({
            "word": name,
            "a_of_x": strs(&d.a_of_x),
            "gcores": strs(&d.gcores),
            "elgcores": strs(&d.elgcores),
            "cores": strs(&d.cores),
            "classification": d.classification.iter().map(|(i, k)| json!({"core": i.to_string(), "kind": kind_name(*k)})).collect::<Vec<_>>(),
            "f_tuple": f,
            "gf_tuple": gf,
        });
        let all: BTreeSet<Interval> = d.a_of_x.iter().chain(&d.gcores).chain(&d.elgcores).chain(&d.cores)
            .filter(|i| !i.is_empty())
            .copied()
            .collect();
        let mark = |v: &[Interval], i: &Interval| if v.contains(i) { "yes" } else { "" }.to_string();
        let mut t = Table::new(&["interval", "A(x)", "gcore", "elgcore", "core", "class"]);
        for i in &all {
            let class = d.classification.iter().find(|(c, _)| c == i).map_or("", |(_, k)| kind_name(*k));
            t.push(vec![
                i.to_string(),
                mark(&d.a_of_x, i),
                mark(&d.gcores, i),
                mark(&d.elgcores, i),
                mark(&d.cores, i),
                class.into(),
            ]);
        }
        let mut r = Report::new(format!("cores {name}"), data)
            .table("intervals", t)
            .table("f tuple", moves_table(ctx, &w, &f)?)
            .table("Gf tuple", moves_table(ctx, &w, &gf)?);
        r.notes.push(format!("{} cores, {} gcores", d.cores.len(), d.gcores.len()));
        Ok(r)
    })
}
