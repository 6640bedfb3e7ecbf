use serde_json::{json, Value};
use soergel_core::linalg::Matrix;

use super::Ctx;
use crate::report::{Report, Table};

fn matrix_json(m: &Matrix) -> Value {
    (0..m.rows).map(|i| m.row(i).iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect()
}

/// `group validate`: the system was already built by config validation, so
/// this only reports what was built.
pub fn validate(ctx: &Ctx) -> anyhow::Result<Report> {
    let sys = &ctx.sys;
    let n = sys.rank();
    let cos: serde_json::Map<String, Value> =
        sys.field_constants().iter().map(|(m, c)| (m.to_string(), c.to_string().into())).collect();
    let bilinear: Vec<Vec<String>> = (0..n).map(|s| (0..n).map(|r| sys.bilinear(s, r).to_string()).collect()).collect();
    let field = sys.field().map(|nf| {
        json!({ "minpoly": nf.declared_minpoly(), "theta": format!("{:.12}", nf.root_approx()) })
    });
    let reps: serde_json::Map<String, Value> =
        (0..n).map(|s| (sys.names()[s].clone(), matrix_json(&sys.geometric_rep()[s]))).collect();
    let data = json!({
        "rank": n,
        "generators": sys.names(),
        "bond": ctx.config.system.bond,
        "extra_large": sys.is_extra_large(),
        "field": field,
        "cos_pi_over": cos,
        "bilinear_form": bilinear,
        "geometric_rep": reps,
    });

    let mut t = Table::new(&["m", "cos(pi/m)"]);
    for (m, c) in sys.field_constants() {
        t.push(vec![m.to_string(), c.to_string()]);
    }
    let mut report = Report::new("group validate", data).table("field constants", t);
    report.notes.push(format!("rank {n}, generators {}", sys.names().join(" ")));
    match sys.field() {
        Some(nf) => report.notes.push(format!(
            "field Q(θ), θ ≈ {:.6}, minimal polynomial coefficients {:?}",
            nf.root_approx(),
            nf.declared_minpoly()
        )),
        None => report.notes.push("field Q".into()),
    }
    Ok(report)
}
