//! Command results and their renderings.

use std::fmt::Write as _;

use anyhow::bail;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config::Format;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Table {
        Table { header: header.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub title: String,
    pub ok: bool,
    pub data: Value,
    #[serde(default)]
    pub tables: Vec<(String, Table)>,
    #[serde(default)]
    pub dot: Option<String>,
    /// Extra lines for the pretty rendering.
    #[serde(default)]
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(title: impl Into<String>, data: Value) -> Report {
        Report { title: title.into(), ok: true, data, tables: Vec::new(), dot: None, notes: Vec::new() }
    }

    pub fn table(mut self, name: &str, t: Table) -> Report {
        self.tables.push((name.into(), t));
        self
    }
}

/// Everything the output carries besides the result itself.
#[derive(Clone, Debug, Serialize)]
pub struct Provenance {
    pub tool: String,
    pub command: Vec<String>,
    pub config: Value,
    pub cache_key: Option<String>,
}

pub fn render(report: &Report, prov: &Provenance, format: Format) -> anyhow::Result<String> {
    match format {
        Format::Json => {
            let v = json!({ "provenance": prov, "ok": report.ok, "result": report.data });
            Ok(serde_json::to_string_pretty(&v)? + "\n")
        }
        Format::Csv => {
            if report.tables.is_empty() {
                bail!("{} has no tabular output; use --format json", report.title);
            }
            let mut out = String::new();
            for (i, (name, t)) in report.tables.iter().enumerate() {
                if report.tables.len() > 1 {
                    if i > 0 {
                        out.push('\n');
                    }
                    writeln!(out, "# {name}")?;
                }
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&t.header)?;
                for r in &t.rows {
                    w.write_record(r)?;
                }
                out.push_str(&String::from_utf8(w.into_inner()?)?);
            }
            Ok(out)
        }
        Format::Dot => match &report.dot {
            Some(d) => Ok(d.clone()),
            None => bail!("{} has no graph output; use --format json", report.title),
        },
        Format::Pretty => Ok(pretty(report)),
    }
}

fn pretty(report: &Report) -> String {
    let mut out = String::new();
    let status = if report.ok { "ok" } else { "FAILED" };
    let _ = writeln!(out, "{} [{status}]", report.title);
    for (name, t) in &report.tables {
        let _ = writeln!(out, "\n{name}:");
        let mut widths: Vec<usize> = t.header.iter().map(|h| h.chars().count()).collect();
        for r in &t.rows {
            for (w, c) in widths.iter_mut().zip(r) {
                *w = (*w).max(c.chars().count());
            }
        }
        let line = |cells: &[String]| {
            let padded: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
                .collect();
            padded.join("  ").trim_end().to_string()
        };
        let _ = writeln!(out, "  {}", line(&t.header));
        for r in &t.rows {
            let _ = writeln!(out, "  {}", line(r));
        }
        if t.rows.is_empty() {
            let _ = writeln!(out, "  (empty)");
        }
    }
    if !report.notes.is_empty() {
        out.push('\n');
        for n in &report.notes {
            let _ = writeln!(out, "{n}");
        }
    }
    out
}
