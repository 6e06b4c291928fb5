//! Report output: a compact table, a full single-report view and JSON.

use std::collections::BTreeMap;
use std::fmt::Write;

use hodge_wres::functionals::FunctionalReport;
use serde::Serialize;

#[derive(Serialize)]
struct Document<'a> {
    command: &'a str,
    config: &'a BTreeMap<String, String>,
    reports: &'a [FunctionalReport],
    all_match: bool,
}

pub fn json(command: &str, config: &BTreeMap<String, String>, reports: &[FunctionalReport]) -> String {
    let doc = Document { command, config, reports, all_match: reports.iter().all(|r| r.matched) };
    serde_json::to_string_pretty(&doc).expect("reports serialize")
}

fn status(r: &FunctionalReport) -> &'static str {
    if r.matched {
        "ok"
    } else {
        "FAIL"
    }
}

fn values(r: &FunctionalReport) -> String {
    match (&r.lhs, &r.rhs) {
        (Some(l), Some(rhs)) => format!("{l}  vs  {rhs}"),
        (Some(l), None) => l.to_string(),
        _ => r.details.iter().map(|d| format!("{}: {}", d.label, d.value)).collect::<Vec<_>>().join(", "),
    }
}

pub fn table(reports: &[FunctionalReport]) -> String {
    let width = reports.iter().map(|r| r.name.chars().count()).max().unwrap_or(0);
    let mut out = String::new();
    for r in reports {
        let trial = r.inputs.get("trial").map(|t| format!("  [trial {t}]")).unwrap_or_default();
        let pad = width - r.name.chars().count();
        let _ = writeln!(out, "{:<4}  {}{}  {}{trial}", status(r), r.name, " ".repeat(pad), values(r));
    }
    let failed = reports.iter().filter(|r| !r.matched).count();
    let _ = writeln!(out, "{} reports, {} matched, {failed} mismatched", reports.len(), reports.len() - failed);
    out
}

pub fn full(r: &FunctionalReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "  name: {}", r.name);
    let _ = writeln!(out, "  dim: {}", r.dim);
    if let Some(s) = r.curvature_seed {
        let _ = writeln!(out, "  curvature seed: {s}");
    }
    if let Some(l) = &r.lhs {
        let _ = writeln!(out, "  computed: {l}");
    }
    if let Some(rhs) = &r.rhs {
        let _ = writeln!(out, "  expected: {rhs}");
    }
    for (k, v) in &r.inputs {
        let _ = writeln!(out, "  input {k}: {v}");
    }
    for d in &r.details {
        let _ = writeln!(out, "  {}: {}", d.label, d.value);
    }
    out
}
