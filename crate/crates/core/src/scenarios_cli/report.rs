use std::fmt::Write as _;
use std::str::FromStr;

use super::run::RunReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            _ => Err(format!("unknown format `{s}` (json, csv or text)")),
        }
    }
}

pub fn render(report: &RunReport, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Csv => csv_rows(report),
        Format::Text => text(report),
    }
}

fn rows(report: &RunReport) -> Vec<[String; 3]> {
    let mut out = Vec::new();
    let mut row = |a: &str, b: String, c: String| out.push([a.to_string(), b, c]);
    row("run", "scenario".into(), report.scenario.clone());
    row("run", "command".into(), report.command.to_string());
    row("run", "engine".into(), report.engine.clone());
    row("run", "max_degree".into(), report.max_degree.to_string());
    row("run", "window".into(), format!("{},{}", report.window[0], report.window[1]));
    row("run", "status".into(), format!("{:?}", report.status).to_lowercase());
    for (name, tables) in std::iter::once(("", &report.tables)).chain(report.blown_up.iter().map(|t| ("blown_up.", t))) {
        if let Some(c) = &tables.cohomology {
            for (d, r) in c.ranks.iter().enumerate() {
                row(&format!("{name}cohomology"), d.to_string(), r.to_string());
            }
        }
        if let Some(p) = &tables.delocalized {
            row(&format!("{name}delocalized"), "even".into(), p.even.to_string());
            row(&format!("{name}delocalized"), "odd".into(), p.odd.to_string());
        }
        if let Some(k) = &tables.k_theory {
            row(&format!("{name}k_theory"), "k0".into(), k.k0.to_string());
            row(&format!("{name}k_theory"), "k1".into(), k.k1.to_string());
        }
        if let Some(r) = tables.chern_rank {
            row(&format!("{name}chern"), "rank".into(), r.to_string());
        }
        if let Some(r) = tables.chern_defect {
            row(&format!("{name}chern"), "defect".into(), r.to_string());
        }
        for (c, m) in &tables.membership {
            row(&format!("{name}membership"), c.clone(), m.to_string());
        }
    }
    for v in &report.validation {
        row("violation", v.code.clone(), v.detail.clone());
    }
    for c in &report.checks {
        row("check", c.name.clone(), if c.ok { "ok".into() } else { format!("expected {} got {}", c.expected, c.actual) });
    }
    for n in &report.notes {
        row("note", String::new(), n.clone());
    }
    out
}

fn csv_rows(report: &RunReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["section", "key", "value"]).expect("in-memory csv");
    for r in rows(report) {
        w.write_record(&r).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8 csv")
}

fn text(report: &RunReport) -> String {
    let mut s = String::new();
    let status = format!("{:?}", report.status).to_lowercase();
    let _ = writeln!(s, "{} {} [{}]: {status}", report.scenario, report.command, report.engine);
    let _ = writeln!(s, "  max degree {}, window [{}, {}]", report.max_degree, report.window[0], report.window[1]);
    let _ = writeln!(s, "  nodes: {}", report.nodes.join(", "));
    if let Some(t) = &report.trace {
        for r in &t.rounds {
            let _ = writeln!(s, "  round {}: {}", r.index, r.types.join(", "));
        }
    }
    let mut section = String::new();
    for [a, b, c] in rows(report).into_iter().skip(6) {
        if a != section {
            let _ = writeln!(s, "  {a}:");
            section = a;
        }
        if b.is_empty() {
            let _ = writeln!(s, "    {c}");
        } else {
            let _ = writeln!(s, "    {b}: {c}");
        }
    }
    s
}
