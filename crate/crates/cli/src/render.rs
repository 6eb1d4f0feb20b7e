//! Output formatting. JSON is canonical; CSV drops evidence detail.

use std::fmt::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::json;

use x0gon::bounds::GonalityInterval;
use x0gon::cache::EntryInfo;
use x0gon::classify::{LevelReport, VerificationSummary};

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

fn pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn keys_text(keys: &[u64]) -> String {
    keys.iter().map(u64::to_string).collect::<Vec<_>>().join(";")
}

fn upper(iv: &GonalityInterval) -> String {
    iv.upper.map(|u| u.to_string()).unwrap_or_default()
}

pub fn genus(format: Format, n: u64, keys: &[u64], genus: u64) -> String {
    match format {
        Format::Json => pretty(&json!({ "N": n, "keys": keys, "genus": genus })),
        Format::Csv => format!("N,keys,genus\n{n},{},{genus}\n", keys_text(keys)),
        Format::Text => format!("{genus}\n"),
    }
}

pub fn count(format: Format, n: u64, keys: &[u64], p: u64, r: u32, count: u64) -> String {
    match format {
        Format::Json => pretty(&json!({ "N": n, "keys": keys, "p": p, "r": r, "count": count })),
        Format::Csv => format!("N,keys,p,r,count\n{n},{},{p},{r},{count}\n", keys_text(keys)),
        Format::Text => format!("{count}\n"),
    }
}

const CSV_HEADER: &str = "N,genus_plus,gonQ_lower,gonQ_upper,gonC_lower,gonC_upper,certificates_used,verdict\n";

fn csv_row(out: &mut String, r: &LevelReport) {
    writeln!(
        out,
        "{},{},{},{},{},{},{},{}",
        r.level,
        r.genus_plus,
        r.gon_q.lower,
        upper(&r.gon_q),
        r.gon_c.lower,
        upper(&r.gon_c),
        r.certificates_used.join(";"),
        r.verdict.as_str()
    )
    .unwrap();
}

fn text_report(out: &mut String, r: &LevelReport) {
    writeln!(out, "N = {}  genus(X0+(N)) = {}", r.level, r.genus_plus).unwrap();
    writeln!(out, "  gonQ {}  gonC {}  {}", r.gon_q, r.gon_c, r.verdict.as_str()).unwrap();
    if !r.counts.is_empty() {
        let counts: Vec<String> = r.counts.iter().map(|c| format!("F_{}: {}", c.q, c.count)).collect();
        writeln!(out, "  counts  {}", counts.join(", ")).unwrap();
    }
    for ev in &r.evidence {
        let params: Vec<String> = ev
            .params
            .iter()
            .map(|(k, v)| format!("{k}={}", serde_json::to_string(v).unwrap().trim_matches('"')))
            .collect();
        writeln!(out, "  {:<18} {:<10} {}", format!("{:?}", ev.kind), ev.conclusion.to_string(), params.join(" ")).unwrap();
    }
    for c in &r.certificates_used {
        writeln!(out, "  certificate used: {c}").unwrap();
    }
}

pub fn report(format: Format, r: &LevelReport) -> String {
    let mut out = String::new();
    match format {
        Format::Json => out = pretty(r),
        Format::Csv => {
            out.push_str(CSV_HEADER);
            csv_row(&mut out, r);
        }
        Format::Text => text_report(&mut out, r),
    }
    out
}

fn summary_text(out: &mut String, s: &VerificationSummary) {
    writeln!(
        out,
        "exact {}  consistent {}  contradictions {:?}  recorded anomalies {:?}",
        s.exact.len(),
        s.consistent.len(),
        s.contradictions,
        s.recorded_anomalies
    )
    .unwrap();
}

pub fn sweep(format: Format, reports: &[LevelReport], s: &VerificationSummary) -> String {
    let mut out = String::new();
    match format {
        Format::Json => out = pretty(&json!({ "reports": reports, "summary": s })),
        Format::Csv => {
            out.push_str(CSV_HEADER);
            for r in reports {
                csv_row(&mut out, r);
            }
        }
        Format::Text => {
            for r in reports {
                writeln!(
                    out,
                    "{:>5}  g+ {:>3}  gonQ {:<8} gonC {:<8} {}",
                    r.level,
                    r.genus_plus,
                    r.gon_q.to_string(),
                    r.gon_c.to_string(),
                    r.verdict.as_str()
                )
                .unwrap();
            }
            summary_text(&mut out, s);
        }
    }
    out
}

pub fn verification(format: Format, reports: &[LevelReport], s: &VerificationSummary) -> String {
    let mut out = String::new();
    match format {
        Format::Json => out = pretty(s),
        Format::Csv => {
            out.push_str("N,bucket\n");
            for r in reports {
                writeln!(out, "{},{:?}", r.level, r.agreement()).unwrap();
            }
        }
        Format::Text => {
            for r in reports.iter().filter(|r| s.contradictions.contains(&r.level) || s.consistent.contains(&r.level)) {
                let e = r.expectation();
                writeln!(
                    out,
                    "{:>5}  {:?}: gonQ {} (expected {:?}), gonC {} (expected {:?})",
                    r.level,
                    r.agreement(),
                    r.gon_q,
                    e.gon_q,
                    r.gon_c,
                    e.gon_c
                )
                .unwrap();
            }
            summary_text(&mut out, s);
        }
    }
    out
}

pub fn cache_entries(format: Format, dir: &Path, entries: &[EntryInfo]) -> String {
    let mut out = String::new();
    match format {
        Format::Json => out = pretty(&json!({ "dir": dir.display().to_string(), "entries": entries })),
        Format::Csv => {
            out.push_str("N,bytes,operators,valid\n");
            for e in entries {
                writeln!(out, "{},{},{},{}", e.level, e.bytes, e.operators, e.valid).unwrap();
            }
        }
        Format::Text => {
            writeln!(out, "cache {}: {} entries", dir.display(), entries.len()).unwrap();
            for e in entries {
                let state = if e.valid { "" } else { "  (stale)" };
                writeln!(out, "{:>5}  {:>10} bytes  {} operators{state}", e.level, e.bytes, e.operators).unwrap();
            }
        }
    }
    out
}
