//! Report envelopes and their JSON and aligned-text renderings.

use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Text,
}

/// Renders the envelope `{conventions, command, verdict, ..., report}`.
pub fn render(envelope: &Value, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(envelope).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut out = String::new();
            block(&mut out, envelope, 0);
            out
        }
    }
}

/// Short forms for bidegrees and certification tags; `None` for anything structured.
fn inline(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(if *b { "yes" } else { "no" }.into()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) => {
            let parts: Option<Vec<String>> = items.iter().map(inline).collect();
            parts.map(|p| format!("[{}]", p.join(", ")))
        }
        Value::Object(m) => inline_object(m),
    }
}

fn inline_object(m: &Map<String, Value>) -> Option<String> {
    let keys: Vec<&str> = m.keys().map(String::as_str).collect();
    let mut sorted = keys.clone();
    sorted.sort_unstable();
    match sorted.as_slice() {
        ["degree", "weight"] => Some(match &m["weight"] {
            Value::Null => format!("({})", m["degree"]),
            w => format!("({},{})", m["degree"], w),
        }),
        ["kind"] => m["kind"].as_str().map(str::to_string),
        ["bound", "kind", "stabilized"] if m["kind"] == "truncated" => {
            let tag = if m["stabilized"] == Value::Bool(true) { "stabilized" } else { "unstable" };
            Some(format!("truncated-{tag}({})", m["bound"]))
        }
        ["degrees", "weights"] => {
            // the core marks an unbounded degree range with ±i32::MAX/2
            let unbounded = |a: &[Value]| {
                a[0].as_i64().is_some_and(|x| x <= (i32::MIN / 2) as i64) && a[1].as_i64().is_some_and(|x| x >= (i32::MAX / 2) as i64)
            };
            let r = |v: &Value| match v {
                Value::Array(a) if a.len() == 2 && unbounded(a) => "all".into(),
                Value::Array(a) if a.len() == 2 => format!("{}..{}", a[0], a[1]),
                _ => "all".into(),
            };
            Some(format!("degrees {} weights {}", r(&m["degrees"]), r(&m["weights"])))
        }
        _ => None,
    }
}

fn pad(out: &mut String, indent: usize) {
    out.extend(std::iter::repeat_n(' ', indent));
}

fn block(out: &mut String, v: &Value, indent: usize) {
    match v {
        Value::Object(m) => {
            for (k, val) in m {
                match inline(val) {
                    Some(s) => {
                        pad(out, indent);
                        out.push_str(&format!("{k}: {s}\n"));
                    }
                    None => {
                        pad(out, indent);
                        out.push_str(&format!("{k}:\n"));
                        block(out, val, indent + 2);
                    }
                }
            }
        }
        Value::Array(items) => {
            if let Some(t) = table(items) {
                for line in t {
                    pad(out, indent);
                    out.push_str(line.trim_end());
                    out.push('\n');
                }
                return;
            }
            if items.is_empty() {
                pad(out, indent);
                out.push_str("(none)\n");
            }
            for item in items {
                match inline(item) {
                    Some(s) => {
                        pad(out, indent);
                        out.push_str(&format!("- {s}\n"));
                    }
                    None => {
                        pad(out, indent);
                        out.push_str("-\n");
                        block(out, item, indent + 2);
                    }
                }
            }
        }
        other => {
            pad(out, indent);
            out.push_str(&inline(other).unwrap_or_default());
            out.push('\n');
        }
    }
}

/// Aligned columns for a nonempty array of objects whose fields all render inline.
fn table(items: &[Value]) -> Option<Vec<String>> {
    let mut keys: Vec<String> = Vec::new();
    let mut rows: Vec<Vec<(String, String)>> = Vec::new();
    for item in items {
        let m = item.as_object()?;
        if inline_object(m).is_some() {
            return None;
        }
        let mut row = Vec::new();
        for (k, v) in m {
            if !keys.contains(k) {
                keys.push(k.clone());
            }
            row.push((k.clone(), inline(v)?));
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return None;
    }
    let cell = |row: &Vec<(String, String)>, k: &str| row.iter().find(|(x, _)| x == k).map_or("-".to_string(), |(_, v)| v.clone());
    let widths: Vec<usize> =
        keys.iter().map(|k| rows.iter().map(|r| cell(r, k).chars().count()).max().unwrap_or(0).max(k.chars().count())).collect();
    let line = |cells: Vec<String>| {
        cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}", w = *w)).collect::<Vec<_>>().join("  ")
    };
    let mut out = vec![line(keys.clone())];
    for r in &rows {
        out.push(line(keys.iter().map(|k| cell(r, k)).collect()));
    }
    Some(out)
}
