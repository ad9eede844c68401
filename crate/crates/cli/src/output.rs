use serde_json::{json, Value};

use crate::args::Format;

pub fn print_report(report: &Value, format: Format) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(report).expect("JSON values serialize")),
        Format::Table => print!("{}", table(report)),
    }
}

/// Errors always go to stdout as JSON so pipelines see one document either way.
pub fn print_error(code: &str, message: &str, context: Value) {
    let err = json!({"error": {"code": code, "message": message, "context": context}});
    println!("{}", serde_json::to_string_pretty(&err).expect("JSON values serialize"));
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Two-column rendering of the report header and the top level of `results`;
/// arrays of objects get one line per element.
fn table(report: &Value) -> String {
    let mut rows: Vec<(String, String)> = Vec::new();
    for key in ["command", "seed", "version", "wall_time_ms"] {
        rows.push((key.into(), cell(&report[key])));
    }
    if let Some(results) = report["results"].as_object() {
        for (k, v) in results {
            match v {
                Value::Array(items) if items.iter().all(Value::is_object) && !items.is_empty() => {
                    for (i, item) in items.iter().enumerate() {
                        rows.push((format!("{k}[{}]", i + 1), cell(item)));
                    }
                }
                _ => rows.push((k.clone(), cell(v))),
            }
        }
    }
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.iter().map(|(k, v)| format!("{k:<width$}  {v}\n")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_lists_object_arrays_line_by_line() {
        let report = json!({
            "command": "x", "seed": 1, "version": "0", "wall_time_ms": 2,
            "results": {"items": [{"a": 1}, {"a": 2}], "ok": true}
        });
        let t = table(&report);
        assert!(t.contains("items[2]"));
        assert!(t.contains("ok            true") || t.lines().any(|l| l.starts_with("ok") && l.ends_with("true")));
    }
}
