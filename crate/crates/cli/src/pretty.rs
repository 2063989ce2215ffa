//! Plain-text tables for `--pretty`.

use std::fmt::Write;

use serde_json::Value;

fn text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn list(v: &Value) -> String {
    v.as_array()
        .map(|a| a.iter().map(text).collect::<Vec<_>>().join(", "))
        .unwrap_or_default()
}

fn matching(v: &Value) -> String {
    let edges: Vec<String> = v
        .as_array()
        .into_iter()
        .flatten()
        .map(|e| {
            let m = e["mult"].as_u64().unwrap_or(1);
            if m == 1 {
                format!("{}-{}", text(&e["u"]), text(&e["v"]))
            } else {
                format!("{}-{} x{m}", text(&e["u"]), text(&e["v"]))
            }
        })
        .collect();
    if edges.is_empty() {
        "(empty)".into()
    } else {
        edges.join("  ")
    }
}

fn profile_table(out: &mut String, profile: &Value) {
    let Some(map) = profile.as_object() else { return };
    let width = map.keys().map(String::len).max().unwrap_or(4).max(5);
    let _ = writeln!(out, "{:width$}  utility", "agent");
    for (id, v) in map {
        let _ = writeln!(out, "{id:width$}  {}", text(v));
    }
}

pub fn render(command: &str, v: &Value) -> String {
    let mut out = String::new();
    match command {
        "ged" => {
            let _ = writeln!(out, "under:   {}", list(&v["under"]));
            let _ = writeln!(out, "over:    {}", list(&v["over"]));
            let _ = writeln!(out, "perfect: {}", list(&v["perfect"]));
            for (k, c) in v["components"].as_array().into_iter().flatten().enumerate() {
                let _ = writeln!(out, "component {}: {}", k + 1, list(c));
            }
        }
        "solve" => {
            let _ = writeln!(out, "model: {}   total: {}", text(&v["model"]), text(&v["total"]));
            profile_table(&mut out, &v["profile"]);
            if let Some(ex) = v["exchange"].as_array() {
                let _ = writeln!(out, "\nexchange");
                for e in ex {
                    let _ = writeln!(out, "{}-{}  {}", text(&e["u"]), text(&e["v"]), text(&e["amount"]));
                }
            }
        }
        "lottery" => {
            for e in v.as_array().into_iter().flatten() {
                let _ = writeln!(out, "{:>8}  {}", text(&e["prob"]), matching(&e["matching"]));
            }
        }
        "sample" => {
            let _ = writeln!(out, "seed {}", text(&v["seed"]));
            for (k, m) in v["samples"].as_array().into_iter().flatten().enumerate() {
                let _ = writeln!(out, "{:>4}  {}", k + 1, matching(m));
            }
        }
        "verify" => {
            for c in v["checks"].as_array().into_iter().flatten() {
                let mark = if c["passed"].as_bool() == Some(true) { "PASS" } else { "FAIL" };
                let _ = write!(out, "{mark}  {}", text(&c["name"]));
                if let Some(d) = c.get("detail") {
                    let _ = write!(out, "  ({})", text(d));
                }
                out.push('\n');
            }
        }
        "manipulate" => {
            let _ = writeln!(out, "coalition: {}", list(&v["coalition"]));
            let _ = writeln!(out, "{:8} {:>5} {:>10} {:>12} {:>8}  some-preference", "agent", "peak", "truthful", "manipulated", "delta");
            for d in v["deviators"].as_array().into_iter().flatten() {
                let _ = writeln!(
                    out,
                    "{:8} {:>5} {:>10} {:>12} {:>8}  {}",
                    text(&d["id"]),
                    text(&d["peak"]),
                    text(&d["truthful"]),
                    text(&d["manipulated"]),
                    text(&d["delta"]),
                    text(&d["better_for_some_preference"]),
                );
            }
            let _ = writeln!(out, "verdict: {}", text(&v["verdict"]));
        }
        _ => out = serde_json::to_string_pretty(v).unwrap_or_default(),
    }
    out
}
