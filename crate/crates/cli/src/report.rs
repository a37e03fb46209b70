//! Report assembly: JSON values with stable key order, exact quantities as
//! strings, and a plain-text rendering.
//!
//! Key order is insertion order throughout, so identical inputs and options
//! produce byte-identical reports; the only run-dependent field is
//! `timing_ms`, which `--no-timing` suppresses.

use serde_json::{Map, Value};

use mj_singular::classify::GermReport;
use mj_singular::jets::{MldBound, MldMode, MldTerm};

/// An object with keys in the given order.
pub fn obj(pairs: Vec<(&str, Value)>) -> Value {
    let mut map = Map::new();
    for (k, v) in pairs {
        map.insert(k.to_string(), v);
    }
    Value::Object(map)
}

/// A string value via `Display` (used for exact rationals, bounds, verdicts).
pub fn text(x: impl std::fmt::Display) -> Value {
    Value::String(x.to_string())
}

fn opt<T: std::fmt::Display>(x: &Option<T>) -> Value {
    match x {
        Some(v) => text(v),
        None => Value::Null,
    }
}

fn opt_num(x: Option<u64>) -> Value {
    match x {
        Some(v) => Value::from(v),
        None => Value::Null,
    }
}

/// The germ section of a report, mirroring the classification result.
pub fn germ_to_json(r: &GermReport) -> Value {
    let inv = &r.invariants;
    let (alpha, beta) = match &inv.alpha_beta {
        Some((a, b)) => (text(a), text(b)),
        None => (Value::Null, Value::Null),
    };
    obj(vec![
        ("dim", Value::from(r.dim)),
        ("emb_dim", Value::from(r.emb_dim)),
        ("mult", opt_num(r.mult.map(u64::from))),
        (
            "invariants",
            obj(vec![
                ("tau", opt_num(inv.tau.map(|t| t as u64))),
                ("m2", opt(&inv.m2)),
                ("tau2", opt_num(inv.tau2.map(|t| t as u64))),
                ("alpha", alpha),
                ("beta", beta),
                ("ade", opt(&inv.ade)),
            ]),
        ),
        ("verdict", text(r.verdict)),
        (
            "certificate",
            Value::Array(
                r.certificate
                    .iter()
                    .map(|e| {
                        obj(vec![
                            ("branch", text(&e.branch)),
                            ("evidence", text(&e.evidence)),
                        ])
                    })
                    .collect(),
            ),
        ),
    ])
}

fn term_to_json(t: &MldTerm) -> Value {
    obj(vec![
        ("level_a", opt_num(t.level_a.map(|l| l as u64))),
        ("level_x", Value::from(t.level_x)),
        ("value", text(&t.value)),
    ])
}

/// The jet-bound section of a report.
pub fn bound_to_json(b: &MldBound) -> Value {
    obj(vec![
        (
            "mode",
            text(match b.mode {
                MldMode::Plain => "plain",
                MldMode::Mixed => "mixed",
            }),
        ),
        ("value", text(&b.value)),
        (
            "certifies_not_log_canonical",
            Value::Bool(b.certifies_not_log_canonical()),
        ),
        (
            "certifies_not_canonical",
            Value::Bool(b.certifies_not_canonical()),
        ),
        ("witness", term_to_json(&b.witness)),
        (
            "terms",
            Value::Array(b.terms.iter().map(term_to_json).collect()),
        ),
    ])
}

fn plain_scalar(v: &Value) -> String {
    match v {
        Value::Null => "-".to_string(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn push_germ_lines(out: &mut String, germ: &Value) {
    out.push_str(&format!(
        "verdict: {}\n",
        plain_scalar(&germ["verdict"])
    ));
    out.push_str(&format!(
        "dim: {}  emb_dim: {}  mult: {}\n",
        plain_scalar(&germ["dim"]),
        plain_scalar(&germ["emb_dim"]),
        plain_scalar(&germ["mult"]),
    ));
    if let Some(inv) = germ.get("invariants").and_then(Value::as_object) {
        let shown: Vec<String> = inv
            .iter()
            .filter(|(_, v)| !v.is_null())
            .map(|(k, v)| format!("{k}={}", plain_scalar(v)))
            .collect();
        if !shown.is_empty() {
            out.push_str(&format!("invariants: {}\n", shown.join("  ")));
        }
    }
    if let Some(entries) = germ.get("certificate").and_then(Value::as_array) {
        if !entries.is_empty() {
            out.push_str("certificate:\n");
            for e in entries {
                out.push_str(&format!(
                    "  - {}: {}\n",
                    plain_scalar(&e["branch"]),
                    plain_scalar(&e["evidence"]),
                ));
            }
        }
    }
}

fn push_jets_lines(out: &mut String, jets: &Value) {
    if let Some(err) = jets.get("error") {
        out.push_str(&format!("jet bound: unavailable ({})\n", plain_scalar(err)));
        return;
    }
    let tag = if jets["certifies_not_log_canonical"] == Value::Bool(true) {
        " [certifies NOT_MJ_LOG_CANONICAL]"
    } else if jets["certifies_not_canonical"] == Value::Bool(true) {
        " [certifies not canonical]"
    } else {
        ""
    };
    out.push_str(&format!(
        "jet bound ({}): value {} at level {}{}\n",
        plain_scalar(&jets["mode"]),
        plain_scalar(&jets["value"]),
        plain_scalar(&jets["witness"]["level_x"]),
        tag,
    ));
}

fn push_body_lines(out: &mut String, body: &Value) {
    if let Some(input) = body.get("input") {
        if let Some(file) = input.get("file") {
            out.push_str(&format!("input: {}\n", plain_scalar(file)));
        }
        if let Some(gens) = input.get("gens").and_then(Value::as_array) {
            let texts: Vec<String> = gens.iter().map(plain_scalar).collect();
            out.push_str(&format!("gens: {}\n", texts.join("; ")));
        }
    }
    if let Some(germ) = body.get("germ") {
        push_germ_lines(out, germ);
    }
    if let Some(jets) = body.get("jets") {
        push_jets_lines(out, jets);
    }
    if let Some(newton) = body.get("newton") {
        out.push_str(&format!(
            "newton: {}\n",
            plain_scalar(&newton["certificate"])
        ));
    }
    if let Some(sc) = body.get("self_check") {
        out.push_str(&format!(
            "self-check: {} changes, {}\n",
            plain_scalar(&sc["changes"]),
            if sc["consistent"] == Value::Bool(true) {
                "consistent"
            } else {
                "INCONSISTENT"
            },
        ));
    }
    for (key, label) in [
        ("level", "level"),
        ("fiber_dim", "fiber dim"),
        ("emb_dim", "emb dim"),
        ("canonical", "canonical"),
        ("log_canonical", "log canonical"),
    ] {
        if body.get("germ").is_none() {
            if let Some(v) = body.get(key) {
                out.push_str(&format!("{label}: {}\n", plain_scalar(v)));
            }
        }
    }
}

/// Human-readable rendering of a finished report.
pub fn render_plain(report: &Value) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{} {} — {}\n",
        plain_scalar(&report["tool"]),
        plain_scalar(&report["version"]),
        plain_scalar(&report["command"]),
    ));
    if let Some(reports) = report.get("reports").and_then(Value::as_array) {
        for entry in reports {
            out.push('\n');
            out.push_str(&format!("file: {}\n", plain_scalar(&entry["file"])));
            if let Some(err) = entry.get("error") {
                out.push_str(&format!("error: {}\n", plain_scalar(err)));
            } else {
                push_body_lines(&mut out, entry);
            }
        }
        if let Some(summary) = report.get("summary").and_then(Value::as_object) {
            out.push_str("\nsummary:\n");
            for (k, v) in summary {
                out.push_str(&format!("  {k}: {}\n", plain_scalar(v)));
            }
        }
    } else {
        push_body_lines(&mut out, report);
    }
    if let Some(ms) = report.get("timing_ms") {
        out.push_str(&format!("timing: {} ms\n", plain_scalar(ms)));
    }
    out
}
