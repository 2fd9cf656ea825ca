//! Rendering helpers shared by the subcommands: the JSON envelope and the
//! aligned-text forms.

use apn_surface::apn::DiffWitness;
use apn_surface::{FieldSpec, TriPoly};
use serde_json::{json, Value};

/// Stable report envelope. Keys are fixed; `result` is subcommand-specific.
pub fn envelope(input: Value, field: Option<FieldSpec>, result: Value, start: std::time::Instant) -> Value {
    json!({
        "input": input,
        "field": field.map(|f| json!({"n": f.n(), "modulus": format!("0x{:X}", f.modulus())})),
        "result": result,
        "timing_ms": start.elapsed().as_millis() as u64,
        "version": env!("CARGO_PKG_VERSION"),
    })
}

/// Modulus bits rendered as a readable polynomial over GF(2).
pub fn modulus_text(modulus: u64) -> String {
    let mut parts = Vec::new();
    for i in (0..64).rev() {
        if modulus >> i & 1 == 1 {
            parts.push(match i {
                0 => "1".to_string(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            });
        }
    }
    parts.join(" + ")
}

const TERM_LIMIT: usize = 120;

/// Text of a trivariate polynomial, omitted above the deterministic size cap.
pub fn tri_text(p: &TriPoly) -> Value {
    if p.num_terms() <= TERM_LIMIT {
        Value::String(p.to_string())
    } else {
        Value::Null
    }
}

pub fn witness_json(w: &DiffWitness) -> Value {
    let shown: Vec<String> = w.solutions.iter().take(64).map(|s| s.to_string()).collect();
    json!({
        "a": w.a.to_string(),
        "b": w.b.to_string(),
        "solution_count": w.solutions.len(),
        "solutions": shown,
        "solutions_truncated": w.solutions.len() > 64,
    })
}

pub fn witness_text(w: &DiffWitness) -> String {
    let mut s = format!(
        "a={} b={} count={}",
        w.a,
        w.b,
        w.solutions.len()
    );
    let shown: Vec<String> = w.solutions.iter().take(8).map(|x| x.to_string()).collect();
    s.push_str(&format!(" [{}{}]", shown.join(", "), if w.solutions.len() > 8 { ", ..." } else { "" }));
    s
}
