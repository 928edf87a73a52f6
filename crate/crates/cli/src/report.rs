//! Text and JSON rendering of numbers and sets.
//!
//! Text mode prints floats with 6 decimals and exact values as `p/q`. JSON
//! carries floats as numbers with their shortest round-tripping representation
//! and exact values as `"p/q"` strings.

use omnivocal_core::{Partition, Rational, Scalar, TerminalSet};
use serde_json::{json, Value};

/// A value that can appear in a report.
pub trait Render: Scalar {
    fn text(&self) -> String;
    fn json(&self) -> Value;
}

impl Render for f64 {
    fn text(&self) -> String {
        let s = format!("{self:.6}");
        if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
            s[1..].to_string()
        } else {
            s
        }
    }

    fn json(&self) -> Value {
        serde_json::Number::from_f64(*self).map_or(Value::Null, Value::Number)
    }
}

impl Render for Rational {
    fn text(&self) -> String {
        self.to_string()
    }

    fn json(&self) -> Value {
        Value::String(self.to_string())
    }
}

/// Like [`Render::text`] with trailing zeros dropped: `2.000000` becomes `2`.
pub fn compact<V: Render>(v: &V) -> String {
    let s = v.text();
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub fn list<V: Render>(values: &[V]) -> String {
    let items: Vec<String> = values.iter().map(compact).collect();
    format!("[{}]", items.join(", "))
}

pub fn set_json(set: TerminalSet) -> Value {
    json!(set.iter().collect::<Vec<_>>())
}

pub fn partitions_text(parts: &[Partition]) -> String {
    parts.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

pub fn partitions_json(parts: &[Partition]) -> Value {
    json!(parts.iter().map(ToString::to_string).collect::<Vec<_>>())
}
