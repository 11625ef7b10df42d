//! Deterministic certificate serialization.
//!
//! Object keys are sorted, integers print as integers and every other
//! number prints as `%.12e` (e.g. `2.500000000000e+00`). Non-finite values
//! cannot occur in a `serde_json::Value` and are emitted as `null` by the
//! builders.

use serde::Serialize;
use serde_json::{Map, Value};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Status {
    #[serde(rename = "OK")]
    Ok,
    #[serde(rename = "INCONCLUSIVE")]
    Inconclusive,
    #[serde(rename = "FAILED")]
    Failed,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "OK",
            Status::Inconclusive => "INCONCLUSIVE",
            Status::Failed => "FAILED",
        }
    }

    /// The worse of two statuses.
    pub fn and(self, other: Status) -> Status {
        self.max(other)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub command: String,
    /// `(file name, graph digest)` per input graph.
    pub inputs: Vec<(String, String)>,
    pub config: Value,
    pub results: Value,
    pub status: Status,
}

impl Certificate {
    pub fn to_value(&self) -> Value {
        let inputs = self
            .inputs
            .iter()
            .map(|(name, digest)| {
                let mut m = Map::new();
                m.insert("file".into(), Value::String(name.clone()));
                m.insert("sha256".into(), Value::String(digest.clone()));
                Value::Object(m)
            })
            .collect();
        let mut m = Map::new();
        m.insert("command".into(), Value::String(self.command.clone()));
        m.insert("inputs".into(), Value::Array(inputs));
        m.insert("config".into(), self.config.clone());
        m.insert("results".into(), self.results.clone());
        m.insert("status".into(), Value::String(self.status.as_str().into()));
        m.insert("version".into(), Value::String(VERSION.into()));
        Value::Object(m)
    }

    pub fn to_json(&self) -> String {
        to_canonical_json(&self.to_value())
    }

    /// Plain-text rendering: status plus the scalar entries of `results`.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}: {}\n", self.command, self.status.as_str());
        for (name, digest) in &self.inputs {
            out.push_str(&format!("  input {name} ({})\n", &digest[..12.min(digest.len())]));
        }
        if let Value::Object(m) = &self.results {
            let mut keys: Vec<&String> = m.keys().collect();
            keys.sort();
            for k in keys {
                text_line(&mut out, k, &m[k], 1);
            }
        }
        out
    }
}

fn text_line(out: &mut String, key: &str, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(m) if depth < 3 => {
            out.push_str(&format!("{pad}{key}:\n"));
            for (k, x) in m {
                text_line(out, k, x, depth + 1);
            }
        }
        Value::Array(a) if a.len() > 8 || a.iter().any(|x| x.is_array() || x.is_object()) => {
            out.push_str(&format!("{pad}{key}: [{} entries]\n", a.len()));
        }
        _ => {
            let mut s = String::new();
            write_value(&mut s, v, None);
            out.push_str(&format!("{pad}{key}: {s}\n"));
        }
    }
}

/// `%.12e` as in C: mantissa with 12 decimals, signed exponent of at least
/// two digits.
pub fn format_float(x: f64) -> String {
    if !x.is_finite() {
        return "null".into();
    }
    let s = format!("{x:.12e}");
    let (mant, exp) = s.split_once('e').expect("exponent present");
    let e: i32 = exp.parse().expect("integer exponent");
    let sign = if e < 0 { '-' } else { '+' };
    format!("{mant}e{sign}{:02}", e.abs())
}

pub fn to_canonical_json(v: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, v, Some(0));
    out
}

fn write_value(out: &mut String, v: &Value, indent: Option<usize>) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                out.push_str(&i.to_string());
            } else if let Some(u) = n.as_u64() {
                out.push_str(&u.to_string());
            } else {
                out.push_str(&format_float(n.as_f64().unwrap_or(f64::NAN)));
            }
        }
        Value::String(s) => out.push_str(&serde_json::to_string(s).expect("string serializes")),
        Value::Array(a) => {
            // numeric rows stay on one line
            let flat = a.iter().all(|x| !x.is_array() && !x.is_object());
            if a.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push('[');
            for (k, x) in a.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                match indent {
                    Some(d) if !flat => {
                        newline(out, d + 1);
                        write_value(out, x, Some(d + 1));
                    }
                    _ => {
                        if k > 0 && indent.is_some() {
                            out.push(' ');
                        }
                        write_value(out, x, indent.map(|d| d + 1));
                    }
                }
            }
            if let (Some(d), false) = (indent, flat) {
                newline(out, d);
            }
            out.push(']');
        }
        Value::Object(m) => {
            if m.is_empty() {
                out.push_str("{}");
                return;
            }
            let mut keys: Vec<&String> = m.keys().collect();
            keys.sort();
            out.push('{');
            for (k, key) in keys.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                if let Some(d) = indent {
                    newline(out, d + 1);
                }
                out.push_str(&serde_json::to_string(key).expect("key serializes"));
                out.push(':');
                if indent.is_some() {
                    out.push(' ');
                }
                write_value(out, &m[*key], indent.map(|d| d + 1));
            }
            if let Some(d) = indent {
                newline(out, d);
            }
            out.push('}');
        }
    }
}

fn newline(out: &mut String, depth: usize) {
    out.push('\n');
    for _ in 0..depth {
        out.push_str("  ");
    }
}

/// A JSON number, or `null` when `x` is not finite.
pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

pub fn matrix(rows: impl IntoIterator<Item = Vec<f64>>) -> Value {
    Value::Array(
        rows.into_iter()
            .map(|r| Value::Array(r.into_iter().map(num).collect()))
            .collect(),
    )
}

pub fn sym(m: &vclab_core::SymMatrix) -> Value {
    matrix((0..m.size()).map(|i| m.row(i).to_vec()))
}

pub fn edges(list: &[(usize, usize)]) -> Value {
    serde_json::to_value(list.iter().map(|&(i, j)| [i, j]).collect::<Vec<_>>()).expect("edges serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn c_style_exponent() {
        assert_eq!(format_float(2.5), "2.500000000000e+00");
        assert_eq!(format_float(-1.0e-13), "-1.000000000000e-13");
        assert_eq!(format_float(0.0), "0.000000000000e+00");
        assert_eq!(format_float(123456.0), "1.234560000000e+05");
        assert_eq!(format_float(1e300), "1.000000000000e+300");
        assert_eq!(format_float(f64::INFINITY), "null");
    }

    #[test]
    fn sorted_and_stable() {
        let v = json!({"b": 1, "a": [1.5, 2], "c": {"z": true, "y": null}});
        let s = to_canonical_json(&v);
        assert_eq!(
            s,
            "{\n  \"a\": [1.500000000000e+00, 2],\n  \"b\": 1,\n  \"c\": {\n    \"y\": null,\n    \"z\": true\n  }\n}"
        );
        let back: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back["a"][0], json!(1.5));
    }

    #[test]
    fn status_order() {
        assert_eq!(Status::Ok.and(Status::Inconclusive), Status::Inconclusive);
        assert_eq!(Status::Failed.and(Status::Ok), Status::Failed);
    }
}
