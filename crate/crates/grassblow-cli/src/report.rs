use serde_json::{json, Map, Value};

use grassblow_core::lattice::Normalization;
use grassblow_core::SignConvention;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARAM: i32 = 2;
pub const EXIT_UNSUPPORTED: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

/// Failure that ends a command with a specific exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn param(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_PARAM,
            message: message.into(),
        }
    }
}

impl From<grassblow_core::Error> for Failure {
    fn from(e: grassblow_core::Error) -> Self {
        use grassblow_core::Error::*;
        let (code, message) = match &e {
            Param(_) => (EXIT_PARAM, e.to_string()),
            NormalizationRequired { .. } | Rank { .. } => (EXIT_PARAM, format!("parameters out of range: {e}")),
            Unsupported(_) => (EXIT_UNSUPPORTED, e.to_string()),
            Indeterminate(_) | Domain(_) => (EXIT_VERIFY, e.to_string()),
        };
        Failure { code, message }
    }
}

pub struct Report {
    pub header: Map<String, Value>,
    pub body: Value,
    pub findings: Vec<Value>,
    pub code: i32,
}

pub fn sign_name(conv: SignConvention) -> &'static str {
    match conv {
        SignConvention::Listed => "listed",
        SignConvention::Ascending => "ascending",
    }
}

pub fn header(command: &str, seed: u64, conv: SignConvention) -> Map<String, Value> {
    let mut h = Map::new();
    h.insert("tool".into(), json!("grassblow"));
    h.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    h.insert("command".into(), json!(command));
    h.insert("seed".into(), json!(seed));
    h.insert("sign_convention".into(), json!(sign_name(conv)));
    h
}

pub fn add_normalization(h: &mut Map<String, Value>, norm: &Normalization) {
    h.insert("input".into(), json!(norm.input));
    h.insert("params".into(), json!(norm.params));
    h.insert("transforms".into(), json!(norm.log));
}

impl Report {
    pub fn to_json(&self) -> String {
        let v = json!({
            "header": Value::Object(self.header.clone()),
            "body": self.body,
            "findings": self.findings,
        });
        serde_json::to_string_pretty(&v).expect("report serializes")
    }

    pub fn to_human(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.header {
            out.push_str(&format!("{k}: {}\n", inline(v)));
        }
        out.push('\n');
        render(&self.body, 0, &mut out);
        out.push('\n');
        if self.findings.is_empty() {
            out.push_str("findings: none\n");
        } else {
            out.push_str(&format!("findings: {}\n", self.findings.len()));
            for f in &self.findings {
                out.push_str(&format!("  - {}\n", inline(f)));
            }
        }
        out
    }
}

/// {"num","den"} pairs print as fractions.
fn as_rational(v: &Value) -> Option<String> {
    let o = v.as_object()?;
    if o.len() != 2 {
        return None;
    }
    let (num, den) = (o.get("num")?.as_str()?, o.get("den")?.as_str()?);
    Some(if den == "1" { num.to_string() } else { format!("{num}/{den}") })
}

fn inline(v: &Value) -> String {
    if let Some(r) = as_rational(v) {
        return r;
    }
    match v {
        Value::String(s) => s.clone(),
        Value::Array(a) => format!("[{}]", a.iter().map(inline).collect::<Vec<_>>().join(", ")),
        Value::Object(o) => format!(
            "{{{}}}",
            o.iter().map(|(k, v)| format!("{k}: {}", inline(v))).collect::<Vec<_>>().join(", ")
        ),
        other => other.to_string(),
    }
}

fn is_scalar(v: &Value) -> bool {
    as_rational(v).is_some()
        || match v {
            Value::Object(o) => o.values().all(|x| !x.is_object() && !x.is_array()) && o.len() <= 4,
            Value::Array(a) => a.iter().all(|x| !x.is_object() && !x.is_array()) || a.iter().all(|x| as_rational(x).is_some()),
            _ => true,
        }
}

fn render(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(o) => {
            for (k, x) in o {
                if is_scalar(x) {
                    out.push_str(&format!("{pad}{k}: {}\n", inline(x)));
                } else {
                    out.push_str(&format!("{pad}{k}:\n"));
                    render(x, depth + 1, out);
                }
            }
        }
        Value::Array(a) => {
            for x in a {
                if is_scalar(x) {
                    out.push_str(&format!("{pad}- {}\n", inline(x)));
                } else {
                    out.push_str(&format!("{pad}-\n"));
                    render(x, depth + 1, out);
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", inline(other))),
    }
}
