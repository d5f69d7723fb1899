use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

/// One named check result.
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    pub value: Value,
    pub tolerance: Option<f64>,
}

impl Verdict {
    pub fn new(name: impl Into<String>, pass: bool, value: Value) -> Self {
        Verdict { name: name.into(), pass, value, tolerance: None }
    }

    /// An informational value that cannot fail.
    pub fn info(name: impl Into<String>, value: Value) -> Self {
        Verdict::new(name, true, value)
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tolerance = Some(tol);
        self
    }

    fn to_value(&self) -> Value {
        let mut m = Map::new();
        m.insert("name".into(), json!(self.name));
        m.insert("pass".into(), json!(self.pass));
        m.insert("value".into(), self.value.clone());
        if let Some(t) = self.tolerance {
            m.insert("tolerance".into(), json!(t));
        }
        Value::Object(m)
    }
}

/// Hash of everything a command read: file contents and scalar arguments,
/// each tagged with its role.
#[derive(Clone, Default)]
pub struct InputDigest {
    hasher: Sha256,
}

impl InputDigest {
    pub fn add(&mut self, label: &str, bytes: &[u8]) {
        self.hasher.update((label.len() as u64).to_le_bytes());
        self.hasher.update(label.as_bytes());
        self.hasher.update((bytes.len() as u64).to_le_bytes());
        self.hasher.update(bytes);
    }

    pub fn hex(&self) -> String {
        self.hasher.clone().finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub inputs_digest: String,
    pub verdicts: Vec<Verdict>,
    pub witnesses: Option<Value>,
    pub error: Option<String>,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.error.is_none() && self.verdicts.iter().all(|v| v.pass)
    }

    pub fn to_value(&self) -> Value {
        let mut m = Map::new();
        m.insert("command".into(), json!(self.command));
        m.insert("inputs_digest".into(), json!(self.inputs_digest));
        m.insert("pass".into(), json!(self.all_pass()));
        m.insert("verdicts".into(), Value::Array(self.verdicts.iter().map(Verdict::to_value).collect()));
        m.insert("witnesses".into(), self.witnesses.clone().unwrap_or(Value::Null));
        if let Some(e) = &self.error {
            m.insert("error".into(), json!(e));
        }
        Value::Object(m)
    }

    /// Pretty JSON with sorted keys (serde_json maps are ordered by key).
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("values serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}  [{}]\n", self.command, if self.all_pass() { "PASS" } else { "FAIL" });
        if let Some(e) = &self.error {
            out.push_str(&format!("error: {e}\n"));
        }
        for v in &self.verdicts {
            let value = match &v.value {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            let tol = v.tolerance.map(|t| format!("  (tol {t:e})")).unwrap_or_default();
            out.push_str(&format!("  {} {} = {}{}\n", if v.pass { "ok  " } else { "FAIL" }, v.name, value, tol));
        }
        out.push_str(&format!("  inputs {}\n", self.inputs_digest));
        out
    }
}
