//! Reports emitted by every subcommand, with JSON and TSV renderings.

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// One pass/fail check attached to a report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Gate {
    /// Short descriptive name.
    pub name: String,
    /// Whether the check passed.
    pub pass: bool,
    /// What was observed, and what was expected when they differ.
    pub detail: String,
}

impl Gate {
    /// A gate comparing an observed value with an expected one by their
    /// displayed forms.
    pub fn expect(name: &str, got: impl ToString, want: impl ToString) -> Self {
        let (got, want) = (got.to_string(), want.to_string());
        let pass = got == want;
        let detail = if pass { got } else { format!("{got}, expected {want}") };
        Self { name: name.into(), pass, detail }
    }

    /// A gate that failed with an error before it could be evaluated.
    pub fn error(name: &str, err: impl ToString) -> Self {
        Self { name: name.into(), pass: false, detail: err.to_string() }
    }
}

/// The output of one subcommand.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    /// The subcommand as typed, without output flags.
    pub command: String,
    /// SHA-256 of the inputs, hex encoded.
    pub inputs_digest: String,
    /// Computed values.
    pub outputs: Value,
    /// Checks, in a fixed order.
    pub gates: Vec<Gate>,
}

impl Report {
    /// Builds a report, hashing the given input bytes.
    pub fn new(command: impl Into<String>, inputs: &[u8], outputs: Value, gates: Vec<Gate>) -> Self {
        let digest = Sha256::digest(inputs);
        let inputs_digest = digest.iter().map(|b| format!("{b:02x}")).collect();
        Self { command: command.into(), inputs_digest, outputs, gates }
    }

    /// True when every gate passed.
    pub fn passed(&self) -> bool {
        self.gates.iter().all(|g| g.pass)
    }

    /// Pretty-printed JSON followed by a newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    /// Tab-separated lines: `command`, `inputs_digest`, one `output` line
    /// per scalar leaf with its dotted path, and one `gate` line per gate.
    pub fn to_tsv(&self) -> String {
        let mut out = format!("command\t{}\ninputs_digest\t{}\n", self.command, self.inputs_digest);
        let mut leaves = Vec::new();
        flatten("", &self.outputs, &mut leaves);
        for (path, value) in leaves {
            out.push_str(&format!("output\t{path}\t{value}\n"));
        }
        for g in &self.gates {
            let status = if g.pass { "PASS" } else { "FAIL" };
            out.push_str(&format!("gate\t{}\t{status}\t{}\n", g.name, g.detail));
        }
        out
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                flatten(&join(k), x, out);
            }
        }
        Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let parts: Vec<String> = items.iter().map(scalar).collect();
            out.push((prefix.to_string(), parts.join(",")));
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                flatten(&join(&i.to_string()), x, out);
            }
        }
        _ => out.push((prefix.to_string(), scalar(v))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.replace(['\t', '\n'], " "),
        other => other.to_string(),
    }
}
