use std::fmt::Write as _;

use pencil_resolvent::linalg::{ComplexMatrix, C64};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Section {
    pub title: String,
    pub entries: Vec<(String, Value)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub source: String,
    pub defaults: Vec<(String, Value)>,
    pub warnings: Vec<String>,
    pub sections: Vec<Section>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(command: &str, source: String) -> Self {
        Report {
            command: command.into(),
            source,
            defaults: vec![],
            warnings: vec![],
            sections: vec![],
            checks: vec![],
        }
    }

    pub fn default_value(&mut self, key: &str, v: impl Into<Value>) {
        self.defaults.push((key.into(), v.into()));
    }

    pub fn section(&mut self, title: &str) -> &mut Section {
        self.sections.push(Section {
            title: title.into(),
            entries: vec![],
        });
        self.sections.last_mut().expect("just pushed")
    }

    /// Records `value <= limit` as a check.
    pub fn bound(&mut self, name: impl Into<String>, value: f64, limit: f64) {
        self.checks.push(Check {
            name: name.into(),
            pass: value <= limit,
            detail: format!("{value:.3e} <= {limit:.1e}"),
        });
    }

    pub fn check(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            pass,
            detail: detail.into(),
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> String {
        let pairs = |v: &[(String, Value)]| Value::Object(v.iter().cloned().collect());
        let doc = json!({
            "command": self.command,
            "source": self.source,
            "defaults": pairs(&self.defaults),
            "warnings": self.warnings,
            "sections": self.sections.iter().map(|s| json!({"title": s.title, "entries": pairs(&s.entries)})).collect::<Vec<_>>(),
            "checks": self.checks,
            "pass": self.passed(),
        });
        serde_json::to_string_pretty(&doc).expect("report is serializable") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "pencil-resolvent {}", self.command);
        let _ = writeln!(out, "source: {}", self.source);
        let defaults: Vec<String> = self.defaults.iter().map(|(k, v)| format!("{k} = {}", inline(v))).collect();
        let _ = writeln!(out, "defaults: {}", defaults.join(", "));
        for w in &self.warnings {
            let _ = writeln!(out, "warning: {w}");
        }
        for s in &self.sections {
            let _ = writeln!(out, "\n== {} ==", s.title);
            for (k, v) in &s.entries {
                match matrix_rows(v) {
                    Some(rows) => {
                        let _ = writeln!(out, "{k} =");
                        for r in rows {
                            let _ = writeln!(out, "  {r}");
                        }
                    }
                    None => {
                        let _ = writeln!(out, "{k}: {}", inline(v));
                    }
                }
            }
        }
        let _ = writeln!(out, "\n== checks ==");
        for c in &self.checks {
            let _ = writeln!(out, "{}  {}  ({})", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
        }
        let n_pass = self.checks.iter().filter(|c| c.pass).count();
        let _ = writeln!(
            out,
            "result: {} ({n_pass}/{} checks)",
            if self.passed() { "PASS" } else { "FAIL" },
            self.checks.len()
        );
        out
    }
}

impl Section {
    pub fn put(&mut self, key: impl Into<String>, v: impl Into<Value>) -> &mut Self {
        self.entries.push((key.into(), v.into()));
        self
    }
}

pub fn complex(z: C64) -> Value {
    json!([z.re, z.im])
}

pub fn matrix(m: &ComplexMatrix) -> Value {
    Value::Array(
        m.row_iter()
            .map(|row| Value::Array(row.iter().map(|&z| complex(z)).collect()))
            .collect(),
    )
}

fn fmt_complex(re: f64, im: f64) -> String {
    if im == 0.0 {
        format!("{re:>11.4e}")
    } else {
        format!("{re:.4e}{im:+.4e}i")
    }
}

fn as_pair(v: &Value) -> Option<(f64, f64)> {
    match v.as_array()?.as_slice() {
        [a, b] => Some((a.as_f64()?, b.as_f64()?)),
        _ => None,
    }
}

// rows of [re, im] pairs render as a matrix, anything else inline
fn matrix_rows(v: &Value) -> Option<Vec<String>> {
    let rows = v.as_array()?;
    if rows.is_empty() {
        return None;
    }
    rows.iter()
        .map(|row| {
            let cells = row.as_array()?;
            if cells.is_empty() {
                return Some(String::new());
            }
            cells
                .iter()
                .map(|c| as_pair(c).map(|(re, im)| fmt_complex(re, im)))
                .collect::<Option<Vec<_>>>()
                .map(|c| c.join(" "))
        })
        .collect()
}

fn inline(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(a) => format!("[{}]", a.iter().map(inline).collect::<Vec<_>>().join(", ")),
        other => other.to_string(),
    }
}
