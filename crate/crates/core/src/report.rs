//! Check results and their text, JSON and LaTeX renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::algebra::Poly;

/// One named identity with its residual statistics.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub residual_terms: usize,
    pub excluded_terms: usize,
    /// Informational checks are printed but never fail a run.
    #[serde(skip_serializing_if = "std::ops::Not::not", default)]
    pub informational: bool,
    #[serde(skip)]
    pub residual: Poly,
}

impl Check {
    /// Passes iff `residual` is zero.
    pub fn zero(name: impl Into<String>, residual: Poly) -> Self {
        let n = residual.len();
        Check { name: name.into(), pass: n == 0, residual_terms: n, excluded_terms: 0, informational: false, residual }
    }

    /// Split `residual` into retained and excluded terms; passes iff nothing retained.
    pub fn windowed(name: impl Into<String>, residual: Poly, excluded: impl Fn(&crate::algebra::Monomial) -> bool) -> Self {
        let ex = residual.filter(&excluded);
        let kept = residual.filter(|m| !excluded(m));
        let n = kept.len();
        Check { name: name.into(), pass: n == 0, residual_terms: n, excluded_terms: ex.len(), informational: false, residual: kept }
    }

    pub fn boolean(name: impl Into<String>, pass: bool) -> Self {
        Check { name: name.into(), pass, residual_terms: usize::from(!pass), excluded_terms: 0, informational: false, residual: Poly::zero() }
    }

    pub fn informational(mut self) -> Self {
        self.informational = true;
        self
    }

    pub fn ok(&self) -> bool {
        self.pass || self.informational
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Latex,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            "latex" => Ok(Format::Latex),
            other => Err(format!("unknown format `{other}` (expected text, json or latex)")),
        }
    }
}

/// A formula in both plain and LaTeX form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Output {
    pub text: String,
    pub latex: String,
}

impl Output {
    pub fn poly(p: &Poly) -> Self {
        Output { text: p.to_string(), latex: p.latex() }
    }

    pub fn plain(s: impl Into<String>) -> Self {
        let s = s.into();
        Output { latex: format!("\\text{{{}}}", s.replace('_', "\\_")), text: s }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub model: String,
    pub checks: Vec<Check>,
    pub outputs: BTreeMap<String, Output>,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    model: &'a str,
    checks: &'a [Check],
    outputs: BTreeMap<&'a str, &'a str>,
}

impl Report {
    pub fn new(model: impl Into<String>) -> Self {
        Report { model: model.into(), ..Default::default() }
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, cs: impl IntoIterator<Item = Check>) {
        self.checks.extend(cs);
    }

    pub fn output(&mut self, key: &str, o: Output) {
        self.outputs.insert(key.to_string(), o);
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(Check::ok)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn render(&self, f: Format) -> String {
        match f {
            Format::Text => self.to_text(),
            Format::Json => self.to_json(),
            Format::Latex => self.to_latex(),
        }
    }

    pub fn to_json(&self) -> String {
        let j = JsonReport {
            model: &self.model,
            checks: &self.checks,
            outputs: self.outputs.iter().map(|(k, v)| (k.as_str(), v.text.as_str())).collect(),
        };
        let mut s = serde_json::to_string_pretty(&j).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("model {}\n", self.model);
        for c in &self.checks {
            let tag = match (c.pass, c.informational) {
                (true, _) => "PASS",
                (false, true) => "INFO",
                (false, false) => "FAIL",
            };
            let _ = write!(s, "  [{tag}] {} (residual terms: {}", c.name, c.residual_terms);
            if c.excluded_terms > 0 {
                let _ = write!(s, ", excluded: {}", c.excluded_terms);
            }
            s.push_str(")\n");
        }
        for (k, v) in &self.outputs {
            let _ = writeln!(s, "{k}:");
            for line in v.text.lines() {
                let _ = writeln!(s, "  {line}");
            }
        }
        let _ = writeln!(s, "{}", if self.pass() { "ok" } else { "failed" });
        s
    }

    pub fn to_latex(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "% model {}", self.model);
        s.push_str("\\begin{tabular}{lrr}\n");
        for c in &self.checks {
            let mark = if c.pass { "\\checkmark" } else { "$\\times$" };
            let _ = writeln!(s, "{} {} & {} & {} \\\\", mark, c.name.replace('_', "\\_"), c.residual_terms, c.excluded_terms);
        }
        s.push_str("\\end{tabular}\n");
        for (k, v) in &self.outputs {
            let _ = writeln!(s, "\\paragraph{{{}}}", k.replace('_', "\\_"));
            let _ = writeln!(s, "\\[ {} \\]", v.latex);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{base_theta, Poly};

    #[test]
    fn pass_logic_and_json_shape() {
        let mut r = Report::new("m");
        r.push(Check::zero("a", Poly::zero()));
        r.push(Check::zero("b", Poly::gen(&base_theta(0))).informational());
        assert!(r.pass());
        r.push(Check::boolean("c", false));
        assert!(!r.pass());
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["model"], "m");
        assert_eq!(v["checks"][1]["residual_terms"], 1);
        assert_eq!(v["checks"][2]["pass"], false);
        assert!(v["outputs"].as_object().unwrap().is_empty());
    }

    #[test]
    fn text_tags() {
        let mut r = Report::new("m");
        r.push(Check::zero("x", Poly::gen(&base_theta(0))));
        assert!(r.to_text().contains("[FAIL] x (residual terms: 1)"));
        assert!("yaml".parse::<Format>().is_err());
    }
}
