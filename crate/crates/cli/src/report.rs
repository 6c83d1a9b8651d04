//! Run reports, as JSON or plain text.

use homnambu::homalg::{CheckMode, CheckReport};
use homnambu::Vector;
use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Debug, Serialize)]
pub struct CounterexampleJson {
    pub identity: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
    /// 1-based basis indices.
    pub tuple: Vec<usize>,
    pub labels: Vec<String>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckJson {
    pub identity: String,
    pub verdict: &'static str,
    pub mode: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub tuples_checked: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<CounterexampleJson>,
}

/// `2*e1 - 1/2*e3`, or `0`.
pub fn render_vector(v: &Vector, labels: &[String]) -> String {
    let mut out = String::new();
    for (k, c) in v.iter() {
        let label = labels.get(*k).cloned().unwrap_or_else(|| format!("e{}", k + 1));
        let neg = (-c).to_string();
        let (sign, mag) = if c.to_string().starts_with('-') { ("-", neg) } else { ("+", c.to_string()) };
        let term = if mag == "1" { label } else { format!("{mag}*{label}") };
        if out.is_empty() {
            out = if sign == "-" { format!("-{term}") } else { term };
        } else {
            out.push_str(&format!(" {sign} {term}"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl CheckJson {
    pub fn new(r: &CheckReport, labels: &[String]) -> Self {
        let (mode, trials, seed) = match r.mode {
            CheckMode::Exhaustive => ("exhaustive", None, None),
            CheckMode::Sampled { trials, seed } => ("sampled", Some(trials), Some(seed)),
        };
        let counterexample = r.counterexample.as_ref().map(|c| CounterexampleJson {
            identity: c.identity.clone(),
            index: c.index,
            tuple: c.tuple.iter().map(|k| k + 1).collect(),
            labels: c.tuple.iter().map(|&k| labels.get(k).cloned().unwrap_or_default()).collect(),
            lhs: render_vector(&c.lhs, labels),
            rhs: render_vector(&c.rhs, labels),
        });
        CheckJson {
            identity: r.identity.clone(),
            verdict: if r.passed() { "pass" } else { "fail" },
            mode,
            trials,
            seed,
            tuples_checked: r.tuples_checked,
            counterexample,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == "pass"
    }

    fn human(&self) -> String {
        let mode = match (self.trials, self.seed) {
            (Some(t), Some(s)) => format!("sampled, {t} trials, seed {s}"),
            _ => self.mode.to_string(),
        };
        let mut s = if self.passed() {
            format!("PASS {} ({mode}, {} tuples)", self.identity, self.tuples_checked)
        } else {
            format!("FAIL {} ({mode}, tuple #{})", self.identity, self.tuples_checked)
        };
        if let Some(c) = &self.counterexample {
            let which = c.index.map(|i| format!(" [i = {i}]")).unwrap_or_default();
            s.push_str(&format!("\n  {}{which} at ({})", c.identity, c.labels.join(", ")));
            s.push_str(&format!("\n  lhs = {}\n  rhs = {}", c.lhs, c.rhs));
        }
        s
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub statement: String,
    pub verdict: String,
    pub checks: Vec<CheckJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub details: Value,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub wall_time_ms: u64,
}

impl RunReport {
    pub fn new(command: String, statement: &str) -> Self {
        RunReport {
            command,
            statement: statement.to_string(),
            verdict: "pass".into(),
            checks: Vec::new(),
            seed: None,
            output: None,
            details: Value::Null,
            notes: Vec::new(),
            wall_time_ms: 0,
        }
    }

    pub fn push(&mut self, check: CheckJson) {
        if !check.passed() {
            self.verdict = "fail".into();
        }
        self.checks.push(check);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn to_human(&self) -> String {
        let mut lines = vec![format!("{} [{}]", self.command, self.statement)];
        lines.extend(self.checks.iter().map(CheckJson::human));
        lines.extend(self.notes.iter().cloned());
        if let Some(out) = &self.output {
            lines.push(format!("wrote {out}"));
        }
        lines.push(format!("verdict: {}", self.verdict));
        lines.join("\n")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use homnambu::FieldSpec;

    #[test]
    fn vectors_render_with_labels() {
        let q = FieldSpec::Rationals;
        let labels: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let v = Vector::from_terms(q, [(0, q.from_i64(-1)), (1, q.ratio(3, 2).unwrap()), (2, q.from_i64(-2))]);
        assert_eq!(render_vector(&v, &labels), "-a + 3/2*b - 2*c");
        assert_eq!(render_vector(&Vector::zero(q), &labels), "0");
    }
}
