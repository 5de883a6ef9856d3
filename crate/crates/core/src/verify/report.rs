use std::fmt::Write as _;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

/// Everything needed to re-run one failing case on its own.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Replay {
    /// A variety that annihilates the determinant although it should not: codimension
    /// below `k`, or codimension `k` and different from the alternating-row-sum space.
    Annihilator { n: usize, k: usize, q: u32, a: Vec<Vec<u32>>, b: Vec<u32> },
    /// A point of a variety expected to annihilate the determinant, with nonzero value.
    NonzeroPoint { n: usize, k: usize, q: u32, a: Vec<Vec<u32>>, b: Vec<u32>, point: Vec<u32> },
    /// The alternating-row-sum space annihilates the determinant for even `k`.
    EvenAnnihilates { n: usize, k: usize, q: u32 },
    /// Row relation `z` whose direct annihilation test disagrees with the expected answer.
    RowRelation { n: usize, k: usize, q: u32, z: Vec<u32>, expected: bool },
    /// Row relation where enumeration and the closed-form condition disagree.
    ZCondition { n: usize, k: usize, q: u32, z: Vec<u32> },
    /// A full codimension-`k` sweep found an unexpected number of annihilators.
    SweepCount { n: usize, k: usize, q: u32, expected: usize, found: usize },
    /// One case of a registered lemma check.
    Lemma { lemma: String, seed: u64, case: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    /// Canonical case key; counterexamples are sorted by it.
    pub key: String,
    pub description: String,
    pub replay: Replay,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Section {
    pub name: String,
    pub cases: u64,
    pub skipped: u64,
    pub failures: u64,
    pub note: Option<String>,
}

impl Section {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerificationReport {
    pub check: String,
    pub params: Vec<(String, String)>,
    pub cases: u64,
    pub points: u64,
    pub sections: Vec<Section>,
    pub counterexamples: Vec<Counterexample>,
    pub notes: Vec<String>,
    pub wall_time: Duration,
}

impl VerificationReport {
    pub fn new(check: &str) -> Self {
        VerificationReport { check: check.to_string(), ..Default::default() }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) {
        self.params.push((key.to_string(), value.to_string()));
    }

    pub fn param_value(&self, key: &str) -> Option<&str> {
        self.params.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty() && self.sections.iter().all(Section::passed)
    }

    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }

    pub(crate) fn finish(&mut self) {
        self.counterexamples.sort_by(|a, b| a.key.cmp(&b.key));
    }

    /// `key: value` lines. Wall time is only included on request so that output is
    /// reproducible.
    pub fn to_text(&self, with_timing: bool) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "check: {}", self.check);
        for (k, v) in &self.params {
            let _ = writeln!(out, "{k}: {v}");
        }
        let _ = writeln!(out, "cases: {}", self.cases);
        let _ = writeln!(out, "points: {}", self.points);
        for s in &self.sections {
            let status = if s.passed() { "pass" } else { "FAIL" };
            let _ = write!(
                out,
                "section: {} {status} cases={} skipped={} failures={}",
                s.name, s.cases, s.skipped, s.failures
            );
            if let Some(note) = &s.note {
                let _ = write!(out, " ({note})");
            }
            out.push('\n');
        }
        let _ = writeln!(out, "counterexamples: {}", self.counterexamples.len());
        for c in &self.counterexamples {
            let _ = writeln!(out, "counterexample: {} {}", c.key, c.description);
            let _ = writeln!(out, "replay: {}", serde_json::to_string(&c.replay).expect("serializable"));
        }
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        if with_timing {
            let _ = writeln!(out, "wall_time_ms: {}", self.wall_time.as_millis());
        }
        let _ = writeln!(out, "result: {}", if self.passed() { "pass" } else { "FAIL" });
        out
    }

    /// One JSON object per line: a `report` record, then `section` and `counterexample`
    /// records.
    pub fn to_records(&self, with_timing: bool) -> String {
        let params: serde_json::Map<String, Value> =
            self.params.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect();
        let mut head = json!({
            "record": "report",
            "check": self.check,
            "params": params,
            "cases": self.cases,
            "points": self.points,
            "counterexamples": self.counterexamples.len(),
            "notes": self.notes,
            "passed": self.passed(),
        });
        if with_timing {
            head["wall_time_ms"] = json!(self.wall_time.as_millis() as u64);
        }
        let mut lines = vec![head.to_string()];
        for s in &self.sections {
            let mut v = serde_json::to_value(s).expect("serializable");
            v["record"] = json!("section");
            lines.push(v.to_string());
        }
        for c in &self.counterexamples {
            let mut v = serde_json::to_value(c).expect("serializable");
            v["record"] = json!("counterexample");
            lines.push(v.to_string());
        }
        lines.join("\n") + "\n"
    }
}

/// Reads the `counterexample` records back out of [`VerificationReport::to_records`] output.
pub fn parse_counterexamples(records: &str) -> Result<Vec<Counterexample>, serde_json::Error> {
    records
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(serde_json::from_str::<Value>)
        .filter(|v| v.as_ref().map_or(true, |v| v["record"] == "counterexample"))
        .map(|v| serde_json::from_value(v?))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> VerificationReport {
        let mut r = VerificationReport::new("demo");
        r.param("n", 3);
        r.cases = 2;
        r.sections.push(Section { name: "part".into(), cases: 2, skipped: 0, failures: 1, note: None });
        r.counterexamples.push(Counterexample {
            key: "z=1,1".into(),
            description: "mismatch".into(),
            replay: Replay::ZCondition { n: 3, k: 1, q: 2, z: vec![1, 1, 0] },
        });
        r
    }

    #[test]
    fn text_lists_everything() {
        let text = sample().to_text(false);
        assert!(text.starts_with("check: demo\nn: 3\ncases: 2\n"));
        assert!(text.contains("section: part FAIL cases=2 skipped=0 failures=1"));
        assert!(text.contains("counterexample: z=1,1 mismatch"));
        assert!(text.ends_with("result: FAIL\n"));
        assert!(!text.contains("wall_time"));
    }

    #[test]
    fn records_round_trip_counterexamples() {
        let r = sample();
        let records = r.to_records(false);
        assert_eq!(records.lines().count(), 3);
        assert_eq!(parse_counterexamples(&records).unwrap(), r.counterexamples);
    }
}
