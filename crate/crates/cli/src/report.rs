//! Run reports: one check line per verification, stable-ordered, emitted as
//! text or machine-readable JSON.
//!
//! The JSON form is byte-identical for identical argv and seed: wall-clock
//! timing is only included when `EQDEC_TIMING=1` is set (text output always
//! shows it).

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckLine {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub seed: u64,
    pub checks: Vec<CheckLine>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

impl RunReport {
    pub fn new(command: impl Into<String>, seed: u64) -> Self {
        RunReport {
            command: command.into(),
            seed,
            checks: Vec::new(),
            timing_ms: None,
        }
    }

    pub fn push(&mut self, name: impl Into<String>, status: Status, detail: impl Into<String>) {
        self.checks.push(CheckLine {
            name: name.into(),
            status,
            detail: detail.into(),
        });
    }

    pub fn pass(&mut self, name: impl Into<String>, detail: impl Into<String>) {
        self.push(name, Status::Pass, detail);
    }

    pub fn fail(&mut self, name: impl Into<String>, detail: impl Into<String>) {
        self.push(name, Status::Fail, detail);
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# {}\n", self.command));
        out.push_str(&format!("seed: {}\n", self.seed));
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skip => "skip",
            };
            if c.detail.is_empty() {
                out.push_str(&format!("[{tag}] {}\n", c.name));
            } else {
                out.push_str(&format!("[{tag}] {}: {}\n", c.name, c.detail));
            }
        }
        if let Some(ms) = self.timing_ms {
            out.push_str(&format!("elapsed: {ms} ms\n"));
        }
        out
    }

    /// Machine-readable form; round-trips through [`from_json`](Self::from_json).
    pub fn to_json(&self) -> String {
        let mut stable = self.clone();
        if std::env::var("EQDEC_TIMING").as_deref() != Ok("1") {
            stable.timing_ms = None;
        }
        serde_json::to_string_pretty(&stable).expect("report serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let mut r = RunReport::new("transport --u [1;0] --v [1;0]", 7);
        r.pass("marginals", "verified to bound 8");
        r.push("window", Status::Skip, "");
        let back = RunReport::from_json(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn json_is_stable_without_timing_env() {
        let mut r = RunReport::new("kl meet", 1);
        r.pass("routes agree", "");
        let mut with_timing = r.clone();
        with_timing.timing_ms = Some(1234);
        assert_eq!(r.to_json(), with_timing.to_json());
    }
}
