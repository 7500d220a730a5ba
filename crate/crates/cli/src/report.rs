use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use sha2::{Digest, Sha256};

pub const TOOL: &str = "segal-lab";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Undefined,
    Info,
}

impl Status {
    pub fn of(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    fn tag(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Undefined => "n/a ",
            Status::Info => "info",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Line {
    pub status: Status,
    pub text: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Section {
    pub title: String,
    pub lines: Vec<Line>,
    /// Structured detail for the machine form only.
    #[serde(skip_serializing_if = "serde_json::Value::is_null")]
    pub data: serde_json::Value,
}

impl Section {
    pub fn new(title: impl Into<String>) -> Section {
        Section {
            title: title.into(),
            lines: Vec::new(),
            data: serde_json::Value::Null,
        }
    }

    pub fn push(&mut self, status: Status, text: impl Into<String>) {
        self.lines.push(Line {
            status,
            text: text.into(),
        });
    }

    pub fn with_data(mut self, data: impl Serialize) -> Section {
        self.data = serde_json::to_value(data).expect("plain data");
        self
    }

    pub fn failed(&self) -> bool {
        self.lines.iter().any(|l| l.status == Status::Fail)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Input {
    pub source: String,
    pub sha256: String,
}

impl Input {
    pub fn new(source: impl Into<String>, bytes: &[u8]) -> Input {
        Input {
            source: source.into(),
            sha256: digest(bytes),
        }
    }
}

pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<Input>,
    pub seed: u64,
    pub flags: BTreeMap<String, String>,
    pub sections: Vec<Section>,
    pub caveats: Vec<String>,
    pub passed: bool,
}

impl Report {
    pub fn new(command: &str, seed: u64) -> Report {
        Report {
            tool: TOOL,
            version: VERSION,
            command: command.to_string(),
            input: None,
            seed,
            flags: BTreeMap::new(),
            sections: Vec::new(),
            caveats: Vec::new(),
            passed: true,
        }
    }

    pub fn flag(&mut self, key: &str, value: impl ToString) {
        self.flags.insert(key.to_string(), value.to_string());
    }

    pub fn add(&mut self, s: Section) {
        if s.failed() {
            self.passed = false;
        }
        self.sections.push(s);
    }

    pub fn human(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {} {}", self.tool, self.version, self.command);
        if let Some(i) = &self.input {
            let _ = writeln!(out, "input: {} sha256:{}", i.source, i.sha256);
        }
        let _ = writeln!(out, "seed: {}", self.seed);
        if !self.flags.is_empty() {
            let flags: Vec<String> = self.flags.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let _ = writeln!(out, "flags: {}", flags.join(" "));
        }
        for s in &self.sections {
            let _ = writeln!(out, "== {} ==", s.title);
            for l in &s.lines {
                let _ = writeln!(out, "  [{}] {}", l.status.tag(), l.text);
            }
        }
        for c in &self.caveats {
            let _ = writeln!(out, "caveat: {c}");
        }
        let _ = writeln!(out, "result: {}", if self.passed { "pass" } else { "FAIL" });
        out
    }

    pub fn machine(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data");
        s.push('\n');
        s
    }
}
