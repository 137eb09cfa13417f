//! JSON verification reports.
//!
//! Every check carries an anchor: a short statement of the mathematical
//! claim it exercises. The same table appears in the README.

use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::{Map, Value};

pub const SCHEMA: u32 = 1;

pub const ANCHORS: &[(&str, &str)] = &[
    ("positive_root_count", "irreducible root systems: enumerated positive roots match the classification"),
    ("vcd_formula", "virtual cohomological dimension over Z equals r - rk = |positive roots|"),
    ("weyl_order", "finite Coxeter group: enumeration, length function and Poincare polynomial"),
    ("sphere", "Coxeter complex is a homology sphere in which every panel lies in two chambers"),
    ("sign_reversal", "each simple reflection acts by -1 on the standard apartment class"),
    ("chamber_count", "building chambers are counted by the Poincare polynomial at p"),
    ("steinberg_dim", "the Steinberg module has rank p^|positive roots|"),
    ("solomon_tits", "Solomon-Tits: reduced homology of the building is free and concentrated in the top degree"),
    ("thickness", "the building is thick: p+1 chambers on every panel"),
    ("apartment", "the standard apartment is equivariantly isomorphic to the Coxeter complex"),
    ("weyl_isomorphism", "N(H)/H is the Weyl group, with w_alpha H mapped to s_alpha"),
    ("generation", "Solomon-Tits: translates of the standard apartment class generate the Steinberg module"),
    ("inversion", "every apartment class g[S] is negated by g w_alpha g^-1"),
    ("coinvariants", "the coinvariants of the Steinberg module vanish when 2 is invertible"),
    ("unimodular_path", "every rank-one modular symbol is a sum of integral apartment classes"),
    ("integral_inversion", "an integral apartment class is negated by an element of SL_2(Z)"),
];

pub fn anchor(name: &str) -> &'static str {
    ANCHORS.iter().find(|(n, _)| name.starts_with(n)).map(|(_, a)| *a).unwrap_or("")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl From<bool> for Status {
    fn from(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Debug, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub anchor: &'static str,
    pub status: Status,
    pub measured: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
}

/// What a check closure returns.
pub struct Outcome {
    pub status: Status,
    pub measured: Value,
    pub note: Option<String>,
}

impl Outcome {
    pub fn new(ok: bool, measured: Value) -> Self {
        Outcome { status: ok.into(), measured, note: None }
    }

    pub fn skipped(measured: Value, note: impl Into<String>) -> Self {
        Outcome { status: Status::Skipped, measured, note: Some(note.into()) }
    }

    pub fn with_note(mut self, note: Option<String>) -> Self {
        self.note = note;
        self
    }
}

#[derive(Debug, Serialize)]
struct Document<'a> {
    schema: u32,
    artifact: &'static str,
    version: &'static str,
    command: &'a str,
    input: &'a Value,
    result: &'a Map<String, Value>,
    checks: &'a [CheckRecord],
    verdict: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    meta: Option<Value>,
}

pub struct Report {
    command: &'static str,
    input: Value,
    result: Map<String, Value>,
    checks: Vec<CheckRecord>,
    meta: Option<Value>,
}

impl Report {
    pub fn new(command: &'static str, input: Value, meta: Option<Value>) -> Self {
        Report { command, input, result: Map::new(), checks: Vec::new(), meta }
    }

    pub fn set(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("report values serialize");
        self.result.insert(key.to_string(), v);
    }

    /// Runs one check, records it and streams a progress line to stderr.
    pub fn check<E>(&mut self, name: &str, f: impl FnOnce() -> Result<Outcome, E>) -> Result<Status, E> {
        let start = Instant::now();
        let out = f()?;
        let elapsed = start.elapsed().as_millis() as u64;
        let record = CheckRecord {
            name: name.to_string(),
            anchor: anchor(name),
            status: out.status,
            measured: out.measured,
            note: out.note,
            runtime_ms: self.meta.is_some().then_some(elapsed),
        };
        eprintln!("{}", serde_json::json!({"progress": record.name, "status": record.status}));
        let status = record.status;
        self.checks.push(record);
        Ok(status)
    }

    pub fn verdict(&self) -> Status {
        if self.checks.iter().any(|c| c.status == Status::Fail) {
            Status::Fail
        } else {
            Status::Pass
        }
    }

    pub fn to_json(&self) -> String {
        let doc = Document {
            schema: SCHEMA,
            artifact: "chevlab",
            version: env!("CARGO_PKG_VERSION"),
            command: self.command,
            input: &self.input,
            result: &self.result,
            checks: &self.checks,
            verdict: self.verdict(),
            meta: self.meta.clone(),
        };
        serde_json::to_string_pretty(&doc).expect("report serializes")
    }
}

pub fn meta(enabled: bool, cache_dir: Option<&std::path::Path>) -> Option<Value> {
    enabled.then(|| {
        let now = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        serde_json::json!({
            "generated_unix": now,
            "cache_dir": cache_dir.map(|p| p.display().to_string()),
        })
    })
}
