use std::fs;
use std::path::Path;
use std::time::Instant;

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use smoothclass::convex::BinaryMatrix;
use smoothclass::smooth::ClassSpec;
use smoothclass::{parse_rational, Budget, Error, Graph, Rational, VertexSet};

pub const EXIT_INPUT: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;

#[derive(Debug)]
pub enum Failure {
    Input(String),
    Budget(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_budget() {
            Failure::Budget(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

pub type Outcome<T> = std::result::Result<T, Failure>;

pub fn input_error(msg: impl Into<String>) -> Failure {
    Failure::Input(msg.into())
}

/// Per-invocation state: the step budget and a running digest of every input
/// file read.
pub struct Ctx {
    pub budget: Budget,
    hasher: Sha256,
    started: Instant,
    /// Set when a command finishes with a partial result.
    pub exhausted: bool,
}

impl Ctx {
    pub fn new(limit: u64) -> Self {
        Ctx {
            budget: Budget::new(limit),
            hasher: Sha256::new(),
            started: Instant::now(),
            exhausted: false,
        }
    }

    pub fn read(&mut self, path: &Path) -> Outcome<String> {
        let text = fs::read_to_string(path).map_err(|e| input_error(format!("cannot read {}: {e}", path.display())))?;
        self.hasher.update((text.len() as u64).to_le_bytes());
        self.hasher.update(text.as_bytes());
        Ok(text)
    }

    pub fn graph(&mut self, path: &Path) -> Outcome<Graph> {
        let text = self.read(path)?;
        Graph::parse_json(&text).map_err(|e| input_error(format!("{}: {e}", path.display())))
    }

    pub fn matrix(&mut self, path: &Path) -> Outcome<BinaryMatrix> {
        let text = self.read(path)?;
        BinaryMatrix::parse_text(&text).map_err(|e| input_error(format!("{}: {e}", path.display())))
    }

    pub fn spec(&mut self, path: &Path) -> Outcome<ClassSpec> {
        let text = self.read(path)?;
        ClassSpec::parse_json(&text).map_err(|e| input_error(format!("{}: {e}", path.display())))
    }

    pub fn finish(self, command: &str, args: &[String], body: Map<String, Value>) -> Value {
        let mut report = body;
        report.insert("command".into(), json!(command));
        report.insert("args".into(), json!(args));
        report.insert("inputs_digest".into(), json!(hex::encode(self.hasher.finalize())));
        report.insert("elapsed_ms".into(), json!(self.started.elapsed().as_millis() as u64));
        report.insert(
            "budget".into(),
            json!({
                "limit": self.budget.limit(),
                "used": self.budget.used(),
                "exhausted": self.exhausted,
            }),
        );
        report.insert("status".into(), json!(if self.exhausted { "budget_exhausted" } else { "ok" }));
        Value::Object(report)
    }
}

pub fn alpha(s: &str) -> Outcome<Rational> {
    let a = parse_rational(s)?;
    if a <= Rational::from_integer(0.into()) {
        return Err(input_error(format!("alpha must be positive, got {s}")));
    }
    Ok(a)
}

pub fn set(host: &Graph, list: &str) -> Outcome<VertexSet> {
    Ok(VertexSet::parse_list(host, list)?)
}

pub fn names(set: &VertexSet, host: &Graph) -> Value {
    json!(set.names(host))
}

pub fn rational(r: &Rational) -> Value {
    json!(r.to_string())
}

pub fn matrix_rows(m: &BinaryMatrix) -> Value {
    json!(m
        .rows()
        .iter()
        .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>())
}
