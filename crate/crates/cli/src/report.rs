//! The JSON envelope shared by every subcommand.

use hypermatch::Error;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::args::Cli;

#[derive(Serialize, Debug, Clone, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum BudgetStatus {
    NotApplicable,
    Within,
    Exceeded,
}

#[derive(Debug)]
pub struct Envelope {
    /// Formula id or oracle name that produced the numbers.
    pub source: String,
    pub node_cap: Option<u64>,
    pub budget: BudgetStatus,
    pub witness_files: Vec<String>,
    pub wall_ms: Option<u128>,
}

impl Envelope {
    pub fn new(source: impl Into<String>) -> Self {
        Envelope {
            source: source.into(),
            node_cap: None,
            budget: BudgetStatus::NotApplicable,
            witness_files: Vec::new(),
            wall_ms: None,
        }
    }

    pub fn searched(mut self, cap: u64) -> Self {
        self.node_cap = Some(cap);
        self.budget = BudgetStatus::Within;
        self
    }
}

fn head(cli: &Cli, args: &[String]) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("tool".into(), json!("hypermatch"));
    m.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    m.insert("command".into(), json!(args));
    m.insert("seed".into(), json!(cli.global.seed));
    m.insert("threads".into(), json!(cli.global.threads));
    m
}

/// Merges the envelope with the result object; keys are emitted sorted.
pub fn render(cli: &Cli, args: &[String], env: &Envelope, result: Value) -> String {
    let mut m = head(cli, args);
    m.insert("source".into(), json!(env.source));
    m.insert(
        "budget".into(),
        json!({ "status": env.budget, "node_cap": env.node_cap }),
    );
    m.insert("witness_files".into(), json!(env.witness_files));
    if let Some(ms) = env.wall_ms {
        m.insert("wall_ms".into(), json!(ms));
    }
    match result {
        Value::Object(r) => m.extend(r),
        other => {
            m.insert("result".into(), other);
        }
    }
    serde_json::to_string_pretty(&Value::Object(m)).expect("json values serialize") + "\n"
}

pub fn error_json(cli: &Cli, args: &[String], err: &Error) -> String {
    let mut m = head(cli, args);
    let (kind, partial) = match err {
        Error::InvalidInput(_) => ("invalid_input", None),
        Error::Parse { .. } => ("parse", None),
        Error::ResourceLimit { partial, .. } => ("resource_limit", *partial),
        Error::Indeterminate(_) => ("indeterminate", None),
    };
    m.insert(
        "error".into(),
        json!({ "kind": kind, "message": err.to_string(), "partial": partial }),
    );
    if let Error::ResourceLimit { .. } = err {
        m.insert("budget".into(), json!({ "status": BudgetStatus::Exceeded }));
    }
    serde_json::to_string_pretty(&Value::Object(m)).expect("json values serialize")
}
