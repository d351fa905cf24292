//! Report envelope and JSON renderings of engine values.

use serde::Serialize;
use serde_json::{json, Value};

use orbifund::orbispace::OrbiCover;
use orbifund::{Presentation, Verdict};

/// Outcome of a command, in the order of the exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Yes,
    No,
    Fail,
    Unknown,
    InputError,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Pass | Status::Yes | Status::No => 0,
            Status::Fail => 1,
            Status::Unknown => 2,
            Status::InputError => 64,
        }
    }
}

impl From<Verdict> for Status {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::Pass => Status::Pass,
            Verdict::Fail => Status::Fail,
            Verdict::Unknown => Status::Unknown,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ReportBounds {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_index: Option<usize>,
    pub max_cosets: usize,
    pub word_length_bound: usize,
    pub node_budget: u64,
    pub separation_index: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Drawing {
    pub name: String,
    pub dot: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorInfo {
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pointer: Option<String>,
    pub message: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub bounds: ReportBounds,
    pub seed: u64,
    pub verdict: Status,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dot: Option<Vec<Drawing>>,
}

/// Wire form when every name is a single letter, otherwise names and display strings.
pub fn presentation(p: &Presentation) -> Value {
    match p.to_json() {
        Ok(j) => json!(j),
        Err(_) => {
            let relators: Vec<String> = p.relators().iter().map(|r| r.display(p.names()).to_string()).collect();
            json!({ "generators": p.names(), "relators": relators, "encoding": "display" })
        }
    }
}

pub fn orbicover(c: &OrbiCover) -> Value {
    let o = c.parent();
    let actions: Vec<Vec<usize>> = c.table().action().iter().map(|p| p.images().collect()).collect();
    let points: Vec<Value> = o
        .markings()
        .iter()
        .enumerate()
        .flat_map(|(i, m)| {
            c.points(i).iter().map(move |p| {
                json!({
                    "marking": m.id,
                    "cosets": p.cosets,
                    "hidden_order": p.hidden.order() as u64,
                })
            })
        })
        .collect();
    json!({
        "index": c.index(),
        "normal": c.table().is_normal(),
        "fpr": c.is_fpr(),
        "schematic": c.is_schematic(),
        "generator_actions": actions,
        "points": points,
    })
}
