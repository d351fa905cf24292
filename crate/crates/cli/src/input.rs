//! Reading input documents, with schema errors located by JSON pointer.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde_json::Value;
use serde_path_to_error::{Path as ErrorPath, Segment};

use orbifund::graph::{GraphJson, SerreGraph};
use orbifund::orbispace::{MarkedOrbispace, OrbispaceJson};
use orbifund::quotient::{ActionJson, GroupAction};
use orbifund::Error;

/// Why a command produced no result.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    /// The document does not match its schema.
    Schema { pointer: String, message: String },
    /// Well-formed but describes an invalid object.
    Input(String),
    /// A search bound was hit.
    Unknown(String),
    /// The engine rejected a computation on valid input.
    Engine(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let message = e.to_string();
        match e {
            Error::Exceeded { .. }
            | Error::BudgetExceeded { .. }
            | Error::TooLarge { .. }
            | Error::IndexBoundExceeded { .. } => Failure::Unknown(message),
            Error::InvalidGenerator { .. }
            | Error::UnknownGeneratorName(_)
            | Error::InvalidPermutation(_)
            | Error::NotAnElement
            | Error::UnknownObject(_)
            | Error::NotASubgroup
            | Error::InvalidGroupoid(_)
            | Error::Disconnected
            | Error::InvalidGraph(_)
            | Error::InvalidMorphism(_)
            | Error::InvalidTable(_)
            | Error::InvalidAction(_)
            | Error::InvalidMarking(_)
            | Error::MalformedRelator(_) => Failure::Input(message),
            _ => Failure::Engine(message),
        }
    }
}

/// The kind of object a document describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Graph,
    Action,
    Orbispace,
}

pub enum Input {
    Graph(SerreGraph),
    Action(GroupAction),
    Orbispace(MarkedOrbispace),
}

/// RFC 6901 pointer of a deserialization path.
fn pointer(path: &ErrorPath) -> String {
    let mut out = String::new();
    for seg in path.iter() {
        let token = match seg {
            Segment::Seq { index } => index.to_string(),
            Segment::Map { key } => key.replace('~', "~0").replace('/', "~1"),
            Segment::Enum { variant } => variant.replace('~', "~0").replace('/', "~1"),
            Segment::Unknown => continue,
        };
        out.push('/');
        out.push_str(&token);
    }
    out
}

pub fn read_value(path: &Path) -> Result<Value, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Schema {
        pointer: String::new(),
        message: e.to_string(),
    })
}

fn typed<T: DeserializeOwned>(value: Value) -> Result<T, Failure> {
    serde_path_to_error::deserialize(value).map_err(|e| Failure::Schema {
        pointer: pointer(e.path()),
        message: e.into_inner().to_string(),
    })
}

/// Guesses the kind from the top-level keys.
pub fn detect(value: &Value) -> Result<Kind, Failure> {
    let obj = value.as_object().ok_or_else(|| Failure::Schema {
        pointer: String::new(),
        message: "expected an object".into(),
    })?;
    if obj.contains_key("pi1") {
        Ok(Kind::Orbispace)
    } else if obj.contains_key("group") {
        Ok(Kind::Action)
    } else if obj.contains_key("vertices") || obj.contains_key("edges") {
        Ok(Kind::Graph)
    } else {
        Err(Failure::Schema {
            pointer: String::new(),
            message: "cannot tell graph, action and orbispace apart: expected `vertices`, `group` or `pi1`".into(),
        })
    }
}

pub fn parse(value: Value, kind: Kind) -> Result<Input, Failure> {
    Ok(match kind {
        Kind::Graph => Input::Graph(SerreGraph::from_json(&typed::<GraphJson>(value)?)?),
        Kind::Action => Input::Action(GroupAction::from_json(&typed::<ActionJson>(value)?)?),
        Kind::Orbispace => Input::Orbispace(MarkedOrbispace::from_json(&typed::<OrbispaceJson>(value)?)?),
    })
}

pub fn load(path: &Path, kind: Kind) -> Result<Input, Failure> {
    parse(read_value(path)?, kind)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pointers_locate_the_bad_field() {
        let v: Value = serde_json::from_str(r#"{"vertices":["x"],"edges":[{"id":"e","u":"x","v":3}],"base":"x"}"#).unwrap();
        match typed::<GraphJson>(v) {
            Err(Failure::Schema { pointer, .. }) => assert_eq!(pointer, "/edges/0/v"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn keys_pick_the_kind() {
        let v: Value = serde_json::from_str(r#"{"pi1":{"generators":[]},"markings":[]}"#).unwrap();
        assert_eq!(detect(&v).unwrap(), Kind::Orbispace);
        assert!(detect(&Value::Null).is_err());
    }
}
