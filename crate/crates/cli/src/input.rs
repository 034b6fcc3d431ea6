//! Reading JSON inputs with field-path error messages.

use std::path::Path;

use conjlab::conjugation::{build_named, Conjugation, Named, NamedSpec};
use conjlab::Tolerances;
use serde::de::DeserializeOwned;
use serde_json::Value;

use crate::CliError;

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError(format!("{}: {e}", path.display())))
}

/// Deserializes `value`, naming the offending field on failure.
pub fn from_value<T: DeserializeOwned>(value: Value, source: &str) -> Result<T, CliError> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        if path == "." {
            CliError(format!("{source}: {}", e.inner()))
        } else {
            CliError(format!("{source}: {path}: {}", e.inner()))
        }
    })
}

pub fn load_value(path: &Path) -> Result<Value, CliError> {
    serde_json::from_str(&read(path)?)
        .map_err(|e| CliError(format!("{}: malformed JSON: {e}", path.display())))
}

pub fn load<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    from_value(load_value(path)?, &path.display().to_string())
}

/// A named spec, or a bare matrix object (no `kind`) taken as the matrix
/// representation.
pub fn spec_from_value(mut value: Value, source: &str) -> Result<NamedSpec, CliError> {
    if let Value::Object(map) = &mut value {
        // Tagged enums buffer their content and lose field paths, so the
        // common matrix form is parsed directly.
        match map.get("kind") {
            None => return Ok(NamedSpec::Matrix(from_value(value, source)?)),
            Some(Value::String(k)) if k == "matrix" => {
                map.remove("kind");
                return Ok(NamedSpec::Matrix(from_value(value, source)?));
            }
            Some(Value::String(k)) => {
                let kind = k.clone();
                return from_value(value, source)
                    .map_err(|CliError(m)| CliError(format!("{m} (kind \"{kind}\")")));
            }
            _ => {}
        }
    }
    from_value(value, source)
}

pub fn named(spec: &NamedSpec, source: &str, tol: &Tolerances) -> Result<Named, CliError> {
    build_named(spec, tol).map_err(|e| CliError(format!("{source}: {e}")))
}

pub fn conjugation_from_spec(
    spec: &NamedSpec,
    source: &str,
    tol: &Tolerances,
) -> Result<Conjugation, CliError> {
    named(spec, source, tol)?
        .into_conjugation(tol)
        .map_err(|e| CliError(format!("{source}: not a conjugation: {e}")))
}

pub fn load_conjugation(path: &Path, tol: &Tolerances) -> Result<Conjugation, CliError> {
    let source = path.display().to_string();
    let spec = spec_from_value(load_value(path)?, &source)?;
    conjugation_from_spec(&spec, &source, tol)
}
