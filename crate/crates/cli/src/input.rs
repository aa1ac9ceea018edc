//! Loading JSON arguments given inline or as file paths.

use std::fmt;
use std::path::Path;

use k3rm_core::kquad::{FormDescriptor, KQuadraticForm};
use k3rm_core::numfield::FieldDescriptor;
use k3rm_core::{FieldElement, NumberField};
use serde_json::Value;

/// Failure of a subcommand: bad invocation or input (exit 1) or a domain error (exit 2).
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(k3rm_core::Error),
}

impl From<k3rm_core::Error> for CliError {
    fn from(e: k3rm_core::Error) -> Self {
        CliError::Domain(e)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Domain(e) => write!(f, "{e}"),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

fn looks_inline(arg: &str) -> bool {
    matches!(arg.trim_start().chars().next(), Some('{') | Some('[') | Some('"'))
}

/// Inline JSON when the argument starts like JSON, otherwise a file path.
pub fn load_json(arg: &str) -> CliResult<Value> {
    let text = if looks_inline(arg) {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| CliError::Usage(format!("cannot read {arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("invalid JSON in {arg}: {e}")))
}

fn decode<T: serde::de::DeserializeOwned>(v: Value, what: &str) -> CliResult<T> {
    serde_json::from_value(v).map_err(|e| CliError::Usage(format!("malformed {what} descriptor: {e}")))
}

/// A field given as a descriptor (inline or file), a coefficient array, or a polynomial like `x^2-2`.
pub fn load_field(arg: &str) -> CliResult<(NumberField, Value)> {
    let value = if looks_inline(arg) || Path::new(arg).is_file() {
        load_json(arg)?
    } else {
        Value::String(arg.to_string())
    };
    let descriptor: FieldDescriptor = match &value {
        Value::Object(_) => decode(value.clone(), "field")?,
        other => decode(serde_json::json!({ "minpoly": other }), "field")?,
    };
    Ok((descriptor.to_field()?, value))
}

/// A form descriptor over `field`, or over the descriptor's own field when none is given.
pub fn load_form(arg: &str, field: Option<&NumberField>) -> CliResult<(KQuadraticForm, Value)> {
    let value = load_json(arg)?;
    let descriptor: FormDescriptor = decode(value.clone(), "form")?;
    let form = match field {
        Some(f) => descriptor.to_form_over(f)?,
        None => descriptor.to_form()?,
    };
    Ok((form, value))
}

/// An element as a coordinate array (inline JSON), a rational `p/q`, or a polynomial in `a`.
pub fn parse_element(field: &NumberField, arg: &str) -> CliResult<FieldElement> {
    if looks_inline(arg) {
        let v = load_json(arg)?;
        let entry: k3rm_core::kquad::EntryRepr = decode(v, "element")?;
        return Ok(entry.to_element(field)?);
    }
    Ok(field.parse_element(arg)?)
}
