//! Hyper-parameter and fitted-parameter maps.
//!
//! Composite estimators expose their components' parameters under dotted
//! paths: `"<component>.<name>"`, nested as deep as the composition goes
//! (for example `"reduce.regressor.k"` inside a pipeline).

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Bool(bool),
    Int(i64),
    Float(f64),
    Str(String),
    None,
}

pub type Params = BTreeMap<String, ParamValue>;

impl ParamValue {
    pub fn as_f64(&self, name: &str) -> Result<f64> {
        match self {
            ParamValue::Float(v) => Ok(*v),
            ParamValue::Int(v) => Ok(*v as f64),
            _ => Err(invalid(name, "expected a number")),
        }
    }

    pub fn as_opt_f64(&self, name: &str) -> Result<Option<f64>> {
        match self {
            ParamValue::None => Ok(None),
            other => other.as_f64(name).map(Some),
        }
    }

    pub fn as_usize(&self, name: &str) -> Result<usize> {
        match self {
            ParamValue::Int(v) if *v >= 0 => Ok(*v as usize),
            ParamValue::Float(v) if *v >= 0.0 && v.fract() == 0.0 => Ok(*v as usize),
            _ => Err(invalid(name, "expected a non-negative integer")),
        }
    }

    pub fn as_bool(&self, name: &str) -> Result<bool> {
        match self {
            ParamValue::Bool(v) => Ok(*v),
            _ => Err(invalid(name, "expected a boolean")),
        }
    }

    pub fn as_str(&self, name: &str) -> Result<&str> {
        match self {
            ParamValue::Str(v) => Ok(v),
            _ => Err(invalid(name, "expected a string")),
        }
    }
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Bool(v) => write!(f, "{v}"),
            ParamValue::Int(v) => write!(f, "{v}"),
            ParamValue::Float(v) => write!(f, "{v}"),
            ParamValue::Str(v) => write!(f, "{v}"),
            ParamValue::None => write!(f, "none"),
        }
    }
}

impl From<bool> for ParamValue {
    fn from(v: bool) -> Self {
        ParamValue::Bool(v)
    }
}

impl From<i64> for ParamValue {
    fn from(v: i64) -> Self {
        ParamValue::Int(v)
    }
}

impl From<usize> for ParamValue {
    fn from(v: usize) -> Self {
        ParamValue::Int(v as i64)
    }
}

impl From<f64> for ParamValue {
    fn from(v: f64) -> Self {
        ParamValue::Float(v)
    }
}

impl From<Option<f64>> for ParamValue {
    fn from(v: Option<f64>) -> Self {
        v.map_or(ParamValue::None, ParamValue::Float)
    }
}

impl From<&str> for ParamValue {
    fn from(v: &str) -> Self {
        ParamValue::Str(v.to_string())
    }
}

pub(crate) fn invalid(name: &str, reason: &str) -> Error {
    Error::InvalidParameter {
        name: name.to_string(),
        reason: reason.to_string(),
    }
}

/// Copy `inner` into `out` with every key prefixed by `"<prefix>."`.
pub fn nest(out: &mut Params, prefix: &str, inner: Params) {
    for (k, v) in inner {
        out.insert(format!("{prefix}.{k}"), v);
    }
}

/// Split `params` into entries addressed to `component` (prefix stripped)
/// and everything else.
pub fn take_nested(params: &Params, component: &str) -> (Params, Params) {
    let prefix = format!("{component}.");
    let mut mine = Params::new();
    let mut rest = Params::new();
    for (k, v) in params {
        match k.strip_prefix(&prefix) {
            Some(stripped) => {
                mine.insert(stripped.to_string(), v.clone());
            }
            None => {
                rest.insert(k.clone(), v.clone());
            }
        }
    }
    (mine, rest)
}

/// Build a [`Params`] map from `(name, value)` pairs.
pub fn params<I, K, V>(items: I) -> Params
where
    I: IntoIterator<Item = (K, V)>,
    K: Into<String>,
    V: Into<ParamValue>,
{
    items
        .into_iter()
        .map(|(k, v)| (k.into(), v.into()))
        .collect()
}
