//! JSON form of point configurations:
//! `{"family": ["{1,2,3}", ...], "lines": {"{1,2,3}": [0, 1, 2], ...}}`.
//!
//! `family` may also be the string `"full"`. Values are integers or strings
//! such as `"-3/4"`; floating point numbers are rejected.

use std::collections::BTreeMap;

use genus0_core::points::{LineRep, PointConfig};
use genus0_core::{Family, GroundSet, Subset};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("malformed configuration: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Bad(String),
    #[error(transparent)]
    Core(#[from] genus0_core::Error),
}

#[derive(Serialize, Deserialize)]
struct Raw {
    family: Value,
    lines: BTreeMap<String, Vec<Value>>,
}

fn rational(v: &Value) -> Result<BigRational, ConfigError> {
    match v {
        Value::Number(k) if k.is_i64() => Ok(BigRational::from_integer(k.as_i64().expect("checked").into())),
        Value::String(s) => s.trim().parse().map_err(|_| ConfigError::Bad(format!("{s:?} is not a rational"))),
        other => Err(ConfigError::Bad(format!("{other} is not an exact value"))),
    }
}

pub fn parse_config(text: &str, ground: GroundSet) -> Result<PointConfig, ConfigError> {
    let raw: Raw = serde_json::from_str(text)?;
    let family = match &raw.family {
        Value::String(s) if s == "full" => Family::power(ground),
        Value::String(s) => Family::parse(ground, s)?,
        Value::Array(items) => {
            let sets = items
                .iter()
                .map(|v| match v {
                    Value::String(s) => s.parse::<Subset>().map_err(ConfigError::from),
                    other => Err(ConfigError::Bad(format!("{other} is not a subset"))),
                })
                .collect::<Result<Vec<_>, _>>()?;
            Family::new(ground, sets)?
        }
        other => return Err(ConfigError::Bad(format!("{other} is not a family"))),
    };
    let mut lines = BTreeMap::new();
    for (key, vals) in &raw.lines {
        let t: Subset = key.parse()?;
        ground.check(t)?;
        let vals = vals.iter().map(rational).collect::<Result<Vec<_>, _>>()?;
        lines.insert(t, LineRep::new(t, &vals)?);
    }
    Ok(PointConfig::new(family, lines)?)
}

/// Canonical JSON, values as strings.
pub fn config_to_json(c: &PointConfig) -> String {
    let lines = c
        .lines()
        .iter()
        .map(|(t, l)| (t.to_string(), l.values().iter().map(|v| Value::String(v.to_string())).collect()))
        .collect();
    let raw = Raw {
        family: Value::Array(c.family().parts().iter().map(|t| Value::String(t.to_string())).collect()),
        lines,
    };
    serde_json::to_string(&raw).expect("plain data")
}
