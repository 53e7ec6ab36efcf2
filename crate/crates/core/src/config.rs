//! JSON network description:
//!
//! ```json
//! { "N": 4, "K": 4, "Lambda": 2, "Ms": 1, "Mp": "1/1",
//!   "association": [[1, 2, 3], [4]], "demand": [1, 2, 3, 4], "seed": 0 }
//! ```
//!
//! `Ms` and `Mp` accept numbers or `"a/b"` strings and are read exactly.
//! `demand` defaults to user `k` requesting file `k`; `seed` defaults to 0.

use std::path::Path;

use serde::Deserialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::model::{build_association, validate_demand, Association, DemandVector, NetworkConfig};
use crate::rational::Rational;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(rename = "N")]
    n: usize,
    #[serde(rename = "K")]
    k: usize,
    #[serde(rename = "Lambda")]
    lambda: usize,
    #[serde(rename = "Ms")]
    ms: Value,
    #[serde(rename = "Mp")]
    mp: Value,
    association: Vec<Vec<usize>>,
    demand: Option<Vec<usize>>,
    seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoadedConfig {
    pub network: NetworkConfig,
    pub assoc: Association,
    pub demand: DemandVector,
    pub seed: u64,
}

fn exact(key: &str, v: &Value) -> Result<Rational> {
    let text = match v {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        other => return Err(Error::Parse(format!("{key} must be a number or \"a/b\", got {other}"))),
    };
    text.parse().map_err(|e| Error::Parse(format!("{key} = {text:?}: {e}")))
}

pub fn parse_config(text: &str) -> Result<LoadedConfig> {
    let raw: RawConfig = serde_json::from_str(text)?;
    let network = NetworkConfig::new(raw.n, raw.k, raw.lambda, exact("Ms", &raw.ms)?, exact("Mp", &raw.mp)?)?;
    let assoc = build_association(&network, &raw.association)?;
    let demand = raw.demand.map_or_else(|| DemandVector::identity(raw.k), DemandVector);
    validate_demand(&network, &demand)?;
    Ok(LoadedConfig { network, assoc, demand, seed: raw.seed.unwrap_or(0) })
}

pub fn load_config(path: impl AsRef<Path>) -> Result<LoadedConfig> {
    parse_config(&std::fs::read_to_string(path)?)
}
