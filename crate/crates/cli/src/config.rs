//! Run configuration: everything needed to reproduce one invocation.
//!
//! The config file format is flat `key = value`, one pair per line, `#`
//! comments. Values are JSON scalars (`4`, `0.5`, `true`, `"inside"`); bare
//! words are read as strings.

use std::fmt;
use std::str::FromStr;

use brickwork_core::analytics::Region;
use brickwork_core::memory_lab::Placement;
use brickwork_core::qudit_sim::EntropyKind;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Purity,
    MiProfile,
    ProjectorStats,
    Packing,
    Memory,
    Bounds,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Which unitary perturbs the chosen brick in `memory`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum PerturbationKind {
    /// Diagonal clock matrix on the brick (traceless).
    Clock,
    Identity,
    /// A fixed Haar-random unitary drawn from the run seed.
    Haar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum BoundName {
    Thermalization,
    ProbOverlap,
    GateCount,
    Complexity,
    MiGate,
    MiContinuity,
    HolographicComplexity,
    HolographicEntropy,
    PackingDesign,
    PackingFull,
    PackingRank,
    PackingFidelity,
    ExtremalNorm,
    ExtremalFidelity,
    Prop2,
}

/// A list of depths: `3`, `1,2,4` or the inclusive range `1..3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DepthSpec {
    List(Vec<usize>),
    Range(usize, usize),
}

impl DepthSpec {
    pub fn values(&self) -> Vec<usize> {
        match self {
            DepthSpec::List(v) => v.clone(),
            DepthSpec::Range(a, b) => (*a..=*b).collect(),
        }
    }

    pub fn single(&self) -> Result<usize, CliError> {
        match self.values().as_slice() {
            [t] => Ok(*t),
            _ => Err(CliError::invalid(format!("this command takes a single depth, got {self}"))),
        }
    }
}

impl FromStr for DepthSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("bad depth '{t}' in '{s}'"));
        if let Some((a, b)) = s.split_once("..") {
            let (a, b) = (num(a)?, num(b)?);
            if a > b {
                return Err(format!("empty depth range {s}"));
            }
            return Ok(DepthSpec::Range(a, b));
        }
        let v = s.split(',').map(num).collect::<Result<Vec<_>, _>>()?;
        Ok(DepthSpec::List(v))
    }
}

impl fmt::Display for DepthSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DepthSpec::Range(a, b) => write!(f, "{a}..{b}"),
            DepthSpec::List(v) => {
                let parts: Vec<String> = v.iter().map(|t| t.to_string()).collect();
                f.write_str(&parts.join(","))
            }
        }
    }
}

impl Serialize for DepthSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for DepthSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        // Accept `3` as well as `"1..3"`.
        match Value::deserialize(d)? {
            Value::String(s) => s.parse().map_err(serde::de::Error::custom),
            Value::Number(n) => n.to_string().parse().map_err(serde::de::Error::custom),
            other => Err(serde::de::Error::custom(format!("bad depth {other}"))),
        }
    }
}

/// Every parameter of a run. Unset fields take per-command defaults when
/// the run is resolved; the resolved config is what output headers embed.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    #[serde(rename = "bigQ", skip_serializing_if = "Option::is_none")]
    pub big_q: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sites: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interval_start: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interval_len: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<DepthSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mem_cap: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub assert: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub allow_lightcone: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub entropy: Option<EntropyKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pairs: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_draws: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub placement: Option<Placement>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub layer: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bond: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub perturbation: Option<PerturbationKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<BoundName>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps_design: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gates: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub poly_exponent: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub entropy_density: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inv_temp: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub region: Option<Region>,
}

fn to_map(cfg: &RunConfig) -> Map<String, Value> {
    match serde_json::to_value(cfg).expect("config serializes") {
        Value::Object(m) => m,
        _ => unreachable!("config is a struct"),
    }
}

fn from_map(map: Map<String, Value>) -> Result<RunConfig, CliError> {
    serde_json::from_value(Value::Object(map)).map_err(|e| CliError::invalid(format!("bad configuration: {e}")))
}

impl RunConfig {
    /// Fields set in `over` replace those in `self`.
    pub fn overlay(&self, over: &RunConfig) -> Result<RunConfig, CliError> {
        let mut base = to_map(self);
        base.extend(to_map(over));
        from_map(base)
    }

    /// Flat `key = value` rendering, keys in declaration order.
    pub fn to_file_string(&self) -> String {
        to_map(self).iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }

    pub fn parse_file(text: &str) -> Result<RunConfig, CliError> {
        let mut map = Map::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::invalid(format!("config line {}: expected key = value", n + 1)))?;
            let (k, v) = (k.trim().replace('-', "_"), v.trim());
            let key = if k == "bigq" { "bigQ".to_string() } else { k };
            let value = serde_json::from_str(v).unwrap_or_else(|_| Value::String(v.to_string()));
            if map.insert(key.clone(), value).is_some() {
                return Err(CliError::invalid(format!("config key '{key}' given twice")));
            }
        }
        from_map(map)
    }

    pub fn to_json(&self) -> Value {
        Value::Object(to_map(self))
    }
}
