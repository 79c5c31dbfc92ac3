//! Flat `key=value` scenario config files.
//!
//! ```text
//! # scenario 3, one cell
//! n_agents=100
//! tv_fraction=0.7
//! wise_fraction=0.3
//! tolerance=0.2
//! base_seed=42
//! ```
//!
//! Recognized keys and their defaults when absent:
//!
//! | key               | default |
//! |-------------------|---------|
//! | `n_agents`        | 100     |
//! | `tv_fraction`     | 0       |
//! | `wise_fraction`   | 0       |
//! | `tolerance`       | 0.5     |
//! | `convergence`     | 0.5     |
//! | `media_welfare`   | 0.3     |
//! | `media_security`  | 0.8     |
//! | `expert_welfare`  | 0.8     |
//! | `expert_security` | 0.3     |
//! | `turns`           | 100     |
//! | `replications`    | 10      |
//! | `base_seed`       | 0       |
//! | `m_attach`        | 2       |
//! | `gossip_exchanges`| 1       |
//!
//! Blank lines and lines starting with `#` are ignored. Unknown or repeated
//! keys are errors.

use std::fmt::Write as _;
use std::str::FromStr;

use thiserror::Error;

use crate::engine::{ConfigError, ScenarioConfig};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("line {line}: expected `key=value`")]
    Syntax { line: usize },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: duplicate key `{key}`")]
    DuplicateKey { line: usize, key: String },
    #[error("line {line}: cannot parse `{value}` for `{key}`")]
    InvalidValue { line: usize, key: String, value: String },
    #[error("validation error: {0}")]
    Validation(#[from] ConfigError),
}

impl ParseError {
    /// Key the error is about, if any.
    pub fn key(&self) -> Option<&str> {
        match self {
            ParseError::Syntax { .. } => None,
            ParseError::UnknownKey { key, .. }
            | ParseError::DuplicateKey { key, .. }
            | ParseError::InvalidValue { key, .. } => Some(key),
            ParseError::Validation(e) => e.key(),
        }
    }
}

pub const CONFIG_KEYS: [&str; 14] = [
    "n_agents",
    "tv_fraction",
    "wise_fraction",
    "tolerance",
    "convergence",
    "media_welfare",
    "media_security",
    "expert_welfare",
    "expert_security",
    "turns",
    "replications",
    "base_seed",
    "m_attach",
    "gossip_exchanges",
];

fn parse_value<T: FromStr>(line: usize, key: &str, value: &str) -> Result<T, ParseError> {
    value.parse().map_err(|_| ParseError::InvalidValue {
        line,
        key: key.to_string(),
        value: value.to_string(),
    })
}

/// Parses and validates a config.
pub fn parse_config(text: &str) -> Result<ScenarioConfig, ParseError> {
    let mut cfg = ScenarioConfig::default();
    let mut seen = [false; CONFIG_KEYS.len()];

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (key, value) = trimmed.split_once('=').ok_or(ParseError::Syntax { line })?;
        let (key, value) = (key.trim(), value.trim());
        let slot = CONFIG_KEYS
            .iter()
            .position(|k| *k == key)
            .ok_or_else(|| ParseError::UnknownKey {
                line,
                key: key.to_string(),
            })?;
        if std::mem::replace(&mut seen[slot], true) {
            return Err(ParseError::DuplicateKey {
                line,
                key: key.to_string(),
            });
        }
        match key {
            "n_agents" => cfg.n_agents = parse_value(line, key, value)?,
            "tv_fraction" => cfg.tv_fraction = parse_value(line, key, value)?,
            "wise_fraction" => cfg.wise_fraction = parse_value(line, key, value)?,
            "tolerance" => cfg.tolerance = parse_value(line, key, value)?,
            "convergence" => cfg.convergence = parse_value(line, key, value)?,
            "media_welfare" => cfg.media_message.welfare = parse_value(line, key, value)?,
            "media_security" => cfg.media_message.security = parse_value(line, key, value)?,
            "expert_welfare" => cfg.expert_message.welfare = parse_value(line, key, value)?,
            "expert_security" => cfg.expert_message.security = parse_value(line, key, value)?,
            "turns" => cfg.turns = parse_value(line, key, value)?,
            "replications" => cfg.replications = parse_value(line, key, value)?,
            "base_seed" => cfg.base_seed = parse_value(line, key, value)?,
            "m_attach" => cfg.m_attach = parse_value(line, key, value)?,
            "gossip_exchanges" => cfg.gossip_exchanges = parse_value(line, key, value)?,
            _ => unreachable!("key list and match arms agree"),
        }
    }

    cfg.validate()?;
    Ok(cfg)
}

/// Writes every key. Floats use the shortest representation that parses
/// back to the same value. `gossip_exchanges` is only written when it differs
/// from its default.
pub fn serialize_config(cfg: &ScenarioConfig) -> String {
    let mut out = String::new();
    let mut put = |k: &str, v: &dyn std::fmt::Display| {
        let _ = writeln!(out, "{k}={v}");
    };
    put("n_agents", &cfg.n_agents);
    put("tv_fraction", &cfg.tv_fraction);
    put("wise_fraction", &cfg.wise_fraction);
    put("tolerance", &cfg.tolerance);
    put("convergence", &cfg.convergence);
    put("media_welfare", &cfg.media_message.welfare);
    put("media_security", &cfg.media_message.security);
    put("expert_welfare", &cfg.expert_message.welfare);
    put("expert_security", &cfg.expert_message.security);
    put("turns", &cfg.turns);
    put("replications", &cfg.replications);
    put("base_seed", &cfg.base_seed);
    put("m_attach", &cfg.m_attach);
    if cfg.gossip_exchanges != 1 {
        put("gossip_exchanges", &cfg.gossip_exchanges);
    }
    out
}
