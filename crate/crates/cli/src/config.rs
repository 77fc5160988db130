use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use schwartzkit::battery::{factorization_battery, pairing_battery, Target};
use schwartzkit::hadamard::ZeroSequence;
use schwartzkit::Grid;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    VerifyMainTheorem,
    Factorize,
    Delta,
    Poisson,
    Growth,
    Suite,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::VerifyMainTheorem => "verify-main-theorem",
            Command::Factorize => "factorize",
            Command::Delta => "delta",
            Command::Poisson => "poisson",
            Command::Growth => "growth",
            Command::Suite => "suite",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    #[default]
    Schwartz,
    Compact,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    #[serde(rename = "L")]
    pub half_width: f64,
    #[serde(rename = "N")]
    pub len: usize,
}

impl GridSpec {
    pub fn new(half_width: f64, len: usize) -> Self {
        Self { half_width, len }
    }

    pub fn grid(&self) -> Result<Grid, ConfigError> {
        Grid::new(self.half_width, self.len).map_err(|e| ConfigError::new("grid", e.to_string()))
    }
}

/// Everything a run needs. Fields left out fall back to per-command
/// defaults; the report echoes the resolved values.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    /// Zero-sequence spec, see [`parse_zeros`].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zeros: Option<String>,
    #[serde(default, rename = "J", skip_serializing_if = "Option::is_none")]
    pub terms: Option<usize>,
    #[serde(default, rename = "N_factors", skip_serializing_if = "Option::is_none")]
    pub factors: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flavor: Option<Flavor>,
    /// Target labels as printed by the battery, e.g. `gaussian`, `bump_r1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub battery: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<Vec<f64>>,
    /// Seminorm orders `(m, n)` for the certificate.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orders: Option<(u32, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

macro_rules! take {
    ($dst:ident, $src:ident, $($f:ident),*) => {
        $(if $src.$f.is_some() { $dst.$f = $src.$f; })*
    };
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(text).map_err(|e| ConfigError::new("config", e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::new("config", format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Fields set in `other` replace those in `self`.
    pub fn overridden_by(mut self, other: RunConfig) -> Self {
        take!(
            self, other, command, grid, zeros, terms, factors, sigma, flavor, battery, bounds, orders,
            tolerance, out, format, seed
        );
        self
    }
}

/// A configuration that cannot be dispatched.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

impl std::error::Error for ConfigError {}

fn parse_scale(s: &str) -> Option<f64> {
    let s = s.trim();
    if s == "pi" {
        return Some(PI);
    }
    if let Some(d) = s.strip_prefix("pi/") {
        return d.parse::<f64>().ok().map(|d| PI / d);
    }
    if let Some(m) = s.strip_suffix("pi").or_else(|| s.strip_suffix("*pi")) {
        return m.trim_end_matches('*').parse::<f64>().ok().map(|m| m * PI);
    }
    s.parse().ok()
}

fn parse_list(text: &str) -> Result<Vec<f64>, ConfigError> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| parse_scale(t).ok_or_else(|| ConfigError::new("zeros", format!("`{t}` is not a number"))))
        .collect()
}

/// Zero sequences on the command line:
///
/// - `linear:S[:COUNT]` for `a_n = S n`, `odd:S[:COUNT]` for `a_n = S(2n − 1)`;
///   `S` is a number, `pi`, `Kpi` or `pi/K`
/// - `explicit:a,b,…` or a bare list `a,b,…`
/// - a zero-sequence JSON document, inline or as `@FILE`; the file may also
///   hold a plain list of numbers
///
/// Parametric families without a count get
/// [`ZeroSequence::default_count`] for the half-width `l`.
pub fn parse_zeros(spec: &str, l: f64) -> Result<ZeroSequence, ConfigError> {
    let err = |m: String| ConfigError::new("zeros", m);
    if let Some(path) = spec.strip_prefix('@') {
        let text = std::fs::read_to_string(path).map_err(|e| err(format!("{path}: {e}")))?;
        let trimmed = text.trim_start();
        if trimmed.starts_with('{') {
            return ZeroSequence::from_json(trimmed).map_err(|e| err(format!("{path}: {e}")));
        }
        let values = parse_list(&text).map_err(|e| err(format!("{path}: {}", e.message)))?;
        return ZeroSequence::explicit(values).map_err(|e| err(format!("{path}: {e}")));
    }
    if spec.trim_start().starts_with('{') {
        return ZeroSequence::from_json(spec).map_err(|e| err(e.to_string()));
    }
    let mut parts = spec.splitn(3, ':');
    let head = parts.next().unwrap_or_default();
    match head {
        "linear" | "odd" => {
            let s = parts
                .next()
                .and_then(parse_scale)
                .ok_or_else(|| err(format!("`{spec}` needs a scale")))?;
            let count = match parts.next() {
                Some(c) => c.parse().map_err(|_| err(format!("`{c}` is not a count")))?,
                None => ZeroSequence::default_count(s, l),
            };
            let z = if head == "linear" {
                ZeroSequence::linear(s, count)
            } else {
                ZeroSequence::odd(s, count)
            };
            z.map_err(|e| err(e.to_string()))
        }
        "explicit" => {
            let rest = spec.strip_prefix("explicit:").unwrap_or_default();
            ZeroSequence::explicit(parse_list(rest)?).map_err(|e| err(e.to_string()))
        }
        _ => ZeroSequence::explicit(parse_list(spec)?).map_err(|e| err(e.to_string())),
    }
}

/// Looks up a battery target by its label.
pub fn parse_target(label: &str) -> Result<Target, ConfigError> {
    let mut known = factorization_battery();
    known.extend(pairing_battery());
    known.push(Target::Bump { radius: 0.5 });
    if label == "bump" {
        return Ok(Target::Bump { radius: 1.0 });
    }
    known
        .into_iter()
        .find(|t| t.label() == label)
        .ok_or_else(|| ConfigError::new("battery", format!("unknown target `{label}`")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_specs() {
        let z = parse_zeros("linear:pi", 24.0).unwrap();
        assert_eq!(z.scale(), Some(PI));
        assert_eq!(z.count(), ZeroSequence::default_count(PI, 24.0));
        assert_eq!(parse_zeros("odd:pi/2:50", 8.0).unwrap().count(), 50);
        assert_eq!(parse_zeros("1,2", 8.0).unwrap().values(), vec![1.0, 2.0]);
        assert_eq!(
            parse_zeros("explicit:1, 2pi", 8.0).unwrap().values(),
            vec![1.0, 2.0 * PI]
        );
        assert!(parse_zeros("linear:", 8.0).is_err());
        assert!(parse_zeros("2,1", 8.0).is_err());
        assert!(parse_zeros("1,x", 8.0).is_err());
        let doc = r#"{"kind": "odd", "scale": 2, "count": 3}"#;
        assert_eq!(parse_zeros(doc, 8.0).unwrap().values(), vec![2.0, 6.0, 10.0]);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(RunConfig::from_json(r#"{"grid": {"L": 8, "N": 64}}"#).is_ok());
        assert!(RunConfig::from_json(r#"{"gird": {"L": 8, "N": 64}}"#).is_err());
        assert!(RunConfig::from_json(r#"{"grid": {"L": 8, "N": 64, "M": 1}}"#).is_err());
    }

    #[test]
    fn flags_override_the_file() {
        let file = RunConfig::from_json(r#"{"J": 3, "N_factors": 5, "seed": 1}"#).unwrap();
        let flags = RunConfig {
            terms: Some(4),
            ..Default::default()
        };
        let c = file.overridden_by(flags);
        assert_eq!((c.terms, c.factors, c.seed), (Some(4), Some(5), Some(1)));
    }

    #[test]
    fn targets() {
        assert_eq!(parse_target("bump").unwrap(), Target::Bump { radius: 1.0 });
        assert_eq!(parse_target("x_over_sinh").unwrap(), Target::XOverSinh);
        assert!(parse_target("cauchy").is_err());
    }
}
