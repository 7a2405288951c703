//! Flat `key = value` run configuration with `#` comments.

use crate::algebra::{make_field, parse_expr, AlgebraError, ExactRational, FieldDescriptor, Place, RationalFunction};
use crate::drinfeld::DrinfeldModule;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
    #[error("{key}: parse error at position {pos}: {msg}")]
    Expr { key: String, pos: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "text" => Ok(OutputFormat::Text),
            "csv" => Ok(OutputFormat::Csv),
            _ => Err(format!("format must be text or csv, got '{s}'")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Run,
    Sweep,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PlaceSpec {
    Auto,
    List(Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub p: u32,
    pub s: u32,
    pub a1: String,
    pub a2: String,
    pub places: PlaceSpec,
    pub n_max: u32,
    pub oracle: bool,
    /// `None` picks the default from the predicted valuations.
    pub oracle_precision: Option<ExactRational>,
    pub oracle_ext_cap: u32,
    pub mode: Mode,
    pub szpiro_samples: usize,
    pub seed: u64,
    /// Degree bound for numerators and denominators in the sweep.
    pub sweep_degree: usize,
    pub format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            p: 3,
            s: 1,
            a1: String::new(),
            a2: String::new(),
            places: PlaceSpec::Auto,
            n_max: 3,
            oracle: false,
            oracle_precision: None,
            oracle_ext_cap: 12,
            mode: Mode::Run,
            szpiro_samples: 0,
            seed: 1,
            sweep_degree: 2,
            format: OutputFormat::Text,
        }
    }
}

fn on_off(v: &str) -> Result<bool, String> {
    match v {
        "on" | "true" | "yes" => Ok(true),
        "off" | "false" | "no" => Ok(false),
        _ => Err(format!("expected on/off, got '{v}'")),
    }
}

fn number<T: FromStr>(v: &str) -> Result<T, String> {
    v.parse().map_err(|_| format!("not a valid number: '{v}'"))
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut c = RunConfig::default();
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: String| ConfigError::Line { line: k + 1, msg };
            let (key, value) = line.split_once('=').ok_or_else(|| bad(format!("expected key = value, got '{line}'")))?;
            let (key, value) = (key.trim(), value.trim());
            let r: Result<(), String> = match key {
                "p" => number(value).map(|x| c.p = x),
                "s" => number(value).map(|x| c.s = x),
                "a1" => {
                    c.a1 = value.to_string();
                    Ok(())
                }
                "a2" => {
                    c.a2 = value.to_string();
                    Ok(())
                }
                "places" => {
                    c.places = if value == "auto" {
                        PlaceSpec::Auto
                    } else {
                        PlaceSpec::List(value.split(',').map(|x| x.trim().to_string()).filter(|x| !x.is_empty()).collect())
                    };
                    Ok(())
                }
                "n_max" => number(value).and_then(|x: u32| {
                    if x == 0 {
                        Err("n_max must be positive".into())
                    } else {
                        c.n_max = x;
                        Ok(())
                    }
                }),
                "oracle" => on_off(value).map(|x| c.oracle = x),
                "oracle_precision" => {
                    if value == "auto" {
                        c.oracle_precision = None;
                        Ok(())
                    } else {
                        ExactRational::from_str(value)
                            .map_err(|_| format!("not a rational: '{value}'"))
                            .map(|x| c.oracle_precision = Some(x))
                    }
                }
                "oracle_ext_cap" => number(value).map(|x| c.oracle_ext_cap = x),
                "mode" => match value {
                    "run" => Ok(Mode::Run),
                    "sweep" => Ok(Mode::Sweep),
                    _ => Err(format!("mode must be run or sweep, got '{value}'")),
                }
                .map(|m| c.mode = m),
                "szpiro_samples" => number(value).map(|x| c.szpiro_samples = x),
                "seed" => number(value).map(|x| c.seed = x),
                "sweep_degree" => number(value).map(|x| c.sweep_degree = x),
                "format" => value.parse().map(|x| c.format = x),
                _ => Err(format!("unknown key '{key}'")),
            };
            r.map_err(bad)?;
        }
        Ok(c)
    }

    pub fn field(&self) -> Result<FieldDescriptor, ConfigError> {
        make_field(self.p, self.s).map_err(|e| ConfigError::Invalid(e.to_string()))
    }

    /// The module described by a1, a2 (a₂ must be nonzero).
    pub fn module(&self) -> Result<DrinfeldModule, ConfigError> {
        let f = self.field()?;
        let a1 = expr(&f, "a1", &self.a1)?;
        let a2 = expr(&f, "a2", &self.a2)?;
        DrinfeldModule::new(a1, a2).map_err(|e| ConfigError::Invalid(e.to_string()))
    }

    /// Explicit places, parsed; `None` for auto.
    pub fn explicit_places(&self, f: &FieldDescriptor) -> Result<Option<Vec<Place>>, ConfigError> {
        match &self.places {
            PlaceSpec::Auto => Ok(None),
            PlaceSpec::List(items) => items
                .iter()
                .map(|s| Place::parse(f, s).map_err(|e| lift(&format!("places[{s}]"), e)))
                .collect::<Result<Vec<_>, _>>()
                .map(Some),
        }
    }
}

fn lift(key: &str, e: AlgebraError) -> ConfigError {
    match e {
        AlgebraError::Parse { pos, msg } => ConfigError::Expr { key: key.into(), pos, msg },
        other => ConfigError::Invalid(format!("{key}: {other}")),
    }
}

fn expr(f: &FieldDescriptor, key: &str, text: &str) -> Result<RationalFunction, ConfigError> {
    if text.trim().is_empty() {
        return Err(ConfigError::Invalid(format!("{key} is missing")));
    }
    parse_expr(f, text).map_err(|e| lift(key, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_reports() {
        let c = RunConfig::parse("# demo\np = 3\na1 = t^2  # comment\na2 = 1\nplaces = inf, t-1\noracle = on\n").unwrap();
        assert_eq!(c.a1, "t^2");
        assert_eq!(c.places, PlaceSpec::List(vec!["inf".into(), "t-1".into()]));
        assert!(c.oracle);
        assert!(c.module().is_ok());
        let e = RunConfig::parse("p = 3\nbogus = 1\n").unwrap_err();
        assert_eq!(e, ConfigError::Line { line: 2, msg: "unknown key 'bogus'".into() });
        let c = RunConfig::parse("a1 = t+\na2 = 1").unwrap();
        assert!(matches!(c.module(), Err(ConfigError::Expr { .. })));
        let c = RunConfig::parse("a1 = t\na2 = 0").unwrap();
        assert!(matches!(c.module(), Err(ConfigError::Invalid(_))));
    }
}
