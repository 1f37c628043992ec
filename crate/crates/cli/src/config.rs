//! Flat `key = value` run configuration.
//!
//! One setting per line, `#` starts a comment, blank lines are ignored.
//! Values are numeric literals, `true`/`false`, one of a fixed set of
//! words, or a path. Later sources override earlier ones: built-in
//! defaults, then the file, then command-line flags.

use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Float,
    Int,
    Bool,
    Choice(&'static [&'static str]),
    Path,
}

pub const EXPERIMENTS: &[&str] = &[
    "lg-sweep-cavity",
    "lg-sweep-mechanical",
    "lg-general",
    "unbound-study",
    "classical-demo",
    "steadystate",
    "displacement",
    "feasibility",
    "convergence",
];

/// Every accepted key, in echo order, with its value kind and a short
/// description.
pub const KEYS: &[(&str, Kind, &str)] = &[
    ("experiment", Kind::Choice(EXPERIMENTS), "what to run"),
    ("units", Kind::Choice(&["normalized", "physical"]), "normalized: frequencies in units of omega_m; physical: rad/s and seconds"),
    ("regime", Kind::Choice(&["weak", "strong"]), "base parameter set"),
    ("omega_m", Kind::Float, "mechanical frequency"),
    ("delta", Kind::Float, "cavity detuning"),
    ("g", Kind::Float, "dimensionless single-photon coupling"),
    ("drive", Kind::Float, "drive amplitude Omega (exclusive with coupling)"),
    ("coupling", Kind::Float, "target |G|; the drive is chosen to reach it"),
    ("kappa", Kind::Float, "cavity loss rate"),
    ("gamma", Kind::Float, "mechanical damping rate"),
    ("n_bar", Kind::Float, "thermal occupation of the mechanical bath"),
    ("n_c", Kind::Int, "cavity Fock truncation"),
    ("n_m", Kind::Int, "mechanical Fock truncation"),
    ("rwa", Kind::Bool, "keep only the excitation-conserving coupling"),
    ("nonlinear_term", Kind::Bool, "keep g omega_m (d + d+) c+c"),
    ("mechanical_linear_terms", Kind::Bool, "add the mechanical frame-shift dissipation term"),
    ("observable", Kind::Choice(&["cavity", "mechanical"]), "dichotomic observable for LG runs"),
    ("initial", Kind::Choice(&["ground", "thermal"]), "mechanical part of the one-photon initial state"),
    ("form", Kind::Choice(&["general", "equal-time"]), "LG functional for sweeps"),
    ("t2", Kind::Float, "fixed second delay for lg-general, in grid units"),
    ("grid_start", Kind::Float, "first delay"),
    ("grid_stop", Kind::Float, "last delay"),
    ("grid_count", Kind::Int, "number of delays"),
    ("grid_units", Kind::Choice(&["scaled", "time"]), "scaled: tau |G| / 2pi (omega tau / 2pi for classical-demo); time: tau"),
    ("unbound_observable", Kind::Choice(&["cavity-number", "mechanical-number", "cavity-position", "mechanical-position"]), "observable for unbound-study"),
    ("classical_omega", Kind::Float, "oscillator frequency for classical-demo"),
    ("classical_gamma", Kind::Float, "oscillator damping for classical-demo"),
    ("classical_c0", Kind::Float, "C(0) for classical-demo"),
    ("qubit_epsilon", Kind::Float, "qubit splitting"),
    ("readout_omega_c", Kind::Float, "lab-frame cavity frequency"),
    ("readout_omega_d", Kind::Float, "drive frequency"),
    ("qubit_lambda", Kind::Float, "qubit-cavity coupling"),
    ("alpha_re", Kind::Float, "cavity displacement, real part (default: solved)"),
    ("alpha_im", Kind::Float, "cavity displacement, imaginary part (default: solved)"),
    ("max_detuning_ratio", Kind::Float, "upper limit on |delta| / lambda"),
    ("much_less_factor", Kind::Float, "factor used for much-less-than checks"),
    ("compensation_cap", Kind::Float, "largest acceptable lambda |alpha|"),
    ("convergence_max", Kind::Int, "largest truncation tried by the convergence ladder"),
    ("convergence_gate", Kind::Bool, "fail the run when the truncation check fails"),
    ("csv", Kind::Path, "CSV output path"),
    ("svg", Kind::Path, "SVG output path"),
    ("report", Kind::Path, "report output path (default: stdout)"),
];

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Float(f64),
    Int(usize),
    Bool(bool),
    Choice(&'static str),
    Path(String),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Float(v) => write!(f, "{v:?}"),
            Value::Int(v) => write!(f, "{v}"),
            Value::Bool(v) => write!(f, "{v}"),
            Value::Choice(v) => f.write_str(v),
            Value::Path(v) => f.write_str(v),
        }
    }
}

/// Where a setting came from, for error messages.
#[derive(Debug, Clone, PartialEq)]
pub enum Origin {
    Line(usize),
    Flag(String),
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Line(n) => write!(f, "line {n}"),
            Origin::Flag(name) => write!(f, "flag {name}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub origin: Option<Origin>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.origin {
            Some(o) => write!(f, "{o}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

fn err(origin: &Origin, message: impl Into<String>) -> ConfigError {
    ConfigError {
        origin: Some(origin.clone()),
        message: message.into(),
    }
}

fn lookup(key: &str) -> Option<(&'static str, Kind)> {
    KEYS.iter().find(|(k, _, _)| *k == key).map(|(k, kind, _)| (*k, *kind))
}

fn parse_value(key: &str, kind: Kind, raw: &str, origin: &Origin) -> Result<Value, ConfigError> {
    if raw.is_empty() {
        return Err(err(origin, format!("key `{key}` has an empty value")));
    }
    match kind {
        Kind::Float => {
            let looks_numeric = raw
                .chars()
                .all(|c| c.is_ascii_digit() || matches!(c, '.' | 'e' | 'E' | '+' | '-'));
            match raw.parse::<f64>() {
                Ok(v) if looks_numeric && v.is_finite() => Ok(Value::Float(v)),
                _ => Err(err(
                    origin,
                    format!("key `{key}` expects a finite numeric literal, got `{raw}`"),
                )),
            }
        }
        Kind::Int => raw
            .parse::<usize>()
            .map(Value::Int)
            .map_err(|_| err(origin, format!("key `{key}` expects a non-negative integer, got `{raw}`"))),
        Kind::Bool => match raw {
            "true" => Ok(Value::Bool(true)),
            "false" => Ok(Value::Bool(false)),
            _ => Err(err(origin, format!("key `{key}` expects true or false, got `{raw}`"))),
        },
        Kind::Choice(options) => options
            .iter()
            .find(|o| **o == raw)
            .map(|o| Value::Choice(o))
            .ok_or_else(|| {
                err(
                    origin,
                    format!("key `{key}` expects one of {}, got `{raw}`", options.join(", ")),
                )
            }),
        Kind::Path => Ok(Value::Path(raw.to_string())),
    }
}

/// Parsed settings; keys absent here fall back to built-in defaults.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunConfig {
    values: BTreeMap<&'static str, Value>,
}

impl RunConfig {
    /// Sets `key` from its textual value.
    pub fn set(&mut self, key: &str, raw: &str, origin: &Origin) -> Result<(), ConfigError> {
        let (key, kind) = lookup(key).ok_or_else(|| err(origin, format!("unknown key `{key}`")))?;
        let value = parse_value(key, kind, raw, origin)?;
        self.values.insert(key, value);
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.values.get(key)
    }

    pub fn is_set(&self, key: &str) -> bool {
        self.values.contains_key(key)
    }

    pub fn float(&self, key: &str) -> Option<f64> {
        match self.values.get(key) {
            Some(Value::Float(v)) => Some(*v),
            _ => None,
        }
    }

    pub fn int(&self, key: &str) -> Option<usize> {
        match self.values.get(key) {
            Some(Value::Int(v)) => Some(*v),
            _ => None,
        }
    }

    pub fn flag(&self, key: &str) -> Option<bool> {
        match self.values.get(key) {
            Some(Value::Bool(v)) => Some(*v),
            _ => None,
        }
    }

    pub fn choice(&self, key: &str) -> Option<&'static str> {
        match self.values.get(key) {
            Some(Value::Choice(v)) => Some(v),
            _ => None,
        }
    }

    pub fn path(&self, key: &str) -> Option<&str> {
        match self.values.get(key) {
            Some(Value::Path(v)) => Some(v),
            _ => None,
        }
    }

    /// The settings as config text that parses back to the same value.
    pub fn echo(&self) -> String {
        let mut out = String::new();
        for (key, _, _) in KEYS {
            if let Some(v) = self.values.get(key) {
                out.push_str(&format!("{key} = {v}\n"));
            }
        }
        out
    }
}

/// Parses config text. Duplicate keys are rejected.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut cfg = RunConfig::default();
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let origin = Origin::Line(i + 1);
        let line = match line.find('#') {
            Some(pos) => &line[..pos],
            None => line,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err(&origin, format!("expected `key = value`, got `{line}`")))?;
        let key = key.trim();
        if key.is_empty() {
            return Err(err(&origin, "missing key before `=`"));
        }
        if let Some(first) = seen.insert(key.to_string(), i + 1) {
            return Err(err(&origin, format!("key `{key}` already set on line {first}")));
        }
        cfg.set(key, value.trim(), &origin)?;
    }
    Ok(cfg)
}
