//! Flat `key = value` scenario documents.
//!
//! ```text
//! # GHZ in the non-resonant field
//! initial = GHZ
//! field_kind = NR
//! multipliers = [1, 2, 4]
//! measures = [m_sm, m_k]
//! oracle_check = on
//! ```
//!
//! Values are numbers, bare words, double-quoted strings, booleans
//! (`on`/`off`/`true`/`false`) or bracketed lists of those. Omitted keys take
//! their defaults.

use std::collections::HashMap;
use std::path::PathBuf;

use super::ScenarioConfig;
use crate::dynamics::{FieldKind, Method};
use crate::error::{Error, Result};
use crate::measures::Channel;
use crate::pauli::{MixWeight, StateName};

const KEYS: &[&str] = &[
    "name",
    "initial",
    "x",
    "field_kind",
    "omega0",
    "omega1",
    "j_ep",
    "j_en",
    "j_pn",
    "multipliers",
    "tau_max",
    "dt",
    "sample_spacing",
    "method",
    "measures",
    "oracle_check",
    "output",
];

#[derive(Debug, Clone, PartialEq)]
enum Value {
    Scalar(String),
    List(Vec<String>),
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn unquote(s: &str) -> String {
    let s = s.trim();
    if s.len() >= 2 && s.starts_with('"') && s.ends_with('"') {
        s[1..s.len() - 1].to_string()
    } else {
        s.to_string()
    }
}

fn strip_comment(line: &str) -> &str {
    let mut in_quotes = false;
    for (i, ch) in line.char_indices() {
        match ch {
            '"' => in_quotes = !in_quotes,
            '#' if !in_quotes => return &line[..i],
            _ => {}
        }
    }
    line
}

fn parse_value(raw: &str, line: usize) -> Result<Value> {
    let raw = raw.trim();
    if raw.is_empty() {
        return Err(parse_err(line, "missing value"));
    }
    if let Some(inner) = raw.strip_prefix('[') {
        let inner = inner
            .strip_suffix(']')
            .ok_or_else(|| parse_err(line, "unterminated list"))?;
        let items: Vec<String> = inner
            .split(',')
            .map(unquote)
            .filter(|s| !s.is_empty())
            .collect();
        return Ok(Value::List(items));
    }
    Ok(Value::Scalar(unquote(raw)))
}

struct Entry {
    line: usize,
    value: Value,
}

impl Entry {
    fn scalar(&self, key: &str) -> Result<&str> {
        match &self.value {
            Value::Scalar(s) => Ok(s),
            Value::List(_) => Err(parse_err(self.line, format!("'{key}' expects a single value, got a list"))),
        }
    }

    fn list(&self, key: &str) -> Result<&[String]> {
        match &self.value {
            Value::List(v) => Ok(v),
            Value::Scalar(_) => Err(parse_err(self.line, format!("'{key}' expects a list like [a, b]"))),
        }
    }

    fn real(&self, key: &str) -> Result<f64> {
        let s = self.scalar(key)?;
        let v: f64 = s
            .parse()
            .map_err(|_| parse_err(self.line, format!("'{key}' expects a number, got '{s}'")))?;
        if !v.is_finite() {
            return Err(parse_err(self.line, format!("'{key}' must be finite")));
        }
        Ok(v)
    }

    fn flag(&self, key: &str) -> Result<bool> {
        match self.scalar(key)?.to_ascii_lowercase().as_str() {
            "on" | "true" | "yes" => Ok(true),
            "off" | "false" | "no" => Ok(false),
            other => Err(parse_err(self.line, format!("'{key}' expects on/off, got '{other}'"))),
        }
    }

    fn with_line<T>(&self, r: Result<T>) -> Result<T> {
        r.map_err(|e| match e {
            Error::Parse { .. } => e,
            other => parse_err(self.line, other.to_string()),
        })
    }
}

/// Parses a scenario document, filling omitted keys with defaults.
pub fn parse_config(source: &str) -> Result<ScenarioConfig> {
    let mut entries: HashMap<&str, Entry> = HashMap::new();
    for (idx, raw_line) in source.lines().enumerate() {
        let line = idx + 1;
        let text = strip_comment(raw_line).trim();
        if text.is_empty() {
            continue;
        }
        let (key, value) = text
            .split_once('=')
            .ok_or_else(|| parse_err(line, format!("expected 'key = value', got '{text}'")))?;
        let key = key.trim();
        let known = KEYS
            .iter()
            .find(|k| **k == key)
            .ok_or_else(|| parse_err(line, format!("unknown key '{key}'")))?;
        if entries.contains_key(known) {
            return Err(parse_err(line, format!("duplicate key '{key}'")));
        }
        entries.insert(known, Entry { line, value: parse_value(value, line)? });
    }

    let mut cfg = ScenarioConfig::default();
    if let Some(e) = entries.get("name") {
        cfg.name = e.scalar("name")?.to_string();
        if cfg.name.is_empty() || cfg.name.contains(['/', '\\']) {
            return Err(parse_err(e.line, "name must be a non-empty plain file stem"));
        }
    }
    if let Some(e) = entries.get("initial") {
        cfg.initial = e.with_line(e.scalar("initial")?.parse::<StateName>())?;
    }
    match (cfg.initial, entries.get("x")) {
        (StateName::Mix, Some(e)) => {
            let x = e.real("x")?;
            e.with_line(MixWeight::new(x))?;
            cfg.x = Some(x);
        }
        (StateName::Mix, None) => {
            let line = entries.get("initial").map_or(0, |e| e.line);
            return Err(parse_err(line, "initial = Mix requires x in (1/3, 1]"));
        }
        (other, Some(e)) => {
            return Err(parse_err(e.line, format!("x is only valid with initial = Mix, not {other}")));
        }
        (_, None) => cfg.x = None,
    }
    if let Some(e) = entries.get("field_kind") {
        let kind = e.with_line(e.scalar("field_kind")?.parse::<FieldKind>())?;
        cfg.field_kind = kind;
    }
    for (key, slot) in [
        ("omega0", &mut cfg.omega0),
        ("omega1", &mut cfg.omega1),
        ("j_ep", &mut cfg.couplings.j_ep),
        ("j_en", &mut cfg.couplings.j_en),
        ("j_pn", &mut cfg.couplings.j_pn),
    ] {
        if let Some(e) = entries.get(key) {
            *slot = e.real(key)?;
        }
    }
    if let Some(e) = entries.get("multipliers") {
        let items = e.list("multipliers")?;
        if items.len() != 3 {
            return Err(parse_err(e.line, format!("multipliers needs 3 values, got {}", items.len())));
        }
        for (k, item) in items.iter().enumerate() {
            cfg.multipliers[k] = item
                .parse()
                .map_err(|_| parse_err(e.line, format!("multiplier '{item}' is not a number")))?;
        }
    }
    for (key, slot) in [
        ("tau_max", &mut cfg.tau_max),
        ("dt", &mut cfg.dt),
        ("sample_spacing", &mut cfg.sample_spacing),
    ] {
        if let Some(e) = entries.get(key) {
            let v = e.real(key)?;
            if v <= 0.0 {
                return Err(parse_err(e.line, format!("'{key}' must be positive")));
            }
            *slot = v;
        }
    }
    if let Some(e) = entries.get("method") {
        cfg.method = e.with_line(e.scalar("method")?.parse::<Method>())?;
    }
    if let Some(e) = entries.get("measures") {
        let items = e.list("measures")?;
        if items.is_empty() {
            return Err(parse_err(e.line, "measures list is empty"));
        }
        cfg.measures = items
            .iter()
            .map(|s| e.with_line(s.parse::<Channel>()))
            .collect::<Result<_>>()?;
    }
    if let Some(e) = entries.get("oracle_check") {
        cfg.oracle_check = e.flag("oracle_check")?;
    }
    if let Some(e) = entries.get("output") {
        cfg.output = Some(PathBuf::from(e.scalar("output")?));
    }

    let anchor = entries
        .get("dt")
        .or_else(|| entries.get("sample_spacing"))
        .map_or(0, |e| e.line);
    cfg.integrator_config()
        .and_then(|c| c.validate())
        .map_err(|err| parse_err(anchor, err.to_string()))?;
    Ok(cfg)
}
