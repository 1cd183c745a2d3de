//! Scenario configuration: flat `key = value` text, or a JSON object with the same keys.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;
use spinstar::BlochVector;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("{}field `{field}`: {msg}", line.map(|l| format!("line {l}: ")).unwrap_or_default())]
    Field { field: String, line: Option<usize>, msg: String },
    #[error("cannot read {path}: {msg}")]
    Io { path: String, msg: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(format!("expected csv or json, got `{s}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GridKind {
    /// n_points evenly spaced (or `step` if given).
    Uniform,
    /// Uniform, refined to step ≤ π/(8ν₀) when the fast frequency is known.
    Auto,
    /// Short uniform bursts, one per sampled envelope window.
    Bursts,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum PairSpec {
    Z,
    X,
    States(BlochVector, BlochVector),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct Toggles {
    pub exact: bool,
    pub envelope: bool,
    pub timescales: bool,
    pub rates: bool,
    pub measure: bool,
    pub verify: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub n_bath: u32,
    pub g: f64,
    pub omega_s: f64,
    pub omega_b: f64,
    pub t_bath: f64,
    pub t_start: f64,
    pub t_end: f64,
    pub n_points: usize,
    pub step: Option<f64>,
    pub grid: GridKind,
    pub max_points: usize,
    pub bursts: usize,
    pub burst_points: usize,
    pub pair: PairSpec,
    pub toggles: Toggles,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub precision: usize,
    pub seed: u64,
    /// Envelope window for the numeric FWHM; defaults to 4π/ν₀.
    pub window: Option<f64>,
    pub revival_index: u32,
    pub eps_rate: f64,
    pub eps_singular: f64,
    pub verify_draws: usize,
    pub record_wall_time: bool,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            n_bath: 4,
            g: 1.0,
            omega_s: 3.0,
            omega_b: 1.0,
            t_bath: 10.0,
            t_start: 0.0,
            t_end: 20.0,
            n_points: 2001,
            step: None,
            grid: GridKind::Uniform,
            max_points: 4_000_000,
            bursts: 1000,
            burst_points: 64,
            pair: PairSpec::Z,
            toggles: Toggles::default(),
            out: None,
            format: Format::Csv,
            precision: 12,
            seed: 0,
            window: None,
            revival_index: 1,
            eps_rate: 1e-10,
            eps_singular: 1e-9,
            verify_draws: 20,
            record_wall_time: false,
        }
    }
}

const KEYS: &[&str] = &[
    "n_bath", "g", "omega_s", "omega_b", "t_bath", "t_start", "t_end", "n_points", "step", "grid",
    "max_points", "bursts", "burst_points", "pair", "state1", "state2", "exact", "envelope",
    "timescales", "rates", "measure", "verify", "out", "format", "precision", "seed", "window",
    "revival_index", "eps_rate", "eps_singular", "verify_draws", "record_wall_time",
];

/// Raw values keyed by name, with the source line when known.
type Raw = BTreeMap<String, (String, Option<usize>)>;

fn parse_flat(text: &str) -> Result<Raw, ConfigError> {
    let mut raw = Raw::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (k, v) = body
            .split_once('=')
            .ok_or_else(|| ConfigError::Syntax { line: line_no, msg: format!("expected `key = value`, got `{body}`") })?;
        let k = k.trim().to_string();
        if raw.contains_key(&k) {
            return Err(ConfigError::Syntax { line: line_no, msg: format!("duplicate key `{k}`") });
        }
        raw.insert(k, (v.trim().trim_matches('"').to_string(), Some(line_no)));
    }
    Ok(raw)
}

fn parse_json(text: &str) -> Result<Raw, ConfigError> {
    let v: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| ConfigError::Syntax { line: e.line(), msg: e.to_string() })?;
    let obj = v.as_object().ok_or(ConfigError::Syntax { line: 1, msg: "expected a JSON object".into() })?;
    let mut raw = Raw::new();
    for (k, v) in obj {
        let s = match v {
            serde_json::Value::String(s) => s.clone(),
            serde_json::Value::Array(a) => a.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","),
            other => other.to_string(),
        };
        raw.insert(k.clone(), (s, None));
    }
    Ok(raw)
}

struct Fields {
    raw: Raw,
}

impl Fields {
    fn err(&self, key: &str, msg: impl Into<String>) -> ConfigError {
        ConfigError::Field { field: key.into(), line: self.raw.get(key).and_then(|r| r.1), msg: msg.into() }
    }

    fn get<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, ConfigError>
    where
        T::Err: std::fmt::Display,
    {
        match self.raw.get(key) {
            None => Ok(None),
            Some((v, _)) => v.parse::<T>().map(Some).map_err(|e| self.err(key, format!("cannot parse `{v}`: {e}"))),
        }
    }

    fn set<T: std::str::FromStr>(&self, key: &str, slot: &mut T) -> Result<(), ConfigError>
    where
        T::Err: std::fmt::Display,
    {
        if let Some(v) = self.get(key)? {
            *slot = v;
        }
        Ok(())
    }

    fn vector(&self, key: &str) -> Result<Option<BlochVector>, ConfigError> {
        let Some((v, _)) = self.raw.get(key) else { return Ok(None) };
        let parts: Vec<f64> = v
            .trim_matches(|c| c == '[' || c == ']')
            .split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| self.err(key, format!("cannot parse `{v}`: {e}")))?;
        match parts[..] {
            [x, y, z] => Ok(Some(BlochVector::new(x, y, z))),
            _ => Err(self.err(key, format!("expected three components, got {}", parts.len()))),
        }
    }
}

impl ScenarioConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let raw = if text.trim_start().starts_with('{') { parse_json(text)? } else { parse_flat(text)? };
        let f = Fields { raw };
        if let Some(k) = f.raw.keys().find(|k| !KEYS.contains(&k.as_str())) {
            return Err(f.err(k, "unknown key"));
        }
        let mut c = ScenarioConfig::default();
        f.set("n_bath", &mut c.n_bath)?;
        f.set("g", &mut c.g)?;
        f.set("omega_s", &mut c.omega_s)?;
        f.set("omega_b", &mut c.omega_b)?;
        f.set("t_bath", &mut c.t_bath)?;
        f.set("t_start", &mut c.t_start)?;
        f.set("t_end", &mut c.t_end)?;
        f.set("n_points", &mut c.n_points)?;
        c.step = f.get("step")?;
        if let Some(g) = f.get::<String>("grid")? {
            c.grid = match g.as_str() {
                "uniform" => GridKind::Uniform,
                "auto" => GridKind::Auto,
                "bursts" => GridKind::Bursts,
                _ => return Err(f.err("grid", format!("expected uniform, auto or bursts, got `{g}`"))),
            };
        }
        f.set("max_points", &mut c.max_points)?;
        f.set("bursts", &mut c.bursts)?;
        f.set("burst_points", &mut c.burst_points)?;
        let (s1, s2) = (f.vector("state1")?, f.vector("state2")?);
        let explicit = s1.is_some() || s2.is_some();
        c.pair = match f.get::<String>("pair")?.as_deref() {
            None if !explicit => PairSpec::Z,
            Some("z") => PairSpec::Z,
            Some("x") => PairSpec::X,
            None | Some("states") => match (s1, s2) {
                (Some(a), Some(b)) => PairSpec::States(a, b),
                _ => return Err(f.err("pair", "explicit pair needs both state1 and state2")),
            },
            Some(other) => return Err(f.err("pair", format!("expected z, x or states, got `{other}`"))),
        };
        if matches!(c.pair, PairSpec::Z | PairSpec::X) && explicit {
            return Err(f.err("pair", "state1/state2 given with a named pair"));
        }
        f.set("exact", &mut c.toggles.exact)?;
        f.set("envelope", &mut c.toggles.envelope)?;
        f.set("timescales", &mut c.toggles.timescales)?;
        f.set("rates", &mut c.toggles.rates)?;
        f.set("measure", &mut c.toggles.measure)?;
        f.set("verify", &mut c.toggles.verify)?;
        c.out = f.get::<String>("out")?.map(PathBuf::from);
        f.set("format", &mut c.format)?;
        f.set("precision", &mut c.precision)?;
        f.set("seed", &mut c.seed)?;
        c.window = f.get("window")?;
        f.set("revival_index", &mut c.revival_index)?;
        f.set("eps_rate", &mut c.eps_rate)?;
        f.set("eps_singular", &mut c.eps_singular)?;
        f.set("verify_draws", &mut c.verify_draws)?;
        f.set("record_wall_time", &mut c.record_wall_time)?;
        c.validate().map_err(|(k, m)| f.err(k, m))?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Io { path: path.display().to_string(), msg: e.to_string() })?;
        Self::parse(&text)
    }

    /// Checks cross-field invariants; returns the offending key.
    pub fn validate(&self) -> Result<(), (&'static str, String)> {
        let finite = [
            ("g", self.g),
            ("omega_s", self.omega_s),
            ("omega_b", self.omega_b),
            ("t_bath", self.t_bath),
            ("t_start", self.t_start),
            ("t_end", self.t_end),
        ];
        if let Some((k, v)) = finite.iter().find(|(_, v)| !v.is_finite()) {
            return Err((k, format!("must be finite, got {v}")));
        }
        if self.n_bath == 0 {
            return Err(("n_bath", "must be at least 1".into()));
        }
        if self.t_bath <= 0.0 {
            return Err(("t_bath", "must be positive".into()));
        }
        if !(self.t_end > self.t_start) {
            return Err(("t_end", format!("must exceed t_start = {}", self.t_start)));
        }
        if self.n_points < 2 {
            return Err(("n_points", "must be at least 2".into()));
        }
        if let Some(s) = self.step {
            if !(s > 0.0 && s.is_finite()) {
                return Err(("step", "must be positive".into()));
            }
        }
        if self.bursts == 0 || self.burst_points < 2 {
            return Err(("bursts", "need at least one burst of two points".into()));
        }
        if let PairSpec::States(a, b) = self.pair {
            for (k, v) in [("state1", a), ("state2", b)] {
                if v.norm() > 1.0 + 1e-9 {
                    return Err((k, format!("Bloch vector norm {} exceeds 1", v.norm())));
                }
            }
        }
        if !(1..=17).contains(&self.precision) {
            return Err(("precision", "must be between 1 and 17 significant digits".into()));
        }
        if let Some(w) = self.window {
            if !(w > 0.0) {
                return Err(("window", "must be positive".into()));
            }
        }
        Ok(())
    }

    /// Canonical echo for the manifest; output location is left out so that
    /// identical runs written to different places stay byte-identical.
    pub fn echo(&self) -> BTreeMap<&'static str, String> {
        let mut m = BTreeMap::new();
        let vec = |v: &BlochVector| format!("{},{},{}", v.x, v.y, v.z);
        m.insert("n_bath", self.n_bath.to_string());
        m.insert("g", self.g.to_string());
        m.insert("omega_s", self.omega_s.to_string());
        m.insert("omega_b", self.omega_b.to_string());
        m.insert("t_bath", self.t_bath.to_string());
        m.insert("t_start", self.t_start.to_string());
        m.insert("t_end", self.t_end.to_string());
        m.insert("n_points", self.n_points.to_string());
        if let Some(s) = self.step {
            m.insert("step", s.to_string());
        }
        m.insert("grid", format!("{:?}", self.grid).to_lowercase());
        m.insert("max_points", self.max_points.to_string());
        m.insert("bursts", self.bursts.to_string());
        m.insert("burst_points", self.burst_points.to_string());
        match &self.pair {
            PairSpec::Z => {
                m.insert("pair", "z".into());
            }
            PairSpec::X => {
                m.insert("pair", "x".into());
            }
            PairSpec::States(a, b) => {
                m.insert("pair", "states".into());
                m.insert("state1", vec(a));
                m.insert("state2", vec(b));
            }
        }
        let t = &self.toggles;
        for (k, v) in [
            ("exact", t.exact),
            ("envelope", t.envelope),
            ("timescales", t.timescales),
            ("rates", t.rates),
            ("measure", t.measure),
            ("verify", t.verify),
        ] {
            m.insert(k, v.to_string());
        }
        m.insert("format", format!("{:?}", self.format).to_lowercase());
        m.insert("precision", self.precision.to_string());
        m.insert("seed", self.seed.to_string());
        if let Some(w) = self.window {
            m.insert("window", w.to_string());
        }
        m.insert("revival_index", self.revival_index.to_string());
        m.insert("eps_rate", self.eps_rate.to_string());
        m.insert("eps_singular", self.eps_singular.to_string());
        m.insert("verify_draws", self.verify_draws.to_string());
        m.insert("record_wall_time", self.record_wall_time.to_string());
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_round_trip() {
        let c = ScenarioConfig::parse(
            "# reference point\nn_bath = 1000\ng = 1\nomega_s = 3\nomega_b = 1\nt_bath = 10\npair = x\nenvelope = true\n",
        )
        .unwrap();
        assert_eq!(c.n_bath, 1000);
        assert_eq!(c.pair, PairSpec::X);
        assert!(c.toggles.envelope && !c.toggles.rates);
    }

    #[test]
    fn json_with_states() {
        let c = ScenarioConfig::parse(r#"{"n_bath": 3, "state1": [0.6, 0, 0.8], "state2": [0, 0, -1], "format": "json"}"#)
            .unwrap();
        assert_eq!(c.pair, PairSpec::States(BlochVector::new(0.6, 0.0, 0.8), BlochVector::new(0.0, 0.0, -1.0)));
        assert_eq!(c.format, Format::Json);
    }

    #[test]
    fn diagnostics_name_line_and_field() {
        let e = ScenarioConfig::parse("g = 1\nn_bath = four\n").unwrap_err();
        assert!(e.to_string().starts_with("line 2: field `n_bath`"), "{e}");
        let e = ScenarioConfig::parse("g = 1\nfoo = 2\n").unwrap_err();
        assert!(e.to_string().contains("unknown key"));
        let e = ScenarioConfig::parse("g 1\n").unwrap_err();
        assert!(matches!(e, ConfigError::Syntax { line: 1, .. }));
        let e = ScenarioConfig::parse("t_start = 5\nt_end = 1\n").unwrap_err();
        assert!(e.to_string().contains("line 2: field `t_end`"), "{e}");
        let e = ScenarioConfig::parse("state1 = 1, 1, 0\nstate2 = 0,0,1\n").unwrap_err();
        assert!(e.to_string().contains("state1"));
        assert!(ScenarioConfig::parse("n_points = 1\n").is_err());
        assert!(ScenarioConfig::parse("g = 1\ng = 2\n").is_err());
    }
}
