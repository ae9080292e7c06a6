//! Flat key-value experiment configuration.
//!
//! A config file is a TOML table with no nesting. Every key has a default,
//! the file overrides the defaults and `--set key=value` pairs override the
//! file. Sweepable keys take a number, an array, a comma-separated list or
//! one of the generators `linspace(lo, hi, n)` and `geomspace(lo, hi, n)`.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use secrecy_core::{CsidfMode, JammingModel, Layout, Scheme, SystemParams};
use secrecy_core::montecarlo::{DirectSlot, EveModel};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot parse {origin}: {message}")]
    Parse { origin: String, message: String },
    #[error("unknown config key '{0}'")]
    UnknownKey(String),
    #[error("bad value for '{key}': {message}")]
    Value { key: String, message: String },
}

type Result<T> = std::result::Result<T, ConfigError>;

fn bad(key: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Value {
        key: key.to_owned(),
        message: message.into(),
    }
}

/// Fully resolved settings. List-valued fields are sweep axes.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub system: SystemParams,
    pub d_ab_m: f64,
    pub layout: Layout,
    pub schemes: Vec<Scheme>,
    pub n_a: Vec<u32>,
    /// Bob's antennas for CSI-DF rows.
    pub n_b: Vec<u32>,
    /// Bob's antennas for AN rows, which need `n_b ≤ n_r − 1`.
    pub n_b_an: Vec<u32>,
    pub n_r: Vec<u32>,
    pub n_e: Vec<u32>,
    pub p_a_w: Vec<f64>,
    /// `None` ties the relay power to Alice's.
    pub p_r_w: Option<Vec<f64>>,
    pub rate: Vec<f64>,
    pub d_ar_frac: Vec<f64>,
    pub d_re_frac: Vec<f64>,
    pub phi: Vec<f64>,
    pub rate_e: f64,
    pub rate_max: Option<f64>,
    pub jamming: JammingModel,
    pub csidf_mode: CsidfMode,
    pub trials: u64,
    pub seed: u64,
    /// Multiplies the rate seen by the simulator only. Any value other than
    /// 1 makes `validate` compare mismatched models, which is how its
    /// failure path is exercised.
    pub mc_rate_scale: f64,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            system: SystemParams::default(),
            d_ab_m: 100.0,
            layout: Layout::Collinear,
            schemes: Scheme::ALL.to_vec(),
            n_a: vec![2],
            n_b: vec![2],
            n_b_an: vec![1],
            n_r: vec![2],
            n_e: vec![2],
            p_a_w: vec![0.5],
            p_r_w: Some(vec![0.5]),
            rate: vec![3.0],
            d_ar_frac: vec![0.5],
            d_re_frac: vec![1.5],
            phi: vec![0.1],
            rate_e: 0.0,
            rate_max: None,
            jamming: JammingModel::Split,
            csidf_mode: CsidfMode::Decoupled,
            trials: 1_000_000,
            seed: 1,
            mc_rate_scale: 1.0,
        }
    }
}

/// Raw key-value pairs in the order of precedence they were merged in.
#[derive(Debug, Clone, Default)]
pub struct RawConfig {
    entries: BTreeMap<String, toml::Value>,
}

impl RawConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_owned(),
            source,
        })?;
        Self::from_toml(&text, &path.display().to_string())
    }

    pub fn from_toml(text: &str, origin: &str) -> Result<Self> {
        let table: toml::Table = text.parse().map_err(|e: toml::de::Error| ConfigError::Parse {
            origin: origin.to_owned(),
            message: e.message().to_owned(),
        })?;
        let mut raw = Self::default();
        for (k, v) in table {
            if v.is_table() {
                return Err(bad(&k, "nested tables are not supported"));
            }
            raw.entries.insert(k, v);
        }
        Ok(raw)
    }

    /// Applies one `key=value` override. The value is read as a TOML value
    /// when it parses as one and as a bare string otherwise.
    pub fn set(&mut self, assignment: &str) -> Result<()> {
        let (key, value) = assignment.split_once('=').ok_or_else(|| ConfigError::Parse {
            origin: "--set".into(),
            message: format!("expected key=value, got '{assignment}'"),
        })?;
        let key = key.trim();
        let value = value.trim();
        let parsed = format!("v = {value}")
            .parse::<toml::Table>()
            .ok()
            .and_then(|mut t| t.remove("v"))
            .unwrap_or_else(|| toml::Value::String(value.to_owned()));
        self.entries.insert(key.to_owned(), parsed);
        Ok(())
    }

    pub fn resolve(&self) -> Result<Settings> {
        let mut s = Settings::default();
        for (key, v) in &self.entries {
            apply(&mut s, key, v)?;
        }
        validate(&s)?;
        Ok(s)
    }
}

fn apply(s: &mut Settings, key: &str, v: &toml::Value) -> Result<()> {
    let sys = &mut s.system;
    match key {
        "carrier_freq_hz" => sys.carrier_freq_hz = number(key, v)?,
        "antenna_gain_db" => sys.antenna_gain_db = number(key, v)?,
        "link_margin_db" => sys.link_margin_db = number(key, v)?,
        "noise_figure_db" => sys.noise_figure_db = number(key, v)?,
        "pathloss_exp" => sys.pathloss_exp = number(key, v)?,
        "noise_psd_dbm_hz" => sys.noise_psd_dbm_hz = number(key, v)?,
        "bandwidth_hz" => sys.bandwidth_hz = number(key, v)?,
        "delta" => sys.delta = number(key, v)?,
        "p_tx_w" => sys.p_tx_w = number(key, v)?,
        "p_rx_w" => sys.p_rx_w = number(key, v)?,
        "p_max_w" => sys.p_max_w = number(key, v)?,
        "d_ab_m" => s.d_ab_m = number(key, v)?,
        "layout" => {
            s.layout = match string(key, v)?.as_str() {
                "collinear" => Layout::Collinear,
                "perpendicular" => Layout::Perpendicular,
                other => return Err(bad(key, format!("'{other}' (expected collinear or perpendicular)"))),
            }
        }
        "scheme" => s.schemes = schemes(key, v)?,
        "n_a" => s.n_a = counts(key, v)?,
        "n_b" => s.n_b = counts(key, v)?,
        "n_b_an" => s.n_b_an = counts(key, v)?,
        "n_r" => s.n_r = counts(key, v)?,
        "n_e" => s.n_e = counts(key, v)?,
        "p_a_w" => s.p_a_w = axis(key, v)?,
        "p_r_w" => {
            s.p_r_w = match v {
                toml::Value::String(t) if t.trim() == "p_a" => None,
                _ => Some(axis(key, v)?),
            }
        }
        "rate" => s.rate = axis(key, v)?,
        "d_ar_frac" => s.d_ar_frac = axis(key, v)?,
        "d_re_frac" => s.d_re_frac = axis(key, v)?,
        "phi" => s.phi = axis(key, v)?,
        "rate_e" => s.rate_e = number(key, v)?,
        "rate_max" => s.rate_max = Some(number(key, v)?),
        "jamming" => {
            s.jamming = match string(key, v)?.as_str() {
                "split" => JammingModel::Split,
                "per_antenna" => JammingModel::PerAntenna,
                other => return Err(bad(key, format!("'{other}' (expected split or per_antenna)"))),
            }
        }
        "csidf_mode" => {
            s.csidf_mode = match string(key, v)?.as_str() {
                "decoupled" => CsidfMode::Decoupled,
                "literal" => CsidfMode::Literal {
                    direct: DirectSlot::default(),
                    eve: EveModel::default(),
                },
                "literal_protocol" => CsidfMode::Literal {
                    direct: DirectSlot::default(),
                    eve: EveModel::Protocol,
                },
                other => {
                    return Err(bad(key, format!("'{other}' (expected decoupled, literal or literal_protocol)")))
                }
            }
        }
        "trials" => s.trials = integer(key, v)?,
        "seed" => s.seed = integer(key, v)?,
        "mc_rate_scale" => s.mc_rate_scale = number(key, v)?,
        _ => return Err(ConfigError::UnknownKey(key.to_owned())),
    }
    Ok(())
}

#[allow(clippy::neg_cmp_op_on_partial_ord)]
fn validate(s: &Settings) -> Result<()> {
    s.system
        .validate()
        .map_err(|e| bad("system", e.to_string()))?;
    if !(s.d_ab_m > 0.0) {
        return Err(bad("d_ab_m", "must be positive"));
    }
    if s.trials == 0 {
        return Err(bad("trials", "must be at least 1"));
    }
    if !(s.mc_rate_scale > 0.0) {
        return Err(bad("mc_rate_scale", "must be positive"));
    }
    if let Some(r) = s.rate_max {
        if !(r > 0.0) {
            return Err(bad("rate_max", "must be positive"));
        }
    }
    if !(s.rate_e >= 0.0) {
        return Err(bad("rate_e", "must be nonnegative"));
    }
    Ok(())
}

fn number(key: &str, v: &toml::Value) -> Result<f64> {
    match v {
        toml::Value::Float(x) => Ok(*x),
        toml::Value::Integer(i) => Ok(*i as f64),
        toml::Value::String(t) => t.trim().parse().map_err(|_| bad(key, format!("'{t}' is not a number"))),
        other => Err(bad(key, format!("expected a number, got {other}"))),
    }
}

fn integer(key: &str, v: &toml::Value) -> Result<u64> {
    let x = number(key, v)?;
    if x < 0.0 || x.fract() != 0.0 || x > u64::MAX as f64 {
        return Err(bad(key, format!("expected a nonnegative integer, got {x}")));
    }
    Ok(x as u64)
}

fn string(key: &str, v: &toml::Value) -> Result<String> {
    match v {
        toml::Value::String(t) => Ok(t.trim().to_ascii_lowercase()),
        other => Err(bad(key, format!("expected a string, got {other}"))),
    }
}

/// A sweep axis in the order given.
fn axis(key: &str, v: &toml::Value) -> Result<Vec<f64>> {
    match v {
        toml::Value::Array(items) => items.iter().map(|x| number(key, x)).collect(),
        toml::Value::String(t) => parse_axis(key, t),
        _ => Ok(vec![number(key, v)?]),
    }
}

fn counts(key: &str, v: &toml::Value) -> Result<Vec<u32>> {
    axis(key, v)?
        .into_iter()
        .map(|x| {
            if x >= 1.0 && x.fract() == 0.0 && x <= u32::MAX as f64 {
                Ok(x as u32)
            } else {
                Err(bad(key, format!("antenna counts are positive integers, got {x}")))
            }
        })
        .collect()
}

fn schemes(key: &str, v: &toml::Value) -> Result<Vec<Scheme>> {
    let names: Vec<String> = match v {
        toml::Value::Array(items) => items.iter().map(|x| string(key, x)).collect::<Result<_>>()?,
        _ => string(key, v)?.split(',').map(|t| t.trim().to_owned()).collect(),
    };
    let mut out = Vec::new();
    for name in names {
        match name.as_str() {
            "both" | "all" => out.extend(Scheme::ALL),
            "" => {}
            other => out.push(other.parse().map_err(|e: secrecy_core::Error| bad(key, e.to_string()))?),
        }
    }
    Ok(out)
}

/// Parses `linspace(lo, hi, n)`, `geomspace(lo, hi, n)`, a comma list or
/// a single number. An empty string is an empty axis.
pub fn parse_axis(key: &str, text: &str) -> Result<Vec<f64>> {
    let t = text.trim();
    if t.is_empty() {
        return Ok(Vec::new());
    }
    for (name, geometric) in [("linspace", false), ("geomspace", true)] {
        if let Some(args) = t.strip_prefix(name) {
            let args = args
                .trim()
                .strip_prefix('(')
                .and_then(|a| a.strip_suffix(')'))
                .ok_or_else(|| bad(key, format!("malformed {name}")))?;
            let parts: Vec<&str> = args.split(',').map(str::trim).collect();
            let [lo, hi, n] = parts[..] else {
                return Err(bad(key, format!("{name} takes (lo, hi, n)")));
            };
            let lo: f64 = lo.parse().map_err(|_| bad(key, format!("bad bound '{lo}'")))?;
            let hi: f64 = hi.parse().map_err(|_| bad(key, format!("bad bound '{hi}'")))?;
            let n: usize = n.parse().map_err(|_| bad(key, format!("bad count '{n}'")))?;
            if geometric && !(lo > 0.0 && hi > 0.0) {
                return Err(bad(key, "geomspace bounds must be positive"));
            }
            return Ok(spaced(lo, hi, n, geometric));
        }
    }
    t.split(',')
        .map(|p| p.trim().parse().map_err(|_| bad(key, format!("'{p}' is not a number"))))
        .collect()
}

/// `n` points from `lo` to `hi` inclusive, evenly or geometrically spaced.
pub fn spaced(lo: f64, hi: f64, n: usize, geometric: bool) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| {
                let t = i as f64 / (n - 1) as f64;
                if i == n - 1 {
                    hi
                } else if geometric {
                    lo * (hi / lo).powf(t)
                } else {
                    lo + (hi - lo) * t
                }
            })
            .collect(),
    }
}
