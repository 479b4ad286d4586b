//! Run configuration: command-line flags merged over an optional
//! `key = value` file, then validated.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use pbosons::pairs::FamilyKind;
use pbosons::C64;

/// A usage or parameter error. Always maps to exit code 2.
#[derive(Debug, Clone, PartialEq)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<pbosons::Error> for UsageError {
    fn from(e: pbosons::Error) -> Self {
        UsageError(e.to_string())
    }
}

pub type Usage<T> = Result<T, UsageError>;

fn usage<T>(msg: impl Into<String>) -> Usage<T> {
    Err(UsageError(msg.into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Text => "text",
        }
    }
}

impl FromStr for Format {
    type Err = UsageError;
    fn from_str(s: &str) -> Usage<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            other => usage(format!("unknown format '{other}' (expected json, csv or text)")),
        }
    }
}

pub fn parse_family(s: &str) -> Usage<FamilyKind> {
    match s {
        "gauss-lowering" => Ok(FamilyKind::GaussLowering),
        "gauss-raising" => Ok(FamilyKind::GaussRaising),
        other => usage(format!(
            "unknown family '{other}' (expected gauss-lowering or gauss-raising)"
        )),
    }
}

/// Parses `"re"` or `"re,im"`.
pub fn parse_complex(s: &str) -> Usage<C64> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| {
        t.parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| UsageError(format!("'{s}' is not a finite number or 're,im' pair")))
    };
    match parts.as_slice() {
        [re] => Ok(C64::new(num(re)?, 0.0)),
        [re, im] => Ok(C64::new(num(re)?, num(im)?)),
        _ => usage(format!("'{s}' is not a finite number or 're,im' pair")),
    }
}

fn parse_usize(key: &str, s: &str) -> Usage<usize> {
    s.trim()
        .parse()
        .map_err(|_| UsageError(format!("{key}: '{s}' is not a non-negative integer")))
}

/// Parses `name=value` with a positive finite value.
pub fn parse_tolerance(s: &str) -> Usage<(String, f64)> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| UsageError(format!("tolerance '{s}' must look like name=value")))?;
    let v: f64 = value
        .trim()
        .parse()
        .map_err(|_| UsageError(format!("tolerance '{s}': value is not a number")))?;
    if !(v.is_finite() && v > 0.0) {
        return usage(format!("tolerance '{s}' must be positive"));
    }
    Ok((name.trim().to_string(), v))
}

/// Grid given as `a,b,c` or `start:stop:step` (inclusive of `stop`).
pub fn parse_grid(s: &str) -> Usage<Vec<f64>> {
    let bad = || UsageError(format!("malformed grid '{s}'"));
    let values: Vec<f64> = if s.contains(':') {
        let parts: Vec<f64> = s
            .split(':')
            .map(|t| t.trim().parse::<f64>().map_err(|_| bad()))
            .collect::<Usage<_>>()?;
        let [start, stop, step] = parts[..] else {
            return Err(bad());
        };
        if step.is_nan() || step <= 0.0 || stop < start {
            return Err(bad());
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize;
        (0..=count).map(|i| start + i as f64 * step).collect()
    } else {
        s.split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|_| bad()))
            .collect::<Usage<_>>()?
    };
    if values.is_empty() {
        return Err(bad());
    }
    if let Some(v) = values.iter().find(|v| !(v.is_finite() && v.abs() <= 1.0)) {
        return usage(format!("grid value {v} is outside [-1, 1]"));
    }
    Ok(values)
}

/// Values read from flags or a config file, all optional.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Layer {
    pub family: Option<String>,
    pub alpha: Option<String>,
    pub beta: Option<String>,
    pub dim: Option<usize>,
    pub nmax: Option<usize>,
    pub margin: Option<usize>,
    pub format: Option<String>,
    pub out: Option<PathBuf>,
    pub power: Option<usize>,
    pub kmax: Option<usize>,
    pub grid: Option<String>,
    pub tolerances: Vec<(String, f64)>,
}

impl Layer {
    /// Fields set in `self` win over `base`.
    pub fn over(self, base: Layer) -> Layer {
        let mut tolerances = base.tolerances;
        tolerances.extend(self.tolerances);
        Layer {
            family: self.family.or(base.family),
            alpha: self.alpha.or(base.alpha),
            beta: self.beta.or(base.beta),
            dim: self.dim.or(base.dim),
            nmax: self.nmax.or(base.nmax),
            margin: self.margin.or(base.margin),
            format: self.format.or(base.format),
            out: self.out.or(base.out),
            power: self.power.or(base.power),
            kmax: self.kmax.or(base.kmax),
            grid: self.grid.or(base.grid),
            tolerances,
        }
    }
}

/// Reads a `key = value` file. `#` starts a comment; tolerances use
/// `tol.NAME = value`.
pub fn parse_config_text(text: &str) -> Usage<Layer> {
    let mut layer = Layer::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| UsageError(format!("config line {}: expected key = value", lineno + 1)))?;
        let (key, value) = (key.trim(), value.trim().to_string());
        match key {
            "family" => layer.family = Some(value),
            "alpha" => layer.alpha = Some(value),
            "beta" => layer.beta = Some(value),
            "dim" => layer.dim = Some(parse_usize(key, &value)?),
            "nmax" => layer.nmax = Some(parse_usize(key, &value)?),
            "margin" => layer.margin = Some(parse_usize(key, &value)?),
            "format" => layer.format = Some(value),
            "out" => layer.out = Some(PathBuf::from(value)),
            "power" => layer.power = Some(parse_usize(key, &value)?),
            "kmax" => layer.kmax = Some(parse_usize(key, &value)?),
            "grid" => layer.grid = Some(value),
            k if k.starts_with("tol.") => {
                layer.tolerances.push(parse_tolerance(&format!("{}={value}", &k[4..]))?)
            }
            other => return usage(format!("config line {}: unknown key '{other}'", lineno + 1)),
        }
    }
    Ok(layer)
}

pub fn read_config_file(path: &Path) -> Usage<Layer> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| UsageError(format!("cannot read config {}: {e}", path.display())))?;
    parse_config_text(&text)
}

/// Command-specific defaults and tolerance names.
pub struct Defaults {
    /// Accepted family names; the first is the default.
    pub families: &'static [&'static str],
    pub dim: usize,
    pub nmax: usize,
    pub margin: usize,
    pub tolerances: &'static [(&'static str, f64)],
}

/// Fully resolved configuration shared by all commands.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: &'static str,
    pub family: String,
    pub alpha: C64,
    pub beta: C64,
    pub dim: usize,
    pub nmax: usize,
    pub margin: usize,
    pub tolerances: BTreeMap<String, f64>,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub config_file: Option<PathBuf>,
    pub power: Option<usize>,
    pub kmax: Option<usize>,
    pub grid: Option<Vec<f64>>,
    alpha_set: bool,
    beta_set: bool,
}

impl RunConfig {
    pub fn resolve(
        command: &'static str,
        layer: Layer,
        defaults: &Defaults,
        config_file: Option<PathBuf>,
    ) -> Usage<Self> {
        let family = layer.family.clone().unwrap_or_else(|| defaults.families[0].to_string());
        if !defaults.families.contains(&family.as_str()) {
            return usage(format!(
                "unknown family '{family}' for {command} (expected {})",
                defaults.families.join(" or ")
            ));
        }
        let alpha = layer.alpha.as_deref().map(parse_complex).transpose()?;
        let beta = layer.beta.as_deref().map(parse_complex).transpose()?;
        let format = layer.format.as_deref().unwrap_or("json").parse()?;

        let mut tolerances: BTreeMap<String, f64> =
            defaults.tolerances.iter().map(|&(k, v)| (k.to_string(), v)).collect();
        for (name, value) in layer.tolerances {
            if !tolerances.contains_key(&name) {
                let known: Vec<&str> = defaults.tolerances.iter().map(|t| t.0).collect();
                return usage(format!(
                    "unknown tolerance '{name}' for {command} (known: {})",
                    known.join(", ")
                ));
            }
            tolerances.insert(name, value);
        }

        let cfg = RunConfig {
            command,
            family,
            alpha: alpha.unwrap_or_default(),
            beta: beta.unwrap_or_default(),
            dim: layer.dim.unwrap_or(defaults.dim),
            nmax: layer.nmax.unwrap_or(defaults.nmax),
            margin: layer.margin.unwrap_or(defaults.margin),
            tolerances,
            format,
            output: layer.out,
            config_file,
            power: layer.power,
            kmax: layer.kmax,
            grid: layer.grid.as_deref().map(parse_grid).transpose()?,
            alpha_set: alpha.is_some(),
            beta_set: beta.is_some(),
        };
        if cfg.dim < cfg.nmax + cfg.margin + 2 {
            return usage(format!(
                "dim = {} must be at least nmax + margin + 2 = {}",
                cfg.dim,
                cfg.nmax + cfg.margin + 2
            ));
        }
        Ok(cfg)
    }

    pub fn tol(&self, name: &str) -> f64 {
        self.tolerances[name]
    }

    /// Pair family for the single-mode commands.
    pub fn kind(&self) -> Usage<FamilyKind> {
        parse_family(&self.family)
    }

    /// The single-family deformation parameter: `alpha` for
    /// gauss-lowering, `beta` for gauss-raising.
    pub fn family_parameter(&self) -> Usage<C64> {
        match self.kind()? {
            FamilyKind::GaussLowering if self.beta_set && !self.alpha_set => {
                usage("gauss-lowering is parameterized by --alpha")
            }
            FamilyKind::GaussRaising if self.alpha_set && !self.beta_set => {
                usage("gauss-raising is parameterized by --beta")
            }
            FamilyKind::GaussLowering => Ok(self.alpha),
            FamilyKind::GaussRaising => Ok(self.beta),
        }
    }
}
