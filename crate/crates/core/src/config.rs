//! Run configuration: a flat `key = value` text format with `[section]` headers
//! and dotted keys, plus command-line overrides.
//!
//! ```text
//! # comment
//! [problem]
//! id = ex2
//! eta = 1e-3
//! [mesh]
//! n = 50          # or nx / ny separately
//! [time]
//! t_final = 2.0
//! ```
//!
//! A key outside any section must be dotted (`mesh.n = 64`). Inside a section,
//! `n = 64` under `[mesh]` is the same key. Later assignments win.

use crate::error::{CdgError, Result};
use crate::problems::{find, ProblemSpec};
use crate::scheme::SchemeOptions;
use crate::stepper::{DtMode, StepControl};

/// Every recognized key.
pub const KEYS: &[&str] = &[
    "problem.id",
    "problem.eta",
    "mesh.n",
    "mesh.nx",
    "mesh.ny",
    "scheme.k",
    "scheme.well_balanced",
    "limiter.pp",
    "limiter.weno",
    "limiter.tvb_m",
    "time.cfl",
    "time.theta",
    "time.t_final",
    "time.dt_mode",
    "time.max_steps",
    "output.dual",
    "output.every",
    "convergence.ladder",
];

/// Parse the text format into ordered `(key, value)` pairs.
pub fn parse(text: &str) -> Result<Vec<(String, String)>> {
    let mut section = String::new();
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| CdgError::config(format!("line {}: unterminated section header", i + 1)))?;
            section = name.trim().to_string();
            continue;
        }
        let (k, v) =
            line.split_once('=').ok_or_else(|| CdgError::config(format!("line {}: expected key = value", i + 1)))?;
        let k = k.trim();
        let key = if section.is_empty() { k.to_string() } else { format!("{section}.{k}") };
        out.push((key, unquote(v.trim()).to_string()));
    }
    Ok(out)
}

fn unquote(v: &str) -> &str {
    v.strip_prefix('"').and_then(|s| s.strip_suffix('"')).unwrap_or(v)
}

/// Split a `key=value` override.
pub fn parse_override(s: &str) -> Result<(String, String)> {
    let (k, v) = s.split_once('=').ok_or_else(|| CdgError::config(format!("override '{s}' is not key=value")))?;
    Ok((k.trim().to_string(), unquote(v.trim()).to_string()))
}

/// Fully resolved run settings.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub problem: ProblemSpec,
    pub k: usize,
    pub nx: usize,
    pub ny: usize,
    pub options: SchemeOptions,
    pub control: StepControl,
    /// Whether `time.t_final` was set explicitly.
    pub t_final_set: bool,
    pub write_dual: bool,
    /// Snapshot cadence in steps (0: final state only).
    pub every: usize,
    pub ladder: Vec<usize>,
}

fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| CdgError::config(format!("{key}: cannot parse '{v}'")))
}

fn boolean(key: &str, v: &str) -> Result<bool> {
    match v {
        "true" | "on" | "1" | "yes" => Ok(true),
        "false" | "off" | "0" | "no" => Ok(false),
        _ => Err(CdgError::config(format!("{key}: expected a boolean, got '{v}'"))),
    }
}

fn list<T: std::str::FromStr>(key: &str, v: &str) -> Result<Vec<T>> {
    v.trim_matches(|c| c == '[' || c == ']').split(',').map(|s| num(key, s.trim())).collect()
}

impl RunConfig {
    /// Resolve pairs: the problem id is read first so its defaults apply, then
    /// every other key overrides them in order.
    pub fn from_pairs(pairs: &[(String, String)]) -> Result<RunConfig> {
        for (k, _) in pairs {
            if !KEYS.contains(&k.as_str()) {
                return Err(CdgError::config(format!("unknown key '{k}'")));
            }
        }
        let id = pairs
            .iter()
            .rev()
            .find(|(k, _)| k == "problem.id")
            .map(|(_, v)| v.clone())
            .ok_or_else(|| CdgError::config("problem.id is required"))?;
        let problem = find(&id)?;
        let mut cfg = RunConfig {
            k: problem.k,
            nx: problem.n.0,
            ny: problem.n.1,
            options: SchemeOptions {
                well_balanced: true,
                positivity: true,
                weno: problem.weno,
                tvb_m: problem.tvb_m.clone(),
            },
            control: StepControl::for_degree(problem.k, problem.t_final),
            t_final_set: false,
            write_dual: false,
            every: 0,
            ladder: Vec::new(),
            problem,
        };
        let mut cfl_set = false;
        for (k, v) in pairs {
            match k.as_str() {
                "problem.id" => {}
                "problem.eta" => cfg.problem.eta = num(k, v)?,
                "mesh.n" => {
                    let (a, b) = match v.split_once('x') {
                        Some((a, b)) => (num(k, a.trim())?, num(k, b.trim())?),
                        None => {
                            let n: usize = num(k, v)?;
                            (n, n)
                        }
                    };
                    cfg.nx = a;
                    cfg.ny = if cfg.problem.dim == 1 { 1 } else { b };
                }
                "mesh.nx" => cfg.nx = num(k, v)?,
                "mesh.ny" => cfg.ny = num(k, v)?,
                "scheme.k" => cfg.k = num(k, v)?,
                "scheme.well_balanced" => cfg.options.well_balanced = boolean(k, v)?,
                "limiter.pp" => cfg.options.positivity = boolean(k, v)?,
                "limiter.weno" => cfg.options.weno = boolean(k, v)?,
                "limiter.tvb_m" => cfg.options.tvb_m = list(k, v)?,
                "time.cfl" => {
                    cfg.control.cfl = num(k, v)?;
                    cfl_set = true;
                }
                "time.theta" => cfg.control.theta = num(k, v)?,
                "time.t_final" => {
                    cfg.control.t_final = num(k, v)?;
                    cfg.t_final_set = true;
                }
                "time.dt_mode" => {
                    cfg.control.dt_mode = match v.as_str() {
                        "cfl" => DtMode::Cfl,
                        "accuracy_matched" => DtMode::AccuracyMatched,
                        _ => return Err(CdgError::config(format!("{k}: expected cfl or accuracy_matched, got '{v}'"))),
                    }
                }
                "time.max_steps" => cfg.control.max_steps = num(k, v)?,
                "output.dual" => cfg.write_dual = boolean(k, v)?,
                "output.every" => cfg.every = num(k, v)?,
                "convergence.ladder" => cfg.ladder = list(k, v)?,
                _ => unreachable!(),
            }
        }
        if !cfl_set {
            cfg.control.cfl = StepControl::for_degree(cfg.k, 0.0).cfl;
        }
        cfg.problem.k = cfg.k;
        cfg.problem.n = (cfg.nx, cfg.ny);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_text(text: &str, overrides: &[(String, String)]) -> Result<RunConfig> {
        let mut pairs = parse(text)?;
        pairs.extend_from_slice(overrides);
        RunConfig::from_pairs(&pairs)
    }

    /// Defaults of a catalog problem with optional overrides.
    pub fn for_problem(id: &str, overrides: &[(&str, &str)]) -> Result<RunConfig> {
        let mut pairs = vec![("problem.id".to_string(), id.to_string())];
        pairs.extend(overrides.iter().map(|(k, v)| (k.to_string(), v.to_string())));
        RunConfig::from_pairs(&pairs)
    }

    pub fn validate(&self) -> Result<()> {
        self.control.validate()?;
        let dim = self.problem.dim;
        match dim {
            1 if !(1..=3).contains(&self.k) => {
                return Err(CdgError::config(format!("scheme.k must be 1..=3 in one dimension, got {}", self.k)))
            }
            2 if !(2..=3).contains(&self.k) => {
                return Err(CdgError::config(format!("scheme.k must be 2 or 3 in two dimensions, got {}", self.k)))
            }
            _ => {}
        }
        if self.nx < 2 || (dim == 2 && self.ny < 2) {
            return Err(CdgError::config("meshes need at least 2 cells per direction"));
        }
        if !(self.problem.eta.is_finite()) {
            return Err(CdgError::config("problem.eta must be finite"));
        }
        let nc = if dim == 1 { 3 } else { 4 };
        let m = &self.options.tvb_m;
        if !(m.len() == 1 || m.len() == nc) || m.iter().any(|&x| !(x >= 0.0)) {
            return Err(CdgError::config(format!("limiter.tvb_m needs 1 or {nc} nonnegative entries")));
        }
        Ok(())
    }
}
