//! Flat `key = value` run configuration shared by files and flags.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use xasy_core::analysis::{Method, MethodParams, ProblemKind};
use xasy_core::{LaurentPoly, LinearProblem, NonlinearProblem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProblemName {
    Linear,
    Nonlinear,
    GeneralLinear,
}

impl ProblemName {
    pub fn as_str(self) -> &'static str {
        match self {
            ProblemName::Linear => "linear",
            ProblemName::Nonlinear => "nonlinear",
            ProblemName::GeneralLinear => "general-linear",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(field: &str, message: impl Into<String>) -> Self {
        Self { field: field.to_string(), message: message.into() }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config field '{}': {}", self.field, self.message)
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub problem: ProblemName,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub eps: Vec<f64>,
    pub methods: Vec<String>,
    pub out: Option<PathBuf>,
    pub grid_points: usize,
    #[serde(rename = "R")]
    pub r: usize,
    #[serde(rename = "P")]
    pub p: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub kmax: usize,
    /// Polynomial coefficients (ascending powers of x) for the general problem.
    pub c: Vec<f64>,
    pub d: Vec<f64>,
    pub kl_nmax: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        let params = MethodParams::default();
        Self {
            problem: ProblemName::Linear,
            alpha: None,
            beta: None,
            eps: Vec::new(),
            methods: Vec::new(),
            out: None,
            grid_points: 401,
            r: params.r,
            p: params.p,
            n: params.n,
            kmax: params.k_max,
            c: Vec::new(),
            d: Vec::new(),
            kl_nmax: 20,
        }
    }
}

pub const KEYS: [&str; 15] = ["problem", "alpha", "beta", "eps", "eps-grid", "methods", "out", "grid-points", "R", "P", "N", "kmax", "c", "d", "kl-nmax"];

fn real(field: &str, v: &str) -> Result<f64, ConfigError> {
    let x: f64 = v.trim().parse().map_err(|_| ConfigError::new(field, format!("'{v}' is not a number")))?;
    if !x.is_finite() {
        return Err(ConfigError::new(field, format!("'{v}' is not finite")));
    }
    Ok(x)
}

fn count(field: &str, v: &str) -> Result<usize, ConfigError> {
    v.trim().parse().map_err(|_| ConfigError::new(field, format!("'{v}' is not a non-negative integer")))
}

fn reals(field: &str, v: &str) -> Result<Vec<f64>, ConfigError> {
    v.split(',').filter(|s| !s.trim().is_empty()).map(|s| real(field, s)).collect()
}

/// `a:b:step`, inclusive of `b` up to rounding.
pub fn parse_grid(v: &str) -> Result<Vec<f64>, ConfigError> {
    let parts: Vec<&str> = v.split(':').collect();
    if parts.len() != 3 {
        return Err(ConfigError::new("eps-grid", format!("expected a:b:step, got '{v}'")));
    }
    let (a, b, step) = (real("eps-grid", parts[0])?, real("eps-grid", parts[1])?, real("eps-grid", parts[2])?);
    if step <= 0.0 {
        return Err(ConfigError::new("eps-grid", "step must be positive"));
    }
    if b < a {
        return Ok(Vec::new());
    }
    let n = ((b - a) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|k| a + k as f64 * step).collect())
}

impl RunConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let v = value.trim();
        match key {
            "problem" => {
                self.problem = match v {
                    "linear" => ProblemName::Linear,
                    "nonlinear" => ProblemName::Nonlinear,
                    "general-linear" => ProblemName::GeneralLinear,
                    _ => return Err(ConfigError::new(key, format!("unknown problem '{v}' (linear, nonlinear, general-linear)"))),
                }
            }
            "alpha" => self.alpha = Some(real(key, v)?),
            "beta" => self.beta = Some(real(key, v)?),
            "eps" => self.eps = reals(key, v)?,
            "eps-grid" => self.eps = parse_grid(v)?,
            "methods" => {
                self.methods = v.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
                for m in &self.methods {
                    m.parse::<Method>().map_err(|e| ConfigError::new(key, e.to_string()))?;
                }
            }
            "out" => self.out = Some(PathBuf::from(v)),
            "grid-points" => self.grid_points = count(key, v)?,
            "R" => self.r = count(key, v)?,
            "P" => self.p = count(key, v)?,
            "N" => self.n = count(key, v)?,
            "kmax" => self.kmax = count(key, v)?,
            "c" => self.c = reals(key, v)?,
            "d" => self.d = reals(key, v)?,
            "kl-nmax" => self.kl_nmax = count(key, v)?,
            _ => return Err(ConfigError::new(key, format!("unknown key; valid keys: {}", KEYS.join(", ")))),
        }
        Ok(())
    }

    /// Apply a `key = value` file. Blank lines and `#` comments are skipped.
    pub fn apply_file(&mut self, path: &Path) -> Result<(), ConfigError> {
        let text = fs::read_to_string(path).map_err(|e| ConfigError::new("config", format!("{}: {e}", path.display())))?;
        self.apply_text(&text)
    }

    pub fn apply_text(&mut self, text: &str) -> Result<(), ConfigError> {
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| ConfigError::new("config", format!("line {}: expected key = value, got '{line}'", i + 1)))?;
            self.set(k.trim(), v)?;
        }
        Ok(())
    }

    pub fn params(&self) -> MethodParams {
        MethodParams { r: self.r, p: self.p, n: self.n, k_max: self.kmax }
    }

    pub fn methods(&self) -> Vec<Method> {
        let names: Vec<&str> = if self.methods.is_empty() {
            match self.problem {
                ProblemName::Linear => vec!["mae", "wkb", "psum"],
                ProblemName::Nonlinear => vec!["mae", "wkb", "n-resum"],
                ProblemName::GeneralLinear => vec!["assemble"],
            }
        } else {
            self.methods.iter().map(String::as_str).collect()
        };
        names.iter().map(|m| m.parse().expect("validated in set")).collect()
    }

    fn boundary(&self) -> Result<(f64, f64), ConfigError> {
        let alpha = self.alpha.ok_or_else(|| ConfigError::new("alpha", "required"))?;
        let beta = self.beta.ok_or_else(|| ConfigError::new("beta", "required"))?;
        Ok((alpha, beta))
    }

    pub fn problem_kind(&self) -> Result<ProblemKind, ConfigError> {
        let (alpha, beta) = self.boundary()?;
        match self.problem {
            ProblemName::Linear => Ok(ProblemKind::Linear { alpha, beta }),
            ProblemName::Nonlinear => NonlinearProblem::new(alpha, beta).map(ProblemKind::Nonlinear).map_err(|e| ConfigError::new("beta", e.to_string())),
            ProblemName::GeneralLinear => {
                let poly = |field: &str, coeffs: &[f64]| {
                    if coeffs.is_empty() {
                        return Err(ConfigError::new(field, "required for general-linear (comma-separated coefficients of 1, x, x², …)"));
                    }
                    Ok(LaurentPoly { scale: 1.0, shift: 0.0, low: 0, coeffs: coeffs.to_vec() })
                };
                let (c, d) = (poly("c", &self.c)?, poly("d", &self.d)?);
                LinearProblem::new(c.into(), d.into(), alpha, beta)
                    .map(ProblemKind::GeneralLinear)
                    .map_err(|e| ConfigError::new("c", e.to_string()))
            }
        }
    }

    pub fn validate_eps(&self) -> Result<(), ConfigError> {
        if self.eps.is_empty() {
            return Err(ConfigError::new("eps", "no eps values given"));
        }
        if let Some(bad) = self.eps.iter().find(|e| **e <= 0.0) {
            return Err(ConfigError::new("eps", format!("{bad} is not positive")));
        }
        if self.eps.windows(2).any(|w| w[1] <= w[0]) {
            return Err(ConfigError::new("eps", "values must be strictly increasing"));
        }
        Ok(())
    }

    pub fn validate_grid(&self) -> Result<(), ConfigError> {
        if self.grid_points < 2 {
            return Err(ConfigError::new("grid-points", "need at least 2 points"));
        }
        Ok(())
    }

    /// Command line that reproduces this configuration.
    pub fn rerun_args(&self, command: &str) -> Vec<String> {
        let mut a = vec![command.to_string(), "--problem".into(), self.problem.as_str().into()];
        let mut push = |k: &str, v: String| {
            a.push(format!("--{k}"));
            a.push(v);
        };
        if let Some(x) = self.alpha {
            push("alpha", x.to_string());
        }
        if let Some(x) = self.beta {
            push("beta", x.to_string());
        }
        let join = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        if !self.eps.is_empty() {
            push("eps", join(&self.eps));
        }
        push("methods", self.methods().iter().map(|m| m.as_str()).collect::<Vec<_>>().join(","));
        push("grid-points", self.grid_points.to_string());
        push("R", self.r.to_string());
        push("P", self.p.to_string());
        push("N", self.n.to_string());
        push("kmax", self.kmax.to_string());
        if !self.c.is_empty() {
            push("c", join(&self.c));
        }
        if !self.d.is_empty() {
            push("d", join(&self.d));
        }
        push("kl-nmax", self.kl_nmax.to_string());
        if let Some(out) = &self.out {
            push("out", out.display().to_string());
        }
        a
    }
}
