use std::fmt;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use xasy_core::analysis::{build_approximation, build_oracle, sweep_point, uniform_grid, ErrorReport, ProblemKind};
use xasy_core::nonlinear::{gfun_taylor, kl_coefficients, Families};
use xasy_core::{Error, Validity};

use crate::config::{ConfigError, ProblemName, RunConfig};

#[derive(Debug)]
pub enum Failure {
    Config(ConfigError),
    Numerical(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Config(_) => 1,
            Failure::Numerical(_) => 2,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Config(e) => write!(f, "{e}"),
            Failure::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e)
    }
}

/// Errors caused by what was asked for map to exit 1, the rest to exit 2.
fn classify(field: &str, e: Error) -> Failure {
    match e {
        Error::ContractViolation(_) | Error::MissingCoefficient { .. } | Error::Inadmissible { .. } | Error::InvalidProblem(_) => {
            Failure::Config(ConfigError::new(field, e.to_string()))
        }
        other => Failure::Numerical(other.to_string()),
    }
}

fn io(path: &Path, e: std::io::Error) -> Failure {
    Failure::Config(ConfigError::new("out", format!("{}: {e}", path.display())))
}

pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_csv(path: &Path, header: &[String], rows: &[Vec<f64>]) -> Result<(), Failure> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
    }
    let mut text = header.join(",");
    text.push('\n');
    for row in rows {
        text.push_str(&row.iter().map(|&x| fmt_real(x)).collect::<Vec<_>>().join(","));
        text.push('\n');
    }
    fs::File::create(path).and_then(|mut f| f.write_all(text.as_bytes())).map_err(|e| io(path, e))
}

fn meta_path(csv: &Path) -> PathBuf {
    let stem = csv.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "out".into());
    csv.with_file_name(format!("{stem}.meta.json"))
}

#[derive(Debug, Serialize)]
struct Warning {
    eps: f64,
    method: String,
    message: String,
}

#[derive(Debug, Serialize)]
struct EntryFailure {
    eps: f64,
    message: String,
}

#[derive(Debug, Serialize)]
struct Meta<'a> {
    command: &'a str,
    rerun: Vec<String>,
    config: &'a RunConfig,
    files: Vec<String>,
    oracle_err_estimate: Vec<(f64, f64)>,
    warnings: Vec<Warning>,
    failures: Vec<EntryFailure>,
    constants: Vec<(String, f64)>,
}

impl<'a> Meta<'a> {
    fn new(command: &'a str, config: &'a RunConfig) -> Self {
        Self {
            command,
            rerun: config.rerun_args(command),
            config,
            files: Vec::new(),
            oracle_err_estimate: Vec::new(),
            warnings: Vec::new(),
            failures: Vec::new(),
            constants: Vec::new(),
        }
    }

    fn write(&self, path: &Path) -> Result<(), Failure> {
        let mut text = serde_json::to_string_pretty(self).map_err(|e| Failure::Numerical(e.to_string()))?;
        text.push('\n');
        fs::write(path, text).map_err(|e| io(path, e))
    }
}

fn out_path(config: &RunConfig, default: &str) -> PathBuf {
    config.out.clone().unwrap_or_else(|| PathBuf::from(default))
}

fn warn(meta: &mut Meta<'_>, eps: f64, method: &str, v: &Validity) {
    if let Validity::Warning(message) = v {
        eprintln!("warning: {method} at eps={eps}: {message}");
        meta.warnings.push(Warning { eps, method: method.to_string(), message: message.clone() });
    }
}

pub fn compare(config: &RunConfig) -> Result<PathBuf, Failure> {
    config.validate_eps()?;
    config.validate_grid()?;
    if config.eps.len() != 1 {
        return Err(ConfigError::new("eps", "compare takes exactly one eps value").into());
    }
    let eps = config.eps[0];
    let problem = config.problem_kind()?;
    let methods = config.methods();
    let approxs = methods
        .iter()
        .map(|&m| build_approximation(&problem, m, config.params(), eps).map_err(|e| classify("methods", e)))
        .collect::<Result<Vec<_>, _>>()?;
    let oracle = build_oracle(&problem, eps).map_err(|e| Failure::Numerical(format!("oracle at eps={eps}: {e}")))?;

    let out = out_path(config, "compare.csv");
    let mut meta = Meta::new("compare", config);
    meta.oracle_err_estimate.push((eps, oracle.err_estimate));
    for a in &approxs {
        warn(&mut meta, eps, &a.method, &a.validity(eps));
    }
    let mut header = vec!["x".to_string(), "exact".to_string()];
    header.extend(methods.iter().map(|m| m.as_str().to_string()));
    let mut rows = Vec::with_capacity(config.grid_points);
    for x in uniform_grid(config.grid_points) {
        let mut row = vec![x, oracle.eval(x)];
        for a in &approxs {
            row.push(a.eval(x, eps).map_err(|e| Failure::Numerical(format!("{} at x={x}: {e}", a.method)))?);
        }
        rows.push(row);
    }
    write_csv(&out, &header, &rows)?;
    meta.files.push(out.display().to_string());
    meta.write(&meta_path(&out))?;
    Ok(out)
}

fn thread_count() -> Result<Option<usize>, Failure> {
    match std::env::var("XASY_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(ConfigError::new("XASY_THREADS", format!("'{v}' is not a positive integer")).into()),
        },
        Err(_) => Ok(None),
    }
}

pub fn sweep(config: &RunConfig) -> Result<(PathBuf, bool), Failure> {
    config.validate_eps()?;
    config.validate_grid()?;
    let problem = config.problem_kind()?;
    let methods = config.methods();
    // Surface unsupported method/truncation choices before any oracle work.
    for &m in &methods {
        if let Err(e) = build_approximation(&problem, m, config.params(), config.eps[0]) {
            if let f @ Failure::Config(_) = classify("methods", e) {
                return Err(f);
            }
        }
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_count()? {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| Failure::Numerical(e.to_string()))?;
    let params = config.params();
    let grid_points = config.grid_points;
    let outcomes: Vec<Result<Vec<ErrorReport>, Error>> =
        pool.install(|| config.eps.par_iter().map(|&eps| sweep_point(&problem, &methods, params, eps, grid_points)).collect());

    let out = out_path(config, "sweep.csv");
    let mut meta = Meta::new("sweep", config);
    let mut header = vec!["eps".to_string()];
    header.extend(methods.iter().map(|m| format!("{m}_delta")));
    for m in &methods {
        header.push(format!("{m}_res0"));
        header.push(format!("{m}_res1"));
    }
    let mut rows = Vec::new();
    let mut all_ok = true;
    for (&eps, outcome) in config.eps.iter().zip(outcomes) {
        let mut row = vec![eps];
        match outcome {
            Ok(reports) => {
                if let Some(r) = reports.first() {
                    meta.oracle_err_estimate.push((eps, r.oracle_err_estimate));
                }
                row.extend(reports.iter().map(|r| r.delta));
                for r in &reports {
                    row.push(r.boundary_residual_0);
                    row.push(r.boundary_residual_1);
                    warn(&mut meta, eps, &r.method, &r.validity);
                }
            }
            Err(e) => {
                all_ok = false;
                eprintln!("error: eps={eps}: {e}");
                meta.failures.push(EntryFailure { eps, message: e.to_string() });
                row.extend(std::iter::repeat_n(f64::NAN, 3 * methods.len()));
            }
        }
        rows.push(row);
    }
    write_csv(&out, &header, &rows)?;
    meta.files.push(out.display().to_string());
    meta.write(&meta_path(&out))?;
    Ok((out, all_ok))
}

pub fn coeffs(config: &RunConfig) -> Result<Vec<PathBuf>, Failure> {
    if config.problem != ProblemName::Nonlinear {
        return Err(ConfigError::new("problem", "coeffs requires the nonlinear problem").into());
    }
    config.validate_grid()?;
    if config.kl_nmax < 2 {
        return Err(ConfigError::new("kl-nmax", "must be at least 2").into());
    }
    let ProblemKind::Nonlinear(p) = config.problem_kind()? else { unreachable!() };
    let n_max = config.n.max(1);
    let fam = Families::new(p.alpha, p.beta, n_max).map_err(|e| classify("N", e))?;

    let mut header = vec!["x".to_string()];
    let mut columns: Vec<Box<dyn Fn(f64) -> f64>> = Vec::new();
    for n in 0..=n_max {
        let c = fam.a0_n0(n);
        header.push(format!("a0({n};0)"));
        columns.push(Box::new(move |x| c.eval(x)));
    }
    for n in 1..=n_max {
        let c = fam.a1_n0(n);
        header.push(format!("a1({n};0)"));
        columns.push(Box::new(move |x| c.eval(x)));
    }
    for n in 1..=n_max {
        let c = fam.am1_n1(n);
        header.push(format!("am1({n};1)"));
        columns.push(Box::new(move |x| c.eval(x)));
    }
    for n in 0..=n_max {
        let c = fam.a0_n1(n);
        header.push(format!("a0({n};1)"));
        columns.push(Box::new(move |x| c.eval(x)));
    }
    let rows: Vec<Vec<f64>> = uniform_grid(config.grid_points)
        .into_iter()
        .map(|x| std::iter::once(x).chain(columns.iter().map(|f| f(x))).collect())
        .collect();

    let out = out_path(config, "coeffs.csv");
    write_csv(&out, &header, &rows)?;
    let kl_path = out.with_file_name("kl.csv");
    let kl = kl_coefficients(config.kl_nmax).map_err(|e| classify("kl-nmax", e))?;
    let (kg, lg) = gfun_taylor(config.kl_nmax);
    let kl_rows: Vec<Vec<f64>> = (2..=config.kl_nmax).map(|n| vec![n as f64, kl.k[n], kl.l[n], kg[n], lg[n]]).collect();
    let kl_header: Vec<String> = ["n", "K", "L", "K_gfun", "L_gfun"].iter().map(|s| s.to_string()).collect();
    write_kl(&kl_path, &kl_header, &kl_rows)?;

    let constants = vec![
        ("a0(0;1)".to_string(), fam.closed.d0),
        ("a1(1;0)(0)".to_string(), fam.closed.a1_10.eval(0.0)),
        ("K1".to_string(), fam.closed.k1),
        ("K2".to_string(), fam.closed.k2),
        ("am1(0;2)".to_string(), fam.am1_02()),
        ("a0(0;2)".to_string(), fam.a0_02()),
    ];
    for (name, v) in &constants {
        println!("{name} = {v}");
    }
    let mut meta = Meta::new("coeffs", config);
    meta.files = vec![out.display().to_string(), kl_path.display().to_string()];
    meta.constants = constants;
    meta.write(&meta_path(&out))?;
    Ok(vec![out, kl_path])
}

/// `n` is written as an integer.
fn write_kl(path: &Path, header: &[String], rows: &[Vec<f64>]) -> Result<(), Failure> {
    let mut text = header.join(",");
    text.push('\n');
    for r in rows {
        text.push_str(&format!("{}", r[0] as usize));
        for &x in &r[1..] {
            text.push(',');
            text.push_str(&fmt_real(x));
        }
        text.push('\n');
    }
    fs::write(path, text).map_err(|e| io(path, e))
}
