mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::Failure;
use config::{ConfigError, RunConfig};

#[derive(Parser)]
#[command(name = "xasy", version, about = "Asymptotic approximations vs numeric oracles for singularly perturbed BVPs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate exact and approximate solutions on a uniform grid at one ε.
    Compare(RunArgs),
    /// Integrated errors and boundary residuals over an ε grid.
    Sweep(RunArgs),
    /// Coefficient families of the nonlinear array and the K/L tables.
    Coeffs(RunArgs),
}

#[derive(Args, Debug, Default)]
struct RunArgs {
    /// key = value file; flags given on the command line take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// linear, nonlinear or general-linear
    #[arg(long)]
    problem: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    /// One value, or a comma-separated increasing list.
    #[arg(long)]
    eps: Option<String>,
    /// a:b:step
    #[arg(long = "eps-grid")]
    eps_grid: Option<String>,
    /// Comma-separated method names.
    #[arg(long)]
    methods: Option<String>,
    #[arg(long)]
    out: Option<String>,
    #[arg(long = "grid-points")]
    grid_points: Option<String>,
    #[arg(long = "R")]
    r: Option<String>,
    #[arg(long = "P")]
    p: Option<String>,
    #[arg(long = "N")]
    n: Option<String>,
    #[arg(long)]
    kmax: Option<String>,
    /// general-linear c(x): coefficients of 1, x, x², …
    #[arg(long, allow_hyphen_values = true)]
    c: Option<String>,
    /// general-linear d(x): coefficients of 1, x, x², …
    #[arg(long, allow_hyphen_values = true)]
    d: Option<String>,
    #[arg(long = "kl-nmax")]
    kl_nmax: Option<String>,
}

impl RunArgs {
    fn into_config(self) -> Result<RunConfig, ConfigError> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &self.config {
            cfg.apply_file(path)?;
        }
        if self.eps.is_some() && self.eps_grid.is_some() {
            return Err(ConfigError::new("eps-grid", "give either --eps or --eps-grid, not both"));
        }
        let flags = [
            ("problem", self.problem),
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("eps", self.eps),
            ("eps-grid", self.eps_grid),
            ("methods", self.methods),
            ("out", self.out),
            ("grid-points", self.grid_points),
            ("R", self.r),
            ("P", self.p),
            ("N", self.n),
            ("kmax", self.kmax),
            ("c", self.c),
            ("d", self.d),
            ("kl-nmax", self.kl_nmax),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                cfg.set(key, &v)?;
            }
        }
        Ok(cfg)
    }
}

fn run(command: Command) -> Result<bool, Failure> {
    match command {
        Command::Compare(args) => {
            let out = commands::compare(&args.into_config()?)?;
            eprintln!("wrote {}", out.display());
            Ok(true)
        }
        Command::Sweep(args) => {
            let (out, all_ok) = commands::sweep(&args.into_config()?)?;
            eprintln!("wrote {}", out.display());
            Ok(all_ok)
        }
        Command::Coeffs(args) => {
            for f in commands::coeffs(&args.into_config()?)? {
                eprintln!("wrote {}", f.display());
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.exit_code())
        }
    }
}
