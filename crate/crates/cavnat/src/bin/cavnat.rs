//! Command-line front end: single-point simulation, parameter sweeps over
//! any backend, figure reproduction presets, and a cross-backend validation
//! run. Exit codes: 0 success, 1 configuration error, 2 solver error.

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cavnat::error::CavnatError;
use cavnat::export::{csv_string, export_csv, render_plot};
use cavnat::network::Interference;
use cavnat::sweep::{
    bell_shape_test, find_peak, linear_grid, log_grid, sweep_dephasing, sweep_static_disorder,
    ModelKind, SimConfig, SweepResult,
};

#[derive(Parser)]
#[command(name = "cavnat", version, about = "Noise-assisted transport in coupled optical-cavity networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a single transmission value for one configuration.
    Simulate(SimulateArgs),
    /// Sweep disorder or dephasing over a grid and export the curve.
    Sweep(SweepArgs),
    /// Rebuild one of the reference figures with preset grids.
    Reproduce(ReproduceArgs),
    /// Compare the Fock and moment backends over a parameter grid.
    ValidateBackends(ValidateArgs),
}

#[derive(Args)]
struct ConfigArgs {
    /// JSON configuration file; command-line flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    model: Option<CliModel>,
    /// Static disorder (cavity-FWHM or (ω2−ω1)/g01 units).
    #[arg(long)]
    disorder: Option<f64>,
    /// Dephasing (δx window or γ2/(ω2−ω1) units).
    #[arg(long)]
    dephasing: Option<f64>,
    #[arg(long)]
    interference: Option<CliInterference>,
    /// Fock-backend excitation cutoff.
    #[arg(long)]
    n_max: Option<usize>,
    /// Sample count for the classical dephasing window (odd).
    #[arg(long)]
    n_samples: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum CliModel {
    Fock,
    Moment,
    #[value(name = "classical-mz")]
    ClassicalMz,
    #[value(name = "classical-full")]
    ClassicalFull,
}

impl From<CliModel> for ModelKind {
    fn from(m: CliModel) -> Self {
        match m {
            CliModel::Fock => ModelKind::Fock,
            CliModel::Moment => ModelKind::Moment,
            CliModel::ClassicalMz => ModelKind::ClassicalMz,
            CliModel::ClassicalFull => ModelKind::ClassicalFull,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CliInterference {
    Constructive,
    Destructive,
}

impl ConfigArgs {
    fn resolve(&self) -> Result<SimConfig, CavnatError> {
        let mut cfg = match &self.config {
            Some(path) => SimConfig::parse(&std::fs::read_to_string(path)?)?,
            None => SimConfig::default(),
        };
        if let Some(m) = self.model {
            cfg.model = m.into();
        }
        if let Some(d) = self.disorder {
            cfg.disorder = d;
        }
        if let Some(d) = self.dephasing {
            cfg.dephasing = d;
        }
        if let Some(i) = self.interference {
            let i = match i {
                CliInterference::Constructive => Interference::Constructive,
                CliInterference::Destructive => Interference::Destructive,
            };
            cfg.quantum.interference = i;
            cfg.optical.interference = i;
        }
        if let Some(n) = self.n_max {
            cfg.n_max = n;
        }
        if let Some(n) = self.n_samples {
            cfg.n_samples = n;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    config: ConfigArgs,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    config: ConfigArgs,
    #[arg(long)]
    param: SweepParam,
    /// Grid as a:b:n (n points from a to b inclusive).
    #[arg(long)]
    grid: String,
    /// Space the grid logarithmically (requires a > 0).
    #[arg(long)]
    log: bool,
    /// CSV output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also render an SVG plot.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepParam {
    Dx,
    Dephasing,
}

#[derive(Args)]
struct ReproduceArgs {
    #[arg(value_parser = ["fig2", "fig3"])]
    figure: String,
    /// Classical scattering model (full setup).
    #[arg(long, conflicts_with = "quantum")]
    classical: bool,
    /// Quantum moment backend (the default).
    #[arg(long)]
    quantum: bool,
    /// CSV output path; defaults to <figure>-<side>.csv.
    #[arg(long)]
    out: Option<PathBuf>,
    /// SVG output path; defaults to <figure>-<side>.svg.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    /// Fock-backend excitation cutoff.
    #[arg(long, default_value_t = 2)]
    n_max: usize,
    /// Maximum allowed relative deviation between backends.
    #[arg(long, default_value_t = 2e-3)]
    tolerance: f64,
}

fn parse_grid_spec(spec: &str, log: bool) -> Result<Vec<f64>, CavnatError> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(CavnatError::Validation(format!(
            "grid must be a:b:n, got \"{spec}\""
        )));
    }
    let a = f64::from_str(parts[0])
        .map_err(|_| CavnatError::Validation(format!("bad grid start \"{}\"", parts[0])))?;
    let b = f64::from_str(parts[1])
        .map_err(|_| CavnatError::Validation(format!("bad grid end \"{}\"", parts[1])))?;
    let n = usize::from_str(parts[2])
        .map_err(|_| CavnatError::Validation(format!("bad grid count \"{}\"", parts[2])))?;
    if log { log_grid(a, b, n) } else { linear_grid(a, b, n) }
}

fn emit(sweep: &SweepResult, out: Option<&PathBuf>, svg: Option<&PathBuf>) -> Result<(), CavnatError> {
    match out {
        Some(path) => {
            export_csv(sweep, path)?;
            eprintln!("wrote {}", path.display());
        }
        None => print!("{}", csv_string(sweep)?),
    }
    if let Some(path) = svg {
        render_plot(sweep, path)?;
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_simulate(args: &SimulateArgs) -> Result<(), CavnatError> {
    let cfg = args.config.resolve()?;
    let raw = cfg.transmission()?;
    let reference = cfg.reference()?;
    println!("model: {}", cfg.model);
    println!("raw transmission: {raw}");
    println!("reference: {reference}");
    println!("normalized transmission: {}", raw / reference);
    Ok(())
}

fn cmd_sweep(args: &SweepArgs) -> Result<(), CavnatError> {
    let cfg = args.config.resolve()?;
    let grid = parse_grid_spec(&args.grid, args.log)?;
    let sweep = match args.param {
        SweepParam::Dx => sweep_static_disorder(&cfg, &grid)?,
        SweepParam::Dephasing => sweep_dephasing(&cfg, cfg.disorder, &grid, args.log)?,
    };
    emit(&sweep, args.out.as_ref(), args.svg.as_ref())
}

fn cmd_reproduce(args: &ReproduceArgs) -> Result<(), CavnatError> {
    let classical = args.classical;
    let side = if classical { "classical" } else { "quantum" };
    let cfg = SimConfig {
        model: if classical { ModelKind::ClassicalFull } else { ModelKind::Moment },
        ..SimConfig::default()
    };
    let sweep = match args.figure.as_str() {
        "fig2" => {
            let grid = linear_grid(0.0, 10.0, 41)?;
            sweep_static_disorder(&cfg, &grid)?
        }
        "fig3" => {
            if classical {
                let grid = linear_grid(0.0, 6.0, 25)?;
                sweep_dephasing(&cfg, 2.0, &grid, false)?
            } else {
                let grid = log_grid(0.01, 100.0, 25)?;
                sweep_dephasing(&cfg, 5.0, &grid, true)?
            }
        }
        other => {
            return Err(CavnatError::Validation(format!("unknown figure \"{other}\"")));
        }
    };
    let out = args
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("{}-{side}.csv", args.figure)));
    let svg = args
        .svg
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("{}-{side}.svg", args.figure)));
    emit(&sweep, Some(&out), Some(&svg))?;
    let (x, t, interior) = find_peak(&sweep)?;
    println!("peak: {} = {x}, normalized T = {t}, interior = {interior}", sweep.parameter);
    println!("bell shape (10% margins): {}", bell_shape_test(&sweep, 0.1, 0.1)?);
    Ok(())
}

fn cmd_validate(args: &ValidateArgs) -> Result<(), CavnatError> {
    let mut worst: f64 = 0.0;
    let mut worst_at = String::new();
    for interference in [Interference::Destructive, Interference::Constructive] {
        for &disorder in &[0.0, 1.0, 3.0, 5.0, 8.0] {
            for &dephasing in &[0.0, 1.0] {
                let base = SimConfig {
                    n_max: args.n_max,
                    disorder,
                    dephasing,
                    ..SimConfig::default()
                };
                let mut cfg = SimConfig { model: ModelKind::Moment, ..base };
                cfg.quantum.interference = interference;
                let t_moment = cfg.transmission()?;
                cfg.model = ModelKind::Fock;
                let t_fock = cfg.transmission()?;
                let rel = (t_fock - t_moment).abs() / t_moment;
                let tag = format!(
                    "interference = {interference:?}, disorder = {disorder}, dephasing = {dephasing}"
                );
                println!("{tag}: moment = {t_moment:.6e}, fock = {t_fock:.6e}, rel = {rel:.3e}");
                if rel > worst {
                    worst = rel;
                    worst_at = tag;
                }
            }
        }
    }
    println!("worst relative deviation: {worst:.3e} at {worst_at}");
    if worst > args.tolerance {
        return Err(CavnatError::Solver(format!(
            "backend deviation {worst:.3e} exceeds tolerance {:.3e}",
            args.tolerance
        )));
    }
    println!("backends agree within {:.1e}", args.tolerance);
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are not errors.
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let result = match &cli.command {
        Command::Simulate(args) => cmd_simulate(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Reproduce(args) => cmd_reproduce(args),
        Command::ValidateBackends(args) => cmd_validate(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                CavnatError::Solver(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
