//! Command-line workbench around the `ionvit` library.
//!
//! Exit codes: 0 success, 2 invalid arguments or config, 3 numerical failure
//! (singularity or instability where forbidden), 4 I/O failure.

mod config;

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use config::Config;
use ionvit::dressed::{build_basis, build_hamiltonian, default_cap, dressed_pair};
use ionvit::error::Error;
use ionvit::oracle::{build_drift, fluct_kind, stability};
use ionvit::output::{
    emit_fluctuation_csv, emit_json, emit_levels_csv, emit_response_csv, emit_stability_csv,
    emit_svg, emit_sweep_csv, fluctuation_plot, render_fluctuation_csv, render_levels_csv,
    render_response_csv, render_stability_csv, render_sweep_csv, response_plot, sweep_plot,
    StabilityRow,
};
use ionvit::params::{ModelParams, SidebandCase};
use ionvit::spectra::{spectrum_series, uniform_grid};
use ionvit::sweep::{response_series, run_sweep, AxisName, AxisSpec, Quantity, SweepSpec};

#[derive(Parser)]
#[command(
    name = "ionvit",
    version,
    about = "Steady-state response and fluctuation spectra of two trapped-ion ensembles coupled to a shared vibrational mode"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Steady-state response intensities over a detuning range
    Response(ResponseArgs),
    /// Fluctuation spectra over a frequency range at fixed detuning
    Fluctuation(FluctuationArgs),
    /// One- or two-axis parameter sweep of a response or spectrum quantity
    Sweep(SweepArgs),
    /// Drift-matrix stability of the fluctuation dynamics over detunings
    Stability(StabilityArgs),
    /// Truncated-basis level structure and the dressed two-level pair
    Dressed(DressedArgs),
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Flat key-value config file; command-line flags override it
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Sideband case: red or blue
    #[arg(long)]
    case: Option<String>,
    /// Coupling of the driven ensemble to the vibration
    #[arg(long = "g-a", value_name = "RATE")]
    g_a: Option<f64>,
    /// Coupling of the right ensemble to the vibration
    #[arg(long = "g-b", value_name = "RATE")]
    g_b: Option<f64>,
    /// Decay rate of collective mode A
    #[arg(long = "gamma-a", value_name = "RATE")]
    gamma_a: Option<f64>,
    /// Decay rate of collective mode B
    #[arg(long = "gamma-b", value_name = "RATE")]
    gamma_b: Option<f64>,
    /// Vibrational heating rate (the unit scale)
    #[arg(long, value_name = "RATE")]
    kappa: Option<f64>,
    /// Drive strength on mode A
    #[arg(long, value_name = "RATE")]
    chi: Option<f64>,
    /// Thermal occupation of the vibrational bath
    #[arg(long = "n-vib", value_name = "N")]
    n_vib: Option<f64>,
    /// Thermal occupation of the internal-transition baths
    #[arg(long = "n-eg", value_name = "N")]
    n_eg: Option<f64>,
    /// Write the dataset as CSV to this file (default: print to stdout)
    #[arg(long, value_name = "FILE.csv")]
    out: Option<PathBuf>,
    /// Write a line plot of the dataset as SVG to this file
    #[arg(long, value_name = "FILE.svg")]
    svg: Option<PathBuf>,
    /// Write the dataset as JSON to this file
    #[arg(long, value_name = "FILE.json")]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct ResponseArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Detuning grid lo:hi:n (default -20:20:2001)
    #[arg(
        long = "delta-range",
        value_name = "LO:HI:N",
        allow_hyphen_values = true
    )]
    delta_range: Option<String>,
}

#[derive(Args)]
struct FluctuationArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Fixed probe detuning (default 0)
    #[arg(long, allow_negative_numbers = true)]
    delta: Option<f64>,
    /// Frequency grid lo:hi:n (default -20:20:2001)
    #[arg(
        long = "omega-range",
        value_name = "LO:HI:N",
        allow_hyphen_values = true
    )]
    omega_range: Option<String>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Primary axis name:lo:hi:n (names: delta, omega, g_a, g_b, gamma_a, gamma_b)
    #[arg(long, value_name = "NAME:LO:HI:N", allow_hyphen_values = true)]
    axis1: Option<String>,
    /// Optional secondary axis name:lo:hi:n (one curve per value)
    #[arg(long, value_name = "NAME:LO:HI:N", allow_hyphen_values = true)]
    axis2: Option<String>,
    /// Quantity: response-a, response-b, spectrum-a, spectrum-b, spectrum-c
    #[arg(long)]
    quantity: Option<String>,
    /// Fixed probe detuning when delta is not an axis (default 0)
    #[arg(long, allow_negative_numbers = true)]
    delta: Option<f64>,
    /// Fixed frequency when omega is not an axis (default 0)
    #[arg(long, allow_negative_numbers = true)]
    omega: Option<f64>,
    /// Worker thread count for the sweep (default: rayon's choice)
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct StabilityArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Single probe detuning (default 0)
    #[arg(long, allow_negative_numbers = true)]
    delta: Option<f64>,
    /// Detuning grid lo:hi:n (overrides --delta)
    #[arg(
        long = "delta-range",
        value_name = "LO:HI:N",
        allow_hyphen_values = true
    )]
    delta_range: Option<String>,
}

#[derive(Args)]
struct DressedArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Probe detuning entering the level energies (default 0)
    #[arg(long, allow_negative_numbers = true)]
    delta: Option<f64>,
    /// Total-excitation cap of the Fock basis (default 1 red, 2 blue)
    #[arg(long)]
    cap: Option<u32>,
    /// Include the drive term chi (A^dag + A) in the truncated Hamiltonian
    #[arg(long = "include-drive")]
    include_drive: bool,
}

/// "lo:hi:n" grid description.
struct RangeSpec {
    lo: f64,
    hi: f64,
    n: usize,
}

impl FromStr for RangeSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::InvalidParams(format!(
                "range '{s}' must have the form lo:hi:n"
            )));
        }
        let lo: f64 = parts[0]
            .parse()
            .map_err(|_| Error::InvalidParams(format!("range '{s}': bad lower bound")))?;
        let hi: f64 = parts[1]
            .parse()
            .map_err(|_| Error::InvalidParams(format!("range '{s}': bad upper bound")))?;
        let n: usize = parts[2]
            .parse()
            .map_err(|_| Error::InvalidParams(format!("range '{s}': bad point count")))?;
        Ok(RangeSpec { lo, hi, n })
    }
}

fn parse_axis(s: &str) -> Result<AxisSpec, Error> {
    let Some((name, rest)) = s.split_once(':') else {
        return Err(Error::InvalidParams(format!(
            "axis '{s}' must have the form name:lo:hi:n"
        )));
    };
    let name = AxisName::from_str(name)?;
    let range = RangeSpec::from_str(rest)?;
    Ok(AxisSpec::new(name, range.lo, range.hi, range.n))
}

/// CLI value if set, else config value, else default.
fn resolve<T: Clone>(
    cli: Option<T>,
    cfg: Result<Option<T>, Error>,
    default: T,
) -> Result<T, Error> {
    Ok(cli.or(cfg?).unwrap_or(default))
}

fn required_f64(cli: Option<f64>, cfg: &Config, key: &str, flag: &str) -> Result<f64, Error> {
    cli.or(cfg.get_f64(key)?).ok_or_else(|| {
        Error::InvalidParams(format!(
            "missing required parameter: pass --{flag} or set '{key}' in the config"
        ))
    })
}

fn resolve_params(common: &CommonArgs, cfg: &Config) -> Result<ModelParams, Error> {
    let case_str = common
        .case
        .clone()
        .or_else(|| cfg.get("case").map(String::from))
        .unwrap_or_else(|| "red".into());
    let params = ModelParams {
        case: SidebandCase::from_str(&case_str)?,
        g_a: required_f64(common.g_a, cfg, "g_a", "g-a")?,
        g_b: required_f64(common.g_b, cfg, "g_b", "g-b")?,
        gamma_a: required_f64(common.gamma_a, cfg, "gamma_a", "gamma-a")?,
        gamma_b: required_f64(common.gamma_b, cfg, "gamma_b", "gamma-b")?,
        kappa: resolve(common.kappa, cfg.get_f64("kappa"), 1.0)?,
        chi: resolve(common.chi, cfg.get_f64("chi"), 1.0)?,
        n_vib: resolve(common.n_vib, cfg.get_f64("n_vib"), 0.0)?,
        n_eg: resolve(common.n_eg, cfg.get_f64("n_eg"), 0.0)?,
    };
    params.validate()?;
    Ok(params)
}

fn resolve_range(
    cli: &Option<String>,
    cfg: &Config,
    key: &str,
    default: (f64, f64, usize),
) -> Result<Vec<f64>, Error> {
    let spec = match cli.clone().or_else(|| cfg.get(key).map(String::from)) {
        Some(s) => RangeSpec::from_str(&s)?,
        None => RangeSpec {
            lo: default.0,
            hi: default.1,
            n: default.2,
        },
    };
    uniform_grid(spec.lo, spec.hi, spec.n)
}

struct Outputs {
    out: Option<PathBuf>,
    svg: Option<PathBuf>,
    json: Option<PathBuf>,
}

impl Outputs {
    fn resolve(common: &CommonArgs, cfg: &Config) -> Self {
        Outputs {
            out: common.out.clone().or_else(|| cfg.get_path("out")),
            svg: common.svg.clone().or_else(|| cfg.get_path("svg")),
            json: common.json.clone().or_else(|| cfg.get_path("json")),
        }
    }

    /// Print CSV to stdout when no file output was requested.
    fn stdout_fallback(&self) -> bool {
        self.out.is_none() && self.svg.is_none() && self.json.is_none()
    }
}

fn cmd_response(args: &ResponseArgs) -> Result<(), Error> {
    let cfg = Config::load(args.common.config.as_deref())?;
    let params = resolve_params(&args.common, &cfg)?;
    let grid = resolve_range(&args.delta_range, &cfg, "delta_range", (-20.0, 20.0, 2001))?;
    let outputs = Outputs::resolve(&args.common, &cfg);
    let series = response_series(&params, &grid)?;
    if let Some(path) = &outputs.out {
        emit_response_csv(&series, path)?;
    }
    if let Some(path) = &outputs.svg {
        emit_svg(&response_plot(&series), path)?;
    }
    if let Some(path) = &outputs.json {
        emit_json(&series, path)?;
    }
    if outputs.stdout_fallback() {
        print!("{}", render_response_csv(&series));
    }
    Ok(())
}

fn cmd_fluctuation(args: &FluctuationArgs) -> Result<(), Error> {
    let cfg = Config::load(args.common.config.as_deref())?;
    let params = resolve_params(&args.common, &cfg)?;
    let delta = resolve(args.delta, cfg.get_f64("delta"), 0.0)?;
    let grid = resolve_range(&args.omega_range, &cfg, "omega_range", (-20.0, 20.0, 2001))?;
    let outputs = Outputs::resolve(&args.common, &cfg);
    let series = spectrum_series(&params, delta, &grid)?;
    if let Some(path) = &outputs.out {
        emit_fluctuation_csv(&series, path)?;
    }
    if let Some(path) = &outputs.svg {
        emit_svg(&fluctuation_plot(&series), path)?;
    }
    if let Some(path) = &outputs.json {
        emit_json(&series, path)?;
    }
    if outputs.stdout_fallback() {
        print!("{}", render_fluctuation_csv(&series));
    }
    Ok(())
}

fn cmd_sweep(args: &SweepArgs) -> Result<(), Error> {
    let cfg = Config::load(args.common.config.as_deref())?;
    let params = resolve_params(&args.common, &cfg)?;
    let axis1 = args
        .axis1
        .clone()
        .or_else(|| cfg.get("axis1").map(String::from))
        .ok_or_else(|| Error::InvalidParams("sweep needs --axis1 name:lo:hi:n".into()))?;
    let axis2 = args
        .axis2
        .clone()
        .or_else(|| cfg.get("axis2").map(String::from));
    let quantity = args
        .quantity
        .clone()
        .or_else(|| cfg.get("quantity").map(String::from))
        .ok_or_else(|| Error::InvalidParams("sweep needs --quantity".into()))?;
    let spec = SweepSpec {
        base: params,
        axis1: parse_axis(&axis1)?,
        axis2: axis2.as_deref().map(parse_axis).transpose()?,
        quantity: Quantity::from_str(&quantity)?,
        delta: resolve(args.delta, cfg.get_f64("delta"), 0.0)?,
        omega: resolve(args.omega, cfg.get_f64("omega"), 0.0)?,
    };
    let threads = resolve(args.threads, cfg.get_usize("threads"), 0)?;
    let dataset = if threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::InvalidParams(format!("cannot build worker pool: {e}")))?
            .install(|| run_sweep(&spec))?
    } else {
        run_sweep(&spec)?
    };
    let outputs = Outputs::resolve(&args.common, &cfg);
    if let Some(path) = &outputs.out {
        emit_sweep_csv(&dataset, path)?;
    }
    if let Some(path) = &outputs.svg {
        emit_svg(&sweep_plot(&dataset), path)?;
    }
    if let Some(path) = &outputs.json {
        emit_json(&dataset, path)?;
    }
    if outputs.stdout_fallback() {
        print!("{}", render_sweep_csv(&dataset));
    }
    Ok(())
}

fn cmd_stability(args: &StabilityArgs) -> Result<(), Error> {
    let cfg = Config::load(args.common.config.as_deref())?;
    let params = resolve_params(&args.common, &cfg)?;
    let grid = if args.delta_range.is_some() || cfg.get("delta_range").is_some() {
        resolve_range(&args.delta_range, &cfg, "delta_range", (-20.0, 20.0, 2001))?
    } else {
        vec![resolve(args.delta, cfg.get_f64("delta"), 0.0)?]
    };
    let rows: Vec<StabilityRow> = grid
        .iter()
        .map(|&delta| {
            let report = stability(&build_drift(&params, delta, fluct_kind(params.case)));
            StabilityRow {
                case: params.case,
                delta,
                max_real_eig: report.max_real_eig,
                stable: report.stable,
            }
        })
        .collect();
    let outputs = Outputs::resolve(&args.common, &cfg);
    if let Some(path) = &outputs.out {
        emit_stability_csv(&rows, path)?;
    }
    if let Some(path) = &outputs.json {
        emit_json(&rows, path)?;
    }
    if outputs.out.is_none() && outputs.json.is_none() {
        print!("{}", render_stability_csv(&rows));
    }
    Ok(())
}

fn cmd_dressed(args: &DressedArgs) -> Result<(), Error> {
    let cfg = Config::load(args.common.config.as_deref())?;
    let params = resolve_params(&args.common, &cfg)?;
    let delta = resolve(args.delta, cfg.get_f64("delta"), 0.0)?;
    let cap = resolve(args.cap, cfg.get_u32("cap"), default_cap(params.case))?;
    let include_drive = args.include_drive || cfg.get_bool("include_drive")?.unwrap_or(false);
    let basis = build_basis(cap);
    let h = build_hamiltonian(&params, delta, &basis, include_drive);
    let levels = h.spectrum();

    eprintln!(
        "truncated basis (cap {cap}, {} states): {}",
        basis.len(),
        basis
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    );
    if params.g_a == 0.0 {
        let pair = dressed_pair(&params, delta)?;
        eprintln!(
            "dressed pair on {{{}, {}}}: energies {} and {} (splitting {})",
            pair.subspace[0],
            pair.subspace[1],
            pair.energies[0],
            pair.energies[1],
            pair.energies[1] - pair.energies[0]
        );
    } else {
        eprintln!("dressed pair skipped: needs g_a = 0 to isolate the coupled subspace");
    }

    let outputs = Outputs::resolve(&args.common, &cfg);
    if let Some(path) = &outputs.out {
        emit_levels_csv(&levels, path)?;
    }
    if let Some(path) = &outputs.json {
        emit_json(&levels, path)?;
    }
    if outputs.out.is_none() && outputs.json.is_none() {
        print!("{}", render_levels_csv(&levels));
    }
    Ok(())
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::InvalidParams(_) | Error::InvalidGrid(_) => 2,
        Error::Singular(_) | Error::Unstable(_) | Error::Diverged(_) => 3,
        Error::Io { .. } => 4,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Response(args) => cmd_response(args),
        Command::Fluctuation(args) => cmd_fluctuation(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Stability(args) => cmd_stability(args),
        Command::Dressed(args) => cmd_dressed(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
