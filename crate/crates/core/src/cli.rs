//! Command-line front end.
//!
//! Exit status: 0 on success, 1 for usage and IO problems (including invalid
//! configs), 2 when the numerics fail.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::classic::isogold_path;
use crate::equilibria::{catalog_from_json, catalog_to_json, newgold_equilibria};
use crate::error::{Error, Result};
use crate::io::{trajectory_from_csv, trajectory_from_json, trajectory_to_csv, trajectory_to_json};
use crate::model::{load_config, uniform_grid, EquilibriumCatalog, SystemConfig, Trajectory, C64};
use crate::ode::OdeOptions;
use crate::oracle::{integrate_at, OdeSystem, PhaseState};
use crate::plot::{catalog_svg, trajectory_svg};
use crate::roots::{match_labels, multiset_distance};
use crate::spectral::{closure_analysis, solve_newgold_detailed, Closure};
use crate::symmetry::{horner, horner_magnitude};

#[derive(Debug, Parser)]
#[command(
    name = "goldfish",
    version,
    about = "Solve, simulate and verify the solvable goldfish-type many-body problem"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    /// Exact solution: matrix propagation of the coefficients and root tracking.
    Spectral,
    /// Direct integration of the equations of motion.
    Ode,
    /// Closed-form solution of the classic goldfish.
    IsogoldAlgebraic,
    /// Direct integration of the classic goldfish.
    IsogoldOde,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a trajectory sampled on a uniform grid over [0, t_end].
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum, default_value = "spectral")]
        method: Method,
        /// Defaults to the config's t_end, or one period.
        #[arg(long)]
        t_end: Option<f64>,
        /// Number of sampling intervals.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Export the equilibrium catalog (ω = 1) as JSON.
    Equilibria {
        #[arg(long)]
        n: i64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Cross-check the exact solution against direct integration and test periodicity.
    Verify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Span of the cross-method comparison; defaults to one period.
        #[arg(long)]
        t_end: Option<f64>,
        /// Relative tolerance of the reference integration.
        #[arg(long, default_value_t = 1e-10)]
        ode_rtol: f64,
    },
    /// Render a trajectory (CSV or JSON) or an equilibrium catalog as SVG.
    Plot {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Mark the catalog equilibrium closest to the initial positions.
        #[arg(long)]
        overlay_equilibrium: bool,
        /// Mark the initial positions.
        #[arg(long)]
        overlay_initial: bool,
    },
}

/// Runs the CLI on `args` (including the program name) and returns the exit status.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = write!(stderr, "{}", e.render());
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", e.render());
                    0
                }
                _ => 1,
            };
        }
    };
    let outcome = match cli.command {
        Command::Simulate {
            config,
            method,
            t_end,
            samples,
            out,
            format,
        } => simulate(&config, method, t_end, samples, &out, format).map(|()| 0),
        Command::Equilibria { n, out } => equilibria(n, &out).map(|()| 0),
        Command::Verify {
            config,
            tol,
            t_end,
            ode_rtol,
        } => verify(&config, tol, t_end, ode_rtol, stdout),
        Command::Plot {
            input,
            out,
            overlay_equilibrium,
            overlay_initial,
        } => plot(&input, &out, overlay_equilibrium, overlay_initial).map(|()| 0),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            if e.is_numerical() {
                2
            } else {
                1
            }
        }
    }
}

/// Entry point used by the binary.
pub fn run() -> i32 {
    run_with(std::env::args_os(), &mut std::io::stdout(), &mut std::io::stderr())
}

fn read_config(path: &Path) -> Result<SystemConfig> {
    load_config(fs::File::open(path)?)
}

fn grid_for(config: &SystemConfig, t_end: Option<f64>, samples: Option<usize>) -> Result<Vec<f64>> {
    let t_end = t_end.unwrap_or_else(|| config.t_end());
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::validation("t_end", "t_end must be positive"));
    }
    let samples = samples.unwrap_or_else(|| config.samples());
    if samples == 0 {
        return Err(Error::validation("samples", "samples must be ≥ 1"));
    }
    Ok(uniform_grid(t_end, samples))
}

fn run_method(config: &SystemConfig, method: Method, times: &[f64], opts: &OdeOptions) -> Result<Trajectory> {
    let state = PhaseState::new(config.z0().to_vec(), config.v0().to_vec());
    match method {
        Method::Spectral => Ok(solve_newgold_detailed(config, times)?.positions),
        Method::Ode => integrate_at(OdeSystem::NewGold, &state, config.omega(), times, opts),
        Method::IsogoldAlgebraic => isogold_path(config, times),
        Method::IsogoldOde => integrate_at(OdeSystem::IsoGold, &state, config.omega(), times, opts),
    }
}

fn simulate(
    config: &Path,
    method: Method,
    t_end: Option<f64>,
    samples: Option<usize>,
    out: &Path,
    format: Format,
) -> Result<()> {
    let config = read_config(config)?;
    let times = grid_for(&config, t_end, samples)?;
    let traj = run_method(&config, method, &times, &OdeOptions::default())?;
    let text = match format {
        Format::Csv => trajectory_to_csv(&traj),
        Format::Json => trajectory_to_json(&traj),
    };
    fs::write(out, text)?;
    Ok(())
}

fn equilibria(n: i64, out: &Path) -> Result<()> {
    if n < 2 {
        return Err(Error::validation("n", "n must be ≥ 2"));
    }
    let catalog = newgold_equilibria(n as usize, 1.0)?;
    fs::write(out, catalog_to_json(&catalog) + "\n")?;
    Ok(())
}

/// Outcome of one verification run.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub max_deviation: f64,
    pub closure: Closure,
    pub psi_residual: f64,
    pub max_displacement: f64,
}

impl VerifyReport {
    pub fn passes(&self, tol: f64) -> bool {
        [
            self.max_deviation,
            self.closure.multiset_at_period,
            self.closure.labeled_error,
            self.psi_residual,
        ]
        .iter()
        .all(|x| *x <= tol)
    }
}

/// Samples per period used by the verification runs.
const VERIFY_SAMPLES: usize = 1000;

/// Compares the exact and integrated solutions over `[0, t_end]` and measures
/// how the exact solution closes.
pub fn verify_config(config: &SystemConfig, t_end: f64, ode_rtol: f64) -> Result<VerifyReport> {
    let opts = OdeOptions::default().with_rtol(ode_rtol);
    let times = uniform_grid(t_end, VERIFY_SAMPLES);
    let exact = solve_newgold_detailed(config, &times)?;
    let ode = run_method(config, Method::Ode, &times, &opts)?;
    let max_deviation = exact.positions.max_deviation(&ode);
    let closure = closure_analysis(config, VERIFY_SAMPLES)?;
    let span = uniform_grid(
        closure.periods as f64 * config.period(),
        closure.periods * VERIFY_SAMPLES,
    );
    let long = solve_newgold_detailed(config, &span)?;
    let psi_residual =
        psi_residual(&exact.positions, &exact.coefficients).max(psi_residual(&long.positions, &long.coefficients));
    let z0 = config.z0();
    let max_displacement = long
        .positions
        .samples
        .iter()
        .flat_map(|row| row.iter().zip(z0).map(|(a, b)| (a - b).norm()))
        .fold(0.0, f64::max);
    Ok(VerifyReport {
        max_deviation,
        closure,
        psi_residual,
        max_displacement,
    })
}

/// Largest `|ψ(z_n; t)| / (|z_n|^N + Σ|c_m||z_n|^{N−m})` along a solution.
pub fn psi_residual(positions: &Trajectory, coefficients: &Trajectory) -> f64 {
    positions
        .samples
        .iter()
        .zip(&coefficients.samples)
        .flat_map(|(zs, cs)| zs.iter().map(move |&z| horner(cs, z).norm() / horner_magnitude(cs, z)))
        .fold(0.0, f64::max)
}

fn verify(config: &Path, tol: f64, t_end: Option<f64>, ode_rtol: f64, stdout: &mut dyn Write) -> Result<i32> {
    let config = read_config(config)?;
    let t_end = t_end.unwrap_or_else(|| config.t_end());
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::validation("t_end", "t_end must be positive"));
    }
    if !(tol > 0.0) {
        return Err(Error::validation("tol", "tol must be positive"));
    }
    let r = verify_config(&config, t_end, ode_rtol)?;
    let mark = |x: f64| if x <= tol { "ok" } else { "FAIL" };
    writeln!(
        stdout,
        "max deviation spectral vs ode : {:.3e} [{}]",
        r.max_deviation,
        mark(r.max_deviation)
    )?;
    let cl = &r.closure;
    writeln!(
        stdout,
        "multiset closure at T         : {:.3e} [{}]",
        cl.multiset_at_period,
        mark(cl.multiset_at_period)
    )?;
    writeln!(
        stdout,
        "coefficient permutation at T  : {} (order {})",
        cl.coefficient_permutation,
        cl.coefficient_permutation.order()
    )?;
    writeln!(
        stdout,
        "position permutation          : {} (order {})",
        cl.position_permutation,
        cl.position_permutation.order()
    )?;
    writeln!(
        stdout,
        "labeled closure at {}T         : {:.3e} [{}]",
        cl.periods,
        cl.labeled_error,
        mark(cl.labeled_error)
    )?;
    writeln!(
        stdout,
        "psi residual (relative)       : {:.3e} [{}]",
        r.psi_residual,
        mark(r.psi_residual)
    )?;
    writeln!(stdout, "max displacement from z(0)    : {:.3e}", r.max_displacement)?;
    if r.max_displacement <= tol {
        writeln!(stdout, "zero motion: configuration stays at rest within tol")?;
    }
    let pass = r.passes(tol);
    writeln!(stdout, "{}", if pass { "PASS" } else { "FAIL" })?;
    Ok(if pass { 0 } else { 2 })
}

enum PlotInput {
    Trajectory(Trajectory),
    Catalog(EquilibriumCatalog),
}

fn read_plot_input(path: &Path) -> Result<PlotInput> {
    let text = fs::read_to_string(path)?;
    let trimmed = text.trim_start();
    if trimmed.is_empty() {
        return Err(Error::Parse(format!("{} is empty", path.display())));
    }
    match trimmed.as_bytes()[0] {
        b'[' => Ok(PlotInput::Catalog(catalog_from_json(&text)?)),
        b'{' => Ok(PlotInput::Trajectory(trajectory_from_json(&text)?)),
        _ => Ok(PlotInput::Trajectory(trajectory_from_csv(&text)?)),
    }
}

/// The catalog entry (ω = 1) nearest to `z` as a multiset, relabeled to match `z`.
pub fn nearest_equilibrium(z: &[C64]) -> Result<Vec<C64>> {
    let catalog = newgold_equilibria(z.len(), 1.0)?;
    let best = catalog
        .entries
        .iter()
        .min_by(|a, b| multiset_distance(&a.configuration, z).total_cmp(&multiset_distance(&b.configuration, z)))
        .expect("catalog is never empty");
    Ok(match_labels(z, &best.configuration).gather(&best.configuration))
}

/// Largest particle count for which the equilibrium overlay is offered.
const OVERLAY_MAX_N: usize = 6;

fn plot(input: &Path, out: &Path, overlay_equilibrium: bool, overlay_initial: bool) -> Result<()> {
    let svg = match read_plot_input(input)? {
        PlotInput::Catalog(catalog) => catalog_svg(&catalog),
        PlotInput::Trajectory(traj) => {
            let eq = if overlay_equilibrium {
                if traj.n() < 2 || traj.n() > OVERLAY_MAX_N {
                    return Err(Error::validation(
                        "overlay-equilibrium",
                        format!("available for 2 ≤ N ≤ {OVERLAY_MAX_N}"),
                    ));
                }
                Some(nearest_equilibrium(traj.first())?)
            } else {
                None
            };
            trajectory_svg(&traj, eq.as_deref(), overlay_initial)
        }
    };
    fs::write(out, svg)?;
    Ok(())
}
