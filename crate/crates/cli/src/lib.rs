//! Command-line front end: `analyze`, `wavefunction`, `sweep` and `evolve`.

pub mod format;
pub mod report;

use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use quadtrap::observables::first_moments;
use quadtrap::spectral::regime_of;
use quadtrap::{
    coherent_wavefunction, covariance, displacement_vectors, dynamical_matrix, evolve, extremal_state,
    hamiltonian_stats, ladder_system, penning_closed_forms, penning_hamiltonian, penning_ladder, uncertainty_surface,
    Axis, Error, Grid, LadderSystem, PenningParams, QuadraticHamiltonian, RegimeKind,
};

pub use report::AnalysisReport;

/// Exit code for a successful trap-regime computation.
pub const EXIT_OK: i32 = 0;
/// Exit code for malformed input.
pub const EXIT_INPUT: i32 = 1;
/// Exit code when the input is valid but not in the trap regime.
pub const EXIT_NOT_TRAP: i32 = 2;

/// Points per axis when `wavefunction` is run without `--grid`.
pub const DEFAULT_GRID_POINTS: usize = 64;

#[derive(Debug, Parser)]
#[command(
    name = "quadtrap",
    version,
    about = "Ladder operators and coherent states of quadratic Hamiltonians"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Spectral analysis, extremal state and covariance as JSON.
    Analyze(SourceArgs),
    /// Coherent-state wave function on a rectangular grid as CSV.
    Wavefunction(WavefunctionArgs),
    /// Penning-trap uncertainty products over a (delta, epsilon) grid as CSV.
    Sweep(SweepArgs),
    /// Coherent-state trajectory as CSV.
    Evolve(EvolveArgs),
}

#[derive(Debug, Args)]
pub struct SourceArgs {
    /// JSON file `{"n": n, "B": [[...], ...]}`.
    #[arg(long, conflicts_with = "penning", required_unless_present = "penning")]
    pub file: Option<PathBuf>,
    /// Use the Penning-trap Hamiltonian.
    #[arg(long)]
    pub penning: bool,
    #[arg(long, requires = "penning", default_value_t = 2.0, allow_negative_numbers = true)]
    pub omega_c: f64,
    #[arg(long, requires = "penning", default_value_t = 1.0, allow_negative_numbers = true)]
    pub omega_z: f64,
    #[arg(long, requires = "penning", default_value_t = 0.0, allow_negative_numbers = true)]
    pub epsilon: f64,
}

#[derive(Debug, Args)]
pub struct WavefunctionArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Coherent-state labels as comma-separated `re:im` pairs; zero if absent.
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<String>,
    /// Grid axis as `axis:min:max:count` with 1-based axis; repeat once per axis.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Vec<String>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, default_value = "0.05:0.95", allow_hyphen_values = true)]
    pub delta_range: String,
    #[arg(long, default_value = "-0.9:0.9", allow_hyphen_values = true)]
    pub epsilon_range: String,
    #[arg(long, default_value_t = 50)]
    pub steps: usize,
    #[arg(long, default_value_t = 2.0)]
    pub omega_c: f64,
}

#[derive(Debug, Args)]
pub struct EvolveArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<String>,
    #[arg(long)]
    pub t_max: f64,
    /// Number of output rows, including t = 0 and t = t_max.
    #[arg(long, default_value_t = 101)]
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn input(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotTrapRegime | Error::DegenerateSpectrum { .. } | Error::GammaNotReal { .. } => EXIT_NOT_TRAP,
            _ => EXIT_INPUT,
        };
        Self {
            code,
            message: format!("{e} [{}]", e.code()),
        }
    }
}

/// Rendered command output together with the process exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub text: String,
    pub code: i32,
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    match &cli.command {
        Command::Analyze(a) => analyze(a),
        Command::Wavefunction(a) => wavefunction(a),
        Command::Sweep(a) => sweep(a),
        Command::Evolve(a) => evolve_trajectory(a),
    }
}

fn penning_params(s: &SourceArgs) -> Result<Option<PenningParams>, CliError> {
    if !s.penning {
        return Ok(None);
    }
    Ok(Some(PenningParams::new(s.omega_c, s.omega_z, s.epsilon)?))
}

fn hamiltonian(s: &SourceArgs) -> Result<QuadraticHamiltonian, CliError> {
    if let Some(p) = penning_params(s)? {
        return Ok(penning_hamiltonian(&p)?);
    }
    let path = s
        .file
        .as_ref()
        .ok_or_else(|| CliError::input("either --file or --penning is required"))?;
    let text = std::fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    Ok(QuadraticHamiltonian::from_json(&text)?)
}

fn ladder(s: &SourceArgs) -> Result<LadderSystem, CliError> {
    match penning_params(s)? {
        Some(p) => Ok(penning_ladder(&p)?),
        None => Ok(ladder_system(&hamiltonian(s)?)?),
    }
}

pub fn analyze(s: &SourceArgs) -> Result<Output, CliError> {
    let h = hamiltonian(s)?;
    let regime = regime_of(&dynamical_matrix(&h));
    if !regime.is_trap() {
        let report = AnalysisReport::not_trap(regime.kind, regime.offending_modes);
        return Ok(Output {
            text: report.to_json() + "\n",
            code: EXIT_NOT_TRAP,
        });
    }
    let l = match ladder(s) {
        Ok(l) => l,
        Err(e) if e.code == EXIT_NOT_TRAP => {
            let report = AnalysisReport::not_trap(RegimeKind::Degenerate, vec![]);
            return Ok(Output {
                text: report.to_json() + "\n",
                code: EXIT_NOT_TRAP,
            });
        }
        Err(e) => return Err(e),
    };
    let (_, g) = extremal_state(&l)?;
    let cov = covariance(&l)?;
    let e000 = match penning_params(s)? {
        Some(p) => Some(penning_closed_forms(&p)?.e000),
        None => None,
    };
    Ok(Output {
        text: AnalysisReport::trap(&l, &g, &cov, e000).to_json() + "\n",
        code: EXIT_OK,
    })
}

pub fn parse_labels(text: Option<&str>, n: usize) -> Result<Vec<Complex64>, CliError> {
    let Some(text) = text else {
        return Ok(vec![Complex64::new(0.0, 0.0); n]);
    };
    let z = text
        .split(',')
        .map(|pair| {
            let (re, im) = pair
                .split_once(':')
                .ok_or_else(|| CliError::input(format!("label '{pair}' is not of the form re:im")))?;
            let parse = |v: &str| {
                v.trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| CliError::input(format!("label '{pair}' has a non-numeric part")))
            };
            Ok(Complex64::new(parse(re)?, parse(im)?))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    if z.len() != n {
        return Err(CliError::input(format!("expected {n} labels, got {}", z.len())));
    }
    Ok(z)
}

pub fn parse_range(text: &str) -> Result<(f64, f64), CliError> {
    let bad = || CliError::input(format!("range '{text}' is not of the form a:b"));
    let (a, b) = text.split_once(':').ok_or_else(bad)?;
    Ok((
        a.trim().parse().map_err(|_| bad())?,
        b.trim().parse().map_err(|_| bad())?,
    ))
}

pub fn parse_grid(specs: &[String], n: usize) -> Result<Grid, CliError> {
    let mut axes: Vec<Option<Axis>> = vec![None; n];
    for spec in specs {
        let bad = || CliError::input(format!("grid '{spec}' is not of the form axis:min:max:count"));
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 4 {
            return Err(bad());
        }
        let axis: usize = parts[0].trim().parse().map_err(|_| bad())?;
        if axis == 0 || axis > n {
            return Err(CliError::input(format!("grid axis {axis} outside 1..={n}")));
        }
        let slot = &mut axes[axis - 1];
        if slot.is_some() {
            return Err(CliError::input(format!("grid axis {axis} given twice")));
        }
        *slot = Some(Axis {
            min: parts[1].trim().parse().map_err(|_| bad())?,
            max: parts[2].trim().parse().map_err(|_| bad())?,
            count: parts[3].trim().parse().map_err(|_| bad())?,
        });
    }
    let axes = axes
        .into_iter()
        .enumerate()
        .map(|(k, a)| a.ok_or_else(|| CliError::input(format!("grid axis {} missing", k + 1))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Grid::new(axes)?)
}

pub fn wavefunction(a: &WavefunctionArgs) -> Result<Output, CliError> {
    let l = ladder(&a.source)?;
    let n = l.n;
    let z = parse_labels(a.z.as_deref(), n)?;
    let (d, g) = extremal_state(&l)?;
    let s = displacement_vectors(&z, &d);
    let grid = if a.grid.is_empty() {
        Grid::for_state(&g, &s.position_shift, DEFAULT_GRID_POINTS)?
    } else {
        parse_grid(&a.grid, n)?
    };

    let mut text = (1..=n).map(|k| format!("x{k}")).collect::<Vec<_>>().join(",");
    text.push_str(",re_phi,im_phi,abs_phi_sq\n");
    for k in 0..grid.len() {
        let x = grid.point(k);
        let phi = coherent_wavefunction(&g, &s, &x);
        let row = x.iter().copied().chain([phi.re, phi.im, phi.norm_sqr()]);
        text.push_str(&format::csv_row(row));
        text.push('\n');
    }
    Ok(Output { text, code: EXIT_OK })
}

pub fn sweep(a: &SweepArgs) -> Result<Output, CliError> {
    let points = uncertainty_surface(
        a.omega_c,
        parse_range(&a.delta_range)?,
        parse_range(&a.epsilon_range)?,
        a.steps,
    )?;
    let mut text = String::from("delta,epsilon,dx_dpx,dy_dpy,dz_dpz\n");
    for p in points {
        text.push_str(&format::csv_row([p.delta, p.epsilon, p.dx_dpx, p.dy_dpy, p.dz_dpz]));
        text.push('\n');
    }
    Ok(Output { text, code: EXIT_OK })
}

pub fn evolve_trajectory(a: &EvolveArgs) -> Result<Output, CliError> {
    if a.steps < 2 {
        return Err(Error::RangeError(format!("steps must be >= 2, got {}", a.steps)).into());
    }
    if !(a.t_max.is_finite() && a.t_max >= 0.0) {
        return Err(Error::RangeError(format!("t-max must be finite and non-negative, got {}", a.t_max)).into());
    }
    let l = ladder(&a.source)?;
    let n = l.n;
    let z0 = parse_labels(a.z.as_deref(), n)?;
    let (d, _) = extremal_state(&l)?;

    let mut header = vec!["t".to_string()];
    header.extend((1..=n).flat_map(|k| [format!("re_z{k}"), format!("im_z{k}")]));
    header.extend((1..=n).map(|j| format!("mean_x{j}")));
    header.extend((1..=n).map(|j| format!("mean_p{j}")));
    header.push("mean_h".into());
    let mut text = header.join(",") + "\n";

    for i in 0..a.steps {
        let t = a.t_max * i as f64 / (a.steps - 1) as f64;
        let (zt, _) = evolve(&z0, t, &l);
        let (x, p) = first_moments(&displacement_vectors(&zt, &d));
        let mut row = vec![t];
        row.extend(zt.iter().flat_map(|c| [c.re, c.im]));
        row.extend(x);
        row.extend(p);
        row.push(hamiltonian_stats(&zt, &l).mean);
        text.push_str(&format::csv_row(row));
        text.push('\n');
    }
    Ok(Output { text, code: EXIT_OK })
}
