//! Command-line front end: state generation and I/O, protocol execution,
//! grid/report emission, and the reproduction report.
//!
//! Exit codes: 0 success, 2 validation error, 3 numerical error
//! (truncation, heralding-impossible, non-convergence), 4 I/O error.
//! Diagnostics go to standard error as structured `LEVEL key=value` lines;
//! artifacts are byte-deterministic for identical requests and seeds.

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use std::path::{Path, PathBuf};

use crate::channels;
use crate::error::Error;
use crate::feasibility::{self, ExperimentParams};
use crate::fock::{self, GaussianSpec, PureState};
use crate::io;
use crate::realizations;
use crate::report;
use crate::transform::{self, StepNormalization};
use crate::wigner::{self, GridSpec};

/// Environment variable scaling report tolerances (diagnostics only).
pub const TOL_SCALE_ENV: &str = "PHONONFORGE_TOL_SCALE";

#[derive(Debug, Parser)]
#[command(
    name = "phononforge",
    about = "Heralded phonon-level quantum operations in a truncated Fock space",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a Fock or displaced-squeezed state file.
    State(StateArgs),
    /// Apply the quadrature orthogonalizer to a state.
    Orthogonalize(OrthogonalizeArgs),
    /// Superpose identity and orthogonalizer to synthesize a qubit.
    Qubit(QubitArgs),
    /// Apply a general herald operator from a spec file.
    Herald(HeraldArgs),
    /// Solve, factor, and execute a state transformation plan.
    Transform(TransformArgs),
    /// Evaluate the Wigner function on a grid.
    Wigner(WignerArgs),
    /// Derive the cavity-optomechanics parameter chain.
    Feasibility(FeasibilityArgs),
    /// Residual sweep validating the conditional-map realizations.
    RealizationCheck(RealizationCheckArgs),
    /// Run every reproduction check and emit the pass/fail table.
    Repro(ReproArgs),
}

#[derive(Debug, Args)]
pub struct StateArgs {
    /// Fock level n (mutually exclusive with the Gaussian options).
    #[arg(long)]
    pub fock: Option<usize>,
    /// Displacement "re,im".
    #[arg(long, value_parser = parse_complex, conflicts_with = "fock")]
    pub displacement: Option<Complex64>,
    /// Squeezing magnitude.
    #[arg(long, default_value_t = 0.0, conflicts_with = "fock")]
    pub squeeze: f64,
    /// Squeezing angle (radians).
    #[arg(long, default_value_t = 0.0, conflicts_with = "fock")]
    pub squeeze_angle: f64,
    #[arg(long)]
    pub dim: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct OrthogonalizeArgs {
    /// Input state JSON.
    #[arg(long)]
    pub input: PathBuf,
    /// Herald scale r.
    #[arg(long, default_value_t = 0.1)]
    pub r: f64,
    /// Output outcome JSON ({"state":…, "probability":…}).
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct QubitArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Identity weight "re,im".
    #[arg(long, value_parser = parse_complex)]
    pub mu: Complex64,
    #[arg(long, default_value_t = 0.1)]
    pub r: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct HeraldArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Herald spec JSON.
    #[arg(long)]
    pub spec: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum NormalizationArg {
    UnitIdentity,
    UnitMax,
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    /// Input state JSON.
    #[arg(long)]
    pub input: PathBuf,
    /// Target state JSON.
    #[arg(long)]
    pub target: PathBuf,
    /// Output plan JSON.
    #[arg(long)]
    pub out: PathBuf,
    /// Root-finder seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = NormalizationArg::UnitIdentity)]
    pub normalization: NormalizationArg,
    /// Optional execution trace JSON.
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum GridFormat {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct WignerArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Symmetric bound: grid spans [-bounds, bounds]².
    #[arg(long)]
    pub bounds: f64,
    #[arg(long, default_value_t = 0.05)]
    pub step: f64,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = GridFormat::Csv)]
    pub format: GridFormat,
}

#[derive(Debug, Args)]
pub struct FeasibilityArgs {
    /// Experiment parameters JSON; the built-in reference design point is
    /// used when omitted.
    #[arg(long)]
    pub params: Option<PathBuf>,
    /// Drive-filter detuning for the photon budget (rad/s); defaults to the
    /// mechanical frequency.
    #[arg(long)]
    pub filter_detuning: Option<f64>,
    /// Output report JSON (derived chain plus warnings).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RealizationCheckArgs {
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ReproArgs {
    /// Directory for report.json and report.txt.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

fn parse_complex(text: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("expected \"re,im\", got {text:?}"));
    }
    let re: f64 = parts[0]
        .trim()
        .parse()
        .map_err(|e| format!("bad real part: {e}"))?;
    let im: f64 = parts[1]
        .trim()
        .parse()
        .map_err(|e| format!("bad imaginary part: {e}"))?;
    Ok(Complex64::new(re, im))
}

enum CliError {
    Domain(Error),
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Domain(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn read_file(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    std::fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn info(pairs: &[(&str, String)]) {
    let body: Vec<String> = pairs.iter().map(|(k, v)| format!("{k}={v}")).collect();
    eprintln!("INFO {}", body.join(" "));
}

fn warn(message: &str) {
    eprintln!("WARN msg={:?}", message);
}

/// Run a parsed command; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    match execute(cli.command) {
        Ok(()) => 0,
        Err(CliError::Domain(e)) => {
            eprintln!(
                "ERROR code={} kind=domain msg={:?}",
                e.exit_code(),
                e.to_string()
            );
            e.exit_code()
        }
        Err(CliError::Io { path, source }) => {
            eprintln!(
                "ERROR code=4 kind=io path={:?} msg={:?}",
                path,
                source.to_string()
            );
            4
        }
    }
}

fn execute(command: Command) -> CliResult<()> {
    match command {
        Command::State(args) => cmd_state(args),
        Command::Orthogonalize(args) => cmd_orthogonalize(args),
        Command::Qubit(args) => cmd_qubit(args),
        Command::Herald(args) => cmd_herald(args),
        Command::Transform(args) => cmd_transform(args),
        Command::Wigner(args) => cmd_wigner(args),
        Command::Feasibility(args) => cmd_feasibility(args),
        Command::RealizationCheck(args) => cmd_realization_check(args),
        Command::Repro(args) => cmd_repro(args),
    }
}

fn cmd_state(args: StateArgs) -> CliResult<()> {
    let state = match args.fock {
        Some(n) => PureState::fock(args.dim, n)?,
        None => {
            let spec = GaussianSpec {
                displacement: args.displacement.unwrap_or(Complex64::new(0.0, 0.0)),
                squeeze_magnitude: args.squeeze,
                squeeze_angle: args.squeeze_angle,
            };
            fock::gaussian_state(&spec, args.dim)?
        }
    };
    write_file(&args.out, &io::state_to_json(&state))?;
    info(&[
        ("op", "state".into()),
        ("dim", state.dim().to_string()),
        ("out", format!("{:?}", args.out)),
    ]);
    Ok(())
}

fn cmd_orthogonalize(args: OrthogonalizeArgs) -> CliResult<()> {
    let state = io::state_from_json(&read_file(&args.input)?)?;
    let angle = fock::mean_angle(&state)?;
    let outcome = channels::orthogonalize(&state, args.r)?;
    write_file(&args.out, &io::outcome_to_json(&outcome))?;
    info(&[
        ("op", "orthogonalize".into()),
        ("probability", format!("{:.6e}", outcome.probability)),
        ("mean_angle", format!("{:.6e}", angle.angle)),
        ("degenerate_mean", angle.degenerate.to_string()),
    ]);
    Ok(())
}

fn cmd_qubit(args: QubitArgs) -> CliResult<()> {
    let state = io::state_from_json(&read_file(&args.input)?)?;
    let outcome = channels::qubit_synthesis(&state, args.mu, args.r)?;
    let overlap = fock::overlap(&state, &outcome.state)?;
    write_file(&args.out, &io::outcome_to_json(&outcome))?;
    info(&[
        ("op", "qubit".into()),
        ("probability", format!("{:.6e}", outcome.probability)),
        ("input_fidelity", format!("{:.6e}", overlap.norm_sqr())),
    ]);
    Ok(())
}

fn cmd_herald(args: HeraldArgs) -> CliResult<()> {
    let state = io::state_from_json(&read_file(&args.input)?)?;
    let spec = io::herald_spec_from_json(&read_file(&args.spec)?)?;
    for warning in spec.weak_drive_warnings() {
        warn(&warning);
    }
    let outcome = channels::apply_herald(&state, &spec)?;
    write_file(&args.out, &io::outcome_to_json(&outcome))?;
    info(&[
        ("op", "herald".into()),
        ("detection", spec.detection.as_str().into()),
        ("probability", format!("{:.6e}", outcome.probability)),
    ]);
    Ok(())
}

fn cmd_transform(args: TransformArgs) -> CliResult<()> {
    let psi = io::state_from_json(&read_file(&args.input)?)?;
    let phi = io::state_from_json(&read_file(&args.target)?)?;
    let (psi, ladder_ops) = if psi.dim() != phi.dim() {
        let (matched, ops) = transform::dimension_match(&psi, phi.dim())?;
        info(&[
            ("op", "dimension-match".into()),
            ("applications", ops.len().to_string()),
        ]);
        (matched, ops.len())
    } else {
        (psi, 0)
    };
    let coeffs = transform::solve_coefficients(&psi, &phi)?;
    let normalization = match args.normalization {
        NormalizationArg::UnitIdentity => StepNormalization::UnitIdentity,
        NormalizationArg::UnitMax => StepNormalization::UnitMax,
    };
    let mut plan = transform::factor_plan(&coeffs, normalization, args.seed)?;
    plan.predicted_probability = transform::predicted_success(&psi, &plan)?;
    let trace = transform::execute_plan(&psi, &plan, Some(&phi))?;
    write_file(&args.out, &io::plan_to_json(&plan))?;
    if let Some(trace_path) = &args.trace {
        write_file(trace_path, &io::trace_to_json(&trace))?;
    }
    info(&[
        ("op", "transform".into()),
        ("degree", plan.degree().to_string()),
        ("ladder_ops", ladder_ops.to_string()),
        (
            "total_probability",
            format!("{:.6e}", trace.total_probability),
        ),
        (
            "predicted_probability",
            format!("{:.6e}", plan.predicted_probability),
        ),
        (
            "final_fidelity",
            format!("{:.12}", trace.final_fidelity.unwrap_or(0.0)),
        ),
    ]);
    Ok(())
}

fn cmd_wigner(args: WignerArgs) -> CliResult<()> {
    let state = io::state_from_json(&read_file(&args.input)?)?;
    let corner_occupation = args.bounds * args.bounds;
    if (state.dim() as f64) <= corner_occupation {
        warn(&format!(
            "state dim {} is below the displaced occupation {corner_occupation:.0} at the grid \
             corners; values far from the origin are truncation artifacts",
            state.dim()
        ));
    }
    let grid = wigner::wigner_grid(&state, &GridSpec::square(args.bounds, args.step))?;
    let rendered = match args.format {
        GridFormat::Csv => io::grid_to_csv(&grid),
        GridFormat::Json => io::grid_to_json(&grid),
    };
    write_file(&args.out, &rendered)?;
    info(&[
        ("op", "wigner".into()),
        ("points", (grid.xs().len() * grid.ps().len()).to_string()),
        ("integral", format!("{:.9e}", wigner::grid_integral(&grid))),
    ]);
    Ok(())
}

fn cmd_feasibility(args: FeasibilityArgs) -> CliResult<()> {
    let params = match &args.params {
        Some(path) => io::params_from_json(&read_file(path)?)?,
        None => ExperimentParams::reference(),
    };
    let derivation = feasibility::derive(&params)?;
    for warning in &derivation.warnings {
        warn(warning);
    }
    let detuning = args.filter_detuning.unwrap_or(params.mech_freq);
    let budget = feasibility::filter_budget(&params, detuning)?;
    print!(
        "{}",
        feasibility_table(&params, &derivation, &budget, detuning)
    );
    if let Some(out) = &args.out {
        write_file(out, &io::derivation_to_json(&derivation))?;
    }
    Ok(())
}

fn feasibility_table(
    params: &ExperimentParams,
    derivation: &feasibility::Derivation,
    budget: &feasibility::FilterBudget,
    detuning: f64,
) -> String {
    let d = &derivation.derived;
    let mut out = String::new();
    out.push_str("derived parameter chain\n");
    let rows = [
        ("free spectral range", d.fsr, "Hz"),
        ("kappa (amplitude decay)", d.kappa, "rad/s"),
        ("sideband resolution w_M/kappa", d.sideband_resolution, ""),
        ("x_zpf", d.x_zpf, "m"),
        ("g0", d.g0, "rad/s"),
        ("pulse duration tau", d.tau, "s"),
        ("photons per pulse N", d.photon_number, ""),
        ("|alpha|^2", d.alpha_sq, ""),
        ("scattering rate G", d.gain, "1/s"),
        ("theta/2", d.theta_half, ""),
        ("r", d.r, ""),
        ("static displacement beta", d.beta, ""),
        ("thermal occupation n_bar", d.n_bar, ""),
        ("decoherence figure xi", d.xi, ""),
    ];
    for (name, value, unit) in rows {
        out.push_str(&format!("  {name:<34} {value:>14.6e} {unit}\n"));
    }
    out.push_str(&format!("filter budget at detuning {detuning:.6e} rad/s\n"));
    out.push_str(&format!(
        "  {:<34} {:>14.6e}\n",
        "residual intensity (1-V)", budget.residual_intensity_fraction
    ));
    out.push_str(&format!(
        "  {:<34} {:>14.6e}\n",
        "interferometric suppression", budget.suppression_factor
    ));
    out.push_str(&format!(
        "  {:<34} {:>14.6e}\n",
        "filter transmission", budget.filter_transmission
    ));
    out.push_str(&format!(
        "  {:<34} {:>14.6e}\n",
        "residual drive photons/pulse", budget.residual_drive_photons
    ));
    if params.pulse_power == feasibility::DESIGN_POINT_POWER {
        let r_sq = d.r * d.r;
        out.push_str(&format!(
            "  note: r^2 = {r_sq:.4e} at {:.2e} W under the documented conventions; \
             the reported design point is r^2 = {:.0e} (informational)\n",
            feasibility::DESIGN_POINT_POWER,
            feasibility::DESIGN_POINT_R_SQUARED,
        ));
    }
    out
}

fn cmd_realization_check(args: RealizationCheckArgs) -> CliResult<()> {
    let sweep = realizations::realization_sweep()?;
    write_file(&args.out, &realization_report_json(&sweep))?;
    info(&[
        ("op", "realization-check".into()),
        ("jc_slope", format!("{:.4}", sweep.jc_slope)),
        ("optomech_slope", format!("{:.4}", sweep.optomech_slope)),
        ("v_port_residual", format!("{:.3e}", sweep.v_port_residual)),
        (
            "leakage_log10_ratio",
            format!("{:.4}", sweep.leakage_log10_ratio),
        ),
    ]);
    Ok(())
}

fn realization_report_json(sweep: &realizations::RealizationReport) -> String {
    let fmt_list = |values: &[f64]| -> String {
        let items: Vec<String> = values.iter().map(|v| io::fmt_real(*v)).collect();
        format!("[{}]", items.join(", "))
    };
    format!(
        "{{\"epsilons\": {}, \"jc_residuals\": {}, \"jc_slope\": {}, \
         \"optomech_residuals\": {}, \"optomech_slope\": {}, \
         \"v_port_residual\": {}, \"leakage_log10_ratio\": {}}}\n",
        fmt_list(&sweep.epsilons),
        fmt_list(&sweep.jc_residuals),
        io::fmt_real(sweep.jc_slope),
        fmt_list(&sweep.optomech_residuals),
        io::fmt_real(sweep.optomech_slope),
        io::fmt_real(sweep.v_port_residual),
        io::fmt_real(sweep.leakage_log10_ratio)
    )
}

fn cmd_repro(args: ReproArgs) -> CliResult<()> {
    let tol_scale = match std::env::var(TOL_SCALE_ENV) {
        Ok(text) => text.parse::<f64>().map_err(|_| {
            CliError::Domain(Error::InvalidParameter(format!(
                "{TOL_SCALE_ENV} must be a number, got {text:?}"
            )))
        })?,
        Err(_) => 1.0,
    };
    if !(tol_scale.is_finite() && tol_scale > 0.0) {
        return Err(CliError::Domain(Error::InvalidParameter(format!(
            "{TOL_SCALE_ENV} must be finite and > 0, got {tol_scale}"
        ))));
    }
    let report = report::run_all_checks(tol_scale)?;
    let table = report::render_table(&report);
    print!("{table}");
    std::fs::create_dir_all(&args.out).map_err(|source| CliError::Io {
        path: args.out.clone(),
        source,
    })?;
    write_file(
        &args.out.join("report.json"),
        &report::report_to_json(&report),
    )?;
    write_file(&args.out.join("report.txt"), &table)?;
    info(&[
        ("op", "repro".into()),
        ("tol_scale", format!("{tol_scale}")),
        ("gates_passing", report.all_gates_pass().to_string()),
    ]);
    Ok(())
}
