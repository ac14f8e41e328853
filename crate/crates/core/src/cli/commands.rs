use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use super::config::{InitialSpec, RunConfig};
use super::{CliError, EXIT_OK, EXIT_VERIFICATION};
use crate::dynamics::{
    homogeneous_solution, make_gaussian, make_homogeneous, make_plane_wave, measure_frequency,
    residual_norm, run, sample_points, write_snapshot, AnalyticSolution, Branch, DynamicsError,
    FieldOperator, FieldState, PlaneWave, PotentialSpec, Probe, RunSettings, SeriesWriter,
};
use crate::identities::{run_all, GammaSet};
use crate::nonlinearity::{parity_violation, parity_witness, NonlinearitySpec};
use crate::symmetry::{GaugeFunction, TransformSpec};

/// Environment variable overriding `[output] directory`.
pub const OUTPUT_ENV: &str = "NLDIRAC_OUT";

/// Residual threshold for the covariance command.
const COVARIANCE_TOL: f64 = 1e-10;

fn dynamics_error(e: DynamicsError) -> CliError {
    match e {
        DynamicsError::StabilityBound { .. }
        | DynamicsError::Instability { .. }
        | DynamicsError::IntegrationFault { .. } => CliError::Stability(e.to_string()),
        DynamicsError::Format(msg) => CliError::Io(msg),
        other => CliError::Config(other.to_string()),
    }
}

/// Prints every identity line; exit 0 iff all pass.
pub fn cmd_verify(set: &GammaSet, out: &mut dyn Write) -> Result<i32, CliError> {
    let report = run_all(set);
    write!(out, "{report}")?;
    Ok(if report.all_passed() { EXIT_OK } else { EXIT_VERIFICATION })
}

/// `NLDIRAC_OUT` if set, else the configured directory.
pub fn output_directory(cfg: &RunConfig) -> PathBuf {
    match std::env::var_os(OUTPUT_ENV) {
        Some(dir) if !dir.is_empty() => PathBuf::from(dir),
        _ => PathBuf::from(&cfg.output.directory),
    }
}

/// Initial lattice state at `t = 0`.
pub fn build_initial(cfg: &RunConfig) -> Result<FieldState, CliError> {
    let grid = &cfg.grid;
    match &cfg.initial {
        InitialSpec::PlaneWave {
            momentum_index,
            mass,
            branch,
        } => make_plane_wave(grid, momentum_index, *mass, *branch, 0.0),
        InitialSpec::Gaussian {
            center,
            width,
            base,
            momentum_index,
        } => make_gaussian(grid, center, *width, *base, momentum_index),
        InitialSpec::Homogeneous { c } => Ok(make_homogeneous(grid, *c)),
    }
    .map_err(|e| CliError::Config(format!("[initial]: {e}")))
}

/// Largest component of the field at point 0, for phase tracking.
fn probe_for(cfg: &RunConfig, state: &FieldState) -> Option<Probe> {
    match cfg.initial {
        InitialSpec::Gaussian { .. } => None,
        _ => {
            let v = &state.values[0];
            let component = (0..4).max_by(|&a, &b| v.0[a].norm().total_cmp(&v.0[b].norm()))?;
            Some(Probe { point: 0, component })
        }
    }
}

fn operator(cfg: &RunConfig) -> Result<FieldOperator, CliError> {
    let potential = cfg
        .potential
        .to_potential(&cfg.grid)
        .map_err(|e| CliError::Config(format!("[potential] spec: {e}")))?;
    Ok(FieldOperator::new(&cfg.grid, potential, cfg.nonlinearity.clone(), cfg.run.derivative))
}

fn prepare_directory(cfg: &RunConfig) -> Result<PathBuf, CliError> {
    let dir = output_directory(cfg);
    fs::create_dir_all(&dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let mut echo = cfg.clone();
    echo.run.threads = Some(rayon::current_num_threads());
    fs::write(dir.join("config.echo"), echo.to_string())?;
    Ok(dir)
}

fn save_snapshot(state: &FieldState, path: &Path) -> Result<(), CliError> {
    let mut w = BufWriter::new(File::create(path)?);
    write_snapshot(state, &mut w).map_err(dynamics_error)?;
    w.flush()?;
    Ok(())
}

/// Paths and summary numbers of one simulation.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationReport {
    pub series_path: PathBuf,
    pub probe_path: Option<PathBuf>,
    pub snapshot_paths: Vec<PathBuf>,
    pub charge_drift: f64,
    pub final_residual: f64,
    pub omega: Option<f64>,
}

/// Integrates the configured run, writing `<series>.csv`, the probe series
/// `<series>_probe.csv` for plane-wave and homogeneous data, optional
/// snapshots and `config.echo`.
pub fn cmd_simulate(cfg: &RunConfig, out: &mut dyn Write) -> Result<SimulationReport, CliError> {
    let op = operator(cfg)?;
    let initial = build_initial(cfg)?;
    let probe = probe_for(cfg, &initial);
    let dir = prepare_directory(cfg)?;
    let stem = &cfg.output.series_name;

    let mut snapshot_paths = Vec::new();
    if cfg.output.snapshots {
        let path = dir.join(format!("{stem}_initial.snap"));
        save_snapshot(&initial, &path)?;
        snapshot_paths.push(path);
    }

    let series_path = dir.join(format!("{stem}.csv"));
    let mut writer = SeriesWriter::new(BufWriter::new(File::create(&series_path)?)).map_err(dynamics_error)?;
    let settings = RunSettings {
        dt: cfg.dt(),
        steps: cfg.run.steps,
        output_every: cfg.run.output_every,
        probe,
    };
    let summary = run(&op, initial, &settings, |row| writer.write_row(row)).map_err(dynamics_error)?;
    drop(writer);

    let probe_path = if probe.is_some() {
        let path = dir.join(format!("{stem}_probe.csv"));
        let mut w = BufWriter::new(File::create(&path)?);
        writeln!(w, "t,re,im")?;
        for (t, z) in &summary.probe_series {
            writeln!(w, "{t:.16e},{:.16e},{:.16e}", z.re, z.im)?;
        }
        w.flush()?;
        Some(path)
    } else {
        None
    };

    if cfg.output.snapshots {
        let path = dir.join(format!("{stem}_final.snap"));
        save_snapshot(&summary.final_state, &path)?;
        snapshot_paths.push(path);
    }

    let omega = if probe.is_some() {
        match measure_frequency(&summary.probe_series) {
            Ok(w) => Some(w),
            Err(e) => {
                writeln!(out, "omega unavailable: {e}")?;
                None
            }
        }
    } else {
        None
    };
    let report = SimulationReport {
        series_path,
        probe_path,
        snapshot_paths,
        charge_drift: summary.max_charge_drift,
        final_residual: summary.rows.last().map_or(0.0, |r| r.residual),
        omega,
    };
    writeln!(out, "series = {}", report.series_path.display())?;
    if let Some(p) = &report.probe_path {
        writeln!(out, "probe = {}", p.display())?;
    }
    for p in &report.snapshot_paths {
        writeln!(out, "snapshot = {}", p.display())?;
    }
    writeln!(out, "charge_drift = {:.6e}", report.charge_drift)?;
    writeln!(out, "final_residual = {:.6e}", report.final_residual)?;
    if let Some(w) = report.omega {
        writeln!(out, "omega = {w:.12}")?;
    }
    Ok(report)
}

/// One line of a dispersion sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionRow {
    pub p_index: i64,
    pub p: f64,
    pub omega_measured: f64,
    pub omega_theory: f64,
    pub rel_err: f64,
}

/// Runs one positive-branch plane wave per momentum index (along the last
/// grid axis) and writes `<series>_dispersion.csv`.
pub fn cmd_dispersion(
    cfg: &RunConfig,
    p_indices: &[i64],
    out: &mut dyn Write,
) -> Result<Vec<DispersionRow>, CliError> {
    let NonlinearitySpec::DiracMass(mass) = cfg.nonlinearity else {
        return Err(CliError::Config("[nonlinearity] spec: dispersion needs dirac_mass".into()));
    };
    if mass < 0.0 {
        return Err(CliError::Config("[nonlinearity] spec: dispersion needs m ≥ 0".into()));
    }
    let op = operator(cfg)?;
    let dir = prepare_directory(cfg)?;
    let path = dir.join(format!("{}_dispersion.csv", cfg.output.series_name));
    let mut csv = BufWriter::new(File::create(&path)?);
    let header = "p_index,p,omega_measured,omega_theory,rel_err";
    writeln!(csv, "{header}")?;
    writeln!(out, "{header}")?;

    let dims = cfg.grid.dims();
    let mut rows = Vec::with_capacity(p_indices.len());
    for &n in p_indices {
        let mut index = vec![0; dims];
        index[dims - 1] = n;
        let momentum = cfg.grid.momentum(&index).map_err(dynamics_error)?;
        let initial = make_plane_wave(&cfg.grid, &index, mass, Branch::Positive, 0.0).map_err(dynamics_error)?;
        let v = &initial.values[0];
        let component = (0..4)
            .max_by(|&a, &b| v.0[a].norm().total_cmp(&v.0[b].norm()))
            .expect("four components");
        let settings = RunSettings {
            dt: cfg.dt(),
            steps: cfg.run.steps,
            output_every: cfg.run.steps.max(1),
            probe: Some(Probe { point: 0, component }),
        };
        let summary = run(&op, initial, &settings, |_| Ok(())).map_err(dynamics_error)?;
        let omega_measured = measure_frequency(&summary.probe_series).map_err(dynamics_error)?;
        let p = momentum.iter().map(|k| k * k).sum::<f64>().sqrt();
        let omega_theory = (p * p + mass * mass).sqrt();
        let row = DispersionRow {
            p_index: n,
            p,
            omega_measured,
            omega_theory,
            rel_err: (omega_measured - omega_theory).abs() / omega_theory,
        };
        let line = format!(
            "{},{:.16e},{:.16e},{:.16e},{:.16e}",
            row.p_index, row.p, row.omega_measured, row.omega_theory, row.rel_err
        );
        writeln!(csv, "{line}")?;
        writeln!(out, "{line}")?;
        rows.push(row);
    }
    csv.flush()?;
    Ok(rows)
}

/// Residuals of an exact solution before and after a transform.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceReport {
    pub transform: String,
    pub residual_before: f64,
    pub residual_after: f64,
    pub passed: bool,
    /// `|γ⁰T(γ⁰ψ) − T(ψ)|` on the witness spinor, reported instead of
    /// residuals when parity is requested for a non-real `f`.
    pub parity_witness: Option<f64>,
}

fn exact_solution(cfg: &RunConfig) -> Result<AnalyticSolution, CliError> {
    if cfg.potential != PotentialSpec::Zero {
        return Err(CliError::Config(
            "[potential] spec: covariance checks start from a zero potential".into(),
        ));
    }
    match &cfg.initial {
        InitialSpec::PlaneWave {
            momentum_index,
            mass,
            branch,
        } => {
            let p = cfg.grid.momentum(momentum_index).map_err(dynamics_error)?;
            PlaneWave::new(p, *mass, *branch).solution().map_err(dynamics_error)
        }
        InitialSpec::Homogeneous { c } => homogeneous_solution(&cfg.nonlinearity, *c)
            .map(|(sol, _)| sol)
            .map_err(dynamics_error),
        InitialSpec::Gaussian { .. } => Err(CliError::Config(
            "[initial] kind: covariance needs plane_wave or homogeneous data".into(),
        )),
    }
}

fn covariance_samples(cfg: &RunConfig) -> Vec<[f64; 4]> {
    let mut extent = [2.0, 1.0, 1.0, 1.0];
    for axis in 0..cfg.grid.dims() {
        extent[cfg.grid.spacetime_axis(axis)] = cfg.grid.lengths()[axis];
    }
    sample_points(64, extent, 0x5eed)
}

/// Applies `transform` to the configured exact solution; passes when the
/// transformed residual is at most `1e-10`.
pub fn cmd_covariance(cfg: &RunConfig, transform: &str, out: &mut dyn Write) -> Result<CovarianceReport, CliError> {
    let spec: TransformSpec = transform.parse().map_err(|e| CliError::Config(format!("--transform: {e}")))?;
    writeln!(out, "transform = {spec}")?;

    if let (TransformSpec::Parity, NonlinearitySpec::FOfZ(f)) = (&spec, &cfg.nonlinearity) {
        if !f.has_real_coefficients() {
            let w = parity_violation(&cfg.nonlinearity, &parity_witness());
            writeln!(out, "parity_witness = {w:.12e}")?;
            writeln!(out, "EXPECTED-FAIL parity does not map solutions to solutions for f with non-real coefficients")?;
            return Ok(CovarianceReport {
                transform: spec.to_string(),
                residual_before: f64::NAN,
                residual_after: f64::NAN,
                passed: true,
                parity_witness: Some(w),
            });
        }
    }

    let spec = match spec {
        TransformSpec::Gauge(g @ GaugeFunction::Sine { period: None, .. }) => {
            TransformSpec::Gauge(g.bind(&cfg.grid).map_err(|e| CliError::Config(format!("--transform: {e}")))?)
        }
        other => other,
    };
    let sol = exact_solution(cfg)?;
    let samples = covariance_samples(cfg);
    let before = residual_norm(&sol, &cfg.nonlinearity, &samples);
    if before > COVARIANCE_TOL {
        return Err(CliError::Config(format!(
            "[initial]: not an exact solution of {} (residual {before:e})",
            cfg.nonlinearity
        )));
    }
    let moved = spec.apply(&sol).map_err(|e| CliError::Config(format!("--transform: {e}")))?;
    let after = residual_norm(&moved, &cfg.nonlinearity, &samples);
    let passed = after <= COVARIANCE_TOL;
    writeln!(out, "residual_before = {before:.6e}")?;
    writeln!(out, "residual_after = {after:.6e}")?;
    if let TransformSpec::Rotation { .. } | TransformSpec::Boost { .. } | TransformSpec::Parity = spec {
        let x = samples[0];
        let (a, b) = (sol.value(x), moved.value(x));
        if (&a + &b).max_magnitude() <= 1e-12 * a.max_magnitude().max(1.0) && a.max_magnitude() > 0.0 {
            writeln!(out, "field negated")?;
        }
    }
    writeln!(out, "{}", if passed { "PASS" } else { "FAIL" })?;
    Ok(CovarianceReport {
        transform: spec.to_string(),
        residual_before: before,
        residual_after: after,
        passed,
        parity_witness: None,
    })
}
