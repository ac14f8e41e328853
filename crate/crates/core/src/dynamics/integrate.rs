use num_complex::Complex64;
use rayon::prelude::*;

use super::diagnostics::{bilinear_integrals, lattice_residual, total_charge, DiagnosticRow};
use super::operator::FieldOperator;
use super::{DynamicsError, FieldState};
use crate::clifford::{Float, Spinor};

/// Component magnitude treated as a blow-up.
pub const BLOWUP_LIMIT: f64 = 1e12;

fn axpy(base: &[Spinor<Float>], k: &[Spinor<Float>], h: f64) -> Vec<Spinor<Float>> {
    let h = Complex64::new(h, 0.0);
    base.par_iter()
        .zip(k)
        .map(|(b, k)| b + &k.scale(&h))
        .collect()
}

fn stage_error(err: DynamicsError, time: f64) -> DynamicsError {
    match err {
        DynamicsError::IntegrationFault { index } => DynamicsError::Instability { time, index },
        other => other,
    }
}

/// Classical RK4 with no sign restriction on `dt` (used for backward steps).
fn rk4(op: &FieldOperator, state: &FieldState, dt: f64) -> Result<FieldState, DynamicsError> {
    let t = state.time;
    let y = &state.values;
    let fault = |e| stage_error(e, t);
    let k1 = op.rhs_at(y, t).map_err(fault)?;
    let k2 = op.rhs_at(&axpy(y, &k1, 0.5 * dt), t + 0.5 * dt).map_err(fault)?;
    let k3 = op.rhs_at(&axpy(y, &k2, 0.5 * dt), t + 0.5 * dt).map_err(fault)?;
    let k4 = op.rhs_at(&axpy(y, &k3, dt), t + dt).map_err(fault)?;
    let w1 = Complex64::new(dt / 6.0, 0.0);
    let w2 = Complex64::new(dt / 3.0, 0.0);
    let values: Vec<Spinor<Float>> = (0..y.len())
        .into_par_iter()
        .map(|p| {
            let inc = &(&k1[p].scale(&w1) + &k2[p].scale(&w2))
                + &(&k3[p].scale(&w2) + &k4[p].scale(&w1));
            &y[p] + &inc
        })
        .collect();
    let time = t + dt;
    if let Some(index) = values
        .iter()
        .position(|s| s.0.iter().any(|c| !c.is_finite() || c.norm() > BLOWUP_LIMIT))
    {
        return Err(DynamicsError::Instability { time, index });
    }
    Ok(FieldState {
        grid: state.grid.clone(),
        time,
        values,
    })
}

/// One RK4 step of size `dt > 0`.
pub fn step_rk4(op: &FieldOperator, state: &FieldState, dt: f64) -> Result<FieldState, DynamicsError> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(DynamicsError::Precondition(format!("time step must be positive, got {dt}")));
    }
    rk4(op, state, dt)
}

/// Grid point and spinor component recorded every step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Probe {
    pub point: usize,
    pub component: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSettings {
    pub dt: f64,
    pub steps: usize,
    /// Diagnostic rows are emitted at steps divisible by this.
    pub output_every: usize,
    pub probe: Option<Probe>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub rows: Vec<DiagnosticRow>,
    pub probe_series: Vec<(f64, Complex64)>,
    pub final_state: FieldState,
    pub initial_charge: f64,
    /// Largest `|Q(t)/Q(0) − 1|` over all steps (absolute `|Q(t)|` if `Q(0) = 0`).
    pub max_charge_drift: f64,
}

/// Integrates `steps` RK4 steps, checking the stability bound first.
///
/// Each row's residual uses the centered difference of the neighbouring
/// steps, so one extra step is taken backwards from the start and forwards
/// past the end. `on_row` sees each row as it is produced; an error from it
/// stops the run.
pub fn run(
    op: &FieldOperator,
    initial: FieldState,
    settings: &RunSettings,
    mut on_row: impl FnMut(&DiagnosticRow) -> Result<(), DynamicsError>,
) -> Result<RunSummary, DynamicsError> {
    let dt = settings.dt;
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(DynamicsError::Precondition(format!("time step must be positive, got {dt}")));
    }
    if settings.output_every == 0 {
        return Err(DynamicsError::Precondition("output_every must be at least 1".into()));
    }
    if let Some(index) = initial.first_non_finite() {
        return Err(DynamicsError::IntegrationFault { index });
    }
    if let Some(probe) = settings.probe {
        if probe.point >= initial.values.len() || probe.component > 3 {
            return Err(DynamicsError::Precondition(format!("probe {probe:?} is off the grid")));
        }
    }
    let bound = op.stability_bound(&initial);
    if dt > bound {
        return Err(DynamicsError::StabilityBound { dt, bound });
    }

    let pseudo = op.table().pseudoscalar.clone();
    let q0 = total_charge(&initial);
    let drift = |q: f64| if q0 != 0.0 { (q / q0 - 1.0).abs() } else { q.abs() };
    let mut rows = Vec::new();
    let mut probe_series = Vec::new();
    let mut max_drift: f64 = 0.0;

    let mut prev = rk4(op, &initial, -dt)?;
    let mut cur = initial;
    for n in 0..=settings.steps {
        if let Some(probe) = settings.probe {
            probe_series.push((cur.time, cur.values[probe.point].0[probe.component]));
        }
        let charge = total_charge(&cur);
        max_drift = max_drift.max(drift(charge));
        let next = step_rk4(op, &cur, dt)?;
        if n % settings.output_every == 0 {
            let (s_int, p_int) = bilinear_integrals(&cur, &pseudo);
            let row = DiagnosticRow {
                t: cur.time,
                charge,
                s_int,
                p_int,
                residual: lattice_residual(op, &prev, &cur, &next)?,
            };
            on_row(&row)?;
            rows.push(row);
        }
        if n == settings.steps {
            break;
        }
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(RunSummary {
        rows,
        probe_series,
        final_state: cur,
        initial_charge: q0,
        max_charge_drift: max_drift,
    })
}
