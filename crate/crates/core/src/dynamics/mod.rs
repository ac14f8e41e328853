//! Method-of-lines evolution of `iγ^μ(∂_μψ − ia_μψ) = T(ψ)` on periodic
//! lattices, exact solution families, and conservation diagnostics.

mod analytic;
mod derivative;
mod diagnostics;
mod grid;
mod init;
mod integrate;
mod operator;
mod potential;
mod snapshot;

pub use analytic::{
    homogeneous_solution, residual_norm, sample_points, AnalyticSolution, Branch, Jet, PlaneWave,
};
pub use derivative::{DerivativeMethod, Differentiator};
pub use diagnostics::{
    bilinear_integrals, charge_series, lattice_residual, measure_frequency, pairwise_sum,
    total_charge, DiagnosticRow,
};
pub use grid::{Grid, MIN_POINTS};
pub use init::{make_gaussian, make_homogeneous, make_plane_wave};
pub use integrate::{run, step_rk4, Probe, RunSettings, RunSummary, BLOWUP_LIMIT};
pub use operator::{rhs, FieldOperator};
pub use potential::{Potential, PotentialSpec};
pub use snapshot::{read_snapshot, write_snapshot, SeriesWriter, SERIES_HEADER, SNAPSHOT_MAGIC};

use num_complex::Complex64;
use thiserror::Error;

use crate::clifford::{Float, Spinor};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("integration fault: non-finite value at grid index {index}")]
    IntegrationFault { index: usize },
    #[error("instability fault at t = {time}: grid index {index} is non-finite or exceeds 1e12")]
    Instability { time: f64, index: usize },
    #[error("time step {dt} exceeds the stability bound {bound}")]
    StabilityBound { dt: f64, bound: f64 },
    #[error("not grid-commensurate: {0}")]
    NonCommensurate(String),
    #[error("degenerate plane-wave projector for base spinor e{base}; try e{alternative}")]
    DegenerateProjector { base: usize, alternative: usize },
    #[error("amplitude collapse: |component| = {value:e} < 1e-6 at sample {index}")]
    AmplitudeCollapse { index: usize, value: f64 },
    #[error("initial data is not stationary under this nonlinearity: {0}")]
    NotStationary(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("snapshot format error: {0}")]
    Format(String),
}

/// Spinor field on a grid at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    pub grid: Grid,
    pub time: f64,
    pub values: Vec<Spinor<Float>>,
}

impl FieldState {
    pub fn new(grid: Grid, time: f64, values: Vec<Spinor<Float>>) -> Result<Self, DynamicsError> {
        if values.len() != grid.len() {
            return Err(DynamicsError::Precondition(format!(
                "{} values for a grid of {} points",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, time, values })
    }

    pub fn zeros(grid: Grid, time: f64) -> Self {
        let values = vec![Spinor::zero(); grid.len()];
        Self { grid, time, values }
    }

    /// Samples `f` at every lattice point at the state's time.
    pub fn from_fn(grid: Grid, time: f64, f: impl Fn([f64; 4]) -> Spinor<Float>) -> Self {
        let values = (0..grid.len())
            .map(|i| f(grid.spacetime_point(i, time)))
            .collect();
        Self { grid, time, values }
    }

    /// Index of the first point holding a NaN or infinite component.
    pub fn first_non_finite(&self) -> Option<usize> {
        self.values
            .iter()
            .position(|s| s.0.iter().any(|c| !c.is_finite()))
    }

    /// One spinor component as a scalar lattice field.
    pub fn component(&self, c: usize) -> Vec<Complex64> {
        self.values.iter().map(|s| s.0[c]).collect()
    }

    /// Pointwise map producing a new state at the same time.
    pub fn map(&self, f: impl Fn(usize, &Spinor<Float>) -> Spinor<Float>) -> Self {
        let values = self.values.iter().enumerate().map(|(i, s)| f(i, s)).collect();
        Self {
            grid: self.grid.clone(),
            time: self.time,
            values,
        }
    }
}
