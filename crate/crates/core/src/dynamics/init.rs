use num_complex::Complex64;

use super::analytic::{Branch, PlaneWave};
use super::grid::Grid;
use super::{DynamicsError, FieldState};
use crate::clifford::{Float, Spinor};

/// Normalized plane wave with per-axis Fourier momentum indices, at time `t`.
pub fn make_plane_wave(
    grid: &Grid,
    momentum_index: &[i64],
    mass: f64,
    branch: Branch,
    t: f64,
) -> Result<FieldState, DynamicsError> {
    PlaneWave::on_grid(grid, momentum_index, mass, branch, t)
}

/// Gaussian packet `e_base·exp(−|x − x₀|²/(2w²))·e^{ip·x}` at `t = 0`, with
/// distances taken to the nearest periodic image of the center.
pub fn make_gaussian(
    grid: &Grid,
    center: &[f64],
    width: f64,
    base: usize,
    momentum_index: &[i64],
) -> Result<FieldState, DynamicsError> {
    if center.len() != grid.dims() {
        return Err(DynamicsError::Precondition(format!(
            "{} center coordinates for a {}-axis grid",
            center.len(),
            grid.dims()
        )));
    }
    if !(width > 0.0 && width.is_finite()) {
        return Err(DynamicsError::Precondition(format!("width must be positive, got {width}")));
    }
    if base > 3 {
        return Err(DynamicsError::Precondition(format!("base spinor index {base} out of range")));
    }
    let p = grid.momentum(momentum_index)?;
    let e = Spinor::<Float>::basis(base);
    let g = grid.clone();
    Ok(FieldState::from_fn(grid.clone(), 0.0, |x| {
        let mut r2 = 0.0;
        let mut phase = 0.0;
        for axis in 0..g.dims() {
            let mu = g.spacetime_axis(axis);
            let l = g.lengths()[axis];
            let mut d = (x[mu] - center[axis]).rem_euclid(l);
            if d > 0.5 * l {
                d -= l;
            }
            r2 += d * d;
            phase += p[mu - 1] * x[mu];
        }
        e.scale(&Complex64::from_polar((-r2 / (2.0 * width * width)).exp(), phase))
    }))
}

/// Constant field `c·e₁` at `t = 0`.
pub fn make_homogeneous(grid: &Grid, c: Complex64) -> FieldState {
    let v = Spinor::<Float>::basis(0).scale(&c);
    FieldState::from_fn(grid.clone(), 0.0, |_| v.clone())
}
