use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::operator::FieldOperator;
use super::{DynamicsError, FieldState};
use crate::clifford::{dirac_adjoint, Float, Matrix4, Spinor};
use crate::nonlinearity::equation_lhs;

/// Fixed-order pairwise sum; the split points depend only on the length.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const LEAF: usize = 8;
    if values.len() <= LEAF {
        return values.iter().fold(0.0, |acc, v| acc + v);
    }
    let (lo, hi) = values.split_at(values.len() / 2);
    pairwise_sum(lo) + pairwise_sum(hi)
}

/// `Q = Σ ψ†ψ · cell volume`.
pub fn total_charge(state: &FieldState) -> f64 {
    let density: Vec<f64> = state.values.par_iter().map(|v| v.norm_sqr()).collect();
    pairwise_sum(&density) * state.grid.cell_volume()
}

/// Grid integrals of `ψ̄ψ` and `ψ̄Iψ`.
pub fn bilinear_integrals(state: &FieldState, pseudoscalar: &Matrix4<Float>) -> (f64, f64) {
    let (s, p): (Vec<f64>, Vec<f64>) = state
        .values
        .par_iter()
        .map(|v| {
            let bar = dirac_adjoint(v);
            (bar.pair(v).re, bar.sandwich(pseudoscalar, v).re)
        })
        .unzip();
    let dv = state.grid.cell_volume();
    (pairwise_sum(&s) * dv, pairwise_sum(&p) * dv)
}

/// One line of the diagnostic series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnosticRow {
    pub t: f64,
    pub charge: f64,
    pub s_int: f64,
    pub p_int: f64,
    pub residual: f64,
}

/// `(t, Q)` for each stored state.
pub fn charge_series(states: &[FieldState]) -> Vec<(f64, f64)> {
    states.iter().map(|s| (s.time, total_charge(s))).collect()
}

/// Max over grid points of `|iγ^μ(∂_μψ − ia_μψ) − T(ψ)|` at `cur`, with
/// `∂_t` from the centered difference of `prev` and `next` and spatial
/// derivatives from the operator's discretization.
pub fn lattice_residual(
    op: &FieldOperator,
    prev: &FieldState,
    cur: &FieldState,
    next: &FieldState,
) -> Result<f64, DynamicsError> {
    let span = next.time - prev.time;
    if !(span > 0.0) {
        return Err(DynamicsError::Precondition(format!(
            "residual needs states ordered in time, got span {span}"
        )));
    }
    let grid = op.grid();
    let n = grid.len();
    if prev.values.len() != n || cur.values.len() != n || next.values.len() != n {
        return Err(DynamicsError::Precondition("residual states do not match the grid".into()));
    }
    let spatial = op.spatial_derivatives(&cur.values);
    let inv = Complex64::new(1.0 / span, 0.0);
    let norms: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|p| {
            let mut d: [Spinor<Float>; 4] = std::array::from_fn(|_| Spinor::zero());
            d[0] = (&next.values[p] - &prev.values[p]).scale(&inv);
            for (axis, field) in spatial.iter().enumerate() {
                d[grid.spacetime_axis(axis)] = field[p].clone();
            }
            let x = grid.spacetime_point(p, cur.time);
            let a = op.potential().at(x);
            equation_lhs(op.spec(), &cur.values[p], &d, &a).norm_sqr().sqrt()
        })
        .collect();
    Ok(norms.into_iter().fold(0.0, f64::max))
}

/// Angular frequency `|ω|` of a sampled component `(t, z(t))`, from the
/// least-squares slope of its unwrapped phase.
pub fn measure_frequency(series: &[(f64, Complex64)]) -> Result<f64, DynamicsError> {
    const MIN_AMPLITUDE: f64 = 1e-6;
    if series.len() < 2 {
        return Err(DynamicsError::Precondition("frequency needs at least two samples".into()));
    }
    if let Some((index, (_, z))) = series
        .iter()
        .enumerate()
        .find(|(_, (_, z))| !(z.norm() >= MIN_AMPLITUDE))
    {
        return Err(DynamicsError::AmplitudeCollapse { index, value: z.norm() });
    }
    let mut phases = Vec::with_capacity(series.len());
    let mut last = series[0].1.arg();
    let mut offset = 0.0;
    phases.push(last);
    for (_, z) in &series[1..] {
        let raw = z.arg();
        let mut jump = raw - last;
        while jump > PI {
            offset -= 2.0 * PI;
            jump -= 2.0 * PI;
        }
        while jump < -PI {
            offset += 2.0 * PI;
            jump += 2.0 * PI;
        }
        phases.push(raw + offset);
        last = raw;
    }
    let count = series.len() as f64;
    let times: Vec<f64> = series.iter().map(|(t, _)| *t).collect();
    let t_mean = pairwise_sum(&times) / count;
    let phi_mean = pairwise_sum(&phases) / count;
    let sxy: Vec<f64> = times.iter().zip(&phases).map(|(t, p)| (t - t_mean) * (p - phi_mean)).collect();
    let sxx: Vec<f64> = times.iter().map(|t| (t - t_mean).powi(2)).collect();
    let denom = pairwise_sum(&sxx);
    if denom <= 0.0 {
        return Err(DynamicsError::Precondition("frequency samples share one time".into()));
    }
    Ok((pairwise_sum(&sxy) / denom).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::pseudoscalar;
    use crate::dynamics::{make_homogeneous, Grid};

    #[test]
    fn pairwise_sum_matches_naive_on_integers() {
        let v: Vec<f64> = (1..=1000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&v), 500500.0);
        assert_eq!(pairwise_sum(&[]), 0.0);
    }

    #[test]
    fn charge_and_bilinears_of_homogeneous_field() {
        let g = Grid::line(64, 8.0).unwrap();
        let s = make_homogeneous(&g, Complex64::new(0.0, 2.0));
        assert!((total_charge(&s) - 32.0).abs() < 1e-12);
        let (si, pi) = bilinear_integrals(&s, &pseudoscalar());
        assert!((si - 32.0).abs() < 1e-12);
        assert!(pi.abs() < 1e-12);
        assert_eq!(total_charge(&FieldState::zeros(g, 0.0)), 0.0);
    }

    #[test]
    fn frequency_of_exact_rotation() {
        for omega in [1.0, -2.5, 7.0] {
            let series: Vec<(f64, Complex64)> = (0..2000)
                .map(|n| {
                    let t = n as f64 * 1e-2;
                    (t, Complex64::from_polar(0.3, -omega * t + 0.4))
                })
                .collect();
            let w = measure_frequency(&series).unwrap();
            assert!((w - f64::abs(omega)).abs() < 1e-10, "{w}");
        }
    }

    #[test]
    fn frequency_rejects_collapsed_amplitude() {
        let series = vec![
            (0.0, Complex64::new(1.0, 0.0)),
            (0.1, Complex64::new(1e-7, 0.0)),
            (0.2, Complex64::new(1.0, 0.0)),
        ];
        assert!(matches!(
            measure_frequency(&series),
            Err(DynamicsError::AmplitudeCollapse { index: 1, .. })
        ));
    }
}
