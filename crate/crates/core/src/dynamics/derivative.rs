use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use super::grid::Grid;
use super::DynamicsError;

/// Discrete first derivative on a periodic axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DerivativeMethod {
    /// Fourier differentiation; the Nyquist mode of even grids is zeroed.
    #[default]
    Spectral,
    /// Second-order central differences.
    Central2,
    /// Fourth-order central differences.
    Central4,
}

impl fmt::Display for DerivativeMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DerivativeMethod::Spectral => "spectral",
            DerivativeMethod::Central2 => "central2",
            DerivativeMethod::Central4 => "central4",
        })
    }
}

impl FromStr for DerivativeMethod {
    type Err = DynamicsError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "spectral" => Ok(DerivativeMethod::Spectral),
            "central2" => Ok(DerivativeMethod::Central2),
            "central4" => Ok(DerivativeMethod::Central4),
            other => Err(DynamicsError::Precondition(format!(
                "unknown derivative method {other:?}"
            ))),
        }
    }
}

struct AxisPlan {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    /// `i·k_j / N` per Fourier index, Nyquist zeroed.
    multipliers: Vec<Complex64>,
}

/// Applies `∂/∂x` along grid axes of a scalar lattice field.
pub struct Differentiator {
    grid: Grid,
    method: DerivativeMethod,
    plans: Vec<AxisPlan>,
}

impl fmt::Debug for Differentiator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Differentiator")
            .field("grid", &self.grid)
            .field("method", &self.method)
            .finish()
    }
}

impl Differentiator {
    pub fn new(grid: &Grid, method: DerivativeMethod) -> Self {
        let mut planner = FftPlanner::new();
        let plans = (0..grid.dims())
            .map(|axis| {
                let n = grid.points()[axis];
                let multipliers = (0..n)
                    .map(|j| {
                        let signed = if j < n.div_ceil(2) {
                            j as i64
                        } else {
                            j as i64 - n as i64
                        };
                        if n % 2 == 0 && j == n / 2 {
                            Complex64::new(0.0, 0.0)
                        } else {
                            Complex64::new(0.0, grid.wavenumber(axis, signed) / n as f64)
                        }
                    })
                    .collect();
                AxisPlan {
                    forward: planner.plan_fft_forward(n),
                    inverse: planner.plan_fft_inverse(n),
                    multipliers,
                }
            })
            .collect();
        Self {
            grid: grid.clone(),
            method,
            plans,
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn method(&self) -> DerivativeMethod {
        self.method
    }

    /// Derivative of `field` along grid axis `axis`.
    pub fn derivative(&self, field: &[Complex64], axis: usize) -> Vec<Complex64> {
        assert_eq!(field.len(), self.grid.len(), "field does not match grid");
        let n = self.grid.points()[axis];
        let stride = self.grid.stride(axis);
        let block = n * stride;
        let lines = field.len() / n;
        let line_start = |line: usize| (line / stride) * block + line % stride;

        let derived: Vec<Vec<Complex64>> = (0..lines)
            .into_par_iter()
            .map(|line| {
                let start = line_start(line);
                let mut buf: Vec<Complex64> = (0..n).map(|j| field[start + j * stride]).collect();
                self.derive_line(&mut buf, axis);
                buf
            })
            .collect();

        let mut out = vec![Complex64::new(0.0, 0.0); field.len()];
        for (line, values) in derived.into_iter().enumerate() {
            let start = line_start(line);
            for (j, v) in values.into_iter().enumerate() {
                out[start + j * stride] = v;
            }
        }
        out
    }

    fn derive_line(&self, buf: &mut Vec<Complex64>, axis: usize) {
        let h = self.grid.spacing(axis);
        let n = buf.len();
        match self.method {
            DerivativeMethod::Spectral => {
                let plan = &self.plans[axis];
                plan.forward.process(buf);
                for (b, m) in buf.iter_mut().zip(&plan.multipliers) {
                    *b *= m;
                }
                plan.inverse.process(buf);
            }
            DerivativeMethod::Central2 => {
                let f = buf.clone();
                for j in 0..n {
                    buf[j] = (f[(j + 1) % n] - f[(j + n - 1) % n]) / (2.0 * h);
                }
            }
            DerivativeMethod::Central4 => {
                let f = buf.clone();
                for j in 0..n {
                    let p1 = f[(j + 1) % n];
                    let p2 = f[(j + 2) % n];
                    let m1 = f[(j + n - 1) % n];
                    let m2 = f[(j + n - 2) % n];
                    buf[j] = (-p2 + p1 * 8.0 - m1 * 8.0 + m2) / (12.0 * h);
                }
            }
        }
    }
}
