use std::f64::consts::PI;

use super::DynamicsError;

/// Periodic spatial lattice with one or three active axes.
///
/// A one-axis grid spans the `x³` direction (fields are constant along `x¹`
/// and `x²`); a three-axis grid spans `x¹, x², x³` in that order. Points are
/// indexed row-major with the last axis varying fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    points: Vec<usize>,
    lengths: Vec<f64>,
}

pub const MIN_POINTS: usize = 8;

impl Grid {
    pub fn new(points: &[usize], lengths: &[f64]) -> Result<Self, DynamicsError> {
        let dims = points.len();
        if dims != 1 && dims != 3 {
            return Err(DynamicsError::InvalidGrid(format!(
                "grid must have 1 or 3 axes, got {dims}"
            )));
        }
        if lengths.len() != dims {
            return Err(DynamicsError::InvalidGrid(format!(
                "{} lengths given for {dims} axes",
                lengths.len()
            )));
        }
        if let Some(n) = points.iter().find(|&&n| n < MIN_POINTS) {
            return Err(DynamicsError::InvalidGrid(format!(
                "each axis needs at least {MIN_POINTS} points, got {n}"
            )));
        }
        if let Some(l) = lengths.iter().find(|&&l| !(l > 0.0 && l.is_finite())) {
            return Err(DynamicsError::InvalidGrid(format!(
                "box lengths must be positive and finite, got {l}"
            )));
        }
        Ok(Self {
            points: points.to_vec(),
            lengths: lengths.to_vec(),
        })
    }

    /// One-axis grid along `x³`.
    pub fn line(points: usize, length: f64) -> Result<Self, DynamicsError> {
        Self::new(&[points], &[length])
    }

    pub fn dims(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[usize] {
        &self.points
    }

    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        self.lengths[axis] / self.points[axis] as f64
    }

    pub fn min_spacing(&self) -> f64 {
        (0..self.dims())
            .map(|a| self.spacing(a))
            .fold(f64::INFINITY, f64::min)
    }

    /// Total number of lattice points.
    pub fn len(&self) -> usize {
        self.points.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cell_volume(&self) -> f64 {
        (0..self.dims()).map(|a| self.spacing(a)).product()
    }

    /// Spacetime index (1..=3) that a grid axis spans.
    pub fn spacetime_axis(&self, axis: usize) -> usize {
        if self.dims() == 1 {
            3
        } else {
            axis + 1
        }
    }

    /// Grid axis spanning spacetime index `mu`, if any.
    pub fn grid_axis(&self, mu: usize) -> Option<usize> {
        (0..self.dims()).find(|&a| self.spacetime_axis(a) == mu)
    }

    /// Distance between consecutive points along an axis in the linear index.
    pub fn stride(&self, axis: usize) -> usize {
        self.points[axis + 1..].iter().product()
    }

    pub fn multi_index(&self, index: usize) -> Vec<usize> {
        let mut rest = index;
        let mut out = vec![0; self.dims()];
        for axis in (0..self.dims()).rev() {
            out[axis] = rest % self.points[axis];
            rest /= self.points[axis];
        }
        out
    }

    /// Spacetime coordinates `(t, x¹, x², x³)` of a lattice point; inactive
    /// spatial coordinates are zero.
    pub fn spacetime_point(&self, index: usize, t: f64) -> [f64; 4] {
        let mut x = [t, 0.0, 0.0, 0.0];
        for (axis, k) in self.multi_index(index).into_iter().enumerate() {
            x[self.spacetime_axis(axis)] = k as f64 * self.spacing(axis);
        }
        x
    }

    /// Wavenumber `2πn/L` of Fourier index `n` along an axis.
    pub fn wavenumber(&self, axis: usize, n: i64) -> f64 {
        2.0 * PI * n as f64 / self.lengths[axis]
    }

    /// Spatial momentum `(p¹, p², p³)` for per-axis Fourier indices.
    pub fn momentum(&self, index: &[i64]) -> Result<[f64; 3], DynamicsError> {
        if index.len() != self.dims() {
            return Err(DynamicsError::NonCommensurate(format!(
                "{} momentum indices for a {}-axis grid",
                index.len(),
                self.dims()
            )));
        }
        let mut p = [0.0; 3];
        for (axis, &n) in index.iter().enumerate() {
            if n.unsigned_abs() as usize >= self.points[axis] / 2 {
                return Err(DynamicsError::NonCommensurate(format!(
                    "momentum index {n} is not resolved by {} points",
                    self.points[axis]
                )));
            }
            p[self.spacetime_axis(axis) - 1] = self.wavenumber(axis, n);
        }
        Ok(p)
    }

    /// Header fields `n=..` and `L=..` values as comma lists.
    pub(crate) fn header_lists(&self) -> (String, String) {
        let n: Vec<String> = self.points.iter().map(|n| n.to_string()).collect();
        let l: Vec<String> = self.lengths.iter().map(|l| l.to_string()).collect();
        (n.join(","), l.join(","))
    }
}
