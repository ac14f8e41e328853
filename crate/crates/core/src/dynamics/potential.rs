use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use super::grid::Grid;
use super::DynamicsError;

/// Background covector potential `x ↦ a_μ(x)` (lower index).
#[derive(Clone)]
pub struct Potential {
    eval: Arc<dyn Fn([f64; 4]) -> [f64; 4] + Send + Sync>,
    zero: bool,
}

impl fmt::Debug for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.zero {
            f.write_str("Potential(zero)")
        } else {
            f.write_str("Potential(..)")
        }
    }
}

impl Default for Potential {
    fn default() -> Self {
        Self::zero()
    }
}

impl Potential {
    pub fn zero() -> Self {
        Self {
            eval: Arc::new(|_| [0.0; 4]),
            zero: true,
        }
    }

    pub fn constant(a: [f64; 4]) -> Self {
        if a == [0.0; 4] {
            return Self::zero();
        }
        Self::from_fn(move |_| a)
    }

    pub fn from_fn(f: impl Fn([f64; 4]) -> [f64; 4] + Send + Sync + 'static) -> Self {
        Self {
            eval: Arc::new(f),
            zero: false,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.zero
    }

    pub fn at(&self, x: [f64; 4]) -> [f64; 4] {
        (self.eval)(x)
    }

    /// `a_μ(x) + shift_μ(x)`.
    pub fn shifted(&self, shift: impl Fn([f64; 4]) -> [f64; 4] + Send + Sync + 'static) -> Self {
        let base = self.eval.clone();
        Self::from_fn(move |x| {
            let a = base(x);
            let s = shift(x);
            [a[0] + s[0], a[1] + s[1], a[2] + s[2], a[3] + s[3]]
        })
    }

    /// Covector pull-back under `x ↦ Px`: `a′_μ(x) = (P⁻¹)^ν_μ a_ν(P⁻¹x)`.
    pub fn transformed(&self, p_inv: [[f64; 4]; 4]) -> Self {
        if self.zero {
            return Self::zero();
        }
        let base = self.eval.clone();
        Self::from_fn(move |x| {
            let y = mat_vec(&p_inv, x);
            let a = base(y);
            std::array::from_fn(|mu| (0..4).map(|nu| p_inv[nu][mu] * a[nu]).sum())
        })
    }
}

pub(crate) fn mat_vec(m: &[[f64; 4]; 4], x: [f64; 4]) -> [f64; 4] {
    std::array::from_fn(|r| (0..4).map(|c| m[r][c] * x[c]).sum())
}

/// Textual potential family used in run configurations.
#[derive(Debug, Clone, PartialEq)]
pub enum PotentialSpec {
    Zero,
    Constant([f64; 4]),
    /// `a_component(x) = amplitude · sin(2πn·x^axis / L)` for spacetime axis
    /// `axis ∈ 1..=3`, all other components zero.
    AxisSine {
        axis: usize,
        component: usize,
        amplitude: f64,
        wavenumber_index: i64,
    },
}

impl PotentialSpec {
    /// Binds this description to a grid (sine periods come from the box length).
    pub fn to_potential(&self, grid: &Grid) -> Result<Potential, DynamicsError> {
        match *self {
            PotentialSpec::Zero => Ok(Potential::zero()),
            PotentialSpec::Constant(a) => Ok(Potential::constant(a)),
            PotentialSpec::AxisSine {
                axis,
                component,
                amplitude,
                wavenumber_index,
            } => {
                let grid_axis = grid.grid_axis(axis).ok_or_else(|| {
                    DynamicsError::NonCommensurate(format!(
                        "potential axis x{axis} is not spanned by the grid"
                    ))
                })?;
                let k = grid.wavenumber(grid_axis, wavenumber_index);
                Ok(Potential::from_fn(move |x| {
                    let mut a = [0.0; 4];
                    a[component] = amplitude * (k * x[axis]).sin();
                    a
                }))
            }
        }
    }
}

impl fmt::Display for PotentialSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PotentialSpec::Zero => f.write_str("zero"),
            PotentialSpec::Constant(a) => {
                write!(f, "constant {} {} {} {}", a[0], a[1], a[2], a[3])
            }
            PotentialSpec::AxisSine {
                axis,
                component,
                amplitude,
                wavenumber_index,
            } => write!(f, "axis_sine {axis} {component} {amplitude} {wavenumber_index}"),
        }
    }
}

impl FromStr for PotentialSpec {
    type Err = DynamicsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |reason: &str| DynamicsError::Parse(format!("potential {s:?}: {reason}"));
        let words: Vec<&str> = s.split_whitespace().collect();
        let nums = |w: &[&str]| -> Result<Vec<f64>, DynamicsError> {
            w.iter()
                .map(|t| t.parse::<f64>().map_err(|_| bad("expected numbers")))
                .collect()
        };
        match words.as_slice() {
            ["zero"] => Ok(PotentialSpec::Zero),
            ["constant", rest @ ..] if rest.len() == 4 => {
                let v = nums(rest)?;
                if v.iter().any(|x| !x.is_finite()) {
                    return Err(bad("components must be finite"));
                }
                Ok(PotentialSpec::Constant([v[0], v[1], v[2], v[3]]))
            }
            ["axis_sine", axis, component, amplitude, n] => {
                let axis: usize = axis.parse().map_err(|_| bad("axis"))?;
                let component: usize = component.parse().map_err(|_| bad("component"))?;
                let amplitude: f64 = amplitude.parse().map_err(|_| bad("amplitude"))?;
                let wavenumber_index: i64 = n
                    .parse()
                    .map_err(|_| bad("wavenumber index must be an integer"))?;
                if !(1..=3).contains(&axis) || component > 3 || !amplitude.is_finite() {
                    return Err(bad("axis in 1..=3, component in 0..=3, finite amplitude"));
                }
                Ok(PotentialSpec::AxisSine {
                    axis,
                    component,
                    amplitude,
                    wavenumber_index,
                })
            }
            _ => Err(bad("expected `zero`, `constant a0 a1 a2 a3` or `axis_sine axis component amplitude n`")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_forms() {
        for text in ["zero", "constant 1 0 0.5 -2", "axis_sine 3 0 0.25 2"] {
            let spec: PotentialSpec = text.parse().unwrap();
            assert_eq!(spec.to_string().parse::<PotentialSpec>().unwrap(), spec);
        }
        assert!("axis_sine 3 0 0.25 2.5".parse::<PotentialSpec>().is_err());
        assert!("axis_sine 0 0 0.25 2".parse::<PotentialSpec>().is_err());
        assert!("constant 1 2 3".parse::<PotentialSpec>().is_err());
    }

    #[test]
    fn axis_sine_is_periodic_on_its_grid() {
        let g = Grid::line(32, 4.0).unwrap();
        let p = PotentialSpec::AxisSine {
            axis: 3,
            component: 0,
            amplitude: 0.5,
            wavenumber_index: 3,
        }
        .to_potential(&g)
        .unwrap();
        let a0 = p.at([0.0, 0.0, 0.0, 0.3])[0];
        let a1 = p.at([0.0, 0.0, 0.0, 4.3])[0];
        assert!((a0 - a1).abs() < 1e-14);
        let off_axis = PotentialSpec::AxisSine {
            axis: 1,
            component: 0,
            amplitude: 0.5,
            wavenumber_index: 3,
        };
        assert!(off_axis.to_potential(&g).is_err());
    }

    #[test]
    fn covector_transform_of_constant() {
        let a = Potential::constant([1.0, 2.0, 0.0, 0.0]);
        // Swap t and x¹ (its own inverse).
        let swap = [
            [0.0, 1.0, 0.0, 0.0],
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ];
        assert_eq!(a.transformed(swap).at([0.0; 4]), [2.0, 1.0, 0.0, 0.0]);
    }
}
