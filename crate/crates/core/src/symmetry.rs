//! Spin₊(1,3) and parity elements, the double cover onto Lorentz matrices,
//! and Lorentz and gauge transformations of fields.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use thiserror::Error;

use crate::clifford::{gamma, gammas, gammas_lower, Float, Matrix4, MinkowskiMetric, Scalar, Spinor};
use crate::dynamics::{AnalyticSolution, DynamicsError, FieldState, Grid, Jet, Potential};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SymmetryError {
    #[error("plane ({0}, {1}) needs two distinct indices in 0..=3")]
    InvalidPlane(usize, usize),
    #[error("not a spin element: {0}")]
    NotSpinElement(String),
    #[error("transform parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}

/// Real 4×4 matrix `P[μ][ν]` acting on upper-index vectors.
pub type LorentzMatrix<R> = [[R; 4]; 4];

/// Spinor transformation `S` stored with the Lorentz matrix it induces.
#[derive(Debug, Clone, PartialEq)]
pub struct LorentzPair<S: Scalar> {
    pub s: Matrix4<S>,
    pub p: LorentzMatrix<S::Real>,
}

impl<S: Scalar> LorentzPair<S> {
    /// Pairs `s` with `spin_to_lorentz(s)`.
    pub fn from_spin(s: Matrix4<S>) -> Result<Self, SymmetryError> {
        let p = spin_to_lorentz(&s)?;
        Ok(Self { s, p })
    }

    pub fn to_float(&self) -> LorentzPair<Float> {
        LorentzPair {
            s: self.s.to_float(),
            p: std::array::from_fn(|r| std::array::from_fn(|c| S::real_to_f64(&self.p[r][c]))),
        }
    }
}

/// `P[μ][ν] = ¼·tr(S⁻¹γ^μSγ_ν)`, so that `S⁻¹γ^μS = P[μ][ν]γ^ν`.
///
/// Fails when `S` is singular, a trace has an imaginary part, or
/// `PᵀηP ≠ η`.
pub fn spin_to_lorentz<S: Scalar>(s: &Matrix4<S>) -> Result<LorentzMatrix<S::Real>, SymmetryError> {
    let inv = s
        .inverse()
        .ok_or_else(|| SymmetryError::NotSpinElement("matrix is singular".into()))?;
    let up = gammas::<S>();
    let low = gammas_lower::<S>();
    let scale = s.max_magnitude() * inv.max_magnitude();
    let four = S::real_from_int(4);
    let mut p: LorentzMatrix<S::Real> = std::array::from_fn(|_| std::array::from_fn(|_| S::real_from_int(0)));
    for mu in 0..4 {
        let conj = &(&inv * &up[mu]) * s;
        for nu in 0..4 {
            let tr = (&conj * &low[nu]).trace();
            if !S::real_negligible(&tr.im(), scale) {
                return Err(SymmetryError::NotSpinElement(format!(
                    "trace for P[{mu}][{nu}] has imaginary part {:e}",
                    S::real_to_f64(&tr.im())
                )));
            }
            p[mu][nu] = tr.re() / four.clone();
        }
    }
    let p_scale = p
        .iter()
        .flatten()
        .map(|x| S::real_to_f64(x).abs())
        .fold(1.0, f64::max);
    for i in 0..4 {
        for j in 0..4 {
            let mut g = S::real_from_int(-if i == j { MinkowskiMetric::sign(i) } else { 0 });
            for (k, row) in p.iter().enumerate() {
                g = g + S::real_from_int(MinkowskiMetric::sign(k)) * row[i].clone() * row[j].clone();
            }
            if !S::real_negligible(&g, p_scale * p_scale) {
                return Err(SymmetryError::NotSpinElement(format!(
                    "PᵀηP differs from η at ({i}, {j}) by {:e}",
                    S::real_to_f64(&g)
                )));
            }
        }
    }
    Ok(p)
}

/// `S = exp(½θγ^aγ^b)` in closed form. Spatial planes give rotations by
/// `θ`, planes `(0, k)` give boosts of rapidity `θ`.
pub fn spin_from_plane(a: usize, b: usize, theta: f64) -> Result<LorentzPair<Float>, SymmetryError> {
    if a == b || a > 3 || b > 3 {
        return Err(SymmetryError::InvalidPlane(a, b));
    }
    let ga = gamma::<Float>(a).expect("index checked");
    let gb = gamma::<Float>(b).expect("index checked");
    let generator = &ga * &gb;
    let half = 0.5 * theta;
    // (γ^aγ^b)² = −η^aa·η^bb.
    let (c, sn) = if MinkowskiMetric::sign(a) * MinkowskiMetric::sign(b) > 0 {
        (half.cos(), half.sin())
    } else {
        (half.cosh(), half.sinh())
    };
    let s = &Matrix4::identity().scale_real(&c) + &generator.scale_real(&sn);
    LorentzPair::from_spin(s)
}

/// The parity element `S = γ⁰`, `P = diag(1, −1, −1, −1)`.
pub fn parity<S: Scalar>() -> LorentzPair<S> {
    let s = gamma::<S>(0).expect("γ⁰ exists");
    LorentzPair::from_spin(s).expect("γ⁰ is a pin element")
}

/// `P⁻¹ = ηPᵀη` for a Lorentz matrix.
pub fn lorentz_inverse(p: &LorentzMatrix<f64>) -> LorentzMatrix<f64> {
    std::array::from_fn(|r| {
        std::array::from_fn(|c| {
            (MinkowskiMetric::sign(r) * MinkowskiMetric::sign(c)) as f64 * p[c][r]
        })
    })
}

pub fn lorentz_product(a: &LorentzMatrix<f64>, b: &LorentzMatrix<f64>) -> LorentzMatrix<f64> {
    std::array::from_fn(|r| std::array::from_fn(|c| (0..4).map(|k| a[r][k] * b[k][c]).sum()))
}

fn apply_lorentz(p: &LorentzMatrix<f64>, x: [f64; 4]) -> [f64; 4] {
    std::array::from_fn(|r| (0..4).map(|c| p[r][c] * x[c]).sum())
}

/// `ψ′(x) = Sψ(P⁻¹x)` with `∂′_μψ′ = S·(P⁻¹)^ν_μ·∂_νψ(P⁻¹x)`; the
/// attached potential is pulled back as a covector.
pub fn transform_solution(sol: &AnalyticSolution, pair: &LorentzPair<Float>) -> AnalyticSolution {
    let p_inv = lorentz_inverse(&pair.p);
    let s = pair.s.clone();
    let inner = sol.clone();
    let potential = sol.potential.transformed(p_inv);
    AnalyticSolution::new(
        move |x| {
            let y = apply_lorentz(&p_inv, x);
            let jet = inner.jet(y);
            let d = std::array::from_fn(|mu| {
                let mut acc = Spinor::<Float>::zero();
                for nu in 0..4 {
                    let w = p_inv[nu][mu];
                    if w != 0.0 {
                        acc = &acc + &jet.d[nu].scale(&Complex64::new(w, 0.0));
                    }
                }
                s.apply(&acc)
            });
            Jet {
                value: s.apply(&jet.value),
                d,
            }
        },
        potential,
    )
}

/// Gauge function `λ(x)`.
#[derive(Debug, Clone, PartialEq)]
pub enum GaugeFunction {
    Constant(f64),
    /// `λ = k_μx^μ` with the components given as `k_μ`.
    Linear([f64; 4]),
    /// `λ = amplitude·sin(2πn·x^axis/period)`; a missing period is taken
    /// from the grid when bound.
    Sine {
        axis: usize,
        amplitude: f64,
        wavenumber_index: i64,
        period: Option<f64>,
    },
}

impl GaugeFunction {
    /// Fills a missing sine period from the grid and checks that the
    /// function is periodic on it.
    pub fn bind(&self, grid: &Grid) -> Result<GaugeFunction, SymmetryError> {
        match self {
            GaugeFunction::Linear(k) => {
                for mu in 1..4 {
                    let periodic = match grid.grid_axis(mu) {
                        Some(axis) => {
                            let turns = k[mu] * grid.lengths()[axis] / (2.0 * std::f64::consts::PI);
                            (turns - turns.round()).abs() <= 1e-9
                        }
                        None => k[mu] == 0.0,
                    };
                    if !periodic {
                        return Err(DynamicsError::NonCommensurate(format!(
                            "linear gauge slope k_{mu} = {} is not periodic on the grid",
                            k[mu]
                        ))
                        .into());
                    }
                }
                Ok(self.clone())
            }
            GaugeFunction::Sine {
                axis,
                amplitude,
                wavenumber_index,
                period,
            } => {
                let grid_axis = grid.grid_axis(*axis).ok_or_else(|| {
                    DynamicsError::NonCommensurate(format!("gauge axis x{axis} is not spanned by the grid"))
                })?;
                let l = grid.lengths()[grid_axis];
                if let Some(p) = period {
                    if *p != l {
                        return Err(DynamicsError::NonCommensurate(format!(
                            "gauge period {p} differs from box length {l}"
                        ))
                        .into());
                    }
                }
                Ok(GaugeFunction::Sine {
                    axis: *axis,
                    amplitude: *amplitude,
                    wavenumber_index: *wavenumber_index,
                    period: Some(l),
                })
            }
            other => Ok(other.clone()),
        }
    }

    fn sine_k(period: Option<f64>, n: i64) -> Result<f64, SymmetryError> {
        match period {
            Some(l) if l > 0.0 => Ok(2.0 * std::f64::consts::PI * n as f64 / l),
            _ => Err(SymmetryError::Parse("sine gauge needs a positive period".into())),
        }
    }

    /// `(λ(x), ∂_μλ(x))`.
    pub fn eval(&self, x: [f64; 4]) -> Result<(f64, [f64; 4]), SymmetryError> {
        Ok(match *self {
            GaugeFunction::Constant(l) => (l, [0.0; 4]),
            GaugeFunction::Linear(k) => ((0..4).map(|mu| k[mu] * x[mu]).sum(), k),
            GaugeFunction::Sine {
                axis,
                amplitude,
                wavenumber_index,
                period,
            } => {
                let k = Self::sine_k(period, wavenumber_index)?;
                let mut d = [0.0; 4];
                d[axis] = amplitude * k * (k * x[axis]).cos();
                (amplitude * (k * x[axis]).sin(), d)
            }
        })
    }

    /// `−λ`.
    pub fn negated(&self) -> GaugeFunction {
        match self.clone() {
            GaugeFunction::Constant(l) => GaugeFunction::Constant(-l),
            GaugeFunction::Linear(k) => GaugeFunction::Linear(k.map(|v| -v)),
            GaugeFunction::Sine {
                axis,
                amplitude,
                wavenumber_index,
                period,
            } => GaugeFunction::Sine {
                axis,
                amplitude: -amplitude,
                wavenumber_index,
                period,
            },
        }
    }

    fn validate(&self) -> Result<(), SymmetryError> {
        if let GaugeFunction::Sine { axis, period, .. } = self {
            if !(1..=3).contains(axis) {
                return Err(SymmetryError::Parse(format!("sine gauge axis {axis} not in 1..=3")));
            }
            if period.is_some() {
                Self::sine_k(*period, 0)?;
            }
        }
        Ok(())
    }

    fn potential_shift(&self, potential: &Potential) -> Potential {
        match self {
            GaugeFunction::Constant(_) => potential.clone(),
            _ => {
                let g = self.clone();
                potential.shifted(move |x| g.eval(x).map(|(_, d)| d).unwrap_or([f64::NAN; 4]))
            }
        }
    }
}

/// `ψ̂ = e^{iλ}ψ`, `â_μ = a_μ + ∂_μλ` for a closed-form solution.
pub fn gauge_transform_solution(
    sol: &AnalyticSolution,
    g: &GaugeFunction,
) -> Result<AnalyticSolution, SymmetryError> {
    g.validate()?;
    if let GaugeFunction::Sine { period: None, .. } = g {
        return Err(SymmetryError::Parse("sine gauge on a closed-form field needs a period".into()));
    }
    let inner = sol.clone();
    let gf = g.clone();
    let potential = g.potential_shift(&sol.potential);
    Ok(AnalyticSolution::new(
        move |x| {
            let (lambda, dl) = gf.eval(x).expect("validated gauge function");
            let jet = inner.jet(x);
            let phase = Complex64::from_polar(1.0, lambda);
            let d = std::array::from_fn(|mu| {
                let shifted = &jet.d[mu] + &jet.value.scale(&Complex64::new(0.0, dl[mu]));
                shifted.scale(&phase)
            });
            Jet {
                value: jet.value.scale(&phase),
                d,
            }
        },
        potential,
    ))
}

/// Lattice form of the gauge map; `λ` is evaluated at the state's time.
pub fn gauge_transform_state(
    state: &FieldState,
    potential: &Potential,
    g: &GaugeFunction,
) -> Result<(FieldState, Potential), SymmetryError> {
    g.validate()?;
    let bound = g.bind(&state.grid)?;
    let grid = state.grid.clone();
    let time = state.time;
    let mut values = Vec::with_capacity(state.values.len());
    for (i, v) in state.values.iter().enumerate() {
        let (lambda, _) = bound.eval(grid.spacetime_point(i, time))?;
        values.push(v.scale(&Complex64::from_polar(1.0, lambda)));
    }
    let field = FieldState::new(grid, time, values)?;
    Ok((field, bound.potential_shift(potential)))
}

/// Textual transformation requests.
#[derive(Debug, Clone, PartialEq)]
pub enum TransformSpec {
    Rotation { a: usize, b: usize, theta: f64 },
    Boost { axis: usize, rapidity: f64 },
    Parity,
    Gauge(GaugeFunction),
}

impl TransformSpec {
    /// The spinor/Lorentz pair for non-gauge transforms.
    pub fn lorentz_pair(&self) -> Result<Option<LorentzPair<Float>>, SymmetryError> {
        match *self {
            TransformSpec::Rotation { a, b, theta } => spin_from_plane(a, b, theta).map(Some),
            TransformSpec::Boost { axis, rapidity } => spin_from_plane(0, axis, rapidity).map(Some),
            TransformSpec::Parity => Ok(Some(parity())),
            TransformSpec::Gauge(_) => Ok(None),
        }
    }

    /// Applies the transform to a closed-form solution.
    pub fn apply(&self, sol: &AnalyticSolution) -> Result<AnalyticSolution, SymmetryError> {
        match self {
            TransformSpec::Gauge(g) => gauge_transform_solution(sol, g),
            other => Ok(transform_solution(sol, &other.lorentz_pair()?.expect("non-gauge transform"))),
        }
    }
}

impl fmt::Display for TransformSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TransformSpec::Rotation { a, b, theta } => write!(f, "rot {a} {b} {theta}"),
            TransformSpec::Boost { axis, rapidity } => write!(f, "boost {axis} {rapidity}"),
            TransformSpec::Parity => f.write_str("parity"),
            TransformSpec::Gauge(GaugeFunction::Constant(l)) => write!(f, "gauge constant {l}"),
            TransformSpec::Gauge(GaugeFunction::Linear(k)) => {
                write!(f, "gauge linear {} {} {} {}", k[0], k[1], k[2], k[3])
            }
            TransformSpec::Gauge(GaugeFunction::Sine {
                axis,
                amplitude,
                wavenumber_index,
                period,
            }) => {
                write!(f, "gauge sine {axis} {amplitude} {wavenumber_index}")?;
                match period {
                    Some(p) => write!(f, " {p}"),
                    None => Ok(()),
                }
            }
        }
    }
}

impl FromStr for TransformSpec {
    type Err = SymmetryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |why: &str| SymmetryError::Parse(format!("{s:?}: {why}"));
        let words: Vec<&str> = s.split_whitespace().collect();
        let real = |w: &str| -> Result<f64, SymmetryError> {
            w.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| bad(&format!("{w:?} is not a finite number")))
        };
        let index = |w: &str| -> Result<usize, SymmetryError> {
            w.parse::<usize>()
                .ok()
                .filter(|&v| v <= 3)
                .ok_or_else(|| bad(&format!("{w:?} is not an index in 0..=3")))
        };
        let spec = match words.as_slice() {
            ["rot", a, b, theta] => {
                let (a, b) = (index(a)?, index(b)?);
                if a == 0 || b == 0 || a == b {
                    return Err(bad("rotation planes use two distinct spatial indices"));
                }
                TransformSpec::Rotation { a, b, theta: real(theta)? }
            }
            ["boost", k, chi] => {
                let axis = index(k)?;
                if axis == 0 {
                    return Err(bad("boost axis must be spatial"));
                }
                TransformSpec::Boost { axis, rapidity: real(chi)? }
            }
            ["parity"] => TransformSpec::Parity,
            ["gauge", "constant", l] => TransformSpec::Gauge(GaugeFunction::Constant(real(l)?)),
            ["gauge", "linear", k0, k1, k2, k3] => TransformSpec::Gauge(GaugeFunction::Linear([
                real(k0)?,
                real(k1)?,
                real(k2)?,
                real(k3)?,
            ])),
            ["gauge", "sine", axis, amplitude, n, rest @ ..] if rest.len() <= 1 => {
                let axis = index(axis)?;
                let wavenumber_index = n
                    .parse::<i64>()
                    .map_err(|_| bad("wavenumber index must be an integer"))?;
                let period = rest.first().map(|p| real(p)).transpose()?;
                TransformSpec::Gauge(GaugeFunction::Sine {
                    axis,
                    amplitude: real(amplitude)?,
                    wavenumber_index,
                    period,
                })
            }
            _ => return Err(bad(
                "expected `rot a b theta`, `boost k chi`, `parity`, `gauge constant l`, \
                 `gauge linear k0 k1 k2 k3` or `gauge sine axis amplitude n [period]`",
            )),
        };
        if let TransformSpec::Gauge(g) = &spec {
            g.validate()?;
        }
        Ok(spec)
    }
}
