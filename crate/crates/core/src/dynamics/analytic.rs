use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::grid::Grid;
use super::potential::Potential;
use super::{DynamicsError, FieldState};
use crate::clifford::{gammas, Float, Matrix4, MinkowskiMetric, Spinor};
use crate::nonlinearity::{equation_lhs, mass_term, NonlinearitySpec};

/// Field value and its four exact partial derivatives `∂_μψ` at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    pub value: Spinor<Float>,
    pub d: [Spinor<Float>; 4],
}

type JetFn = dyn Fn([f64; 4]) -> Jet + Send + Sync;

/// Closed-form field with exact derivatives, plus the background potential
/// it is meant to be paired with.
#[derive(Clone)]
pub struct AnalyticSolution {
    field: Arc<JetFn>,
    pub potential: Potential,
}

impl fmt::Debug for AnalyticSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AnalyticSolution")
            .field("potential", &self.potential)
            .finish_non_exhaustive()
    }
}

impl AnalyticSolution {
    pub fn new(field: impl Fn([f64; 4]) -> Jet + Send + Sync + 'static, potential: Potential) -> Self {
        Self {
            field: Arc::new(field),
            potential,
        }
    }

    pub fn jet(&self, x: [f64; 4]) -> Jet {
        (self.field)(x)
    }

    pub fn value(&self, x: [f64; 4]) -> Spinor<Float> {
        self.jet(x).value
    }

    /// Samples the field on a grid at time `t`.
    pub fn sample(&self, grid: &Grid, t: f64) -> FieldState {
        FieldState::from_fn(grid.clone(), t, |x| self.value(x))
    }

    /// Local wave vector `k^μ` (upper index) read off a nonzero component as
    /// `k_μ = i·∂_μψ_c / ψ_c`; meaningful for plane-wave-like solutions.
    pub fn local_momentum(&self, x: [f64; 4]) -> Option<[f64; 4]> {
        let jet = self.jet(x);
        let c = (0..4).max_by(|&a, &b| jet.value.0[a].norm().total_cmp(&jet.value.0[b].norm()))?;
        let v = jet.value.0[c];
        if v.norm() < 1e-12 {
            return None;
        }
        let lower: [f64; 4] =
            std::array::from_fn(|mu| (Complex64::i() * jet.d[mu].0[c] / v).re);
        Some(MinkowskiMetric::raise(lower))
    }
}

/// Energy branch of a plane wave.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Branch {
    #[default]
    Positive,
    Negative,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Positive => "positive",
            Branch::Negative => "negative",
        })
    }
}

impl FromStr for Branch {
    type Err = DynamicsError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "positive" => Ok(Branch::Positive),
            "negative" => Ok(Branch::Negative),
            other => Err(DynamicsError::Parse(format!("unknown branch {other:?}"))),
        }
    }
}

/// Free plane wave `ψ = N·(γ^μk_μ + m)·e_base·e^{−ik_μx^μ}` of the linear
/// equation, with `k^μ = (E, p)` on the positive branch and `(−E, −p)` on the
/// negative one, `E = √(p² + m²)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneWave {
    pub momentum: [f64; 3],
    pub mass: f64,
    pub branch: Branch,
    /// 0-based index of the base spinor; `e₁` (0) or `e₃` (2) by default.
    pub base: usize,
}

impl PlaneWave {
    pub fn new(momentum: [f64; 3], mass: f64, branch: Branch) -> Self {
        let base = match branch {
            Branch::Positive => 0,
            Branch::Negative => 2,
        };
        Self {
            momentum,
            mass,
            branch,
            base,
        }
    }

    pub fn with_base(mut self, base: usize) -> Self {
        self.base = base;
        self
    }

    pub fn energy(&self) -> f64 {
        let p2: f64 = self.momentum.iter().map(|p| p * p).sum();
        (p2 + self.mass * self.mass).sqrt()
    }

    /// Lower-index wave covector `k_μ`.
    pub fn wave_covector(&self) -> [f64; 4] {
        let e = self.energy();
        let [p1, p2, p3] = self.momentum;
        let upper = match self.branch {
            Branch::Positive => [e, p1, p2, p3],
            Branch::Negative => [-e, -p1, -p2, -p3],
        };
        MinkowskiMetric::lower(upper)
    }

    /// Unit-norm amplitude spinor `N·(γ^μk_μ + m)·e_base`.
    pub fn amplitude(&self) -> Result<Spinor<Float>, DynamicsError> {
        if !(self.mass >= 0.0 && self.mass.is_finite()) {
            return Err(DynamicsError::Precondition(format!(
                "mass must be finite and non-negative, got {}",
                self.mass
            )));
        }
        if self.energy() == 0.0 {
            return Err(DynamicsError::Precondition(
                "plane wave with p = 0 and m = 0 cannot be normalized".into(),
            ));
        }
        let k = self.wave_covector();
        let g = gammas::<Float>();
        let mut op = Matrix4::<Float>::identity().scale(&Float::new(self.mass, 0.0));
        for mu in 0..4 {
            op = &op + &g[mu].scale(&Float::new(k[mu], 0.0));
        }
        let u = op.apply(&Spinor::basis(self.base));
        let norm = u.norm_sqr().sqrt();
        if norm <= 1e-12 * (self.energy() + self.mass) {
            return Err(DynamicsError::DegenerateProjector {
                base: self.base + 1,
                alternative: (self.base + 2) % 4 + 1,
            });
        }
        Ok(u.scale(&Float::new(1.0 / norm, 0.0)))
    }

    /// Exact solution with zero potential.
    pub fn solution(&self) -> Result<AnalyticSolution, DynamicsError> {
        let u = self.amplitude()?;
        let k = self.wave_covector();
        Ok(AnalyticSolution::new(
            move |x| {
                let phase = -(k[0] * x[0] + k[1] * x[1] + k[2] * x[2] + k[3] * x[3]);
                let value = u.scale(&Complex64::from_polar(1.0, phase));
                let d = std::array::from_fn(|mu| value.scale(&Complex64::new(0.0, -k[mu])));
                Jet { value, d }
            },
            Potential::zero(),
        ))
    }

    /// Samples the wave on a grid at time `t`; the momentum must be one of
    /// the grid's Fourier modes.
    pub fn on_grid(grid: &Grid, index: &[i64], mass: f64, branch: Branch, t: f64) -> Result<FieldState, DynamicsError> {
        let p = grid.momentum(index)?;
        let wave = PlaneWave::new(p, mass, branch);
        Ok(wave.solution()?.sample(grid, t))
    }
}

/// Spatially constant solution `ψ(t) = e^{−iωt}·c·e₁`, valid whenever
/// `T(c·e₁) = ω·c·e₁` with real `ω`: `ω = m` for a constant mass,
/// `ω = f(|c|²)` for `F(Z)` when that value is real, `ω = 2|c|²` for the
/// Heisenberg term. Returns the solution and `ω`.
pub fn homogeneous_solution(
    spec: &NonlinearitySpec,
    c: Complex64,
) -> Result<(AnalyticSolution, f64), DynamicsError> {
    let psi0 = Spinor::<Float>::basis(0).scale(&c);
    if c.norm() == 0.0 {
        let zero = AnalyticSolution::new(
            |_| Jet {
                value: Spinor::zero(),
                d: std::array::from_fn(|_| Spinor::zero()),
            },
            Potential::zero(),
        );
        return Ok((zero, 0.0));
    }
    let t = mass_term(spec, &psi0);
    let omega = t.0[0] / c;
    let stray = t.0[1..].iter().map(|z| z.norm()).fold(0.0, f64::max);
    let scale = t.max_magnitude().max(1.0);
    if stray > 1e-12 * scale || omega.im.abs() > 1e-12 * scale {
        return Err(DynamicsError::NotStationary(format!(
            "T(c e1) = {:?} is not a real multiple of c e1",
            t.0
        )));
    }
    let omega = omega.re;
    let sol = AnalyticSolution::new(
        move |x| {
            let value = psi0.scale(&Complex64::from_polar(1.0, -omega * x[0]));
            let mut d: [Spinor<Float>; 4] = std::array::from_fn(|_| Spinor::zero());
            d[0] = value.scale(&Complex64::new(0.0, -omega));
            Jet { value, d }
        },
        Potential::zero(),
    );
    Ok((sol, omega))
}

/// Largest Euclidean norm of the field-equation left-hand side over `samples`.
pub fn residual_norm(sol: &AnalyticSolution, spec: &NonlinearitySpec, samples: &[[f64; 4]]) -> f64 {
    samples
        .iter()
        .map(|&x| {
            let jet = sol.jet(x);
            let a = sol.potential.at(x);
            equation_lhs(spec, &jet.value, &jet.d, &a).norm_sqr().sqrt()
        })
        .fold(0.0, f64::max)
}

/// Deterministic spacetime sample points in `[0, extent_μ)` per coordinate.
pub fn sample_points(count: usize, extent: [f64; 4], seed: u64) -> Vec<[f64; 4]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| std::array::from_fn(|mu| rng.gen::<f64>() * extent[mu]))
        .collect()
}
