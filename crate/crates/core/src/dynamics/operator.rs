use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::derivative::{DerivativeMethod, Differentiator};
use super::grid::Grid;
use super::potential::Potential;
use super::{DynamicsError, FieldState};
use crate::clifford::{Float, Matrix4, Spinor};
use crate::nonlinearity::{mass_term_with, GammaTable, NonlinearitySpec};

/// Semi-discrete right-hand side
/// `∂_tψ = −γ⁰γ^k∂_kψ + iγ⁰γ^μa_μψ − iγ⁰T(ψ)` on a periodic grid.
#[derive(Debug)]
pub struct FieldOperator {
    diff: Differentiator,
    spec: NonlinearitySpec,
    potential: Potential,
    table: GammaTable<Float>,
    /// `γ⁰γ^μ`.
    alpha: [Matrix4<Float>; 4],
}

impl FieldOperator {
    pub fn new(grid: &Grid, potential: Potential, spec: NonlinearitySpec, method: DerivativeMethod) -> Self {
        let table = GammaTable::<Float>::new();
        let alpha = std::array::from_fn(|mu| &table.upper[0] * &table.upper[mu]);
        Self {
            diff: Differentiator::new(grid, method),
            spec,
            potential,
            table,
            alpha,
        }
    }

    pub fn grid(&self) -> &Grid {
        self.diff.grid()
    }

    pub fn method(&self) -> DerivativeMethod {
        self.diff.method()
    }

    pub fn spec(&self) -> &NonlinearitySpec {
        &self.spec
    }

    pub fn potential(&self) -> &Potential {
        &self.potential
    }

    pub(crate) fn table(&self) -> &GammaTable<Float> {
        &self.table
    }

    /// Spatial derivatives of every component: `out[axis][point]` is
    /// `∂ψ/∂x` along grid axis `axis`.
    pub fn spatial_derivatives(&self, values: &[Spinor<Float>]) -> Vec<Vec<Spinor<Float>>> {
        let grid = self.grid();
        (0..grid.dims())
            .map(|axis| {
                let comps: Vec<Vec<Complex64>> = (0..4)
                    .map(|c| {
                        let f: Vec<Complex64> = values.iter().map(|s| s.0[c]).collect();
                        self.diff.derivative(&f, axis)
                    })
                    .collect();
                (0..values.len())
                    .map(|i| Spinor(std::array::from_fn(|c| comps[c][i])))
                    .collect()
            })
            .collect()
    }

    /// `∂_tψ` for the state's values and time.
    pub fn rhs(&self, state: &FieldState) -> Result<Vec<Spinor<Float>>, DynamicsError> {
        self.rhs_at(&state.values, state.time)
    }

    pub fn rhs_at(&self, values: &[Spinor<Float>], t: f64) -> Result<Vec<Spinor<Float>>, DynamicsError> {
        if let Some(index) = values
            .iter()
            .position(|s| s.0.iter().any(|c| !c.is_finite()))
        {
            return Err(DynamicsError::IntegrationFault { index });
        }
        let grid = self.grid();
        let derivs = self.spatial_derivatives(values);
        let i = Complex64::i();
        let out: Vec<Spinor<Float>> = values
            .par_iter()
            .enumerate()
            .map(|(p, psi)| {
                let mut acc = Spinor::<Float>::zero();
                for (axis, d) in derivs.iter().enumerate() {
                    let mu = grid.spacetime_axis(axis);
                    acc = &acc - &self.alpha[mu].apply(&d[p]);
                }
                if !self.potential.is_zero() {
                    let a = self.potential.at(grid.spacetime_point(p, t));
                    for mu in 0..4 {
                        if a[mu] != 0.0 {
                            let term = self.alpha[mu].apply(psi).scale(&(i * a[mu]));
                            acc = &acc + &term;
                        }
                    }
                }
                let mass = mass_term_with(&self.table, &self.spec, psi);
                let term = self.table.upper[0].apply(&mass).scale(&(-i));
                &acc + &term
            })
            .collect();
        if let Some(index) = out.iter().position(|s| s.0.iter().any(|c| !c.is_finite())) {
            return Err(DynamicsError::IntegrationFault { index });
        }
        Ok(out)
    }

    /// Largest `|T(ψ)|/|ψ|` over the state.
    pub fn effective_mass(&self, state: &FieldState) -> f64 {
        state
            .values
            .iter()
            .filter_map(|psi| {
                let n = psi.norm_sqr().sqrt();
                (n > 0.0).then(|| {
                    mass_term_with(&self.table, &self.spec, psi).norm_sqr().sqrt() / n
                })
            })
            .fold(0.0, f64::max)
    }

    /// RK4 step limit `2.5 / (π/Δx_min + m_eff + max|a|)` at the state's time,
    /// with `|a| = Σ_μ |a_μ|`.
    pub fn stability_bound(&self, state: &FieldState) -> f64 {
        let grid = self.grid();
        let max_a = if self.potential.is_zero() {
            0.0
        } else {
            (0..grid.len())
                .map(|p| {
                    self.potential
                        .at(grid.spacetime_point(p, state.time))
                        .iter()
                        .map(|a| a.abs())
                        .sum::<f64>()
                })
                .fold(0.0, f64::max)
        };
        2.5 / (PI / grid.min_spacing() + self.effective_mass(state) + max_a)
    }
}

/// One-shot `∂_tψ` evaluation; builds a [`FieldOperator`] for the call.
pub fn rhs(
    state: &FieldState,
    potential: &Potential,
    spec: &NonlinearitySpec,
    method: DerivativeMethod,
) -> Result<Vec<Spinor<Float>>, DynamicsError> {
    FieldOperator::new(&state.grid, potential.clone(), spec.clone(), method).rhs(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::make_homogeneous;
    use crate::n_algebra::FunctionSpec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rest_state() -> FieldState {
        make_homogeneous(&Grid::line(16, 4.0).unwrap(), Complex64::new(1.0, 0.0))
    }

    #[test]
    fn homogeneous_rest_examples() {
        let s = rest_state();
        let m1 = NonlinearitySpec::DiracMass(1.0);
        let d = rhs(&s, &Potential::zero(), &m1, DerivativeMethod::Spectral).unwrap();
        let expected = Spinor::<Float>::basis(0).scale(&Complex64::new(0.0, -1.0));
        assert!(d.iter().all(|v| v.approx_eq(&expected)));

        let a0 = Potential::constant([1.0, 0.0, 0.0, 0.0]);
        let d = rhs(&s, &a0, &m1, DerivativeMethod::Spectral).unwrap();
        assert!(d.iter().all(|v| v.max_magnitude() <= 1e-15));

        let zero = FieldState::zeros(s.grid.clone(), 0.0);
        let d = rhs(&zero, &a0, &NonlinearitySpec::Heisenberg, DerivativeMethod::Central4).unwrap();
        assert!(d.iter().all(|v| v.is_zero()));
    }

    #[test]
    fn nan_is_an_integration_fault() {
        let mut s = rest_state();
        s.values[5].0[2] = Complex64::new(f64::NAN, 0.0);
        let err = rhs(&s, &Potential::zero(), &NonlinearitySpec::DiracMass(1.0), DerivativeMethod::Spectral);
        assert_eq!(err, Err(DynamicsError::IntegrationFault { index: 5 }));
    }

    fn random_state(grid: &Grid, seed: u64) -> FieldState {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..grid.len())
            .map(|_| {
                Spinor(std::array::from_fn(|_| {
                    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                }))
            })
            .collect();
        let mut s = FieldState::new(grid.clone(), 0.0, values).unwrap();
        let norm = s.values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        for v in &mut s.values {
            *v = v.scale(&Complex64::new(1.0 / norm, 0.0));
        }
        s
    }

    fn inner(a: &[Spinor<Float>], b: &[Spinor<Float>]) -> Complex64 {
        a.iter().zip(b).map(|(x, y)| x.dagger().pair(y)).sum()
    }

    #[test]
    fn spectral_dirac_rhs_is_anti_hermitian() {
        for grid in [
            Grid::line(32, 2.0 * PI).unwrap(),
            Grid::new(&[8, 8, 8], &[2.0, 3.0, 4.0]).unwrap(),
        ] {
            let op = FieldOperator::new(
                &grid,
                Potential::zero(),
                NonlinearitySpec::DiracMass(0.7),
                DerivativeMethod::Spectral,
            );
            for seed in 0..5 {
                let s = random_state(&grid, seed);
                let d = op.rhs(&s).unwrap();
                let sym = inner(&s.values, &d) + inner(&d, &s.values);
                assert!(sym.norm() <= 1e-12, "seed {seed}: {sym}");
            }
        }
    }

    #[test]
    fn constant_a0_enters_algebraically() {
        let grid = Grid::line(32, 5.0).unwrap();
        let s = random_state(&grid, 3);
        for spec in [
            NonlinearitySpec::DiracMass(1.0),
            NonlinearitySpec::FOfZ(FunctionSpec::IdentityZ),
            NonlinearitySpec::Heisenberg,
        ] {
            let base = rhs(&s, &Potential::zero(), &spec, DerivativeMethod::Spectral).unwrap();
            let shifted = rhs(&s, &Potential::constant([0.8, 0.0, 0.0, 0.0]), &spec, DerivativeMethod::Spectral).unwrap();
            for ((b, sh), psi) in base.iter().zip(&shifted).zip(&s.values) {
                let expected = b + &psi.scale(&Complex64::new(0.0, 0.8));
                assert!((&expected - sh).max_magnitude() <= 1e-14);
            }
        }
    }

    #[test]
    fn constant_f_matches_dirac_mass_bitwise() {
        let grid = Grid::line(32, 5.0).unwrap();
        let s = random_state(&grid, 9);
        for m in [0.0, 1.0, -2.5, 1.0 / 3.0] {
            let a = rhs(&s, &Potential::zero(), &NonlinearitySpec::DiracMass(m), DerivativeMethod::Spectral).unwrap();
            let b = rhs(
                &s,
                &Potential::zero(),
                &NonlinearitySpec::FOfZ(FunctionSpec::Constant(m)),
                DerivativeMethod::Spectral,
            )
            .unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn stability_bound_formula() {
        let grid = Grid::line(256, 16.0).unwrap();
        let s = make_homogeneous(&grid, Complex64::new(1.0, 0.0));
        let op = FieldOperator::new(&grid, Potential::zero(), NonlinearitySpec::DiracMass(1.0), DerivativeMethod::Spectral);
        let expected = 2.5 / (PI * 16.0 + 1.0);
        assert!((op.stability_bound(&s) - expected).abs() < 1e-15);
    }
}
