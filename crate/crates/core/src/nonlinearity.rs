//! Mass-term family `T(ψ)` of the field equation `iγ^μ(∂_μψ − ia_μψ) = T(ψ)`,
//! and the Lagrangian densities that generate it.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_traits::Zero;
use thiserror::Error;

use crate::clifford::{
    dirac_adjoint, gammas, gammas_lower, pseudoscalar, CliffordError, CoSpinor, Float, Matrix4,
    Scalar, Spinor,
};
use crate::n_algebra::{apply_function, FunctionSpec, NAlgebraError, NElement};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NonlinearityError {
    #[error("no Lagrangian is available for nonlinearity `{0}`")]
    UnsupportedLagrangian(String),
    #[error("finite-difference step must be positive, got {0}")]
    BadStep(f64),
    #[error(transparent)]
    Clifford(#[from] CliffordError),
    #[error("cannot parse nonlinearity {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

/// Which equation's mass term is in play.
#[derive(Debug, Clone, PartialEq)]
pub enum NonlinearitySpec {
    /// Linear Dirac equation, `T(ψ) = mψ`.
    DiracMass(f64),
    /// Generalized equation, `T(ψ) = F(Z)ψ`.
    FOfZ(FunctionSpec),
    /// Heisenberg cubic term `(ψ̄γ_μψ)γ^μψ + (ψ̄γ_μIψ)γ^μIψ`.
    Heisenberg,
}

/// Gamma matrices needed to evaluate mass terms, built once per backend.
#[derive(Debug, Clone)]
pub struct GammaTable<S> {
    pub upper: [Matrix4<S>; 4],
    pub lower: [Matrix4<S>; 4],
    pub pseudoscalar: Matrix4<S>,
}

impl<S: Scalar> GammaTable<S> {
    pub fn new() -> Self {
        Self {
            upper: gammas(),
            lower: gammas_lower(),
            pseudoscalar: pseudoscalar(),
        }
    }
}

impl<S: Scalar> Default for GammaTable<S> {
    fn default() -> Self {
        Self::new()
    }
}

/// Right-hand side `T(ψ)` of `iγ^μ(∂_μψ − ia_μψ) = T(ψ)`.
pub fn mass_term<S: Scalar>(spec: &NonlinearitySpec, psi: &Spinor<S>) -> Spinor<S> {
    mass_term_with(&GammaTable::new(), spec, psi)
}

/// [`mass_term`] with a prebuilt gamma table.
pub fn mass_term_with<S: Scalar>(
    table: &GammaTable<S>,
    spec: &NonlinearitySpec,
    psi: &Spinor<S>,
) -> Spinor<S> {
    match spec {
        NonlinearitySpec::DiracMass(m) => psi.scale(&S::from_real(S::real_from_f64(*m))),
        NonlinearitySpec::FOfZ(f) => {
            // F(Z)ψ = αψ + β·Iψ. A vanishing β takes the same path as a
            // constant mass so that F ≡ m·1 reproduces it bit for bit.
            let w = apply_function::<S>(f, &raw_z(table, psi));
            let scaled = psi.scale(&S::from_real(w.alpha));
            if w.beta.is_zero() {
                scaled
            } else {
                &scaled + &table.pseudoscalar.apply(psi).scale(&S::from_real(w.beta))
            }
        }
        NonlinearitySpec::Heisenberg => heisenberg_term(table, psi),
    }
}

/// `Z` from the raw bilinears; their imaginary parts vanish identically and
/// are discarded without the reality check of
/// [`compute_z`](crate::n_algebra::compute_z).
fn raw_z<S: Scalar>(table: &GammaTable<S>, psi: &Spinor<S>) -> NElement<S::Real> {
    let bar = dirac_adjoint(psi);
    let s = bar.pair(psi).re();
    let p = bar.sandwich(&table.pseudoscalar, psi).re();
    NElement::new(s, -p)
}

fn heisenberg_term<S: Scalar>(table: &GammaTable<S>, psi: &Spinor<S>) -> Spinor<S> {
    let bar = dirac_adjoint(psi);
    let i_psi = table.pseudoscalar.apply(psi);
    let mut out = Spinor::zero();
    for mu in 0..4 {
        let vector = bar.sandwich(&table.lower[mu], psi);
        let axial = bar.pair(&table.lower[mu].apply(&i_psi));
        let v_term = table.upper[mu].apply(psi).scale(&vector);
        let a_term = table.upper[mu].apply(&i_psi).scale(&axial);
        out = &(&out + &v_term) + &a_term;
    }
    out
}

/// Kinetic part `iγ^μ(∂_μψ − ia_μψ)`.
pub fn covariant_dirac<S: Scalar>(psi: &Spinor<S>, dpsi: &[Spinor<S>; 4], a: &[f64; 4]) -> Spinor<S> {
    let up = gammas::<S>();
    let i = S::i();
    let mut out = Spinor::zero();
    for mu in 0..4 {
        let cov = &dpsi[mu] - &psi.scale(&(i.clone() * S::from_f64_parts(a[mu], 0.0)));
        out = &out + &up[mu].apply(&cov).scale(&i);
    }
    out
}

/// Field-equation left-hand side `iγ^μ(∂_μψ − ia_μψ) − T(ψ)`.
pub fn equation_lhs<S: Scalar>(
    spec: &NonlinearitySpec,
    psi: &Spinor<S>,
    dpsi: &[Spinor<S>; 4],
    a: &[f64; 4],
) -> Spinor<S> {
    &covariant_dirac(psi, dpsi, a) - &mass_term(spec, psi)
}

fn lagrangian_with_adjoint<S: Scalar>(
    spec: &NonlinearitySpec,
    bar: &CoSpinor<S>,
    psi: &Spinor<S>,
    dpsi: &[Spinor<S>; 4],
    a: &[f64; 4],
) -> Result<S, NonlinearityError> {
    let kinetic = bar.pair(&covariant_dirac(psi, dpsi, a));
    match spec {
        NonlinearitySpec::DiracMass(m) => {
            Ok(kinetic - S::from_f64_parts(*m, 0.0) * bar.pair(psi))
        }
        NonlinearitySpec::FOfZ(FunctionSpec::IdentityZ) => {
            let s = bar.pair(psi);
            let p = bar.sandwich(&pseudoscalar(), psi);
            let half = S::from_f64_parts(0.5, 0.0);
            Ok(kinetic - half.clone() * s.clone() * s + half * p.clone() * p)
        }
        other => Err(NonlinearityError::UnsupportedLagrangian(other.to_string())),
    }
}

/// Lagrangian density at a point: `ψ̄iγ^μ(∂_μψ − ia_μψ) − m(ψ̄ψ)` for
/// `dirac_mass`, `ψ̄iγ^μ(∂_μψ − ia_μψ) − ½(ψ̄ψ)² + ½(ψ̄Iψ)²` for `F ≡ Z`.
pub fn lagrangian_density<S: Scalar>(
    spec: &NonlinearitySpec,
    psi: &Spinor<S>,
    dpsi: &[Spinor<S>; 4],
    a: &[f64; 4],
) -> Result<S, NonlinearityError> {
    lagrangian_with_adjoint(spec, &dirac_adjoint(psi), psi, dpsi, a)
}

/// `|γ⁰T(γ⁰ψ) − T(ψ)|`: zero at every `ψ` exactly when parity maps
/// solutions to solutions.
pub fn parity_violation(spec: &NonlinearitySpec, psi: &Spinor<Float>) -> f64 {
    let g0 = &GammaTable::<Float>::new().upper[0];
    let mirrored = g0.apply(&mass_term(spec, &g0.apply(psi)));
    (&mirrored - &mass_term(spec, psi)).norm_sqr().sqrt()
}

/// `ψ = (1, 0, i, 0)`, on which `f(z) = iz` breaks parity by `4√2`.
pub fn parity_witness() -> Spinor<Float> {
    Spinor::from_ints([(1, 0), (0, 0), (0, 1), (0, 0)])
}

/// Default central-difference step for [`euler_lagrange_residual_check`].
pub const DEFAULT_EL_STEP: f64 = 1e-5;

/// Differentiates the Lagrangian with respect to each component of `ψ̄`
/// (held independent of `ψ`) by central differences and returns the largest
/// deviation from the matching component of the field-equation left-hand side.
pub fn euler_lagrange_residual_check(
    spec: &NonlinearitySpec,
    psi: &Spinor<Float>,
    dpsi: &[Spinor<Float>; 4],
    a: &[f64; 4],
    h: f64,
) -> Result<f64, NonlinearityError> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(NonlinearityError::BadStep(h));
    }
    let bar = dirac_adjoint(psi);
    let lhs = equation_lhs(spec, psi, dpsi, a);
    let mut worst: f64 = 0.0;
    for k in 0..4 {
        let mut plus = bar.clone();
        let mut minus = bar.clone();
        plus.0[k] += h;
        minus.0[k] -= h;
        let lp = lagrangian_with_adjoint(spec, &plus, psi, dpsi, a)?;
        let lm = lagrangian_with_adjoint(spec, &minus, psi, dpsi, a)?;
        let derivative: Complex64 = (lp - lm) / (2.0 * h);
        worst = worst.max((derivative - lhs.0[k]).norm());
    }
    Ok(worst)
}

impl fmt::Display for NonlinearitySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NonlinearitySpec::DiracMass(m) => write!(f, "dirac_mass {m}"),
            NonlinearitySpec::FOfZ(spec) => write!(f, "f_of_z {spec}"),
            NonlinearitySpec::Heisenberg => write!(f, "heisenberg"),
        }
    }
}

impl FromStr for NonlinearitySpec {
    type Err = NonlinearityError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason: String| NonlinearityError::Parse {
            input: s.to_string(),
            reason,
        };
        let t = s.trim();
        let (head, rest) = t.split_once(char::is_whitespace).unwrap_or((t, ""));
        let rest = rest.trim();
        match head {
            "dirac_mass" => {
                let m: f64 = rest.parse().map_err(|e| err(format!("mass: {e}")))?;
                if !m.is_finite() {
                    return Err(err("mass must be finite".into()));
                }
                Ok(NonlinearitySpec::DiracMass(m))
            }
            "f_of_z" => rest
                .parse::<FunctionSpec>()
                .map(NonlinearitySpec::FOfZ)
                .map_err(|e: NAlgebraError| err(e.to_string())),
            "heisenberg" if rest.is_empty() => Ok(NonlinearitySpec::Heisenberg),
            "heisenberg" => Err(err("heisenberg takes no arguments".into())),
            other => Err(err(format!("unknown nonlinearity {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::{exact, gammas, Exact};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_spinor(rng: &mut impl Rng) -> Spinor<Float> {
        Spinor(std::array::from_fn(|_| {
            Float::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        }))
    }

    /// Rational-valued float spinors: multiples of 1/8 in [-2, 2].
    fn random_rational_spinor(rng: &mut impl Rng) -> Spinor<Float> {
        Spinor(std::array::from_fn(|_| {
            Float::new(
                rng.gen_range(-16i32..=16) as f64 / 8.0,
                rng.gen_range(-16i32..=16) as f64 / 8.0,
            )
        }))
    }

    #[test]
    fn mass_term_examples() {
        let e1 = Spinor::<Exact>::basis(0);
        assert_eq!(mass_term(&NonlinearitySpec::DiracMass(1.0), &e1), e1);
        assert_eq!(
            mass_term(&NonlinearitySpec::FOfZ(FunctionSpec::IdentityZ), &e1),
            e1
        );
        assert_eq!(
            mass_term(&NonlinearitySpec::Heisenberg, &e1),
            Spinor::from_ints([(2, 0), (0, 0), (0, 0), (0, 0)])
        );
    }

    #[test]
    fn lagrangian_examples() {
        // On-shell rest wave e^{-it}(1,0,0,0) at t = 0.
        let psi = Spinor::<Exact>::basis(0);
        let mut dpsi: [Spinor<Exact>; 4] = std::array::from_fn(|_| Spinor::zero());
        dpsi[0] = psi.scale(&exact(0, -1));
        let l = lagrangian_density(&NonlinearitySpec::DiracMass(1.0), &psi, &dpsi, &[0.0; 4]);
        assert_eq!(l.unwrap(), exact(0, 0));

        let zero: [Spinor<Exact>; 4] = std::array::from_fn(|_| Spinor::zero());
        for spec in [
            NonlinearitySpec::DiracMass(2.0),
            NonlinearitySpec::FOfZ(FunctionSpec::IdentityZ),
        ] {
            let l = lagrangian_density(&spec, &Spinor::<Exact>::zero(), &zero, &[0.3, 0.0, 1.0, 0.0]);
            assert_eq!(l.unwrap(), exact(0, 0));
        }

        let l = lagrangian_density(
            &NonlinearitySpec::FOfZ(FunctionSpec::IdentityZ),
            &psi,
            &zero,
            &[0.0; 4],
        )
        .unwrap();
        assert_eq!(l, Exact::new(crate::clifford::rational(-1, 2), crate::clifford::rational(0, 1)));
    }

    #[test]
    fn unsupported_lagrangians() {
        let zero: [Spinor<Float>; 4] = std::array::from_fn(|_| Spinor::zero());
        let psi = Spinor::<Float>::basis(0);
        for spec in [
            NonlinearitySpec::Heisenberg,
            NonlinearitySpec::FOfZ(FunctionSpec::Polynomial(vec![Complex64::new(1.0, 0.0)])),
        ] {
            assert!(matches!(
                lagrangian_density(&spec, &psi, &zero, &[0.0; 4]),
                Err(NonlinearityError::UnsupportedLagrangian(_))
            ));
            assert!(euler_lagrange_residual_check(&spec, &psi, &zero, &[0.0; 4], 1e-5).is_err());
        }
        let spec = NonlinearitySpec::DiracMass(1.0);
        assert_eq!(
            euler_lagrange_residual_check(&spec, &psi, &zero, &[0.0; 4], 0.0),
            Err(NonlinearityError::BadStep(0.0))
        );
    }

    #[test]
    fn euler_lagrange_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let spec = NonlinearitySpec::DiracMass(1.0);
        for _ in 0..20 {
            let psi = random_rational_spinor(&mut rng);
            let dpsi = std::array::from_fn(|_| random_rational_spinor(&mut rng));
            let a = std::array::from_fn(|_| rng.gen_range(-8i32..=8) as f64 / 4.0);
            let dev = euler_lagrange_residual_check(&spec, &psi, &dpsi, &a, DEFAULT_EL_STEP).unwrap();
            assert!(dev <= 1e-8, "dev = {dev:e}");
        }

        let quartic = NonlinearitySpec::FOfZ(FunctionSpec::IdentityZ);
        let zero: [Spinor<Float>; 4] = std::array::from_fn(|_| Spinor::zero());
        let dev =
            euler_lagrange_residual_check(&quartic, &Spinor::zero(), &zero, &[0.0; 4], 1e-5).unwrap();
        assert_eq!(dev, 0.0);
        for _ in 0..20 {
            let psi = random_spinor(&mut rng);
            let dpsi = std::array::from_fn(|_| random_spinor(&mut rng));
            let dev = euler_lagrange_residual_check(&quartic, &psi, &dpsi, &[0.1, 0.2, -0.3, 0.0], 1e-5)
                .unwrap();
            assert!(dev <= 1e-6, "dev = {dev:e}");
        }
    }

    #[test]
    fn parity_criterion() {
        let g0 = gammas::<Float>()[0].clone();
        let witness = parity_witness();
        let id = NonlinearitySpec::FOfZ(FunctionSpec::IdentityZ);
        assert!(parity_violation(&id, &witness) <= 1e-12);
        let iz = NonlinearitySpec::FOfZ(FunctionSpec::Polynomial(vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 1.0),
        ]));
        // γ⁰T(γ⁰ψ) equals T computed with the conjugated function.
        let conj = NonlinearitySpec::FOfZ(FunctionSpec::Polynomial(vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, -1.0),
        ]));
        let lhs = g0.apply(&mass_term(&iz, &g0.apply(&witness)));
        assert!(lhs.approx_eq(&mass_term(&conj, &witness)));
        assert!((parity_violation(&iz, &witness) - 4.0 * 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn text_forms() {
        for text in ["dirac_mass 1", "f_of_z identity_Z", "f_of_z poly 0+0i 1+0i", "heisenberg"] {
            let spec: NonlinearitySpec = text.parse().unwrap();
            assert_eq!(spec.to_string().parse::<NonlinearitySpec>().unwrap(), spec);
        }
        assert!("dirac_mass".parse::<NonlinearitySpec>().is_err());
        assert!("heisenberg 2".parse::<NonlinearitySpec>().is_err());
        assert!("yukawa 1".parse::<NonlinearitySpec>().is_err());
    }

    fn spinor_strategy() -> impl Strategy<Value = Spinor<Float>> {
        prop::array::uniform8(-2.0f64..2.0).prop_map(|c| {
            Spinor([
                Float::new(c[0], c[1]),
                Float::new(c[2], c[3]),
                Float::new(c[4], c[5]),
                Float::new(c[6], c[7]),
            ])
        })
    }

    fn specs() -> Vec<NonlinearitySpec> {
        vec![
            NonlinearitySpec::DiracMass(1.3),
            NonlinearitySpec::FOfZ(FunctionSpec::IdentityZ),
            NonlinearitySpec::FOfZ(FunctionSpec::Polynomial(vec![
                Complex64::new(0.5, -0.2),
                Complex64::new(0.0, 1.0),
                Complex64::new(0.3, 0.1),
            ])),
            NonlinearitySpec::Heisenberg,
        ]
    }

    proptest! {
        #[test]
        fn constant_f_is_dirac_mass(psi in spinor_strategy(), m in -3.0f64..3.0) {
            let a = mass_term(&NonlinearitySpec::FOfZ(FunctionSpec::Constant(m)), &psi);
            let b = mass_term(&NonlinearitySpec::DiracMass(m), &psi);
            prop_assert!(a.approx_eq(&b));
        }

        #[test]
        fn phase_equivariance(psi in spinor_strategy(), lambda in -6.3f64..6.3) {
            let phase = Float::from_polar(1.0, lambda);
            for spec in specs() {
                let lhs = mass_term(&spec, &psi.scale(&phase));
                let rhs = mass_term(&spec, &psi).scale(&phase);
                let scale = rhs.max_magnitude().max(1.0);
                prop_assert!((&lhs - &rhs).max_magnitude() <= 1e-12 * scale * 10.0);
            }
        }

        #[test]
        fn heisenberg_is_cubic(psi in spinor_strategy(), c in -3.0f64..3.0) {
            let lhs = mass_term(&NonlinearitySpec::Heisenberg, &psi.scale(&Float::new(c, 0.0)));
            let rhs = mass_term(&NonlinearitySpec::Heisenberg, &psi).scale(&Float::new(c * c * c, 0.0));
            let scale = rhs.max_magnitude().max(1.0);
            prop_assert!((&lhs - &rhs).max_magnitude() <= 1e-12 * scale * 10.0);
        }

        #[test]
        fn real_coefficient_f_is_parity_covariant(psi in spinor_strategy()) {
            let g0 = gammas::<Float>()[0].clone();
            for spec in specs().into_iter().take(2) {
                let lhs = g0.apply(&mass_term(&spec, &g0.apply(&psi)));
                prop_assert!(lhs.approx_eq(&mass_term(&spec, &psi)));
            }
        }
    }
}
