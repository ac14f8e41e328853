//! Dirac-representation gamma matrices, the pseudoscalar, Dirac adjoints and
//! spinor bilinears over either scalar backend.

mod matrix;
mod scalar;

pub use matrix::{CoSpinor, Matrix4, Spinor};
pub use scalar::{exact, rational, Exact, Float, Scalar, FLOAT_TOL};

use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CliffordError {
    #[error("gamma index {0} out of range 0..=3")]
    IndexOutOfRange(usize),
    #[error("bilinear {name} has non-negligible imaginary part {imag:e} (corrupted input?)")]
    NonRealBilinear { name: &'static str, imag: f64 },
}

/// Minkowski metric `η = diag(1, −1, −1, −1)`. Being diagonal with ±1
/// entries it raises and lowers indices by a sign flip.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MinkowskiMetric;

impl MinkowskiMetric {
    pub const DIAG: [i64; 4] = [1, -1, -1, -1];

    pub fn sign(mu: usize) -> i64 {
        Self::DIAG[mu]
    }

    /// `v_μ = η_μν v^ν` (identical map for raising).
    pub fn lower(v: [f64; 4]) -> [f64; 4] {
        [v[0], -v[1], -v[2], -v[3]]
    }

    pub fn raise(v: [f64; 4]) -> [f64; 4] {
        Self::lower(v)
    }

    /// `v·w = η_μν v^μ w^ν`.
    pub fn dot(v: [f64; 4], w: [f64; 4]) -> f64 {
        v[0] * w[0] - v[1] * w[1] - v[2] * w[2] - v[3] * w[3]
    }
}

const GAMMA_INTS: [[[(i64, i64); 4]; 4]; 4] = [
    [
        [(1, 0), (0, 0), (0, 0), (0, 0)],
        [(0, 0), (1, 0), (0, 0), (0, 0)],
        [(0, 0), (0, 0), (-1, 0), (0, 0)],
        [(0, 0), (0, 0), (0, 0), (-1, 0)],
    ],
    [
        [(0, 0), (0, 0), (0, 0), (1, 0)],
        [(0, 0), (0, 0), (1, 0), (0, 0)],
        [(0, 0), (-1, 0), (0, 0), (0, 0)],
        [(-1, 0), (0, 0), (0, 0), (0, 0)],
    ],
    [
        [(0, 0), (0, 0), (0, 0), (0, -1)],
        [(0, 0), (0, 0), (0, 1), (0, 0)],
        [(0, 0), (0, 1), (0, 0), (0, 0)],
        [(0, -1), (0, 0), (0, 0), (0, 0)],
    ],
    [
        [(0, 0), (0, 0), (1, 0), (0, 0)],
        [(0, 0), (0, 0), (0, 0), (-1, 0)],
        [(-1, 0), (0, 0), (0, 0), (0, 0)],
        [(0, 0), (1, 0), (0, 0), (0, 0)],
    ],
];

/// Dirac-representation `γ^μ`, `μ ∈ 0..=3`.
pub fn gamma<S: Scalar>(mu: usize) -> Result<Matrix4<S>, CliffordError> {
    GAMMA_INTS
        .get(mu)
        .map(|m| Matrix4::from_ints(*m))
        .ok_or(CliffordError::IndexOutOfRange(mu))
}

/// All four `γ^μ` (upper index).
pub fn gammas<S: Scalar>() -> [Matrix4<S>; 4] {
    std::array::from_fn(|mu| Matrix4::from_ints(GAMMA_INTS[mu]))
}

/// Lowered `γ_μ = η_μμ γ^μ`.
pub fn gammas_lower<S: Scalar>() -> [Matrix4<S>; 4] {
    let up = gammas::<S>();
    std::array::from_fn(|mu| {
        if MinkowskiMetric::sign(mu) < 0 {
            -&up[mu]
        } else {
            up[mu].clone()
        }
    })
}

/// Pseudoscalar `I = γ⁰γ¹γ²γ³`.
pub fn pseudoscalar<S: Scalar>() -> Matrix4<S> {
    pseudoscalar_of(&gammas::<S>())
}

/// Product `g[0]·g[1]·g[2]·g[3]` of an arbitrary gamma set.
pub fn pseudoscalar_of<S: Scalar>(g: &[Matrix4<S>; 4]) -> Matrix4<S> {
    &(&(&g[0] * &g[1]) * &g[2]) * &g[3]
}

/// `ψ̄ = ψ†γ⁰`.
pub fn dirac_adjoint<S: Scalar>(psi: &Spinor<S>) -> CoSpinor<S> {
    // γ⁰ is diagonal (1, 1, −1, −1).
    let d = psi.dagger().0;
    let [a, b, c, e] = d;
    CoSpinor([a, b, -c, -e])
}

fn real_part<S: Scalar>(
    value: S,
    name: &'static str,
    scale: f64,
) -> Result<S::Real, CliffordError> {
    let im = value.im();
    if S::real_negligible(&im, scale) {
        Ok(value.re())
    } else {
        Err(CliffordError::NonRealBilinear {
            name,
            imag: S::real_to_f64(&im),
        })
    }
}

fn imag_part<S: Scalar>(
    value: S,
    name: &'static str,
    scale: f64,
) -> Result<S::Real, CliffordError> {
    let re = value.re();
    if S::real_negligible(&re, scale) {
        Ok(value.im())
    } else {
        Err(CliffordError::NonRealBilinear {
            name,
            imag: S::real_to_f64(&re),
        })
    }
}

fn bilinear_scale<S: Scalar>(psi: &Spinor<S>) -> f64 {
    S::real_to_f64(&psi.norm_sqr())
}

/// Scalar and pseudoscalar bilinears `(ψ̄ψ, ψ̄Iψ)`, both real.
pub fn bilinear_invariants<S: Scalar>(
    psi: &Spinor<S>,
) -> Result<(S::Real, S::Real), CliffordError> {
    let bar = dirac_adjoint(psi);
    let scale = bilinear_scale(psi);
    let s = real_part(bar.pair(psi), "psibar psi", scale)?;
    let p = real_part(bar.sandwich(&pseudoscalar(), psi), "psibar I psi", scale)?;
    Ok((s, p))
}

/// Vector current `j^μ = ψ̄γ^μψ`.
pub fn current<S: Scalar>(psi: &Spinor<S>) -> Result<[S::Real; 4], CliffordError> {
    let bar = dirac_adjoint(psi);
    let scale = bilinear_scale(psi);
    let g = gammas::<S>();
    let mut out: [S::Real; 4] = std::array::from_fn(|_| S::Real::zero());
    for (mu, gm) in g.iter().enumerate() {
        out[mu] = real_part(bar.sandwich(gm, psi), "psibar gamma^mu psi", scale)?;
    }
    Ok(out)
}

/// Lowered axial components `c_μ` with `ψ̄γ_μIψ = i·c_μ`.
pub fn axial_current<S: Scalar>(psi: &Spinor<S>) -> Result<[S::Real; 4], CliffordError> {
    let bar = dirac_adjoint(psi);
    let scale = bilinear_scale(psi);
    let i_mat = pseudoscalar::<S>();
    let g = gammas_lower::<S>();
    let mut out: [S::Real; 4] = std::array::from_fn(|_| S::Real::zero());
    for (mu, gm) in g.iter().enumerate() {
        out[mu] = imag_part(bar.sandwich(&(gm * &i_mat), psi), "psibar gamma_mu I psi", scale)?;
    }
    Ok(out)
}

/// Membership in su(2,2) with respect to the Hermitian form `γ⁰`:
/// `X†γ⁰ + γ⁰X = 0` and `tr X = 0`.
pub fn su22_member<S: Scalar>(x: &Matrix4<S>) -> bool {
    let g0 = gammas::<S>()[0].clone();
    let form = &(&x.dagger() * &g0) + &(&g0 * x);
    let scale = x.max_magnitude();
    form.approx_eq(&Matrix4::zero()) && S::close(&x.trace(), &S::zero(), scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(re: i64, im: i64) -> Exact {
        exact(re, im)
    }

    #[test]
    fn gamma_matches_displayed_matrices() {
        let g0 = gamma::<Exact>(0).unwrap();
        let diag: Vec<Exact> = (0..4).map(|k| g0[(k, k)].clone()).collect();
        assert_eq!(diag, vec![e(1, 0), e(1, 0), e(-1, 0), e(-1, 0)]);
        assert!((0..4).all(|r| (0..4).all(|c| r == c || g0[(r, c)].is_zero())));

        let g2 = gamma::<Exact>(2).unwrap();
        let expected = Matrix4::<Exact>::from_fn(|r, c| match (r, c) {
            (0, 3) | (3, 0) => e(0, -1),
            (1, 2) | (2, 1) => e(0, 1),
            _ => e(0, 0),
        });
        assert_eq!(g2, expected);
        assert_eq!(&g0 * &g0, Matrix4::identity());
    }

    #[test]
    fn gamma_index_out_of_range() {
        assert_eq!(gamma::<Float>(4), Err(CliffordError::IndexOutOfRange(4)));
    }

    #[test]
    fn clifford_relations_are_exact() {
        let g = gammas::<Exact>();
        for mu in 0..4 {
            for nu in 0..4 {
                let ac = g[mu].anticommutator(&g[nu]);
                let expected = if mu == nu {
                    Matrix4::identity().scale(&e(2 * MinkowskiMetric::sign(mu), 0))
                } else {
                    Matrix4::zero()
                };
                assert_eq!(ac, expected, "mu={mu} nu={nu}");
            }
        }
    }

    #[test]
    fn pseudoscalar_properties() {
        let i_mat = pseudoscalar::<Exact>();
        assert_eq!(&i_mat * &i_mat, -Matrix4::identity());
        assert_eq!(i_mat.dagger(), -&i_mat);
        // Off-diagonal blocks −i·1₂, diagonal blocks zero.
        let expected = Matrix4::<Exact>::from_fn(|r, c| {
            if (r + 2 == c) || (c + 2 == r) {
                e(0, -1)
            } else {
                e(0, 0)
            }
        });
        assert_eq!(i_mat, expected);
        for g in gammas::<Exact>() {
            assert!(i_mat.anticommutator(&g).is_zero());
        }
    }

    #[test]
    fn hermiticity_relation() {
        let g = gammas::<Exact>();
        for gm in &g {
            assert_eq!(gm.dagger(), &(&g[0] * gm) * &g[0]);
        }
    }

    #[test]
    fn dirac_adjoint_examples() {
        let a = dirac_adjoint(&Spinor::<Exact>::basis(0));
        assert_eq!(a, CoSpinor([e(1, 0), e(0, 0), e(0, 0), e(0, 0)]));
        let b = dirac_adjoint(&Spinor::<Exact>::basis(2));
        assert_eq!(b, CoSpinor([e(0, 0), e(0, 0), e(-1, 0), e(0, 0)]));
        assert!(dirac_adjoint(&Spinor::<Exact>::zero()).0.iter().all(Zero::is_zero));
    }

    #[test]
    fn bilinear_examples() {
        let (s, p) = bilinear_invariants(&Spinor::<Exact>::basis(0)).unwrap();
        assert_eq!((s, p), (rational(1, 1), rational(0, 1)));
        let w = Spinor::<Exact>::from_ints([(1, 0), (0, 0), (0, 1), (0, 0)]);
        let (s, p) = bilinear_invariants(&w).unwrap();
        assert_eq!((s, p), (rational(0, 1), rational(2, 1)));
        let (s, p) = bilinear_invariants(&Spinor::<Float>::zero()).unwrap();
        assert_eq!((s, p), (0.0, 0.0));
    }

    #[test]
    fn current_examples() {
        let j = current(&Spinor::<Exact>::basis(0)).unwrap();
        assert_eq!(j, [rational(1, 1), rational(0, 1), rational(0, 1), rational(0, 1)]);
        assert_eq!(current(&Spinor::<Float>::zero()).unwrap(), [0.0; 4]);
        let psi = Spinor::<Exact>::from_ints([(1, 2), (-3, 0), (0, 1), (2, -2)]);
        assert_eq!(current(&psi).unwrap()[0], psi.norm_sqr());
    }

    #[test]
    fn axial_examples() {
        let c = axial_current(&Spinor::<Exact>::basis(0)).unwrap();
        assert_eq!(c, [rational(0, 1), rational(0, 1), rational(0, 1), rational(1, 1)]);
        assert_eq!(axial_current(&Spinor::<Float>::zero()).unwrap(), [0.0; 4]);
    }

    #[test]
    fn corrupted_float_bilinear_is_reported() {
        let err = real_part(Float::new(1.0, 1e-3), "x", 1.0).unwrap_err();
        assert!(matches!(err, CliffordError::NonRealBilinear { .. }));
        assert!(real_part(Float::new(1.0, 1e-14), "x", 1.0).is_ok());
    }

    #[test]
    fn su22_examples() {
        for mu in 0..4 {
            let x = gamma::<Exact>(mu).unwrap().scale(&Exact::i());
            assert!(su22_member(&x), "i gamma^{mu}");
        }
        assert!(!su22_member(&Matrix4::<Exact>::identity()));
        assert!(!su22_member(&gamma::<Exact>(1).unwrap()));
        assert!(su22_member(&pseudoscalar::<Exact>().scale(&Exact::i())));
        assert!(!su22_member(&Matrix4::<Exact>::identity().scale(&Exact::i())));
        assert!(su22_member(&gamma::<Float>(2).unwrap().scale(&Float::i())));
    }
}
