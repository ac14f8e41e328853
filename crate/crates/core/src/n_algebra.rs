//! The commutative subalgebra `N = {α·1 + β·I}` of `Mat(4, ℂ)`, isomorphic to
//! `ℂ` via `α·1 + β·I ↔ α + iβ`, and the lifting of scalar functions
//! `f: ℂ → ℂ` to `F: N → N`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_complex::Complex64;
use num_traits::Zero;
use thiserror::Error;

use crate::clifford::{
    bilinear_invariants, pseudoscalar, CliffordError, Matrix4, Scalar, Spinor,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NAlgebraError {
    #[error("matrix is not in the subalgebra span{{1, I}}")]
    NotInSubalgebra,
    #[error(transparent)]
    Clifford(#[from] CliffordError),
    #[error("cannot parse function spec {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

/// `α·1 + β·I`, with `α, β` in the real field of a scalar backend.
#[derive(Debug, Clone, PartialEq)]
pub struct NElement<R> {
    pub alpha: R,
    pub beta: R,
}

impl<R> NElement<R> {
    pub fn new(alpha: R, beta: R) -> Self {
        Self { alpha, beta }
    }
}

impl<R: Clone + Neg<Output = R>> NElement<R> {
    /// `α·1 − β·I`, the image of complex conjugation.
    pub fn conj(&self) -> Self {
        Self::new(self.alpha.clone(), -self.beta.clone())
    }
}

impl<R: Clone + Add<Output = R> + Mul<Output = R>> NElement<R> {
    /// `α² + β²`.
    pub fn modsq(&self) -> R {
        self.alpha.clone() * self.alpha.clone() + self.beta.clone() * self.beta.clone()
    }
}

impl<R: Clone + Add<Output = R>> Add for NElement<R> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.alpha + rhs.alpha, self.beta + rhs.beta)
    }
}

impl<R: Clone + Sub<Output = R>> Sub for NElement<R> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.alpha - rhs.alpha, self.beta - rhs.beta)
    }
}

impl<R: Clone + Add<Output = R> + Sub<Output = R> + Mul<Output = R>> Mul for NElement<R> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let (a, b) = (self.alpha, self.beta);
        let (c, d) = (rhs.alpha, rhs.beta);
        Self::new(
            a.clone() * c.clone() - b.clone() * d.clone(),
            a * d + b * c,
        )
    }
}

/// Free-function forms, mirroring the operation names used elsewhere.
pub fn n_conj<R: Clone + Neg<Output = R>>(z: &NElement<R>) -> NElement<R> {
    z.conj()
}

pub fn n_modsq<R: Clone + Add<Output = R> + Mul<Output = R>>(z: &NElement<R>) -> R {
    z.modsq()
}

pub fn n_mul<R>(a: &NElement<R>, b: &NElement<R>) -> NElement<R>
where
    R: Clone + Add<Output = R> + Sub<Output = R> + Mul<Output = R>,
{
    a.clone() * b.clone()
}

/// `Z = (ψ̄ψ)·1 − (ψ̄Iψ)·I`, returned as `(α, β) = (ψ̄ψ, −ψ̄Iψ)`.
pub fn compute_z<S: Scalar>(psi: &Spinor<S>) -> Result<NElement<S::Real>, CliffordError> {
    let (s, p) = bilinear_invariants(psi)?;
    Ok(NElement::new(s, -p))
}

/// `α·1 + β·I`.
pub fn to_matrix<S: Scalar>(z: &NElement<S::Real>) -> Matrix4<S> {
    let one = Matrix4::<S>::identity().scale_real(&z.alpha);
    let i_part = pseudoscalar::<S>().scale_real(&z.beta);
    &one + &i_part
}

/// Inverse of [`to_matrix`]. Reads `α` from entry (1,1) and `β` from entry
/// (1,3) (where `I` holds `−i`), then requires the reconstruction to match.
pub fn from_matrix<S: Scalar>(m: &Matrix4<S>) -> Result<NElement<S::Real>, NAlgebraError> {
    let alpha = m[(0, 0)].re();
    let beta = -m[(0, 2)].im();
    let z = NElement::new(alpha, beta);
    if to_matrix::<S>(&z).approx_eq(m) {
        Ok(z)
    } else {
        Err(NAlgebraError::NotInSubalgebra)
    }
}

/// Scalar function `f: ℂ → ℂ` to be lifted onto `N`.
#[derive(Debug, Clone, PartialEq)]
pub enum FunctionSpec {
    /// `f(z) = m`.
    Constant(f64),
    /// `f(z) = z`.
    IdentityZ,
    /// `f(z) = Σ c_k z^k`, coefficients in ascending powers.
    Polynomial(Vec<Complex64>),
}

impl FunctionSpec {
    /// True when every coefficient of `f` is real, i.e. `conj(f(conj z)) = f(z)`.
    pub fn has_real_coefficients(&self) -> bool {
        match self {
            FunctionSpec::Constant(_) | FunctionSpec::IdentityZ => true,
            FunctionSpec::Polynomial(c) => c.iter().all(|c| c.im == 0.0),
        }
    }

    /// `f̃(z) = conj(f(conj z))`, as a polynomial spec.
    pub fn conjugated(&self) -> FunctionSpec {
        match self {
            FunctionSpec::Constant(m) => FunctionSpec::Constant(*m),
            FunctionSpec::IdentityZ => FunctionSpec::IdentityZ,
            FunctionSpec::Polynomial(c) => {
                FunctionSpec::Polynomial(c.iter().map(|c| c.conj()).collect())
            }
        }
    }

    /// Coefficients as an explicit polynomial.
    pub fn coefficients(&self) -> Vec<Complex64> {
        match self {
            FunctionSpec::Constant(m) => vec![Complex64::new(*m, 0.0)],
            FunctionSpec::IdentityZ => vec![Complex64::zero(), Complex64::new(1.0, 0.0)],
            FunctionSpec::Polynomial(c) => c.clone(),
        }
    }

    fn validate(&self) -> Result<(), String> {
        match self {
            FunctionSpec::Constant(m) if !m.is_finite() => Err("constant must be finite".into()),
            FunctionSpec::Polynomial(c) if c.is_empty() => {
                Err("polynomial needs at least one coefficient".into())
            }
            FunctionSpec::Polynomial(c) if c.iter().any(|c| !c.is_finite()) => {
                Err("polynomial coefficients must be finite".into())
            }
            _ => Ok(()),
        }
    }
}

/// `F(Z)`: evaluates `w = f(α + iβ)` by Horner's rule in the scalar backend
/// and maps `w` back to `N`.
pub fn apply_function<S: Scalar>(spec: &FunctionSpec, z: &NElement<S::Real>) -> NElement<S::Real> {
    match spec {
        FunctionSpec::Constant(m) => NElement::new(S::real_from_f64(*m), S::Real::zero()),
        FunctionSpec::IdentityZ => z.clone(),
        FunctionSpec::Polynomial(coeffs) => {
            let zc = S::new(z.alpha.clone(), z.beta.clone());
            let w = coeffs.iter().rev().fold(S::zero(), |acc, c| {
                acc * zc.clone() + S::from_f64_parts(c.re, c.im)
            });
            NElement::new(w.re(), w.im())
        }
    }
}

/// Formats a complex literal as `a+bi` / `a-bi`.
pub fn format_complex(c: Complex64) -> String {
    if c.im.is_sign_negative() {
        format!("{}-{}i", c.re, -c.im)
    } else {
        format!("{}+{}i", c.re, c.im)
    }
}

/// Parses `a+bi`, `a-bi`, `bi` or a plain real `a`.
pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    let t = text.trim();
    let Some(body) = t.strip_suffix('i') else {
        return t
            .parse::<f64>()
            .map(|re| Complex64::new(re, 0.0))
            .map_err(|e| format!("bad real literal {t:?}: {e}"));
    };
    // Split at the last sign that is not a leading sign or an exponent sign.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "+" | "" => "1",
        "-" => "-1",
        other => other,
    };
    let re: f64 = re
        .parse()
        .map_err(|e| format!("bad real part in {t:?}: {e}"))?;
    let im: f64 = im
        .trim_start_matches('+')
        .parse()
        .map_err(|e| format!("bad imaginary part in {t:?}: {e}"))?;
    Ok(Complex64::new(re, im))
}

impl fmt::Display for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionSpec::Constant(m) => write!(f, "constant {m}"),
            FunctionSpec::IdentityZ => write!(f, "identity_Z"),
            FunctionSpec::Polynomial(c) => {
                write!(f, "poly")?;
                for c in c {
                    write!(f, " {}", format_complex(*c))?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for FunctionSpec {
    type Err = NAlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason: String| NAlgebraError::Parse {
            input: s.to_string(),
            reason,
        };
        let mut words = s.split_whitespace();
        let spec = match words.next() {
            Some("constant") => {
                let m = words
                    .next()
                    .ok_or_else(|| err("constant needs a value".into()))?;
                let m = m.parse::<f64>().map_err(|e| err(e.to_string()))?;
                FunctionSpec::Constant(m)
            }
            Some("identity_Z") => FunctionSpec::IdentityZ,
            Some("poly") => {
                let coeffs = words
                    .by_ref()
                    .map(parse_complex)
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(err)?;
                FunctionSpec::Polynomial(coeffs)
            }
            Some(other) => return Err(err(format!("unknown function kind {other:?}"))),
            None => return Err(err("empty".into())),
        };
        if let Some(extra) = words.next() {
            return Err(err(format!("unexpected token {extra:?}")));
        }
        spec.validate().map_err(err)?;
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::{gamma, gammas, rational, Exact, Float};
    use num_rational::BigRational;
    use proptest::prelude::*;

    type Q = BigRational;

    fn q(n: i64) -> Q {
        rational(n, 1)
    }

    #[test]
    fn compute_z_examples() {
        assert_eq!(
            compute_z(&Spinor::<Exact>::zero()).unwrap(),
            NElement::new(q(0), q(0))
        );
        assert_eq!(
            compute_z(&Spinor::<Exact>::basis(0)).unwrap(),
            NElement::new(q(1), q(0))
        );
        let w = Spinor::<Exact>::from_ints([(1, 0), (0, 0), (0, 1), (0, 0)]);
        assert_eq!(compute_z(&w).unwrap(), NElement::new(q(0), q(-2)));
    }

    #[test]
    fn apply_function_examples() {
        let z = NElement::new(0.3, -1.7);
        assert_eq!(
            apply_function::<Float>(&FunctionSpec::Constant(2.5), &z),
            NElement::new(2.5, 0.0)
        );
        let unit = NElement::new(q(0), q(1));
        assert_eq!(apply_function::<Exact>(&FunctionSpec::IdentityZ, &unit), unit);
        let square = FunctionSpec::Polynomial(vec![
            Complex64::zero(),
            Complex64::zero(),
            Complex64::new(1.0, 0.0),
        ]);
        assert_eq!(
            apply_function::<Exact>(&square, &unit),
            NElement::new(q(-1), q(0))
        );
    }

    #[test]
    fn conj_and_modsq_examples() {
        assert_eq!(n_conj(&NElement::new(2.0, 3.0)), NElement::new(2.0, -3.0));
        assert_eq!(n_conj(&NElement::new(1.0, 0.0)), NElement::new(1.0, 0.0));
        assert_eq!(n_modsq(&NElement::new(3.0, 4.0)), 25.0);
        assert_eq!(n_modsq(&NElement::new(0.0, 0.0)), 0.0);
    }

    #[test]
    fn matrix_round_trip_examples() {
        assert_eq!(
            to_matrix::<Exact>(&NElement::new(q(1), q(0))),
            Matrix4::identity()
        );
        assert_eq!(
            to_matrix::<Exact>(&NElement::new(q(0), q(1))),
            pseudoscalar::<Exact>()
        );
        assert_eq!(
            from_matrix(&gamma::<Exact>(1).unwrap()),
            Err(NAlgebraError::NotInSubalgebra)
        );
        assert_eq!(
            from_matrix(&gamma::<Float>(3).unwrap()),
            Err(NAlgebraError::NotInSubalgebra)
        );
    }

    #[test]
    fn parity_conjugation_law_exact() {
        let g0 = gammas::<Exact>()[0].clone();
        let samples = [
            [(1, 0), (0, 0), (0, 1), (0, 0)],
            [(2, -1), (0, 3), (-1, 1), (4, 0)],
            [(0, 0), (1, 1), (0, 0), (1, -1)],
        ];
        for s in samples {
            let psi = Spinor::<Exact>::from_ints(s);
            let lhs = compute_z(&g0.apply(&psi)).unwrap();
            assert_eq!(lhs, compute_z(&psi).unwrap().conj());
        }
    }

    #[test]
    fn function_spec_text_forms() {
        assert_eq!("constant 1.0".parse::<FunctionSpec>().unwrap(), FunctionSpec::Constant(1.0));
        assert_eq!("identity_Z".parse::<FunctionSpec>().unwrap(), FunctionSpec::IdentityZ);
        assert_eq!(
            "poly 0+0i 1+0i".parse::<FunctionSpec>().unwrap(),
            FunctionSpec::Polynomial(vec![Complex64::zero(), Complex64::new(1.0, 0.0)])
        );
        assert_eq!(
            "poly -1.5e-3-2i 0+1i".parse::<FunctionSpec>().unwrap(),
            FunctionSpec::Polynomial(vec![Complex64::new(-1.5e-3, -2.0), Complex64::new(0.0, 1.0)])
        );
        assert!("poly".parse::<FunctionSpec>().is_err());
        assert!("constant".parse::<FunctionSpec>().is_err());
        assert!("constant nan".parse::<FunctionSpec>().is_err());
        assert!("cubic 1".parse::<FunctionSpec>().is_err());
        assert!("identity_Z 3".parse::<FunctionSpec>().is_err());
    }

    fn small_q() -> impl Strategy<Value = Q> {
        (-50i64..50, 1i64..20).prop_map(|(n, d)| rational(n, d))
    }

    fn small_n() -> impl Strategy<Value = NElement<Q>> {
        (small_q(), small_q()).prop_map(|(a, b)| NElement::new(a, b))
    }

    proptest! {
        #[test]
        fn ring_isomorphism_is_exact(a in small_n(), b in small_n()) {
            let ma = to_matrix::<Exact>(&a);
            let mb = to_matrix::<Exact>(&b);
            prop_assert_eq!(&ma * &mb, to_matrix::<Exact>(&n_mul(&a, &b)));
            prop_assert_eq!(&ma * &mb, &mb * &ma);
            prop_assert_eq!(&ma + &mb, to_matrix::<Exact>(&(a.clone() + b.clone())));
            prop_assert_eq!(from_matrix::<Exact>(&ma).unwrap(), a);
        }

        #[test]
        fn conj_is_involution_and_modsq_is_norm(a in -1e3f64..1e3, b in -1e3f64..1e3) {
            let z = NElement::new(a, b);
            prop_assert_eq!(n_conj(&n_conj(&z)), z.clone());
            let p = n_mul(&z, &n_conj(&z));
            prop_assert_eq!(p.beta, 0.0);
            prop_assert!((p.alpha - n_modsq(&z)).abs() <= 1e-12 * n_modsq(&z).max(1.0));
        }

        #[test]
        fn compute_z_float_is_real(c in prop::array::uniform8(-10.0f64..10.0)) {
            let psi = Spinor::<Float>([
                Float::new(c[0], c[1]), Float::new(c[2], c[3]),
                Float::new(c[4], c[5]), Float::new(c[6], c[7]),
            ]);
            prop_assert!(compute_z(&psi).is_ok());
        }

        #[test]
        fn complex_literals_round_trip(re in -1e6f64..1e6, im in -1e6f64..1e6) {
            let c = Complex64::new(re, im);
            prop_assert_eq!(parse_complex(&format_complex(c)).unwrap(), c);
        }

        #[test]
        fn function_spec_display_round_trips(
            coeffs in prop::collection::vec((-100.0f64..100.0, -100.0f64..100.0), 1..5)
        ) {
            let spec = FunctionSpec::Polynomial(
                coeffs.into_iter().map(|(a, b)| Complex64::new(a, b)).collect());
            prop_assert_eq!(spec.to_string().parse::<FunctionSpec>().unwrap(), spec);
        }
    }
}
