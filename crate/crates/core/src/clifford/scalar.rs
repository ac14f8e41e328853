//! Scalar backends for 4×4 complex matrix algebra.
//!
//! Two backends share one trait: exact Gaussian rationals ([`Exact`]) for
//! zero-tolerance identity checks and binary64 complex numbers ([`Float`])
//! for field dynamics. A matrix or spinor is generic over exactly one
//! backend, so the two are never mixed within a value.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Absolute tolerance of the float backend, scaled by the magnitude of the
/// quantities being compared.
pub const FLOAT_TOL: f64 = 1e-12;

/// Exact Gaussian rational `re + i·im` with arbitrary-precision parts.
pub type Exact = Complex<BigRational>;

/// Binary64 complex scalar.
pub type Float = Complex64;

/// A complex scalar backend.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Zero
    + One
{
    /// Real field underlying the backend.
    type Real: Clone + Debug + PartialEq + PartialOrd + Signed + Send + Sync + 'static;

    /// Whether comparisons are exact (`true`) or tolerance-based.
    const EXACT: bool;

    fn new(re: Self::Real, im: Self::Real) -> Self;
    fn re(&self) -> Self::Real;
    fn im(&self) -> Self::Real;
    fn conj(&self) -> Self;

    /// Converts a finite binary64 value into the real field. Exact on both
    /// backends (every finite double is a dyadic rational).
    fn real_from_f64(x: f64) -> Self::Real;
    fn real_to_f64(x: &Self::Real) -> f64;

    /// `|z|²`.
    fn norm_sqr(&self) -> Self::Real {
        let re = self.re();
        let im = self.im();
        re.clone() * re + im.clone() * im
    }

    /// Approximate modulus as binary64, used for pivoting and scaling.
    fn magnitude(&self) -> f64 {
        Self::real_to_f64(&self.norm_sqr()).sqrt()
    }

    /// True when `x` vanishes relative to `scale`: exactly zero on the exact
    /// backend, `|x| ≤ FLOAT_TOL·scale` on the float backend.
    fn real_negligible(x: &Self::Real, scale: f64) -> bool;

    /// Elementwise closeness of two scalars at the given magnitude scale.
    fn close(a: &Self, b: &Self, scale: f64) -> bool;

    fn from_real(x: Self::Real) -> Self {
        Self::new(x, Self::Real::zero())
    }

    fn from_ints(re: i64, im: i64) -> Self {
        Self::new(Self::real_from_int(re), Self::real_from_int(im))
    }

    fn real_from_int(x: i64) -> Self::Real;

    fn from_f64_parts(re: f64, im: f64) -> Self {
        Self::new(Self::real_from_f64(re), Self::real_from_f64(im))
    }

    /// The imaginary unit.
    fn i() -> Self {
        Self::from_ints(0, 1)
    }

    fn to_float(&self) -> Float {
        Float::new(Self::real_to_f64(&self.re()), Self::real_to_f64(&self.im()))
    }
}

impl Scalar for Float {
    type Real = f64;
    const EXACT: bool = false;

    fn new(re: f64, im: f64) -> Self {
        Complex64::new(re, im)
    }
    fn re(&self) -> f64 {
        self.re
    }
    fn im(&self) -> f64 {
        self.im
    }
    fn conj(&self) -> Self {
        Complex::conj(self)
    }
    fn real_from_f64(x: f64) -> f64 {
        x
    }
    fn real_to_f64(x: &f64) -> f64 {
        *x
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn real_negligible(x: &f64, scale: f64) -> bool {
        x.abs() <= FLOAT_TOL * scale
    }
    fn close(a: &Self, b: &Self, scale: f64) -> bool {
        (a - b).norm() <= FLOAT_TOL * scale.max(1.0)
    }
    fn real_from_int(x: i64) -> f64 {
        x as f64
    }
}

impl Scalar for Exact {
    type Real = BigRational;
    const EXACT: bool = true;

    fn new(re: BigRational, im: BigRational) -> Self {
        Complex::new(re, im)
    }
    fn re(&self) -> BigRational {
        self.re.clone()
    }
    fn im(&self) -> BigRational {
        self.im.clone()
    }
    fn conj(&self) -> Self {
        Complex::conj(self)
    }
    fn real_from_f64(x: f64) -> BigRational {
        BigRational::from_float(x).expect("non-finite value cannot enter the exact backend")
    }
    fn real_to_f64(x: &BigRational) -> f64 {
        x.to_f64().unwrap_or(f64::NAN)
    }
    fn real_negligible(x: &BigRational, _scale: f64) -> bool {
        x.is_zero()
    }
    fn close(a: &Self, b: &Self, _scale: f64) -> bool {
        a == b
    }
    fn real_from_int(x: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(x))
    }
}

/// Exact rational `num/den` as a real of the exact backend.
pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Exact Gaussian rational with integer parts.
pub fn exact(re: i64, im: i64) -> Exact {
    Exact::from_ints(re, im)
}
