//! 4×4 complex matrices, spinor columns and co-spinor rows.

use std::array;
use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_traits::Zero;

use super::scalar::Scalar;

/// 4×4 complex matrix stored row-major: `m[r][c]` is row `r`, column `c`
/// (0-based; documentation uses 1-based `(r, c)` to match displayed matrices).
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix4<S> {
    rows: [[S; 4]; 4],
}

/// Four-component complex column.
#[derive(Clone, Debug, PartialEq)]
pub struct Spinor<S>(pub [S; 4]);

/// Four-component complex row, e.g. a Dirac adjoint.
#[derive(Clone, Debug, PartialEq)]
pub struct CoSpinor<S>(pub [S; 4]);

impl<S: Scalar> Matrix4<S> {
    pub fn from_rows(rows: [[S; 4]; 4]) -> Self {
        Self { rows }
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> S) -> Self {
        Self {
            rows: array::from_fn(|r| array::from_fn(|c| f(r, c))),
        }
    }

    /// Matrix with small Gaussian-integer entries `(re, im)`.
    pub fn from_ints(rows: [[(i64, i64); 4]; 4]) -> Self {
        Self::from_fn(|r, c| S::from_ints(rows[r][c].0, rows[r][c].1))
    }

    pub fn zero() -> Self {
        Self::from_fn(|_, _| S::zero())
    }

    pub fn identity() -> Self {
        Self::from_fn(|r, c| if r == c { S::one() } else { S::zero() })
    }

    pub fn rows(&self) -> &[[S; 4]; 4] {
        &self.rows
    }

    /// Hermitian conjugate `A†`.
    pub fn dagger(&self) -> Self {
        Self::from_fn(|r, c| self.rows[c][r].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|r, c| self.rows[c][r].clone())
    }

    pub fn trace(&self) -> S {
        (0..4).fold(S::zero(), |acc, k| acc + self.rows[k][k].clone())
    }

    pub fn scale(&self, k: &S) -> Self {
        Self::from_fn(|r, c| self.rows[r][c].clone() * k.clone())
    }

    pub fn scale_real(&self, k: &S::Real) -> Self {
        self.scale(&S::from_real(k.clone()))
    }

    pub fn apply(&self, v: &Spinor<S>) -> Spinor<S> {
        Spinor(array::from_fn(|r| {
            (0..4).fold(S::zero(), |acc, c| {
                acc + self.rows[r][c].clone() * v.0[c].clone()
            })
        }))
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().flatten().all(Zero::is_zero)
    }

    /// Largest entry modulus.
    pub fn max_magnitude(&self) -> f64 {
        self.rows
            .iter()
            .flatten()
            .map(Scalar::magnitude)
            .fold(0.0, f64::max)
    }

    /// Equality on the exact backend; on the float backend every entry must
    /// agree to `1e-12` times the larger of the two max-entry magnitudes.
    pub fn approx_eq(&self, other: &Self) -> bool {
        let scale = self.max_magnitude().max(other.max_magnitude());
        self.rows
            .iter()
            .flatten()
            .zip(other.rows.iter().flatten())
            .all(|(a, b)| S::close(a, b, scale))
    }

    /// Anticommutator `AB + BA`.
    pub fn anticommutator(&self, other: &Self) -> Self {
        &(self * other) + &(other * self)
    }

    /// Inverse by Gauss–Jordan elimination with partial pivoting, or `None`
    /// for a singular matrix.
    pub fn inverse(&self) -> Option<Self> {
        let mut a = self.rows.clone();
        let mut inv = Self::identity().rows;
        for col in 0..4 {
            let pivot = (col..4)
                .filter(|&r| !a[r][col].is_zero())
                .max_by(|&x, &y| a[x][col].magnitude().total_cmp(&a[y][col].magnitude()))?;
            if !S::EXACT && a[pivot][col].magnitude() <= f64::MIN_POSITIVE {
                return None;
            }
            a.swap(col, pivot);
            inv.swap(col, pivot);
            let p = a[col][col].clone();
            for c in 0..4 {
                a[col][c] = a[col][c].clone() / p.clone();
                inv[col][c] = inv[col][c].clone() / p.clone();
            }
            for r in 0..4 {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let f = a[r][col].clone();
                for c in 0..4 {
                    a[r][c] = a[r][c].clone() - f.clone() * a[col][c].clone();
                    inv[r][c] = inv[r][c].clone() - f.clone() * inv[col][c].clone();
                }
            }
        }
        Some(Self { rows: inv })
    }

    pub fn to_float(&self) -> Matrix4<super::Float> {
        Matrix4::from_fn(|r, c| self.rows[r][c].to_float())
    }
}

impl<S> Index<(usize, usize)> for Matrix4<S> {
    type Output = S;
    fn index(&self, (r, c): (usize, usize)) -> &S {
        &self.rows[r][c]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix4<S> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut S {
        &mut self.rows[r][c]
    }
}

impl<S: Scalar> Mul for &Matrix4<S> {
    type Output = Matrix4<S>;
    fn mul(self, rhs: &Matrix4<S>) -> Matrix4<S> {
        Matrix4::from_fn(|r, c| {
            (0..4).fold(S::zero(), |acc, k| {
                acc + self.rows[r][k].clone() * rhs.rows[k][c].clone()
            })
        })
    }
}

impl<S: Scalar> Mul for Matrix4<S> {
    type Output = Matrix4<S>;
    fn mul(self, rhs: Matrix4<S>) -> Matrix4<S> {
        &self * &rhs
    }
}

impl<S: Scalar> Add for &Matrix4<S> {
    type Output = Matrix4<S>;
    fn add(self, rhs: &Matrix4<S>) -> Matrix4<S> {
        Matrix4::from_fn(|r, c| self.rows[r][c].clone() + rhs.rows[r][c].clone())
    }
}

impl<S: Scalar> Add for Matrix4<S> {
    type Output = Matrix4<S>;
    fn add(self, rhs: Matrix4<S>) -> Matrix4<S> {
        &self + &rhs
    }
}

impl<S: Scalar> Sub for &Matrix4<S> {
    type Output = Matrix4<S>;
    fn sub(self, rhs: &Matrix4<S>) -> Matrix4<S> {
        Matrix4::from_fn(|r, c| self.rows[r][c].clone() - rhs.rows[r][c].clone())
    }
}

impl<S: Scalar> Sub for Matrix4<S> {
    type Output = Matrix4<S>;
    fn sub(self, rhs: Matrix4<S>) -> Matrix4<S> {
        &self - &rhs
    }
}

impl<S: Scalar> Neg for &Matrix4<S> {
    type Output = Matrix4<S>;
    fn neg(self) -> Matrix4<S> {
        Matrix4::from_fn(|r, c| -self.rows[r][c].clone())
    }
}

impl<S: Scalar> Neg for Matrix4<S> {
    type Output = Matrix4<S>;
    fn neg(self) -> Matrix4<S> {
        -&self
    }
}

impl<S: Scalar> Mul<&Spinor<S>> for &Matrix4<S> {
    type Output = Spinor<S>;
    fn mul(self, rhs: &Spinor<S>) -> Spinor<S> {
        self.apply(rhs)
    }
}

impl<S: Scalar + fmt::Display> fmt::Display for Matrix4<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            write!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

impl<S: Scalar> Spinor<S> {
    pub fn zero() -> Self {
        Spinor(array::from_fn(|_| S::zero()))
    }

    /// Unit spinor `e_{k+1}` (0-based `k`).
    pub fn basis(k: usize) -> Self {
        Spinor(array::from_fn(|i| if i == k { S::one() } else { S::zero() }))
    }

    pub fn from_ints(c: [(i64, i64); 4]) -> Self {
        Spinor(array::from_fn(|i| S::from_ints(c[i].0, c[i].1)))
    }

    pub fn scale(&self, k: &S) -> Self {
        Spinor(array::from_fn(|i| self.0[i].clone() * k.clone()))
    }

    /// Hermitian conjugate as a row, `ψ†`.
    pub fn dagger(&self) -> CoSpinor<S> {
        CoSpinor(array::from_fn(|i| self.0[i].conj()))
    }

    /// `ψ†ψ`.
    pub fn norm_sqr(&self) -> S::Real {
        self.0
            .iter()
            .fold(S::Real::zero(), |acc, x| acc + x.norm_sqr())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn max_magnitude(&self) -> f64 {
        self.0.iter().map(Scalar::magnitude).fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        let scale = self.max_magnitude().max(other.max_magnitude());
        self.0
            .iter()
            .zip(other.0.iter())
            .all(|(a, b)| S::close(a, b, scale))
    }
}

impl<S: Scalar> Add for &Spinor<S> {
    type Output = Spinor<S>;
    fn add(self, rhs: &Spinor<S>) -> Spinor<S> {
        Spinor(array::from_fn(|i| self.0[i].clone() + rhs.0[i].clone()))
    }
}

impl<S: Scalar> Add for Spinor<S> {
    type Output = Spinor<S>;
    fn add(self, rhs: Spinor<S>) -> Spinor<S> {
        &self + &rhs
    }
}

impl<S: Scalar> Sub for &Spinor<S> {
    type Output = Spinor<S>;
    fn sub(self, rhs: &Spinor<S>) -> Spinor<S> {
        Spinor(array::from_fn(|i| self.0[i].clone() - rhs.0[i].clone()))
    }
}

impl<S: Scalar> Sub for Spinor<S> {
    type Output = Spinor<S>;
    fn sub(self, rhs: Spinor<S>) -> Spinor<S> {
        &self - &rhs
    }
}

impl<S: Scalar> Neg for Spinor<S> {
    type Output = Spinor<S>;
    fn neg(self) -> Spinor<S> {
        Spinor(self.0.map(|x| -x))
    }
}

impl<S: Scalar> CoSpinor<S> {
    /// Row-times-column pairing `χ·ψ`.
    pub fn pair(&self, psi: &Spinor<S>) -> S {
        self.0
            .iter()
            .zip(psi.0.iter())
            .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }

    /// Row-times-matrix `χ·M`.
    pub fn times(&self, m: &Matrix4<S>) -> CoSpinor<S> {
        CoSpinor(array::from_fn(|c| {
            (0..4).fold(S::zero(), |acc, k| {
                acc + self.0[k].clone() * m[(k, c)].clone()
            })
        }))
    }

    /// `χ·M·ψ`.
    pub fn sandwich(&self, m: &Matrix4<S>, psi: &Spinor<S>) -> S {
        self.pair(&m.apply(psi))
    }
}
