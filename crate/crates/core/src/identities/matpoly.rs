use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use crate::clifford::{Exact, Matrix4, Scalar};

/// Commuting symbols: `ξ_0..ξ_3` (lower index), `σ`, `ρ`, `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Symbol {
    Xi(usize),
    Sigma,
    Rho,
    Mass,
}

pub const SYMBOL_COUNT: usize = 7;

impl Symbol {
    fn slot(self) -> usize {
        match self {
            Symbol::Xi(mu) => {
                assert!(mu < 4, "ξ index {mu} out of range");
                mu
            }
            Symbol::Sigma => 4,
            Symbol::Rho => 5,
            Symbol::Mass => 6,
        }
    }

    fn name(slot: usize) -> &'static str {
        ["xi0", "xi1", "xi2", "xi3", "sigma", "rho", "m"][slot]
    }
}

/// Exponent vector over the symbols, ordered lexicographically.
pub type Monomial = [u32; SYMBOL_COUNT];

/// Polynomial in commuting symbols with exact 4×4 matrix coefficients.
/// Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MatPoly {
    terms: BTreeMap<Monomial, Matrix4<Exact>>,
}

impl MatPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `c·1` for a constant matrix `c`.
    pub fn constant(c: Matrix4<Exact>) -> Self {
        Self::term([0; SYMBOL_COUNT], c)
    }

    /// `c·x` for a symbol `x`.
    pub fn symbol(x: Symbol, c: Matrix4<Exact>) -> Self {
        let mut mono = [0; SYMBOL_COUNT];
        mono[x.slot()] = 1;
        Self::term(mono, c)
    }

    pub fn term(mono: Monomial, c: Matrix4<Exact>) -> Self {
        let mut p = Self::zero();
        p.accumulate(mono, c);
        p
    }

    fn accumulate(&mut self, mono: Monomial, c: Matrix4<Exact>) {
        let sum = match self.terms.remove(&mono) {
            Some(existing) => &existing + &c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(mono, sum);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Matrix4<Exact>)> {
        self.terms.iter()
    }

    /// Largest total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.iter().sum()).max()
    }

    /// Every coefficient scaled by `k`.
    pub fn scale(&self, k: &Exact) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.accumulate(*m, c.scale(k));
        }
        out
    }
}

/// `xi0^2*sigma`; `1` for the constant monomial.
pub fn monomial_name(mono: &Monomial) -> String {
    let parts: Vec<String> = mono
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(slot, &e)| {
            if e == 1 {
                Symbol::name(slot).to_string()
            } else {
                format!("{}^{e}", Symbol::name(slot))
            }
        })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

fn entry_text(z: &Exact) -> String {
    let (re, im) = (z.re(), z.im());
    match (re.is_zero(), im.is_zero()) {
        (_, true) => re.to_string(),
        (true, false) => format!("{im}i"),
        (false, false) if im < Zero::zero() => format!("{re}-{}i", -im),
        _ => format!("{re}+{im}i"),
    }
}

/// Nonzero entries as `(r,c)=v` with 1-based indices.
pub fn matrix_entries(m: &Matrix4<Exact>) -> String {
    let mut cells = Vec::new();
    for r in 0..4 {
        for c in 0..4 {
            let z = &m[(r, c)];
            if !z.is_zero() {
                cells.push(format!("({},{})={}", r + 1, c + 1, entry_text(z)));
            }
        }
    }
    cells.join(" ")
}

impl fmt::Display for MatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| format!("{}: {}", monomial_name(m), matrix_entries(c)))
            .collect();
        f.write_str(&parts.join("; "))
    }
}

impl Add for &MatPoly {
    type Output = MatPoly;
    fn add(self, rhs: &MatPoly) -> MatPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.accumulate(*m, c.clone());
        }
        out
    }
}

impl Neg for &MatPoly {
    type Output = MatPoly;
    fn neg(self) -> MatPoly {
        MatPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl Sub for &MatPoly {
    type Output = MatPoly;
    fn sub(self, rhs: &MatPoly) -> MatPoly {
        self + &(-rhs)
    }
}

/// Matrix product of coefficients with exponents added; coefficients do not
/// commute, symbols do.
impl Mul for &MatPoly {
    type Output = MatPoly;
    fn mul(self, rhs: &MatPoly) -> MatPoly {
        let mut out = MatPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let mono = std::array::from_fn(|k| ma[k] + mb[k]);
                out.accumulate(mono, ca * cb);
            }
        }
        out
    }
}
