//! Exact, zero-tolerance checks of the algebraic identities behind the
//! field equation, using matrix polynomials over Gaussian rationals.

mod matpoly;

pub use matpoly::{matrix_entries, monomial_name, MatPoly, Monomial, Symbol, SYMBOL_COUNT};

use std::fmt;

use num_traits::{One, Zero};

use crate::clifford::{exact, gammas, pseudoscalar_of, Exact, Matrix4, MinkowskiMetric, Scalar};
use crate::n_algebra::{to_matrix, NElement};

/// Highest total degree an identity remainder may have; anything above means
/// the verifier itself built the wrong expression.
pub const MAX_REMAINDER_DEGREE: u32 = 2;

/// The four gamma matrices under test, canonical unless a fault is injected.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaSet {
    gammas: [Matrix4<Exact>; 4],
}

impl Default for GammaSet {
    fn default() -> Self {
        Self::canonical()
    }
}

impl GammaSet {
    pub fn canonical() -> Self {
        Self { gammas: gammas() }
    }

    pub fn gammas(&self) -> &[Matrix4<Exact>; 4] {
        &self.gammas
    }

    /// `γ^μ → −γ^μ`.
    pub fn negated(mut self, mu: usize) -> Self {
        self.gammas[mu] = -&self.gammas[mu];
        self
    }

    /// `γ^μ → γ^ν`.
    pub fn replaced(mut self, mu: usize, nu: usize) -> Self {
        self.gammas[mu] = self.gammas[nu].clone();
        self
    }

    /// Flips the sign of one entry of `γ^μ` (0-based row and column).
    pub fn with_entry_negated(mut self, mu: usize, row: usize, col: usize) -> Self {
        let v = self.gammas[mu][(row, col)].clone();
        self.gammas[mu][(row, col)] = -v;
        self
    }

    fn pseudoscalar(&self) -> Matrix4<Exact> {
        pseudoscalar_of(&self.gammas)
    }
}

/// Outcome of one identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityResult {
    pub name: &'static str,
    pub passed: bool,
    /// First offending term on failure.
    pub remainder: Option<String>,
}

impl IdentityResult {
    fn pass(name: &'static str) -> Self {
        Self {
            name,
            passed: true,
            remainder: None,
        }
    }

    fn fail(name: &'static str, remainder: String) -> Self {
        Self {
            name,
            passed: false,
            remainder: Some(remainder),
        }
    }
}

impl fmt::Display for IdentityResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.remainder {
            None if self.passed => write!(f, "{} PASS", self.name),
            None => write!(f, "{} FAIL", self.name),
            Some(r) => write!(f, "{} {} {r}", self.name, if self.passed { "PASS" } else { "FAIL" }),
        }
    }
}

/// Consolidated results in a fixed order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub results: Vec<IdentityResult>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.results {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

/// Compares `lhs` and `rhs` exactly; on mismatch reports the first monomial of
/// the difference in lexicographic order.
fn compare(name: &'static str, lhs: &MatPoly, rhs: &MatPoly) -> IdentityResult {
    let diff = lhs - rhs;
    match diff.degree() {
        None => IdentityResult::pass(name),
        Some(d) if d > MAX_REMAINDER_DEGREE => IdentityResult::fail(
            name,
            format!("self-check: remainder has degree {d} > {MAX_REMAINDER_DEGREE}"),
        ),
        Some(_) => {
            let (mono, coeff) = diff.terms().next().expect("nonzero remainder");
            IdentityResult::fail(name, format!("{}: {}", monomial_name(mono), matrix_entries(coeff)))
        }
    }
}

fn int(k: i64) -> Exact {
    exact(k, 0)
}

fn scalar_matrix(k: i64) -> Matrix4<Exact> {
    Matrix4::identity().scale(&int(k))
}

/// `{γ^μ, γ^ν} = 2η^{μν}·1` for all sixteen ordered pairs.
pub fn verify_clifford(set: &GammaSet) -> IdentityResult {
    const NAME: &str = "verify_clifford";
    let g = set.gammas();
    for mu in 0..4 {
        for nu in 0..4 {
            let eta = if mu == nu { MinkowskiMetric::sign(mu) } else { 0 };
            let diff = &g[mu].anticommutator(&g[nu]) - &scalar_matrix(2 * eta);
            if !diff.is_zero() {
                return IdentityResult::fail(
                    NAME,
                    format!("{{g{mu},g{nu}}} - 2eta: {}", matrix_entries(&diff)),
                );
            }
        }
    }
    IdentityResult::pass(NAME)
}

/// `(γ^μ)† = γ⁰γ^μγ⁰`.
pub fn verify_gamma_hermiticity(set: &GammaSet) -> IdentityResult {
    const NAME: &str = "gamma_hermiticity";
    let g = set.gammas();
    for mu in 0..4 {
        let diff = &g[mu].dagger() - &(&(&g[0] * &g[mu]) * &g[0]);
        if !diff.is_zero() {
            return IdentityResult::fail(NAME, format!("g{mu}: {}", matrix_entries(&diff)));
        }
    }
    IdentityResult::pass(NAME)
}

/// `I² = −1` and `Iγ^μ = −γ^μI` for `I = γ⁰γ¹γ²γ³`.
pub fn verify_pseudoscalar(set: &GammaSet) -> IdentityResult {
    const NAME: &str = "pseudoscalar_relations";
    let i = set.pseudoscalar();
    let square = &(&i * &i) + &Matrix4::identity();
    if !square.is_zero() {
        return IdentityResult::fail(NAME, format!("I^2 + 1: {}", matrix_entries(&square)));
    }
    for (mu, g) in set.gammas().iter().enumerate() {
        let anti = i.anticommutator(g);
        if !anti.is_zero() {
            return IdentityResult::fail(NAME, format!("{{I,g{mu}}}: {}", matrix_entries(&anti)));
        }
    }
    IdentityResult::pass(NAME)
}

/// Signature used on the right-hand side of the second-order identities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Signature {
    #[default]
    Minkowski,
    /// All `+1`, for checking that the verifier can fail.
    Euclidean,
}

impl Signature {
    fn sign(self, mu: usize) -> i64 {
        match self {
            Signature::Minkowski => MinkowskiMetric::sign(mu),
            Signature::Euclidean => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct KgfOptions {
    pub signature: Signature,
    /// Drop `m` (the massless sub-case).
    pub massless: bool,
}

/// `Σ_μ iγ^μξ_μ`.
fn slashed_xi(set: &GammaSet) -> MatPoly {
    set.gammas()
        .iter()
        .enumerate()
        .fold(MatPoly::zero(), |acc, (mu, g)| {
            &acc + &MatPoly::symbol(Symbol::Xi(mu), g.scale(&Exact::i()))
        })
}

/// `Σ_μ η^{μμ}ξ_μ²·1`.
fn xi_square(signature: Signature) -> MatPoly {
    (0..4).fold(MatPoly::zero(), |acc, mu| {
        let xi = MatPoly::symbol(Symbol::Xi(mu), Matrix4::identity());
        &acc + &(&xi * &xi).scale(&int(signature.sign(mu)))
    })
}

/// `(iγ^μξ_μ − m)(iγ^νξ_ν + m) = −(ξ_μξ^μ + m²)·1`.
pub fn verify_kgf(set: &GammaSet, options: KgfOptions) -> IdentityResult {
    let name = if options.massless { "verify_kgf_massless" } else { "verify_kgf" };
    let slash = slashed_xi(set);
    let m = if options.massless {
        MatPoly::zero()
    } else {
        MatPoly::symbol(Symbol::Mass, Matrix4::identity())
    };
    let lhs = &(&slash - &m) * &(&slash + &m);
    let rhs = -&(&xi_square(options.signature) + &(&m * &m));
    compare(name, &lhs, &rhs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneralizedKgfOptions {
    /// Drop `ρ`, reducing `F` to `σ·1`.
    pub rho_zero: bool,
    /// Use `F̄ = σ − ρI` in the second factor; `false` uses `F` itself.
    pub conjugate: bool,
}

impl Default for GeneralizedKgfOptions {
    fn default() -> Self {
        Self {
            rho_zero: false,
            conjugate: true,
        }
    }
}

/// `(iγ^μξ_μ − F)(iγ^νξ_ν + F̄) = −(ξ_μξ^μ + σ² + ρ²)·1` with `F = σ + ρI`.
pub fn verify_generalized_kgf(set: &GammaSet, options: GeneralizedKgfOptions) -> IdentityResult {
    let name = if options.rho_zero { "verify_generalized_kgf_rho0" } else { "verify_generalized_kgf" };
    let slash = slashed_xi(set);
    let sigma = MatPoly::symbol(Symbol::Sigma, Matrix4::identity());
    let rho_i = if options.rho_zero {
        MatPoly::zero()
    } else {
        MatPoly::symbol(Symbol::Rho, set.pseudoscalar())
    };
    let f = &sigma + &rho_i;
    let second = if options.conjugate { &sigma - &rho_i } else { f.clone() };
    let lhs = &(&slash - &f) * &(&slash + &second);
    let mut modsq = &sigma * &sigma;
    if !options.rho_zero {
        let rho = MatPoly::symbol(Symbol::Rho, Matrix4::identity());
        modsq = &modsq + &(&rho * &rho);
    }
    let rhs = -&(&xi_square(Signature::Minkowski) + &modsq);
    compare(name, &lhs, &rhs)
}

/// `to_matrix` is a ring homomorphism on the sweep `{−2..2}²` and
/// `(0,1)² = −1`.
pub fn verify_n_iso() -> IdentityResult {
    const NAME: &str = "verify_n_iso";
    let r = Exact::real_from_int;
    let sweep: Vec<NElement<_>> = (-2..=2)
        .flat_map(|a| (-2..=2).map(move |b| NElement::new(r(a), r(b))))
        .collect();
    let matrices: Vec<Matrix4<Exact>> = sweep.iter().map(to_matrix::<Exact>).collect();
    for (a, ma) in sweep.iter().zip(&matrices) {
        for (b, mb) in sweep.iter().zip(&matrices) {
            let product = &(ma * mb) - &to_matrix::<Exact>(&(a.clone() * b.clone()));
            let sum = &(ma + mb) - &to_matrix::<Exact>(&(a.clone() + b.clone()));
            if !product.is_zero() || !sum.is_zero() {
                return IdentityResult::fail(
                    NAME,
                    format!("({}, {}) x ({}, {})", a.alpha, a.beta, b.alpha, b.beta),
                );
            }
        }
    }
    let unit = NElement::new(r(0), r(1));
    let square = to_matrix::<Exact>(&unit);
    if &square * &square != -&Matrix4::<Exact>::identity() {
        return IdentityResult::fail(NAME, "(0, 1)^2 != -1".into());
    }
    let one = to_matrix::<Exact>(&NElement::new(r(1), r(0)));
    if !one.rows().iter().enumerate().all(|(i, row)| {
        row.iter().enumerate().all(|(j, v)| if i == j { v.is_one() } else { v.is_zero() })
    }) {
        return IdentityResult::fail(NAME, "(1, 0) is not the identity".into());
    }
    IdentityResult::pass(NAME)
}

/// `X†γ⁰ + γ⁰X = 0` and `tr X = 0`, with `γ⁰` taken from `set`.
pub fn su22_member_in(set: &GammaSet, x: &Matrix4<Exact>) -> bool {
    let g0 = &set.gammas()[0];
    let form = &(&x.dagger() * g0) + &(g0 * x);
    form.is_zero() && x.trace().is_zero()
}

/// `iγ^μ ∈ su(2,2)` for every `μ`.
pub fn verify_su22_membership(set: &GammaSet) -> IdentityResult {
    const NAME: &str = "verify_su22_membership";
    for (mu, g) in set.gammas().iter().enumerate() {
        if !su22_member_in(set, &g.scale(&Exact::i())) {
            return IdentityResult::fail(NAME, format!("i*g{mu}"));
        }
    }
    IdentityResult::pass(NAME)
}

/// Every identity, in a fixed order.
pub fn run_all(set: &GammaSet) -> Report {
    let results = vec![
        verify_clifford(set),
        verify_gamma_hermiticity(set),
        verify_pseudoscalar(set),
        verify_kgf(set, KgfOptions::default()),
        verify_kgf(
            set,
            KgfOptions {
                massless: true,
                ..KgfOptions::default()
            },
        ),
        verify_generalized_kgf(set, GeneralizedKgfOptions::default()),
        verify_generalized_kgf(
            set,
            GeneralizedKgfOptions {
                rho_zero: true,
                ..GeneralizedKgfOptions::default()
            },
        ),
        verify_n_iso(),
        verify_su22_membership(set),
    ];
    Report { results }
}
