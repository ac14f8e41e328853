//! Numerical and exact-algebra laboratory for the nonlinear Dirac equation
//! `iγ^μ(∂_μψ − ia_μψ) − F(Z)ψ = 0` with `Z = (ψ̄ψ)·1 − (ψ̄Iψ)·I`.
//!
//! * [`clifford`]: gamma matrices, pseudoscalar, adjoints and bilinears over
//!   exact Gaussian rationals or binary64.
//! * [`n_algebra`]: the subalgebra `span{1, I} ≅ ℂ` and lifted functions `F(Z)`.
//! * [`nonlinearity`]: mass terms and Lagrangian densities.
//! * [`dynamics`]: method-of-lines evolution on periodic grids, diagnostics.
//! * [`symmetry`]: Spin₊(1,3) and parity elements, Lorentz and gauge maps.
//! * [`identities`]: exact matrix-polynomial verification of the algebraic identities.
//! * [`cli`]: configuration files and the `nldirac` subcommands.

pub mod cli;
pub mod clifford;
pub mod dynamics;
pub mod identities;
pub mod n_algebra;
pub mod nonlinearity;
pub mod symmetry;
