//! Exact computation with vector fields on the superpoint.
//!
//! The crate works in the free supercommutative algebra
//! `A = S[x_1..x_n] ⊗ Λ[ξ_1..ξ_n]` with the Koszul differential
//! `d = Σ x_i ∂/∂ξ_i`. Vector fields on the superpoint (`W_n = Der Λ`)
//! extend uniquely to derivations of `A` commuting with `d`; the
//! Hamiltonian subalgebra `H(ω)` and its extension `DH(ω)` by the Euler
//! field are computed as exact kernels. The `quadric` module models the
//! geometric side: stalks on projective space, the quotient `A/ωA`, and the
//! induced actions of `W_n` and `DH_n`.
//!
//! Algebraic types are generic over a [`scalar::Scalar`]; the aliases below
//! fix the exact rational field used by every verification.

pub mod cli;
pub mod derivation;
pub mod element;
pub mod error;
pub mod linalg;
pub mod json;
pub mod monomial;
pub mod quadric;
pub mod report;
pub mod scalar;
pub mod text;
pub mod vectorial;

pub use error::{Error, Result};
pub use monomial::{Bidegree, Monomial, Parity};
pub use scalar::Scalar;

/// Arbitrary-precision rationals.
pub type Rational = num_rational::BigRational;
/// An element of `A` over the rationals.
pub type Element = element::SuperElement<Rational>;
/// A derivation of `A` over the rationals.
pub type Derivation = derivation::SuperDerivation<Rational>;
/// A homogeneous vector field on the superpoint over the rationals.
pub type Field = derivation::SuperpointField<Rational>;
