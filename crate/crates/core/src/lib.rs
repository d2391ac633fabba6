//! Invariants of virtual and twisted link diagrams.
//!
//! Diagrams are Gauss codes with bars ([`TwistedGaussCode`]). The crate
//! computes the arrow polynomial and its normalized form, checkerboard
//! colorability and cut-point numbers, rewrites diagrams by extended
//! Reidemeister moves, and closes twisted braids.
//!
//! Polynomials are generic over the coefficient ring; [`ArrowPolynomial`]
//! uses arbitrary precision integers and is what the high level entry points
//! return.

pub mod arrowsum;
pub mod braid;
pub mod check;
pub mod cli;
pub mod coloring;
pub mod corpus;
pub mod diagram;
pub mod enumerate;
pub mod moves;
pub mod poly;

pub use arrowsum::{bracket, normalized, ArrowError};
pub use diagram::{ParseError, Pass, Role, Sign, Token, TwistedGaussCode, ValidationError};
pub use poly::{d_power, ArrowMonomial, ArrowPoly, Coefficient, KProduct, MonomialKey};

/// Arrow polynomial with arbitrary precision integer coefficients.
pub type ArrowPolynomial = ArrowPoly<num_bigint::BigInt>;

/// Arrow polynomial with machine integer coefficients, for small diagrams.
pub type ArrowPolynomialI64 = ArrowPoly<i64>;
