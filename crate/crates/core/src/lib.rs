//! Numerics for an asymmetric generalized translation on [-1, 1], the modulus
//! of smoothness it induces, the Peetre K-functional for the Jacobi operator
//! D = (1-x^2) d^2/dx^2 - 6x d/dx, and weighted best polynomial approximation.
//!
//! The [`harness`] module turns the identities and two-sided estimates that
//! relate these objects into runnable checks.

pub mod approx;
pub mod error;
pub mod function;
pub mod harness;
pub mod jacobi;
pub mod quadrature;
pub mod space;
pub mod translation;

pub use error::{Error, Result};
pub use function::{FunctionHandle, Parity};
pub use jacobi::{DOperatorParams, JacobiSeries, Polynomial};
pub use quadrature::{QuadratureRule, RuleKind};
pub use space::{Exponent, SpaceParams, WeightedNorm};
