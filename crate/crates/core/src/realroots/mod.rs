//! Exact real-root isolation and algebraic time values.
//!
//! Certificate failure times are real roots of rational polynomials. They are
//! kept as an isolating interval around a root of a square-free defining
//! polynomial, so that the event queue can order them exactly.

mod algebraic;
mod poly;

pub use algebraic::{isolate_roots, AlgebraicTime, IsolatedRoot, Side};
pub use poly::RatPolynomial;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RootError {
    #[error("root isolation of the zero polynomial")]
    ZeroPolynomial,
}
