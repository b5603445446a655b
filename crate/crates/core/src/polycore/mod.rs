//! Exact sparse multivariate polynomials over the rationals and prime fields.

mod field;
mod monomial;
mod parse;
mod poly;
pub mod univariate;

pub use field::{format_rational, is_prime, primes_in, CoefficientDomain, Field, PrimeField, Rationals};
pub use monomial::{Monomial, MonomialOrder, MAX_EXPONENT, MAX_VARS};
pub use parse::{parse_poly, parse_poly_in, VarNames};
pub use poly::{reduce_mod_p, FpPoly, MultiPoly, QPoly};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("arity mismatch: {0} vs {1} variables")]
    ArityMismatch(usize, usize),
    #[error("coefficient domain mismatch: {0} vs {1}")]
    DomainMismatch(CoefficientDomain, CoefficientDomain),
    #[error("variable index {index} out of range for a ring with {arity} variables")]
    VarOutOfRange { index: usize, arity: usize },
    #[error("the zero polynomial has no lowest part")]
    ZeroPolynomial,
    #[error("{0} is not a prime below 2^31")]
    NotPrime(u64),
    #[error("coefficient {coefficient} has a denominator divisible by {prime}")]
    BadReduction { prime: u64, coefficient: String },
    #[error("division is not exact")]
    NotDivisible,
    #[error("{0} variables requested, at most {max} supported", max = MAX_VARS)]
    TooManyVars(usize),
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("polynomial is not homogeneous: {first} and {second} have different degrees")]
    NotHomogeneous { first: String, second: String },
}
