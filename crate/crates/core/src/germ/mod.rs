//! Plane curve germs at the origin of the affine plane.
//!
//! Germs are resolved by repeated point blow-ups; every exceptional curve
//! records the multiplicity `m_E` of the pulled-back divisor along it and its
//! discrepancy `a_E`. The log canonical threshold is then the minimum of
//! `(a_E + 1) / m_E` over exceptional curves and `1 / a_i` over the
//! components of the divisor.

mod classify;
mod resolve;

#[cfg(test)]
mod tests;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::elimination::ElimError;
use crate::polycore::{parse_poly_in, PolyError, QPoly, Rationals, VarNames};

pub use classify::{a_class_lct, classify_a, classify_a_poly, AClass};
pub use resolve::{blowup_step, resolve, BlowupOutcome, ChartGerm, LeafChart, ResolutionNode, ResolutionTree};

/// Depth used by [`lct_of_germ`]; generous for the germs seen in practice.
pub const DEFAULT_MAX_DEPTH: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GermError {
    #[error("a germ lives in 2 variables, got {0}")]
    Arity(usize),
    #[error("the zero polynomial does not define a curve germ")]
    Zero,
    #[error("the curve does not pass through the origin")]
    NotThroughOrigin,
    #[error("component weight {0} is negative")]
    NegativeWeight(String),
    #[error("normal crossings not reached within {0} blow-ups")]
    DepthExhausted(u32),
    #[error("a blow-up center has irrational coordinates")]
    IrrationalCenter,
    #[error("characteristic {0} is too small for this classification")]
    Characteristic(u64),
    #[error("the germ is not reduced")]
    NonReduced,
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Elim(#[from] ElimError),
}

/// One component of a divisor germ with its coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct Component {
    pub poly: QPoly,
    pub weight: BigRational,
}

/// A divisor germ `sum a_i C_i` at the origin, or a reduced curve germ when
/// there is a single component of weight one.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveGerm {
    components: Vec<Component>,
}

impl CurveGerm {
    /// The reduced germ of `poly = 0`.
    pub fn new(poly: QPoly) -> Result<Self, GermError> {
        Self::weighted(vec![(poly, BigRational::one())])
    }

    /// Parse a germ in the variables `x, y`.
    pub fn parse(text: &str) -> Result<Self, GermError> {
        let names = VarNames::new(&["x", "y"]);
        Self::new(parse_poly_in(text, &names)?)
    }

    pub fn weighted(components: Vec<(QPoly, BigRational)>) -> Result<Self, GermError> {
        let mut out = Vec::with_capacity(components.len());
        for (poly, weight) in components {
            if poly.nvars() != 2 {
                return Err(GermError::Arity(poly.nvars()));
            }
            if poly.is_zero() {
                return Err(GermError::Zero);
            }
            if weight.is_negative() {
                return Err(GermError::NegativeWeight(crate::polycore::format_rational(&weight)));
            }
            out.push(Component { poly, weight });
        }
        let germ = CurveGerm { components: out };
        if germ.active().next().is_none() {
            return Err(GermError::NotThroughOrigin);
        }
        Ok(germ)
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    /// Components through the origin with positive weight.
    fn active(&self) -> impl Iterator<Item = &Component> {
        self.components.iter().filter(|c| !c.weight.is_zero() && c.poly.constant_term().is_zero())
    }

    /// The (reduced) defining polynomial: product of the active components.
    pub fn poly(&self) -> QPoly {
        self.active().fold(QPoly::one(Rationals, 2), |acc, c| &acc * &c.poly)
    }

    pub fn is_reduced_form(&self) -> bool {
        self.components.len() == 1 && self.components[0].weight.is_one()
    }

    /// Largest component coefficient among active components.
    pub fn max_weight(&self) -> BigRational {
        self.active().map(|c| c.weight.clone()).max().unwrap_or_else(BigRational::zero)
    }
}

/// Order of the lowest nonzero homogeneous part.
pub fn germ_multiplicity(g: &CurveGerm) -> u32 {
    g.poly().order().unwrap_or(0)
}

/// `sum a_i mult(C_i)`; equals [`germ_multiplicity`] for reduced germs.
pub fn weighted_multiplicity(g: &CurveGerm) -> BigRational {
    g.active()
        .map(|c| &c.weight * BigRational::from_integer(BigInt::from(c.poly.order().unwrap_or(0))))
        .fold(BigRational::zero(), |a, b| a + b)
}

/// The a priori bounds `1/m <= lct <= 2/m`.
pub fn lct_bounds(g: &CurveGerm) -> (BigRational, BigRational) {
    let m = weighted_multiplicity(g);
    let lower = m.recip();
    (lower.clone(), lower * BigRational::from_integer(2.into()))
}

/// Log canonical threshold at the origin, exact.
pub fn lct_of_germ(g: &CurveGerm) -> Result<BigRational, GermError> {
    Ok(resolve(g, DEFAULT_MAX_DEPTH)?.lct())
}
