//! Alpha-invariant reports: `alpha_1` from the singularity evidence, certified
//! upper bounds on `alpha`, and the comparison of the two.

mod bounds;
mod report;

#[cfg(test)]
mod tests;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::germ::GermError;
use crate::polycore::{primes_in, PolyError, QPoly};
use crate::surface::{ProjectiveSurface, SurfaceError};

pub use bounds::{alpha_upper_bounds, family_local_form, sqrt_bound, Provenance, UpperBound, DEFAULT_SQRT_K};
pub use report::{
    alpha1_from_scan, tian_verdict, AlphaOptions, AlphaReport, EvidenceRecord, SingularityEvidence, TianVerdict,
    WorstSingularity,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlphaError {
    #[error("degree {0} is below 2")]
    DegreeTooLow(u32),
    #[error("the surface is singular")]
    Singular,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Germ(#[from] GermError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

impl AlphaError {
    pub fn is_timeout(&self) -> bool {
        matches!(self, AlphaError::Surface(e) if e.is_timeout())
    }
}

/// Primes for evidence scans when none are given: every prime up to 293.
pub fn default_primes() -> Vec<u64> {
    primes_in(2, 293)
}

/// Rationals as `"p/q"` strings, the denominator always written out.
pub mod ratio_text {
    use num_rational::BigRational;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn to_text(r: &BigRational) -> String {
        format!("{}/{}", r.numer(), r.denom())
    }

    pub fn from_text(s: &str) -> Result<BigRational, String> {
        s.parse::<BigRational>().map_err(|e| format!("bad rational {s:?}: {e}"))
    }

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&to_text(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        from_text(&String::deserialize(d)?).map_err(D::Error::custom)
    }
}

/// `alpha_1` as an exact value or as an interval.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Alpha1 {
    Exact {
        #[serde(with = "ratio_text")]
        value: BigRational,
    },
    Interval {
        #[serde(with = "ratio_text")]
        lower: BigRational,
        /// The lower end is excluded.
        lower_strict: bool,
        #[serde(with = "ratio_text")]
        upper: BigRational,
        reason: String,
    },
}

impl Alpha1 {
    pub fn exact(value: BigRational) -> Self {
        Alpha1::Exact { value }
    }

    pub fn lower(&self) -> (&BigRational, bool) {
        match self {
            Alpha1::Exact { value } => (value, false),
            Alpha1::Interval { lower, lower_strict, .. } => (lower, *lower_strict),
        }
    }

    pub fn upper(&self) -> &BigRational {
        match self {
            Alpha1::Exact { value } => value,
            Alpha1::Interval { upper, .. } => upper,
        }
    }

    /// Is every admissible value of `alpha_1` strictly above `b`?
    pub fn strictly_above(&self, b: &BigRational) -> bool {
        let (lower, strict) = self.lower();
        b < lower || (strict && b == lower)
    }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// The surface `(x^(d-2) + y^(d-2) + z^(d-2) + w^(d-2))(xw + yz) + (y - z)^d - x^d`.
pub fn family_surface(d: u32) -> Result<ProjectiveSurface, AlphaError> {
    if d < 2 {
        return Err(AlphaError::DegreeTooLow(d));
    }
    let e = d - 2;
    let text = format!("(x^{e} + y^{e} + z^{e} + w^{e})*(x*w + y*z) + (y - z)^{d} - x^{d}");
    Ok(ProjectiveSurface::parse(&text)?)
}

/// Whether `s` is the family surface of its degree, up to a constant factor.
pub fn is_family_surface(s: &ProjectiveSurface) -> bool {
    let Ok(fam) = family_surface(s.degree()) else { return false };
    s.poly().primitive_part() == fam.poly().primitive_part()
        || s.poly().primitive_part() == (-fam.poly()).primitive_part()
}

/// `chi(O_S) = (d-1)(d-2)(d-3)/6 + 1` for a smooth surface of degree `d`.
pub fn chi_structure_sheaf(d: u32) -> BigRational {
    let d = i64::from(d);
    rat((d - 1) * (d - 2) * (d - 3), 6) + BigRational::one()
}

/// The Riemann-Roch lower bound `chi + (n^2 (d - m^2) - n (d - 4) - n m) / 2`
/// for `h^0(O_S(nH - n m C))`-type counts.
pub fn rr_h0_lower(n: &BigRational, m: &BigRational, d: u32, chi: &BigRational) -> Result<BigRational, AlphaError> {
    if !n.is_positive() || !m.is_positive() {
        return Err(AlphaError::InvalidArgument("n and m must be positive".into()));
    }
    if !(n * m).is_integer() {
        return Err(AlphaError::InvalidArgument("n m must be an integer".into()));
    }
    let d = BigRational::from_integer(d.into());
    let four = BigRational::from_integer(4.into());
    let two = BigRational::from_integer(2.into());
    let inner = n * n * (&d - m * m) - n * (&d - four) - n * m;
    Ok(chi + inner / two)
}

/// Log canonical threshold at the origin of the reduced germ `g = 0`.
pub(crate) fn lct_of_poly(g: QPoly) -> Result<BigRational, AlphaError> {
    let germ = crate::germ::CurveGerm::new(g)?;
    Ok(crate::germ::lct_of_germ(&germ)?)
}
