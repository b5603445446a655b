//! Smooth surfaces in projective 3-space: smoothness, tangent sections, the
//! Hessian curve, star points, worst `A_m` scans, incidence conditions and the
//! classification of tangent sections of quartics.

mod hessian;
mod incidence;
mod quartic;
mod scan;
mod section;
mod verdict;


use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::elimination::ElimError;
use crate::germ::GermError;
use crate::groebner::GroebnerError;
use crate::polycore::{
    format_rational, parse_poly_in, reduce_mod_p, CoefficientDomain, FpPoly, PolyError, QPoly, VarNames,
};

pub use hessian::{
    hessian_curve_ideal, hessian_curve_smooth, hessian_determinant, hessian_matrix, hessian_rank_locus_empty,
    is_smooth, singular_locus_ideal, HessianCurveReport,
};
pub use incidence::{
    incidence_conditions, incidence_conditions_at, monomial_text, Exponents, IncidenceConditions, IncidenceLevel,
    QuadraticCondition,
};
pub use quartic::{
    classify_plane_quartic, classify_quartic_tangent_section, ComponentInventory, FactorPattern, QuarticCase,
    SectionClassification,
};
pub use scan::{a_m_charts, a_m_system, worst_a_scan, AmChart, LineChart, WorstA, WorstARecord, WorstAScan};
pub use section::{
    fp_points, star_point_scan, tangent_germ, tangent_section, PointSweep, StarPointScan, SweepEntry, TangentSection,
};
pub use verdict::{projective_emptiness, CheckOptions, EmptinessReport, Grade, RationalRun};

/// Variable names of the ambient projective space.
pub const XYZW: [&str; 4] = ["x", "y", "z", "w"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error("a surface equation needs 4 variables, got {0}")]
    Arity(usize),
    #[error("the zero polynomial does not define a surface")]
    Zero,
    #[error("degree {got} is below the minimum {need} for this operation")]
    DegreeTooLow { need: u32, got: u32 },
    #[error("invalid point: {0}")]
    BadPoint(String),
    #[error("the point does not lie on the surface")]
    NotOnSurface,
    #[error("the surface is singular at the point")]
    SingularPoint,
    #[error("the flag is not in the normalized position P=(0:0:0:1), L={{x=y=0}}, E={{x=0}}")]
    UnnormalizedFlag,
    #[error("the Hessian curve is not a complete intersection")]
    NotCompleteIntersection,
    #[error("the tangent section is not reduced")]
    NonReducedSection,
    #[error("the tangent section is not singular at the point")]
    SmoothSection,
    #[error("configuration outside the known cases: {0}")]
    Unclassified(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error(transparent)]
    Germ(#[from] GermError),
    #[error(transparent)]
    Elim(#[from] ElimError),
}

impl SurfaceError {
    /// Did a Gröbner computation run out of its budget?
    pub fn is_timeout(&self) -> bool {
        matches!(self, SurfaceError::Groebner(GroebnerError::Timeout { .. }))
    }
}

/// A surface `f = 0` in `P^3` over the rationals.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectiveSurface {
    f: QPoly,
    degree: u32,
}

impl ProjectiveSurface {
    /// Validates that `f` is a nonzero homogeneous polynomial in `x, y, z, w`.
    pub fn new(f: QPoly) -> Result<Self, SurfaceError> {
        if f.nvars() != 4 {
            return Err(SurfaceError::Arity(f.nvars()));
        }
        let degree = f.check_homogeneous()?.ok_or(SurfaceError::Zero)?;
        if degree == 0 {
            return Err(SurfaceError::DegreeTooLow { need: 1, got: 0 });
        }
        Ok(ProjectiveSurface { f, degree })
    }

    pub fn parse(text: &str) -> Result<Self, SurfaceError> {
        Self::new(parse_poly_in(text, &VarNames::new(&XYZW))?)
    }

    pub fn poly(&self) -> &QPoly {
        &self.f
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn domain(&self) -> CoefficientDomain {
        self.f.domain()
    }

    /// The equation with integer coprime coefficients reduced modulo `p`.
    pub fn reduce(&self, p: u64) -> Result<FpPoly, PolyError> {
        reduce_mod_p(&self.f.primitive_part(), p)
    }

    pub fn gradient(&self) -> Result<[QPoly; 4], PolyError> {
        Ok([
            self.f.partial_derivative(0)?,
            self.f.partial_derivative(1)?,
            self.f.partial_derivative(2)?,
            self.f.partial_derivative(3)?,
        ])
    }

    pub fn contains(&self, p: &SurfacePoint) -> bool {
        self.f.evaluate(p.coords()).expect("4 coordinates").is_zero()
    }

    /// Printable equation in `x, y, z, w`.
    pub fn to_text(&self) -> String {
        self.f.display_with(&VarNames::new(&XYZW)).to_string()
    }
}

/// A point of `P^3` with rational coordinates, scaled so that the first
/// nonzero coordinate is one.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SurfacePoint {
    coords: [BigRational; 4],
}

impl SurfacePoint {
    pub fn new(coords: [BigRational; 4]) -> Result<Self, SurfaceError> {
        let lead = coords
            .iter()
            .find(|c| !c.is_zero())
            .cloned()
            .ok_or_else(|| SurfaceError::BadPoint("all coordinates vanish".into()))?;
        Ok(SurfacePoint { coords: coords.map(|c| c / &lead) })
    }

    pub fn from_ints(c: [i64; 4]) -> Result<Self, SurfaceError> {
        Self::new(c.map(|n| BigRational::from_integer(n.into())))
    }

    /// Parse `a:b:c:d` or `(a:b:c:d)` with rational entries such as `1/2`.
    pub fn parse(text: &str) -> Result<Self, SurfaceError> {
        let inner = text.trim();
        let inner = inner.strip_prefix('(').and_then(|t| t.strip_suffix(')')).unwrap_or(inner);
        let parts: Vec<&str> = inner.split(':').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(SurfaceError::BadPoint(format!("expected 4 coordinates separated by ':', got {text:?}")));
        }
        let mut coords: [BigRational; 4] = Default::default();
        for (slot, part) in coords.iter_mut().zip(&parts) {
            *slot = part.parse().map_err(|_| SurfaceError::BadPoint(format!("not a rational number: {part:?}")))?;
        }
        Self::new(coords)
    }

    /// A point known to lie on `s`.
    pub fn on(s: &ProjectiveSurface, coords: [BigRational; 4]) -> Result<Self, SurfaceError> {
        let p = Self::new(coords)?;
        if !s.contains(&p) {
            return Err(SurfaceError::NotOnSurface);
        }
        Ok(p)
    }

    pub fn coords(&self) -> &[BigRational; 4] {
        &self.coords
    }
}

impl std::fmt::Display for SurfacePoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(format_rational).collect();
        write!(f, "({})", parts.join(":"))
    }
}

/// A linear form `sum c_i x_i` on `P^3`.
pub type LinearForm = [BigRational; 4];

/// A complete flag `P in L in E`: a point, a line given by two linear forms
/// and a plane given by one.
#[derive(Debug, Clone, PartialEq)]
pub struct Flag {
    pub point: [BigRational; 4],
    pub line: [LinearForm; 2],
    pub plane: LinearForm,
}

impl Flag {
    /// `P = (0:0:0:1)`, `L = {x = y = 0}`, `E = {x = 0}`.
    pub fn standard() -> Self {
        let e = |i: usize| -> LinearForm {
            let mut v: LinearForm = Default::default();
            v[i] = BigRational::one();
            v
        };
        Flag { point: e(3), line: [e(0), e(1)], plane: e(0) }
    }

    /// Checks `P in L in E` and that `L` is a line.
    pub fn is_valid(&self) -> bool {
        let dot = |a: &LinearForm, b: &[BigRational; 4]| -> BigRational {
            a.iter().zip(b).fold(BigRational::zero(), |s, (x, y)| s + x * y)
        };
        if self.line.iter().any(|l| !dot(l, &self.point).is_zero()) || !dot(&self.plane, &self.point).is_zero() {
            return false;
        }
        // the forms of L are independent and E is in their span
        let rank = |rows: &[LinearForm]| rank_q(rows.to_vec());
        rank(&self.line) == 2 && rank(&[self.line[0].clone(), self.line[1].clone(), self.plane.clone()]) == 2
    }
}

/// Rank of a small rational matrix.
pub(crate) fn rank_q(mut rows: Vec<LinearForm>) -> usize {
    let mut rank = 0;
    for col in 0..4 {
        let Some(piv) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else { continue };
        rows.swap(rank, piv);
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let factor = &rows[r][col] / &rows[rank][col];
                for c in 0..4 {
                    let t = &factor * &rows[rank][c];
                    rows[r][c] -= t;
                }
            }
        }
        rank += 1;
    }
    rank
}
