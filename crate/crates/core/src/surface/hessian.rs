//! Smoothness, the Hessian curve and rank loci of the Hessian matrix.

use serde::{Deserialize, Serialize};

use crate::elimination::det_laplace;
use crate::groebner::Ideal;
use crate::polycore::{QPoly, Rationals};

use super::verdict::{projective_emptiness, CheckOptions, EmptinessReport, Grade, RationalRun};
use super::{ProjectiveSurface, SurfaceError};

/// `<f, df/dx, df/dy, df/dz, df/dw>`, whose projective zero set is the
/// singular locus.
pub fn singular_locus_ideal(s: &ProjectiveSurface) -> Result<Ideal<Rationals>, SurfaceError> {
    let mut gens = vec![s.poly().clone()];
    gens.extend(s.gradient()?);
    Ok(Ideal::new(Rationals, 4, gens)?)
}

/// Smooth iff the singular locus is empty; see [`projective_emptiness`] for
/// how modular and rational runs combine.
pub fn is_smooth(s: &ProjectiveSurface, opts: &CheckOptions) -> Result<EmptinessReport, SurfaceError> {
    projective_emptiness(&singular_locus_ideal(s)?, 4, opts)
}

/// The matrix of second partial derivatives.
pub fn hessian_matrix(s: &ProjectiveSurface) -> Result<Vec<Vec<QPoly>>, SurfaceError> {
    let grad = s.gradient()?;
    let mut rows = Vec::with_capacity(4);
    for g in &grad {
        rows.push((0..4).map(|j| g.partial_derivative(j)).collect::<Result<Vec<_>, _>>()?);
    }
    Ok(rows)
}

pub fn hessian_determinant(s: &ProjectiveSurface) -> Result<QPoly, SurfaceError> {
    let h = hessian_matrix(s)?;
    Ok(det_laplace(&h, s.poly()))
}

/// `<f, det Hess f>`.
pub fn hessian_curve_ideal(s: &ProjectiveSurface) -> Result<Ideal<Rationals>, SurfaceError> {
    if s.degree() < 2 {
        return Err(SurfaceError::DegreeTooLow { need: 2, got: s.degree() });
    }
    Ok(Ideal::new(Rationals, 4, vec![s.poly().clone(), hessian_determinant(s)?])?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HessianCurveReport {
    /// Degree of the Hessian determinant; `0` when it is a nonzero constant
    /// and the curve is empty.
    pub hessian_degree: u32,
    /// Emptiness of the singular locus of the curve.
    pub singular_locus: EmptinessReport,
}

impl HessianCurveReport {
    pub fn smooth(&self) -> Option<bool> {
        self.singular_locus.empty
    }
}

/// Smoothness of `C = {f = det Hess f = 0}` by the Jacobian criterion: the
/// 2x2 minors of the Jacobian of `(f, det Hess f)` have no common zero on `C`.
pub fn hessian_curve_smooth(s: &ProjectiveSurface, opts: &CheckOptions) -> Result<HessianCurveReport, SurfaceError> {
    let ideal = hessian_curve_ideal(s)?;
    let (f, h) = (s.poly(), hessian_determinant(s)?);
    if h.is_zero() {
        return Err(SurfaceError::NotCompleteIntersection);
    }
    let hdeg = h.total_degree().unwrap_or(0);
    if hdeg == 0 {
        let singular_locus = EmptinessReport {
            empty: Some(true),
            grade: Grade::Proof,
            rational: RationalRun::NotRun,
            primes: Vec::new(),
            rational_ms: 0,
        };
        return Ok(HessianCurveReport { hessian_degree: 0, singular_locus });
    }
    if h.exact_div(f).is_ok() || f.exact_div(&h).is_ok() {
        return Err(SurfaceError::NotCompleteIntersection);
    }
    let df: Vec<QPoly> = (0..4).map(|i| f.partial_derivative(i)).collect::<Result<_, _>>()?;
    let dh: Vec<QPoly> = (0..4).map(|i| h.partial_derivative(i)).collect::<Result<_, _>>()?;
    let mut gens = ideal.generators().to_vec();
    for i in 0..4 {
        for j in i + 1..4 {
            gens.push(&(&df[i] * &dh[j]) - &(&df[j] * &dh[i]));
        }
    }
    let locus = Ideal::new(Rationals, 4, gens)?;
    Ok(HessianCurveReport { hessian_degree: hdeg, singular_locus: projective_emptiness(&locus, 4, opts)? })
}

/// All `k x k` minors of a symmetric `n x n` matrix, one per unordered pair
/// of index sets.
fn symmetric_minors(m: &[Vec<QPoly>], k: usize, proto: &QPoly) -> Vec<QPoly> {
    let n = m.len();
    let subsets: Vec<Vec<usize>> = (0u32..1 << n)
        .filter(|s| s.count_ones() as usize == k)
        .map(|s| (0..n).filter(|i| s & (1 << i) != 0).collect())
        .collect();
    let mut out = Vec::new();
    for (a, rows) in subsets.iter().enumerate() {
        for cols in &subsets[a..] {
            let sub: Vec<Vec<QPoly>> = rows.iter().map(|&r| cols.iter().map(|&c| m[r][c].clone()).collect()).collect();
            let d = det_laplace(&sub, proto);
            if !d.is_zero() {
                out.push(d);
            }
        }
    }
    out
}

/// True iff the Hessian has rank at most `r` at no point of the surface:
/// `<f> + <(r+1)-minors of Hess f>` has no projective zero.
pub fn hessian_rank_locus_empty(
    s: &ProjectiveSurface,
    r: u32,
    opts: &CheckOptions,
) -> Result<EmptinessReport, SurfaceError> {
    if r > 3 {
        return Err(SurfaceError::InvalidArgument(format!("rank bound {r} exceeds 3")));
    }
    let h = hessian_matrix(s)?;
    let mut gens = vec![s.poly().clone()];
    gens.extend(symmetric_minors(&h, r as usize + 1, s.poly()));
    projective_emptiness(&Ideal::new(Rationals, 4, gens)?, 4, opts)
}
