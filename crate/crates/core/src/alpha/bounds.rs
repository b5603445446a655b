//! Upper bounds on `alpha(S, H)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::polycore::{QPoly, Rationals};
use crate::surface::{ProjectiveSurface, StarPointScan};

use super::{family_surface, is_family_surface, lct_of_poly, ratio_text, Alpha1, AlphaError};

/// Denominator used to pick a rational `m` just below `sqrt(d)`.
pub const DEFAULT_SQRT_K: u64 = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Provenance {
    /// `alpha <= 2/m` for rational `m < sqrt(d)`, by Riemann-Roch.
    SqrtBound,
    /// `alpha <= alpha_2 <= 3/d` for the family, from a divisor in `|2H|`.
    Alpha2Family,
    /// `alpha = 2/d` at a star point.
    StarPoint,
    /// `alpha <= alpha_1`.
    SectionLct,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UpperBound {
    #[serde(with = "ratio_text")]
    pub value: BigRational,
    pub provenance: Provenance,
    pub detail: String,
}

/// `2/m` for the largest `m = k/K < sqrt(d)`, capped at 1.
pub fn sqrt_bound(d: u32, k_den: u64) -> Result<UpperBound, AlphaError> {
    if d == 0 || k_den == 0 {
        return Err(AlphaError::InvalidArgument("degree and K must be positive".into()));
    }
    // largest k with k^2 < d K^2
    let k = (BigInt::from(d) * BigInt::from(k_den) * BigInt::from(k_den) - 1u32).sqrt();
    if k.is_zero() {
        return Err(AlphaError::InvalidArgument(format!("no positive m = k/{k_den} below sqrt({d})")));
    }
    let m = BigRational::new(k, BigInt::from(k_den));
    let raw = BigRational::from_integer(2.into()) / &m;
    let value = raw.clone().min(BigRational::one());
    let mut detail = format!("m = {} < sqrt({d})", ratio_text::to_text(&m));
    if value != raw {
        detail.push_str(", capped at 1");
    }
    Ok(UpperBound { value, provenance: Provenance::SqrtBound, detail })
}

/// `f(-yz, y, z, 1)`: the divisor `{xw + yz = 0}` on the family surface near
/// `(0:0:0:1)`, in the local coordinates `(y, z)`.
pub fn family_local_form(d: u32) -> Result<QPoly, AlphaError> {
    let s = family_surface(d)?;
    let v = |i| QPoly::var(Rationals, 2, i);
    let images = [-(&v(0) * &v(1)), v(0), v(1), QPoly::one(Rationals, 2)];
    Ok(s.poly().compose(&images)?)
}

fn alpha2_family(s: &ProjectiveSurface) -> Result<Option<UpperBound>, AlphaError> {
    let d = s.degree();
    if d < 3 || !is_family_surface(s) {
        return Ok(None);
    }
    let lct = lct_of_poly(family_local_form(d)?)?;
    // the divisor is cut by a quadric, so it lies in |2H|
    let value = lct * BigRational::from_integer(2.into());
    let detail = format!("lct of xw + yz = 0 at (0:0:0:1) is {}", ratio_text::to_text(&(&value / BigInt::from(2))));
    Ok(Some(UpperBound { value, provenance: Provenance::Alpha2Family, detail }))
}

/// All upper bounds that apply to `s`, sorted by value then provenance.
pub fn alpha_upper_bounds(
    s: &ProjectiveSurface,
    alpha1: &Alpha1,
    star: Option<&StarPointScan>,
    k_den: u64,
) -> Result<Vec<UpperBound>, AlphaError> {
    let d = s.degree();
    let mut out = vec![sqrt_bound(d, k_den)?];
    out.extend(alpha2_family(s)?);
    if let Some(scan) = star {
        if !scan.points.is_empty() || scan.irrational || scan.positive_dimensional {
            let value = BigRational::new(2.into(), BigInt::from(d)).min(BigRational::one());
            let at = scan.points.first().map_or_else(|| "a non-rational point".to_string(), |p| p.to_string());
            out.push(UpperBound { value, provenance: Provenance::StarPoint, detail: format!("star point {at}") });
        }
    }
    out.push(UpperBound {
        value: alpha1.upper().clone(),
        provenance: Provenance::SectionLct,
        detail: "alpha <= alpha_1".into(),
    });
    out.sort_by(|a, b| a.value.cmp(&b.value).then(a.provenance.cmp(&b.provenance)));
    Ok(out)
}
