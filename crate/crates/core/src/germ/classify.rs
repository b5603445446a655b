//! A_m classification of double points.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::{CurveGerm, GermError};
use crate::elimination::discriminant;
use crate::polycore::univariate::{series_inv, series_mul};
use crate::polycore::{CoefficientDomain, Field, Monomial, MultiPoly};

/// Singularity type of a reduced germ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "m")]
pub enum AClass {
    Smooth,
    /// `A_m`, analytically `y^2 = x^(m+1)`.
    A(u32),
    /// A double point of type `A_m` with `m` beyond the requested bound.
    Above(u32),
    MultiplicityAtLeast3,
}

/// `min(1, 1/2 + 1/(m+1))`, the threshold of an `A_m` point.
pub fn a_class_lct(m: u32) -> BigRational {
    let v = BigRational::new(1.into(), 2.into()) + BigRational::new(1.into(), BigInt::from(m + 1));
    v.min(BigRational::one())
}

/// Classify a germ up to `A_(m_max)`.
///
/// For a double point the quadratic part is first made to contain `y^2`.
/// The root `y = phi(x)` of `dF/dy = 0` is then found as a power series, and
/// `F(x, phi(x))` vanishes to order `m + 1` exactly for an `A_m` point.
pub fn classify_a(g: &CurveGerm, m_max: u32) -> Result<AClass, GermError> {
    classify_a_poly(&g.poly(), m_max)
}

/// [`classify_a`] for a reduced polynomial in two variables over any field.
/// Prime fields must have characteristic above `m_max + 2`.
pub fn classify_a_poly<K: Field>(f: &MultiPoly<K>, m_max: u32) -> Result<AClass, GermError> {
    if f.nvars() != 2 {
        return Err(GermError::Arity(f.nvars()));
    }
    if let CoefficientDomain::PrimeField(p) = f.domain() {
        if p <= u64::from(m_max) + 2 {
            return Err(GermError::Characteristic(p));
        }
    }
    let r = f.order().ok_or(GermError::Zero)?;
    match r {
        0 => return Err(GermError::NotThroughOrigin),
        1 => return Ok(AClass::Smooth),
        2 => {}
        _ => return Ok(AClass::MultiplicityAtLeast3),
    }
    let k = f.field().clone();
    let f = normalize_quadratic(f)?;
    let n = (m_max + 2) as usize;
    let jet = f.truncate(2 * (m_max + 2));
    // F = sum_j c_j(x) y^j with c_j truncated at x^n
    let ydeg = jet.degree_in(1) as usize;
    let mut c: Vec<Vec<K::Elem>> = vec![vec![k.zero(); n]; ydeg + 1];
    for (m, a) in jet.terms() {
        let (i, j) = (m.exponent(0) as usize, m.exponent(1) as usize);
        if i < n {
            c[j][i] = a.clone();
        }
    }
    let horner = |coeffs: &[Vec<K::Elem>], phi: &[K::Elem]| -> Vec<K::Elem> {
        let mut acc = vec![k.zero(); n];
        for cj in coeffs.iter().rev() {
            acc = series_mul(&k, &acc, phi, n);
            for (a, b) in acc.iter_mut().zip(cj) {
                k.add_assign(a, b);
            }
        }
        acc
    };
    let scaled = |d: usize| -> Vec<Vec<K::Elem>> {
        // coefficients of the d-th y-derivative
        (d..=ydeg)
            .map(|j| {
                let f: i64 = (j - d + 1..=j).map(|t| t as i64).product();
                let s = k.from_i64(f);
                c[j].iter().map(|a| k.mul(a, &s)).collect()
            })
            .collect()
    };
    let (d1, d2) = (scaled(1), scaled(2));
    let mut phi = vec![k.zero(); n];
    for _ in 0..64 {
        let num = horner(&d1, &phi);
        if num.iter().all(|a| k.is_zero(a)) {
            break;
        }
        let den = horner(&d2, &phi);
        let inv = series_inv(&k, &den, n).expect("y^2 coefficient is a unit");
        let step = series_mul(&k, &num, &inv, n);
        for (p, s) in phi.iter_mut().zip(&step) {
            *p = k.sub(p, s);
        }
    }
    let h = horner(&c, &phi);
    match h.iter().position(|a| !k.is_zero(a)) {
        Some(i) => Ok(AClass::A(i as u32 - 1)),
        None => {
            if f.degree_in(1) >= 2 && discriminant(&f, 1)?.is_zero() {
                return Err(GermError::NonReduced);
            }
            Ok(AClass::Above(m_max))
        }
    }
}

/// Linear change of coordinates making the `y^2` coefficient nonzero.
fn normalize_quadratic<K: Field>(f: &MultiPoly<K>) -> Result<MultiPoly<K>, GermError> {
    let k = f.field();
    if !k.is_zero(&f.coefficient(&Monomial::var(1, 2))) {
        return Ok(f.clone());
    }
    if !k.is_zero(&f.coefficient(&Monomial::var(0, 2))) {
        return Ok(f.rename_vars(&[1, 0], 2)?);
    }
    // only x*y: shear x -> x + y
    let x = MultiPoly::var(k.clone(), 2, 0);
    let y = MultiPoly::var(k.clone(), 2, 1);
    Ok(f.compose(&[&x + &y, y])?)
}
