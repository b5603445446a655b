//! Conditions on the coefficients of a degree `d` surface for its tangent
//! section at a fixed flag to be `A_3` or worse (resp. `A_4` or worse).
//!
//! With the flag `P = (0:0:0:1)`, `L = {x = y = 0}`, `E = {x = 0}`, write
//! `g(y, z) = f(0, y, z, 1) = sum c_ij y^i z^j`. The section is singular at
//! `P` with tangent cone along `L` and an `A_3` or worse point exactly when
//! `g` has order at least 4 for the weights `wt(y) = 2`, `wt(z) = 1`, that is
//! when `c_ij = 0` for `2i + j < 4`. It is then `A_4` or worse when moreover
//! the weight-4 part `c_20 y^2 + c_12 y z^2 + c_04 z^4` is a square.

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::polycore::{Monomial, QPoly, VarNames};

use super::{rank_q, Flag, LinearForm, SurfaceError, XYZW};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IncidenceLevel {
    A3orWorse,
    A4orWorse,
}

/// Exponents of `x, y, z, w`.
pub type Exponents = [u32; 4];

/// `sum coeff * c[m1] * c[m2]` over the listed terms, where `c[m]` is the
/// coefficient of `m` in the surface equation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadraticCondition {
    pub terms: Vec<(i64, Exponents, Exponents)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IncidenceConditions {
    pub degree: u32,
    pub level: IncidenceLevel,
    /// Monomials whose coefficients must vanish.
    pub linear: Vec<Exponents>,
    pub quadratic: Vec<QuadraticCondition>,
    /// Rank of the linear conditions as functionals on the coefficient space.
    pub linear_rank: usize,
    pub codimension: usize,
}

fn monomial(d: u32, i: u32, j: u32) -> Exponents {
    [0, i, j, d - i - j]
}

/// Printable monomial such as `y*z*w^2`.
pub fn monomial_text(e: &Exponents) -> String {
    let m = QPoly::q_from_int_terms(4, &[(&e[..], 1)]);
    m.display_with(&VarNames::new(&XYZW)).to_string()
}

impl QuadraticCondition {
    pub fn to_text(&self) -> String {
        let factor = |e: &Exponents| format!("c[{}]", monomial_text(e));
        let mut out = String::new();
        for (n, (c, a, b)) in self.terms.iter().enumerate() {
            match (n, *c < 0) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            if c.unsigned_abs() != 1 {
                out.push_str(&format!("{}*", c.unsigned_abs()));
            }
            if a == b {
                out.push_str(&format!("{}^2", factor(a)));
            } else {
                out.push_str(&format!("{}*{}", factor(a), factor(b)));
            }
        }
        out
    }

    pub fn evaluate(&self, f: &QPoly) -> BigRational {
        let c = |e: &Exponents| coefficient(f, e);
        self.terms.iter().map(|(k, a, b)| c(a) * c(b) * BigRational::from_integer((*k).into())).sum()
    }
}

fn coefficient(f: &QPoly, e: &Exponents) -> BigRational {
    f.coefficient(&Monomial::from_exponents(e))
}

impl IncidenceConditions {
    /// Whether the equation `f` satisfies all conditions.
    pub fn holds(&self, f: &QPoly) -> bool {
        self.linear.iter().all(|e| coefficient(f, e).is_zero())
            && self.quadratic.iter().all(|q| q.evaluate(f).is_zero())
    }
}

/// The conditions at the standard flag.
pub fn incidence_conditions(d: u32, level: IncidenceLevel) -> Result<IncidenceConditions, SurfaceError> {
    let need = match level {
        IncidenceLevel::A3orWorse => 3,
        IncidenceLevel::A4orWorse => 4,
    };
    if d < need {
        return Err(SurfaceError::DegreeTooLow { need, got: d });
    }
    let mut linear = Vec::new();
    for i in 0..=d {
        for j in 0..=d - i {
            if 2 * i + j < 4 {
                linear.push(monomial(d, i, j));
            }
        }
    }
    let linear_rank = rank_functionals(&linear);
    let quadratic = match level {
        IncidenceLevel::A3orWorse => Vec::new(),
        IncidenceLevel::A4orWorse => {
            let (y2, yz2, z4) = (monomial(d, 2, 0), monomial(d, 1, 2), monomial(d, 0, 4));
            vec![QuadraticCondition { terms: vec![(1, yz2, yz2), (-4, y2, z4)] }]
        }
    };
    let codimension = linear_rank + quadratic.len();
    Ok(IncidenceConditions { degree: d, level, linear, quadratic, linear_rank, codimension })
}

/// The conditions at a flag, which must be the standard one.
pub fn incidence_conditions_at(
    d: u32,
    level: IncidenceLevel,
    flag: &Flag,
) -> Result<IncidenceConditions, SurfaceError> {
    if !flag.is_valid() || !same_flag(flag, &Flag::standard()) {
        return Err(SurfaceError::UnnormalizedFlag);
    }
    incidence_conditions(d, level)
}

fn same_flag(a: &Flag, b: &Flag) -> bool {
    let proportional = |u: &LinearForm, v: &LinearForm| rank_q(vec![u.clone(), v.clone()]) == 1;
    let span_eq = |u: &[LinearForm; 2], v: &[LinearForm; 2]| {
        rank_q(vec![u[0].clone(), u[1].clone(), v[0].clone(), v[1].clone()]) == 2
    };
    proportional(&a.point, &b.point) && span_eq(&a.line, &b.line) && proportional(&a.plane, &b.plane)
}

/// Rank of "coefficient of m" functionals: each is a unit vector in the
/// monomial basis, so the rank is the number of distinct monomials. Computed
/// by elimination anyway to keep the check honest.
fn rank_functionals(monos: &[Exponents]) -> usize {
    let mut distinct: Vec<Exponents> = monos.to_vec();
    distinct.sort();
    distinct.dedup();
    let n = distinct.len();
    let mut rows: Vec<Vec<i64>> = monos.iter().map(|e| distinct.iter().map(|b| i64::from(b == e)).collect()).collect();
    let mut rank = 0;
    for col in 0..n {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else { continue };
        rows.swap(rank, piv);
        for r in 0..rows.len() {
            if r != rank && rows[r][col] != 0 {
                let (a, b) = (rows[rank][col], rows[r][col]);
                for c in 0..n {
                    rows[r][c] = rows[r][c] * a - rows[rank][c] * b;
                }
            }
        }
        rank += 1;
    }
    rank
}
