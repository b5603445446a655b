//! Zero-dimensional systems: minimal polynomials, counting distinct zeros and
//! enumerating rational zeros.

use std::collections::BTreeMap;

use num_rational::BigRational;

use crate::polycore::univariate::{degree, rational_roots, squarefree_part, Dense};
use crate::polycore::{Field, Monomial, MultiPoly, Rationals};

use super::{groebner_basis, Budget, GroebnerBasis, GroebnerError, Ideal};

/// Rational zeros of a zero-dimensional ideal.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalPoints {
    /// Sorted, without repetition.
    pub points: Vec<Vec<BigRational>>,
    /// Some zero over the closure has a non-rational coordinate.
    pub irrational: bool,
}

/// Minimal polynomial of `x_var` on the quotient ring, ascending
/// coefficients, monic. The basis must be zero-dimensional and not the unit
/// ideal.
pub fn minimal_polynomial<K: Field>(gb: &GroebnerBasis<K>, var: usize) -> Result<Vec<K::Elem>, GroebnerError> {
    if gb.is_unit() {
        return Err(GroebnerError::UnitIdeal);
    }
    if !gb.is_zero_dimensional() {
        return Err(GroebnerError::PositiveDimensional);
    }
    let ideal = gb.ideal();
    let (k, n) = (ideal.field().clone(), ideal.nvars());
    let order = ideal.order();
    let x = MultiPoly::var(k.clone(), n, var);
    // echelon rows: pivot key -> (row, combination of powers)
    type Row<E> = (BTreeMap<u128, E>, Vec<E>);
    let mut rows: BTreeMap<u128, Row<K::Elem>> = BTreeMap::new();
    let mut power = gb.normal_form(&MultiPoly::one(k.clone(), n))?;
    for deg in 0.. {
        let mut r: BTreeMap<u128, K::Elem> =
            power.terms().iter().map(|(m, c)| (m.order_key(order), c.clone())).collect();
        let mut comb = vec![k.zero(); deg + 1];
        comb[deg] = k.one();
        let mut cursor = None;
        loop {
            let next = match cursor {
                None => r.keys().next_back().copied(),
                Some(c) => r.range(..c).next_back().map(|(key, _)| *key),
            };
            let Some(key) = next else { break };
            cursor = Some(key);
            let Some((row, rc)) = rows.get(&key) else { continue };
            let factor = k.div(&r[&key], &row[&key]).expect("pivot is nonzero");
            for (mk, c) in row {
                let e = r.entry(*mk).or_insert_with(|| k.zero());
                *e = k.sub(e, &k.mul(&factor, c));
                if k.is_zero(e) {
                    r.remove(mk);
                }
            }
            for (i, c) in rc.iter().enumerate() {
                comb[i] = k.sub(&comb[i], &k.mul(&factor, c));
            }
        }
        match r.keys().next_back().copied() {
            None => return Ok(comb),
            Some(pivot) => {
                rows.insert(pivot, (r, comb));
            }
        }
        power = gb.normal_form(&(&power * &x))?;
    }
    unreachable!()
}

fn univariate(var: usize, nvars: usize, coeffs: &Dense) -> MultiPoly<Rationals> {
    MultiPoly::from_terms(
        Rationals,
        nvars,
        coeffs.iter().enumerate().map(|(i, c)| (Monomial::var(var, i as u32), c.clone())).collect::<Vec<_>>(),
    )
}

/// The radical of a zero-dimensional ideal over the rationals: adjoin the
/// square-free part of every variable's minimal polynomial.
pub fn zero_dim_radical(ideal: &Ideal<Rationals>, budget: &Budget) -> Result<GroebnerBasis<Rationals>, GroebnerError> {
    let gb = groebner_basis(ideal, budget)?;
    if gb.is_unit() {
        return Ok(gb);
    }
    let mut extended = ideal.clone();
    let mut changed = false;
    for v in 0..ideal.nvars() {
        let m = minimal_polynomial(&gb, v)?;
        let s = squarefree_part(&m);
        if degree(&s) < degree(&m) {
            changed = true;
        }
        extended = extended.with_generator(univariate(v, ideal.nvars(), &s))?;
    }
    if !changed {
        return Ok(gb);
    }
    groebner_basis(&extended, budget)
}

/// Number of zeros over the closure, without multiplicity.
pub fn count_distinct_zeros(ideal: &Ideal<Rationals>, budget: &Budget) -> Result<u64, GroebnerError> {
    let gb = zero_dim_radical(ideal, budget)?;
    gb.quotient_dimension().ok_or(GroebnerError::PositiveDimensional)
}

/// All rational zeros of a zero-dimensional ideal, by fixing one coordinate
/// at a time to a rational root of its minimal polynomial.
pub fn rational_points(ideal: &Ideal<Rationals>, budget: &Budget) -> Result<RationalPoints, GroebnerError> {
    let mut out = RationalPoints { points: Vec::new(), irrational: false };
    let mut fixed = vec![None; ideal.nvars()];
    descend(ideal, budget, &mut fixed, &mut out)?;
    out.points.sort();
    out.points.dedup();
    Ok(out)
}

fn descend(
    ideal: &Ideal<Rationals>,
    budget: &Budget,
    fixed: &mut Vec<Option<BigRational>>,
    out: &mut RationalPoints,
) -> Result<(), GroebnerError> {
    let gb = groebner_basis(ideal, budget)?;
    if gb.is_unit() {
        return Ok(());
    }
    if !gb.is_zero_dimensional() {
        return Err(GroebnerError::PositiveDimensional);
    }
    let Some(v) = fixed.iter().position(|x| x.is_none()) else {
        out.points.push(fixed.iter().map(|x| x.clone().expect("fixed")).collect());
        return Ok(());
    };
    let m = minimal_polynomial(&gb, v)?;
    let split = rational_roots(&m);
    if split.rest.len() > 1 {
        out.irrational = true;
    }
    let n = ideal.nvars();
    for (r, _) in split.roots {
        let line = &MultiPoly::var(Rationals, n, v) - &MultiPoly::constant(Rationals, n, r.clone());
        let next = ideal.clone().with_generator(line)?;
        fixed[v] = Some(r);
        descend(&next, budget, fixed, out)?;
        fixed[v] = None;
    }
    Ok(())
}
