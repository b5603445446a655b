use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rustc_hash::FxHashMap;

use super::field::{Field, PrimeField, Rationals};
use super::monomial::{Monomial, MAX_VARS};
use super::parse::VarNames;
use super::{CoefficientDomain, PolyError};

/// Sparse multivariate polynomial.
///
/// Terms are kept sorted by strictly decreasing graded reverse lexicographic
/// order with no zero coefficients, so derived equality is semantic equality.
#[derive(Clone, Debug)]
pub struct MultiPoly<K: Field> {
    field: K,
    nvars: usize,
    terms: Vec<(Monomial, K::Elem)>,
}

pub type QPoly = MultiPoly<Rationals>;
pub type FpPoly = MultiPoly<PrimeField>;

impl<K: Field> PartialEq for MultiPoly<K> {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.nvars == other.nvars && self.terms == other.terms
    }
}

impl<K: Field> Eq for MultiPoly<K> {}

impl<K: Field> MultiPoly<K> {
    pub fn zero(field: K, nvars: usize) -> Self {
        assert!(nvars <= MAX_VARS, "at most {MAX_VARS} variables supported");
        MultiPoly { field, nvars, terms: Vec::new() }
    }

    pub fn constant(field: K, nvars: usize, c: K::Elem) -> Self {
        let mut p = Self::zero(field, nvars);
        if !p.field.is_zero(&c) {
            p.terms.push((Monomial::one(), c));
        }
        p
    }

    pub fn one(field: K, nvars: usize) -> Self {
        let c = field.one();
        Self::constant(field, nvars, c)
    }

    pub fn from_int(field: K, nvars: usize, n: i64) -> Self {
        let c = field.from_i64(n);
        Self::constant(field, nvars, c)
    }

    /// The variable `x_index`.
    pub fn var(field: K, nvars: usize, index: usize) -> Self {
        assert!(index < nvars, "variable index out of range");
        let c = field.one();
        MultiPoly { field, nvars, terms: vec![(Monomial::var(index, 1), c)] }
    }

    /// Build from arbitrary terms; duplicates are combined and zeros dropped.
    pub fn from_terms<I>(field: K, nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, K::Elem)>,
    {
        let mut acc: FxHashMap<Monomial, K::Elem> = FxHashMap::default();
        for (m, c) in terms {
            debug_assert!(m.support_len() <= nvars);
            match acc.get_mut(&m) {
                Some(slot) => field.add_assign(slot, &c),
                None => {
                    acc.insert(m, c);
                }
            }
        }
        Self::from_map(field, nvars, acc)
    }

    /// Build from `(exponent vector, integer coefficient)` pairs.
    pub fn from_int_terms(field: K, nvars: usize, terms: &[(&[u32], i64)]) -> Self {
        let ts: Vec<_> = terms
            .iter()
            .map(|(e, c)| {
                assert_eq!(e.len(), nvars);
                (Monomial::from_exponents(e), field.from_i64(*c))
            })
            .collect();
        Self::from_terms(field, nvars, ts)
    }

    fn from_map(field: K, nvars: usize, acc: FxHashMap<Monomial, K::Elem>) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !field.is_zero(c)).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        MultiPoly { field, nvars, terms }
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn domain(&self) -> CoefficientDomain {
        self.field.domain()
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Monomial, K::Elem)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, K::Elem)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.field.is_one(&self.terms[0].1)
    }

    /// Constant term.
    pub fn constant_term(&self) -> K::Elem {
        match self.terms.last() {
            Some((m, c)) if m.is_one() => c.clone(),
            _ => self.field.zero(),
        }
    }

    pub fn coefficient(&self, m: &Monomial) -> K::Elem {
        match self.terms.binary_search_by(|(t, _)| m.cmp(t)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => self.field.zero(),
        }
    }

    pub fn leading_term(&self) -> Option<&(Monomial, K::Elem)> {
        self.terms.first()
    }

    pub fn leading_coefficient(&self) -> Option<&K::Elem> {
        self.terms.first().map(|t| &t.1)
    }

    /// Total degree; `None` for zero.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.first().map(|(m, _)| m.degree())
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.exponent(var)).max().unwrap_or(0)
    }

    /// Indices of variables that actually occur.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&v| self.terms.iter().any(|(m, _)| m.exponent(v) > 0)).collect()
    }

    fn check_compatible(&self, other: &Self) -> Result<(), PolyError> {
        if self.nvars != other.nvars {
            return Err(PolyError::ArityMismatch(self.nvars, other.nvars));
        }
        if self.field != other.field {
            return Err(PolyError::DomainMismatch(self.domain(), other.domain()));
        }
        Ok(())
    }

    fn check_var(&self, var: usize) -> Result<(), PolyError> {
        if var >= self.nvars {
            return Err(PolyError::VarOutOfRange { index: var, arity: self.nvars });
        }
        Ok(())
    }

    fn merge(&self, other: &Self, negate_other: bool) -> Self {
        let f = &self.field;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    let c = if negate_other { f.neg(&b[j].1) } else { b[j].1.clone() };
                    out.push((b[j].0, c));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate_other { f.sub(&a[i].1, &b[j].1) } else { f.add(&a[i].1, &b[j].1) };
                    if !f.is_zero(&c) {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        for t in &b[j..] {
            let c = if negate_other { f.neg(&t.1) } else { t.1.clone() };
            out.push((t.0, c));
        }
        MultiPoly { field: self.field.clone(), nvars: self.nvars, terms: out }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_compatible(other)?;
        Ok(self.merge(other, false))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_compatible(other)?;
        Ok(self.merge(other, true))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_compatible(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.field.clone(), self.nvars);
        }
        let (small, big) = if self.terms.len() <= other.terms.len() { (self, other) } else { (other, self) };
        if small.terms.len() == 1 {
            let (m, c) = &small.terms[0];
            return big.mul_term(m, c);
        }
        let f = &self.field;
        let mut acc: FxHashMap<Monomial, K::Elem> =
            FxHashMap::with_capacity_and_hasher(big.terms.len() * 2, Default::default());
        for (ma, ca) in &small.terms {
            for (mb, cb) in &big.terms {
                let m = ma.mul(mb);
                let c = f.mul(ca, cb);
                match acc.get_mut(&m) {
                    Some(slot) => f.add_assign(slot, &c),
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        Self::from_map(self.field.clone(), self.nvars, acc)
    }

    /// Multiply by the single term `c * m`.
    pub fn mul_term(&self, m: &Monomial, c: &K::Elem) -> Self {
        let f = &self.field;
        if f.is_zero(c) {
            return Self::zero(f.clone(), self.nvars);
        }
        let terms = self.terms.iter().map(|(t, d)| (t.mul(m), f.mul(d, c))).collect();
        MultiPoly { field: f.clone(), nvars: self.nvars, terms }
    }

    pub fn scale(&self, c: &K::Elem) -> Self {
        self.mul_term(&Monomial::one(), c)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.field.clone(), self.nvars);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }

    /// Divide every coefficient by the leading coefficient.
    pub fn monic(&self) -> Self {
        match self.leading_coefficient() {
            None => self.clone(),
            Some(lc) => {
                let inv = self.field.inv(lc).expect("nonzero leading coefficient");
                self.scale(&inv)
            }
        }
    }

    /// Formal partial derivative with respect to `var`.
    pub fn partial_derivative(&self, var: usize) -> Result<Self, PolyError> {
        self.check_var(var)?;
        let f = &self.field;
        let terms = self.terms.iter().filter_map(|(m, c)| {
            let e = m.exponent(var);
            if e == 0 {
                return None;
            }
            Some((m.with_exponent(var, e - 1), f.mul(c, &f.from_i64(e as i64))))
        });
        Ok(Self::from_terms(f.clone(), self.nvars, terms))
    }

    /// Hasse derivative `D^(k)`: maps `x^e` to `binom(e, k) x^(e-k)`. Unlike
    /// the iterated ordinary derivative it stays meaningful in characteristic p.
    pub fn hasse_derivative(&self, var: usize, k: u32) -> Result<Self, PolyError> {
        self.check_var(var)?;
        let f = &self.field;
        let terms = self.terms.iter().filter_map(|(m, c)| {
            let e = m.exponent(var);
            if e < k {
                return None;
            }
            let b = binomial(e as u64, k as u64);
            Some((m.with_exponent(var, e - k), f.mul(c, &f.from_bigint(&b))))
        });
        Ok(Self::from_terms(f.clone(), self.nvars, terms))
    }

    /// Substitute polynomials (in a target ring with `target_nvars`
    /// variables) for some variables. Unassigned variables map to the
    /// variable with the same index in the target ring.
    pub fn substitute(
        &self,
        assignment: &BTreeMap<usize, MultiPoly<K>>,
        target_nvars: usize,
    ) -> Result<Self, PolyError> {
        for (&v, img) in assignment {
            self.check_var(v)?;
            if img.nvars != target_nvars {
                return Err(PolyError::ArityMismatch(img.nvars, target_nvars));
            }
            if img.field != self.field {
                return Err(PolyError::DomainMismatch(img.domain(), self.domain()));
            }
        }
        let mut images = Vec::with_capacity(self.nvars);
        for v in 0..self.nvars {
            match assignment.get(&v) {
                Some(img) => images.push(img.clone()),
                None => {
                    if v >= target_nvars {
                        if self.degree_in(v) == 0 {
                            images.push(Self::zero(self.field.clone(), target_nvars));
                            continue;
                        }
                        return Err(PolyError::VarOutOfRange { index: v, arity: target_nvars });
                    }
                    images.push(Self::var(self.field.clone(), target_nvars, v));
                }
            }
        }
        self.compose(&images)
    }

    /// Replace variable `i` by `images[i]` for every `i`.
    pub fn compose(&self, images: &[MultiPoly<K>]) -> Result<Self, PolyError> {
        if images.len() != self.nvars {
            return Err(PolyError::ArityMismatch(images.len(), self.nvars));
        }
        let target = images.first().map_or(self.nvars, |p| p.nvars);
        for img in images {
            if img.nvars != target {
                return Err(PolyError::ArityMismatch(img.nvars, target));
            }
            if img.field != self.field {
                return Err(PolyError::DomainMismatch(img.domain(), self.domain()));
            }
        }
        // cache powers of each image
        let mut powers: Vec<Vec<MultiPoly<K>>> =
            images.iter().map(|img| vec![Self::one(self.field.clone(), target), img.clone()]).collect();
        let mut result = Self::zero(self.field.clone(), target);
        let mut parts = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut term = Self::constant(self.field.clone(), target, c.clone());
            for v in 0..self.nvars {
                let e = m.exponent(v) as usize;
                if e == 0 {
                    continue;
                }
                while powers[v].len() <= e {
                    let next = powers[v].last().unwrap().mul_unchecked(&images[v]);
                    powers[v].push(next);
                }
                term = term.mul_unchecked(&powers[v][e]);
            }
            parts.push(term);
        }
        // pairwise summation keeps intermediate merges balanced
        while parts.len() > 1 {
            let mut next = Vec::with_capacity(parts.len() / 2 + 1);
            let mut it = parts.into_iter();
            while let Some(a) = it.next() {
                match it.next() {
                    Some(b) => next.push(a.merge(&b, false)),
                    None => next.push(a),
                }
            }
            parts = next;
        }
        if let Some(p) = parts.pop() {
            result = p;
        }
        Ok(result)
    }

    /// Set variable `var` to the constant `value`, keeping the arity.
    pub fn specialize(&self, var: usize, value: &K::Elem) -> Result<Self, PolyError> {
        self.check_var(var)?;
        let f = &self.field;
        let terms = self.terms.iter().map(|(m, c)| {
            let e = m.exponent(var);
            (m.with_exponent(var, 0), f.mul(c, &f.pow(value, e as u64)))
        });
        Ok(Self::from_terms(f.clone(), self.nvars, terms))
    }

    /// Evaluate at a point.
    pub fn evaluate(&self, point: &[K::Elem]) -> Result<K::Elem, PolyError> {
        if point.len() != self.nvars {
            return Err(PolyError::ArityMismatch(point.len(), self.nvars));
        }
        let f = &self.field;
        let mut acc = f.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, x) in point.iter().enumerate() {
                let e = m.exponent(v);
                if e > 0 {
                    t = f.mul(&t, &f.pow(x, e as u64));
                }
            }
            f.add_assign(&mut acc, &t);
        }
        Ok(acc)
    }

    /// Multiplicity at the origin and the lowest-degree homogeneous part.
    pub fn lowest_part(&self) -> Result<(u32, Self), PolyError> {
        let last = self.terms.last().ok_or(PolyError::ZeroPolynomial)?;
        let m = last.0.degree();
        let terms: Vec<_> = self.terms.iter().filter(|(t, _)| t.degree() == m).cloned().collect();
        Ok((m, MultiPoly { field: self.field.clone(), nvars: self.nvars, terms }))
    }

    /// Order at the origin (`None` for zero).
    pub fn order(&self) -> Option<u32> {
        self.terms.last().map(|t| t.0.degree())
    }

    /// The homogeneous component of degree `deg`.
    pub fn homogeneous_part(&self, deg: u32) -> Self {
        let terms = self.terms.iter().filter(|(m, _)| m.degree() == deg).cloned().collect();
        MultiPoly { field: self.field.clone(), nvars: self.nvars, terms }
    }

    /// Drop all terms of total degree above `deg`.
    pub fn truncate(&self, deg: u32) -> Self {
        let terms = self.terms.iter().filter(|(m, _)| m.degree() <= deg).cloned().collect();
        MultiPoly { field: self.field.clone(), nvars: self.nvars, terms }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.check_homogeneous().is_ok()
    }

    /// `Ok(degree)` or an error naming two monomials of different degree.
    pub fn check_homogeneous(&self) -> Result<Option<u32>, PolyError> {
        let Some(first) = self.terms.first() else {
            return Ok(None);
        };
        let d = first.0.degree();
        if let Some(other) = self.terms.iter().find(|(m, _)| m.degree() != d) {
            let names = VarNames::default_for(self.nvars);
            return Err(PolyError::NotHomogeneous {
                first: names.monomial(&first.0),
                second: names.monomial(&other.0),
            });
        }
        Ok(Some(d))
    }

    /// Coefficients as a polynomial in `var`: entry `i` multiplies `var^i`.
    /// The returned polynomials do not involve `var`.
    pub fn coefficients_in(&self, var: usize) -> Result<Vec<Self>, PolyError> {
        self.check_var(var)?;
        let deg = self.degree_in(var) as usize;
        let mut buckets: Vec<Vec<(Monomial, K::Elem)>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            let e = m.exponent(var) as usize;
            buckets[e].push((m.with_exponent(var, 0), c.clone()));
        }
        Ok(buckets.into_iter().map(|ts| Self::from_terms(self.field.clone(), self.nvars, ts)).collect())
    }

    /// Inverse of [`coefficients_in`](Self::coefficients_in).
    pub fn from_coefficients_in(field: K, nvars: usize, var: usize, coeffs: &[Self]) -> Self {
        let mut terms = Vec::new();
        for (i, c) in coeffs.iter().enumerate() {
            let shift = Monomial::var(var, i as u32);
            for (m, a) in &c.terms {
                terms.push((m.mul(&shift), a.clone()));
            }
        }
        Self::from_terms(field, nvars, terms)
    }

    /// Reinterpret in a ring with more (or equally many) variables.
    pub fn extend_vars(&self, nvars: usize) -> Result<Self, PolyError> {
        if nvars > MAX_VARS {
            return Err(PolyError::TooManyVars(nvars));
        }
        if nvars < self.nvars && self.terms.iter().any(|(m, _)| m.support_len() > nvars) {
            return Err(PolyError::ArityMismatch(self.nvars, nvars));
        }
        Ok(MultiPoly { field: self.field.clone(), nvars, terms: self.terms.clone() })
    }

    /// Rename variables: variable `i` becomes variable `perm[i]` of a ring with
    /// `nvars` variables.
    pub fn rename_vars(&self, perm: &[usize], nvars: usize) -> Result<Self, PolyError> {
        if perm.len() != self.nvars {
            return Err(PolyError::ArityMismatch(perm.len(), self.nvars));
        }
        if nvars > MAX_VARS {
            return Err(PolyError::TooManyVars(nvars));
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut e = [0u32; MAX_VARS];
            for (i, &target) in perm.iter().enumerate() {
                let x = m.exponent(i);
                if x > 0 {
                    if target >= nvars {
                        return Err(PolyError::VarOutOfRange { index: target, arity: nvars });
                    }
                    e[target] += x;
                }
            }
            terms.push((Monomial::from_exponents(&e), c.clone()));
        }
        Ok(Self::from_terms(self.field.clone(), nvars, terms))
    }

    pub fn map_coefficients<L: Field>(
        &self,
        target: L,
        f: impl Fn(&K::Elem) -> Result<L::Elem, PolyError>,
    ) -> Result<MultiPoly<L>, PolyError> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            terms.push((*m, f(c)?));
        }
        Ok(MultiPoly::from_terms(target, self.nvars, terms))
    }

    /// Exact division; fails when `divisor` does not divide `self`.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self, PolyError> {
        self.check_compatible(divisor)?;
        let f = &self.field;
        let (lm, lc) = divisor.terms.first().ok_or(PolyError::NotDivisible)?;
        let lc_inv = f.inv(lc).expect("nonzero leading coefficient");
        if divisor.terms.len() == 1 {
            let mut terms = Vec::with_capacity(self.terms.len());
            for (m, c) in &self.terms {
                let q = lm.divide_into(m).ok_or(PolyError::NotDivisible)?;
                terms.push((q, f.mul(c, &lc_inv)));
            }
            return Ok(MultiPoly { field: f.clone(), nvars: self.nvars, terms });
        }
        // remainder kept in an ordered map keyed by grevlex order
        let mut rem: BTreeMap<u128, K::Elem> = self.terms.iter().map(|(m, c)| (m.grevlex_key(), c.clone())).collect();
        let mut quotient = Vec::new();
        while let Some((key, c)) = rem.pop_last() {
            let m = Monomial::from_grevlex_key(key);
            let q = lm.divide_into(&m).ok_or(PolyError::NotDivisible)?;
            let qc = f.mul(&c, &lc_inv);
            for (dm, dc) in &divisor.terms[1..] {
                let k = q.mul(dm).grevlex_key();
                let delta = f.mul(&qc, dc);
                match rem.get_mut(&k) {
                    Some(slot) => {
                        *slot = f.sub(slot, &delta);
                        if f.is_zero(slot) {
                            rem.remove(&k);
                        }
                    }
                    None => {
                        if k > key {
                            return Err(PolyError::NotDivisible);
                        }
                        rem.insert(k, f.neg(&delta));
                    }
                }
            }
            quotient.push((q, qc));
        }
        Ok(MultiPoly { field: f.clone(), nvars: self.nvars, terms: quotient })
    }

    /// Printable form using the given variable names.
    pub fn display_with<'a>(&'a self, names: &'a VarNames) -> DisplayPoly<'a, K> {
        DisplayPoly { poly: self, names }
    }
}

impl MultiPoly<Rationals> {
    /// Convenience constructor for integer-coefficient polynomials.
    pub fn q_from_int_terms(nvars: usize, terms: &[(&[u32], i64)]) -> Self {
        Self::from_int_terms(Rationals, nvars, terms)
    }

    /// Multiply by the least common multiple of the denominators and divide by
    /// the content, giving a primitive integer polynomial with positive
    /// leading coefficient.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut lcm = BigInt::one();
        for (_, c) in &self.terms {
            lcm = num_integer::Integer::lcm(&lcm, c.denom());
        }
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            let n = c.numer() * (&lcm / c.denom());
            g = num_integer::Integer::gcd(&g, &n);
        }
        if self.terms[0].1.is_negative() {
            g = -g;
        }
        let factor = BigRational::new(lcm, g);
        self.scale(&factor)
    }
}

/// Coefficient-wise reduction of a rational polynomial modulo `p`.
pub fn reduce_mod_p(f: &QPoly, p: u64) -> Result<FpPoly, PolyError> {
    let field = PrimeField::new(p)?;
    f.map_coefficients(field, |c| field.from_rational(c))
}

pub(crate) fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub struct DisplayPoly<'a, K: Field> {
    poly: &'a MultiPoly<K>,
    names: &'a VarNames,
}

impl<K: Field> fmt::Display for DisplayPoly<'_, K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.poly;
        if p.is_zero() {
            return write!(f, "0");
        }
        let field = p.field();
        for (i, (m, c)) in p.terms.iter().enumerate() {
            let neg = field.is_negative(c);
            let abs = if neg { field.neg(c) } else { c.clone() };
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let coeff = field.format(&abs);
            if m.is_one() {
                write!(f, "{coeff}")?;
            } else if field.is_one(&abs) {
                write!(f, "{}", self.names.monomial(m))?;
            } else {
                write!(f, "{coeff}*{}", self.names.monomial(m))?;
            }
        }
        Ok(())
    }
}

impl<K: Field> fmt::Display for MultiPoly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = VarNames::default_for(self.nvars);
        write!(f, "{}", self.display_with(&names))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl<K: Field> $tr<&MultiPoly<K>> for &MultiPoly<K> {
            type Output = MultiPoly<K>;
            fn $method(self, rhs: &MultiPoly<K>) -> MultiPoly<K> {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl<K: Field> $tr<MultiPoly<K>> for MultiPoly<K> {
            type Output = MultiPoly<K>;
            fn $method(self, rhs: MultiPoly<K>) -> MultiPoly<K> {
                (&self).$method(&rhs)
            }
        }
        impl<K: Field> $tr<&MultiPoly<K>> for MultiPoly<K> {
            type Output = MultiPoly<K>;
            fn $method(self, rhs: &MultiPoly<K>) -> MultiPoly<K> {
                (&self).$method(rhs)
            }
        }
        impl<K: Field> $tr<MultiPoly<K>> for &MultiPoly<K> {
            type Output = MultiPoly<K>;
            fn $method(self, rhs: MultiPoly<K>) -> MultiPoly<K> {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl<K: Field> Neg for &MultiPoly<K> {
    type Output = MultiPoly<K>;
    fn neg(self) -> MultiPoly<K> {
        let f = &self.field;
        let terms = self.terms.iter().map(|(m, c)| (*m, f.neg(c))).collect();
        MultiPoly { field: f.clone(), nvars: self.nvars, terms }
    }
}

impl<K: Field> Neg for MultiPoly<K> {
    type Output = MultiPoly<K>;
    fn neg(self) -> MultiPoly<K> {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::parse_poly;

    fn q(s: &str) -> QPoly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(q("x+y") + q("x-y"), q("2*x + 0*y"));
        assert_eq!(q("(x+y)*(x-y)"), q("x^2-y^2"));
        assert_eq!(&q("0*x*y") * &q("x^3+y+7"), QPoly::zero(Rationals, 2));
    }

    #[test]
    fn arity_mismatch_is_reported() {
        let a = QPoly::var(Rationals, 2, 0);
        let b = QPoly::var(Rationals, 3, 0);
        assert_eq!(a.checked_add(&b), Err(PolyError::ArityMismatch(2, 3)));
        let fp = reduce_mod_p(&a, 5).unwrap();
        let fq = reduce_mod_p(&a, 7).unwrap();
        assert!(matches!(fp.checked_mul(&fq), Err(PolyError::DomainMismatch(..))));
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(q("x^2*y").partial_derivative(0).unwrap(), q("2*x*y"));
        assert_eq!(q("x^2 + 0*y").partial_derivative(1).unwrap(), QPoly::zero(Rationals, 2));
        let f = q("z^4 + z^2*w^2 + 0*x*y");
        assert_eq!(f.partial_derivative(2).unwrap(), q("4*z^3 + 2*z*w^2 + 0*x*y"));
        assert!(matches!(f.partial_derivative(4), Err(PolyError::VarOutOfRange { .. })));
    }

    #[test]
    fn hasse_derivative_matches_scaled_derivative() {
        let f = q("x^5*y + 3*x^2 - x");
        let d2 = f.partial_derivative(0).unwrap().partial_derivative(0).unwrap();
        let h2 = f.hasse_derivative(0, 2).unwrap();
        assert_eq!(h2.scale(&BigRational::from_integer(2.into())), d2);
    }

    #[test]
    fn substitution_examples() {
        // f = xw + yz in ring (x,y,z,w); w -> ax+by+cz in ring (a,b,c,x,y,z)
        let names = VarNames::new(&["a", "b", "c", "x", "y", "z"]);
        let f = q("x*w + y*z");
        let ring6 = |s: &str| crate::polycore::parse_poly_in(s, &names).unwrap();
        let images = vec![ring6("x"), ring6("y"), ring6("z"), ring6("a*x+b*y+c*z")];
        let g = f.compose(&images).unwrap();
        assert_eq!(g, ring6("a*x^2 + b*x*y + c*x*z + y*z"));

        let f = q("x^4 + w^4 + 0*y*z");
        let one = BigRational::one();
        assert_eq!(f.specialize(3, &one).unwrap(), q("x^4 + 1 + 0*y*z*w"));

        let cusp = q("y^2 - x^3");
        let mut asg = BTreeMap::new();
        asg.insert(1, q("x*y"));
        assert_eq!(cusp.substitute(&asg, 2).unwrap(), q("x^2*y^2 - x^3"));
    }

    #[test]
    fn lowest_part_examples() {
        assert_eq!(q("y^2 + x^3").lowest_part().unwrap(), (2, q("y^2 + 0*x")));
        assert_eq!(q("x + x^2*y").lowest_part().unwrap(), (1, q("x + 0*y")));
        let names = VarNames::new(&["y", "z"]);
        let g = crate::polycore::parse_poly_in("(y-z)^4 - (-y*z)^4", &names).unwrap();
        let h = crate::polycore::parse_poly_in("(y-z)^4", &names).unwrap();
        assert_eq!(g.lowest_part().unwrap(), (4, h));
        assert_eq!(QPoly::zero(Rationals, 2).lowest_part(), Err(PolyError::ZeroPolynomial));
    }

    #[test]
    fn reduction_examples() {
        let r = reduce_mod_p(&q("7*x + 3"), 5).unwrap();
        let f5 = PrimeField::new(5).unwrap();
        assert_eq!(r, FpPoly::from_int_terms(f5, 1, &[(&[1], 2), (&[0], 3)]));
        let r = reduce_mod_p(&q("1/2*x"), 3).unwrap();
        let f3 = PrimeField::new(3).unwrap();
        assert_eq!(r, FpPoly::from_int_terms(f3, 1, &[(&[1], 2)]));
        assert!(matches!(reduce_mod_p(&q("1/3*x"), 3), Err(PolyError::BadReduction { prime: 3, .. })));
    }

    #[test]
    fn exact_division() {
        let a = q("x^3*y + 2*x*y^2 - y^3 + x - 4");
        let b = q("x^2 - y*x + 3");
        let prod = &a * &b;
        assert_eq!(prod.exact_div(&b).unwrap(), a);
        assert_eq!(prod.exact_div(&a).unwrap(), b);
        assert_eq!(q("x^2 + 1 + 0*y").exact_div(&q("x + 0*y")), Err(PolyError::NotDivisible));
    }

    #[test]
    fn primitive_part_normalizes() {
        assert_eq!(q("-2/3*x + 4/9*y").primitive_part(), q("3*x - 2*y"));
    }

    #[test]
    fn display_round_trip() {
        let f = q("3*x^2*y - 1/2*z + 7");
        let s = f.to_string();
        assert_eq!(q(&s), f);
    }
}
