//! Packed exponent vectors.
//!
//! A monomial is a `u128` split into eight 16-bit lanes: lanes 0..7 hold the
//! exponents of variables 0..6, lane 7 caches the total degree. Each lane keeps
//! its top bit clear so that divisibility can be tested with one subtraction.

use std::cmp::Ordering;

/// Maximum number of variables a polynomial ring may have.
pub const MAX_VARS: usize = 7;
/// Largest exponent (and total degree) representable in a lane.
pub const MAX_EXPONENT: u32 = 0x7fff;

const LANE_BITS: u32 = 16;
const LANE_MASK: u128 = 0xffff;
const GUARD: u128 = 0x8000_8000_8000_8000_8000_8000_8000_8000;
const DEG_SHIFT: u32 = LANE_BITS * 7;
const VARS_MASK: u128 = (1u128 << DEG_SHIFT) - 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial(u128);

/// Term orders used by the Gröbner engine. Canonical polynomial storage is
/// always graded reverse lexicographic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum MonomialOrder {
    #[default]
    GrevLex,
    Lex,
}

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn one() -> Self {
        Monomial(0)
    }

    /// Panics if there are more than [`MAX_VARS`] entries or an exponent is
    /// out of range.
    pub fn from_exponents(exps: &[u32]) -> Self {
        assert!(exps.len() <= MAX_VARS, "at most {MAX_VARS} variables supported");
        let mut packed = 0u128;
        let mut deg = 0u32;
        for (i, &e) in exps.iter().enumerate() {
            assert!(e <= MAX_EXPONENT, "exponent {e} out of range");
            packed |= (e as u128) << (LANE_BITS * i as u32);
            deg += e;
        }
        assert!(deg <= MAX_EXPONENT, "total degree {deg} out of range");
        Monomial(packed | ((deg as u128) << DEG_SHIFT))
    }

    /// `x_var^exp`.
    pub fn var(var: usize, exp: u32) -> Self {
        let mut e = [0u32; MAX_VARS];
        e[var] = exp;
        Self::from_exponents(&e)
    }

    #[inline]
    pub fn exponent(&self, var: usize) -> u32 {
        ((self.0 >> (LANE_BITS * var as u32)) & LANE_MASK) as u32
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        (self.0 >> DEG_SHIFT) as u32
    }

    pub fn exponents(&self, nvars: usize) -> Vec<u32> {
        (0..nvars).map(|i| self.exponent(i)).collect()
    }

    pub fn is_one(&self) -> bool {
        self.0 == 0
    }

    /// Highest variable index with a nonzero exponent, if any.
    pub fn support_len(&self) -> usize {
        (0..MAX_VARS).rev().find(|&i| self.exponent(i) > 0).map_or(0, |i| i + 1)
    }

    #[inline]
    pub fn mul(&self, other: &Monomial) -> Monomial {
        let s = self.0 + other.0;
        assert!(s & GUARD == 0, "monomial exponent overflow");
        Monomial(s)
    }

    #[inline]
    pub fn divides(&self, other: &Monomial) -> bool {
        ((other.0 | GUARD) - self.0) & GUARD == GUARD
    }

    /// `other / self` if `self` divides `other`.
    #[inline]
    pub fn divide_into(&self, other: &Monomial) -> Option<Monomial> {
        if self.divides(other) {
            Some(Monomial(other.0 - self.0))
        } else {
            None
        }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut e = [0u32; MAX_VARS];
        for (i, slot) in e.iter_mut().enumerate() {
            *slot = self.exponent(i).max(other.exponent(i));
        }
        Monomial::from_exponents(&e)
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut e = [0u32; MAX_VARS];
        for (i, slot) in e.iter_mut().enumerate() {
            *slot = self.exponent(i).min(other.exponent(i));
        }
        Monomial::from_exponents(&e)
    }

    /// True when the two monomials share no variable.
    pub fn coprime(&self, other: &Monomial) -> bool {
        (0..MAX_VARS).all(|i| self.exponent(i) == 0 || other.exponent(i) == 0)
    }

    /// Integer key whose natural order is the graded reverse lexicographic order.
    #[inline]
    pub fn grevlex_key(&self) -> u128 {
        self.0 ^ VARS_MASK
    }

    #[inline]
    pub fn from_grevlex_key(key: u128) -> Monomial {
        Monomial(key ^ VARS_MASK)
    }

    /// Integer key whose natural order is the lexicographic order with
    /// variable 0 most significant.
    #[inline]
    pub fn lex_key(&self) -> u128 {
        let mut k = 0u128;
        for i in 0..MAX_VARS {
            k = (k << LANE_BITS) | ((self.0 >> (LANE_BITS * i as u32)) & LANE_MASK);
        }
        k
    }

    /// Sort key for the given order.
    #[inline]
    pub fn order_key(&self, order: MonomialOrder) -> u128 {
        match order {
            MonomialOrder::GrevLex => self.grevlex_key(),
            MonomialOrder::Lex => self.lex_key(),
        }
    }

    /// Bit `i` is set when variable `i` occurs.
    #[inline]
    pub fn support_mask(&self) -> u8 {
        let mut mask = 0u8;
        for i in 0..MAX_VARS {
            if self.exponent(i) > 0 {
                mask |= 1 << i;
            }
        }
        mask
    }

    #[inline]
    pub fn cmp_grevlex(&self, other: &Monomial) -> Ordering {
        self.grevlex_key().cmp(&other.grevlex_key())
    }

    pub fn cmp_lex(&self, other: &Monomial) -> Ordering {
        self.lex_key().cmp(&other.lex_key())
    }

    #[inline]
    pub fn cmp_by(&self, other: &Monomial, order: MonomialOrder) -> Ordering {
        match order {
            MonomialOrder::GrevLex => self.cmp_grevlex(other),
            MonomialOrder::Lex => self.cmp_lex(other),
        }
    }

    /// Replace the exponent of one variable.
    pub fn with_exponent(&self, var: usize, exp: u32) -> Monomial {
        let mut e = self.exponents(MAX_VARS);
        e[var] = exp;
        Monomial::from_exponents(&e)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_grevlex(other)
    }
}
