//! Gröbner bases over the rationals by computing modulo word-sized primes,
//! lifting with the Chinese remainder theorem and rational reconstruction,
//! and verifying the lift exactly.
//!
//! A lift `G` is accepted once it is a Gröbner basis over the rationals and
//! every input generator reduces to zero by it, so `<G>` contains the input
//! ideal `I`. Its leading monomials agree with those of the basis of `I`
//! modulo the primes used. For homogeneous input this forces `<G> = I`:
//! degree by degree, `dim <G>_d = dim (I_p)_d <= dim I_d <= dim <G>_d`, since
//! reducing modulo `p` can only lose rank. For other input the equality holds
//! for all but finitely many primes.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::polycore::{is_prime, reduce_mod_p, Field, Monomial, MultiPoly, PrimeField, Rationals};

use super::engine::{to_gpoly, Engine};
use super::{assemble_polys, f4_basis, Budget, GroebnerBasis, GroebnerError, Ideal, SelectionStrategy};

/// Primes below `2^31`, downwards.
fn primes_from_top() -> impl Iterator<Item = u64> {
    (1u64 << 30..(1u64 << 31)).rev().filter(|&n| is_prime(n))
}

/// `r / s` with `|r|, |s| <= sqrt(m / 2)` and `r = a s mod m`, if one exists.
pub(crate) fn rational_reconstruction(a: &BigInt, m: &BigInt) -> Option<BigRational> {
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut s0, mut s1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let s2 = &s0 - &q * &s1;
        r0 = std::mem::replace(&mut r1, r2);
        s0 = std::mem::replace(&mut s1, s2);
    }
    if s1.is_zero() || s1.abs() > bound || !r1.gcd(&s1).is_one() {
        return None;
    }
    Some(BigRational::new(r1, s1))
}

/// Residues of one basis modulo a product of primes.
struct Lift {
    leading: Vec<Monomial>,
    polys: Vec<BTreeMap<u128, (Monomial, BigInt)>>,
    modulus: BigInt,
    primes: usize,
}

impl Lift {
    fn from_basis(gb: &GroebnerBasis<PrimeField>, p: u64) -> Self {
        let order = gb.ideal().order();
        let polys = gb
            .polys()
            .iter()
            .map(|g| g.terms().iter().map(|(m, c)| (m.order_key(order), (*m, BigInt::from(*c)))).collect())
            .collect();
        Lift { leading: gb.leading_monomials().to_vec(), polys, modulus: BigInt::from(p), primes: 1 }
    }

    /// Combine with a basis modulo `p` having the same leading monomials.
    fn absorb(&mut self, gb: &GroebnerBasis<PrimeField>, p: u64) {
        let order = gb.ideal().order();
        let pb = BigInt::from(p);
        let inv = {
            let n = (&self.modulus % &pb).to_u64().expect("small");
            BigInt::from(PrimeField::new(p).expect("prime").inv(&n).expect("coprime moduli"))
        };
        for (acc, g) in self.polys.iter_mut().zip(gb.polys()) {
            let new: BTreeMap<u128, (Monomial, u64)> =
                g.terms().iter().map(|(m, c)| (m.order_key(order), (*m, *c))).collect();
            let keys: Vec<(u128, Monomial)> =
                acc.iter().map(|(k, (m, _))| (*k, *m)).chain(new.iter().map(|(k, (m, _))| (*k, *m))).collect();
            for (k, m) in keys {
                let a = acc.get(&k).map(|t| t.1.clone()).unwrap_or_default();
                let b = new.get(&k).map(|t| t.1).unwrap_or(0);
                // x = a + N ((b - a) N^-1 mod p)
                let diff = (BigInt::from(b) - &a).mod_floor(&pb);
                let t = (diff * &inv).mod_floor(&pb);
                let x = a + &self.modulus * t;
                acc.insert(k, (m, x));
            }
        }
        self.modulus *= pb;
        self.primes += 1;
    }

    fn reconstruct(&self, nvars: usize) -> Option<Vec<MultiPoly<Rationals>>> {
        let mut out = Vec::with_capacity(self.polys.len());
        for terms in &self.polys {
            let mut rec = Vec::with_capacity(terms.len());
            for (m, c) in terms.values() {
                if c.is_zero() {
                    continue;
                }
                rec.push((*m, rational_reconstruction(c, &self.modulus)?));
            }
            out.push(MultiPoly::from_terms(Rationals, nvars, rec));
        }
        Some(out)
    }
}

fn reduce_all(polys: &[MultiPoly<Rationals>], p: u64) -> Option<Vec<MultiPoly<PrimeField>>> {
    polys.iter().map(|g| reduce_mod_p(g, p).ok()).collect()
}

/// Exact check that `cand` is a Gröbner basis containing the generators.
fn verify(ideal: &Ideal<Rationals>, cand: &[MultiPoly<Rationals>], budget: &Budget) -> Result<bool, GroebnerError> {
    let order = ideal.order();
    let mut eng = Engine::new(&Rationals, order, budget, SelectionStrategy::Normal);
    for g in cand {
        eng.push_reduced(to_gpoly(g, order));
    }
    for g in ideal.generators() {
        if !eng.normal_form(&to_gpoly(g, order))?.terms.is_empty() {
            return Ok(false);
        }
    }
    eng.is_groebner()
}

/// Reduced Gröbner basis over the rationals by the modular method.
pub fn modular_basis(ideal: &Ideal<Rationals>, budget: &Budget) -> Result<GroebnerBasis<Rationals>, GroebnerError> {
    let start = Instant::now();
    let n = ideal.nvars();
    let order = ideal.order();
    let integral: Vec<MultiPoly<Rationals>> =
        ideal.generators().iter().filter(|g| !g.is_zero()).map(|g| g.primitive_part()).collect();
    if integral.is_empty() {
        return Ok(assemble_polys(ideal, Vec::new()));
    }
    // primes dividing a leading coefficient change the leading terms
    let leads: Vec<BigInt> = integral.iter().map(|g| to_gpoly(g, order).terms[0].1.numer().clone()).collect();
    let remaining = |b: &Budget| -> Result<Budget, GroebnerError> {
        let mut sub = b.clone();
        if let Some(limit) = b.time_limit {
            let spent = start.elapsed();
            if spent >= limit {
                return Err(GroebnerError::Timeout { basis_size: 0, reason: "time limit".into() });
            }
            sub.time_limit = Some(limit - spent);
        }
        Ok(sub)
    };
    let mut lifts: Vec<Lift> = Vec::new();
    let mut candidate: Option<(usize, Vec<MultiPoly<Rationals>>)> = None;
    for p in primes_from_top() {
        if leads.iter().any(|c| (c % BigInt::from(p)).is_zero()) {
            continue;
        }
        let sub = remaining(budget)?;
        let Some(gens) = reduce_all(&integral, p) else { continue };
        let field = PrimeField::new(p)?;
        let gb = f4_basis(&Ideal::with_order(field, n, gens, order)?, &sub, SelectionStrategy::Sugar)?;
        // a candidate that survives a fresh prime gets verified exactly
        if let Some((slot, cand)) = &candidate {
            if lifts[*slot].leading == gb.leading_monomials() {
                if let Some(red) = reduce_all(cand, p) {
                    if red.as_slice() == gb.polys() && verify(ideal, cand, &remaining(budget)?)? {
                        return Ok(assemble_polys(ideal, cand.clone()));
                    }
                }
            }
        }
        let slot = match lifts.iter().position(|l| l.leading == gb.leading_monomials()) {
            Some(i) => {
                lifts[i].absorb(&gb, p);
                i
            }
            None => {
                lifts.push(Lift::from_basis(&gb, p));
                lifts.len() - 1
            }
        };
        // follow the leading-monomial pattern seen most often
        let best = (0..lifts.len()).max_by_key(|&i| (lifts[i].primes, std::cmp::Reverse(i))).expect("nonempty");
        candidate = if best == slot { lifts[slot].reconstruct(n).map(|c| (slot, c)) } else { None };
        if candidate.is_none() && lifts[best].primes > 1 && best != slot {
            candidate = lifts[best].reconstruct(n).map(|c| (best, c));
        }
    }
    Err(GroebnerError::Timeout { basis_size: 0, reason: "ran out of primes".into() })
}
