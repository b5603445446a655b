//! Dense univariate helpers: rational roots, square-free parts and truncated
//! power series.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::field::{is_prime, Field};

/// Coefficients by ascending degree over the rationals.
pub type Dense = Vec<BigRational>;

/// Drop trailing zero coefficients.
pub fn trim(mut p: Dense) -> Dense {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

pub fn degree(p: &Dense) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn derivative(p: &Dense) -> Dense {
    trim(p.iter().enumerate().skip(1).map(|(i, c)| c * BigRational::from_integer(BigInt::from(i))).collect())
}

/// Quotient and remainder of `a` by a nonzero `b`.
pub fn div_rem(a: &Dense, b: &Dense) -> (Dense, Dense) {
    let mut r = trim(a.clone());
    let db = degree(b).expect("nonzero divisor");
    let lb = b[db].clone();
    let mut q = vec![BigRational::zero(); r.len().saturating_sub(db).max(1)];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = &r[dr] / &lb;
        for i in 0..=db {
            let t = &c * &b[i];
            r[dr - db + i] -= t;
        }
        q[dr - db] = c;
        r = trim(r);
    }
    (trim(q), r)
}

/// Monic greatest common divisor; empty when both inputs vanish.
pub fn gcd(p: &Dense, q: &Dense) -> Dense {
    let (mut a, mut b) = (trim(p.clone()), trim(q.clone()));
    while degree(&b).is_some() {
        let r = div_rem(&a, &b).1;
        a = b;
        b = r;
    }
    match a.last().cloned() {
        Some(lc) => a.iter().map(|c| c / &lc).collect(),
        None => a,
    }
}

/// True when the polynomial has no repeated root over the closure.
pub fn is_squarefree(p: &Dense) -> bool {
    match degree(p) {
        None => false,
        Some(0) => true,
        Some(_) => degree(&gcd(p, &derivative(p))) == Some(0),
    }
}

/// `p / gcd(p, p')`, monic.
pub fn squarefree_part(p: &Dense) -> Dense {
    let p = trim(p.clone());
    if degree(&p).unwrap_or(0) == 0 {
        return p;
    }
    let g = gcd(&p, &derivative(&p));
    let q = div_rem(&p, &g).0;
    let lc = q.last().cloned().expect("nonzero");
    q.iter().map(|c| c / &lc).collect()
}

/// Rational roots with multiplicities and the cofactor left after removing them.
#[derive(Debug, Clone, PartialEq)]
pub struct RootSplit {
    pub roots: Vec<(BigRational, u32)>,
    pub rest: Dense,
}

/// Divide by `t - r`, assuming `r` is a root.
fn deflate(p: &Dense, r: &BigRational) -> Dense {
    let n = p.len() - 1;
    let mut q = vec![BigRational::zero(); n];
    let mut carry = BigRational::zero();
    for i in (1..=n).rev() {
        carry = &p[i] + &carry * r;
        q[i - 1] = carry.clone();
    }
    q
}

pub fn eval(p: &Dense, t: &BigRational) -> BigRational {
    p.iter().rev().fold(BigRational::zero(), |acc, c| acc * t + c)
}

/// Primitive integer multiple of a nonzero polynomial.
fn integer_coefficients(p: &Dense) -> Vec<BigInt> {
    let lcm = p.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let ints: Vec<BigInt> = p.iter().map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    ints.into_iter().map(|c| c / &g).collect()
}

fn eval_mod(p: &[BigInt], t: &BigInt, m: &BigInt) -> BigInt {
    p.iter().rev().fold(BigInt::zero(), |acc, c| (acc * t + c).mod_floor(m))
}

fn inv_mod(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}

/// `a / b` with `|a| <= bound_a`, `0 < b <= bound_b` and `a = b * r mod m`.
fn rational_reconstruction(r: &BigInt, m: &BigInt, bound_a: &BigInt, bound_b: &BigInt) -> Option<BigRational> {
    let (mut r0, mut r1) = (m.clone(), r.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while &r1 > bound_a {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        (r0, r1, t0, t1) = (r1, r2, t1, t2);
    }
    if t1.is_zero() || &t1.abs() > bound_b {
        return None;
    }
    Some(BigRational::new(r1, t1))
}

/// Rational roots of a square-free polynomial with nonzero constant term,
/// found modulo a small prime and lifted `p`-adically.
fn squarefree_rational_roots(p: &Dense) -> Vec<BigRational> {
    let ints = integer_coefficients(p);
    let n = ints.len() - 1;
    let (c0, cn) = (ints[0].abs(), ints[n].abs());
    let deriv: Vec<BigInt> = ints.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect();
    let target = BigInt::from(2) * &c0 * &cn;
    for prime in (1009u64..).filter(|&q| is_prime(q)) {
        let pb = BigInt::from(prime);
        if (&ints[n] % &pb).is_zero() {
            continue;
        }
        // square-free modulo the prime: gcd(p, p') constant
        let fp = super::PrimeField::new(prime).expect("prime");
        let red = |v: &[BigInt]| -> Vec<u64> { v.iter().map(|c| fp.from_bigint(c)).collect() };
        let (pm, dm) = (red(&ints), red(&deriv));
        if gcd_mod(&pm, &dm, &fp) > 0 {
            continue;
        }
        let residues: Vec<u64> = (0..prime).filter(|&t| horner_mod(&pm, t, &fp) == 0).collect();
        let mut out = Vec::new();
        for r0 in residues {
            let (mut r, mut modulus) = (BigInt::from(r0), pb.clone());
            while modulus <= target {
                modulus = &modulus * &modulus;
                let fr = eval_mod(&ints, &r, &modulus);
                let Some(di) = inv_mod(&eval_mod(&deriv, &r, &modulus), &modulus) else { break };
                r = (&r - fr * di).mod_floor(&modulus);
            }
            if let Some(q) = rational_reconstruction(&r, &modulus, &c0, &cn) {
                if eval(p, &q).is_zero() {
                    out.push(q);
                }
            }
        }
        return out;
    }
    unreachable!("infinitely many primes")
}

fn horner_mod(p: &[u64], t: u64, f: &super::PrimeField) -> u64 {
    p.iter().rev().fold(0, |acc, c| f.add(&f.mul(&acc, &t), c))
}

/// Degree of `gcd(a, b)` over `F_p`.
fn gcd_mod(a: &[u64], b: &[u64], f: &super::PrimeField) -> usize {
    let strip = |mut v: Vec<u64>| {
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    };
    let (mut a, mut b) = (strip(a.to_vec()), strip(b.to_vec()));
    while !b.is_empty() {
        let inv = f.inv(b.last().unwrap()).unwrap();
        while a.len() >= b.len() {
            let c = f.mul(a.last().unwrap(), &inv);
            let shift = a.len() - b.len();
            for (i, bc) in b.iter().enumerate() {
                a[shift + i] = f.sub(&a[shift + i], &f.mul(&c, bc));
            }
            a = strip(a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

/// All rational roots with multiplicity.
pub fn rational_roots(p: &Dense) -> RootSplit {
    let mut p = trim(p.clone());
    let mut roots = Vec::new();
    if p.is_empty() {
        return RootSplit { roots, rest: p };
    }
    let zeros = p.iter().position(|c| !c.is_zero()).unwrap_or(0);
    if zeros > 0 {
        roots.push((BigRational::zero(), zeros as u32));
        p.drain(..zeros);
    }
    if p.len() > 1 {
        for r in squarefree_rational_roots(&squarefree_part(&p)) {
            let mut mult = 0;
            while p.len() > 1 && eval(&p, &r).is_zero() {
                p = deflate(&p, &r);
                mult += 1;
            }
            roots.push((r, mult));
        }
    }
    roots.sort();
    RootSplit { roots, rest: p }
}

/// Truncated power series product, `len` coefficients.
pub fn series_mul<K: Field>(f: &K, a: &[K::Elem], b: &[K::Elem], len: usize) -> Vec<K::Elem> {
    let mut out = vec![f.zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if f.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            f.add_assign(&mut out[i + j], &f.mul(x, y));
        }
    }
    out
}

/// Inverse of a series with invertible constant term.
pub fn series_inv<K: Field>(f: &K, a: &[K::Elem], len: usize) -> Option<Vec<K::Elem>> {
    let a0 = f.inv(&a[0])?;
    let mut out = vec![f.zero(); len];
    out[0] = a0.clone();
    for n in 1..len {
        let mut s = f.zero();
        for k in 1..=n.min(a.len() - 1) {
            f.add_assign(&mut s, &f.mul(&a[k], &out[n - k]));
        }
        out[n] = f.neg(&f.mul(&s, &a0));
    }
    Some(out)
}
