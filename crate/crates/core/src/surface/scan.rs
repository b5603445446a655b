//! The discriminant systems detecting tangent sections with an `A_m` point or
//! worse, and the per-prime scan for the worst `m`.
//!
//! A plane `w = ax + by + cz` cuts the surface in `F(x, y, z) = 0`. Its
//! discriminant `h` with respect to `z` is a binary form in `(x, y)` whose
//! coefficients are polynomials in `(a, b, c)`, and an `A_m` point of the
//! section contributes a root of multiplicity at least `m + 1`. The system
//! for `m` asks for a root of multiplicity `m + 1`: on the chart `y = 1` the
//! Hasse derivatives of order `0..=m` in `x` vanish, on the point `(1 : 0)`
//! the coefficients of `y^0, .., y^m` vanish. Both charts add `t * lc = 1`
//! for the leading coefficient `lc(c)` of the restriction in `z`: where it
//! vanishes the formal discriminant is degenerate (identically zero on a
//! line pair through the centre of projection).
//!
//! Before any Gröbner computation modulo a small prime, every `F_p`-point of
//! the surface is pushed through its tangent plane: the multiplicity of the
//! root it projects to is an explicit solution of the system for each `m` below
//! it, so those verdicts need no basis.
//!
//! Planes with no `w` term, and projections whose centre lies on the
//! surface, are reached by cyclically rotating the roles of the coordinates.
//! A rotation whose restriction drops degree in `z` (the surface contains the
//! line `x = y = 0` of that rotation) has no meaningful discriminant and is
//! skipped; the other rotations still cover every plane not through that line.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::elimination::discriminant;
use crate::groebner::{affine_solvable, verdict_from_error, Budget, Ideal, PrimeVerdict, Solvability};
use crate::polycore::{Field, MultiPoly, PolyError, PrimeField, Rationals};

use super::section::fp_points;
use super::{ProjectiveSurface, SurfaceError};

/// Largest prime whose points are searched for explicit solutions.
pub const WITNESS_PRIME_LIMIT: u64 = 211;

/// Which affine piece of the line of roots `(x : y)` a chart covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LineChart {
    /// `y = 1`, unknowns `(a, b, c, x)`.
    YOne,
    /// The point `(1 : 0)`, unknowns `(a, b, c)`.
    YZero,
}

/// One system of the `A_m` scan, in the ring `(a, b, c, x, y, t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AmChart<K: Field> {
    /// Coordinate `(i + rotation) mod 4` plays the role of the `i`-th of `x, y, z, w`.
    pub rotation: usize,
    pub chart: LineChart,
    pub ideal: Ideal<K>,
}

/// The restriction of each rotation of `f` to the plane `w = ax + by + cz`,
/// in the ring `(a, b, c, x, y, z)`.
fn plane_restrictions<K: Field>(f: &MultiPoly<K>) -> Result<Vec<MultiPoly<K>>, SurfaceError> {
    let k = f.field().clone();
    let v = |i: usize| MultiPoly::var(k.clone(), 6, i);
    // roles x, y, z -> ring variables 3, 4, 5; w -> a x + b y + c z
    let w = &(&(&v(0) * &v(3)) + &(&v(1) * &v(4))) + &(&v(2) * &v(5));
    let images = [v(3), v(4), v(5), w];
    (0..4)
        .map(|r| {
            let perm: Vec<usize> = (0..4).map(|j| (j + 4 - r) % 4).collect();
            Ok(f.rename_vars(&perm, 4)?.compose(&images)?)
        })
        .collect()
}

/// Rotations whose restriction keeps full degree `d` in `z`.
fn usable_rotations<K: Field>(planes: &[MultiPoly<K>], d: u32) -> Vec<usize> {
    (0..planes.len()).filter(|&r| planes[r].degree_in(5) == d).collect()
}

/// A rotation's discriminant `h(a, b, c, x, y)` and the leading coefficient
/// in `z` it was taken with, both in six variables.
struct RotationData<K: Field> {
    rotation: usize,
    h: MultiPoly<K>,
    lc: MultiPoly<K>,
}

fn discriminants<K: Field>(planes: &[MultiPoly<K>], rotations: &[usize]) -> Result<Vec<RotationData<K>>, SurfaceError> {
    if rotations.is_empty() {
        return Err(SurfaceError::InvalidArgument("the restriction to every rotation is degenerate".into()));
    }
    let mut out = Vec::with_capacity(rotations.len());
    for &r in rotations {
        let lc = planes[r].coefficients_in(5)?.pop().expect("nonconstant in z");
        let h = discriminant(&planes[r], 5)?.extend_vars(6)?;
        out.push(RotationData { rotation: r, h, lc });
    }
    Ok(out)
}

fn charts_for<K: Field>(data: &RotationData<K>, m: u32) -> Result<[AmChart<K>; 2], SurfaceError> {
    let (h, rotation) = (&data.h, data.rotation);
    let k = h.field().clone();
    let nonzero_lc = &(&MultiPoly::var(k.clone(), 6, 5) * &data.lc) - &MultiPoly::constant(k.clone(), 6, k.one());
    let on_y1 = h.specialize(4, &k.one())?;
    let mut gens = Vec::with_capacity(m as usize + 2);
    for order in 0..=m {
        gens.push(on_y1.hasse_derivative(3, order)?);
    }
    gens.push(nonzero_lc.clone());
    let y_one = AmChart { rotation, chart: LineChart::YOne, ideal: Ideal::new(k.clone(), 6, gens)? };
    let on_x1 = h.specialize(3, &k.one())?;
    let coeffs = on_x1.coefficients_in(4)?;
    let mut gens: Vec<_> = coeffs.into_iter().take(m as usize + 1).collect();
    gens.push(nonzero_lc);
    let y_zero = AmChart { rotation, chart: LineChart::YZero, ideal: Ideal::new(k, 6, gens)? };
    Ok([y_one, y_zero])
}

/// All charts of the `A_m` system for a homogeneous quartic-or-higher
/// equation in four variables over any field.
pub fn a_m_charts<K: Field>(f: &MultiPoly<K>, m: u32) -> Result<Vec<AmChart<K>>, SurfaceError> {
    let d = f.total_degree().unwrap_or(0);
    let planes = plane_restrictions(f)?;
    let mut out = Vec::with_capacity(8);
    for data in discriminants(&planes, &usable_rotations(&planes, d))? {
        out.extend(charts_for(&data, m)?);
    }
    Ok(out)
}

/// The `A_m` system of a surface over the rationals.
pub fn a_m_system(s: &ProjectiveSurface, m: u32) -> Result<Vec<AmChart<Rationals>>, SurfaceError> {
    if s.degree() < 2 {
        return Err(SurfaceError::DegreeTooLow { need: 2, got: s.degree() });
    }
    if m < 1 {
        return Err(SurfaceError::InvalidArgument("m must be at least 1".into()));
    }
    a_m_charts(s.poly(), m)
}

/// Per-prime outcome of the descending search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "m", rename_all = "snake_case")]
pub enum WorstA {
    /// Largest `m` whose system is solvable.
    Found(u32),
    /// No system with `1 <= m <= m_max` is solvable.
    None,
    /// The run for this `m` exceeded its budget.
    Timeout(u32),
    BadReduction,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WorstARecord {
    pub prime: u64,
    pub worst: WorstA,
    /// Largest `m` certified by an explicit solution at an `F_p`-point.
    pub witnessed: Option<u32>,
    /// `(m, verdict, milliseconds)` for every `m` tried, in order.
    pub steps: Vec<(u32, PrimeVerdict, u64)>,
    pub runtime_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WorstAScan {
    pub m_max: u32,
    /// Rotations left out because the surface contains their centre line.
    pub skipped_rotations: Vec<usize>,
    /// Sorted by prime.
    pub records: Vec<WorstARecord>,
}

impl WorstAScan {
    /// The common answer when every prime finished with the same one.
    pub fn consensus(&self) -> Option<&WorstA> {
        let first = &self.records.first()?.worst;
        let finished = |w: &WorstA| matches!(w, WorstA::Found(_) | WorstA::None);
        (finished(first) && self.records.iter().all(|r| &r.worst == first)).then_some(first)
    }

    /// Number of primes that finished.
    pub fn finished(&self) -> usize {
        self.records.iter().filter(|r| matches!(r.worst, WorstA::Found(_) | WorstA::None)).count()
    }

    /// Is the system for `m` solvable at every finished prime?
    pub fn solvable_at(&self, m: u32) -> Option<bool> {
        let w = self.consensus()?;
        Some(match w {
            WorstA::Found(k) => m <= *k,
            _ => false,
        })
    }
}

fn scan_prime(
    s: &ProjectiveSurface,
    rotations: &[usize],
    p: u64,
    m_max: u32,
    budget: &Budget,
    progress: &(dyn Fn(&str) + Sync),
) -> Result<WorstARecord, SurfaceError> {
    let start = Instant::now();
    let mut record = WorstARecord { prime: p, worst: WorstA::None, witnessed: None, steps: Vec::new(), runtime_ms: 0 };
    let f = match s.reduce(p) {
        Ok(f) if f.total_degree() == Some(s.degree()) => f,
        Ok(_) | Err(PolyError::BadReduction { .. }) => {
            record.worst = WorstA::BadReduction;
            return Ok(record);
        }
        Err(e) => return Err(e.into()),
    };
    // the degree in z of each restriction must survive the reduction
    let planes = plane_restrictions(&f)?;
    let over_q = plane_restrictions(s.poly())?;
    if planes.iter().zip(&over_q).any(|(a, b)| a.degree_in(5) != b.degree_in(5)) {
        record.worst = WorstA::BadReduction;
        record.runtime_ms = start.elapsed().as_millis() as u64;
        return Ok(record);
    }
    let discs = discriminants(&planes, rotations)?;
    if p <= WITNESS_PRIME_LIMIT {
        record.witnessed = rational_witness(&f, &discs);
    }
    for m in (1..=m_max).rev() {
        let t = Instant::now();
        let mut verdict = PrimeVerdict::Unsolvable;
        if record.witnessed.is_some_and(|w| w >= m) {
            verdict = PrimeVerdict::Solvable;
        }
        'charts: for data in discs.iter().filter(|_| verdict != PrimeVerdict::Solvable) {
            for chart in charts_for(data, m)? {
                match affine_solvable(&chart.ideal, budget) {
                    Ok(Solvability::Solvable) => {
                        verdict = PrimeVerdict::Solvable;
                        break 'charts;
                    }
                    Ok(Solvability::Unsolvable) => {}
                    Err(e) => {
                        verdict = verdict_from_error(e)?;
                        break 'charts;
                    }
                }
            }
        }
        let ms = t.elapsed().as_millis() as u64;
        progress(&format!("prime {p}: m = {m}: {verdict:?} ({ms} ms)"));
        record.steps.push((m, verdict.clone(), ms));
        match verdict {
            PrimeVerdict::Solvable => {
                record.worst = WorstA::Found(m);
                break;
            }
            PrimeVerdict::Unsolvable => {}
            PrimeVerdict::Timeout { .. } => {
                record.worst = WorstA::Timeout(m);
                break;
            }
            PrimeVerdict::BadReduction { .. } => {
                record.worst = WorstA::BadReduction;
                break;
            }
        }
    }
    record.runtime_ms = start.elapsed().as_millis() as u64;
    Ok(record)
}

/// Order of vanishing of `sum coeffs[k] x^k` at `x0`.
fn root_order(coeffs: &[u64], x0: u64, p: u64) -> u32 {
    // repeated synthetic division by (x - x0)
    let mut c = coeffs.to_vec();
    while c.last() == Some(&0) {
        c.pop();
    }
    if c.is_empty() {
        return u32::MAX;
    }
    let mut order = 0;
    loop {
        let mut q = vec![0u64; c.len() - 1];
        let mut acc = 0u64;
        for k in (0..c.len()).rev() {
            acc = (acc * x0 + c[k]) % p;
            if k > 0 {
                q[k - 1] = acc;
            }
        }
        if acc != 0 || q.is_empty() {
            return order;
        }
        order += 1;
        c = q;
    }
}

/// The largest `m` for which some chart system has a solution coming from an
/// `F_p`-point of `f` and its tangent plane.
fn rational_witness(f: &MultiPoly<PrimeField>, discs: &[RotationData<PrimeField>]) -> Option<u32> {
    let field = *f.field();
    let p = field.modulus();
    let grad: Vec<MultiPoly<PrimeField>> = (0..4).filter_map(|i| f.partial_derivative(i).ok()).collect();
    let mut best: Option<u32> = None;
    for pt in fp_points(f) {
        let g: Vec<u64> = grad.iter().map(|d| d.evaluate(&pt).unwrap_or(0)).collect();
        if g.iter().all(|&v| v == 0) {
            continue;
        }
        for data in discs {
            let role = |i: usize| (i + data.rotation) % 4;
            let Some(gw_inv) = field.inv(&g[role(3)]) else { continue };
            let abc: Vec<u64> = (0..3).map(|i| field.neg(&field.mul(&g[role(i)], &gw_inv))).collect();
            let at = [abc[0], abc[1], abc[2], 0, 0, 0];
            if data.lc.evaluate(&at).map_or(true, |v| v == 0) {
                continue;
            }
            // the binary form h(a, b, c; x, y) at this plane
            let deg = data.h.degree_in(3).max(data.h.degree_in(4)) as usize;
            let mut form = vec![0u64; deg + 1];
            let mut top = 0usize;
            for (m, c) in data.h.terms() {
                let mut v = *c;
                for i in 0..3 {
                    v = field.mul(&v, &field.pow(&abc[i], u64::from(m.exponent(i))));
                }
                let k = m.exponent(3) as usize;
                top = top.max(k + m.exponent(4) as usize);
                form[k] = field.add(&form[k], &v);
            }
            let (x, y) = (pt[role(0)], pt[role(1)]);
            let order = if form.iter().all(|&v| v == 0) {
                u32::MAX
            } else if y != 0 {
                root_order(&form, field.mul(&x, &field.inv(&y).expect("nonzero")), p)
            } else {
                // the root (1 : 0): coefficients of x^top, x^(top-1), .. vanish
                form[..=top.min(deg)].iter().rev().take_while(|&&v| v == 0).count() as u32
            };
            if order >= 2 {
                let m = order.saturating_sub(1);
                best = Some(best.map_or(m, |b| b.max(m)));
            }
        }
    }
    best
}

/// For each prime, the largest `m <= m_max` whose `A_m` system is solvable
/// modulo that prime, searching downwards from `m_max`.
pub fn worst_a_scan(
    s: &ProjectiveSurface,
    primes: &[u64],
    m_max: u32,
    budget: &Budget,
    progress: &(dyn Fn(&str) + Sync),
) -> Result<WorstAScan, SurfaceError> {
    if s.degree() < 2 {
        return Err(SurfaceError::DegreeTooLow { need: 2, got: s.degree() });
    }
    for &p in primes {
        PrimeField::new(p)?;
    }
    let over_q = plane_restrictions(s.poly())?;
    let rotations = usable_rotations(&over_q, s.degree());
    if rotations.is_empty() {
        return Err(SurfaceError::InvalidArgument("the restriction to every rotation is degenerate".into()));
    }
    let skipped_rotations = (0..4).filter(|r| !rotations.contains(r)).collect();
    let mut records = primes
        .par_iter()
        .map(|&p| scan_prime(s, &rotations, p, m_max, budget, progress))
        .collect::<Result<Vec<_>, _>>()?;
    records.sort_by_key(|r| r.prime);
    Ok(WorstAScan { m_max, skipped_rotations, records })
}
