//! Embedded resolution by point blow-ups with multiplicity and discrepancy
//! bookkeeping.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{CurveGerm, GermError};
use crate::polycore::univariate::{is_squarefree, rational_roots, trim, Dense};
use crate::polycore::{Monomial, QPoly, Rationals};

/// A point of a blown-up surface in local coordinates `(u, v)` centred at it.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartGerm {
    /// Local equations of the strict transforms, with their weights.
    pub components: Vec<(QPoly, BigRational)>,
    /// Exceptional curve `{u = 0}` through the point, by node id.
    pub exc_u: Option<usize>,
    /// Exceptional curve `{v = 0}` through the point, by node id.
    pub exc_v: Option<usize>,
    /// The original coordinates `(x, y)` as polynomials in `(u, v)`.
    pub map: [QPoly; 2],
}

impl ChartGerm {
    /// The germ itself, before any blow-up.
    pub fn initial(g: &CurveGerm) -> Self {
        ChartGerm {
            components: g.active().map(|c| (c.poly.clone(), c.weight.clone())).collect(),
            exc_u: None,
            exc_v: None,
            map: [QPoly::var(Rationals, 2, 0), QPoly::var(Rationals, 2, 1)],
        }
    }

    /// Product of the strict transforms passing through the point.
    pub fn local_poly(&self) -> QPoly {
        self.components
            .iter()
            .filter(|(c, _)| c.constant_term().is_zero())
            .fold(QPoly::one(Rationals, 2), |acc, (c, _)| &acc * c)
    }

    pub fn exceptionals(&self) -> Vec<usize> {
        self.exc_u.into_iter().chain(self.exc_v).collect()
    }

    /// Normal crossings at the point: the strict transform is absent, or it
    /// is smooth, meets at most one exceptional curve, and meets it
    /// transversally.
    pub fn is_snc(&self) -> bool {
        let f = self.local_poly();
        let Some(r) = f.order() else {
            return true;
        };
        match r {
            0 => true,
            1 => {
                let alpha = f.coefficient(&Monomial::var(0, 1));
                let beta = f.coefficient(&Monomial::var(1, 1));
                let crossings = self.exceptionals().len();
                crossings <= 1
                    && !(self.exc_u.is_some() && beta.is_zero())
                    && !(self.exc_v.is_some() && alpha.is_zero())
            }
            _ => false,
        }
    }

    /// Move the point `(0, t)` to the origin.
    fn translate_v(&self, t: &BigRational) -> Result<ChartGerm, GermError> {
        let images =
            [QPoly::var(Rationals, 2, 0), &QPoly::var(Rationals, 2, 1) + &QPoly::constant(Rationals, 2, t.clone())];
        let components = self
            .components
            .iter()
            .map(|(c, w)| Ok((c.compose(&images)?, w.clone())))
            .collect::<Result<Vec<_>, GermError>>()?;
        let map = [self.map[0].compose(&images)?, self.map[1].compose(&images)?];
        Ok(ChartGerm { components, exc_u: self.exc_u, exc_v: if t.is_zero() { self.exc_v } else { None }, map })
    }
}

/// One exceptional curve of the resolution.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolutionNode {
    pub id: usize,
    /// Multiplicity of the pulled-back divisor along the curve.
    pub mult: BigRational,
    /// Discrepancy.
    pub discrepancy: u32,
    /// Earlier exceptional curves through the blown-up point.
    pub parents: Vec<usize>,
    /// Number of blow-ups on the path to this one, itself included.
    pub depth: u32,
    /// The two chart maps `(x, y) = (X(u, v), Y(u, v))` after this blow-up.
    pub charts: [[QPoly; 2]; 2],
}

impl ResolutionNode {
    /// `(a_E + 1) / m_E`.
    pub fn threshold(&self) -> BigRational {
        BigRational::from_integer(BigInt::from(self.discrepancy + 1)) / &self.mult
    }
}

/// A point at which normal crossings hold.
#[derive(Debug, Clone, PartialEq)]
pub struct LeafChart {
    pub map: [QPoly; 2],
    pub exceptionals: Vec<usize>,
    pub terminal: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResolutionTree {
    pub nodes: Vec<ResolutionNode>,
    pub leaves: Vec<LeafChart>,
    max_weight: BigRational,
}

impl ResolutionTree {
    /// `(m_E, a_E)` in creation order.
    pub fn pairs(&self) -> Vec<(BigRational, u32)> {
        self.nodes.iter().map(|n| (n.mult.clone(), n.discrepancy)).collect()
    }

    /// Log canonical threshold read off the resolution.
    pub fn lct(&self) -> BigRational {
        let mut best = if self.max_weight.is_zero() { None } else { Some(self.max_weight.recip()) };
        for n in &self.nodes {
            let t = n.threshold();
            if best.as_ref().is_none_or(|b| &t < b) {
                best = Some(t);
            }
        }
        best.unwrap_or_else(BigRational::one)
    }
}

/// Result of blowing up the origin of a chart.
#[derive(Debug, Clone, PartialEq)]
pub struct BlowupOutcome {
    pub mult: BigRational,
    pub discrepancy: u32,
    /// Chart 1 uses `(u, v) -> (u, u v)`, chart 2 uses `(u, v) -> (u v, v)`.
    pub charts: [ChartGerm; 2],
}

fn divide_by_var_power(p: &QPoly, var: usize, k: u32) -> QPoly {
    if k == 0 {
        return p.clone();
    }
    let q = Monomial::var(var, k);
    let terms = p.terms().iter().map(|(m, c)| (q.divide_into(m).expect("exceptional factor"), c.clone()));
    QPoly::from_terms(Rationals, 2, terms.collect::<Vec<_>>())
}

/// Blow up the origin of `point`. `accrued` lists `(m, a)` of the
/// exceptional curves through it; `new_id` names the new curve.
pub fn blowup_step(
    point: &ChartGerm,
    accrued: &[(BigRational, u32)],
    new_id: usize,
) -> Result<BlowupOutcome, GermError> {
    let mut mult = BigRational::zero();
    for (c, w) in &point.components {
        let r = c.order().unwrap_or(0);
        mult += w * BigRational::from_integer(BigInt::from(r));
    }
    for (m, _) in accrued {
        mult += m;
    }
    let discrepancy = 1 + accrued.iter().map(|(_, a)| a).sum::<u32>();
    let u = QPoly::var(Rationals, 2, 0);
    let v = QPoly::var(Rationals, 2, 1);
    let uv = &u * &v;
    let chart = |images: [QPoly; 2], var: usize| -> Result<(Vec<(QPoly, BigRational)>, [QPoly; 2]), GermError> {
        let mut comps = Vec::with_capacity(point.components.len());
        for (c, w) in &point.components {
            let r = c.order().unwrap_or(0);
            comps.push((divide_by_var_power(&c.compose(&images)?, var, r), w.clone()));
        }
        let map = [point.map[0].compose(&images)?, point.map[1].compose(&images)?];
        Ok((comps, map))
    };
    let (c1, m1) = chart([u.clone(), uv.clone()], 0)?;
    let (c2, m2) = chart([uv, v], 1)?;
    Ok(BlowupOutcome {
        mult,
        discrepancy,
        charts: [
            ChartGerm { components: c1, exc_u: Some(new_id), exc_v: point.exc_v, map: m1 },
            ChartGerm { components: c2, exc_u: point.exc_u, exc_v: Some(new_id), map: m2 },
        ],
    })
}

/// Resolve `g` to normal crossings. Centers must be rational points.
pub fn resolve(g: &CurveGerm, max_depth: u32) -> Result<ResolutionTree, GermError> {
    let mut tree = ResolutionTree { nodes: Vec::new(), leaves: Vec::new(), max_weight: g.max_weight() };
    visit(&mut tree, ChartGerm::initial(g), 0, max_depth)?;
    Ok(tree)
}

fn visit(tree: &mut ResolutionTree, point: ChartGerm, depth: u32, max_depth: u32) -> Result<(), GermError> {
    let mut point = point;
    point.components.retain(|(c, _)| c.constant_term().is_zero());
    if point.is_snc() {
        tree.leaves.push(LeafChart { map: point.map.clone(), exceptionals: point.exceptionals(), terminal: true });
        return Ok(());
    }
    if depth >= max_depth {
        return Err(GermError::DepthExhausted(max_depth));
    }
    let parents = point.exceptionals();
    let accrued: Vec<(BigRational, u32)> =
        parents.iter().map(|&i| (tree.nodes[i].mult.clone(), tree.nodes[i].discrepancy)).collect();
    let id = tree.nodes.len();
    let out = blowup_step(&point, &accrued, id)?;
    tree.nodes.push(ResolutionNode {
        id,
        mult: out.mult,
        discrepancy: out.discrepancy,
        parents,
        depth: depth + 1,
        charts: [out.charts[0].map.clone(), out.charts[1].map.clone()],
    });
    let [c1, c2] = out.charts;
    // points of the new curve in chart 1 are (0, t), t a root of the tangent cone
    let all = c1.components.iter().fold(QPoly::one(Rationals, 2), |acc, (c, _)| &acc * c);
    let cone = all.specialize(0, &BigRational::zero())?;
    let mut dense: Dense = vec![BigRational::zero(); cone.degree_in(1) as usize + 1];
    for (m, c) in cone.terms() {
        dense[m.exponent(1) as usize] = c.clone();
    }
    let dense = trim(dense);
    let split = rational_roots(&dense);
    if split.rest.len() > 1 && !is_squarefree(&split.rest) {
        return Err(GermError::IrrationalCenter);
    }
    let mut centres: Vec<BigRational> = split.roots.into_iter().map(|(r, _)| r).collect();
    if c1.exc_v.is_some() && !centres.iter().any(|r| r.is_zero()) {
        centres.push(BigRational::zero());
    }
    for t in centres {
        visit(tree, c1.translate_v(&t)?, depth + 1, max_depth)?;
    }
    visit(tree, c2, depth + 1, max_depth)
}
