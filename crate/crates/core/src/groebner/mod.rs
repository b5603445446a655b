//! Gröbner bases, solvability and projective emptiness certificates.

mod engine;
mod f4;
mod modular;
mod scan;
mod solve;

use std::sync::atomic::AtomicBool;
use std::sync::Arc;
use std::time::Duration;

use thiserror::Error;

use crate::polycore::{Field, Monomial, MonomialOrder, MultiPoly, PolyError, PrimeField, MAX_VARS};

pub use modular::modular_basis;
pub use scan::{multi_prime_scan, scan_primes, verdict_from_error, PrimeRecord, PrimeVerdict, ScanSummary};
pub use solve::{count_distinct_zeros, minimal_polynomial, rational_points, zero_dim_radical, RationalPoints};

use engine::{from_gpoly, to_gpoly, Engine, Outcome};
use f4::{F4Outcome, F4};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroebnerError {
    #[error("resource budget exceeded ({reason}) with {basis_size} basis elements")]
    Timeout { basis_size: usize, reason: String },
    #[error("the ideal has positive dimension")]
    PositiveDimensional,
    #[error("the ideal is the whole ring")]
    UnitIdeal,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Resource caps for a Buchberger run. `None` means unlimited.
#[derive(Debug, Clone, Default)]
pub struct Budget {
    pub max_basis_size: Option<usize>,
    pub max_reduction_steps: Option<u64>,
    pub time_limit: Option<Duration>,
    pub cancel: Option<Arc<AtomicBool>>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget::default()
    }

    pub fn with_time_limit(limit: Duration) -> Self {
        Budget { time_limit: Some(limit), ..Budget::default() }
    }
}

/// S-pair selection rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SelectionStrategy {
    /// Smallest lcm degree first, ties by pair indices.
    #[default]
    Normal,
    /// Smallest sugar degree first, ties by lcm in the term order.
    Sugar,
}

/// An ideal given by generators in a fixed polynomial ring.
#[derive(Debug, Clone, PartialEq)]
pub struct Ideal<K: Field> {
    field: K,
    nvars: usize,
    generators: Vec<MultiPoly<K>>,
    order: MonomialOrder,
}

impl<K: Field> Ideal<K> {
    /// Zero generators are dropped. All generators must share a ring.
    pub fn new(field: K, nvars: usize, generators: Vec<MultiPoly<K>>) -> Result<Self, GroebnerError> {
        Self::with_order(field, nvars, generators, MonomialOrder::GrevLex)
    }

    pub fn with_order(
        field: K,
        nvars: usize,
        generators: Vec<MultiPoly<K>>,
        order: MonomialOrder,
    ) -> Result<Self, GroebnerError> {
        if nvars > MAX_VARS {
            return Err(PolyError::TooManyVars(nvars).into());
        }
        for g in &generators {
            if g.nvars() != nvars {
                return Err(PolyError::ArityMismatch(g.nvars(), nvars).into());
            }
            if *g.field() != field {
                return Err(PolyError::DomainMismatch(g.domain(), field.domain()).into());
            }
        }
        let generators = generators.into_iter().filter(|g| !g.is_zero()).collect();
        Ok(Ideal { field, nvars, generators, order })
    }

    /// Build from a nonempty list, taking the ring from the first element.
    pub fn from_polys(generators: Vec<MultiPoly<K>>) -> Result<Self, GroebnerError> {
        let first = generators.first().ok_or(PolyError::ZeroPolynomial)?;
        let (field, nvars) = (first.field().clone(), first.nvars());
        Self::new(field, nvars, generators)
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn generators(&self) -> &[MultiPoly<K>] {
        &self.generators
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn with_generator(mut self, g: MultiPoly<K>) -> Result<Self, GroebnerError> {
        if g.nvars() != self.nvars {
            return Err(PolyError::ArityMismatch(g.nvars(), self.nvars).into());
        }
        if !g.is_zero() {
            self.generators.push(g);
        }
        Ok(self)
    }
}

/// A reduced Gröbner basis.
#[derive(Debug, Clone, PartialEq)]
pub struct GroebnerBasis<K: Field> {
    ideal: Ideal<K>,
    leading: Vec<Monomial>,
    pub stats: RunStats,
}

/// Counters from a Buchberger run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RunStats {
    pub pairs_processed: u64,
    pub reduction_steps: u64,
}

impl<K: Field> GroebnerBasis<K> {
    /// The basis as an ideal (generators sorted by increasing leading monomial).
    pub fn ideal(&self) -> &Ideal<K> {
        &self.ideal
    }

    pub fn polys(&self) -> &[MultiPoly<K>] {
        &self.ideal.generators
    }

    pub fn leading_monomials(&self) -> &[Monomial] {
        &self.leading
    }

    pub fn is_unit(&self) -> bool {
        self.leading.len() == 1 && self.leading[0].is_one()
    }

    /// Remainder of `f` on division by the basis.
    pub fn normal_form(&self, f: &MultiPoly<K>) -> Result<MultiPoly<K>, GroebnerError> {
        if f.nvars() != self.ideal.nvars {
            return Err(PolyError::ArityMismatch(f.nvars(), self.ideal.nvars).into());
        }
        if *f.field() != self.ideal.field {
            return Err(PolyError::DomainMismatch(f.domain(), self.ideal.field.domain()).into());
        }
        let budget = Budget::unlimited();
        let mut eng = self.engine(&budget);
        let r = eng.normal_form(&to_gpoly(f, self.ideal.order))?;
        Ok(from_gpoly(&self.ideal.field, self.ideal.nvars, &r))
    }

    fn engine<'a>(&'a self, budget: &'a Budget) -> Engine<'a, K> {
        let mut eng = Engine::new(&self.ideal.field, self.ideal.order, budget, SelectionStrategy::Normal);
        for g in &self.ideal.generators {
            eng.push_reduced(to_gpoly(g, self.ideal.order));
        }
        eng
    }

    /// True iff the ideal has finitely many zeros over the algebraic closure.
    pub fn is_zero_dimensional(&self) -> bool {
        (0..self.ideal.nvars).all(|v| self.leading.iter().any(|m| m.support_mask() == 1 << v)) || self.is_unit()
    }

    /// Vector-space dimension of the quotient ring, `None` when infinite.
    /// For a radical ideal this is the number of zeros over the closure.
    pub fn quotient_dimension(&self) -> Option<u64> {
        if self.is_unit() {
            return Some(0);
        }
        if !self.is_zero_dimensional() {
            return None;
        }
        let n = self.ideal.nvars;
        let bounds: Vec<u32> = (0..n)
            .map(|v| {
                self.leading
                    .iter()
                    .filter(|m| m.support_mask() == 1 << v)
                    .map(|m| m.exponent(v))
                    .min()
                    .expect("pure power")
            })
            .collect();
        let mut count = 0u64;
        let mut exps = vec![0u32; n];
        count_standard(&self.leading, &bounds, &mut exps, 0, &mut count);
        Some(count)
    }
}

fn count_standard(lead: &[Monomial], bounds: &[u32], exps: &mut [u32], var: usize, count: &mut u64) {
    if var == bounds.len() {
        *count += 1;
        return;
    }
    for e in 0..bounds[var] {
        exps[var] = e;
        // prune: a divisible prefix stays divisible
        let partial = {
            let mut full = [0u32; MAX_VARS];
            full[..=var].copy_from_slice(&exps[..=var]);
            Monomial::from_exponents(&full)
        };
        if lead.iter().any(|m| m.divides(&partial)) {
            break;
        }
        count_standard(lead, bounds, exps, var + 1, count);
    }
    exps[var] = 0;
}

/// Reduced Gröbner basis with default strategy.
pub fn buchberger<K: Field>(ideal: &Ideal<K>, budget: &Budget) -> Result<GroebnerBasis<K>, GroebnerError> {
    buchberger_with(ideal, budget, SelectionStrategy::Normal)
}

pub fn buchberger_with<K: Field>(
    ideal: &Ideal<K>,
    budget: &Budget,
    strategy: SelectionStrategy,
) -> Result<GroebnerBasis<K>, GroebnerError> {
    let field = &ideal.field;
    let mut eng = Engine::new(field, ideal.order, budget, strategy);
    let mut gens: Vec<_> = ideal.generators.iter().map(|g| to_gpoly(g, ideal.order)).collect();
    // small leading monomials first keeps early reductions cheap
    gens.sort_by_key(|g| (g.lm().order_key(ideal.order), g.terms.len()));
    let mut unit = false;
    for g in &gens {
        if let Some(Outcome::Unit) = eng.add_generator(g)? {
            unit = true;
            break;
        }
    }
    if !unit {
        unit = matches!(eng.run()?, Outcome::Unit);
    }
    let stats = RunStats { pairs_processed: eng.pairs_processed, reduction_steps: eng.steps };
    if unit {
        return Ok(unit_basis(ideal, stats));
    }
    let basis = eng.reduced_basis()?;
    Ok(assemble(ideal, basis, stats))
}

/// Reduced Gröbner basis over a prime field by the matrix engine.
pub fn f4_basis(
    ideal: &Ideal<PrimeField>,
    budget: &Budget,
    strategy: SelectionStrategy,
) -> Result<GroebnerBasis<PrimeField>, GroebnerError> {
    let field = ideal.field;
    let mut eng = F4::new(field, ideal.order, budget, strategy);
    for g in &ideal.generators {
        eng.add_input(to_gpoly(g, ideal.order));
    }
    let outcome = eng.run()?;
    let stats = RunStats { pairs_processed: eng.rounds, reduction_steps: eng.rows_reduced };
    if let F4Outcome::Unit = outcome {
        return Ok(unit_basis(ideal, stats));
    }
    let mut red = Engine::new(&field, ideal.order, budget, strategy);
    for g in eng.into_basis() {
        red.push_reduced(g);
    }
    let basis = red.reduced_basis()?;
    Ok(assemble(ideal, basis, stats))
}

/// Reduced Gröbner basis by the method suited to the field: the matrix
/// engine over prime fields, the modular method over the rationals.
pub fn groebner_basis<K: Field>(ideal: &Ideal<K>, budget: &Budget) -> Result<GroebnerBasis<K>, GroebnerError> {
    let any: &dyn std::any::Any = ideal;
    if let Some(fp) = any.downcast_ref::<Ideal<PrimeField>>() {
        let gb = f4_basis(fp, budget, SelectionStrategy::Sugar)?;
        let any: Box<dyn std::any::Any> = Box::new(gb);
        return Ok(*any.downcast::<GroebnerBasis<K>>().expect("same type"));
    }
    if let Some(q) = any.downcast_ref::<Ideal<crate::polycore::Rationals>>() {
        let gb = modular_basis(q, budget)?;
        let any: Box<dyn std::any::Any> = Box::new(gb);
        return Ok(*any.downcast::<GroebnerBasis<K>>().expect("same type"));
    }
    buchberger_with(ideal, budget, SelectionStrategy::Sugar)
}

/// A basis from polynomials already known to form a reduced Gröbner basis,
/// sorted by increasing leading monomial.
pub(crate) fn assemble_polys<K: Field>(ideal: &Ideal<K>, polys: Vec<MultiPoly<K>>) -> GroebnerBasis<K> {
    let basis = polys.iter().map(|g| to_gpoly(g, ideal.order)).collect();
    assemble(ideal, basis, RunStats::default())
}

fn unit_basis<K: Field>(ideal: &Ideal<K>, stats: RunStats) -> GroebnerBasis<K> {
    let one = MultiPoly::one(ideal.field.clone(), ideal.nvars);
    GroebnerBasis {
        ideal: Ideal { field: ideal.field.clone(), nvars: ideal.nvars, generators: vec![one], order: ideal.order },
        leading: vec![Monomial::one()],
        stats,
    }
}

fn assemble<K: Field>(ideal: &Ideal<K>, basis: Vec<engine::GPoly<K::Elem>>, stats: RunStats) -> GroebnerBasis<K> {
    let leading = basis.iter().map(|g| g.lm()).collect();
    let generators = basis.iter().map(|g| from_gpoly(&ideal.field, ideal.nvars, g)).collect();
    GroebnerBasis {
        ideal: Ideal { field: ideal.field.clone(), nvars: ideal.nvars, generators, order: ideal.order },
        leading,
        stats,
    }
}

/// Membership test: `f` lies in the ideal iff its normal form vanishes.
pub fn ideal_membership<K: Field>(f: &MultiPoly<K>, gb: &GroebnerBasis<K>) -> Result<bool, GroebnerError> {
    Ok(gb.normal_form(f)?.is_zero())
}

/// Verdict on the existence of common zeros over the algebraic closure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Solvability {
    Solvable,
    Unsolvable,
}

/// Weak Nullstellensatz: unsolvable iff `1` is in the ideal. Prime fields
/// use the matrix engine, other fields Buchberger's algorithm.
pub fn affine_solvable<K: Field>(ideal: &Ideal<K>, budget: &Budget) -> Result<Solvability, GroebnerError> {
    let compressed = compress_exponents(ideal);
    let ideal = &compressed;
    let any: &dyn std::any::Any = ideal;
    let unit = if let Some(fp) = any.downcast_ref::<Ideal<PrimeField>>() {
        let mut eng = F4::new(fp.field, fp.order, budget, SelectionStrategy::Sugar);
        for g in &fp.generators {
            eng.add_input(to_gpoly(g, fp.order));
        }
        matches!(eng.run()?, F4Outcome::Unit)
    } else {
        groebner_basis(ideal, budget)?.is_unit()
    };
    Ok(if unit { Solvability::Unsolvable } else { Solvability::Solvable })
}

/// Replaces `x_v^g` by `x_v` when `g` divides every exponent of `x_v`.
///
/// Since `t -> t^g` is onto over an algebraically closed field, this keeps
/// the solvability verdict. In characteristic `p` it undoes Frobenius
/// twists such as `h(x^p)`, whose Hasse derivatives also only involve `x^p`.
pub fn compress_exponents<K: Field>(ideal: &Ideal<K>) -> Ideal<K> {
    let n = ideal.nvars;
    let mut g = vec![0u32; n];
    for poly in &ideal.generators {
        for (m, _) in poly.terms() {
            for (v, gv) in g.iter_mut().enumerate() {
                *gv = num_integer::gcd(*gv, m.exponent(v));
            }
        }
    }
    if g.iter().all(|&x| x <= 1) {
        return ideal.clone();
    }
    let squeeze = |m: &Monomial| {
        let e: Vec<u32> = (0..n).map(|v| if g[v] > 1 { m.exponent(v) / g[v] } else { m.exponent(v) }).collect();
        Monomial::from_exponents(&e)
    };
    let generators = ideal
        .generators
        .iter()
        .map(|poly| {
            MultiPoly::from_terms(
                ideal.field.clone(),
                n,
                poly.terms().iter().map(|(m, c)| (squeeze(m), c.clone())).collect::<Vec<_>>(),
            )
        })
        .collect();
    Ideal { field: ideal.field.clone(), nvars: n, generators, order: ideal.order }
}

/// Per-chart outcome of a projective emptiness test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChartVerdict {
    /// Chart `i` sets the first `i` coordinates to zero and coordinate `i` to one.
    pub chart: usize,
    pub verdict: Solvability,
}

/// Projective emptiness by a cover of disjoint affine pieces.
///
/// Piece `i` is `{x_0 = .. = x_(i-1) = 0, x_i = 1}`; together they cover
/// projective space exactly once. Returns the verdicts up to and including
/// the first solvable piece.
pub fn projective_charts<K: Field>(
    ideal: &Ideal<K>,
    n_vars: usize,
    budget: &Budget,
) -> Result<Vec<ChartVerdict>, GroebnerError> {
    if n_vars > ideal.nvars {
        return Err(PolyError::VarOutOfRange { index: n_vars - 1, arity: ideal.nvars }.into());
    }
    for g in &ideal.generators {
        g.check_homogeneous()?;
    }
    let field = ideal.field.clone();
    let mut out = Vec::new();
    for i in 0..n_vars {
        let gens: Vec<MultiPoly<K>> =
            ideal.generators.iter().map(|g| dehomogenize_chart(g, i)).collect::<Result<_, _>>()?;
        let chart_ideal = Ideal::with_order(field.clone(), ideal.nvars, gens, ideal.order)?;
        let verdict = affine_solvable(&chart_ideal, budget)?;
        out.push(ChartVerdict { chart: i, verdict });
        if verdict == Solvability::Solvable {
            break;
        }
    }
    Ok(out)
}

/// Apply `x_0 = .. = x_(i-1) = 0, x_i = 1`.
pub fn dehomogenize_chart<K: Field>(g: &MultiPoly<K>, i: usize) -> Result<MultiPoly<K>, PolyError> {
    let field = g.field().clone();
    let terms = g
        .terms()
        .iter()
        .filter(|(m, _)| (0..i).all(|v| m.exponent(v) == 0))
        .map(|(m, c)| (m.with_exponent(i, 0), c.clone()));
    Ok(MultiPoly::from_terms(field, g.nvars(), terms))
}

/// True iff the homogeneous ideal has no zeros in projective space of
/// dimension `n_vars - 1` (over the algebraic closure).
pub fn projective_variety_empty<K: Field>(
    ideal: &Ideal<K>,
    n_vars: usize,
    budget: &Budget,
) -> Result<bool, GroebnerError> {
    let charts = projective_charts(ideal, n_vars, budget)?;
    Ok(charts.iter().all(|c| c.verdict == Solvability::Unsolvable))
}

#[cfg(test)]
mod tests;
