//! Buchberger's algorithm with the Gebauer-Möller pair update.

use std::collections::BinaryHeap;
use std::time::Instant;

use rustc_hash::FxHashMap;

use crate::polycore::{Field, Monomial, MonomialOrder, MultiPoly};

use super::{Budget, GroebnerError, SelectionStrategy};

/// Polynomial with terms sorted by decreasing order key.
#[derive(Clone, Debug)]
pub(crate) struct GPoly<E> {
    pub terms: Vec<(Monomial, E)>,
    pub sugar: u32,
}

impl<E: Clone> GPoly<E> {
    pub fn lm(&self) -> Monomial {
        self.terms[0].0
    }
}

pub(crate) fn to_gpoly<K: Field>(p: &MultiPoly<K>, order: MonomialOrder) -> GPoly<K::Elem> {
    let mut terms = p.terms().to_vec();
    if order != MonomialOrder::GrevLex {
        terms.sort_unstable_by(|a, b| b.0.order_key(order).cmp(&a.0.order_key(order)));
    }
    let sugar = p.total_degree().unwrap_or(0);
    GPoly { terms, sugar }
}

pub(crate) fn from_gpoly<K: Field>(field: &K, nvars: usize, g: &GPoly<K::Elem>) -> MultiPoly<K> {
    MultiPoly::from_terms(field.clone(), nvars, g.terms.iter().cloned())
}

/// Sparse accumulator: a max-heap of order keys plus a coefficient map.
struct Accumulator<E> {
    heap: BinaryHeap<u128>,
    map: FxHashMap<u128, (Monomial, E)>,
    order: MonomialOrder,
}

impl<E: Clone> Accumulator<E> {
    fn new(order: MonomialOrder) -> Self {
        Accumulator { heap: BinaryHeap::new(), map: FxHashMap::default(), order }
    }

    fn add<K: Field<Elem = E>>(&mut self, field: &K, m: Monomial, c: E) {
        let key = m.order_key(self.order);
        match self.map.get_mut(&key) {
            Some(slot) => field.add_assign(&mut slot.1, &c),
            None => {
                self.map.insert(key, (m, c));
                self.heap.push(key);
            }
        }
    }

    fn pop<K: Field<Elem = E>>(&mut self, field: &K) -> Option<(Monomial, E)> {
        while let Some(key) = self.heap.pop() {
            if let Some((m, c)) = self.map.remove(&key) {
                if !field.is_zero(&c) {
                    return Some((m, c));
                }
            }
        }
        None
    }
}

#[derive(Clone, Copy, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: u32,
}

pub(crate) struct Engine<'a, K: Field> {
    pub field: &'a K,
    pub order: MonomialOrder,
    pub budget: &'a Budget,
    pub strategy: SelectionStrategy,
    pub basis: Vec<GPoly<K::Elem>>,
    pub redundant: Vec<bool>,
    lms: Vec<Monomial>,
    masks: Vec<u8>,
    pairs: Vec<Pair>,
    start: Instant,
    pub steps: u64,
    pub pairs_processed: u64,
}

/// Result of running the engine to completion.
pub(crate) enum Outcome {
    Complete,
    /// A nonzero constant was found: the ideal is the whole ring.
    Unit,
}

impl<'a, K: Field> Engine<'a, K> {
    pub fn new(field: &'a K, order: MonomialOrder, budget: &'a Budget, strategy: SelectionStrategy) -> Self {
        Engine {
            field,
            order,
            budget,
            strategy,
            basis: Vec::new(),
            redundant: Vec::new(),
            lms: Vec::new(),
            masks: Vec::new(),
            pairs: Vec::new(),
            start: Instant::now(),
            steps: 0,
            pairs_processed: 0,
        }
    }

    fn key(&self, m: &Monomial) -> u128 {
        m.order_key(self.order)
    }

    fn check_budget(&self) -> Result<(), GroebnerError> {
        let live = self.redundant.iter().filter(|r| !**r).count();
        if let Some(max) = self.budget.max_basis_size {
            if live > max {
                return Err(GroebnerError::Timeout { basis_size: live, reason: "basis size cap".into() });
            }
        }
        if let Some(max) = self.budget.max_reduction_steps {
            if self.steps > max {
                return Err(GroebnerError::Timeout { basis_size: live, reason: "reduction step cap".into() });
            }
        }
        if let Some(limit) = self.budget.time_limit {
            if self.start.elapsed() > limit {
                return Err(GroebnerError::Timeout { basis_size: live, reason: "time limit".into() });
            }
        }
        if let Some(flag) = &self.budget.cancel {
            if flag.load(std::sync::atomic::Ordering::Relaxed) {
                return Err(GroebnerError::Timeout { basis_size: live, reason: "cancelled".into() });
            }
        }
        Ok(())
    }

    fn find_reducer(&self, m: &Monomial) -> Option<usize> {
        let mask = m.support_mask();
        for (idx, lm) in self.lms.iter().enumerate() {
            if self.redundant[idx] {
                continue;
            }
            if self.masks[idx] & !mask == 0 && lm.divides(m) {
                return Some(idx);
            }
        }
        None
    }

    /// Fully reduce the terms held in `acc` by the current basis.
    fn reduce_acc(&mut self, mut acc: Accumulator<K::Elem>, mut sugar: u32) -> Result<GPoly<K::Elem>, GroebnerError> {
        let f = self.field;
        let mut rem: Vec<(Monomial, K::Elem)> = Vec::new();
        let mut tick = 0u32;
        while let Some((m, c)) = acc.pop(f) {
            match self.find_reducer(&m) {
                Some(idx) => {
                    let g = &self.basis[idx];
                    let q = g.lm().divide_into(&m).expect("divisor");
                    sugar = sugar.max(q.degree() + g.sugar);
                    let negc = f.neg(&c);
                    for (t, tc) in &g.terms[1..] {
                        acc.add(f, q.mul(t), f.mul(&negc, tc));
                    }
                    self.steps += g.terms.len() as u64;
                    tick += 1;
                    if tick.is_multiple_of(256) {
                        self.check_budget()?;
                    }
                }
                None => rem.push((m, c)),
            }
        }
        Ok(GPoly { terms: rem, sugar })
    }

    pub fn normal_form(&mut self, p: &GPoly<K::Elem>) -> Result<GPoly<K::Elem>, GroebnerError> {
        let mut acc = Accumulator::new(self.order);
        for (m, c) in &p.terms {
            acc.add(self.field, *m, c.clone());
        }
        self.reduce_acc(acc, p.sugar)
    }

    fn make_monic(&self, p: &mut GPoly<K::Elem>) {
        let lc = p.terms[0].1.clone();
        if self.field.is_one(&lc) {
            return;
        }
        let inv = self.field.inv(&lc).expect("nonzero");
        for t in &mut p.terms {
            t.1 = self.field.mul(&t.1, &inv);
        }
    }

    /// Insert an element of an already reduced basis, without forming pairs.
    pub fn push_reduced(&mut self, g: GPoly<K::Elem>) {
        self.lms.push(g.lm());
        self.masks.push(g.lm().support_mask());
        self.redundant.push(false);
        self.basis.push(g);
    }

    /// Reduce, normalize and insert a polynomial. Returns `Unit` when it
    /// reduces to a nonzero constant.
    pub fn add_generator(&mut self, p: &GPoly<K::Elem>) -> Result<Option<Outcome>, GroebnerError> {
        let mut h = self.normal_form(p)?;
        if h.terms.is_empty() {
            return Ok(None);
        }
        self.make_monic(&mut h);
        if h.lm().is_one() {
            return Ok(Some(Outcome::Unit));
        }
        self.update(h);
        Ok(None)
    }

    fn spoly_reduce(&mut self, pair: Pair) -> Result<GPoly<K::Elem>, GroebnerError> {
        let f = self.field;
        let gi = &self.basis[pair.i];
        let gj = &self.basis[pair.j];
        let qi = gi.lm().divide_into(&pair.lcm).expect("lcm");
        let qj = gj.lm().divide_into(&pair.lcm).expect("lcm");
        let mut acc = Accumulator::new(self.order);
        for (t, c) in &gi.terms[1..] {
            acc.add(f, qi.mul(t), c.clone());
        }
        let minus_one = f.neg(&f.one());
        for (t, c) in &gj.terms[1..] {
            acc.add(f, qj.mul(t), f.mul(&minus_one, c));
        }
        self.steps += (gi.terms.len() + gj.terms.len()) as u64;
        self.reduce_acc(acc, pair.sugar)
    }

    fn update(&mut self, h: GPoly<K::Elem>) {
        let hm = h.lm();
        let new = self.basis.len();
        // candidate pairs with every live element
        let cand: Vec<Pair> = (0..new)
            .filter(|&i| !self.redundant[i])
            .map(|i| {
                let lcm = self.lms[i].lcm(&hm);
                let sugar = (lcm.degree() - self.lms[i].degree() + self.basis[i].sugar)
                    .max(lcm.degree() - hm.degree() + h.sugar);
                Pair { i, j: new, lcm, sugar }
            })
            .collect();
        // criterion M/F: drop pairs whose lcm is a proper multiple (or a later duplicate)
        let mut keep = vec![true; cand.len()];
        for a in 0..cand.len() {
            for b in 0..cand.len() {
                if a == b || !keep[b] {
                    continue;
                }
                if cand[b].lcm.divides(&cand[a].lcm) && (cand[b].lcm != cand[a].lcm || b < a) {
                    keep[a] = false;
                    break;
                }
            }
        }
        // criterion 1: a group of equal lcms goes if any member is coprime
        let mut fresh: Vec<Pair> = Vec::new();
        for (idx, p) in cand.iter().enumerate() {
            if !keep[idx] {
                continue;
            }
            let coprime = cand.iter().any(|q| q.lcm == p.lcm && self.lms[q.i].coprime(&hm));
            if !coprime {
                fresh.push(*p);
            }
        }
        // criterion B on old pairs
        let lms = &self.lms;
        self.pairs.retain(|p| {
            if !hm.divides(&p.lcm) {
                return true;
            }
            let li = lms[p.i].lcm(&hm);
            let lj = lms[p.j].lcm(&hm);
            li == p.lcm || lj == p.lcm
        });
        self.pairs.extend(fresh);
        for i in 0..new {
            if !self.redundant[i] && hm.divides(&self.lms[i]) {
                self.redundant[i] = true;
            }
        }
        self.lms.push(hm);
        self.masks.push(hm.support_mask());
        self.redundant.push(false);
        self.basis.push(h);
    }

    fn select_pair(&mut self) -> Option<Pair> {
        if self.pairs.is_empty() {
            return None;
        }
        let order = self.order;
        let key = |p: &Pair| match self.strategy {
            SelectionStrategy::Normal => (p.lcm.degree(), 0u128, p.i, p.j),
            SelectionStrategy::Sugar => (p.sugar, p.lcm.order_key(order), p.i, p.j),
        };
        let (best, _) = self.pairs.iter().enumerate().min_by_key(|(_, p)| key(p))?;
        Some(self.pairs.swap_remove(best))
    }

    pub fn run(&mut self) -> Result<Outcome, GroebnerError> {
        while let Some(pair) = self.select_pair() {
            self.check_budget()?;
            self.pairs_processed += 1;
            let mut h = self.spoly_reduce(pair)?;
            if h.terms.is_empty() {
                continue;
            }
            self.make_monic(&mut h);
            if h.lm().is_one() {
                return Ok(Outcome::Unit);
            }
            self.update(h);
        }
        Ok(Outcome::Complete)
    }

    /// True iff every S-polynomial of the basis reduces to zero, so that the
    /// basis is a Gröbner basis. Pairs are skipped by the product criterion
    /// and by the chain criterion against pairs already checked.
    pub fn is_groebner(&mut self) -> Result<bool, GroebnerError> {
        let live: Vec<usize> = (0..self.basis.len()).filter(|&i| !self.redundant[i]).collect();
        let n = self.basis.len();
        let mut pairs: Vec<(usize, usize, Monomial)> = Vec::new();
        for (a, &i) in live.iter().enumerate() {
            for &j in &live[a + 1..] {
                pairs.push((i, j, self.lms[i].lcm(&self.lms[j])));
            }
        }
        let order = self.order;
        pairs.sort_by_key(|p| (p.2.degree(), p.2.order_key(order), p.0, p.1));
        let idx = |a: usize, b: usize| a.min(b) * n + a.max(b);
        let mut done = vec![false; n * n];
        for (i, j, lcm) in pairs {
            self.check_budget()?;
            let skip = self.lms[i].coprime(&self.lms[j])
                || live
                    .iter()
                    .any(|&k| k != i && k != j && self.lms[k].divides(&lcm) && done[idx(i, k)] && done[idx(j, k)]);
            if !skip && !self.spoly_reduce(Pair { i, j, lcm, sugar: 0 })?.terms.is_empty() {
                return Ok(false);
            }
            done[idx(i, j)] = true;
        }
        Ok(true)
    }

    /// Minimal, tail-reduced, monic basis sorted by increasing leading monomial.
    pub fn reduced_basis(&mut self) -> Result<Vec<GPoly<K::Elem>>, GroebnerError> {
        let live: Vec<usize> = (0..self.basis.len()).filter(|&i| !self.redundant[i]).collect();
        let mut out = Vec::with_capacity(live.len());
        for &i in &live {
            let g = self.basis[i].clone();
            // reduce the tail by the other live elements
            self.redundant[i] = true;
            let tail = GPoly { terms: g.terms[1..].to_vec(), sugar: g.sugar };
            let red = self.normal_form(&tail)?;
            self.redundant[i] = false;
            let mut terms = vec![g.terms[0].clone()];
            terms.extend(red.terms);
            out.push(GPoly { terms, sugar: g.sugar });
        }
        out.sort_by_key(|g| self.key(&g.lm()));
        Ok(out)
    }
}
