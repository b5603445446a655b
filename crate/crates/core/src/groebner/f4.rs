//! Matrix-based Gröbner engine over prime fields.
//!
//! Each round selects all critical pairs of minimal degree, gathers the
//! needed multiples of basis elements by symbolic preprocessing, and
//! row-reduces the resulting sparse matrix. Pair bookkeeping uses the same
//! Gebauer-Möller criteria as the Buchberger engine.

use std::time::Instant;

use rustc_hash::{FxHashMap, FxHashSet};

use crate::polycore::{Field, Monomial, MonomialOrder, PrimeField};

use super::engine::GPoly;
use super::{Budget, GroebnerError, SelectionStrategy};

type Row = Vec<(u32, u32)>;

#[derive(Clone, Copy, Debug)]
struct Pair {
    i: usize,
    /// `None` for an input generator waiting to be inserted.
    j: Option<usize>,
    lcm: Monomial,
    sugar: u32,
}

pub(crate) struct F4<'a> {
    field: PrimeField,
    p: u64,
    order: MonomialOrder,
    budget: &'a Budget,
    strategy: SelectionStrategy,
    basis: Vec<GPoly<u64>>,
    redundant: Vec<bool>,
    lms: Vec<Monomial>,
    masks: Vec<u8>,
    pairs: Vec<Pair>,
    inputs: Vec<GPoly<u64>>,
    start: Instant,
    pub rounds: u64,
    pub rows_reduced: u64,
}

pub(crate) enum F4Outcome {
    Complete,
    Unit,
}

impl<'a> F4<'a> {
    pub fn new(field: PrimeField, order: MonomialOrder, budget: &'a Budget, strategy: SelectionStrategy) -> Self {
        F4 {
            field,
            p: field.modulus(),
            order,
            budget,
            strategy,
            basis: Vec::new(),
            redundant: Vec::new(),
            lms: Vec::new(),
            masks: Vec::new(),
            pairs: Vec::new(),
            inputs: Vec::new(),
            start: Instant::now(),
            rounds: 0,
            rows_reduced: 0,
        }
    }

    fn live(&self) -> usize {
        self.redundant.iter().filter(|r| !**r).count()
    }

    fn check_budget(&self) -> Result<(), GroebnerError> {
        let live = self.live();
        let fail = |reason: &str| Err(GroebnerError::Timeout { basis_size: live, reason: reason.into() });
        if let Some(max) = self.budget.max_basis_size {
            if live > max {
                return fail("basis size cap");
            }
        }
        if let Some(max) = self.budget.max_reduction_steps {
            if self.rows_reduced > max {
                return fail("reduction step cap");
            }
        }
        if let Some(limit) = self.budget.time_limit {
            if self.start.elapsed() > limit {
                return fail("time limit");
            }
        }
        if let Some(flag) = &self.budget.cancel {
            if flag.load(std::sync::atomic::Ordering::Relaxed) {
                return fail("cancelled");
            }
        }
        Ok(())
    }

    pub fn add_input(&mut self, g: GPoly<u64>) {
        if g.terms.is_empty() {
            return;
        }
        let idx = self.inputs.len();
        self.pairs.push(Pair { i: idx, j: None, lcm: g.lm(), sugar: g.sugar });
        self.inputs.push(g);
    }

    fn find_reducer(&self, m: &Monomial) -> Option<usize> {
        let mask = m.support_mask();
        let mut best: Option<usize> = None;
        for (idx, lm) in self.lms.iter().enumerate() {
            if self.redundant[idx] || self.masks[idx] & !mask != 0 || !lm.divides(m) {
                continue;
            }
            match best {
                Some(b) if self.basis[b].terms.len() <= self.basis[idx].terms.len() => {}
                _ => best = Some(idx),
            }
        }
        best
    }

    fn select(&mut self) -> Vec<Pair> {
        let deg = |p: &Pair| match self.strategy {
            SelectionStrategy::Normal => p.lcm.degree(),
            SelectionStrategy::Sugar => p.sugar,
        };
        let Some(min) = self.pairs.iter().map(deg).min() else {
            return Vec::new();
        };
        let (sel, rest): (Vec<Pair>, Vec<Pair>) = self.pairs.iter().partition(|p| deg(p) == min);
        self.pairs = rest;
        sel
    }

    pub fn run(&mut self) -> Result<F4Outcome, GroebnerError> {
        loop {
            self.check_budget()?;
            let selected = self.select();
            if selected.is_empty() {
                return Ok(F4Outcome::Complete);
            }
            self.rounds += 1;
            let new_polys = self.reduction_round(&selected)?;
            for h in new_polys {
                if h.lm().is_one() {
                    return Ok(F4Outcome::Unit);
                }
                self.update(h);
            }
        }
    }

    fn reduction_round(&mut self, selected: &[Pair]) -> Result<Vec<GPoly<u64>>, GroebnerError> {
        let p = self.p;
        // rows as (multiplier, source) where source is a basis index or an input index
        #[derive(Clone, Copy, PartialEq, Eq, Hash)]
        enum Src {
            Basis(usize),
            Input(usize),
        }
        let mut rows: Vec<(Monomial, Src)> = Vec::new();
        let mut seen: FxHashSet<(Monomial, Src)> = FxHashSet::default();
        let mut push = |m: Monomial, s: Src, rows: &mut Vec<(Monomial, Src)>| {
            if seen.insert((m, s)) {
                rows.push((m, s));
            }
        };
        for pair in selected {
            match pair.j {
                None => push(Monomial::one(), Src::Input(pair.i), &mut rows),
                Some(j) => {
                    let qi = self.lms[pair.i].divide_into(&pair.lcm).expect("lcm");
                    let qj = self.lms[j].divide_into(&pair.lcm).expect("lcm");
                    push(qi, Src::Basis(pair.i), &mut rows);
                    push(qj, Src::Basis(j), &mut rows);
                }
            }
        }
        let poly_of = |s: Src| -> &GPoly<u64> {
            match s {
                Src::Basis(i) => &self.basis[i],
                Src::Input(i) => &self.inputs[i],
            }
        };
        // symbolic preprocessing
        let mut monos: FxHashSet<Monomial> = FxHashSet::default();
        let mut todo: Vec<Monomial> = Vec::new();
        let mut heads: FxHashSet<Monomial> = FxHashSet::default();
        for &(m, s) in &rows {
            let g = poly_of(s);
            if let Src::Basis(_) = s {
                heads.insert(m.mul(&g.lm()));
            }
            for (t, _) in &g.terms {
                let mt = m.mul(t);
                if monos.insert(mt) {
                    todo.push(mt);
                }
            }
        }
        let mut reducers: Vec<(Monomial, Src)> = Vec::new();
        while let Some(mt) = todo.pop() {
            if heads.contains(&mt) {
                continue;
            }
            if let Some(r) = self.find_reducer(&mt) {
                let q = self.lms[r].divide_into(&mt).expect("divides");
                heads.insert(mt);
                reducers.push((q, Src::Basis(r)));
                for (t, _) in &self.basis[r].terms {
                    let m2 = q.mul(t);
                    if monos.insert(m2) {
                        todo.push(m2);
                    }
                }
            }
        }
        // column order: decreasing in the term order
        let order = self.order;
        let mut cols: Vec<Monomial> = monos.into_iter().collect();
        cols.sort_unstable_by(|a, b| b.order_key(order).cmp(&a.order_key(order)));
        let col_of: FxHashMap<Monomial, u32> = cols.iter().enumerate().map(|(i, m)| (*m, i as u32)).collect();
        let ncols = cols.len();
        let to_row = |m: Monomial, g: &GPoly<u64>| -> Row {
            g.terms.iter().map(|(t, c)| (col_of[&m.mul(t)], *c as u32)).collect()
        };
        // pivot rows: one per leading column; preprocessing reducers first
        let mut pivots: Vec<Option<Row>> = vec![None; ncols];
        for &(m, s) in &reducers {
            let row = to_row(m, poly_of(s));
            let lead = row[0].0 as usize;
            pivots[lead] = Some(row);
        }
        let mut pending: Vec<Row> = Vec::new();
        // sparsest candidate becomes the pivot of its column
        // input generators are never pivots: they are new to the basis
        let mut cand: Vec<(Row, bool)> =
            rows.iter().map(|&(m, s)| (to_row(m, poly_of(s)), matches!(s, Src::Input(_)))).collect();
        cand.sort_by_key(|(r, input)| (*input, r[0].0, r.len()));
        for (row, input) in cand {
            let lead = row[0].0 as usize;
            if !input && pivots[lead].is_none() {
                pivots[lead] = Some(row);
            } else {
                pending.push(row);
            }
        }
        let known: Vec<bool> = pivots.iter().map(|r| r.is_some()).collect();
        // reduce pending rows; rows gaining a fresh leading column become pivots
        let mut fresh: Vec<usize> = Vec::new();
        let mut dense = vec![0u64; ncols];
        for row in pending {
            self.rows_reduced += 1;
            if self.rows_reduced.is_multiple_of(64) {
                self.check_budget()?;
            }
            let first = row[0].0 as usize;
            for &(c, v) in &row {
                dense[c as usize] = v as u64;
            }
            let mut lead: Option<usize> = None;
            for c in first..ncols {
                let v = dense[c];
                if v == 0 {
                    continue;
                }
                match &pivots[c] {
                    Some(prow) => {
                        // pivot rows are monic
                        let f = p - v;
                        for &(pc, pv) in prow {
                            let slot = &mut dense[pc as usize];
                            *slot = (*slot + f * pv as u64) % p;
                        }
                    }
                    None => {
                        if lead.is_none() {
                            lead = Some(c);
                        }
                    }
                }
            }
            let Some(lc) = lead else {
                continue;
            };
            let inv = self.field.inv(&dense[lc]).expect("nonzero");
            let mut out: Row = Vec::new();
            for (c, slot) in dense.iter_mut().enumerate().skip(lc) {
                if *slot != 0 {
                    out.push((c as u32, ((*slot * inv) % p) as u32));
                    *slot = 0;
                }
            }
            pivots[lc] = Some(out);
            fresh.push(lc);
        }
        // back-substitute so fresh rows are reduced with respect to each other
        fresh.sort_unstable();
        let mut result = Vec::with_capacity(fresh.len());
        for &lc in fresh.iter().rev() {
            let row = pivots[lc].take().expect("fresh pivot");
            for &(c, v) in &row {
                dense[c as usize] = v as u64;
            }
            for c in lc + 1..ncols {
                let v = dense[c];
                if v == 0 || known[c] {
                    continue;
                }
                if let Some(prow) = &pivots[c] {
                    let f = p - v;
                    for &(pc, pv) in prow {
                        let slot = &mut dense[pc as usize];
                        *slot = (*slot + f * pv as u64) % p;
                    }
                }
            }
            let mut out: Row = Vec::new();
            for (c, slot) in dense.iter_mut().enumerate().skip(lc) {
                if *slot != 0 {
                    out.push((c as u32, *slot as u32));
                    *slot = 0;
                }
            }
            pivots[lc] = Some(out.clone());
            result.push(out);
        }
        let sugar = selected.iter().map(|p| p.sugar).max().unwrap_or(0);
        let mut polys: Vec<GPoly<u64>> = result
            .into_iter()
            .map(|row| GPoly { terms: row.into_iter().map(|(c, v)| (cols[c as usize], v as u64)).collect(), sugar })
            .collect();
        // largest first, so a smaller new leading monomial retires a larger one
        polys.sort_by_key(|g| std::cmp::Reverse(g.lm().order_key(order)));
        Ok(polys)
    }

    fn update(&mut self, h: GPoly<u64>) {
        let hm = h.lm();
        let new = self.basis.len();
        let cand: Vec<Pair> = (0..new)
            .filter(|&i| !self.redundant[i])
            .map(|i| {
                let lcm = self.lms[i].lcm(&hm);
                let sugar = (lcm.degree() - self.lms[i].degree() + self.basis[i].sugar)
                    .max(lcm.degree() - hm.degree() + h.sugar);
                Pair { i, j: Some(new), lcm, sugar }
            })
            .collect();
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
        let mut fresh = Vec::new();
        for (idx, p) in cand.iter().enumerate() {
            if keep[idx] && !cand.iter().any(|q| q.lcm == p.lcm && self.lms[q.i].coprime(&hm)) {
                fresh.push(*p);
            }
        }
        let lms = &self.lms;
        self.pairs.retain(|p| {
            let Some(j) = p.j else {
                return true;
            };
            if !hm.divides(&p.lcm) {
                return true;
            }
            lms[p.i].lcm(&hm) == p.lcm || lms[j].lcm(&hm) == p.lcm
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

    /// Live basis elements (a Gröbner basis, not necessarily reduced).
    pub fn into_basis(self) -> Vec<GPoly<u64>> {
        self.basis.into_iter().zip(self.redundant).filter(|(_, r)| !r).map(|(g, _)| g).collect()
    }
}
