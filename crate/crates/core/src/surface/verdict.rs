//! Emptiness of projective schemes defined over the rationals, decided over
//! the rationals or through reductions modulo primes.
//!
//! If a homogeneous ideal with integer coefficients has a zero over the
//! closure of the rationals, scaling that zero to have a unit coordinate at a
//! prime above `p` and reducing gives a zero modulo `p`. So an empty
//! reduction at any prime proves emptiness over the rationals; a nonempty
//! reduction proves nothing.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::groebner::{
    projective_variety_empty, scan_primes, Budget, GroebnerError, Ideal, PrimeRecord, PrimeVerdict, Solvability,
};
use crate::polycore::{reduce_mod_p, Rationals};

use super::SurfaceError;

/// Whether a verdict is proved or only supported by evidence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Grade {
    Proof,
    Evidence,
}

impl Grade {
    /// The weaker of two grades.
    pub fn and(self, other: Grade) -> Grade {
        if self == Grade::Proof && other == Grade::Proof {
            Grade::Proof
        } else {
            Grade::Evidence
        }
    }
}

/// Outcome of the computation over the rationals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RationalRun {
    NotRun,
    Empty,
    NonEmpty,
    Timeout,
}

/// Options shared by the global checks.
#[derive(Debug, Clone)]
pub struct CheckOptions {
    /// Primes for the modular runs, in any order.
    pub primes: Vec<u64>,
    /// Also run over the rationals (after the modular runs).
    pub over_q: bool,
    /// Caps for every single Gröbner computation.
    pub budget: Budget,
}

impl CheckOptions {
    pub fn modular(primes: &[u64], budget: Budget) -> Self {
        CheckOptions { primes: primes.to_vec(), over_q: false, budget }
    }

    pub fn rational(budget: Budget) -> Self {
        CheckOptions { primes: Vec::new(), over_q: true, budget }
    }
}

/// Verdict on emptiness with the runs supporting it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmptinessReport {
    /// `None` when no run finished.
    pub empty: Option<bool>,
    pub grade: Grade,
    pub rational: RationalRun,
    /// `unsolvable` means empty modulo that prime.
    pub primes: Vec<PrimeRecord>,
    pub rational_ms: u64,
}

impl EmptinessReport {
    /// Primes at which the reduction is empty.
    pub fn empty_primes(&self) -> Vec<u64> {
        self.primes.iter().filter(|r| r.verdict == PrimeVerdict::Unsolvable).map(|r| r.prime).collect()
    }

    /// True when every prime finished and all gave the same answer.
    pub fn primes_agree(&self) -> bool {
        let first = self.primes.first().map(|r| &r.verdict);
        self.primes.iter().all(|r| {
            matches!(r.verdict, PrimeVerdict::Solvable | PrimeVerdict::Unsolvable) && Some(&r.verdict) == first
        })
    }

    fn assemble(rational: RationalRun, primes: Vec<PrimeRecord>, rational_ms: u64) -> Self {
        let any = |v: PrimeVerdict| primes.iter().any(|r| r.verdict == v);
        let (empty, grade) = match rational {
            RationalRun::Empty => (Some(true), Grade::Proof),
            RationalRun::NonEmpty => (Some(false), Grade::Proof),
            _ if any(PrimeVerdict::Unsolvable) => (Some(true), Grade::Proof),
            _ if any(PrimeVerdict::Solvable) => (Some(false), Grade::Evidence),
            _ => (None, Grade::Evidence),
        };
        EmptinessReport { empty, grade, rational, primes, rational_ms }
    }
}

/// Decide whether the homogeneous ideal (in its first `n_vars` variables)
/// has no projective zeros. Modular runs come first; the rational run, when
/// requested, is authoritative.
pub fn projective_emptiness(
    ideal: &Ideal<Rationals>,
    n_vars: usize,
    opts: &CheckOptions,
) -> Result<EmptinessReport, SurfaceError> {
    let integral: Vec<_> = ideal.generators().iter().map(|g| g.primitive_part()).collect();
    let summary = scan_primes(&opts.primes, |field| {
        let gens = integral.iter().map(|g| reduce_mod_p(g, field.modulus())).collect::<Result<Vec<_>, _>>()?;
        let reduced = Ideal::with_order(field, ideal.nvars(), gens, ideal.order())?;
        Ok(if projective_variety_empty(&reduced, n_vars, &opts.budget)? {
            Solvability::Unsolvable
        } else {
            Solvability::Solvable
        })
    })?;
    let start = Instant::now();
    let rational = if opts.over_q {
        match projective_variety_empty(ideal, n_vars, &opts.budget) {
            Ok(true) => RationalRun::Empty,
            Ok(false) => RationalRun::NonEmpty,
            Err(GroebnerError::Timeout { .. }) => RationalRun::Timeout,
            Err(e) => return Err(e.into()),
        }
    } else {
        RationalRun::NotRun
    };
    let ms = start.elapsed().as_millis() as u64;
    Ok(EmptinessReport::assemble(rational, summary.records, ms))
}
