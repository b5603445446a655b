//! Independent per-prime runs over the rationals' reductions.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::polycore::{reduce_mod_p, PolyError, PrimeField, Rationals};

use super::{affine_solvable, Budget, GroebnerError, Ideal, Solvability};

/// Outcome at a single prime.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PrimeVerdict {
    Solvable,
    Unsolvable,
    Timeout { basis_size: usize },
    BadReduction { coefficient: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeRecord {
    pub prime: u64,
    pub verdict: PrimeVerdict,
    pub runtime_ms: u64,
}

/// Per-prime records sorted by prime, with aggregate counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanSummary {
    pub records: Vec<PrimeRecord>,
    pub unsolvable_count: usize,
    pub solvable_primes: Vec<u64>,
}

impl ScanSummary {
    pub fn from_records(mut records: Vec<PrimeRecord>) -> Self {
        records.sort_by_key(|r| r.prime);
        let unsolvable_count = records.iter().filter(|r| r.verdict == PrimeVerdict::Unsolvable).count();
        let solvable_primes = records.iter().filter(|r| r.verdict == PrimeVerdict::Solvable).map(|r| r.prime).collect();
        ScanSummary { records, unsolvable_count, solvable_primes }
    }

    pub fn all_unsolvable(&self) -> bool {
        !self.records.is_empty() && self.unsolvable_count == self.records.len()
    }
}

impl From<Solvability> for PrimeVerdict {
    fn from(s: Solvability) -> Self {
        match s {
            Solvability::Solvable => PrimeVerdict::Solvable,
            Solvability::Unsolvable => PrimeVerdict::Unsolvable,
        }
    }
}

/// Map an error from a per-prime job to a verdict; structural errors other
/// than bad reduction propagate.
pub fn verdict_from_error(e: GroebnerError) -> Result<PrimeVerdict, GroebnerError> {
    match e {
        GroebnerError::Timeout { basis_size, .. } => Ok(PrimeVerdict::Timeout { basis_size }),
        GroebnerError::Poly(PolyError::BadReduction { coefficient, .. }) => {
            Ok(PrimeVerdict::BadReduction { coefficient })
        }
        other => Err(other),
    }
}

/// Run `job` for every prime concurrently and collect records in prime order.
pub fn scan_primes<F>(primes: &[u64], job: F) -> Result<ScanSummary, GroebnerError>
where
    F: Fn(PrimeField) -> Result<Solvability, GroebnerError> + Sync,
{
    for &p in primes {
        PrimeField::new(p)?;
    }
    let records: Vec<Result<PrimeRecord, GroebnerError>> = primes
        .par_iter()
        .map(|&p| {
            let field = PrimeField::new(p).expect("checked");
            let start = Instant::now();
            let verdict = match job(field) {
                Ok(s) => s.into(),
                Err(e) => verdict_from_error(e)?,
            };
            Ok(PrimeRecord { prime: p, verdict, runtime_ms: start.elapsed().as_millis() as u64 })
        })
        .collect();
    let records = records.into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok(ScanSummary::from_records(records))
}

/// Reduce a rational ideal modulo each prime and test affine solvability.
pub fn multi_prime_scan(
    ideal: &Ideal<Rationals>,
    primes: &[u64],
    budget: &Budget,
) -> Result<ScanSummary, GroebnerError> {
    scan_primes(primes, |field| {
        let gens =
            ideal.generators().iter().map(|g| reduce_mod_p(g, field.modulus())).collect::<Result<Vec<_>, _>>()?;
        let reduced = Ideal::with_order(field, ideal.nvars(), gens, ideal.order())?;
        affine_solvable(&reduced, budget)
    })
}
