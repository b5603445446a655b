//! From singularity evidence to `alpha_1`, and the full comparison report.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::germ::{a_class_lct, lct_of_germ};
use crate::groebner::{Budget, PrimeRecord, PrimeVerdict};
use crate::surface::{
    hessian_curve_smooth, hessian_rank_locus_empty, is_smooth, star_point_scan, tangent_section, worst_a_scan,
    CheckOptions, EmptinessReport, Grade, ProjectiveSurface, RationalRun, StarPointScan, WorstA, WorstAScan,
};

use super::{alpha_upper_bounds, ratio_text, Alpha1, AlphaError, UpperBound, DEFAULT_SQRT_K};

#[derive(Debug, Clone)]
pub struct AlphaOptions {
    pub primes: Vec<u64>,
    /// Largest `m` for the `A_m` scan; `0` skips the scan.
    pub m_max: u32,
    pub budget: Budget,
    /// Also run the global checks over the rationals.
    pub over_q: bool,
    pub sqrt_k: u64,
}

impl AlphaOptions {
    pub fn new(primes: &[u64], m_max: u32, budget: Budget) -> Self {
        AlphaOptions { primes: primes.to_vec(), m_max, budget, over_q: false, sqrt_k: DEFAULT_SQRT_K }
    }

    fn checks(&self) -> CheckOptions {
        CheckOptions { primes: self.primes.clone(), over_q: self.over_q, budget: self.budget.clone() }
    }
}

/// What is known about the worst singular point of a tangent section.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WorstSingularity {
    /// `d` concurrent lines.
    StarPoint {
        points: Vec<String>,
    },
    /// The scan settled on `A_m`.
    A {
        m: u32,
    },
    /// The scan found `A_m` solvable at its upper limit.
    AtLeastA {
        m: u32,
    },
    /// Every tangent section has only double points, type not determined.
    DoublePointsOnly,
    Unknown,
}

/// Inputs to [`alpha1_from_scan`].
#[derive(Debug, Clone, Default)]
pub struct SingularityEvidence {
    pub star: Option<StarPointScan>,
    /// The log canonical threshold of the section at the first rational star point.
    pub star_lct: Option<BigRational>,
    /// Set when no tangent section has a point of multiplicity 3 or more.
    pub no_triple_points: Option<Grade>,
    pub scan: Option<WorstAScan>,
}

impl SingularityEvidence {
    fn has_star(&self) -> bool {
        self.star.as_ref().is_some_and(|s| !s.points.is_empty() || s.irrational || s.positive_dimensional)
    }
}

/// `alpha_1` from the evidence, with the worst singularity and the grade of
/// the value.
///
/// Every smooth surface of degree `d` has `alpha_1 >= alpha >= 2/d`, and a
/// star point attains it. Without points of multiplicity 3 every singular
/// point of a tangent section is `A_m`, giving `alpha_1 = 1/2 + 1/(m + 1)`
/// for the worst `m`, and in any case `alpha_1 > 1/2`.
pub fn alpha1_from_scan(d: u32, ev: &SingularityEvidence) -> (Alpha1, WorstSingularity, Grade) {
    let two_over_d = BigRational::new(2.into(), BigInt::from(d.max(1))).min(BigRational::one());
    let half = BigRational::new(1.into(), 2.into());
    if ev.has_star() {
        let points = ev.star.as_ref().map(|s| s.points.iter().map(|p| p.to_string()).collect()).unwrap_or_default();
        let value = ev.star_lct.clone().unwrap_or(two_over_d).min(BigRational::one());
        return (Alpha1::exact(value), WorstSingularity::StarPoint { points }, Grade::Proof);
    }
    let Some(grade) = ev.no_triple_points else {
        let interval = Alpha1::Interval {
            lower: two_over_d,
            lower_strict: false,
            upper: BigRational::one(),
            reason: "sections with a point of multiplicity 3 or more are not excluded".into(),
        };
        return (interval, WorstSingularity::Unknown, Grade::Evidence);
    };
    let open = |reason: &str| Alpha1::Interval {
        lower: half.clone(),
        lower_strict: true,
        upper: BigRational::one(),
        reason: reason.into(),
    };
    let Some(scan) = &ev.scan else {
        return (open("no A_m scan was run"), WorstSingularity::DoublePointsOnly, grade);
    };
    match scan.consensus() {
        Some(WorstA::Found(m)) if *m < scan.m_max => {
            (Alpha1::exact(a_class_lct(*m)), WorstSingularity::A { m: *m }, Grade::Evidence)
        }
        Some(WorstA::Found(m)) => {
            let interval = Alpha1::Interval {
                lower: half,
                lower_strict: true,
                upper: a_class_lct(*m),
                reason: format!("the scan stopped at its limit m = {m}"),
            };
            (interval, WorstSingularity::AtLeastA { m: *m }, Grade::Evidence)
        }
        // no tangent section is singular: not possible for a smooth surface
        Some(WorstA::None) => (Alpha1::exact(BigRational::one()), WorstSingularity::DoublePointsOnly, Grade::Evidence),
        _ => (open("the primes of the A_m scan disagree or did not finish"), WorstSingularity::DoublePointsOnly, grade),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TianVerdict {
    /// Some upper bound on `alpha` lies strictly below `alpha_1`.
    CounterexampleEvidence,
    /// No bound separates `alpha` from `alpha_1`.
    Consistent,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvidenceRecord {
    pub check: String,
    pub prime: u64,
    pub verdict: String,
    pub runtime_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaReport {
    pub degree: u32,
    pub alpha1: Alpha1,
    pub worst_singularity: WorstSingularity,
    pub bounds: Vec<UpperBound>,
    pub evidence: Vec<EvidenceRecord>,
    pub tian_verdict: TianVerdict,
    /// `Proof` when every ingredient of the verdict is certified.
    pub grade: Grade,
    pub notes: Vec<String>,
}

impl AlphaReport {
    /// The least upper bound on `alpha`.
    pub fn min_bound(&self) -> Option<&UpperBound> {
        self.bounds.iter().min_by(|a, b| a.value.cmp(&b.value))
    }

    pub fn bound(&self, p: super::Provenance) -> Option<&BigRational> {
        self.bounds.iter().find(|b| b.provenance == p).map(|b| &b.value)
    }

    /// Zero all runtimes, for output that is identical across runs.
    pub fn without_timings(mut self) -> Self {
        for e in &mut self.evidence {
            e.runtime_ms = 0;
        }
        self
    }
}

fn verdict_text(v: &PrimeVerdict) -> String {
    match v {
        PrimeVerdict::Solvable => "solvable".into(),
        PrimeVerdict::Unsolvable => "unsolvable".into(),
        PrimeVerdict::Timeout { basis_size } => format!("timeout (basis size {basis_size})"),
        PrimeVerdict::BadReduction { coefficient } => format!("bad reduction ({coefficient})"),
    }
}

fn push_records(out: &mut Vec<EvidenceRecord>, check: &str, records: &[PrimeRecord]) {
    out.extend(records.iter().map(|r| EvidenceRecord {
        check: check.into(),
        prime: r.prime,
        verdict: verdict_text(&r.verdict),
        runtime_ms: r.runtime_ms,
    }));
}

fn describe(name: &str, r: &EmptinessReport) -> String {
    let answer = match r.empty {
        Some(true) => "yes",
        Some(false) => "no",
        None => "undecided",
    };
    let grade = match r.grade {
        Grade::Proof => "proof",
        Grade::Evidence => "evidence",
    };
    let q = match r.rational {
        RationalRun::NotRun => "",
        RationalRun::Empty => ", empty over Q",
        RationalRun::NonEmpty => ", nonempty over Q",
        RationalRun::Timeout => ", timeout over Q",
    };
    format!("{name}: {answer} ({grade}{q})")
}

/// Compare the certified upper bounds on `alpha` with `alpha_1`.
pub fn tian_verdict(
    s: &ProjectiveSurface,
    opts: &AlphaOptions,
    progress: &(dyn Fn(&str) + Sync),
) -> Result<AlphaReport, AlphaError> {
    let d = s.degree();
    if d < 2 {
        return Err(AlphaError::DegreeTooLow(d));
    }
    let checks = opts.checks();
    let mut evidence = Vec::new();
    let mut notes = Vec::new();
    let mut grade = Grade::Proof;

    progress("smoothness");
    let smooth = is_smooth(s, &checks)?;
    push_records(&mut evidence, "smooth", &smooth.primes);
    notes.push(describe("smooth", &smooth));
    match smooth.empty {
        Some(false) => return Err(AlphaError::Singular),
        Some(true) => grade = grade.and(smooth.grade),
        None => {
            grade = Grade::Evidence;
            notes.push("smoothness was not settled".into());
        }
    }

    progress("star points");
    let mut ev = SingularityEvidence::default();
    match star_point_scan(s, &opts.budget) {
        Ok(scan) => {
            if let Some(p) = scan.points.first() {
                ev.star_lct = Some(lct_of_germ(&tangent_section(s, p)?.germ)?);
            }
            ev.star = Some(scan);
        }
        Err(e) => notes.push(format!("star point scan failed: {e}")),
    }

    if !ev.has_star() && d >= 3 {
        progress("Hessian curve");
        let hc = hessian_curve_smooth(s, &checks)?;
        push_records(&mut evidence, "hessian_curve", &hc.singular_locus.primes);
        notes.push(describe("Hessian curve smooth", &hc.singular_locus));
        if hc.smooth() == Some(true) {
            ev.no_triple_points = Some(hc.singular_locus.grade);
        } else {
            progress("Hessian rank locus");
            let rank = hessian_rank_locus_empty(s, 2, &checks)?;
            push_records(&mut evidence, "hessian_rank_le_2", &rank.primes);
            notes.push(describe("Hessian rank <= 2 nowhere on S", &rank));
            if rank.empty == Some(true) {
                ev.no_triple_points = Some(rank.grade);
            }
        }
        if ev.no_triple_points.is_some() && opts.m_max > 0 {
            progress("A_m scan");
            let scan = worst_a_scan(s, &opts.primes, opts.m_max, &opts.budget, progress)?;
            for r in &scan.records {
                let verdict = match &r.worst {
                    WorstA::Found(m) => format!("worst A_{m}"),
                    WorstA::None => "no A_m".into(),
                    WorstA::Timeout(m) => format!("timeout at m = {m}"),
                    WorstA::BadReduction => "bad reduction".into(),
                };
                evidence.push(EvidenceRecord {
                    check: "worst_a".into(),
                    prime: r.prime,
                    verdict,
                    runtime_ms: r.runtime_ms,
                });
            }
            ev.scan = Some(scan);
        }
    } else if d == 2 {
        // tangent sections of a smooth quadric are line pairs
        ev.no_triple_points = Some(Grade::Proof);
    }

    let (alpha1, worst, a_grade) = alpha1_from_scan(d, &ev);
    let bounds = alpha_upper_bounds(s, &alpha1, ev.star.as_ref(), opts.sqrt_k)?;
    let min = bounds.iter().map(|b| &b.value).min().expect("at least one bound").clone();
    let half = BigRational::new(1.into(), 2.into());
    let tian = if alpha1.strictly_above(&min) {
        // the bounds are certificates, so only the lower end of alpha_1 matters;
        // below 1/2 it rests on the absence of triple points alone
        grade = match ev.no_triple_points {
            Some(g) if min <= half => grade.and(g),
            _ => grade.and(a_grade),
        };
        TianVerdict::CounterexampleEvidence
    } else if matches!(alpha1, Alpha1::Exact { .. }) || &min >= alpha1.upper() {
        grade = grade.and(a_grade);
        TianVerdict::Consistent
    } else {
        grade = Grade::Evidence;
        notes.push(format!("the least bound {} lies inside the range of alpha_1", ratio_text::to_text(&min)));
        TianVerdict::Unknown
    };
    if d == 4 {
        notes.push("for quartics alpha = alpha_1 is expected, so no bound should separate them".into());
    }
    Ok(AlphaReport { degree: d, alpha1, worst_singularity: worst, bounds, evidence, tian_verdict: tian, grade, notes })
}
