//! The acceptance criteria, one test each. Every test writes a single
//! `criterion N: PASS|FAIL ...` line straight to stderr, past the test
//! harness's output capture, and then asserts the criterion.

use std::io::Write;
use std::time::{Duration, Instant};

use alphasurf::alpha::{
    family_local_form, family_surface, tian_verdict, Alpha1, AlphaOptions, Provenance, TianVerdict,
};
use alphasurf::germ::{germ_multiplicity, lct_of_germ, AClass, CurveGerm, GermError};
use alphasurf::groebner::{groebner_basis, Budget, Ideal, PrimeVerdict};
use alphasurf::polycore::{Monomial, QPoly, Rationals};
use alphasurf::surface::{
    classify_quartic_tangent_section, hessian_curve_smooth, hessian_rank_locus_empty, incidence_conditions, is_smooth,
    monomial_text, star_point_scan, tangent_section, worst_a_scan, CheckOptions, Grade, IncidenceLevel, PointSweep,
    ProjectiveSurface, QuarticCase, RationalRun, SurfacePoint,
};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn budget(secs: u64) -> Budget {
    Budget::with_time_limit(Duration::from_secs(secs))
}

/// Print the verdict line, then fail the test if the criterion failed.
fn conclude(n: u32, start: Instant, limit: Duration, failures: Vec<String>, detail: &str) {
    let elapsed = start.elapsed();
    let mut failures = failures;
    if elapsed > limit {
        failures.push(format!("runtime {:.1?} exceeds {:?}", elapsed, limit));
    }
    let line = if failures.is_empty() {
        format!("criterion {n}: PASS ({elapsed:.1?}) {detail}\n")
    } else {
        format!("criterion {n}: FAIL ({elapsed:.1?}) {}\n", failures.join("; "))
    };
    let _ = std::io::stderr().write_all(line.as_bytes());
    assert!(failures.is_empty(), "{line}");
}

fn random_germ(rng: &mut ChaCha8Rng) -> QPoly {
    let n = rng.gen_range(1..=8);
    let terms: Vec<(Monomial, BigRational)> = (0..n)
        .map(|_| {
            let deg = rng.gen_range(1..=8u32);
            let i = rng.gen_range(0..=deg);
            let c = loop {
                let c = rng.gen_range(-5i64..=5);
                if c != 0 {
                    break c;
                }
            };
            (Monomial::from_exponents(&[i, deg - i]), q(c, 1))
        })
        .collect();
    QPoly::from_terms(Rationals, 2, terms)
}

/// `f` is squarefree when `f, f_x, f_y` have finitely many common zeros.
fn is_reduced(f: &QPoly) -> bool {
    let gens = vec![f.clone(), f.partial_derivative(0).unwrap(), f.partial_derivative(1).unwrap()];
    let ideal = Ideal::new(Rationals, 2, gens).unwrap();
    groebner_basis(&ideal, &budget(60)).is_ok_and(|gb| gb.is_unit() || gb.is_zero_dimensional())
}

#[test]
fn criterion_01_multiplicity_sandwich() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut checked, mut skipped) = (0, 0);
    let mut failures = Vec::new();
    while checked < 200 {
        let p = random_germ(&mut rng);
        let Ok(g) = CurveGerm::new(p.clone()) else {
            skipped += 1;
            continue;
        };
        if !is_reduced(&p) {
            skipped += 1;
            continue;
        }
        let lct = match lct_of_germ(&g) {
            Ok(l) => l,
            Err(GermError::IrrationalCenter) => {
                skipped += 1;
                continue;
            }
            Err(e) => {
                failures.push(format!("{p}: {e}"));
                checked += 1;
                continue;
            }
        };
        let m = q(i64::from(germ_multiplicity(&g)), 1);
        if !(m.recip() <= lct && lct <= q(2, 1) / &m) {
            failures.push(format!("{p}: lct {lct} outside [1/{m}, 2/{m}]"));
        }
        checked += 1;
    }
    let detail = format!("200 reduced germs, {skipped} draws skipped (zero, non-reduced or irrational centres)");
    conclude(1, start, Duration::from_secs(120), failures, &detail);
}

#[test]
fn criterion_02_germ_table() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut check = |text: &str, want: BigRational| match CurveGerm::parse(text).and_then(|g| lct_of_germ(&g)) {
        Ok(got) if got == want => {}
        Ok(got) => failures.push(format!("lct({text}) = {got}, expected {want}")),
        Err(e) => failures.push(format!("lct({text}): {e}")),
    };
    for m in 1..=9i64 {
        let want = (q(1, 2) + q(1, m + 1)).min(q(1, 1));
        check(&format!("y^2 - x^{}", m + 1), want);
    }
    check("y^2 - x^3", q(5, 6));
    check("x*y", q(1, 1));
    check("y^2 - x^2", q(1, 1));
    conclude(2, start, Duration::from_secs(10), failures, "A_1..A_9, cusp 5/6, node 1");
}

#[test]
fn criterion_03_family_local_form() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for d in 4..=7u32 {
        let local = family_local_form(d).unwrap();
        let y = QPoly::var(Rationals, 2, 0);
        let z = QPoly::var(Rationals, 2, 1);
        let expected = &(&y - &z).pow(d) - &(-(&y * &z)).pow(d);
        if local != expected {
            failures.push(format!("d = {d}: local form {local}"));
            continue;
        }
        let lct = lct_of_germ(&CurveGerm::new(local).unwrap()).unwrap();
        let want = q(3, 2 * i64::from(d));
        if lct != want {
            failures.push(format!("d = {d}: lct {lct}, expected {want}"));
        }
        // the divisor lies in |2H|, so alpha_2 <= 2 lct = 3/d
        if &lct * q(2, 1) != q(3, i64::from(d)) {
            failures.push(format!("d = {d}: 2 lct != 3/d"));
        }
    }
    conclude(3, start, Duration::from_secs(60), failures, "lct = 3/(2d) for d = 4..7");
}

#[test]
fn criterion_04_incidence_data() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut want: Vec<String> = ["y*z*w^2", "y*w^3", "z^3*w", "z^2*w^2", "z*w^3", "w^4"].map(String::from).to_vec();
    want.sort();
    let a3 = incidence_conditions(4, IncidenceLevel::A3orWorse).unwrap();
    let mut got: Vec<String> = a3.linear.iter().map(monomial_text).collect();
    got.sort();
    if got != want {
        failures.push(format!("A3 monomials {got:?}"));
    }
    if a3.linear_rank != 6 || !a3.quadratic.is_empty() || a3.codimension != 6 {
        failures.push(format!("A3 rank {} codimension {}", a3.linear_rank, a3.codimension));
    }
    let a4 = incidence_conditions(4, IncidenceLevel::A4orWorse).unwrap();
    if a4.linear != a3.linear {
        failures.push("A4 linear part differs from A3".into());
    }
    if a4.quadratic.len() != 1 || a4.codimension != 7 {
        failures.push(format!("A4: {} quadratic conditions, codimension {}", a4.quadratic.len(), a4.codimension));
    }
    let detail =
        format!("6 monomials, rank 6; A4 adds {} = 0", a4.quadratic.first().map_or(String::new(), |c| c.to_text()));
    conclude(4, start, Duration::from_secs(5), failures, &detail);
}

#[test]
fn criterion_05_example_surface() {
    let start = Instant::now();
    let s = ProjectiveSurface::parse("x^4 + y^4 + z^4 + w^4 + (x^2 + y^2 + z^2 + w^2)^2").unwrap();
    let opts = CheckOptions { primes: vec![101, 103, 107], over_q: true, budget: budget(1800) };
    let mut failures = Vec::new();
    let smooth = is_smooth(&s, &opts).unwrap();
    let rank = hessian_rank_locus_empty(&s, 2, &opts).unwrap();
    let mut grades = Vec::new();
    for (name, r) in [("smooth", &smooth), ("rank <= 2 locus empty", &rank)] {
        let pre = r.empty_primes().len();
        if pre != 3 {
            failures.push(format!("{name}: {pre} of 3 primes agree"));
        }
        match r.rational {
            RationalRun::Empty => grades.push(format!("{name}: empty over Q")),
            RationalRun::Timeout if pre >= 3 => grades.push(format!("{name}: evidence only (timeout over Q)")),
            other => failures.push(format!("{name}: {other:?} over Q")),
        }
    }
    conclude(5, start, Duration::from_secs(1800), failures, &grades.join(", "));
}

#[test]
fn criterion_06_family_smoothness() {
    let start = Instant::now();
    let opts = CheckOptions { primes: vec![101, 103, 107], over_q: false, budget: budget(1800) };
    let mut failures = Vec::new();
    let agree = |r: &alphasurf::surface::EmptinessReport| r.primes_agree() && r.primes.len() >= 3;
    for d in 2..=7 {
        let r = is_smooth(&family_surface(d).unwrap(), &opts).unwrap();
        if !agree(&r) {
            failures.push(format!("d = {d}: primes disagree on smoothness"));
        } else if r.empty != Some(true) {
            failures.push(format!("d = {d}: surface singular"));
        }
    }
    for d in 4..=7 {
        let r = hessian_curve_smooth(&family_surface(d).unwrap(), &opts).unwrap();
        if !agree(&r.singular_locus) {
            failures.push(format!("d = {d}: primes disagree on the Hessian curve"));
        } else if r.smooth() != Some(true) {
            failures.push(format!("d = {d}: Hessian curve singular"));
        }
    }
    conclude(6, start, Duration::from_secs(3600), failures, "d = 2..7 smooth, Hessian curves smooth for d = 4..7");
}

#[test]
fn criterion_07_a9_system_small_primes() {
    let start = Instant::now();
    let s = family_surface(5).unwrap();
    let mut failures = Vec::new();
    let scan = worst_a_scan(&s, &[2, 3], 9, &budget(7200), &|_| {}).unwrap();
    for r in &scan.records {
        // the first step of the descending search is m = 9 itself
        match r.steps.first() {
            Some((9, PrimeVerdict::Unsolvable, _)) => {}
            Some((9, v, _)) => failures.push(format!("mod {}: A_9 system {v:?}", r.prime)),
            _ => failures.push(format!("mod {}: {:?}", r.prime, r.worst)),
        }
    }
    conclude(7, start, Duration::from_secs(7200), failures, "A_9 unsolvable mod 2 and mod 3");
}

#[test]
fn criterion_08_twelve_cases() {
    let start = Instant::now();
    let cases = [
        (QuarticCase::A, "x*y*(x - y)*(x + y)"),
        (QuarticCase::B1, "x*y*(x - y)*(x + y - z)"),
        (QuarticCase::B2, "x^3*z + y^4"),
        (QuarticCase::B3, "(y^2 - x*z)*x*y"),
        (QuarticCase::B4, "(y^2*z - x^2*z - x^3)*(x - 2*y)"),
        (QuarticCase::C1, "x*y*(x + y - z)*(x - y - z)"),
        (QuarticCase::C2, "x*y*(x^2 + y^2 - z^2)"),
        (QuarticCase::C3, "(y^2 - x*z)*y*(x - z)"),
        (QuarticCase::C4, "(y^2*z - x^3 - x*z^2)*y"),
        (QuarticCase::C5, "(y^2*z - x^2*z - x^3)*(x + y - z)"),
        (QuarticCase::C6, "(y^2 - x*z)*(x^2 + y^2 - y*z)"),
        (QuarticCase::C7, "x^2*z^2 - y^2*z^2 + x^4 + y^4"),
    ];
    // w z^3 + C has tangent plane w = 0 at (0:0:1:0), cutting out C
    let p = SurfacePoint::parse("(0:0:1:0)").unwrap();
    let mut failures = Vec::new();
    for (want, curve) in cases {
        let s = ProjectiveSurface::parse(&format!("w*z^3 + {curve}")).unwrap();
        match classify_quartic_tangent_section(&s, &p, &budget(300)) {
            Ok(c) if c.case == want => {}
            Ok(c) => failures.push(format!("{curve}: classified {}, expected {want}", c.case)),
            Err(e) => failures.push(format!("{curve}: {e}")),
        }
        let germ = tangent_section(&s, &p).unwrap().germ;
        let m = q(i64::from(germ_multiplicity(&germ)), 1);
        let lct = lct_of_germ(&germ).unwrap();
        if !(m.recip() <= lct && lct <= q(2, 1) / &m) || m != q(i64::from(want.multiplicity()), 1) {
            failures.push(format!("{curve}: multiplicity {m}, lct {lct}"));
        }
    }
    conclude(8, start, Duration::from_secs(300), failures, "A, B1-B4, C1-C7 with sandwiched thresholds");
}

#[test]
fn criterion_09_star_point() {
    let start = Instant::now();
    let s = ProjectiveSurface::parse("z*w^3 + x^4 + y^4 + z^4").unwrap();
    let mut failures = Vec::new();
    let opts = AlphaOptions::new(&[101, 103, 107], 0, budget(600));
    let smooth = is_smooth(&s, &CheckOptions::modular(&[101, 103, 107], budget(600))).unwrap();
    if smooth.empty != Some(true) || smooth.grade != Grade::Proof {
        failures.push("not certified smooth".into());
    }
    let star = star_point_scan(&s, &budget(600)).unwrap();
    if !star.points.iter().any(|p| p.to_string() == "(0:0:0:1)") {
        failures.push(format!("star points {:?}", star.points.iter().map(|p| p.to_string()).collect::<Vec<_>>()));
    }
    let r = tian_verdict(&s, &opts, &|_| {}).unwrap();
    if r.bound(Provenance::StarPoint) != Some(&q(1, 2)) {
        failures.push("no star point bound 1/2".into());
    }
    if r.alpha1 != Alpha1::exact(q(1, 2)) {
        failures.push(format!("alpha_1 = {:?}", r.alpha1));
    }
    if r.tian_verdict != TianVerdict::Consistent {
        failures.push(format!("verdict {:?}", r.tian_verdict));
    }
    conclude(9, start, Duration::from_secs(600), failures, "star point (0:0:0:1), alpha_1 = 1/2, consistent");
}

#[test]
fn criterion_10_family_separation() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut routes = Vec::new();
    for d in [6u32, 7] {
        let opts = AlphaOptions::new(&[101, 103, 107], 0, budget(1800));
        let r = tian_verdict(&family_surface(d).unwrap(), &opts, &|_| {}).unwrap();
        let three_over_d = q(3, i64::from(d));
        if r.bound(Provenance::Alpha2Family) != Some(&three_over_d) {
            failures.push(format!("d = {d}: no Alpha2Family bound 3/{d}"));
        }
        if !(r.alpha1.strictly_above(&q(1, 2)) && r.alpha1.strictly_above(&three_over_d)) {
            failures.push(format!("d = {d}: alpha_1 {:?} not above 1/2 and 3/d", r.alpha1));
        }
        if r.tian_verdict != TianVerdict::CounterexampleEvidence {
            failures.push(format!("d = {d}: verdict {:?}", r.tian_verdict));
        }
        // the lower bound is to come from smoothness of the Hessian curve
        let smooth_curve =
            r.evidence.iter().filter(|e| e.check == "hessian_curve" && e.verdict == "unsolvable").count();
        if smooth_curve < 3 {
            let rank =
                r.evidence.iter().filter(|e| e.check == "hessian_rank_le_2" && e.verdict == "unsolvable").count();
            failures.push(format!(
                "d = {d}: Hessian curve smooth at {smooth_curve} primes (lower bound obtained from the rank <= 2 locus at {rank} primes instead)"
            ));
        } else {
            routes.push(format!("d = {d} via the Hessian curve"));
        }
    }
    conclude(10, start, Duration::from_secs(3600), failures, &routes.join(", "));
}

#[test]
fn criterion_11_brute_force_agreement() {
    let start = Instant::now();
    let p = 101;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    // a dense quartic with small coefficients, smooth modulo p
    let s = loop {
        let mut terms = Vec::new();
        for a in 0..=4u32 {
            for b in 0..=4 - a {
                for c in 0..=4 - a - b {
                    let coeff = rng.gen_range(-9i64..=9);
                    if coeff != 0 {
                        terms.push((Monomial::from_exponents(&[a, b, c, 4 - a - b - c]), q(coeff, 1)));
                    }
                }
            }
        }
        let Ok(s) = ProjectiveSurface::new(QPoly::from_terms(Rationals, 4, terms)) else { continue };
        let smooth = is_smooth(&s, &CheckOptions::modular(&[p], budget(600))).unwrap();
        if smooth.empty == Some(true) && s.degree() == 4 {
            break s;
        }
    };
    let mut failures = Vec::new();
    let sweep = PointSweep::run(&s, p, 3).unwrap();
    let scan = worst_a_scan(&s, &[p], 3, &budget(1200), &|_| {}).unwrap();
    let mut table = Vec::new();
    for m in 1..=3 {
        let brute = sweep.has_a_at_least(m) || sweep.has_triple_point();
        let scanned = scan.solvable_at(m);
        table.push(format!("m={m}: sweep {brute}, scan {scanned:?}"));
        if scanned != Some(brute) {
            failures.push(format!("m = {m}: sweep says {brute}, scan says {scanned:?}"));
        }
    }
    let counts: Vec<String> = (1..=3)
        .map(|m| {
            let n = sweep.entries.iter().filter(|e| e.class == Some(AClass::A(m))).count();
            format!("A_{m}: {n}")
        })
        .collect();
    if !failures.is_empty() {
        failures.push(format!("surface {}", s.to_text()));
    }
    let detail = format!("{} ({})", table.join(", "), counts.join(", "));
    conclude(11, start, Duration::from_secs(1200), failures, &detail);
}
