use std::time::Duration;

use num_rational::BigRational;
use proptest::prelude::*;

use super::*;
use crate::germ::a_class_lct;
use crate::groebner::Budget;
use crate::polycore::{parse_poly_in, VarNames};
use crate::surface::{Grade, WorstA, WorstARecord, WorstAScan};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn options() -> AlphaOptions {
    AlphaOptions::new(&[101, 103, 107], 0, Budget::with_time_limit(Duration::from_secs(300)))
}

fn quiet(_: &str) {}

fn scan_with(worst: &[WorstA], m_max: u32) -> WorstAScan {
    let records = worst
        .iter()
        .enumerate()
        .map(|(i, w)| WorstARecord {
            prime: 101 + 2 * i as u64,
            worst: w.clone(),
            witnessed: None,
            steps: vec![],
            runtime_ms: 0,
        })
        .collect();
    WorstAScan { m_max, skipped_rotations: vec![], records }
}

fn double_points(scan: Option<WorstAScan>) -> SingularityEvidence {
    SingularityEvidence { no_triple_points: Some(Grade::Proof), scan, ..Default::default() }
}

#[test]
fn family_polynomials() {
    let vars = VarNames::new(&["x", "y", "z", "w"]);
    let four = parse_poly_in("(x^2+y^2+z^2+w^2)*(x*w+y*z) + (y-z)^4 - x^4", &vars).unwrap();
    assert_eq!(family_surface(4).unwrap().poly(), &four);
    let two = parse_poly_in("4*(x*w+y*z) + (y-z)^2 - x^2", &vars).unwrap();
    assert_eq!(family_surface(2).unwrap().poly(), &two);
    for d in 2..=8 {
        let s = family_surface(d).unwrap();
        assert_eq!(s.degree(), d);
        assert!(is_family_surface(&s));
    }
    assert!(matches!(family_surface(1), Err(AlphaError::DegreeTooLow(1))));
    assert!(!is_family_surface(&ProjectiveSurface::parse("x^4 + y^4 + z^4 + w^4").unwrap()));
}

#[test]
fn riemann_roch_estimate() {
    let int = |n: i64| q(n, 1);
    assert_eq!(rr_h0_lower(&int(10), &int(2), 8, &int(36)).unwrap(), int(206));
    assert_eq!(rr_h0_lower(&int(1), &int(1), 4, &int(2)).unwrap(), int(3));
    // at d = m^2 the quadratic term vanishes and the estimate goes negative
    assert!(rr_h0_lower(&int(40), &int(3), 9, &chi_structure_sheaf(9)).unwrap() < int(0));
    assert!(rr_h0_lower(&q(1, 3), &int(1), 4, &int(2)).is_err());
    assert!(rr_h0_lower(&int(0), &int(1), 4, &int(2)).is_err());
    assert_eq!(chi_structure_sheaf(4), int(2));
    assert_eq!(chi_structure_sheaf(5), int(5));
    assert_eq!(chi_structure_sheaf(8), int(36));
}

#[test]
fn sqrt_bound_below_sqrt_d() {
    let b = sqrt_bound(9, DEFAULT_SQRT_K).unwrap();
    assert_eq!(b.value, q(2000, 2999));
    assert!(b.value < q(3, 4));
    assert_eq!(sqrt_bound(4, 1).unwrap().value, BigRational::one());
    assert!(sqrt_bound(1, 1).is_err());
}

#[test]
fn family_local_form_and_lct() {
    let vars = VarNames::new(&["y", "z"]);
    for d in 4..=7 {
        let expected = parse_poly_in(&format!("(y-z)^{d} - (-y*z)^{d}"), &vars).unwrap();
        let local = family_local_form(d).unwrap();
        assert_eq!(local, expected);
        assert_eq!(lct_of_poly(local).unwrap(), q(3, 2 * i64::from(d)));
    }
}

#[test]
fn alpha1_examples() {
    let (a, w, _) = alpha1_from_scan(5, &double_points(Some(scan_with(&[WorstA::Found(3), WorstA::Found(3)], 9))));
    assert_eq!(a, Alpha1::exact(q(3, 4)));
    assert_eq!(w, WorstSingularity::A { m: 3 });
    let (a, _, _) = alpha1_from_scan(5, &double_points(Some(scan_with(&[WorstA::Found(9)], 10))));
    assert_eq!(a, Alpha1::exact(q(3, 5)));
    // disagreement leaves only the certified lower end
    let (a, _, g) = alpha1_from_scan(5, &double_points(Some(scan_with(&[WorstA::Found(3), WorstA::Found(4)], 9))));
    assert!(a.strictly_above(&q(1, 2)) && !a.strictly_above(&q(51, 100)));
    assert_eq!(g, Grade::Proof);
    let (a, w, _) = alpha1_from_scan(6, &SingularityEvidence::default());
    assert_eq!(a.lower(), (&q(1, 3), false));
    assert_eq!(w, WorstSingularity::Unknown);
}

#[test]
fn star_quartic_report() {
    let s = ProjectiveSurface::parse("z*w^3 + x^4 + y^4 + z^4").unwrap();
    let r = tian_verdict(&s, &options(), &quiet).unwrap();
    assert_eq!(r.alpha1, Alpha1::exact(q(1, 2)));
    assert_eq!(r.bound(Provenance::StarPoint), Some(&q(1, 2)));
    assert!(
        matches!(&r.worst_singularity, WorstSingularity::StarPoint { points } if points.contains(&"(0:0:0:1)".to_string()))
    );
    assert_eq!(r.tian_verdict, TianVerdict::Consistent);
    assert_eq!(r.grade, Grade::Proof);
}

#[test]
fn family_six_separates() {
    let r = tian_verdict(&family_surface(6).unwrap(), &options(), &quiet).unwrap();
    assert_eq!(r.bound(Provenance::Alpha2Family), Some(&q(1, 2)));
    assert!(r.alpha1.strictly_above(&q(1, 2)));
    assert_eq!(r.tian_verdict, TianVerdict::CounterexampleEvidence);
    assert_eq!(r.min_bound().unwrap().value, q(1, 2));
}

#[test]
fn singular_surface_is_rejected() {
    let s = ProjectiveSurface::parse("x^2 + y^2 - z^2").unwrap();
    assert_eq!(tian_verdict(&s, &options(), &quiet), Err(AlphaError::Singular));
}

#[test]
fn report_json_round_trip() {
    let s = ProjectiveSurface::parse("z*w^3 + x^4 + y^4 + z^4").unwrap();
    let r = tian_verdict(&s, &options(), &quiet).unwrap().without_timings();
    let text = serde_json::to_string(&r).unwrap();
    assert!(text.contains(r#""value":"1/2""#));
    let back: AlphaReport = serde_json::from_str(&text).unwrap();
    assert_eq!(back, r);
    let interval =
        Alpha1::Interval { lower: q(1, 2), lower_strict: true, upper: BigRational::one(), reason: "x".into() };
    let text = serde_json::to_string(&interval).unwrap();
    assert!(text.contains(r#""upper":"1/1""#));
    assert_eq!(serde_json::from_str::<Alpha1>(&text).unwrap(), interval);
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn alpha1_is_monotone_in_m(m1 in 1u32..=12, m2 in 1u32..=12, m_max in 1u32..=12) {
        let (m1, m2) = (m1.min(m_max), m2.min(m_max));
        let (lo, hi) = (m1.min(m2), m1.max(m2));
        let at = |m| alpha1_from_scan(5, &double_points(Some(scan_with(&[WorstA::Found(m)], m_max)))).0;
        let (better, worse) = (at(lo), at(hi));
        prop_assert!(worse.upper() <= better.upper());
        prop_assert!(worse.lower().0 <= better.lower().0);
        if hi < m_max {
            prop_assert_eq!(worse, Alpha1::exact(a_class_lct(hi)));
        }
    }

    #[test]
    fn sqrt_bound_lies_in_range(d in 1u32..=400, k in 2u64..=3000) {
        let b = sqrt_bound(d, k).unwrap();
        prop_assert!(b.value <= BigRational::one());
        prop_assert!(b.value >= q(1, i64::from(d)));
        // the materialized m really lies below sqrt(d)
        let m = BigRational::from_integer(2.into()) / &b.value;
        prop_assert!(b.value == BigRational::one() || &m * &m < BigRational::from_integer(d.into()));
    }

    #[test]
    fn ratio_text_round_trips(n in -10_000i64..=10_000, d in 1i64..=10_000) {
        let r = q(n, d);
        let text = ratio_text::to_text(&r);
        prop_assert!(text.contains('/'));
        prop_assert_eq!(ratio_text::from_text(&text).unwrap(), r);
    }
}
