use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use super::*;
use crate::polycore::{parse_poly_in, Monomial, QPoly, Rationals, VarNames};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn germ(s: &str) -> CurveGerm {
    CurveGerm::parse(s).unwrap()
}

fn pairs(s: &str) -> Vec<(i64, u32)> {
    resolve(&germ(s), DEFAULT_MAX_DEPTH)
        .unwrap()
        .pairs()
        .into_iter()
        .map(|(m, a)| (m.to_integer().try_into().unwrap(), a))
        .collect()
}

#[test]
fn multiplicity_examples() {
    assert_eq!(germ_multiplicity(&germ("y^2 - x^3")), 2);
    assert_eq!(germ_multiplicity(&germ("x*y*(x - y)*(x + y)")), 4);
    let names = VarNames::new(&["y", "z"]);
    let g = CurveGerm::new(parse_poly_in("(y - z)^4 - (-y*z)^4", &names).unwrap()).unwrap();
    assert_eq!(germ_multiplicity(&g), 4);
}

#[test]
fn germ_validation() {
    assert_eq!(CurveGerm::parse("x + 1").unwrap_err(), GermError::NotThroughOrigin);
    assert_eq!(CurveGerm::parse("0*x + 0*y").unwrap_err(), GermError::Zero);
    assert!(matches!(CurveGerm::new(QPoly::var(Rationals, 3, 0)), Err(GermError::Arity(3))));
    let p = QPoly::var(Rationals, 2, 0);
    assert!(matches!(CurveGerm::weighted(vec![(p, q(-1, 2))]), Err(GermError::NegativeWeight(_))));
}

#[test]
fn blowup_step_examples() {
    let cusp = ChartGerm::initial(&germ("y^2 - x^3"));
    let out = blowup_step(&cusp, &[], 0).unwrap();
    assert_eq!((out.mult.clone(), out.discrepancy), (q(2, 1), 1));
    assert_eq!(out.charts[0].components[0].0, germ("y^2 - x").poly());
    // the transform meets the exceptional curve tangentially at the origin
    assert!(!out.charts[0].is_snc());
    let second = blowup_step(&out.charts[0], &[(out.mult.clone(), out.discrepancy)], 1).unwrap();
    assert_eq!((second.mult, second.discrepancy), (q(3, 1), 2));

    let node = blowup_step(&ChartGerm::initial(&germ("x*y")), &[], 0).unwrap();
    assert_eq!((node.mult, node.discrepancy), (q(2, 1), 1));
    assert!(node.charts.iter().all(|c| c.is_snc()));
}

#[test]
fn resolution_examples() {
    assert_eq!(pairs("x*y"), vec![(2, 1)]);
    assert_eq!(pairs("y^2 - x^3"), vec![(2, 1), (3, 2), (6, 4)]);
    assert_eq!(pairs("y^2 - x^4"), vec![(2, 1), (4, 2)]);
    assert!(pairs("y - x^2").is_empty());
    let tree = resolve(&germ("y^2 - x^3"), DEFAULT_MAX_DEPTH).unwrap();
    assert!(tree.leaves.iter().all(|l| l.terminal));
    assert_eq!(tree.nodes[2].parents, vec![0, 1]);
}

#[test]
fn chart_maps_pull_back_the_curve() {
    // the total transform vanishes to order exactly m_E along each new curve
    for text in ["y^2 - x^5 + x^3*y", "y^2 - x^3", "x*y*(x - y)*(x + y)", "(y - x^2)*(y + x^2)*y"] {
        let g = germ(text);
        let tree = resolve(&g, DEFAULT_MAX_DEPTH).unwrap();
        let f = g.poly();
        for node in &tree.nodes {
            let m: u32 = node.mult.to_integer().try_into().unwrap();
            for (var, map) in node.charts.iter().enumerate() {
                let pulled = f.compose(map).unwrap();
                let order = pulled.terms().iter().map(|(t, _)| t.exponent(var)).min().unwrap();
                assert_eq!(order, m, "{text}, node {}", node.id);
            }
        }
    }
}

#[test]
fn lct_examples() {
    assert_eq!(lct_of_germ(&germ("y^2 - x^3")).unwrap(), q(5, 6));
    assert_eq!(lct_of_germ(&germ("x*y")).unwrap(), q(1, 1));
    assert_eq!(lct_of_germ(&germ("x*y*(x - y)*(x + y)")).unwrap(), q(1, 2));
    assert_eq!(lct_of_germ(&germ("y - x^2")).unwrap(), q(1, 1));
    for d in 4..=7i64 {
        let names = VarNames::new(&["y", "z"]);
        let g = CurveGerm::new(parse_poly_in(&format!("(y - z)^{d} - (-y*z)^{d}"), &names).unwrap()).unwrap();
        assert_eq!(lct_of_germ(&g).unwrap(), q(3, 2 * d), "d = {d}");
    }
}

#[test]
fn a_series_oracle() {
    for m in 1..=9u32 {
        let g = germ(&format!("y^2 - x^{}", m + 1));
        assert_eq!(lct_of_germ(&g).unwrap(), a_class_lct(m), "A_{m}");
        assert_eq!(classify_a(&g, 9).unwrap(), AClass::A(m));
    }
    assert_eq!(a_class_lct(1), q(1, 1));
    assert_eq!(a_class_lct(3), q(3, 4));
    assert_eq!(a_class_lct(9), q(3, 5));
}

#[test]
fn lct_bounds_examples() {
    assert_eq!(lct_bounds(&germ("y^2 - x^3")), (q(1, 2), q(1, 1)));
    assert_eq!(lct_bounds(&germ("y - x^2")), (q(1, 1), q(2, 1)));
    assert_eq!(lct_bounds(&germ("x*y*(x - y)*(x + y)")), (q(1, 4), q(1, 2)));
}

#[test]
fn classify_examples() {
    assert_eq!(classify_a(&germ("y^2 - x^2"), 9).unwrap(), AClass::A(1));
    assert_eq!(classify_a(&germ("y^2 + 2*y*x^2 + x^4 - x^5"), 9).unwrap(), AClass::A(4));
    assert_eq!(classify_a(&germ("x*y"), 9).unwrap(), AClass::A(1));
    assert_eq!(classify_a(&germ("x^2 - y^3"), 9).unwrap(), AClass::A(2));
    assert_eq!(classify_a(&germ("y - x^2"), 9).unwrap(), AClass::Smooth);
    assert_eq!(classify_a(&germ("y^3 - x^3"), 9).unwrap(), AClass::MultiplicityAtLeast3);
    assert_eq!(classify_a(&germ("y^2 - x^12"), 9).unwrap(), AClass::Above(9));
    assert_eq!(classify_a(&germ("y^2 + 0*x"), 9).unwrap_err(), GermError::NonReduced);
}

#[test]
fn weighted_divisors() {
    let cusp = germ("y^2 - x^3").poly();
    let half = CurveGerm::weighted(vec![(cusp.clone(), q(1, 2))]).unwrap();
    assert_eq!(lct_of_germ(&half).unwrap(), q(5, 3));
    assert_eq!(weighted_multiplicity(&half), q(1, 1));
    // two lines with coefficient 3/4 each
    let x = QPoly::var(Rationals, 2, 0);
    let y = QPoly::var(Rationals, 2, 1);
    let d = CurveGerm::weighted(vec![(x, q(3, 4)), (y, q(3, 4))]).unwrap();
    assert_eq!(lct_of_germ(&d).unwrap(), q(4, 3));
    assert_eq!(resolve(&d, 4).unwrap().nodes.len(), 1);
}

#[test]
fn depth_budget_is_reported() {
    assert_eq!(resolve(&germ("y^2 + 0*x"), 5).unwrap_err(), GermError::DepthExhausted(5));
    assert_eq!(resolve(&germ("y^2 - x^30"), 3).unwrap_err(), GermError::DepthExhausted(3));
}

#[test]
fn irrational_centres_are_refused() {
    // two tangent conics along an irrational direction
    let e = resolve(&germ("(y^2 - 2*x^2)^2 + x^5"), DEFAULT_MAX_DEPTH).unwrap_err();
    assert_eq!(e, GermError::IrrationalCenter);
    // simple irrational tangents need no centre there
    assert_eq!(lct_of_germ(&germ("x^2 + y^2")).unwrap(), q(1, 1));
}

fn random_germ() -> impl Strategy<Value = QPoly> {
    proptest::collection::vec(((0u32..=8, 0u32..=8), -5i64..=5), 1..=8).prop_map(|terms| {
        let terms: Vec<(Monomial, BigRational)> = terms
            .into_iter()
            .filter(|((i, j), c)| *c != 0 && i + j >= 1 && i + j <= 8)
            .map(|((i, j), c)| (Monomial::from_exponents(&[i, j]), q(c, 1)))
            .collect();
        QPoly::from_terms(Rationals, 2, terms)
    })
}

fn try_lct(p: &QPoly) -> Option<BigRational> {
    let g = CurveGerm::new(p.clone()).ok()?;
    match resolve(&g, 24) {
        Ok(tree) => Some(tree.lct()),
        Err(GermError::IrrationalCenter | GermError::DepthExhausted(_)) => None,
        Err(e) => panic!("{e}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn sandwich_holds(p in random_germ()) {
        prop_assume!(!p.is_zero());
        if let Some(lct) = try_lct(&p) {
            let m = BigRational::from_integer(BigInt::from(p.order().unwrap()));
            prop_assert!(m.recip() <= lct);
            prop_assert!(lct <= q(2, 1) / &m);
            prop_assert!(lct <= q(1, 1));
        }
    }

    #[test]
    fn lct_is_invariant_under_linear_change(p in random_germ(), a in -3i64..=3, b in -3i64..=3, c in -3i64..=3, d in -3i64..=3, s in 1i64..=5) {
        prop_assume!(!p.is_zero() && a * d - b * c != 0);
        let x = QPoly::var(Rationals, 2, 0);
        let y = QPoly::var(Rationals, 2, 1);
        let k = |n: i64| QPoly::from_int(Rationals, 2, n);
        let moved = p.compose(&[&(&k(a) * &x) + &(&k(b) * &y), &(&k(c) * &x) + &(&k(d) * &y)]).unwrap();
        let scaled = p.scale(&q(s, 7));
        if let (Some(l1), Some(l2)) = (try_lct(&p), try_lct(&moved)) {
            prop_assert_eq!(&l1, &l2);
        }
        if let (Some(l1), Some(l2)) = (try_lct(&p), try_lct(&scaled)) {
            prop_assert_eq!(l1, l2);
        }
        if p.order() == Some(2) {
            let g1 = CurveGerm::new(p.clone()).unwrap();
            let g2 = CurveGerm::new(scaled).unwrap();
            if let (Ok(c1), Ok(c2)) = (classify_a(&g1, 9), classify_a(&g2, 9)) {
                prop_assert_eq!(c1, c2);
            }
        }
    }

    #[test]
    fn classification_matches_resolution(k in 1u32..=9, a in -3i64..=3, b in -3i64..=3, noise in proptest::collection::vec(((0u32..=12, 0u32..=6), -4i64..=4), 0..5), shear in -2i64..=2) {
        // y^2 - x^(k+1) plus terms of weighted degree > 1, then y -> y + a x^2 + b x^3
        let base = germ(&format!("y^2 - x^{}", k + 1)).poly();
        let extra: Vec<(Monomial, BigRational)> = noise
            .into_iter()
            .filter(|((i, j), c)| *c != 0 && 2 * i + (k + 1) * j > 2 * (k + 1) && i + j <= 12)
            .map(|((i, j), c)| (Monomial::from_exponents(&[i, j]), q(c, 1)))
            .collect();
        let f = &base + &QPoly::from_terms(Rationals, 2, extra);
        let x = QPoly::var(Rationals, 2, 0);
        let y = QPoly::var(Rationals, 2, 1);
        let bend = germ(&format!("y + ({a})*x^2 + ({b})*x^3")).poly();
        let f = f.compose(&[x.clone(), bend]).unwrap();
        let f = f.compose(&[&x + &(&QPoly::from_int(Rationals, 2, shear) * &y), y]).unwrap();
        let g = CurveGerm::new(f.clone()).unwrap();
        prop_assert_eq!(classify_a(&g, 9).unwrap(), AClass::A(k));
        if let Some(lct) = try_lct(&f) {
            prop_assert_eq!(lct, a_class_lct(k));
        }
    }
}
