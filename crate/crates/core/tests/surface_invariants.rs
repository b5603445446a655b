//! Invariants of surfaces in P^3 checked on random equations: incidence
//! codimension, star points, the Hessian criterion against an F_p sweep, and
//! the quartic classifier against the germ's threshold.

use std::time::Duration;

use alphasurf::germ::{germ_multiplicity, lct_of_germ};
use alphasurf::groebner::Budget;
use alphasurf::polycore::{Monomial, QPoly, Rationals};
use alphasurf::surface::{
    classify_quartic_tangent_section, hessian_rank_locus_empty, incidence_conditions, star_point_scan, tangent_section,
    CheckOptions, IncidenceLevel, PointSweep, ProjectiveSurface, SurfaceError, SurfacePoint,
};
use num_rational::BigRational;
use proptest::prelude::*;

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn budget() -> Budget {
    Budget::with_time_limit(Duration::from_secs(60))
}

fn degree_d_monomials(d: u32) -> Vec<[u32; 4]> {
    let mut out = Vec::new();
    for a in 0..=d {
        for b in 0..=d - a {
            for c in 0..=d - a - b {
                out.push([a, b, c, d - a - b - c]);
            }
        }
    }
    out
}

fn from_exponents(terms: impl IntoIterator<Item = ([u32; 4], i64)>) -> QPoly {
    let terms: Vec<(Monomial, BigRational)> =
        terms.into_iter().filter(|(_, c)| *c != 0).map(|(e, c)| (Monomial::from_exponents(&e), q(c))).collect();
    QPoly::from_terms(Rationals, 4, terms)
}

/// A quartic through `(0:0:0:1)` with tangent plane `z = 0` there: the
/// coefficient of `z*w^3` is one, and no other monomial divisible by `w^3`
/// appears.
fn pointed_quartic() -> impl Strategy<Value = QPoly> {
    let mons: Vec<[u32; 4]> = degree_d_monomials(4).into_iter().filter(|e| e[3] < 3).collect();
    let n = mons.len();
    proptest::collection::vec(-2i64..=2, n)
        .prop_map(move |coeffs| from_exponents(mons.iter().copied().zip(coeffs).chain([([0, 0, 1, 3], 1)])))
}

fn star() -> SurfacePoint {
    SurfacePoint::from_ints([0, 0, 0, 1]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 7, ..ProptestConfig::default() })]

    #[test]
    fn incidence_codimension(d in 4u32..=10) {
        let a3 = incidence_conditions(d, IncidenceLevel::A3orWorse).unwrap();
        prop_assert_eq!(a3.linear_rank, 6);
        prop_assert_eq!(a3.codimension, 6);
        let a4 = incidence_conditions(d, IncidenceLevel::A4orWorse).unwrap();
        prop_assert_eq!(a4.codimension, 7);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 16, ..ProptestConfig::default() })]

    /// `w^3 z + z*h + g(x, y, z) + c * w^k x^(4-k)`: the point is a star
    /// point exactly when the perturbation `c` vanishes.
    #[test]
    fn star_point_iff_full_multiplicity(
        h in proptest::collection::vec(-2i64..=2, 10),
        g in proptest::collection::vec(-2i64..=2, 15),
        c in prop_oneof![Just(0i64), -2i64..=2],
        k in 1u32..=2,
    ) {
        // h over ten cubic monomials of w-degree at most 2, g over quartics in x, y, z
        let h_mons: Vec<[u32; 4]> = degree_d_monomials(3).into_iter().filter(|e| e[3] <= 2).take(10).collect();
        let g_mons: Vec<[u32; 4]> = degree_d_monomials(4).into_iter().filter(|e| e[3] == 0).collect();
        let z_times_h = h_mons.iter().zip(&h).map(|(e, &c)| ([e[0], e[1], e[2] + 1, e[3]], c));
        let f = from_exponents(
            z_times_h
                .chain(g_mons.iter().copied().zip(g.iter().copied()))
                .chain([([0, 0, 1, 3], 1), ([4 - k, 0, 0, k], c)]),
        );
        // avoid a section vanishing identically on z = 0
        prop_assume!(!f.specialize(2, &q(0)).unwrap().is_zero());
        let s = ProjectiveSurface::new(f).unwrap();
        let t = tangent_section(&s, &star()).unwrap();
        let full = germ_multiplicity(&t.germ) == 4;
        prop_assert_eq!(full, c == 0);
        match star_point_scan(&s, &budget()) {
            Ok(scan) => prop_assert_eq!(scan.points.contains(&star()), full),
            // singular surfaces are outside the scan's contract
            Err(SurfaceError::SingularPoint) => {}
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
    }

    /// An empty rank-2 Hessian locus mod p rules out every triple point of a
    /// tangent section over F_p.
    #[test]
    fn empty_rank_locus_excludes_triple_points(coeffs in proptest::collection::vec(-3i64..=3, 35), p in prop_oneof![Just(7u64), Just(11), Just(13)]) {
        let f = from_exponents(degree_d_monomials(4).into_iter().zip(coeffs));
        prop_assume!(!f.is_zero());
        let s = ProjectiveSurface::new(f).unwrap();
        let report = hessian_rank_locus_empty(&s, 2, &CheckOptions::modular(&[p], budget())).unwrap();
        prop_assume!(report.empty == Some(true));
        let Ok(sweep) = PointSweep::run(&s, p, 4) else { return Ok(()) };
        prop_assume!(sweep.singular_points.is_empty());
        prop_assert!(!sweep.has_triple_point());
    }

    /// The classifier's case fixes the multiplicity, and the threshold of the
    /// section lies between `1/m` and `2/m`.
    #[test]
    fn classifier_sandwich(f in pointed_quartic()) {
        let s = ProjectiveSurface::new(f).unwrap();
        let t = tangent_section(&s, &star()).unwrap();
        let m = germ_multiplicity(&t.germ);
        let class = match classify_quartic_tangent_section(&s, &star(), &budget()) {
            Ok(c) => c,
            Err(SurfaceError::NonReducedSection | SurfaceError::SmoothSection | SurfaceError::Unclassified(_)) => {
                return Ok(());
            }
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        prop_assert_eq!(class.case.multiplicity(), m);
        if let Ok(lct) = lct_of_germ(&t.germ) {
            let m = q(m as i64);
            prop_assert!(m.recip() <= lct);
            prop_assert!(lct <= q(2) / &m);
        }
    }
}
