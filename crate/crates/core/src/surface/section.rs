//! Tangent sections, star points and sweeps over finite-field points.

use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::germ::{classify_a_poly, AClass, CurveGerm, GermError};
use crate::groebner::{rational_points, Budget, GroebnerError, Ideal};
use crate::polycore::{Field, FpPoly, MultiPoly, PrimeField, QPoly, Rationals};

use super::{LinearForm, ProjectiveSurface, SurfaceError, SurfacePoint};

/// The section of a surface by its tangent plane at a smooth point.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentSection {
    /// The gradient at the point, as a linear form.
    pub plane: LinearForm,
    /// The coordinate solved for on the plane.
    pub eliminated: usize,
    /// The remaining coordinates, which are the plane's coordinates.
    pub plane_vars: [usize; 3],
    /// The restricted equation, homogeneous in the plane's coordinates.
    pub curve: QPoly,
    /// The point in the plane's coordinates.
    pub point_in_plane: [BigRational; 3],
    /// The curve near the point, in an affine chart with the point at the origin.
    pub germ: CurveGerm,
}

struct Parts<K: Field> {
    gradient: [K::Elem; 4],
    eliminated: usize,
    plane_vars: [usize; 3],
    curve: MultiPoly<K>,
    germ: MultiPoly<K>,
}

fn section_parts<K: Field>(f: &MultiPoly<K>, p: &[K::Elem; 4]) -> Result<Parts<K>, SurfaceError> {
    let k = f.field().clone();
    if !k.is_zero(&f.evaluate(p)?) {
        return Err(SurfaceError::NotOnSurface);
    }
    let mut gradient: [K::Elem; 4] = std::array::from_fn(|_| k.zero());
    for (i, g) in gradient.iter_mut().enumerate() {
        *g = f.partial_derivative(i)?.evaluate(p)?;
    }
    let e = (0..4).find(|&i| !k.is_zero(&gradient[i])).ok_or(SurfaceError::SingularPoint)?;
    let pv: Vec<usize> = (0..4).filter(|&i| i != e).collect();
    let plane_vars = [pv[0], pv[1], pv[2]];
    let ge_inv = k.inv(&gradient[e]).expect("nonzero");
    // x_e = -(sum_{i != e} g_i x_i) / g_e on the plane
    let solved = |images: &[MultiPoly<K>; 3]| -> MultiPoly<K> {
        let mut acc = MultiPoly::zero(k.clone(), images[0].nvars());
        for (img, &i) in images.iter().zip(&plane_vars) {
            acc = &acc - &img.scale(&k.mul(&gradient[i], &ge_inv));
        }
        acc
    };
    let plane_images: [MultiPoly<K>; 3] = std::array::from_fn(|l| MultiPoly::var(k.clone(), 3, l));
    let mut full = Vec::with_capacity(4);
    for i in 0..4 {
        full.push(match plane_vars.iter().position(|&v| v == i) {
            Some(l) => plane_images[l].clone(),
            None => solved(&plane_images),
        });
    }
    let curve = f.compose(&full)?;
    // affine chart of the plane where the point has a nonzero coordinate
    let j = *plane_vars.iter().find(|&&i| !k.is_zero(&p[i])).expect("a point on the plane off x_e");
    let scale = k.inv(&p[j]).expect("nonzero");
    let q: Vec<K::Elem> = p.iter().map(|c| k.mul(c, &scale)).collect();
    let rest: Vec<usize> = plane_vars.iter().copied().filter(|&i| i != j).collect();
    let uv = [MultiPoly::var(k.clone(), 2, 0), MultiPoly::var(k.clone(), 2, 1)];
    let mut local: Vec<MultiPoly<K>> = Vec::with_capacity(4);
    for i in 0..4 {
        local.push(if i == j {
            MultiPoly::one(k.clone(), 2)
        } else if let Some(l) = rest.iter().position(|&v| v == i) {
            &MultiPoly::constant(k.clone(), 2, q[i].clone()) + &uv[l]
        } else {
            MultiPoly::zero(k.clone(), 2)
        });
    }
    // the solved coordinate: q_e - (g_a u + g_b v) / g_e
    let mut xe = MultiPoly::constant(k.clone(), 2, q[e].clone());
    for (l, &i) in rest.iter().enumerate() {
        xe = &xe - &uv[l].scale(&k.mul(&gradient[i], &ge_inv));
    }
    local[e] = xe;
    let germ = f.compose(&local)?;
    Ok(Parts { gradient, eliminated: e, plane_vars, curve, germ })
}

/// Local equation of the tangent section at `p`, over any field.
pub fn tangent_germ<K: Field>(f: &MultiPoly<K>, p: &[K::Elem; 4]) -> Result<MultiPoly<K>, SurfaceError> {
    Ok(section_parts(f, p)?.germ)
}

/// The tangent section of `s` at the smooth point `p`.
pub fn tangent_section(s: &ProjectiveSurface, p: &SurfacePoint) -> Result<TangentSection, SurfaceError> {
    let parts = section_parts(s.poly(), p.coords())?;
    let c = p.coords();
    let point_in_plane = parts.plane_vars.map(|i| c[i].clone());
    Ok(TangentSection {
        plane: parts.gradient,
        eliminated: parts.eliminated,
        plane_vars: parts.plane_vars,
        curve: parts.curve,
        point_in_plane,
        germ: CurveGerm::new(parts.germ)?,
    })
}

/// Star points found over the rationals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarPointScan {
    #[serde(with = "points_text")]
    pub points: Vec<SurfacePoint>,
    /// Some star point has non-rational coordinates.
    pub irrational: bool,
    /// The star points form a curve or more (every point of a quadric).
    pub positive_dimensional: bool,
}

mod points_text {
    use super::SurfacePoint;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(pts: &[SurfacePoint], s: S) -> Result<S::Ok, S::Error> {
        let text: Vec<String> = pts.iter().map(|p| p.to_string()).collect();
        text.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<SurfacePoint>, D::Error> {
        let text: Vec<String> = Vec::deserialize(d)?;
        text.iter()
            .map(|t| SurfacePoint::parse(t.trim_start_matches('(').trim_end_matches(')')))
            .collect::<Result<_, _>>()
            .map_err(serde::de::Error::custom)
    }
}

/// Points whose tangent section has multiplicity `d`, i.e. is a cone of
/// `d` lines through the point.
///
/// For every affine piece `x_0 = .. = x_(j-1) = 0, x_j = 1` and every
/// coordinate `x_e` with `t * df/dx_e = 1`, the plane is parametrized by the
/// two remaining coordinates `(a, b)` and all coefficients of degree below
/// `d` of the recentred section must vanish.
pub fn star_point_scan(s: &ProjectiveSurface, budget: &Budget) -> Result<StarPointScan, SurfaceError> {
    let d = s.degree();
    let f = s.poly();
    let grad = s.gradient()?;
    let mut out = StarPointScan { points: Vec::new(), irrational: false, positive_dimensional: false };
    for j in 0..4 {
        let free: Vec<usize> = (j + 1..4).collect();
        let nu = free.len() + 1; // unknown coordinates and t
        let nv = nu + 2;
        let t = QPoly::var(Rationals, nv, nu - 1);
        let (a, b) = (QPoly::var(Rationals, nv, nu), QPoly::var(Rationals, nv, nu + 1));
        let point: Vec<QPoly> = (0..4)
            .map(|i| match free.iter().position(|&v| v == i) {
                Some(l) => QPoly::var(Rationals, nv, l),
                None if i == j => QPoly::one(Rationals, nv),
                None => QPoly::zero(Rationals, nv),
            })
            .collect();
        let g: Vec<QPoly> = grad.iter().map(|gi| gi.compose(&point)).collect::<Result<_, _>>()?;
        for e in (0..4).filter(|&e| e != j) {
            let ab: Vec<usize> = (0..4).filter(|&i| i != j && i != e).collect();
            let mut x = point.clone();
            x[ab[0]] = &x[ab[0]] + &a;
            x[ab[1]] = &x[ab[1]] + &b;
            x[e] = &x[e] - &(&t * &(&(&g[ab[0]] * &a) + &(&g[ab[1]] * &b)));
            let section = f.compose(&x)?;
            let mut gens = vec![&(&t * &g[e]) - &QPoly::one(Rationals, nv)];
            for (ia, ca) in section.coefficients_in(nu)?.into_iter().enumerate() {
                for (ib, cab) in ca.coefficients_in(nu + 1)?.into_iter().enumerate() {
                    if ((ia + ib) as u32) < d && !cab.is_zero() {
                        gens.push(cab);
                    }
                }
            }
            let gens = gens.into_iter().map(|p| p.extend_vars(nu)).collect::<Result<Vec<_>, _>>()?;
            let ideal = Ideal::new(Rationals, nu, gens)?;
            match rational_points(&ideal, budget) {
                Ok(found) => {
                    out.irrational |= found.irrational;
                    for sol in found.points {
                        let mut c: [BigRational; 4] = Default::default();
                        c[j] = BigRational::one();
                        for (l, &i) in free.iter().enumerate() {
                            c[i] = sol[l].clone();
                        }
                        out.points.push(SurfacePoint::new(c)?);
                    }
                }
                Err(GroebnerError::PositiveDimensional) => out.positive_dimensional = true,
                Err(e) => return Err(e.into()),
            }
        }
    }
    out.points.sort();
    out.points.dedup();
    Ok(out)
}

/// All points of `f = 0` in `P^3(F_p)`, each with first nonzero coordinate 1.
pub fn fp_points(f: &FpPoly) -> Vec<[u64; 4]> {
    let field = *f.field();
    let p = field.modulus();
    let terms: Vec<([u32; 4], u64)> =
        f.terms().iter().map(|(m, c)| ([m.exponent(0), m.exponent(1), m.exponent(2), m.exponent(3)], *c)).collect();
    let dmax = terms.iter().flat_map(|(e, _)| e.iter().copied()).max().unwrap_or(0) as usize;
    // pow[v][e] = v^e
    let pow: Vec<Vec<u64>> = (0..p)
        .map(|v| {
            let mut row = vec![1u64; dmax + 1];
            for e in 1..=dmax {
                row[e] = row[e - 1] * v % p;
            }
            row
        })
        .collect();
    let mut out = Vec::new();
    for j in 0..4 {
        let free = 3 - j;
        let total = p.pow(free as u32);
        for idx in 0..total {
            let mut c = [0u64; 4];
            c[j] = 1;
            let mut r = idx;
            for slot in c.iter_mut().skip(j + 1) {
                *slot = r % p;
                r /= p;
            }
            let mut acc = 0u64;
            for (e, coeff) in &terms {
                let mut t = *coeff;
                for v in 0..4 {
                    t = t * pow[c[v] as usize][e[v] as usize] % p;
                }
                acc = (acc + t) % p;
            }
            if acc == 0 {
                out.push(c);
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepEntry {
    pub point: [u64; 4],
    /// `None` when the section germ is not reduced.
    pub class: Option<AClass>,
}

/// Classification of the tangent section at every `F_p`-point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointSweep {
    pub prime: u64,
    pub entries: Vec<SweepEntry>,
    /// Points where the reduction is singular.
    pub singular_points: Vec<[u64; 4]>,
}

impl PointSweep {
    /// Classify the tangent section at every point of the reduction mod `p`.
    pub fn run(s: &ProjectiveSurface, p: u64, m_max: u32) -> Result<Self, SurfaceError> {
        let f = s.reduce(p)?;
        let field = PrimeField::new(p)?;
        let mut entries = Vec::new();
        let mut singular_points = Vec::new();
        for pt in fp_points(&f) {
            let germ = match tangent_germ(&f, &pt) {
                Ok(g) => g,
                Err(SurfaceError::SingularPoint) => {
                    singular_points.push(pt);
                    continue;
                }
                Err(e) => return Err(e),
            };
            debug_assert!(field.is_zero(&germ.constant_term()));
            let class = match classify_a_poly(&germ, m_max) {
                Ok(c) => Some(c),
                Err(GermError::NonReduced) | Err(GermError::Zero) => None,
                Err(e) => return Err(e.into()),
            };
            entries.push(SweepEntry { point: pt, class });
        }
        Ok(PointSweep { prime: p, entries, singular_points })
    }

    /// Is there a point whose section is `A_k` with `k >= m`, or worse?
    pub fn has_a_at_least(&self, m: u32) -> bool {
        self.entries.iter().any(|e| match e.class {
            Some(AClass::A(k)) | Some(AClass::Above(k)) => k >= m,
            Some(AClass::MultiplicityAtLeast3) | None => true,
            Some(AClass::Smooth) => false,
        })
    }

    /// Is there a point whose section has multiplicity at least 3?
    pub fn has_triple_point(&self) -> bool {
        self.entries.iter().any(|e| e.class == Some(AClass::MultiplicityAtLeast3))
    }
}
