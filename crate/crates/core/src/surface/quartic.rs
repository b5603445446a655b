//! The twelve configurations of a singular tangent section of a smooth
//! quartic surface.
//!
//! Components are found by counting factors rather than factoring. After a
//! change of coordinates putting a point off the curve at `(0:0:1)`, every
//! linear factor can be scaled to `z + a1 x + a2 y` and every quadratic
//! factor to `z^2 + (a1 x + a2 y) z + (a3 x^2 + a4 x y + a5 y^2)`. Each
//! divisibility condition is a zero-dimensional system in the `a_i` whose
//! distinct zeros over the closure are exactly the factors of that shape, so
//! the pair (number of lines, number of quadratic factors) pins down how a
//! reduced quartic splits.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::elimination::discriminant;
use crate::groebner::{count_distinct_zeros, rational_points, Budget, Ideal};
use crate::polycore::{format_rational, QPoly, Rationals};

use super::section::tangent_section;
use super::{ProjectiveSurface, SurfaceError, SurfacePoint, XYZW};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum QuarticCase {
    A,
    B1,
    B2,
    B3,
    B4,
    C1,
    C2,
    C3,
    C4,
    C5,
    C6,
    C7,
}

impl QuarticCase {
    pub const ALL: [QuarticCase; 12] = [
        QuarticCase::A,
        QuarticCase::B1,
        QuarticCase::B2,
        QuarticCase::B3,
        QuarticCase::B4,
        QuarticCase::C1,
        QuarticCase::C2,
        QuarticCase::C3,
        QuarticCase::C4,
        QuarticCase::C5,
        QuarticCase::C6,
        QuarticCase::C7,
    ];

    /// Multiplicity of the section at the point in this case.
    pub fn multiplicity(self) -> u32 {
        match self {
            QuarticCase::A => 4,
            QuarticCase::B1 | QuarticCase::B2 | QuarticCase::B3 | QuarticCase::B4 => 3,
            _ => 2,
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            QuarticCase::A => "four lines through the point",
            QuarticCase::B1 => "four lines, three of them through the point",
            QuarticCase::B2 => "irreducible quartic with a triple point",
            QuarticCase::B3 => "a conic and two lines, all through the point",
            QuarticCase::B4 => "a cubic with a double point there and a line through it",
            QuarticCase::C1 => "four lines, two of them through the point",
            QuarticCase::C2 => "a conic and two lines meeting at the point off the conic",
            QuarticCase::C3 => "a conic and two lines, the point on the conic and one line",
            QuarticCase::C4 => "a cubic and a line meeting at a smooth point of the cubic",
            QuarticCase::C5 => "a cubic with a double point there and a line missing it",
            QuarticCase::C6 => "two conics meeting at the point",
            QuarticCase::C7 => "irreducible quartic with a double point",
        }
    }
}

impl fmt::Display for QuarticCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// How a reduced plane quartic splits over the algebraic closure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorPattern {
    FourLines,
    ConicTwoLines,
    CubicLine,
    TwoConics,
    Irreducible,
}

impl FactorPattern {
    /// From the numbers of linear and of quadratic factors.
    fn from_counts(lines: u64, quadratics: u64) -> Option<Self> {
        Some(match (lines, quadratics) {
            (4, 6) => FactorPattern::FourLines,
            (2, 2) => FactorPattern::ConicTwoLines,
            (1, 0) => FactorPattern::CubicLine,
            (0, 2) => FactorPattern::TwoConics,
            (0, 0) => FactorPattern::Irreducible,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentInventory {
    pub pattern: FactorPattern,
    /// Linear factors over the closure.
    pub lines: u64,
    /// Quadratic factors over the closure, reducible ones included.
    pub quadratic_factors: u64,
    pub lines_through_point: u64,
    pub multiplicity: u32,
    /// Multiplicity at the point of the union of the non-linear components.
    pub residual_multiplicity: u32,
    /// The lines defined over the rationals, as linear forms.
    pub rational_lines: Vec<String>,
    /// Some line is only defined over an extension.
    pub irrational_lines: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectionClassification {
    pub case: QuarticCase,
    pub inventory: ComponentInventory,
    /// The section, in the coordinates of its plane.
    pub curve: String,
}

/// The curve near `p`, in an affine chart with `p` at the origin.
pub(crate) fn plane_germ(curve: &QPoly, p: &[BigRational; 3]) -> Result<QPoly, SurfaceError> {
    let j = (0..3).find(|&i| !p[i].is_zero()).ok_or_else(|| SurfaceError::BadPoint("all coordinates vanish".into()))?;
    let rest: Vec<usize> = (0..3).filter(|&i| i != j).collect();
    let mut images = Vec::with_capacity(3);
    for i in 0..3 {
        images.push(if i == j {
            QPoly::one(Rationals, 2)
        } else {
            let l = rest.iter().position(|&r| r == i).expect("other index");
            &QPoly::constant(Rationals, 2, &p[i] / &p[j]) + &QPoly::var(Rationals, 2, l)
        });
    }
    Ok(curve.compose(&images)?)
}

/// Integer matrices `M`, `M^-1` with `M (0,0,1) = q`.
fn frame(q: [i64; 3]) -> ([[BigRational; 3]; 3], [[BigRational; 3]; 3]) {
    let k = (0..3).rev().find(|&i| q[i] != 0).expect("nonzero point");
    let others: Vec<usize> = (0..3).filter(|&i| i != k).collect();
    let r = |n: i64| BigRational::from_integer(n.into());
    let mut m: [[BigRational; 3]; 3] = Default::default();
    m[others[0]][0] = BigRational::one();
    m[others[1]][1] = BigRational::one();
    for i in 0..3 {
        m[i][2] = r(q[i]);
    }
    // M^-1: X_2 = u_k / q_k, X_0 = u_o0 - q_o0 X_2, X_1 = u_o1 - q_o1 X_2
    let mut inv: [[BigRational; 3]; 3] = Default::default();
    let qk = r(q[k]);
    inv[2][k] = qk.recip();
    for (row, &o) in others.iter().enumerate() {
        inv[row][o] = BigRational::one();
        inv[row][k] = -r(q[o]) / &qk;
    }
    (m, inv)
}

fn linear_image(row: &[BigRational; 3], nvars: usize, vars: [usize; 3]) -> QPoly {
    let mut acc = QPoly::zero(Rationals, nvars);
    for (c, &v) in row.iter().zip(&vars) {
        if !c.is_zero() {
            acc = &acc + &QPoly::var(Rationals, nvars, v).scale(c);
        }
    }
    acc
}

/// Nonzero coefficients with respect to the variables `vars`.
fn coefficients_wrt(f: &QPoly, vars: &[usize]) -> Result<Vec<QPoly>, SurfaceError> {
    let mut current = vec![f.clone()];
    for &v in vars {
        let mut next = Vec::new();
        for g in &current {
            next.extend(g.coefficients_in(v)?);
        }
        current = next;
    }
    Ok(current.into_iter().filter(|g| !g.is_zero()).collect())
}

fn small_points() -> impl Iterator<Item = [i64; 3]> {
    (1i64..).flat_map(|h| {
        let mut pts = Vec::new();
        for a in -h..=h {
            for b in -h..=h {
                for c in -h..=h {
                    if a.abs().max(b.abs()).max(c.abs()) == h {
                        pts.push([a, b, c]);
                    }
                }
            }
        }
        pts
    })
}

/// Classify the plane quartic `curve` (homogeneous in 3 variables) at the
/// singular point `p`. `names` label the plane coordinates in the inventory.
pub fn classify_plane_quartic(
    curve: &QPoly,
    p: &[BigRational; 3],
    names: [&str; 3],
    budget: &Budget,
) -> Result<SectionClassification, SurfaceError> {
    if curve.nvars() != 3 {
        return Err(SurfaceError::Arity(curve.nvars()));
    }
    let d = curve.check_homogeneous()?.ok_or(SurfaceError::Zero)?;
    if d != 4 {
        return Err(SurfaceError::InvalidArgument(format!("expected a quartic, got degree {d}")));
    }
    if !curve.evaluate(p)?.is_zero() {
        return Err(SurfaceError::NotOnSurface);
    }
    let multiplicity = plane_germ(curve, p)?.order().unwrap_or(0);
    if multiplicity < 2 {
        return Err(SurfaceError::SmoothSection);
    }

    let q = small_points()
        .find(|q| !curve.evaluate(&q.map(|n| BigRational::from_integer(n.into()))).expect("3 coordinates").is_zero())
        .expect("a nonzero curve misses some integer point");
    let (m, inv) = frame(q);
    let moved = {
        let images: Vec<QPoly> = (0..3).map(|i| linear_image(&m[i], 3, [0, 1, 2])).collect();
        let c = curve.compose(&images)?;
        let lead = c.coefficient(&crate::polycore::Monomial::var(2, 4));
        c.scale(&lead.recip())
    };
    if discriminant(&moved, 2)?.is_zero() {
        return Err(SurfaceError::NonReducedSection);
    }
    let p_moved: [BigRational; 3] =
        std::array::from_fn(|i| (0..3).fold(BigRational::zero(), |s, j| s + &inv[i][j] * &p[j]));

    // lines z + a1 x + a2 y, ring (a1, a2, x, y)
    let line_eqs = {
        let v = |i| QPoly::var(Rationals, 4, i);
        let z = -(&(&v(0) * &v(2)) + &(&v(1) * &v(3)));
        let restricted = moved.compose(&[v(2), v(3), z])?;
        coefficients_wrt(&restricted, &[2, 3])?.into_iter().map(|g| g.extend_vars(2)).collect::<Result<Vec<_>, _>>()?
    };
    let line_ideal = Ideal::new(Rationals, 2, line_eqs)?;
    let lines = count_distinct_zeros(&line_ideal, budget)?;
    let through = {
        let a = |i| QPoly::var(Rationals, 2, i);
        let cond =
            &(&a(0).scale(&p_moved[0]) + &a(1).scale(&p_moved[1])) + &QPoly::constant(Rationals, 2, p_moved[2].clone());
        line_ideal.clone().with_generator(cond)?
    };
    let lines_through_point = count_distinct_zeros(&through, budget)?;

    // quadratic factors, ring (a1..a5, x, y)
    let quad_eqs = {
        let v = |i| QPoly::var(Rationals, 7, i);
        let b = &(&v(0) * &v(5)) + &(&v(1) * &v(6));
        let c = &(&(&v(2) * &v(5).pow(2)) + &(&v(3) * &(&v(5) * &v(6)))) + &(&v(4) * &v(6).pow(2));
        let mut coeffs: Vec<QPoly> =
            moved.coefficients_in(2)?.into_iter().map(|g| g.rename_vars(&[5, 6, 0], 7)).collect::<Result<_, _>>()?;
        coeffs.resize(5, QPoly::zero(Rationals, 7));
        for k in (2..5).rev() {
            let t = std::mem::replace(&mut coeffs[k], QPoly::zero(Rationals, 7));
            coeffs[k - 1] = &coeffs[k - 1] - &(&t * &b);
            coeffs[k - 2] = &coeffs[k - 2] - &(&t * &c);
        }
        let mut eqs = Vec::new();
        for r in &coeffs[..2] {
            for g in coefficients_wrt(r, &[5, 6])? {
                eqs.push(g.extend_vars(5)?);
            }
        }
        eqs
    };
    let quadratic_factors = count_distinct_zeros(&Ideal::new(Rationals, 5, quad_eqs)?, budget)?;

    let pattern = FactorPattern::from_counts(lines, quadratic_factors).ok_or_else(|| {
        SurfaceError::Unclassified(format!("{lines} lines and {quadratic_factors} quadratic factors"))
    })?;
    let residual_multiplicity = multiplicity.saturating_sub(lines_through_point as u32);
    use FactorPattern as F;
    use QuarticCase as Q;
    let case = match (pattern, multiplicity, lines_through_point) {
        (F::FourLines, 4, _) => Q::A,
        (F::FourLines, 3, _) => Q::B1,
        (F::FourLines, 2, _) => Q::C1,
        (F::ConicTwoLines, 3, 2) => Q::B3,
        (F::ConicTwoLines, 2, 2) => Q::C2,
        (F::ConicTwoLines, 2, 1) => Q::C3,
        (F::CubicLine, 3, 1) => Q::B4,
        (F::CubicLine, 2, 1) => Q::C4,
        (F::CubicLine, 2, 0) => Q::C5,
        (F::TwoConics, 2, _) => Q::C6,
        (F::Irreducible, 3, _) => Q::B2,
        (F::Irreducible, 2, _) => Q::C7,
        _ => {
            return Err(SurfaceError::Unclassified(format!(
                "{pattern:?} of multiplicity {multiplicity} with {lines_through_point} lines through the point"
            )))
        }
    };

    let found = rational_points(&line_ideal, budget)?;
    let rational_lines = found
        .points
        .iter()
        .map(|a| {
            // (a1, a2, 1) . M^-1 in the original coordinates
            let coef = [a[0].clone(), a[1].clone(), BigRational::one()];
            let row: [BigRational; 3] =
                std::array::from_fn(|j| (0..3).fold(BigRational::zero(), |s, i| s + &coef[i] * &inv[i][j]));
            linear_form_text(&row, names)
        })
        .collect();
    let inventory = ComponentInventory {
        pattern,
        lines,
        quadratic_factors,
        lines_through_point,
        multiplicity,
        residual_multiplicity,
        rational_lines,
        irrational_lines: found.irrational,
    };
    let curve_text = curve.display_with(&crate::polycore::VarNames::new(&names)).to_string();
    Ok(SectionClassification { case, inventory, curve: curve_text })
}

/// Scaled so that the first nonzero coefficient is one.
fn linear_form_text(row: &[BigRational; 3], names: [&str; 3]) -> String {
    let lead = row.iter().find(|c| !c.is_zero()).cloned().unwrap_or_else(BigRational::one);
    let mut out = String::new();
    for (c, name) in row.iter().zip(names) {
        let c = c / &lead;
        if c.is_zero() {
            continue;
        }
        let neg = c < BigRational::zero();
        let mag = if neg { -c } else { c };
        match (out.is_empty(), neg) {
            (true, true) => out.push('-'),
            (true, false) => {}
            (false, true) => out.push_str(" - "),
            (false, false) => out.push_str(" + "),
        }
        if !mag.is_one() {
            out.push_str(&format_rational(&mag));
            out.push('*');
        }
        out.push_str(name);
    }
    out
}

/// Classify the tangent section of a smooth quartic at `p`.
pub fn classify_quartic_tangent_section(
    s: &ProjectiveSurface,
    p: &SurfacePoint,
    budget: &Budget,
) -> Result<SectionClassification, SurfaceError> {
    if s.degree() != 4 {
        return Err(SurfaceError::InvalidArgument(format!("expected a quartic surface, got degree {}", s.degree())));
    }
    let t = tangent_section(s, p)?;
    let names = t.plane_vars.map(|i| XYZW[i]);
    classify_plane_quartic(&t.curve, &t.point_in_plane, names, budget)
}
