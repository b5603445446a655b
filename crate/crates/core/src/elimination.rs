//! Resultants and discriminants with respect to one variable.
//!
//! Two independent routes compute the same determinant:
//!
//! * the Sylvester matrix reduced by fraction-free Bareiss elimination, valid
//!   for any leading coefficients;
//! * when the leading coefficient of `f` is a nonzero constant, the
//!   determinant of multiplication by `g` on `R[t]/(f)`, expanded by a
//!   memoized Laplace expansion with no divisions at all.
//!
//! Sign convention: `Res(f, g) = lc(f)^deg(g) * prod g(alpha)` over the roots of
//! `f`, and `disc(f) = (-1)^(n(n-1)/2) Res(f, f') / lc(f)` with `n = deg f`.
//! Degrees are formal: in characteristic `p` the derivative keeps degree
//! `n - 1` as a matrix size even if its top coefficient vanishes, so the
//! result is the reduction of the characteristic-zero formula.

use thiserror::Error;

use crate::polycore::{Field, MultiPoly, PolyError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ElimError {
    #[error("polynomial has degree {degree} in variable {var}; need at least {needed}")]
    DegreeTooLow { var: usize, degree: u32, needed: u32 },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Which determinant route to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ResultantMethod {
    /// Multiplication matrix when `lc(f)` is constant, otherwise Sylvester.
    #[default]
    Auto,
    Sylvester,
    MultiplicationMatrix,
}

/// `Res_var(f, g)` with actual degrees.
pub fn resultant<K: Field>(f: &MultiPoly<K>, g: &MultiPoly<K>, var: usize) -> Result<MultiPoly<K>, ElimError> {
    resultant_with(f, g, var, ResultantMethod::Auto)
}

pub fn resultant_with<K: Field>(
    f: &MultiPoly<K>,
    g: &MultiPoly<K>,
    var: usize,
    method: ResultantMethod,
) -> Result<MultiPoly<K>, ElimError> {
    if f.nvars() != g.nvars() {
        return Err(PolyError::ArityMismatch(f.nvars(), g.nvars()).into());
    }
    let fc = f.coefficients_in(var)?;
    let gc = g.coefficients_in(var)?;
    for c in [&fc, &gc] {
        if c.len() == 1 {
            return Err(ElimError::DegreeTooLow { var, degree: 0, needed: 1 });
        }
    }
    resultant_coeffs(f, &fc, &gc, method)
}

/// `disc_var(f)` with the sign convention in the module docs.
pub fn discriminant<K: Field>(f: &MultiPoly<K>, var: usize) -> Result<MultiPoly<K>, ElimError> {
    discriminant_with(f, var, ResultantMethod::Auto)
}

pub fn discriminant_with<K: Field>(
    f: &MultiPoly<K>,
    var: usize,
    method: ResultantMethod,
) -> Result<MultiPoly<K>, ElimError> {
    let fc = f.coefficients_in(var)?;
    let n = fc.len() as u32 - 1;
    if n < 2 {
        return Err(ElimError::DegreeTooLow { var, degree: n, needed: 2 });
    }
    let field = f.field().clone();
    // formal derivative coefficients: (i+1) * f_{i+1}, length n
    let dc: Vec<MultiPoly<K>> = (0..n as usize).map(|i| fc[i + 1].scale(&field.from_i64(i as i64 + 1))).collect();
    let res = resultant_coeffs(f, &fc, &dc, method)?;
    let lc = &fc[n as usize];
    let mut disc = if lc.is_constant() {
        let inv = field.inv(&lc.constant_term()).expect("nonzero leading coefficient");
        res.scale(&inv)
    } else {
        res.exact_div(lc).expect("discriminant division must be exact")
    };
    if (n * (n - 1) / 2) % 2 == 1 {
        disc = -disc;
    }
    Ok(disc)
}

fn resultant_coeffs<K: Field>(
    proto: &MultiPoly<K>,
    fc: &[MultiPoly<K>],
    gc: &[MultiPoly<K>],
    method: ResultantMethod,
) -> Result<MultiPoly<K>, ElimError> {
    let n = fc.len() - 1;
    let lc = &fc[n];
    let use_mult = match method {
        ResultantMethod::Auto | ResultantMethod::MultiplicationMatrix => lc.is_constant() && !lc.is_zero(),
        ResultantMethod::Sylvester => false,
    };
    if method == ResultantMethod::MultiplicationMatrix && !use_mult {
        return Err(ElimError::Poly(PolyError::NotDivisible));
    }
    if use_mult {
        Ok(resultant_multiplication_matrix(proto, fc, gc))
    } else {
        Ok(resultant_sylvester(proto, fc, gc))
    }
}

fn resultant_sylvester<K: Field>(proto: &MultiPoly<K>, fc: &[MultiPoly<K>], gc: &[MultiPoly<K>]) -> MultiPoly<K> {
    let n = fc.len() - 1;
    let m = gc.len() - 1;
    let size = n + m;
    let zero = MultiPoly::zero(proto.field().clone(), proto.nvars());
    let mut mat = vec![vec![zero.clone(); size]; size];
    // rows 0..m: shifts of f, rows m..m+n: shifts of g; column j holds t^(size-1-j)
    for r in 0..m {
        for (i, c) in fc.iter().enumerate() {
            mat[r][r + n - i] = c.clone();
        }
    }
    for r in 0..n {
        for (i, c) in gc.iter().enumerate() {
            mat[m + r][r + m - i] = c.clone();
        }
    }
    det_bareiss(mat, proto)
}

fn resultant_multiplication_matrix<K: Field>(
    proto: &MultiPoly<K>,
    fc: &[MultiPoly<K>],
    gc: &[MultiPoly<K>],
) -> MultiPoly<K> {
    let field = proto.field().clone();
    let n = fc.len() - 1;
    let k = gc.len() - 1;
    let lc = fc[n].constant_term();
    let lc_inv = field.inv(&lc).expect("nonzero leading coefficient");
    // monic f: t^n = -sum_{i<n} mf[i] t^i
    let mf: Vec<MultiPoly<K>> = fc[..n].iter().map(|c| c.scale(&lc_inv)).collect();
    let reduce_top = |v: &mut Vec<MultiPoly<K>>| {
        while v.len() > n {
            let top = v.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let base = v.len() - n;
            for (i, c) in mf.iter().enumerate() {
                v[base + i] = &v[base + i] - &(&top * c);
            }
        }
    };
    let mut col: Vec<MultiPoly<K>> = gc.to_vec();
    reduce_top(&mut col);
    while col.len() < n {
        col.push(MultiPoly::zero(field.clone(), proto.nvars()));
    }
    let mut columns = Vec::with_capacity(n);
    for j in 0..n {
        if j > 0 {
            let mut next = Vec::with_capacity(n + 1);
            next.push(MultiPoly::zero(field.clone(), proto.nvars()));
            next.extend(col.iter().cloned());
            reduce_top(&mut next);
            col = next;
        }
        columns.push(col.clone());
    }
    // matrix entry (row i, column j) = coefficient of t^i in g t^j mod f
    let mat: Vec<Vec<MultiPoly<K>>> = (0..n).map(|i| (0..n).map(|j| columns[j][i].clone()).collect()).collect();
    let det = det_laplace(&mat, proto);
    det.scale(&field.pow(&lc, k as u64))
}

/// Determinant by fraction-free Bareiss elimination with row pivoting.
pub fn det_bareiss<K: Field>(mut a: Vec<Vec<MultiPoly<K>>>, proto: &MultiPoly<K>) -> MultiPoly<K> {
    let n = a.len();
    let field = proto.field().clone();
    if n == 0 {
        return MultiPoly::one(field, proto.nvars());
    }
    let mut sign_negative = false;
    let mut prev = MultiPoly::one(field.clone(), proto.nvars());
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            // prefer the sparsest nonzero pivot below
            let pick = (k + 1..n).filter(|&r| !a[r][k].is_zero()).min_by_key(|&r| a[r][k].len());
            match pick {
                Some(r) => {
                    a.swap(k, r);
                    sign_negative = !sign_negative;
                }
                None => return MultiPoly::zero(field, proto.nvars()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                a[i][j] =
                    if prev.is_one() { num } else { num.exact_div(&prev).expect("Bareiss division must be exact") };
            }
            a[i][k] = MultiPoly::zero(field.clone(), proto.nvars());
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if sign_negative {
        -det
    } else {
        det
    }
}

/// Division-free determinant by Laplace expansion along rows, memoizing the
/// minors on the leading rows indexed by column subsets. Cost is
/// `n 2^(n-1)` polynomial products; intended for `n <= 12`.
pub fn det_laplace<K: Field>(a: &[Vec<MultiPoly<K>>], proto: &MultiPoly<K>) -> MultiPoly<K> {
    let n = a.len();
    assert!(n <= 20, "Laplace expansion is exponential in the matrix size");
    let field = proto.field().clone();
    let nv = proto.nvars();
    let mut level: rustc_hash::FxHashMap<u32, MultiPoly<K>> = rustc_hash::FxHashMap::default();
    level.insert(0, MultiPoly::one(field.clone(), nv));
    for row in 0..n {
        let mut next: rustc_hash::FxHashMap<u32, MultiPoly<K>> = rustc_hash::FxHashMap::default();
        let mut keys: Vec<u32> = level.keys().copied().collect();
        keys.sort_unstable();
        for s in keys {
            let minor = &level[&s];
            if minor.is_zero() {
                continue;
            }
            for j in 0..n {
                if s & (1 << j) != 0 || a[row][j].is_zero() {
                    continue;
                }
                let t = s | (1 << j);
                // column j sits after the columns of s above it
                let above = (s >> j).count_ones();
                let term = &a[row][j] * minor;
                let term = if above % 2 == 1 { -term } else { term };
                match next.get_mut(&t) {
                    Some(acc) => *acc = &*acc + &term,
                    None => {
                        next.insert(t, term);
                    }
                }
            }
        }
        level = next;
    }
    let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    level.remove(&full).unwrap_or_else(|| MultiPoly::zero(field, nv))
}
