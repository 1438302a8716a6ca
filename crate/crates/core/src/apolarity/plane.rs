//! Elimination for curves in the projective plane: the resultant in the
//! last coordinate, sampled at integer nodes and interpolated, followed by
//! back-substitution along each fiber.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{apolar_component, binary_roots, vanishes_on_all, ProjPoint, SYSTEM_SEED};
use crate::error::{Result, WaringError};
use crate::numerics::{univariate_roots, AppComplex, Matrix, Scalar, Tolerance, UniPoly};
use crate::poly::{DualOp, Form};

/// Extra working bits carried through root finding.
pub(crate) const GUARD_BITS: u32 = 64;

const COORDINATE_CHANGES: usize = 3;

/// Common zeros of `(F^⊥)_e` for forms in two or three variables, using the
/// supplied randomness for pencil members and coordinate changes.
pub fn base_points_with<K: Scalar, R: Rng>(
    f: &Form<K>,
    e: u32,
    prec: u32,
    rng: &mut R,
) -> Result<Vec<ProjPoint>> {
    let n = f.num_vars();
    if !(1..=3).contains(&n) {
        return Err(WaringError::InvalidInput(format!(
            "base points are implemented for at most 3 variables, got {n}"
        )));
    }
    let tol = Tolerance::for_precision(prec);
    let wprec = prec + GUARD_BITS;
    let ops = apolar_component(f, e, tol);
    if ops.is_empty() {
        return Err(WaringError::InvalidInput(format!(
            "the apolar component of degree {e} is empty"
        )));
    }
    if e == 0 || n == 1 {
        return Ok(Vec::new());
    }
    if n == 2 {
        let g = random_member(&ops, rng);
        let mut out: Vec<ProjPoint> = Vec::new();
        for root in binary_roots(g.as_form(), wprec, tol)? {
            if vanishes_on_all(&ops, &root.point, tol) {
                push_distinct(&mut out, root.point, tol);
            }
        }
        return Ok(out);
    }
    if ops.len() == 1 {
        return Err(WaringError::Degenerate(
            "a single curve has infinitely many points".into(),
        ));
    }
    for _ in 0..COORDINATE_CHANGES {
        let a = random_change(rng, tol);
        let p = random_member(&ops, rng).as_form().substitute(&a);
        let q = random_member(&ops, rng).as_form().substitute(&a);
        let Some(projected) = eliminate(&p, &q, wprec, tol)? else {
            continue;
        };
        let a_c = a.map(|x| x.to_complex(wprec));
        let lead = lead_y2(&p);
        let fiber_form = if tol.negligible(&lead, p.max_coeff_log2()) { &q } else { &p };
        let fiber_form = fiber_form.to_complex(wprec);
        let mut out: Vec<ProjPoint> = Vec::new();
        for (y0, y1, _) in projected {
            let fib = fiber(&fiber_form, &y0, &y1).trimmed(tol, fiber_form.max_coeff_log2());
            if fib.degree().unwrap_or(0) == 0 {
                continue;
            }
            for (y2, _) in univariate_roots(&fib, wprec)? {
                let z = vec![y0.clone(), y1.clone(), y2];
                let point = ProjPoint::new(a_c.mul_vec(&z))?;
                if vanishes_on_all(&ops, &point, tol) {
                    push_distinct(&mut out, point, tol);
                }
            }
        }
        return Ok(out);
    }
    Err(WaringError::Degenerate(
        "resultant vanishes identically: the apolar system has a common curve".into(),
    ))
}

/// The four intersection points of two plane conics given as dual
/// operators.
pub fn conic_intersection<K: Scalar>(d0: &DualOp<K>, d1: &DualOp<K>, prec: u32) -> Result<Vec<ProjPoint>> {
    let mut rng = ChaCha8Rng::seed_from_u64(SYSTEM_SEED);
    conic_intersection_with(d0, d1, prec, &mut rng)
}

pub fn conic_intersection_with<K: Scalar, R: Rng>(
    d0: &DualOp<K>,
    d1: &DualOp<K>,
    prec: u32,
    rng: &mut R,
) -> Result<Vec<ProjPoint>> {
    if d0.num_vars() != 3 || d1.num_vars() != 3 || d0.degree() != 2 || d1.degree() != 2 {
        return Err(WaringError::InvalidInput(
            "conic intersection needs two quadratic operators in 3 variables".into(),
        ));
    }
    let tol = Tolerance::for_precision(prec);
    let wprec = prec + GUARD_BITS;
    let mut degenerate = true;
    for _ in 0..COORDINATE_CHANGES {
        let a = random_change(rng, tol);
        let p = d0.as_form().substitute(&a);
        let q = d1.as_form().substitute(&a);
        let Some(projected) = eliminate(&p, &q, wprec, tol)? else {
            continue;
        };
        degenerate = false;
        if projected.len() != 4 || projected.iter().any(|r| r.2 != 1) || !separated(&projected, tol) {
            continue;
        }
        let a_c = a.map(|x| x.to_complex(wprec));
        let p_c = p.to_complex(wprec);
        let q_c = q.to_complex(wprec);
        let mut out = Vec::new();
        for (y0, y1, _) in &projected {
            let y2 = common_fiber_root(&p_c, &q_c, y0, y1, wprec, tol)?;
            let point = ProjPoint::new(a_c.mul_vec(&[y0.clone(), y1.clone(), y2]))?;
            if !vanishes_on_all(&[d0.clone(), d1.clone()], &point, tol) {
                return Err(WaringError::NonTransversal);
            }
            out.push(point);
        }
        return Ok(out);
    }
    if degenerate {
        Err(WaringError::Degenerate("the conics share a component".into()))
    } else {
        Err(WaringError::NonTransversal)
    }
}

fn random_member<K: Scalar, R: Rng>(ops: &[DualOp<K>], rng: &mut R) -> DualOp<K> {
    loop {
        let mut acc: Option<DualOp<K>> = None;
        for op in ops {
            let c = K::from_i64(rng.gen_range(-8..=8));
            let t = op.scale(&c);
            acc = Some(match acc {
                Some(a) => a.add(&t),
                None => t,
            });
        }
        if let Some(g) = acc.filter(|g| !g.is_zero()) {
            return g;
        }
    }
}

fn random_change<K: Scalar, R: Rng>(rng: &mut R, tol: Tolerance) -> Matrix<K> {
    loop {
        let rows: Vec<Vec<K>> = (0..3)
            .map(|_| (0..3).map(|_| K::from_i64(rng.gen_range(-4..=4))).collect())
            .collect();
        let m = Matrix::from_rows(rows);
        if m.is_invertible(tol) {
            return m;
        }
    }
}

fn lead_y2<K: Scalar>(p: &Form<K>) -> K {
    p.coeff(&crate::poly::Monomial::new(vec![0, 0, p.degree()]))
}

/// `p(y0, y1, t)` as a polynomial in `t`.
fn fiber(p: &Form<AppComplex>, y0: &AppComplex, y1: &AppComplex) -> UniPoly<AppComplex> {
    let prec = y0.precision_bits().max(y1.precision_bits());
    let mut c = vec![AppComplex::zero(prec); p.degree() as usize + 1];
    for (m, v) in p.terms() {
        let e = m.exps();
        let t = v * &(&y0.powu(e[0]) * &y1.powu(e[1]));
        c[e[2] as usize] = &c[e[2] as usize] + &t;
    }
    UniPoly::new(c)
}

/// Same as [`fiber`] with `y0 = 1`, `y1 = t`, in the exact scalar.
fn fiber_at<K: Scalar>(p: &Form<K>, t: &K) -> Vec<K> {
    let mut c = vec![K::zero(); p.degree() as usize + 1];
    for (m, v) in p.terms() {
        let e = m.exps();
        c[e[2] as usize] = c[e[2] as usize].clone() + v.clone() * t.pow(e[1]);
    }
    c
}

fn sylvester<K: Scalar>(a: &[K], b: &[K]) -> Matrix<K> {
    let (da, db) = (a.len() - 1, b.len() - 1);
    let size = da + db;
    let mut m = Matrix::zeros(size, size);
    for r in 0..db {
        for (j, c) in a.iter().rev().enumerate() {
            m[(r, r + j)] = c.clone();
        }
    }
    for r in 0..da {
        for (j, c) in b.iter().rev().enumerate() {
            m[(db + r, r + j)] = c.clone();
        }
    }
    m
}

/// Roots `(y0, y1, multiplicity)` of the resultant of `p` and `q` with
/// respect to the last variable. `None` when the projection degenerates:
/// both leading coefficients vanish or the resultant is identically zero.
#[allow(clippy::type_complexity)]
fn eliminate<K: Scalar>(
    p: &Form<K>,
    q: &Form<K>,
    wprec: u32,
    tol: Tolerance,
) -> Result<Option<Vec<(AppComplex, AppComplex, u32)>>> {
    if tol.negligible(&lead_y2(p), p.max_coeff_log2()) && tol.negligible(&lead_y2(q), q.max_coeff_log2()) {
        return Ok(None);
    }
    let (dp, dq) = (p.degree() as i64, q.degree() as i64);
    let total = (dp * dq) as usize;
    let nodes: Vec<i64> = (0..=total as i64).map(|k| k - total as i64 / 2).collect();
    let mut values = Vec::with_capacity(nodes.len());
    for &t in &nodes {
        let t = K::from_i64(t);
        values.push(sylvester(&fiber_at(p, &t), &fiber_at(q, &t)).determinant());
    }
    let tmax = (total as f64 / 2.0 + 1.0).log2();
    let scale = dq as f64 * (p.norm1_log2() + dp as f64 * tmax) + dp as f64 * (q.norm1_log2() + dq as f64 * tmax);
    if values.iter().all(|v| tol.negligible(v, scale)) {
        return Ok(None);
    }
    let vander = Matrix::from_rows(
        nodes
            .iter()
            .map(|&t| (0..=total as u32).map(|j| K::from_i64(t).pow(j)).collect())
            .collect(),
    );
    let coeffs = vander
        .solve(&values, tol)
        .map_err(|r| WaringError::Internal(format!("interpolation residual 2^{r:.1}")))?;
    let mut res = UniPoly::new(coeffs);
    if !K::EXACT {
        res = res.trimmed(tol, crate::numerics::max_log2(res.coeffs().iter()));
    }
    let finite = res.degree().unwrap_or(0);
    let mut out = Vec::new();
    if finite < total {
        let mult = if K::EXACT { (total - finite) as u32 } else { 1 };
        out.push((AppComplex::zero(wprec), AppComplex::from_i64(1, wprec), mult));
    }
    if finite > 0 {
        for (z, mult) in univariate_roots(&res, wprec)? {
            out.push((AppComplex::from_i64(1, wprec), z, mult));
        }
    }
    Ok(Some(out))
}

/// Pairwise distinct projected roots, to half the tolerance.
fn separated(roots: &[(AppComplex, AppComplex, u32)], tol: Tolerance) -> bool {
    for (i, a) in roots.iter().enumerate() {
        for b in &roots[i + 1..] {
            let cross = &(&a.0 * &b.1) - &(&a.1 * &b.0);
            let scale = (a.0.log2_abs().max(a.1.log2_abs())) + (b.0.log2_abs().max(b.1.log2_abs()));
            if cross.log2_abs() <= scale - tol.bits / 2.0 {
                return false;
            }
        }
    }
    true
}

/// The shared last coordinate of two conics over the point `(y0, y1)`.
fn common_fiber_root(
    p: &Form<AppComplex>,
    q: &Form<AppComplex>,
    y0: &AppComplex,
    y1: &AppComplex,
    wprec: u32,
    tol: Tolerance,
) -> Result<AppComplex> {
    let fp = fiber(p, y0, y1);
    let fq = fiber(q, y0, y1);
    let coef = |f: &UniPoly<AppComplex>, k: usize| {
        f.coeffs().get(k).cloned().unwrap_or_else(|| AppComplex::zero(wprec))
    };
    let (a0, b0, c0) = (coef(&fp, 2), coef(&fp, 1), coef(&fp, 0));
    let (a1, b1, c1) = (coef(&fq, 2), coef(&fq, 1), coef(&fq, 0));
    let den = &(&a0 * &b1) - &(&a1 * &b0);
    let scale = [&a0, &b0, &a1, &b1]
        .iter()
        .map(|x| x.log2_abs())
        .fold(f64::NEG_INFINITY, f64::max);
    if !tol.loosen(tol.bits / 2.0).negligible(&den, 2.0 * scale) {
        let num = &(&a1 * &c0) - &(&a0 * &c1);
        return Ok(&num / &den);
    }
    let base = if fp.degree().unwrap_or(0) >= fq.degree().unwrap_or(0) { &fp } else { &fq };
    let other = if std::ptr::eq(base, &fp) { &fq } else { &fp };
    let base = base.trimmed(tol, crate::numerics::max_log2(base.coeffs().iter()));
    if base.degree().unwrap_or(0) == 0 {
        return Err(WaringError::NonTransversal);
    }
    univariate_roots(&base, wprec)?
        .into_iter()
        .map(|(z, _)| z)
        .min_by(|a, b| {
            other
                .eval(a)
                .log2_abs()
                .total_cmp(&other.eval(b).log2_abs())
        })
        .ok_or(WaringError::NonTransversal)
}

fn push_distinct(out: &mut Vec<ProjPoint>, p: ProjPoint, tol: Tolerance) {
    if !out.iter().any(|q| q.close_to(&p, tol.bits / 2.0)) {
        out.push(p);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Rational;
    use crate::poly::{parse_polynomial, q};

    fn conic(s: &str) -> DualOp<Rational> {
        DualOp::new(parse_polynomial(s, 3, "d").unwrap())
    }

    #[test]
    fn sign_pattern_intersection() {
        let pts = conic_intersection(&conic("d0^2 - d1^2"), &conic("d0^2 - d2^2"), 256).unwrap();
        assert_eq!(pts.len(), 4);
        for signs in [[1, 1, 1], [1, 1, -1], [1, -1, 1], [1, -1, -1]] {
            let target = ProjPoint::from_rational(&signs.map(q), 256).unwrap();
            let hit = pts.iter().any(|p| {
                // points are normalized by their largest coordinate, which
                // may be any of the three here
                let scaled: Vec<_> = p.coords().iter().map(|c| c / &p.coords()[0]).collect();
                ProjPoint::new(scaled).unwrap().close_to(&target, 100.0)
            });
            assert!(hit, "{signs:?}");
        }
    }

    #[test]
    fn shared_line_is_degenerate() {
        let r = conic_intersection(&conic("d0*d1"), &conic("d0*d2"), 256);
        assert!(matches!(r, Err(WaringError::Degenerate(_))), "{r:?}");
    }

    #[test]
    fn tangent_conics_are_not_transversal() {
        // both pass through [0:0:1] with the common tangent d0 = 0
        let r = conic_intersection(&conic("d0*d2 - d1^2"), &conic("d0*d2 + d0^2 - 2*d1^2"), 256);
        assert!(matches!(r, Err(WaringError::NonTransversal)), "{r:?}");
    }

    #[test]
    fn random_conic_pair_has_small_residuals() {
        let d0 = conic("3*d0^2 - d0*d1 + 2*d1^2 + 5*d0*d2 - d2^2 + 7*d1*d2");
        let d1 = conic("-d0^2 + 4*d0*d1 + d1^2 - 2*d0*d2 + 3*d2^2 - d1*d2");
        let pts = conic_intersection(&d0, &d1, 256).unwrap();
        assert_eq!(pts.len(), 4);
        let tol = Tolerance::for_precision(256);
        for p in &pts {
            assert!(vanishes_on_all(&[d0.clone(), d1.clone()], p, tol));
        }
    }

    #[test]
    fn approximate_conics_intersect() {
        let d0 = conic("d0^2 - d1^2").to_complex(320);
        let d1 = conic("d0^2 - 4*d2^2 + d1*d2").to_complex(320);
        let pts = conic_intersection(&d0, &d1, 256).unwrap();
        assert_eq!(pts.len(), 4);
    }
}
