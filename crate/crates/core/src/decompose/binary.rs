//! Binary forms: a squarefree element of the annihilator with roots
//! outside the forbidden set gives the linear forms; the coefficients come
//! from a linear solve.

use super::fit::fit_coefficients;
use super::{is_forbidden, Ctx, ForbiddenSet, Term, Terms};
use crate::apolarity::{apolar_component, binary_roots};
use crate::error::{Result, WaringError};
use crate::numerics::{AppComplex, Rational, Scalar};
use crate::poly::{DualOp, Form, LinearForm};

pub(super) fn run<K: Scalar>(ctx: &mut Ctx, f: &Form<K>, v: &ForbiddenSet<K>) -> Result<Terms> {
    let d = f.degree();
    let (e, gens) = (1..=d)
        .map(|e| (e, apolar_component(f, e, ctx.tol)))
        .find(|(_, ops)| !ops.is_empty())
        .ok_or_else(|| WaringError::Internal("binary form with trivial annihilator".into()))?;
    if let Some(terms) = attempt(ctx, f, v, &gens[0])? {
        ctx.note(format!("binary form of degree {d}: apolar generator of degree {e}"));
        return Ok(terms);
    }
    let general = apolar_component(f, d, ctx.tol);
    for round in 0..ctx.max_retries {
        let weights: Vec<K> = ctx.sample_in(general.len(), round);
        let g = general
            .iter()
            .zip(&weights)
            .map(|(op, w)| op.scale(w))
            .reduce(|a, b| a.add(&b))
            .expect("nonempty");
        if g.is_zero() {
            continue;
        }
        if let Some(terms) = attempt(ctx, f, v, &g)? {
            ctx.note(format!("binary form of degree {d}: general annihilator of degree {d}"));
            return Ok(terms);
        }
    }
    Err(ctx.exhausted("sampling a squarefree annihilator of the binary form"))
}

/// Decompose along the roots of `g` when they are simple and allowed.
fn attempt<K: Scalar>(ctx: &mut Ctx, f: &Form<K>, v: &ForbiddenSet<K>, g: &DualOp<K>) -> Result<Option<Terms>> {
    let roots = binary_roots(g.as_form(), ctx.wprec, ctx.tol)?;
    if roots.len() as u32 != g.degree() || roots.iter().any(|r| r.multiplicity != 1) {
        return Ok(None);
    }
    for (i, a) in roots.iter().enumerate() {
        if roots[i + 1..].iter().any(|b| a.point.close_to(&b.point, ctx.tol.bits / 2.0)) {
            return Ok(None);
        }
    }
    let exact: Option<Vec<[Rational; 2]>> = roots.iter().map(|r| r.exact.clone()).collect();
    match (K::EXACT, exact) {
        (true, Some(pts)) => {
            let points = pts.into_iter().map(|p| LinearForm::new(p.to_vec())).collect();
            fit_on::<Rational>(ctx, f, v, points)
        }
        _ => {
            let points = roots.into_iter().map(|r| r.point.to_linear_form()).collect();
            fit_on::<AppComplex>(ctx, f, v, points)
        }
    }
}

fn fit_on<L: Scalar>(
    ctx: &mut Ctx,
    f: &Form<impl Scalar>,
    v: &ForbiddenSet<impl Scalar>,
    points: Vec<LinearForm<L>>,
) -> Result<Option<Terms>> {
    let f: Form<L> = f.convert(ctx.wprec).expect("scalar conversion");
    let v: ForbiddenSet<L> = v.convert(ctx.wprec).expect("scalar conversion");
    if points.iter().any(|l| is_forbidden(l, &v, ctx.tol)) {
        return Ok(None);
    }
    match fit_coefficients(&f, &points, ctx.tol) {
        Ok(cs) => Ok(Some(Terms::from_vec(
            cs.into_iter()
                .map(|(i, c)| Term::new(c, points[i].clone()))
                .collect(),
            ctx.wprec,
        ))),
        Err(WaringError::NoFit { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}
