//! Ternary cubics. Without base points two general conics of the apolar
//! net meet in four points whose cubes span `f`. With a base point, add a
//! cube `l^3` that removes it and subtract it again at the end.

use super::fit::fit_coefficients;
use super::{is_forbidden, Ctx, ForbiddenSet, Term, Terms};
use crate::apolarity::{apolar_component, base_points_with, conic_intersection_with, essential_variables};
use crate::error::{Result, WaringError};
use crate::numerics::{AppComplex, Scalar};
use crate::poly::{linear_power, DualOp, Form, LinearForm};

pub(super) fn run<K: Scalar>(ctx: &mut Ctx, f: &Form<K>, v: &ForbiddenSet<K>) -> Result<Terms> {
    if !has_base_point(ctx, f)? {
        let terms = good_path(ctx, f, v)?;
        ctx.note(format!("ternary cubic without base points: {} terms", terms.len()));
        return Ok(terms);
    }
    for round in 0..ctx.max_retries {
        let l = LinearForm::new(ctx.sample_in::<K>(3, round));
        if is_forbidden(&l, v, ctx.tol) {
            continue;
        }
        let shifted = f.add(&linear_power(&l, 3));
        if essential_variables(&shifted, ctx.tol)? != 3 || has_base_point(ctx, &shifted)? {
            continue;
        }
        let terms = match good_path(ctx, &shifted, v) {
            Ok(t) => t,
            Err(e) if e.is_retriable() => continue,
            Err(e) => return Err(e),
        };
        ctx.note(format!(
            "ternary cubic with a base point: {} terms plus one correcting cube",
            terms.len()
        ));
        let correction = Terms::from_vec(vec![Term::new(-K::one(), l)], ctx.wprec);
        return Ok(terms.concat(correction, ctx.wprec));
    }
    Err(ctx.exhausted("moving the ternary cubic off its base points"))
}

fn has_base_point<K: Scalar>(ctx: &mut Ctx, f: &Form<K>) -> Result<bool> {
    match base_points_with(f, 2, ctx.prec, &mut ctx.rng) {
        Ok(pts) => Ok(!pts.is_empty()),
        Err(WaringError::Degenerate(_)) => Ok(true),
        Err(e) => Err(e),
    }
}

/// Four points from a random pencil of apolar conics.
fn good_path<K: Scalar>(ctx: &mut Ctx, f: &Form<K>, v: &ForbiddenSet<K>) -> Result<Terms> {
    let net = apolar_component(f, 2, ctx.tol);
    if net.len() < 2 {
        return Err(WaringError::Internal(format!(
            "apolar conics of a ternary cubic span {} dimensions",
            net.len()
        )));
    }
    let fc: Form<AppComplex> = f.convert(ctx.wprec).expect("approximate target");
    let vc: ForbiddenSet<AppComplex> = v.convert(ctx.wprec).expect("approximate target");
    for round in 0..ctx.max_retries {
        let d0 = combine(&net, &ctx.sample_in::<K>(net.len(), round));
        let d1 = combine(&net, &ctx.sample_in::<K>(net.len(), round));
        let points = match conic_intersection_with(&d0, &d1, ctx.prec, &mut ctx.rng) {
            Ok(p) => p,
            Err(WaringError::NonTransversal | WaringError::Degenerate(_)) => continue,
            Err(e) => return Err(e),
        };
        let forms: Vec<LinearForm<AppComplex>> = points.iter().map(|p| p.to_linear_form()).collect();
        if forms.iter().any(|l| is_forbidden(l, &vc, ctx.tol)) {
            continue;
        }
        match fit_coefficients(&fc, &forms, ctx.tol) {
            Ok(cs) => {
                let terms = cs.into_iter().map(|(i, c)| Term::new(c, forms[i].clone())).collect();
                return Ok(Terms::Approx(terms));
            }
            Err(WaringError::NoFit { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(ctx.exhausted("intersecting apolar conics"))
}

fn combine<K: Scalar>(ops: &[DualOp<K>], weights: &[K]) -> DualOp<K> {
    ops.iter()
        .zip(weights)
        .map(|(op, w)| op.scale(w))
        .reduce(|a, b| a.add(&b))
        .expect("nonempty")
}
