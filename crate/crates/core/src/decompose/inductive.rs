//! Induction on the degree. For a general direction `a`, decompose
//! `a ⌟ f = sum c_i l_i^(d-1)`; then `sum c_i / (d a⌟l_i) l_i^d` agrees with
//! `f` up to a form killed by `a`. Terms are handed back one at a time
//! while the remainder keeps at least two killing directions, and the
//! final remainder, which lives in a hyperplane, is decomposed in one
//! variable fewer.

use super::{solve, Ctx, ForbiddenSet, Term, Terms};
use crate::apolarity::{apolar_component, essential_variables};
use crate::error::{Result, WaringError};
use crate::numerics::{AppComplex, Rational, Scalar, Tolerance};
use crate::poly::{contract, linear_power, DualOp, Form, LinearForm};

pub(super) fn run<K: Scalar>(ctx: &mut Ctx, f: &Form<K>, v: &ForbiddenSet<K>) -> Result<Terms> {
    let n = f.num_vars();
    let d = f.degree();
    let mut chosen = None;
    for round in 0..ctx.max_retries {
        let alpha = ctx.sample(n, round);
        let alpha_k: Vec<K> = alpha.iter().map(|&a| K::from_i64(a)).collect();
        if v.contains_hyperplane(&alpha_k, ctx.tol) {
            continue;
        }
        let derived = contract(&DualOp::linear(alpha_k), f)?.pruned(ctx.tol);
        if derived.is_zero() || essential_variables(&derived, ctx.tol)? != n {
            continue;
        }
        chosen = Some((alpha, derived));
        break;
    }
    let Some((alpha, derived)) = chosen else {
        return Err(ctx.exhausted("choosing a general derivative direction"));
    };
    ctx.note(format!("degree induction on ({n}, {d}): derivative along {alpha:?}"));
    let alpha_k: Vec<K> = alpha.iter().map(|&a| K::from_i64(a)).collect();
    let lower = solve(ctx, &derived, &v.with_hyperplane(&alpha_k), None)?;
    if K::EXACT && lower.is_exact() {
        finish::<Rational>(ctx, f, v, &alpha, &lower)
    } else {
        finish::<AppComplex>(ctx, f, v, &alpha, &lower)
    }
}

pub(super) fn finish<L: Scalar>(
    ctx: &mut Ctx,
    f: &Form<impl Scalar>,
    v: &ForbiddenSet<impl Scalar>,
    alpha: &[i64],
    lower: &Terms,
) -> Result<Terms> {
    let tol = ctx.tol;
    let d = f.degree();
    let f: Form<L> = f.convert(ctx.wprec).expect("scalar conversion");
    let v: ForbiddenSet<L> = v.convert(ctx.wprec).expect("scalar conversion");
    let alpha: Vec<L> = alpha.iter().map(|&a| L::from_i64(a)).collect();
    let lower: Vec<Term<L>> = lower.to_vec(ctx.wprec).expect("scalar conversion");
    let weighted: Vec<Term<L>> = lower
        .into_iter()
        .map(|t| {
            let pairing = t.form.pair(&alpha);
            let w = t.coeff / (L::from_i64(d as i64) * pairing);
            Term::new(w, t.form)
        })
        .collect();
    let scale = f.max_coeff_log2();
    let mut kept: Vec<usize> = (0..weighted.len()).collect();
    let mut rest = f.clone();
    for t in &weighted {
        rest = rest.sub(&linear_power(&t.form, d).scale(&t.coeff));
    }
    let mut rest = rest.pruned_against(scale, tol);
    let mut beta = alpha.clone();
    let mut sizes = vec![kept.len()];
    loop {
        check_kills(&beta, &rest, scale, tol)?;
        let killers = apolar_component(&rest, 1, tol);
        if killers.len() <= 1 {
            break;
        }
        let i = kept.pop().ok_or_else(|| {
            WaringError::Internal("remainder keeps two killing directions with no terms left".into())
        })?;
        let li = &weighted[i].form;
        let next = killer_through(&killers, li, tol);
        rest = rest
            .add(&linear_power(li, d).scale(&weighted[i].coeff))
            .pruned_against(scale, tol);
        check_kills(&next, &rest, scale, tol)?;
        if v.contains_hyperplane(&next, tol) {
            return Err(WaringError::Internal(
                "new killing direction lies under a forbidden constraint".into(),
            ));
        }
        beta = next;
        sizes.push(kept.len());
    }
    ctx.note(format!("kept terms while shrinking: {sizes:?}"));
    let head = Terms::from_vec(
        kept.iter().map(|&i| weighted[i].clone()).collect::<Vec<_>>(),
        ctx.wprec,
    );
    let tail = solve(ctx, &rest, &v, None)?;
    Ok(head.concat(tail, ctx.wprec))
}

/// A nonzero combination of `killers` vanishing on `l`.
fn killer_through<L: Scalar>(killers: &[DualOp<L>], l: &LinearForm<L>, tol: Tolerance) -> Vec<L> {
    let vecs: Vec<Vec<L>> = killers.iter().map(|k| k.linear_coords()).collect();
    let pairings: Vec<L> = vecs.iter().map(|k| l.pair(k)).collect();
    let (p, top) = pairings
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.log2_abs().total_cmp(&b.1.log2_abs()))
        .expect("at least two killers");
    let scale = vecs
        .iter()
        .map(|k| crate::numerics::max_log2(k.iter()))
        .fold(f64::NEG_INFINITY, f64::max)
        + l.max_log2();
    if tol.negligible(top, scale) {
        return vecs[0].clone();
    }
    let j = if p == 0 { 1 } else { 0 };
    let ratio = pairings[j].clone() / top.clone();
    vecs[j]
        .iter()
        .zip(&vecs[p])
        .map(|(a, b)| a.clone() - ratio.clone() * b.clone())
        .collect()
}

fn check_kills<L: Scalar>(beta: &[L], rest: &Form<L>, scale: f64, tol: Tolerance) -> Result<()> {
    let image = contract(&DualOp::linear(beta.to_vec()), rest)?;
    let bound = scale + crate::numerics::max_log2(beta.iter()) + (rest.degree() as f64).log2();
    let ok = image.is_zero() || (!L::EXACT && image.max_coeff_log2() <= bound - tol.bits);
    if ok {
        Ok(())
    } else {
        Err(WaringError::Internal(
            "killing direction fails to annihilate the remainder".into(),
        ))
    }
}
