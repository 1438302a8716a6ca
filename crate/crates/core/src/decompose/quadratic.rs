//! Quadrics: peel off `(a ⌟ f)^2 / (2 a^2 ⌟ f)`, which leaves a quadric
//! killed by `a`, and recurse on it.

use super::{is_forbidden, solve, Ctx, ForbiddenSet, Term, Terms};
use crate::error::Result;
use crate::numerics::Scalar;
use crate::poly::{contract, DualOp, Form, LinearForm};

pub(super) fn run<K: Scalar>(ctx: &mut Ctx, f: &Form<K>, v: &ForbiddenSet<K>) -> Result<Terms> {
    let n = f.num_vars();
    for round in 0..ctx.max_retries {
        let alpha: Vec<K> = ctx.sample_in(n, round);
        let op = DualOp::linear(alpha.clone());
        let image = contract(&op, f)?;
        let value = contract(&op.compose(&op), f)?.coeff(&crate::poly::Monomial::new(vec![0; n]));
        if ctx.tol.negligible(&value, f.max_coeff_log2() + 2.0 * LinearForm::new(alpha.clone()).max_log2()) {
            continue;
        }
        if v.contains_hyperplane(&alpha, ctx.tol) {
            continue;
        }
        let l = LinearForm::new(image.dense());
        if is_forbidden(&l, v, ctx.tol) {
            continue;
        }
        let coeff = K::one() / (K::from_i64(2) * value);
        let rest = f.sub(&crate::poly::linear_power(&l, 2).scale(&coeff)).pruned(ctx.tol);
        ctx.note(format!("quadric in {n} variables: split off one square"));
        let head = Terms::from_vec(vec![Term::new(coeff, l)], ctx.wprec);
        let tail = solve(ctx, &rest, v, None)?;
        return Ok(head.concat(tail, ctx.wprec));
    }
    Err(ctx.exhausted("choosing a direction for the quadric"))
}
