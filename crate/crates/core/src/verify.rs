//! Independent checks of decompositions: the sum of powers is rebuilt by
//! plain polynomial multiplication and compared with the input.

use crate::apolarity::{catalecticant, essential_variables};
use crate::bounds::term_bound;
use crate::decompose::{is_forbidden, Decomposition, ForbiddenSet, Terms};
use crate::error::{Result, WaringError};
use crate::numerics::{AppComplex, Rational, Scalar, Tolerance};
use crate::poly::Form;

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    /// Largest coefficient of `f - sum c_i l_i^d` over the 1-norm of `f`.
    pub residual: f64,
    pub residual_log2: f64,
    pub term_count: usize,
    pub bound_value: u64,
    pub forbidden_violations: Vec<usize>,
    pub exact: bool,
    pub pass: bool,
}

/// `sum c_i l_i^d`, each power built by repeated multiplication.
fn rebuild<K: Scalar>(n: usize, d: u32, terms: &[(K, Form<K>)]) -> Form<K> {
    let mut acc = Form::zero(n, d);
    for (c, l) in terms {
        let mut p = Form::constant(n, c.clone());
        for _ in 0..d {
            p = p.mul(l);
        }
        acc = acc.add(&p);
    }
    acc
}

pub fn check_decomposition(
    f: &Form<Rational>,
    dec: &Decomposition,
    v: &ForbiddenSet<Rational>,
    tol: Tolerance,
) -> Result<VerifyReport> {
    let (n, d) = (f.num_vars(), f.degree());
    if dec.num_vars != n || dec.degree != d || v.num_vars() != n {
        return Err(WaringError::InvalidInput(format!(
            "decomposition of shape ({}, {}) checked against a form of shape ({n}, {d})",
            dec.num_vars, dec.degree
        )));
    }
    let (residual_log2, residual_ok, violations) = match &dec.terms {
        Terms::Exact(ts) => {
            if ts.iter().any(|t| t.form.num_vars() != n) {
                return Err(WaringError::InvalidInput("term with the wrong number of variables".into()));
            }
            let pieces: Vec<_> = ts.iter().map(|t| (t.coeff.clone(), t.form.to_form())).collect();
            let delta = f.sub(&rebuild(n, d, &pieces));
            let violations = ts
                .iter()
                .enumerate()
                .filter(|(_, t)| t.form.is_zero() || is_forbidden(&t.form, v, tol))
                .map(|(i, _)| i)
                .collect();
            (delta.max_coeff_log2() - f.norm1_log2(), delta.is_zero(), violations)
        }
        Terms::Approx(ts) => {
            if ts.iter().any(|t| t.form.num_vars() != n) {
                return Err(WaringError::InvalidInput("term with the wrong number of variables".into()));
            }
            let prec = ts
                .iter()
                .map(|t| t.coeff.precision_bits())
                .max()
                .unwrap_or(crate::numerics::DEFAULT_PRECISION);
            let fc = f.to_complex(prec);
            let vc: ForbiddenSet<AppComplex> = v.convert(prec).expect("approximate target");
            let pieces: Vec<_> = ts.iter().map(|t| (t.coeff.clone(), t.form.to_form())).collect();
            let delta = fc.sub(&rebuild(n, d, &pieces));
            let r = delta.max_coeff_log2() - fc.norm1_log2();
            let violations = ts
                .iter()
                .enumerate()
                .filter(|(_, t)| t.form.is_zero() || is_forbidden(&t.form, &vc, tol))
                .map(|(i, _)| i)
                .collect();
            (r, r <= -tol.bits, violations)
        }
    };
    let m = essential_variables(f, tol)? as u64;
    let bound_value = term_bound(m, d as u64);
    let term_count = dec.len();
    let forbidden_violations: Vec<usize> = violations;
    let pass = residual_ok && forbidden_violations.is_empty() && term_count as u64 <= bound_value;
    Ok(VerifyReport {
        residual: residual_log2.exp2(),
        residual_log2,
        term_count,
        bound_value,
        forbidden_violations,
        exact: dec.is_exact(),
        pass,
    })
}

/// Largest catalecticant rank: no decomposition of `f` has fewer terms.
pub fn catalecticant_lower_bound(f: &Form<Rational>) -> Result<usize> {
    if f.is_zero() {
        return Err(WaringError::InvalidInput("the zero form has no rank bound".into()));
    }
    let d = f.degree();
    if d <= 1 {
        return Ok(1);
    }
    let tol = Tolerance::default();
    (1..d)
        .map(|e| Ok(catalecticant(f, e)?.rank(tol)))
        .try_fold(0, |acc, r: Result<usize>| Ok(acc.max(r?)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decompose::{decompose, DecomposeOptions, Term};
    use crate::poly::{lf, parse_form, q};

    fn pf(s: &str, n: usize) -> Form<Rational> {
        parse_form(s, n).unwrap()
    }

    fn exact_dec(n: usize, d: u32, terms: Vec<Term<Rational>>) -> Decomposition {
        Decomposition {
            num_vars: n,
            degree: d,
            terms: Terms::Exact(terms),
            trace: vec![],
        }
    }

    #[test]
    fn sum_of_cubes_passes_and_missing_term_fails() {
        let f = pf("x0^3 + x1^3", 2);
        let v = ForbiddenSet::empty(2);
        let tol = Tolerance::default();
        let full = exact_dec(2, 3, vec![Term::new(q(1), lf(&[1, 0])), Term::new(q(1), lf(&[0, 1]))]);
        let r = check_decomposition(&f, &full, &v, tol).unwrap();
        assert!(r.pass);
        assert_eq!(r.residual, 0.0);
        assert_eq!(r.bound_value, 3);
        let short = exact_dec(2, 3, vec![Term::new(q(1), lf(&[1, 0]))]);
        let r = check_decomposition(&f, &short, &v, tol).unwrap();
        assert!(!r.pass);
        assert!(r.residual > 0.0);
    }

    #[test]
    fn forbidden_terms_are_reported() {
        let f = pf("x0^3 + x1^3", 2);
        let v = ForbiddenSet::parse("l1", 2).unwrap();
        let dec = exact_dec(2, 3, vec![Term::new(q(1), lf(&[1, 0])), Term::new(q(1), lf(&[0, 1]))]);
        let r = check_decomposition(&f, &dec, &v, Tolerance::default()).unwrap();
        assert_eq!(r.forbidden_violations, vec![0]);
        assert!(!r.pass);
    }

    #[test]
    fn permuting_terms_does_not_change_the_report() {
        let f = pf("x0^3 + 2*x1^3", 2);
        let a = Term::new(q(1), lf(&[1, 0]));
        let b = Term::new(q(2), lf(&[0, 1]));
        let v = ForbiddenSet::empty(2);
        let tol = Tolerance::default();
        let r1 = check_decomposition(&f, &exact_dec(2, 3, vec![a.clone(), b.clone()]), &v, tol).unwrap();
        let r2 = check_decomposition(&f, &exact_dec(2, 3, vec![b, a]), &v, tol).unwrap();
        assert_eq!(r1, r2);
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        let f = pf("x0^3 + x1^3", 2);
        let dec = exact_dec(3, 3, vec![]);
        assert!(check_decomposition(&f, &dec, &ForbiddenSet::empty(2), Tolerance::default()).is_err());
    }

    #[test]
    fn kleppe_form_meets_its_bound() {
        let f = pf("x0*x1^2 + x1*x2^2", 3);
        let v = ForbiddenSet::empty(3);
        let dec = decompose(&f, &v, &DecomposeOptions::default()).unwrap();
        let r = check_decomposition(&f, &dec, &v, Tolerance::default()).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!((r.term_count, r.bound_value), (5, 5));
    }

    #[test]
    fn lower_bound_examples() {
        assert_eq!(catalecticant_lower_bound(&pf("x0^3 + x1^3", 2)).unwrap(), 2);
        assert_eq!(catalecticant_lower_bound(&pf("x0*x1^2 + x1*x2^2", 3)).unwrap(), 3);
        for d in 2..=8 {
            let f = pf(&format!("x0^{}*x1", d - 1), 2);
            assert_eq!(catalecticant_lower_bound(&f).unwrap(), 2, "d = {d}");
        }
        assert_eq!(catalecticant_lower_bound(&pf("x0 + x1", 2)).unwrap(), 1);
    }
}
