use super::*;
use crate::numerics::{BigFloat, DEFAULT_PRECISION};
use crate::poly::{lf, parse_form, q, qr};
use crate::verify::check_decomposition;

fn pf(s: &str, n: usize) -> Form<Rational> {
    parse_form(s, n).unwrap()
}

fn avoid(s: &str, n: usize) -> ForbiddenSet<Rational> {
    ForbiddenSet::parse(s, n).unwrap()
}

fn checked(f: &Form<Rational>, v: &ForbiddenSet<Rational>, dec: &Decomposition) {
    let r = check_decomposition(f, dec, v, Tolerance::default()).unwrap();
    assert!(r.pass, "{r:?}\n{dec}\n{:#?}", dec.trace);
}

fn run(f: &str, n: usize, v: &str) -> Decomposition {
    let (f, v) = (pf(f, n), avoid(v, n));
    let dec = decompose(&f, &v, &DecomposeOptions::default()).unwrap();
    checked(&f, &v, &dec);
    dec
}

#[test]
fn forbidden_examples() {
    let tol = Tolerance::default();
    let v = avoid("l0", 3);
    assert!(!is_forbidden(&lf(&[1, 1, 0]), &v, tol));
    assert!(is_forbidden(&lf(&[0, 1, 0]), &v, tol));
    let v = avoid("l1", 3).convert::<AppComplex>(256).unwrap();
    let eps = AppComplex::from_real(BigFloat::pow2(-200, 256));
    let l = LinearForm::new(vec![AppComplex::from_i64(1, 256), eps, AppComplex::zero(256)]);
    assert!(is_forbidden(&l, &v, tol));
}

#[test]
fn forbidden_set_rejects_zero_constraint() {
    assert!(ForbiddenSet::parse("l0 - l0", 2).is_err());
    assert!(ForbiddenSet::parse("# comment\n\nl0*l1\n", 2).unwrap().constraints().len() == 1);
}

#[test]
fn single_powers() {
    let dec = run("x1^3", 3, "l0 - l1");
    assert_eq!(dec.len(), 1);
    let dec = run("x1^4 + 4*x1^3*x2 + 6*x1^2*x2^2 + 4*x1*x2^3 + x2^4", 3, "");
    assert_eq!(dec.len(), 1);
    assert!(dec.is_exact());
}

#[test]
fn forbidden_span_is_reported() {
    let f = pf("x1^3", 2);
    let v = avoid("l0", 2);
    assert_eq!(decompose(&f, &v, &DecomposeOptions::default()), Err(WaringError::ForbiddenSpan));
}

#[test]
fn quadratic_examples() {
    let dec = run("x0*x1", 2, "");
    assert_eq!(dec.len(), 2);
    assert!(dec.is_exact());
    let dec = run("x0^2 + x1^2 + x2^2", 3, "l0 - l1");
    assert_eq!(dec.len(), 3);
    assert!(dec.is_exact());
    // (x0 + x1)(x2 - x3): Gram rank 2 in four variables
    let dec = run("x0*x2 - x0*x3 + x1*x2 - x1*x3", 4, "l0\nl2");
    assert_eq!(dec.len(), 2);
    assert!(dec.is_exact());
}

#[test]
fn quadratic_entry_point_checks_degree() {
    let v = ForbiddenSet::empty(2);
    assert!(decompose_quadratic(&pf("x0^3", 2), &v, 1).is_err());
    let dec = decompose_quadratic(&pf("x0*x1", 2), &v, 1).unwrap();
    assert_eq!(dec.len(), 2);
}

#[test]
fn binary_examples() {
    let f = pf("x0^3*x1", 2);
    let v = ForbiddenSet::empty(2);
    let dec = decompose_binary(&f, &v, 7, 256).unwrap();
    checked(&f, &v, &dec);
    assert_eq!(dec.len(), 4);

    let f = pf("x0^3 + x1^3", 2);
    let dec = decompose_binary(&f, &v, 7, 256).unwrap();
    checked(&f, &v, &dec);
    assert_eq!(dec.len(), 2);
    assert!(dec.is_exact());
    if let Terms::Exact(ts) = &dec.terms {
        let mut forms: Vec<_> = ts.iter().map(|t| t.form.clone()).collect();
        forms.sort_by_key(|l| l.coords()[0].clone());
        assert_eq!(forms, vec![lf(&[0, 1]), lf(&[1, 0])]);
    }

    let f = pf("x0*x1", 2);
    let dec = decompose_binary(&f, &v, 7, 256).unwrap();
    checked(&f, &v, &dec);
    assert_eq!(dec.len(), 2);
}

#[test]
fn binary_avoids_generator_roots() {
    // the generator d0*d1 has roots x0, x1, both forbidden here
    let f = pf("x0^3 + x1^3", 2);
    let v = avoid("l0*l1", 2);
    let dec = decompose_binary(&f, &v, 3, 256).unwrap();
    checked(&f, &v, &dec);
    assert!(dec.len() <= 3);
}

#[test]
fn binary_monomials_need_d_terms() {
    for d in 2..=10 {
        let f = pf(&format!("x0^{}*x1", d - 1), 2);
        let v = ForbiddenSet::empty(2);
        let dec = decompose(&f, &v, &DecomposeOptions::default()).unwrap();
        checked(&f, &v, &dec);
        assert_eq!(dec.len(), d as usize, "d = {d}");
    }
}

#[test]
fn kleppe_form_with_forbidden_hyperplane() {
    let dec = run("x0*x1^2 + x1*x2^2", 3, "l0");
    assert_eq!(dec.len(), 5);
    for t in dec.terms.to_approx(256) {
        assert!(t.form.coords()[0].log2_abs() > -20.0);
    }
}

#[test]
fn dense_ternary_cubic_uses_four_terms() {
    let dec = run("x0^3 + 2*x0^2*x1 - x0*x2^2 + 3*x1^3 + x1*x2^2 - 5*x2^3 + x0*x1*x2", 3, "");
    assert_eq!(dec.len(), 4);
}

#[test]
fn fermat_cubic_takes_the_base_point_path() {
    let f = pf("x0^3 + x1^3 + x2^3", 3);
    let v = ForbiddenSet::empty(3);
    let dec = decompose_ternary_cubic(&f, &v, DEFAULT_SEED, 256).unwrap();
    checked(&f, &v, &dec);
    assert_eq!(dec.len(), 5);
    assert!(dec.trace.iter().any(|s| s.contains("base point")));
}

#[test]
fn inductive_four_variable_cubic() {
    let f = pf(
        "x0^3 - 2*x0*x1*x2 + x1^2*x3 + 3*x2^3 - x0*x3^2 + x3^3 + x1^3 + 2*x0^2*x2",
        4,
    );
    let v = avoid("l0 + l1\nl2 - 3*l3", 4);
    let dec = decompose(&f, &v, &DecomposeOptions::default()).unwrap();
    checked(&f, &v, &dec);
    assert!(dec.len() <= 9);
    assert!(dec.trace.iter().any(|s| s.contains("kept terms")));
}

#[test]
fn inductive_ternary_quartic() {
    let f = pf("x0^4 + x1^4 + x2^4 + x0*x1*x2^2 - 3*x0^2*x1^2 + x1*x2^3", 3);
    let v = avoid("l1", 3);
    let dec = decompose_inductive(&f, &v, 11, 256).unwrap();
    checked(&f, &v, &dec);
    assert!(dec.len() <= 9);
}

#[test]
fn shrink_hands_back_terms_when_the_remainder_degenerates() {
    // sum of cubes with the natural lower decomposition: the weighted cubes
    // rebuild f exactly, so the remainder starts at zero and terms are
    // handed back one by one
    let f = pf("x0^3 + x1^3 + x2^3 + x3^3", 4);
    let v = ForbiddenSet::empty(4);
    let lower = Terms::Exact((0..4).map(|i| Term::new(q(3), LinearForm::var(4, i))).collect());
    let mut ctx = Ctx::new(&DecomposeOptions::default());
    let terms = inductive::finish::<Rational>(&mut ctx, &f, &v, &[1, 1, 1, 1], &lower).unwrap();
    let line = ctx
        .trace
        .iter()
        .find_map(|s| s.trim().strip_prefix("kept terms while shrinking: "))
        .unwrap()
        .to_string();
    assert_eq!(line, "[4, 3, 2, 1]");
    let dec = Decomposition {
        num_vars: 4,
        degree: 3,
        terms,
        trace: ctx.trace,
    };
    checked(&f, &v, &dec);
}

#[test]
fn shrink_sizes_decrease_on_random_runs() {
    let forms = [
        "x0^3 - 2*x0*x1*x2 + x1^2*x3 + 3*x2^3 - x0*x3^2 + x3^3 + x1^3 + 2*x0^2*x2",
        "x0^3 + x1^3 + x2^3 + x3^3 + x0*x1*x3",
        "x0*x1*x2 + x1*x2*x3 + x0^2*x3 + x2^3",
    ];
    let v = ForbiddenSet::empty(4);
    for s in forms {
        let f = pf(s, 4);
        let dec = decompose(&f, &v, &DecomposeOptions::default()).unwrap();
        checked(&f, &v, &dec);
        for line in dec.trace.iter().filter_map(|s| s.trim().strip_prefix("kept terms while shrinking: ")) {
            let sizes: Vec<usize> = line
                .trim_matches(|c| c == '[' || c == ']')
                .split(", ")
                .map(|x| x.parse().unwrap())
                .collect();
            assert!(sizes.windows(2).all(|w| w[1] < w[0]), "{line}");
        }
    }
}

#[test]
fn absorb_examples() {
    let dec = Decomposition {
        num_vars: 2,
        degree: 3,
        terms: Terms::Exact(vec![Term::new(q(8), lf(&[1, 0]))]),
        trace: vec![],
    };
    let a = absorb_coefficients(&dec, 256);
    assert_eq!(a.terms, Terms::Exact(vec![Term::new(q(1), lf(&[2, 0]))]));

    let dec = Decomposition {
        terms: Terms::Exact(vec![Term::new(q(-1), lf(&[1, 2]))]),
        ..dec
    };
    let a = absorb_coefficients(&dec, 256);
    assert_eq!(a.terms, Terms::Exact(vec![Term::new(q(1), lf(&[-1, -2]))]));

    let dec = Decomposition {
        num_vars: 2,
        degree: 2,
        terms: Terms::Exact(vec![Term::new(q(2), lf(&[1, 0])), Term::new(qr(9, 4), lf(&[0, 1]))]),
        trace: vec![],
    };
    let a = absorb_coefficients(&dec, 256);
    assert!(!a.is_exact());
    let f = pf("2*x0^2 + 9/4*x1^2", 2);
    checked(&f, &ForbiddenSet::empty(2), &a);
}

#[test]
fn absorbing_a_full_pipeline_result_still_verifies() {
    let f = pf("x0*x1^2 + x1*x2^2", 3);
    let v = ForbiddenSet::empty(3);
    let dec = decompose(&f, &v, &DecomposeOptions::default()).unwrap();
    let a = absorb_coefficients(&dec, DEFAULT_PRECISION);
    checked(&f, &v, &a);
}

#[test]
fn same_seed_same_result() {
    let f = pf("x0^3 + 2*x0^2*x1 - x0*x2^2 + 3*x1^3 + x1*x2^2 - 5*x2^3 + x0*x1*x2", 3);
    let v = avoid("l0 + l1", 3);
    let a = decompose(&f, &v, &DecomposeOptions::with_seed(5)).unwrap();
    let b = decompose(&f, &v, &DecomposeOptions::with_seed(5)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn zero_and_constant_forms_are_rejected() {
    let v = ForbiddenSet::empty(2);
    assert!(decompose(&Form::zero(2, 3), &v, &DecomposeOptions::default()).is_err());
    assert!(decompose(&Form::constant(2, q(3)), &v, &DecomposeOptions::default()).is_err());
}

#[test]
fn proportional_terms_merge() {
    let ts = vec![
        Term::new(q(1), lf(&[1, 1])),
        Term::new(q(1), lf(&[2, 2])),
        Term::new(q(3), lf(&[1, -1])),
        Term::new(q(3), lf(&[-1, 1])),
    ];
    let merged = merge_terms(ts, 3, Tolerance::default());
    assert_eq!(merged, vec![Term::new(q(9), lf(&[1, 1]))]);
}
