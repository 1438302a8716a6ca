//! Oracles shared by the integration suites. They evaluate polynomials at
//! points by hand instead of expanding powers through the library.

#![allow(dead_code)]

use num_traits::{One, Signed, Zero};
use rand::Rng;
use waring::decompose::{Decomposition, ForbiddenSet, Terms};
use waring::numerics::{AppComplex, BigFloat, Rational};
use waring::poly::{monomials, Form};

pub const PREC: u32 = 256;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Dense form with coefficients `p/q`, `|p| <= height`, `1 <= q <= 6`.
pub fn random_rational_form<R: Rng>(rng: &mut R, n: usize, d: u32, height: i64) -> Form<Rational> {
    let terms = monomials(n, d)
        .into_iter()
        .map(|m| (m, rat(rng.gen_range(-height..=height), rng.gen_range(1..=6))));
    Form::from_terms(n, d, terms).unwrap()
}

fn pow_q(x: &Rational, e: u32) -> Rational {
    (0..e).fold(Rational::one(), |acc, _| acc * x)
}

fn pow_c(x: &AppComplex, e: u32, prec: u32) -> AppComplex {
    (0..e).fold(AppComplex::from_i64(1, prec), |acc, _| &acc * x)
}

pub fn eval_exact(f: &Form<Rational>, p: &[Rational]) -> Rational {
    f.terms()
        .map(|(m, c)| {
            m.exps()
                .iter()
                .zip(p)
                .fold(c.clone(), |acc, (&e, x)| acc * pow_q(x, e))
        })
        .fold(Rational::zero(), |a, b| a + b)
}

/// Value and `sum |c m(p)|`, the scale rounding errors are measured against.
pub fn eval_complex(f: &Form<Rational>, p: &[AppComplex], prec: u32) -> (AppComplex, BigFloat) {
    let mut acc = AppComplex::zero(prec);
    let mut scale = BigFloat::zero(prec);
    for (m, c) in f.terms() {
        let mut t = AppComplex::from_rational(c, prec);
        for (&e, x) in m.exps().iter().zip(p) {
            t = &t * &pow_c(x, e, prec);
        }
        scale = &scale + &t.abs();
        acc = &acc + &t;
    }
    (acc, scale)
}

fn dot_q(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |s, (x, y)| s + x * y)
}

fn dot_c(a: &[AppComplex], b: &[AppComplex], prec: u32) -> AppComplex {
    a.iter().zip(b).fold(AppComplex::zero(prec), |s, (x, y)| &s + &(x * y))
}

/// `log2` of the largest relative mismatch between `f(p)` and the sum of
/// powers at random rational points; `-inf` when every value agrees exactly.
pub fn pointwise_residual_log2<R: Rng>(f: &Form<Rational>, dec: &Decomposition, rng: &mut R, samples: usize) -> f64 {
    let n = f.num_vars();
    let d = dec.degree;
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..samples {
        let p: Vec<Rational> = (0..n).map(|_| rat(rng.gen_range(-20..=20), rng.gen_range(1..=7))).collect();
        match &dec.terms {
            Terms::Exact(ts) => {
                let lhs = eval_exact(f, &p);
                let rhs = ts
                    .iter()
                    .fold(Rational::zero(), |s, t| s + &t.coeff * pow_q(&dot_q(t.form.coords(), &p), d));
                if lhs != rhs {
                    let diff = (lhs - &rhs).abs();
                    let scale = rhs.abs().max(Rational::one());
                    let r = BigFloat::from_rational(&(diff / scale), 64).log2_abs();
                    worst = worst.max(r);
                }
            }
            Terms::Approx(ts) => {
                let prec = ts[0].coeff.precision_bits();
                let pc: Vec<AppComplex> = p.iter().map(|x| AppComplex::from_rational(x, prec)).collect();
                let (lhs, mut scale) = eval_complex(f, &pc, prec);
                let mut rhs = AppComplex::zero(prec);
                for t in ts {
                    let v = &t.coeff * &pow_c(&dot_c(t.form.coords(), &pc, prec), d, prec);
                    scale = &scale + &v.abs();
                    rhs = &rhs + &v;
                }
                let diff = (&lhs - &rhs).log2_abs();
                worst = worst.max(diff - scale.log2_abs());
            }
        }
    }
    worst
}

/// Indices of terms whose linear form satisfies some constraint of `v`.
/// Approximate coordinates count as forbidden when the constraint value is
/// below `2^-bits` relative to its size.
pub fn forbidden_terms(dec: &Decomposition, v: &ForbiddenSet<Rational>, bits: f64) -> Vec<usize> {
    let mut bad = Vec::new();
    match &dec.terms {
        Terms::Exact(ts) => {
            for (i, t) in ts.iter().enumerate() {
                if t.form.coords().iter().all(|c| c.is_zero())
                    || v.constraints().iter().any(|h| eval_exact(h, t.form.coords()).is_zero())
                {
                    bad.push(i);
                }
            }
        }
        Terms::Approx(ts) => {
            for (i, t) in ts.iter().enumerate() {
                let prec = t.coeff.precision_bits();
                let hit = v.constraints().iter().any(|h| {
                    let (val, scale) = eval_complex(h, t.form.coords(), prec);
                    val.log2_abs() < scale.log2_abs() - bits
                });
                if hit || t.form.coords().iter().all(|c| c.is_zero()) {
                    bad.push(i);
                }
            }
        }
    }
    bad
}
