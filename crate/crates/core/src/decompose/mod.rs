//! Waring decompositions `f = sum c_i l_i^d` whose linear forms avoid a
//! forbidden set.
//!
//! Every entry point first reduces `f` to its essential variables, then
//! routes by shape: a single power, quadrics by completing squares, binary
//! forms through their apolar generators, ternary cubics through pencils of
//! apolar conics, and everything else by induction on the degree.

mod binary;
mod fit;
mod inductive;
mod quadratic;
mod ternary;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::apolarity::{essential_split, EssentialSplit};
use crate::error::{Result, WaringError};
use crate::numerics::{AppComplex, Matrix, Rational, Scalar, Tolerance, MIN_PRECISION};
use crate::poly::{parse_polynomial, render_polynomial, Form, LinearForm};

pub use crate::apolarity::conic_intersection;
pub use fit::fit_coefficients;

/// Seed used when the caller does not supply one.
pub const DEFAULT_SEED: u64 = 0x5741_5249_4e47;

pub(crate) use crate::apolarity::GUARD_BITS;

/// Linear forms ruled out as summands: those at which some constraint
/// polynomial vanishes.
#[derive(Clone, Debug, PartialEq)]
pub struct ForbiddenSet<K> {
    num_vars: usize,
    constraints: Vec<Form<K>>,
}

impl<K: Scalar> ForbiddenSet<K> {
    pub fn new(num_vars: usize, constraints: Vec<Form<K>>) -> Result<Self> {
        for g in &constraints {
            if g.num_vars() != num_vars {
                return Err(WaringError::InvalidInput(format!(
                    "constraint in {} variables for forms in {}",
                    g.num_vars(),
                    num_vars
                )));
            }
            if g.is_zero() {
                return Err(WaringError::InvalidInput(
                    "the zero constraint would forbid every linear form".into(),
                ));
            }
        }
        Ok(ForbiddenSet {
            num_vars,
            constraints,
        })
    }

    pub fn empty(num_vars: usize) -> Self {
        ForbiddenSet {
            num_vars,
            constraints: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn constraints(&self) -> &[Form<K>] {
        &self.constraints
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    /// Also forbid the hyperplane `sum alpha_i l_i = 0`.
    pub fn with_hyperplane(&self, alpha: &[K]) -> Self {
        let mut out = self.clone();
        out.constraints.push(LinearForm::new(alpha.to_vec()).to_form());
        out
    }

    /// Apply `restrict` to each constraint; fails when one vanishes.
    pub fn restrict(&self, num_vars: usize, restrict: impl Fn(&Form<K>) -> Form<K>, tol: Tolerance) -> Result<Self> {
        let mut out = Vec::with_capacity(self.constraints.len());
        for g in &self.constraints {
            let r = restrict(g).pruned(tol);
            if r.is_zero() || (!K::EXACT && r.norm1_log2() <= g.norm1_log2() - tol.bits) {
                return Err(WaringError::ForbiddenSpan);
            }
            out.push(r);
        }
        ForbiddenSet::new(num_vars, out)
    }

    /// Whether the whole hyperplane `sum alpha_i l_i = 0` is forbidden,
    /// i.e. the linear polynomial divides some constraint. Decided by
    /// restricting each constraint to the hyperplane.
    pub fn contains_hyperplane(&self, alpha: &[K], tol: Tolerance) -> bool {
        let a = hyperplane_basis(alpha);
        let scale = a.max_log2().max(0.0);
        self.constraints.iter().any(|g| {
            let r = g.substitute(&a);
            if K::EXACT {
                return r.is_zero();
            }
            let bound = g.norm1_log2() + g.degree() as f64 * (scale + (self.num_vars as f64).log2());
            r.is_zero() || r.max_coeff_log2() <= bound - tol.bits
        })
    }

    pub fn convert<L: Scalar>(&self, prec: u32) -> Option<ForbiddenSet<L>> {
        Some(ForbiddenSet {
            num_vars: self.num_vars,
            constraints: self
                .constraints
                .iter()
                .map(|g| g.convert(prec))
                .collect::<Option<Vec<_>>>()?,
        })
    }
}

impl ForbiddenSet<Rational> {
    /// One constraint per line in the variables `l0 .. l{n-1}`; blank lines
    /// and lines starting with `#` are skipped.
    pub fn parse(text: &str, num_vars: usize) -> Result<Self> {
        let mut constraints = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            constraints.push(parse_polynomial(line, num_vars, "l")?);
        }
        ForbiddenSet::new(num_vars, constraints)
    }

    pub fn render(&self) -> Vec<String> {
        self.constraints.iter().map(|g| render_polynomial(g, "l")).collect()
    }
}

/// Columns form a basis of `{l : sum alpha_i l_i = 0}`.
pub(crate) fn hyperplane_basis<K: Scalar>(alpha: &[K]) -> Matrix<K> {
    let n = alpha.len();
    let (p, _) = alpha
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.log2_abs().total_cmp(&b.1.log2_abs()))
        .expect("nonempty");
    let mut a = Matrix::zeros(n, n - 1);
    let mut col = 0;
    for j in 0..n {
        if j == p {
            continue;
        }
        a[(j, col)] = K::one();
        a[(p, col)] = -(alpha[j].clone() / alpha[p].clone());
        col += 1;
    }
    a
}

/// Exact test for exact scalars; for approximate ones, true whenever some
/// constraint is within tolerance of zero relative to its 1-norm and the
/// size of `l`.
pub fn is_forbidden<K: Scalar>(l: &LinearForm<K>, v: &ForbiddenSet<K>, tol: Tolerance) -> bool {
    assert_eq!(l.num_vars(), v.num_vars(), "variable count mismatch");
    v.constraints.iter().any(|g| {
        let val = g.evaluate(l.coords());
        if K::EXACT {
            return val.is_zero();
        }
        val.is_zero() || val.log2_abs() <= g.norm1_log2() + g.degree() as f64 * l.max_log2() - tol.bits
    })
}

/// `coeff * form^d`
#[derive(Clone, Debug, PartialEq)]
pub struct Term<K> {
    pub coeff: K,
    pub form: LinearForm<K>,
}

impl<K: Scalar> Term<K> {
    pub fn new(coeff: K, form: LinearForm<K>) -> Self {
        Term { coeff, form }
    }

    pub fn convert<L: Scalar>(&self, prec: u32) -> Option<Term<L>> {
        Some(Term {
            coeff: L::from_complex(&self.coeff.to_complex(prec))
                .or_else(|| self.coeff.as_rational().map(|q| L::from_rational(&q, prec)))?,
            form: self.form.convert(prec)?,
        })
    }
}

/// Terms of a decomposition, exact when every coefficient and coordinate is
/// rational.
#[derive(Clone, Debug, PartialEq)]
pub enum Terms {
    Exact(Vec<Term<Rational>>),
    Approx(Vec<Term<AppComplex>>),
}

impl Terms {
    pub fn len(&self) -> usize {
        match self {
            Terms::Exact(t) => t.len(),
            Terms::Approx(t) => t.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Terms::Exact(_))
    }

    pub fn to_approx(&self, prec: u32) -> Vec<Term<AppComplex>> {
        match self {
            Terms::Exact(ts) => ts.iter().map(|t| t.convert(prec).expect("approximate target")).collect(),
            Terms::Approx(ts) => ts.clone(),
        }
    }

    pub(crate) fn from_vec<L: Scalar>(ts: Vec<Term<L>>, prec: u32) -> Terms {
        if L::EXACT {
            Terms::Exact(ts.iter().map(|t| t.convert(prec).expect("exact terms")).collect())
        } else {
            Terms::Approx(ts.iter().map(|t| t.convert(prec).expect("approximate target")).collect())
        }
    }

    /// The terms over `L`, unless `L` is exact and they are not.
    pub(crate) fn to_vec<L: Scalar>(&self, prec: u32) -> Option<Vec<Term<L>>> {
        match self {
            Terms::Exact(ts) => ts.iter().map(|t| t.convert(prec)).collect(),
            Terms::Approx(ts) => ts.iter().map(|t| t.convert(prec)).collect(),
        }
    }

    pub(crate) fn concat(self, other: Terms, prec: u32) -> Terms {
        match (self, other) {
            (Terms::Exact(mut a), Terms::Exact(b)) => {
                a.extend(b);
                Terms::Exact(a)
            }
            (a, b) => {
                let mut out = a.to_approx(prec);
                out.extend(b.to_approx(prec));
                Terms::Approx(out)
            }
        }
    }

    fn lift<K: Scalar>(self, split: &EssentialSplit<K>, prec: u32) -> Terms {
        fn go<L: Scalar>(ts: Vec<Term<L>>, u: &Matrix<L>) -> Vec<Term<L>> {
            let ut = u.transpose();
            ts.into_iter()
                .map(|t| Term::new(t.coeff, LinearForm::new(ut.mul_vec(t.form.coords()))))
                .collect()
        }
        let exact_embed = split
            .embed
            .to_rows()
            .into_iter()
            .map(|r| r.iter().map(|x| x.as_rational()).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()
            .map(Matrix::from_rows);
        match (self, exact_embed) {
            (Terms::Exact(ts), Some(u)) => Terms::Exact(go(ts, &u)),
            (t, _) => {
                let u = split.embed.map(|x| x.to_complex(prec));
                Terms::Approx(go(t.to_approx(prec), &u))
            }
        }
    }

    fn merged(self, degree: u32, tol: Tolerance) -> Terms {
        match self {
            Terms::Exact(ts) => Terms::Exact(merge_terms(ts, degree, tol)),
            Terms::Approx(ts) => Terms::Approx(merge_terms(ts, degree, tol)),
        }
    }
}

/// Combine proportional summands and drop those that cancel.
pub(crate) fn merge_terms<K: Scalar>(terms: Vec<Term<K>>, degree: u32, tol: Tolerance) -> Vec<Term<K>> {
    let scale = terms
        .iter()
        .map(|t| t.coeff.log2_abs() + degree as f64 * t.form.max_log2())
        .fold(f64::NEG_INFINITY, f64::max);
    let mut out: Vec<Term<K>> = Vec::new();
    for t in terms {
        let hit = out
            .iter()
            .position(|kept| kept.form.ratio_to(&t.form, tol).is_some());
        match hit {
            Some(j) => {
                let s = out[j].form.ratio_to(&t.form, tol).expect("proportional");
                out[j].coeff = out[j].coeff.clone() + t.coeff * s.pow(degree);
            }
            None => out.push(t),
        }
    }
    out.retain(|t| {
        let size = t.coeff.log2_abs() + degree as f64 * t.form.max_log2();
        !(t.coeff.is_zero() || (!K::EXACT && size <= scale - tol.bits))
    });
    out
}

/// `f = sum c_i l_i^d` together with how it was found.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    pub num_vars: usize,
    pub degree: u32,
    pub terms: Terms,
    pub trace: Vec<String>,
}

impl Decomposition {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        self.terms.is_exact()
    }
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.degree;
        match &self.terms {
            Terms::Exact(ts) => {
                for (i, t) in ts.iter().enumerate() {
                    let sep = if i == 0 { "" } else { "\n" };
                    write!(f, "{sep}{} * ({})^{d}", t.coeff, t.form)?;
                }
            }
            Terms::Approx(ts) => {
                for (i, t) in ts.iter().enumerate() {
                    let sep = if i == 0 { "" } else { "\n" };
                    let bits = t.coeff.precision_bits() as f64 / 2.0;
                    let coeff = t.coeff.chop(t.coeff.log2_abs(), bits);
                    let scale = t.form.max_log2();
                    let l = LinearForm::new(t.form.coords().iter().map(|c| c.chop(scale, bits)).collect());
                    write!(f, "{sep}{coeff:.12} * ({})^{d}", l.to_form())?;
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecomposeOptions {
    pub seed: u64,
    pub precision_bits: u32,
    /// Attempts per random choice before giving up.
    pub max_retries: u32,
}

impl Default for DecomposeOptions {
    fn default() -> Self {
        DecomposeOptions {
            seed: DEFAULT_SEED,
            precision_bits: crate::numerics::DEFAULT_PRECISION,
            max_retries: 64,
        }
    }
}

impl DecomposeOptions {
    pub fn with_seed(seed: u64) -> Self {
        DecomposeOptions {
            seed,
            ..Default::default()
        }
    }
}

/// Per-call state: randomness, precision and the running trace.
pub(crate) struct Ctx {
    pub rng: ChaCha8Rng,
    pub prec: u32,
    pub wprec: u32,
    pub tol: Tolerance,
    pub max_retries: u32,
    pub trace: Vec<String>,
    pub depth: usize,
}

impl Ctx {
    fn new(opts: &DecomposeOptions) -> Self {
        Ctx {
            rng: ChaCha8Rng::seed_from_u64(opts.seed),
            prec: opts.precision_bits,
            wprec: opts.precision_bits + GUARD_BITS,
            tol: Tolerance::for_precision(opts.precision_bits),
            max_retries: opts.max_retries.max(1),
            trace: Vec::new(),
            depth: 0,
        }
    }

    /// Nonzero integer vector with entries in `[-h, h]`, `h = 8 * 2^round`.
    pub fn sample(&mut self, n: usize, round: u32) -> Vec<i64> {
        let h = 8i64 << round.min(40);
        loop {
            let v: Vec<i64> = (0..n).map(|_| self.rng.gen_range(-h..=h)).collect();
            if v.iter().any(|&x| x != 0) {
                return v;
            }
        }
    }

    pub fn sample_in<K: Scalar>(&mut self, n: usize, round: u32) -> Vec<K> {
        self.sample(n, round).into_iter().map(K::from_i64).collect()
    }

    pub fn note(&mut self, msg: impl Into<String>) {
        let indent = "  ".repeat(self.depth);
        self.trace.push(format!("{indent}{}", msg.into()));
    }

    pub fn exhausted(&self, stage: &str) -> WaringError {
        WaringError::RetryExhausted {
            stage: stage.to_string(),
            trace: self.trace.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Route {
    Single,
    Quadratic,
    Binary,
    TernaryCubic,
    Inductive,
}

fn route_for(m: usize, d: u32) -> Route {
    match (m, d) {
        (1, _) | (_, 1) => Route::Single,
        (_, 2) => Route::Quadratic,
        (2, _) => Route::Binary,
        (3, 3) => Route::TernaryCubic,
        _ => Route::Inductive,
    }
}

/// Reduce to essential variables, run `route` (or the natural one), map
/// the terms back.
pub(crate) fn solve<K: Scalar>(ctx: &mut Ctx, f: &Form<K>, v: &ForbiddenSet<K>, route: Option<Route>) -> Result<Terms> {
    if f.is_zero() {
        return Ok(Terms::from_vec::<K>(Vec::new(), ctx.wprec));
    }
    let d = f.degree();
    if d == 0 {
        return Err(WaringError::InvalidInput("degree 0 forms have no decomposition".into()));
    }
    let n = f.num_vars();
    let split = essential_split(f, ctx.tol)?;
    let m = split.num_essential();
    let reduced_v = if m == n {
        v.clone()
    } else {
        v.restrict(m, |h| split.restrict(h), ctx.tol)?
    };
    let g = &split.reduced;
    let route = route.unwrap_or_else(|| route_for(m, d));
    ctx.depth += 1;
    let terms = match route {
        Route::Single => single(ctx, g),
        Route::Quadratic => quadratic::run(ctx, g, &reduced_v),
        Route::Binary => binary::run(ctx, g, &reduced_v),
        Route::TernaryCubic => ternary::run(ctx, g, &reduced_v),
        Route::Inductive => inductive::run(ctx, g, &reduced_v),
    };
    ctx.depth -= 1;
    let terms = terms?;
    Ok(if m == n { terms } else { terms.lift(&split, ctx.wprec) })
}

/// `g = c * y^d` in one variable.
fn single<K: Scalar>(ctx: &mut Ctx, g: &Form<K>) -> Result<Terms> {
    if g.num_vars() != 1 {
        return Err(WaringError::Internal(format!(
            "single power expected, found {} essential variables",
            g.num_vars()
        )));
    }
    let (_, c) = g.terms().next().expect("nonzero form");
    ctx.note(format!("single power of degree {}", g.degree()));
    Ok(Terms::from_vec(vec![Term::new(c.clone(), LinearForm::var(1, 0))], ctx.wprec))
}

fn check_input(f: &Form<Rational>, v: &ForbiddenSet<Rational>, opts: &DecomposeOptions) -> Result<()> {
    if f.is_zero() {
        return Err(WaringError::InvalidInput("cannot decompose the zero form".into()));
    }
    if f.degree() == 0 {
        return Err(WaringError::InvalidInput("degree 0 forms have no decomposition".into()));
    }
    if v.num_vars() != f.num_vars() {
        return Err(WaringError::InvalidInput(format!(
            "forbidden set in {} variables for a form in {}",
            v.num_vars(),
            f.num_vars()
        )));
    }
    if opts.precision_bits < MIN_PRECISION {
        return Err(WaringError::InvalidInput(format!(
            "precision must be at least {MIN_PRECISION} bits"
        )));
    }
    Ok(())
}

fn run_top(f: &Form<Rational>, v: &ForbiddenSet<Rational>, opts: &DecomposeOptions, route: Option<Route>) -> Result<Decomposition> {
    check_input(f, v, opts)?;
    let mut ctx = Ctx::new(opts);
    let terms = solve(&mut ctx, f, v, route)?;
    let terms = terms.merged(f.degree(), ctx.tol);
    Ok(Decomposition {
        num_vars: f.num_vars(),
        degree: f.degree(),
        terms,
        trace: ctx.trace,
    })
}

/// Decompose `f` with every linear form outside `v`, routing by shape.
pub fn decompose(f: &Form<Rational>, v: &ForbiddenSet<Rational>, opts: &DecomposeOptions) -> Result<Decomposition> {
    run_top(f, v, opts, None)
}

fn require_shape(f: &Form<Rational>, what: &str, ok: impl Fn(usize, u32) -> bool) -> Result<()> {
    let m = crate::apolarity::essential_variables(f, Tolerance::default())?;
    if !ok(m, f.degree()) {
        return Err(WaringError::InvalidInput(format!(
            "{what} does not apply to a degree {} form with {m} essential variables",
            f.degree()
        )));
    }
    Ok(())
}

/// Exact decomposition of a quadric into as many squares as its rank.
pub fn decompose_quadratic(f: &Form<Rational>, v: &ForbiddenSet<Rational>, seed: u64) -> Result<Decomposition> {
    require_shape(f, "the quadratic algorithm", |_, d| d == 2)?;
    run_top(f, v, &DecomposeOptions::with_seed(seed), None)
}

/// At most `d` terms for a form in two essential variables.
pub fn decompose_binary(f: &Form<Rational>, v: &ForbiddenSet<Rational>, seed: u64, precision_bits: u32) -> Result<Decomposition> {
    require_shape(f, "the binary algorithm", |m, _| m == 2)?;
    let opts = DecomposeOptions {
        seed,
        precision_bits,
        ..Default::default()
    };
    run_top(f, v, &opts, Some(Route::Binary))
}

/// Degree induction for `n, d >= 3` outside the ternary cubic case.
pub fn decompose_inductive(f: &Form<Rational>, v: &ForbiddenSet<Rational>, seed: u64, precision_bits: u32) -> Result<Decomposition> {
    require_shape(f, "the inductive algorithm", |m, d| m >= 3 && d >= 3 && (m, d) != (3, 3))?;
    let opts = DecomposeOptions {
        seed,
        precision_bits,
        ..Default::default()
    };
    run_top(f, v, &opts, Some(Route::Inductive))
}

/// At most five terms for a ternary cubic, at most four without base
/// points.
pub fn decompose_ternary_cubic(f: &Form<Rational>, v: &ForbiddenSet<Rational>, seed: u64, precision_bits: u32) -> Result<Decomposition> {
    require_shape(f, "the ternary cubic algorithm", |m, d| m == 3 && d == 3)?;
    let opts = DecomposeOptions {
        seed,
        precision_bits,
        ..Default::default()
    };
    run_top(f, v, &opts, Some(Route::TernaryCubic))
}

/// Exact `r` with `r^d = q`, if one exists.
fn exact_root(q: &Rational, d: u32) -> Option<Rational> {
    let neg = q.is_negative();
    if neg && d % 2 == 0 {
        return None;
    }
    let root = |n: &BigInt| {
        let r = n.nth_root(d);
        (r.pow(d) == *n).then_some(r)
    };
    let num = root(&q.numer().abs())?;
    let den = root(q.denom())?;
    let r = Rational::new(num, den);
    Some(if neg { -r } else { r })
}

/// Fold every coefficient into its linear form. Stays exact only when every
/// coefficient is a `d`-th power of a rational.
pub fn absorb_coefficients(dec: &Decomposition, precision_bits: u32) -> Decomposition {
    let d = dec.degree;
    let terms = match &dec.terms {
        Terms::Exact(ts) => {
            let roots: Option<Vec<Rational>> = ts.iter().map(|t| exact_root(&t.coeff, d)).collect();
            match roots {
                Some(rs) => Terms::Exact(
                    ts.iter()
                        .zip(rs)
                        .map(|(t, r)| Term::new(<Rational as One>::one(), t.form.scale(&r)))
                        .collect(),
                ),
                None => Terms::Approx(absorb_approx(&dec.terms.to_approx(precision_bits), d, precision_bits)),
            }
        }
        Terms::Approx(ts) => Terms::Approx(absorb_approx(ts, d, precision_bits)),
    };
    let mut trace = dec.trace.clone();
    trace.push("coefficients absorbed into the linear forms".into());
    Decomposition {
        num_vars: dec.num_vars,
        degree: d,
        terms,
        trace,
    }
}

fn absorb_approx(ts: &[Term<AppComplex>], d: u32, prec: u32) -> Vec<Term<AppComplex>> {
    ts.iter()
        .map(|t| {
            let r = t.coeff.with_precision(prec.max(t.coeff.precision_bits())).nth_root(d);
            Term::new(AppComplex::from_i64(1, prec), t.form.scale(&r))
        })
        .collect()
}

#[cfg(test)]
mod tests;
