//! Homogeneous forms, dual operators acting by differentiation, powers of
//! linear forms and linear coordinate changes.
//!
//! Monomials are ordered graded-lexicographically with `x0 > x1 > ...`, and
//! iteration always runs from the largest monomial down, so matrix layouts
//! and printed output are reproducible.

mod parse;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::error::{Result, WaringError};
use crate::numerics::{factorial, max_log2, AppComplex, Matrix, Rational, Scalar, Tolerance, DEFAULT_PRECISION};

pub use parse::{parse_form, parse_polynomial, render_polynomial};
pub(crate) use parse::render_monomial;

/// Exponent vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    /// `x_i`
    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn num_vars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other` when `other` divides `self`.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
    }

    /// `prod a_i!`
    pub fn factorial_product(&self) -> BigInt {
        self.0.iter().map(|&a| factorial(a)).product()
    }

    /// `prod b_i! / (b_i - a_i)!`, the scalar produced by differentiating
    /// `x^self` by `d^by`.
    pub fn falling_factor(&self, by: &Monomial) -> BigInt {
        self.0
            .iter()
            .zip(&by.0)
            .map(|(&b, &a)| ((b - a + 1)..=b).map(BigInt::from).product::<BigInt>())
            .product()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .degree()
            .cmp(&self.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All monomials of degree `d` in `n` variables, largest first.
pub fn monomials(n: usize, d: u32) -> Vec<Monomial> {
    fn rec(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if prefix.len() + 1 == n {
            prefix.push(d);
            out.push(Monomial(prefix.clone()));
            prefix.pop();
            return;
        }
        for a in (0..=d).rev() {
            prefix.push(a);
            rec(n, d - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Monomial(Vec::new()));
        }
        return out;
    }
    rec(n, d, &mut Vec::new(), &mut out);
    out
}

/// Homogeneous polynomial of a fixed degree with sparse coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Form<K> {
    num_vars: usize,
    degree: u32,
    coeffs: BTreeMap<Monomial, K>,
}

impl<K: Scalar> Form<K> {
    pub fn zero(num_vars: usize, degree: u32) -> Self {
        Form {
            num_vars,
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn from_terms(
        num_vars: usize,
        degree: u32,
        terms: impl IntoIterator<Item = (Monomial, K)>,
    ) -> Result<Self> {
        let mut f = Self::zero(num_vars, degree);
        for (m, c) in terms {
            if m.num_vars() != num_vars {
                return Err(WaringError::InvalidInput(format!(
                    "monomial with {} exponents in a form of {} variables",
                    m.num_vars(),
                    num_vars
                )));
            }
            if m.degree() != degree {
                return Err(WaringError::NonHomogeneous {
                    expected: degree,
                    offending: format!("{:?}", m.exps()),
                });
            }
            f.add_term(m, c);
        }
        Ok(f)
    }

    /// `c * x_i^d`
    pub fn monomial_power(num_vars: usize, i: usize, d: u32, c: K) -> Self {
        let mut e = vec![0; num_vars];
        e[i] = d;
        let mut f = Self::zero(num_vars, d);
        f.add_term(Monomial(e), c);
        f
    }

    fn add_term(&mut self, m: Monomial, c: K) {
        debug_assert_eq!(m.degree(), self.degree);
        let v = match self.coeffs.remove(&m) {
            Some(old) => old + c,
            None => c,
        };
        if !v.is_zero() {
            self.coeffs.insert(m, v);
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &K)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> K {
        self.coeffs.get(m).cloned().unwrap_or_else(K::zero)
    }

    /// Dense coefficient vector over [`monomials`]`(n, d)`.
    pub fn dense(&self) -> Vec<K> {
        monomials(self.num_vars, self.degree)
            .iter()
            .map(|m| self.coeff(m))
            .collect()
    }

    pub fn max_coeff_log2(&self) -> f64 {
        max_log2(self.coeffs.values())
    }

    /// `log2` of the coefficient 1-norm.
    pub fn norm1_log2(&self) -> f64 {
        let top = self.max_coeff_log2();
        if top == f64::NEG_INFINITY {
            return top;
        }
        let s: f64 = self.coeffs.values().map(|c| (c.log2_abs() - top).exp2()).sum();
        top + s.log2()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.num_vars, other.num_vars, "variable count mismatch");
        assert_eq!(self.degree, other.degree, "degree mismatch");
        let mut out = self.clone();
        for (m, c) in &other.coeffs {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| -c.clone())
    }

    pub fn scale(&self, s: &K) -> Self {
        let mut out = Self::zero(self.num_vars, self.degree);
        for (m, c) in &self.coeffs {
            out.add_term(m.clone(), c.clone() * s.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.num_vars, other.num_vars, "variable count mismatch");
        let mut out = Self::zero(self.num_vars, self.degree + other.degree);
        for (a, ca) in &self.coeffs {
            for (b, cb) in &other.coeffs {
                out.add_term(a.mul(b), ca.clone() * cb.clone());
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(self.num_vars, K::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn constant(num_vars: usize, c: K) -> Self {
        let mut f = Self::zero(num_vars, 0);
        f.add_term(Monomial(vec![0; num_vars]), c);
        f
    }

    pub fn map_coeffs<L: Scalar>(&self, f: impl Fn(&K) -> L) -> Form<L> {
        let mut out = Form::zero(self.num_vars, self.degree);
        for (m, c) in &self.coeffs {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    pub fn to_complex(&self, prec: u32) -> Form<AppComplex> {
        self.map_coeffs(|c| c.to_complex(prec))
    }

    /// The exact form, when every coefficient is exact.
    pub fn as_rational(&self) -> Option<Form<Rational>> {
        let mut out = Form::zero(self.num_vars, self.degree);
        for (m, c) in &self.coeffs {
            out.add_term(m.clone(), c.as_rational()?);
        }
        Some(out)
    }

    /// The same form over another scalar: exact targets need exact
    /// coefficients, approximate targets accept anything.
    pub fn convert<L: Scalar>(&self, prec: u32) -> Option<Form<L>> {
        if L::EXACT {
            self.as_rational().map(|f| f.lift(prec))
        } else {
            Some(self.map_coeffs(|c| L::from_complex(&c.to_complex(prec)).expect("approximate scalar")))
        }
    }

    /// Drop coefficients negligible against the largest one.
    pub fn pruned(&self, tol: Tolerance) -> Self {
        if K::EXACT {
            return self.clone();
        }
        let scale = self.max_coeff_log2();
        let mut out = Self::zero(self.num_vars, self.degree);
        for (m, c) in &self.coeffs {
            if !tol.negligible(c, scale) {
                out.add_term(m.clone(), c.clone());
            }
        }
        out
    }

    /// Drop coefficients negligible against `2^scale_log2`.
    pub fn pruned_against(&self, scale_log2: f64, tol: Tolerance) -> Self {
        if K::EXACT {
            return self.clone();
        }
        let mut out = Self::zero(self.num_vars, self.degree);
        for (m, c) in &self.coeffs {
            if !tol.negligible(c, scale_log2) {
                out.add_term(m.clone(), c.clone());
            }
        }
        out
    }

    pub fn evaluate(&self, point: &[K]) -> K {
        assert_eq!(point.len(), self.num_vars);
        let mut acc = K::zero();
        for (m, c) in &self.coeffs {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exps()) {
                if e > 0 {
                    t = t * x.pow(e);
                }
            }
            acc = acc + t;
        }
        acc
    }

    /// Substitute `x_i -> sum_j a[i][j] y_j`, where `a` is
    /// `num_vars x new_vars`.
    pub fn substitute(&self, a: &Matrix<K>) -> Form<K> {
        assert_eq!(a.rows(), self.num_vars);
        let new_n = a.cols();
        let images: Vec<Form<K>> = (0..self.num_vars)
            .map(|i| LinearForm::new(a.row(i).to_vec()).to_form())
            .collect();
        let mut powers: Vec<Vec<Form<K>>> = images
            .iter()
            .map(|_| vec![Form::constant(new_n, K::one())])
            .collect();
        let mut out = Form::zero(new_n, self.degree);
        for (m, c) in &self.coeffs {
            let mut t = Form::constant(new_n, c.clone());
            for (i, &e) in m.exps().iter().enumerate() {
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul(&images[i]);
                    powers[i].push(next);
                }
                if e > 0 {
                    t = t.mul(&powers[i][e as usize]);
                }
            }
            out = out.add(&t);
        }
        out
    }

    /// Restrict to the first `m` variables, dropping every term that
    /// involves the others.
    pub fn truncate_vars(&self, m: usize) -> Form<K> {
        let mut out = Form::zero(m, self.degree);
        for (mono, c) in &self.coeffs {
            if mono.exps()[m..].iter().all(|&e| e == 0) {
                out.add_term(Monomial(mono.exps()[..m].to_vec()), c.clone());
            }
        }
        out
    }
}

impl Form<Rational> {
    pub fn lift<K: Scalar>(&self, prec: u32) -> Form<K> {
        self.map_coeffs(|c| K::from_rational(c, prec))
    }
}

/// Element of the ring of differential operators: a polynomial in the dual
/// variables, acting on forms by iterated partial differentiation.
#[derive(Clone, Debug, PartialEq)]
pub struct DualOp<K> {
    poly: Form<K>,
}

impl<K: Scalar> DualOp<K> {
    pub fn new(poly: Form<K>) -> Self {
        DualOp { poly }
    }

    /// `sum_i a_i d_i`
    pub fn linear(coords: Vec<K>) -> Self {
        DualOp::new(LinearForm::new(coords).to_form())
    }

    /// The single operator `d^m`.
    pub fn monomial(m: Monomial) -> Self {
        let n = m.num_vars();
        let d = m.degree();
        DualOp::new(Form::from_terms(n, d, [(m, K::one())]).expect("well-formed monomial"))
    }

    pub fn as_form(&self) -> &Form<K> {
        &self.poly
    }

    pub fn into_form(self) -> Form<K> {
        self.poly
    }

    pub fn degree(&self) -> u32 {
        self.poly.degree()
    }

    pub fn num_vars(&self) -> usize {
        self.poly.num_vars()
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// Composition of operators.
    pub fn compose(&self, other: &DualOp<K>) -> DualOp<K> {
        DualOp::new(self.poly.mul(&other.poly))
    }

    pub fn add(&self, other: &DualOp<K>) -> DualOp<K> {
        DualOp::new(self.poly.add(&other.poly))
    }

    pub fn scale(&self, s: &K) -> DualOp<K> {
        DualOp::new(self.poly.scale(s))
    }

    /// Coefficients of a degree-one operator.
    pub fn linear_coords(&self) -> Vec<K> {
        assert_eq!(self.degree(), 1, "not a linear operator");
        (0..self.num_vars())
            .map(|i| self.poly.coeff(&Monomial::var(self.num_vars(), i)))
            .collect()
    }

    pub fn to_complex(&self, prec: u32) -> DualOp<AppComplex> {
        DualOp::new(self.poly.to_complex(prec))
    }
}

/// `sum_i coords[i] x_i`; as a point of projective space, `[coords]`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearForm<K> {
    coords: Vec<K>,
}

impl<K: Scalar> LinearForm<K> {
    pub fn new(coords: Vec<K>) -> Self {
        LinearForm { coords }
    }

    /// `x_i`
    pub fn var(n: usize, i: usize) -> Self {
        let mut c = vec![K::zero(); n];
        c[i] = K::one();
        LinearForm { coords: c }
    }

    pub fn coords(&self) -> &[K] {
        &self.coords
    }

    pub fn num_vars(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn to_form(&self) -> Form<K> {
        let n = self.coords.len();
        let mut f = Form::zero(n, 1);
        for (i, c) in self.coords.iter().enumerate() {
            f.add_term(Monomial::var(n, i), c.clone());
        }
        f
    }

    pub fn scale(&self, s: &K) -> Self {
        LinearForm::new(self.coords.iter().map(|c| c.clone() * s.clone()).collect())
    }

    /// `alpha ⌟ l` for a linear operator given by its coefficients.
    pub fn pair(&self, alpha: &[K]) -> K {
        assert_eq!(alpha.len(), self.coords.len());
        self.coords
            .iter()
            .zip(alpha)
            .fold(K::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }

    pub fn max_log2(&self) -> f64 {
        max_log2(self.coords.iter())
    }

    pub fn to_complex(&self, prec: u32) -> LinearForm<AppComplex> {
        LinearForm::new(self.coords.iter().map(|c| c.to_complex(prec)).collect())
    }

    pub fn as_rational(&self) -> Option<LinearForm<Rational>> {
        self.coords
            .iter()
            .map(|c| c.as_rational())
            .collect::<Option<Vec<_>>>()
            .map(LinearForm::new)
    }

    pub fn convert<L: Scalar>(&self, prec: u32) -> Option<LinearForm<L>> {
        if L::EXACT {
            self.as_rational().map(|l| l.lift(prec))
        } else {
            Some(LinearForm::new(
                self.coords
                    .iter()
                    .map(|c| L::from_complex(&c.to_complex(prec)).expect("approximate scalar"))
                    .collect(),
            ))
        }
    }

    /// `Some(s)` with `other = s * self` when the two are proportional.
    pub fn ratio_to(&self, other: &Self, tol: Tolerance) -> Option<K> {
        let (pi, _) = self
            .coords
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.log2_abs().total_cmp(&b.1.log2_abs()))?;
        if self.coords[pi].is_zero() {
            return None;
        }
        let s = other.coords[pi].clone() / self.coords[pi].clone();
        let scale = self.max_log2().max(other.max_log2());
        let ok = self
            .coords
            .iter()
            .zip(&other.coords)
            .all(|(a, b)| tol.negligible(&(b.clone() - s.clone() * a.clone()), scale));
        if ok && !s.is_zero() {
            Some(s)
        } else {
            None
        }
    }
}

impl LinearForm<Rational> {
    pub fn lift<K: Scalar>(&self, prec: u32) -> LinearForm<K> {
        LinearForm::new(self.coords.iter().map(|c| K::from_rational(c, prec)).collect())
    }
}

/// `op ⌟ f`: each dual monomial `d^a` differentiates `a_i` times in `x_i`.
pub fn contract<K: Scalar>(op: &DualOp<K>, f: &Form<K>) -> Result<Form<K>> {
    if op.num_vars() != f.num_vars() {
        return Err(WaringError::InvalidInput(format!(
            "operator in {} variables applied to a form in {}",
            op.num_vars(),
            f.num_vars()
        )));
    }
    if op.degree() > f.degree() {
        return Err(WaringError::InvalidInput(format!(
            "operator of degree {} applied to a form of degree {}",
            op.degree(),
            f.degree()
        )));
    }
    let mut out = Form::zero(f.num_vars(), f.degree() - op.degree());
    for (a, ca) in op.as_form().terms() {
        for (b, cb) in f.terms() {
            if let Some(rest) = b.checked_div(a) {
                let k = K::from_rational(&Rational::from_integer(b.falling_factor(a)), DEFAULT_PRECISION);
                out.add_term(rest, ca.clone() * cb.clone() * k);
            }
        }
    }
    Ok(out)
}

/// `l^d` by the multinomial formula.
pub fn linear_power<K: Scalar>(l: &LinearForm<K>, d: u32) -> Form<K> {
    let n = l.num_vars();
    let d_fact = factorial(d);
    let mut out = Form::zero(n, d);
    for m in monomials(n, d) {
        let mut c = K::from_rational(&Rational::new(d_fact.clone(), m.factorial_product()), DEFAULT_PRECISION);
        for (x, &e) in l.coords().iter().zip(m.exps()) {
            if e > 0 {
                c = c * x.pow(e);
            }
        }
        out.add_term(m, c);
    }
    out
}

/// `f(M x)`: substitute `x_i -> sum_j M[i][j] x_j` for an invertible `M`.
pub fn change_coordinates<K: Scalar>(f: &Form<K>, m: &Matrix<K>, tol: Tolerance) -> Result<Form<K>> {
    if m.rows() != f.num_vars() || m.cols() != f.num_vars() {
        return Err(WaringError::InvalidInput(format!(
            "{}x{} coordinate change for a form in {} variables",
            m.rows(),
            m.cols(),
            f.num_vars()
        )));
    }
    if !m.is_invertible(tol) {
        return Err(WaringError::Singular);
    }
    Ok(f.substitute(m))
}

/// Value of an operator at the coordinates of a linear form; zero exactly
/// when `[l]` lies on the hypersurface cut out by `op`.
pub fn evaluate_dual<K: Scalar>(op: &DualOp<K>, l: &LinearForm<K>) -> K {
    op.as_form().evaluate(l.coords())
}

fn fmt_terms<K: Scalar>(
    f: &Form<K>,
    prefix: &str,
    out: &mut fmt::Formatter<'_>,
    coeff: impl Fn(&K) -> (bool, String),
) -> fmt::Result {
    if f.is_zero() {
        return write!(out, "0");
    }
    for (k, (m, c)) in f.terms().enumerate() {
        let (neg, mag) = coeff(c);
        let vars = parse::render_monomial(m, prefix);
        let sep = match (k, neg) {
            (0, false) => "",
            (0, true) => "-",
            (_, false) => " + ",
            (_, true) => " - ",
        };
        write!(out, "{sep}")?;
        match (mag.as_str(), vars.is_empty()) {
            ("1", false) => write!(out, "{vars}")?,
            (_, true) => write!(out, "{mag}")?,
            _ => write!(out, "{mag}*{vars}")?,
        }
    }
    Ok(())
}

fn rational_coeff(c: &Rational) -> (bool, String) {
    (c.is_negative(), c.abs().to_string())
}

fn complex_coeff(c: &AppComplex) -> (bool, String) {
    if c.im.is_zero() {
        let neg = c.re.is_negative();
        let s = c.re.abs().to_sci_string(12);
        return (neg, if s == "1e0" { "1".into() } else { s });
    }
    (false, format!("{c:.12}"))
}

impl fmt::Display for Form<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(self, "x", f, rational_coeff)
    }
}

impl fmt::Display for Form<AppComplex> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(self, "x", f, complex_coeff)
    }
}

impl fmt::Display for DualOp<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(&self.poly, "d", f, rational_coeff)
    }
}

impl fmt::Display for DualOp<AppComplex> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(&self.poly, "d", f, complex_coeff)
    }
}

impl fmt::Display for LinearForm<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_form(), f)
    }
}

/// Integer-valued rational, for tests and literals.
pub fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Rational `n / d`.
pub fn qr(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Linear form with integer coordinates.
pub fn lf(coords: &[i64]) -> LinearForm<Rational> {
    LinearForm::new(coords.iter().map(|&c| q(c)).collect())
}

/// Normalize a nonzero exact vector so its first nonzero entry is one.
pub fn projective_normal(v: &[Rational]) -> Vec<Rational> {
    match v.iter().find(|c| !num_traits::Zero::is_zero(*c)) {
        Some(p) => {
            let p = p.clone();
            v.iter().map(|c| c / &p).collect()
        }
        None => v.to_vec(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pf(s: &str, n: usize) -> Form<Rational> {
        parse_form(s, n).unwrap()
    }

    fn dual(s: &str, n: usize) -> DualOp<Rational> {
        DualOp::new(parse_polynomial(s, n, "d").unwrap())
    }

    #[test]
    fn contraction_examples() {
        assert_eq!(contract(&dual("d0", 2), &pf("x0^3", 2)).unwrap(), pf("3*x0^2", 2));
        assert_eq!(contract(&dual("d0*d1", 2), &pf("x0^2*x1", 2)).unwrap(), pf("2*x0", 2));
        assert!(contract(&dual("d1", 2), &pf("x0^3", 2)).unwrap().is_zero());
    }

    #[test]
    fn contraction_errors() {
        assert!(contract(&dual("d0^3", 2), &pf("x0^2", 2)).is_err());
        assert!(contract(&dual("d0", 3), &pf("x0^2", 2)).is_err());
    }

    #[test]
    fn linear_power_examples() {
        assert_eq!(linear_power(&lf(&[1, 1]), 2), pf("x0^2 + 2*x0*x1 + x1^2", 2));
        assert_eq!(linear_power(&lf(&[1, 0]), 3), pf("x0^3", 2));
        assert_eq!(
            linear_power(&lf(&[1, -1]), 3),
            pf("x0^3 - 3*x0^2*x1 + 3*x0*x1^2 - x1^3", 2)
        );
    }

    #[test]
    fn coordinate_change_examples() {
        let tol = Tolerance::default();
        let f = pf("x0^2*x1 - 3*x1^3", 2);
        assert_eq!(change_coordinates(&f, &Matrix::identity(2), tol).unwrap(), f);
        let swap = Matrix::from_rows(vec![vec![q(0), q(1)], vec![q(1), q(0)]]);
        assert_eq!(
            change_coordinates(&pf("x0^2*x1", 2), &swap, tol).unwrap(),
            pf("x1^2*x0", 2)
        );
        let shear = Matrix::from_rows(vec![vec![q(1), q(1)], vec![q(0), q(1)]]);
        assert_eq!(
            change_coordinates(&pf("x0^2", 2), &shear, tol).unwrap(),
            pf("x0^2 + 2*x0*x1 + x1^2", 2)
        );
        let singular = Matrix::from_rows(vec![vec![q(1), q(2)], vec![q(2), q(4)]]);
        assert_eq!(change_coordinates(&f, &singular, tol), Err(WaringError::Singular));
    }

    #[test]
    fn dual_evaluation_examples() {
        assert_eq!(evaluate_dual(&dual("d0*d1", 3), &lf(&[1, 0, 0])), q(0));
        assert_eq!(evaluate_dual(&dual("d0^2", 3), &lf(&[1, 1, 1])), q(1));
        assert_eq!(evaluate_dual(&dual("d0*d1 - d2^2", 3), &lf(&[0, 1, 0])), q(0));
        // direct substitution oracle at a generic point
        let l = lf(&[2, -3, 5]);
        assert_eq!(evaluate_dual(&dual("d0*d1 - d2^2", 3), &l), q(2 * -3 - 25));
    }

    #[test]
    fn monomial_enumeration_is_graded_lex() {
        let ms = monomials(3, 2);
        let exps: Vec<_> = ms.iter().map(|m| m.exps().to_vec()).collect();
        assert_eq!(
            exps,
            vec![
                vec![2, 0, 0],
                vec![1, 1, 0],
                vec![1, 0, 1],
                vec![0, 2, 0],
                vec![0, 1, 1],
                vec![0, 0, 2]
            ]
        );
        assert_eq!(monomials(4, 3).len(), 20);
    }

    #[test]
    fn display_renders_parseable_text() {
        let f = pf("-x0^3 + 3/2*x0*x1^2 - 7*x1^3", 2);
        assert_eq!(f.to_string(), "-x0^3 + 3/2*x0*x1^2 - 7*x1^3");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn small_form(n: usize, d: u32) -> impl Strategy<Value = Form<Rational>> {
            let ms = monomials(n, d);
            proptest::collection::vec(-5i64..=5, ms.len()).prop_map(move |cs| {
                Form::from_terms(n, d, ms.clone().into_iter().zip(cs.into_iter().map(q))).unwrap()
            })
        }

        fn dual_of(n: usize, e: u32) -> impl Strategy<Value = DualOp<Rational>> {
            small_form(n, e).prop_map(DualOp::new)
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn derivation_rule(l in proptest::collection::vec(-6i64..=6, 3), a in proptest::collection::vec(-4i64..=4, 3), d in 1u32..=8) {
                let l = lf(&l);
                let alpha = DualOp::linear(a.iter().map(|&x| q(x)).collect());
                let lhs = contract(&alpha, &linear_power(&l, d)).unwrap();
                let rhs = linear_power(&l, d - 1).scale(&(q(d as i64) * l.pair(&alpha.linear_coords())));
                prop_assert_eq!(lhs, rhs);
            }

            #[test]
            fn contraction_composes(op1 in dual_of(3, 1), op2 in dual_of(3, 2), f in small_form(3, 4)) {
                let lhs = contract(&op1, &contract(&op2, &f).unwrap()).unwrap();
                let rhs = contract(&op1.compose(&op2), &f).unwrap();
                prop_assert_eq!(lhs, rhs);
            }

            #[test]
            fn coordinate_change_inverts(f in small_form(3, 3), m in proptest::collection::vec(-3i64..=3, 9)) {
                let tol = Tolerance::default();
                let mat = Matrix::from_rows(m.chunks(3).map(|r| r.iter().map(|&x| q(x)).collect()).collect());
                prop_assume!(mat.is_invertible(tol));
                let inv = mat.inverse(tol).unwrap();
                let back = change_coordinates(&change_coordinates(&f, &mat, tol).unwrap(), &inv, tol).unwrap();
                prop_assert_eq!(back, f);
            }

            #[test]
            fn render_parse_round_trip(f in small_form(3, 3)) {
                prop_assume!(!f.is_zero());
                prop_assert_eq!(parse_form(&f.to_string(), 3).unwrap(), f);
            }
        }
    }
}
