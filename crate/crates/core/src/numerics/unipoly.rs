//! Dense univariate polynomials: Euclid, squarefree decomposition and
//! simultaneous (Aberth-Ehrlich) root finding at arbitrary precision.

use std::f64::consts::TAU;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{max_log2, AppComplex, BigFloat, Rational, Scalar, Tolerance};
use crate::error::{Result, WaringError};

/// Coefficients indexed by power; no trailing exact zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct UniPoly<K> {
    coeffs: Vec<K>,
}

impl<K: Scalar> UniPoly<K> {
    pub fn new(mut coeffs: Vec<K>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: K) -> Self {
        Self::new(vec![c])
    }

    /// `t - r`
    pub fn linear_root(r: K) -> Self {
        Self::new(vec![-r, K::one()])
    }

    pub fn coeffs(&self) -> &[K] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&K> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &K) -> K {
        self.coeffs
            .iter()
            .rev()
            .fold(K::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn eval_complex(&self, z: &AppComplex, prec: u32) -> AppComplex {
        self.coeffs.iter().rev().fold(AppComplex::zero(prec), |acc, c| {
            &(&acc * z) + &c.to_complex(prec)
        })
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * K::from_i64(i as i64))
                .collect(),
        )
    }

    pub fn scale(&self, s: &K) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            (0..n)
                .map(|i| {
                    let a = self.coeffs.get(i).cloned().unwrap_or_else(K::zero);
                    let b = other.coeffs.get(i).cloned().unwrap_or_else(K::zero);
                    a + b
                })
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-K::one()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![K::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => self.scale(&(K::one() / l.clone())),
            None => self.clone(),
        }
    }

    /// Divide by the largest-modulus coefficient.
    fn balanced(&self) -> Self {
        let Some(big) = self
            .coeffs
            .iter()
            .max_by(|a, b| a.log2_abs().total_cmp(&b.log2_abs()))
        else {
            return self.clone();
        };
        self.scale(&(K::one() / big.clone()))
    }

    /// Drop leading coefficients that are negligible against `2^scale_log2`.
    pub fn trimmed(&self, tol: Tolerance, scale_log2: f64) -> Self {
        let mut c = self.coeffs.clone();
        while c.last().is_some_and(|x| tol.negligible(x, scale_log2)) {
            c.pop();
        }
        UniPoly { coeffs: c }
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dl = d.leading().expect("division by the zero polynomial").clone();
        let dd = d.coeffs.len() - 1;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![K::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = r[k + dd].clone() / dl.clone();
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[k + j] = r[k + j].clone() - c.clone() * dc.clone();
            }
            r[k + dd] = K::zero();
            q[k] = c;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    /// Monic greatest common divisor. Exact for exact scalars; for
    /// approximate ones, remainders are balanced and coefficients below the
    /// tolerance are discarded.
    pub fn gcd(&self, other: &Self, tol: Tolerance) -> Self {
        let mut a = self.balanced();
        let mut b = other.balanced();
        if a.coeffs.len() < b.coeffs.len() {
            std::mem::swap(&mut a, &mut b);
        }
        loop {
            if b.is_zero() {
                return a.monic();
            }
            let (_, r) = a.div_rem(&b);
            let r = r.trimmed(tol, max_log2(b.coeffs.iter())).balanced();
            let r = if r.coeffs.iter().all(|c| tol.negligible(c, 0.0)) {
                Self::zero()
            } else {
                r
            };
            a = b;
            b = r;
        }
    }

    pub fn to_complex(&self, prec: u32) -> UniPoly<AppComplex> {
        UniPoly::new(self.coeffs.iter().map(|c| c.to_complex(prec)).collect())
    }
}

/// `p / gcd(p, p')`, monic.
pub fn squarefree_part(p: &UniPoly<Rational>) -> UniPoly<Rational> {
    assert!(!p.is_zero(), "squarefree part of the zero polynomial");
    let g = p.gcd(&p.derivative(), Tolerance::default());
    p.div_rem(&g).0.monic()
}

pub fn is_squarefree(p: &UniPoly<Rational>) -> bool {
    squarefree_part(p).degree() == p.degree()
}

/// Yun's algorithm: `p = c * prod f_i^i` with squarefree, pairwise coprime
/// monic `f_i`. Returns the non-constant `(f_i, i)`.
pub fn squarefree_factorization(p: &UniPoly<Rational>) -> Vec<(UniPoly<Rational>, u32)> {
    let tol = Tolerance::default();
    let mut out = Vec::new();
    if p.degree().unwrap_or(0) == 0 {
        return out;
    }
    let dp = p.derivative();
    let a0 = p.gcd(&dp, tol);
    let mut b = p.div_rem(&a0).0;
    let mut c = dp.div_rem(&a0).0;
    let mut d = c.sub(&b.derivative());
    let mut i = 1;
    while b.degree().unwrap_or(0) > 0 {
        let a = b.gcd(&d, tol);
        if a.degree().unwrap_or(0) > 0 {
            out.push((a.monic(), i));
        }
        b = b.div_rem(&a).0;
        c = d.div_rem(&a).0;
        d = c.sub(&b.derivative());
        i += 1;
    }
    out
}

/// All complex roots with multiplicity. Exact inputs are first split into
/// squarefree factors so every simultaneous iteration sees simple roots;
/// approximate inputs are treated as squarefree (multiplicity 1 each).
pub fn univariate_roots<K: Scalar>(p: &UniPoly<K>, prec: u32) -> Result<Vec<(AppComplex, u32)>> {
    if p.is_zero() {
        return Err(WaringError::InvalidInput(
            "roots of the zero polynomial".into(),
        ));
    }
    if K::EXACT {
        let q = UniPoly::new(p.coeffs.iter().map(|c| c.as_rational().unwrap()).collect());
        let mut out = Vec::new();
        for (factor, mult) in squarefree_factorization(&q) {
            for r in aberth(&factor.to_complex(prec), prec) {
                out.push((r, mult));
            }
        }
        return Ok(out);
    }
    Ok(aberth(&p.to_complex(prec), prec)
        .into_iter()
        .map(|r| (r, 1))
        .collect())
}

/// Simultaneous Aberth-Ehrlich iteration followed by Newton polishing on the
/// input polynomial.
pub fn aberth(p: &UniPoly<AppComplex>, prec: u32) -> Vec<AppComplex> {
    let Some(n) = p.degree() else {
        return Vec::new();
    };
    let coeffs: Vec<AppComplex> = p.coeffs.iter().map(|c| c.with_precision(prec)).collect();
    // exact zero roots
    let zeros = coeffs.iter().take_while(|c| c.is_zero()).count();
    let mut roots: Vec<AppComplex> = vec![AppComplex::zero(prec); zeros];
    let rest = UniPoly::new(coeffs[zeros..].to_vec());
    let m = n - zeros;
    match m {
        0 => return roots,
        1 => {
            roots.push(-(&rest.coeffs[0] / &rest.coeffs[1]));
            return roots;
        }
        _ => {}
    }
    let monic = rest.monic();
    let c = monic.coeffs();

    // start on a circle whose radius is the geometric mean of root moduli
    let log_r = c[0].log2_abs() / m as f64;
    let whole = log_r.floor();
    let radius = &BigFloat::pow2(whole as i64, prec) * &BigFloat::from_f64((log_r - whole).exp2(), prec);
    let mut z: Vec<AppComplex> = (0..m)
        .map(|k| {
            let ang = TAU * k as f64 / m as f64 + 0.4;
            AppComplex::new(
                &radius * &BigFloat::from_f64(ang.cos(), prec),
                &radius * &BigFloat::from_f64(ang.sin(), prec),
            )
        })
        .collect();

    let one = AppComplex::from_i64(1, prec);
    let target = prec as f64 - 12.0;
    for _ in 0..600 {
        let mut converged = true;
        for k in 0..m {
            let (val, der) = horner_with_derivative(c, &z[k], prec);
            if val.is_zero() {
                continue;
            }
            let step = if der.is_zero() {
                // nudge off a critical point
                z[k].scale_real(&BigFloat::pow2(-20, prec))
            } else {
                let ratio = &val / &der;
                let mut sum = AppComplex::zero(prec);
                for j in 0..m {
                    if j != k {
                        let diff = &z[k] - &z[j];
                        if !diff.is_zero() {
                            sum = &sum + &(&one / &diff);
                        }
                    }
                }
                let den = &one - &(&ratio * &sum);
                if den.is_zero() {
                    ratio
                } else {
                    &ratio / &den
                }
            };
            let scale = z[k].log2_abs().max(-(prec as f64));
            if step.log2_abs() > scale.max(0.0) - target {
                converged = false;
            }
            z[k] = &z[k] - &step;
        }
        if converged {
            break;
        }
    }
    for zk in z.iter_mut() {
        for _ in 0..2 {
            let (val, der) = horner_with_derivative(c, zk, prec);
            if val.is_zero() || der.is_zero() {
                break;
            }
            *zk = &*zk - &(&val / &der);
        }
    }
    roots.extend(z);
    roots
}

fn horner_with_derivative(c: &[AppComplex], z: &AppComplex, prec: u32) -> (AppComplex, AppComplex) {
    let mut val = AppComplex::zero(prec);
    let mut der = AppComplex::zero(prec);
    for coef in c.iter().rev() {
        der = &(&der * z) + &val;
        val = &(&val * z) + coef;
    }
    (val, der)
}

/// Exact rational root near `z`, found among the continued-fraction
/// convergents of its real part and confirmed by exact evaluation.
pub fn rational_root_near(p: &UniPoly<Rational>, z: &AppComplex, tol: Tolerance) -> Option<Rational> {
    let scale = z.log2_abs().max(0.0);
    if !z.im.is_zero() && z.im.log2_abs() > scale - tol.bits {
        return None;
    }
    let x = z.re.to_rational();
    let max_den_bits = (tol.bits / 2.0).max(16.0) as u64;
    let (mut num, mut den) = (x.numer().clone(), x.denom().clone());
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    while !den.is_zero() {
        let (a, r) = num.div_mod_floor(&den);
        let h2 = &a * &h1 + &h0;
        let k2 = &a * &k1 + &k0;
        if k2.bits() > max_den_bits {
            break;
        }
        let cand = Rational::new(h2.clone(), k2.clone());
        if Zero::is_zero(&p.eval(&cand)) {
            return Some(cand);
        }
        h0 = std::mem::replace(&mut h1, h2);
        k0 = std::mem::replace(&mut k1, k2);
        num = std::mem::replace(&mut den, r);
    }
    None
}

/// Integer content removed, sign of leading coefficient positive.
pub fn primitive_poly(p: &UniPoly<Rational>) -> UniPoly<Rational> {
    let v = super::linalg::primitive(p.coeffs());
    let mut q = UniPoly::new(v);
    if q.leading().is_some_and(|l| l.is_negative()) {
        q = q.scale(&-<Rational as One>::one());
    }
    q
}
