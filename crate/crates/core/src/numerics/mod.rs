//! Scalar tower: exact rationals and approximate complex numbers, plus the
//! dense linear algebra and univariate polynomial tools built on them.

pub mod bigfloat;
pub mod complex;
pub mod linalg;
pub mod unipoly;

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

pub use bigfloat::{BigFloat, DEFAULT_PRECISION, MIN_PRECISION};
pub use complex::AppComplex;
pub use linalg::Matrix;
pub use unipoly::{squarefree_part, univariate_roots, UniPoly};

pub type Rational = num_rational::BigRational;

/// Field operations shared by the exact and the approximate scalars.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Zero tests are exact for this scalar.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    fn from_rational(q: &Rational, prec: u32) -> Self;
    /// Exactly zero.
    fn is_zero(&self) -> bool;
    /// `log2 |x|`, `-inf` at zero.
    fn log2_abs(&self) -> f64;
    fn to_complex(&self, prec: u32) -> AppComplex;
    /// The exact value, when this scalar carries one.
    fn as_rational(&self) -> Option<Rational>;
    /// The approximate value in this scalar, when it can hold one.
    fn from_complex(z: &AppComplex) -> Option<Self>;

    /// Row reduction to reduced echelon form, choosing pivots among the first
    /// `pivot_cols` columns only.
    fn row_reduce(m: &Matrix<Self>, pivot_cols: usize, tol: Tolerance) -> linalg::Rref<Self> {
        linalg::pivoted_rref(m, pivot_cols, tol)
    }

    fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc * self.clone();
        }
        acc
    }
}

/// Relative threshold below which approximate quantities count as zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub bits: f64,
}

impl Tolerance {
    /// `2^-(prec/2)`.
    pub fn for_precision(prec: u32) -> Self {
        Tolerance {
            bits: prec as f64 / 2.0,
        }
    }

    pub fn loosen(self, bits: f64) -> Self {
        Tolerance {
            bits: self.bits - bits,
        }
    }

    /// `|x| <= 2^-bits * 2^scale_log2`; exact scalars only when exactly zero.
    pub fn negligible<K: Scalar>(&self, x: &K, scale_log2: f64) -> bool {
        if K::EXACT || x.is_zero() {
            return x.is_zero();
        }
        x.log2_abs() <= scale_log2 - self.bits
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance::for_precision(DEFAULT_PRECISION)
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(n: i64) -> Self {
        Rational::from_integer(n.into())
    }
    fn from_rational(q: &Rational, _prec: u32) -> Self {
        q.clone()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn log2_abs(&self) -> f64 {
        if Zero::is_zero(self) {
            return f64::NEG_INFINITY;
        }
        BigFloat::from_rational(&self.abs(), 64).log2_abs()
    }
    fn to_complex(&self, prec: u32) -> AppComplex {
        AppComplex::from_rational(self, prec)
    }
    fn as_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
    fn from_complex(_: &AppComplex) -> Option<Self> {
        None
    }
    fn row_reduce(m: &Matrix<Self>, pivot_cols: usize, _tol: Tolerance) -> linalg::Rref<Self> {
        linalg::fraction_free_rref(m, pivot_cols)
    }
}

impl Scalar for AppComplex {
    const EXACT: bool = false;

    fn zero() -> Self {
        AppComplex::zero(DEFAULT_PRECISION)
    }
    fn one() -> Self {
        AppComplex::from_i64(1, DEFAULT_PRECISION)
    }
    fn from_i64(n: i64) -> Self {
        AppComplex::from_i64(n, DEFAULT_PRECISION)
    }
    fn from_rational(q: &Rational, prec: u32) -> Self {
        AppComplex::from_rational(q, prec)
    }
    fn is_zero(&self) -> bool {
        AppComplex::is_zero(self)
    }
    fn log2_abs(&self) -> f64 {
        AppComplex::log2_abs(self)
    }
    fn to_complex(&self, prec: u32) -> AppComplex {
        if self.precision_bits() >= prec {
            self.clone()
        } else {
            self.with_precision(prec)
        }
    }
    fn as_rational(&self) -> Option<Rational> {
        None
    }
    fn from_complex(z: &AppComplex) -> Option<Self> {
        Some(z.clone())
    }
    fn pow(&self, e: u32) -> Self {
        self.powu(e)
    }
}

/// Largest `log2 |x|` over a collection, `-inf` when all are zero.
pub fn max_log2<'a, K: Scalar>(xs: impl IntoIterator<Item = &'a K>) -> f64 {
    xs.into_iter()
        .map(|x| x.log2_abs())
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Convert a rational vector into the scalar `K`.
pub fn lift_vec<K: Scalar>(v: &[Rational], prec: u32) -> Vec<K> {
    v.iter().map(|q| K::from_rational(q, prec)).collect()
}

/// Every entry exact: the rational values.
pub fn exact_vec<K: Scalar>(v: &[K]) -> Option<Vec<Rational>> {
    v.iter().map(|x| x.as_rational()).collect()
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

pub fn factorial(n: u32) -> num_bigint::BigInt {
    (1..=n as u64).fold(num_bigint::BigInt::one(), |acc, i| acc * i)
}
