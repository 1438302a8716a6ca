//! Approximate complex numbers over [`BigFloat`].

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::bigfloat::{BigFloat, DEFAULT_PRECISION};
use super::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AppComplex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl AppComplex {
    pub fn new(re: BigFloat, im: BigFloat) -> Self {
        AppComplex { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        AppComplex::new(BigFloat::zero(prec), BigFloat::zero(prec))
    }

    pub fn from_real(re: BigFloat) -> Self {
        let prec = re.precision();
        AppComplex::new(re, BigFloat::zero(prec))
    }

    pub fn from_i64(n: i64, prec: u32) -> Self {
        Self::from_real(BigFloat::from_i64(n, prec))
    }

    pub fn from_rational(q: &Rational, prec: u32) -> Self {
        Self::from_real(BigFloat::from_rational(q, prec))
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        AppComplex::new(BigFloat::from_f64(re, prec), BigFloat::from_f64(im, prec))
    }

    pub fn i(prec: u32) -> Self {
        AppComplex::new(BigFloat::zero(prec), BigFloat::from_i64(1, prec))
    }

    pub fn precision_bits(&self) -> u32 {
        self.re.precision().max(self.im.precision())
    }

    pub fn with_precision(&self, prec: u32) -> Self {
        AppComplex::new(self.re.with_precision(prec), self.im.with_precision(prec))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        AppComplex::new(self.re.clone(), -&self.im)
    }

    pub fn norm_sqr(&self) -> BigFloat {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    pub fn abs(&self) -> BigFloat {
        self.norm_sqr().sqrt()
    }

    /// `log2 |z|`, `-inf` at zero. Accurate to f64 rounding.
    pub fn log2_abs(&self) -> f64 {
        let a = self.re.log2_abs();
        let b = self.im.log2_abs();
        let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
        if hi == f64::NEG_INFINITY {
            return hi;
        }
        hi + 0.5 * (1.0 + (2.0 * (lo - hi)).exp2()).log2()
    }

    pub fn scale_real(&self, s: &BigFloat) -> Self {
        AppComplex::new(&self.re * s, &self.im * s)
    }

    /// Principal square root (non-negative real part).
    pub fn sqrt(&self) -> Self {
        let prec = self.precision_bits();
        if self.is_zero() {
            return self.clone();
        }
        let two = BigFloat::from_i64(2, prec);
        let r = self.abs();
        if !self.re.is_negative() {
            let u = (&(&r + &self.re) / &two).sqrt();
            let v = &self.im / &(&two * &u);
            AppComplex::new(u, v)
        } else {
            let mut v = (&(&r - &self.re) / &two).sqrt();
            if self.im.is_negative() {
                v = -v;
            }
            let u = &self.im / &(&two * &v);
            AppComplex::new(u, v)
        }
    }

    pub fn powu(&self, mut e: u32) -> Self {
        let prec = self.precision_bits();
        let mut base = self.clone();
        let mut acc = AppComplex::from_i64(1, prec);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Coarse `(re, im)` of `z / 2^k` with `k` chosen so both fit an f64,
    /// together with `k`.
    fn scaled_f64(&self) -> (f64, f64, i64) {
        let k = self.log2_abs().floor() as i64;
        let s = BigFloat::pow2(-k, 64);
        ((&self.re * &s).to_f64(), (&self.im * &s).to_f64(), k)
    }

    pub fn arg_f64(&self) -> f64 {
        let (re, im, _) = self.scaled_f64();
        im.atan2(re)
    }

    /// Principal `d`-th root: argument in `(-pi/d, pi/d]`.
    pub fn nth_root(&self, d: u32) -> Self {
        assert!(d >= 1);
        let prec = self.precision_bits();
        if d == 1 || self.is_zero() {
            return self.clone();
        }
        if d == 2 {
            return self.sqrt();
        }
        let (re, im, k) = self.scaled_f64();
        let theta = im.atan2(re) / d as f64;
        let log_mod = (re.hypot(im)).log2() + k as f64;
        let target = log_mod / d as f64;
        let whole = target.floor();
        let frac = (target - whole).exp2();
        let modulus = &BigFloat::pow2(whole as i64, prec) * &BigFloat::from_f64(frac, prec);
        let mut w = AppComplex::new(
            &modulus * &BigFloat::from_f64(theta.cos(), prec),
            &modulus * &BigFloat::from_f64(theta.sin(), prec),
        );
        let dd = AppComplex::from_i64(d as i64, prec);
        for _ in 0..64 {
            let wd1 = w.powu(d - 1);
            let step = &(&(&wd1 * &w) - self) / &(&dd * &wd1);
            w = &w - &step;
            if step.is_zero() || step.log2_abs() < w.log2_abs() - prec as f64 + 4.0 {
                break;
            }
        }
        w
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    /// Relative distance check `|a - b| <= 2^-bits * max(|a|, |b|, floor)`.
    /// Drop a real or imaginary part smaller than `2^(scale_log2 - bits)`.
    pub fn chop(&self, scale_log2: f64, bits: f64) -> Self {
        let prec = self.precision_bits();
        let keep = |x: &BigFloat| {
            if x.log2_abs() < scale_log2 - bits {
                BigFloat::zero(prec)
            } else {
                x.clone()
            }
        };
        AppComplex::new(keep(&self.re), keep(&self.im))
    }

    pub fn close_to(&self, other: &Self, bits: f64) -> bool {
        let diff = (self - other).log2_abs();
        let scale = self.log2_abs().max(other.log2_abs()).max(0.0);
        diff <= scale - bits
    }
}

impl Default for AppComplex {
    fn default() -> Self {
        AppComplex::zero(DEFAULT_PRECISION)
    }
}

impl fmt::Display for AppComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(10);
        if self.im.is_zero() {
            return write!(f, "{}", self.re.to_sci_string(digits));
        }
        if self.re.is_zero() {
            return write!(f, "{}i", self.im.to_sci_string(digits));
        }
        let sign = if self.im.is_negative() { "-" } else { "+" };
        write!(
            f,
            "({} {} {}i)",
            self.re.to_sci_string(digits),
            sign,
            self.im.abs().to_sci_string(digits)
        )
    }
}

impl Add for &AppComplex {
    type Output = AppComplex;
    fn add(self, rhs: &AppComplex) -> AppComplex {
        AppComplex::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub for &AppComplex {
    type Output = AppComplex;
    fn sub(self, rhs: &AppComplex) -> AppComplex {
        AppComplex::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul for &AppComplex {
    type Output = AppComplex;
    fn mul(self, rhs: &AppComplex) -> AppComplex {
        if self.im.is_zero() && rhs.im.is_zero() {
            let prec = self.precision_bits().max(rhs.precision_bits());
            return AppComplex::new(&self.re * &rhs.re, BigFloat::zero(prec));
        }
        AppComplex::new(
            &(&self.re * &rhs.re) - &(&self.im * &rhs.im),
            &(&self.re * &rhs.im) + &(&self.im * &rhs.re),
        )
    }
}

impl Div for &AppComplex {
    type Output = AppComplex;
    fn div(self, rhs: &AppComplex) -> AppComplex {
        assert!(!rhs.is_zero(), "complex division by zero");
        if rhs.im.is_zero() {
            return AppComplex::new(&self.re / &rhs.re, &self.im / &rhs.re);
        }
        let den = rhs.norm_sqr();
        let num = self * &rhs.conj();
        AppComplex::new(&num.re / &den, &num.im / &den)
    }
}

impl Neg for &AppComplex {
    type Output = AppComplex;
    fn neg(self) -> AppComplex {
        AppComplex::new(-&self.re, -&self.im)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for AppComplex {
            type Output = AppComplex;
            fn $m(self, rhs: AppComplex) -> AppComplex {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for AppComplex {
    type Output = AppComplex;
    fn neg(self) -> AppComplex {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 256;

    fn c(re: f64, im: f64) -> AppComplex {
        AppComplex::from_f64(re, im, P)
    }

    #[test]
    fn sqrt_of_minus_four_is_two_i() {
        let r = c(-4.0, 0.0).sqrt();
        assert_eq!(r, c(0.0, 2.0));
    }

    #[test]
    fn sqrt_squares_back_in_every_quadrant() {
        for (re, im) in [(3.0, 4.0), (-3.0, 4.0), (-3.0, -4.0), (3.0, -4.0), (0.0, -1.0)] {
            let z = c(re, im);
            let r = z.sqrt();
            assert!(!r.re.is_negative());
            assert!((&r * &r).close_to(&z, 250.0));
        }
    }

    #[test]
    fn principal_cube_root_of_minus_eight() {
        // principal branch: 2 * exp(i pi / 3)
        let r = c(-8.0, 0.0).nth_root(3);
        let expect = c(1.0, 3f64.sqrt());
        assert!(r.close_to(&expect, 50.0));
        assert!((&r.powu(3)).close_to(&c(-8.0, 0.0), 245.0));
    }

    #[test]
    fn division_inverts_multiplication() {
        let a = c(1.5, -2.0);
        let b = c(-0.25, 7.0);
        assert!((&(&a * &b) / &b).close_to(&a, 250.0));
    }

    #[test]
    fn log2_abs_of_three_four() {
        assert!((c(3.0, 4.0).log2_abs() - 5f64.log2()).abs() < 1e-12);
    }
}
