//! Binary floating point with an arbitrary-size mantissa.
//!
//! A value is `mant * 2^exp`, rounded to `prec` significant bits after every
//! operation. The mantissa is kept odd (trailing zero bits are folded into the
//! exponent) so that structural equality coincides with numeric equality.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Rational;

pub const MIN_PRECISION: u32 = 64;
pub const DEFAULT_PRECISION: u32 = 256;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BigFloat {
    mant: BigInt,
    exp: i64,
    prec: u32,
}

impl BigFloat {
    pub fn zero(prec: u32) -> Self {
        BigFloat {
            mant: BigInt::zero(),
            exp: 0,
            prec: prec.max(MIN_PRECISION),
        }
    }

    pub fn from_parts(mant: BigInt, exp: i64, prec: u32) -> Self {
        let mut x = BigFloat {
            mant,
            exp,
            prec: prec.max(MIN_PRECISION),
        };
        x.normalize(false);
        x
    }

    pub fn from_bigint(n: &BigInt, prec: u32) -> Self {
        Self::from_parts(n.clone(), 0, prec)
    }

    pub fn from_i64(n: i64, prec: u32) -> Self {
        Self::from_parts(BigInt::from(n), 0, prec)
    }

    /// Correctly rounded `num / den`.
    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32) -> Self {
        assert!(!den.is_zero(), "division by zero");
        let prec = prec.max(MIN_PRECISION);
        if num.is_zero() {
            return Self::zero(prec);
        }
        let shift = (prec as i64 + 2 + den.bits() as i64 - num.bits() as i64).max(0);
        let scaled = num << (shift as usize);
        let (q, r) = (&scaled / den, &scaled % den);
        let sticky = !r.is_zero();
        let mut x = BigFloat {
            mant: q,
            exp: -shift,
            prec,
        };
        x.normalize(sticky);
        x
    }

    pub fn from_rational(q: &Rational, prec: u32) -> Self {
        Self::from_ratio(q.numer(), q.denom(), prec)
    }

    pub fn from_f64(x: f64, prec: u32) -> Self {
        assert!(x.is_finite(), "non-finite float");
        if x == 0.0 {
            return Self::zero(prec);
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 0 { 1i64 } else { -1i64 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = (bits & 0x000f_ffff_ffff_ffff) as i64;
        let (m, e) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1 << 52), raw_exp - 1075)
        };
        Self::from_parts(BigInt::from(sign * m), e, prec)
    }

    /// `2^k` exactly.
    pub fn pow2(k: i64, prec: u32) -> Self {
        Self::from_parts(BigInt::one(), k, prec)
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn with_precision(&self, prec: u32) -> Self {
        Self::from_parts(self.mant.clone(), self.exp, prec)
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.sign() == Sign::Minus
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Self {
        BigFloat {
            mant: self.mant.abs(),
            exp: self.exp,
            prec: self.prec,
        }
    }

    /// Exponent of the leading bit: `2^top_bit() <= |x| < 2^(top_bit()+1)`.
    fn top_bit(&self) -> i64 {
        self.mant.bits() as i64 - 1 + self.exp
    }

    /// `log2 |x|`, `-inf` for zero.
    pub fn log2_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let bits = self.mant.bits() as i64;
        let drop = (bits - 53).max(0);
        let head = (self.mant.abs() >> (drop as usize)).to_f64().unwrap_or(f64::MAX);
        head.log2() + (drop + self.exp) as f64
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits() as i64;
        let drop = (bits - 60).max(0);
        let head = (&self.mant >> (drop as usize)).to_f64().unwrap_or(0.0);
        let e = drop + self.exp;
        if e > 2000 {
            return head.signum() * f64::INFINITY;
        }
        if e < -2200 {
            return 0.0;
        }
        // split the scaling so intermediate powers stay finite
        let half = e / 2;
        head * 2f64.powi(half as i32) * 2f64.powi((e - half) as i32)
    }

    pub fn to_rational(&self) -> Rational {
        if self.exp >= 0 {
            Rational::from_integer(&self.mant << (self.exp as usize))
        } else {
            Rational::new(self.mant.clone(), BigInt::one() << ((-self.exp) as usize))
        }
    }

    /// Round to the nearest integer-valued rational when the fractional part
    /// is below `2^-bits`, used by rational reconstruction.
    pub fn floor_to_bigint(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << (self.exp as usize)
        } else {
            let shift = (-self.exp) as usize;
            // arithmetic shift rounds toward -inf for negative values
            &self.mant >> shift
        }
    }

    fn normalize(&mut self, sticky: bool) {
        if self.mant.is_zero() {
            self.exp = 0;
            return;
        }
        let bits = self.mant.bits();
        let prec = self.prec as u64;
        if bits > prec {
            let drop = (bits - prec) as usize;
            let neg = self.mant.is_negative();
            let mag = self.mant.abs();
            let kept = &mag >> drop;
            let rem = &mag - (&kept << drop);
            let half = BigInt::one() << (drop - 1);
            let round_up = match rem.cmp(&half) {
                Ordering::Greater => true,
                Ordering::Less => false,
                Ordering::Equal => sticky || kept.bit(0),
            };
            let mut kept = if round_up { kept + 1u32 } else { kept };
            self.exp += drop as i64;
            if kept.bits() > prec {
                kept >>= 1;
                self.exp += 1;
            }
            self.mant = if neg { -kept } else { kept };
        }
        let tz = self.mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mant >>= tz as usize;
            self.exp += tz as i64;
        }
    }

    pub fn sqrt(&self) -> Self {
        assert!(!self.is_negative(), "square root of a negative number");
        if self.is_zero() {
            return self.clone();
        }
        let bits = self.mant.bits() as i64;
        let mut shift = (2 * self.prec as i64 + 4 - bits).max(0);
        if (self.exp - shift).rem_euclid(2) != 0 {
            shift += 1;
        }
        let scaled = &self.mant << (shift as usize);
        let root = scaled.sqrt();
        let sticky = &root * &root != scaled;
        let mut x = BigFloat {
            mant: root,
            exp: (self.exp - shift) / 2,
            prec: self.prec,
        };
        x.normalize(sticky);
        x
    }

    /// Scientific decimal rendering with `digits` significant digits.
    pub fn to_sci_string(&self, digits: usize) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let digits = digits.max(1);
        let q = self.to_rational().abs();
        let mut k = (self.log2_abs() * std::f64::consts::LOG10_2).floor() as i64;
        let scaled_int = |k: i64| -> BigInt {
            let shift = digits as i64 - 1 - k;
            let ten = BigInt::from(10);
            let s = if shift >= 0 {
                &q * Rational::from_integer(num_traits::pow(ten, shift as usize))
            } else {
                &q / Rational::from_integer(num_traits::pow(ten, (-shift) as usize))
            };
            // round half away from zero
            (s + Rational::new(BigInt::one(), BigInt::from(2))).floor().to_integer()
        };
        let mut n = scaled_int(k);
        let limit = num_traits::pow(BigInt::from(10), digits);
        let lower = num_traits::pow(BigInt::from(10), digits - 1);
        if n >= limit {
            k += 1;
            n = scaled_int(k);
        } else if n < lower {
            k -= 1;
            n = scaled_int(k);
        }
        let s = n.to_string();
        let (head, tail) = s.split_at(1);
        let tail = tail.trim_end_matches('0');
        let sign = if self.is_negative() { "-" } else { "" };
        if tail.is_empty() {
            format!("{sign}{head}e{k}")
        } else {
            format!("{sign}{head}.{tail}e{k}")
        }
    }

    /// Parse a decimal number (`-1.25e-3`, `42`, `7/3`) and round it.
    pub fn parse(text: &str, prec: u32) -> Option<Self> {
        parse_decimal(text).map(|q| Self::from_rational(&q, prec))
    }
}

/// Exact value of a decimal literal, or of a `p/q` fraction.
pub fn parse_decimal(text: &str) -> Option<Rational> {
    let t = text.trim();
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(Rational::new(p, q));
    }
    let (mantissa, exp10) = match t.find(['e', 'E']) {
        Some(pos) => (&t[..pos], t[pos + 1..].parse::<i64>().ok()?),
        None => (t, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int_part}{frac_part}0").parse().ok()?;
    let digits = digits / 10;
    let e = exp10 - frac_part.len() as i64;
    let ten = BigInt::from(10);
    let mut q = if e >= 0 {
        Rational::from_integer(digits * num_traits::pow(ten, e as usize))
    } else {
        Rational::new(digits, num_traits::pow(ten, (-e) as usize))
    };
    if neg {
        q = -q;
    }
    Some(q)
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(17);
        write!(f, "{}", self.to_sci_string(digits))
    }
}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BigFloat {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        let ta = self.top_bit();
        let tb = other.top_bit();
        if ta != tb {
            let ord = ta.cmp(&tb);
            return if sa > 0 { ord } else { ord.reverse() };
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << ((self.exp - e) as usize);
        let b = &other.mant << ((other.exp - e) as usize);
        a.cmp(&b)
    }
}

fn add_impl(a: &BigFloat, b: &BigFloat, negate_b: bool) -> BigFloat {
    let prec = a.prec.max(b.prec);
    let bm = if negate_b { -&b.mant } else { b.mant.clone() };
    if b.is_zero() {
        return a.with_precision(prec);
    }
    if a.is_zero() {
        return BigFloat::from_parts(bm, b.exp, prec);
    }
    // operand far below half an ulp of the other only affects rounding ties
    let gap = a.top_bit() - b.top_bit();
    if gap > prec as i64 + 2 {
        return nudge(&a.mant, a.exp, bm.signum(), prec);
    }
    if -gap > prec as i64 + 2 {
        return nudge(&bm, b.exp, a.mant.signum(), prec);
    }
    let e = a.exp.min(b.exp);
    let sum = (&a.mant << ((a.exp - e) as usize)) + (bm << ((b.exp - e) as usize));
    BigFloat::from_parts(sum, e, prec)
}

/// `mant * 2^exp` perturbed by a sign-only amount far below its last bit.
fn nudge(mant: &BigInt, exp: i64, dir: BigInt, prec: u32) -> BigFloat {
    let s = (prec as i64 + 3 - mant.bits() as i64).max(2) as usize;
    let mut x = BigFloat {
        mant: (mant << s) + dir,
        exp: exp - s as i64,
        prec,
    };
    x.normalize(true);
    x
}

impl Add for &BigFloat {
    type Output = BigFloat;
    fn add(self, rhs: &BigFloat) -> BigFloat {
        add_impl(self, rhs, false)
    }
}

impl Sub for &BigFloat {
    type Output = BigFloat;
    fn sub(self, rhs: &BigFloat) -> BigFloat {
        add_impl(self, rhs, true)
    }
}

impl Mul for &BigFloat {
    type Output = BigFloat;
    fn mul(self, rhs: &BigFloat) -> BigFloat {
        BigFloat::from_parts(&self.mant * &rhs.mant, self.exp + rhs.exp, self.prec.max(rhs.prec))
    }
}

impl Div for &BigFloat {
    type Output = BigFloat;
    fn div(self, rhs: &BigFloat) -> BigFloat {
        assert!(!rhs.is_zero(), "division by zero");
        let prec = self.prec.max(rhs.prec);
        let mut q = BigFloat::from_ratio(&self.mant, &rhs.mant, prec);
        if !q.is_zero() {
            q.exp += self.exp - rhs.exp;
        }
        q
    }
}

impl Neg for &BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        BigFloat {
            mant: -&self.mant,
            exp: self.exp,
            prec: self.prec,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for BigFloat {
            type Output = BigFloat;
            fn $m(self, rhs: BigFloat) -> BigFloat {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        -&self
    }
}
