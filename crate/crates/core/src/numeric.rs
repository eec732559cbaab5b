//! Arbitrary-precision real and complex scalars.
//!
//! `Real` wraps an `astro_float::BigFloat` together with the precision (in
//! bits) that results of operations should be rounded to. Binary operations
//! use the larger precision of the two operands.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign, Word};
use num_bigint::{BigInt, Sign as BigSign};
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::Error;

const RM: RoundingMode = RoundingMode::ToEven;
const WORD_BITS: usize = Word::BITS as usize;

/// Decimal precision `D` requested by the caller.
///
/// Internal work is done with `D + 20` digits so that results are reliable to
/// `D` digits after moderate cancellation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Precision {
    digits: u32,
}

impl Precision {
    pub const MIN_DIGITS: u32 = 30;
    pub const GUARD_DIGITS: u32 = 20;

    pub fn new(digits: u32) -> Result<Self, Error> {
        if digits < Self::MIN_DIGITS {
            return Err(Error::PrecisionTooLow(digits));
        }
        Ok(Precision { digits })
    }

    pub fn digits(self) -> u32 {
        self.digits
    }

    /// Bits needed to carry `D` digits.
    pub fn bits(self) -> usize {
        digits_to_bits(self.digits)
    }

    /// Bits used for intermediate work (`D + 20` digits).
    pub fn working_bits(self) -> usize {
        digits_to_bits(self.digits + Self::GUARD_DIGITS)
    }

    /// Working-precision zero, a convenient seed for accumulators.
    pub fn zero(self) -> Real {
        Real::zero(self.working_bits())
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision { digits: 60 }
    }
}

fn digits_to_bits(d: u32) -> usize {
    // log2(10) < 3.3220; round up to a whole number of words.
    let b = (d as usize * 33220).div_ceil(10000) + 8;
    b.div_ceil(WORD_BITS) * WORD_BITS
}

/// `2^k` for `|k| <= 1022`, built from the bit pattern so `core` suffices.
fn pow2f(k: i32) -> f64 {
    f64::from_bits(((k + 1023) as u64) << 52)
}

fn consts() -> Consts {
    Consts::new().expect("allocating astro-float constant cache")
}

#[derive(Clone)]
pub struct Real {
    v: BigFloat,
    p: usize,
}

impl Real {
    fn wrap(v: BigFloat, p: usize) -> Real {
        Real { v, p }
    }

    pub fn zero(p: usize) -> Real {
        Real::wrap(BigFloat::from_word(0, p), p)
    }

    pub fn one(p: usize) -> Real {
        Real::from_i64(1, p)
    }

    pub fn from_i64(x: i64, p: usize) -> Real {
        Real::wrap(BigFloat::from_i64(x, p), p)
    }

    pub fn from_u64(x: u64, p: usize) -> Real {
        Real::wrap(BigFloat::from_u64(x, p), p)
    }

    pub fn from_f64(x: f64, p: usize) -> Real {
        Real::wrap(BigFloat::from_f64(x, p), p)
    }

    /// Rounds a big integer to `p` bits.
    pub fn from_bigint(x: &BigInt, p: usize) -> Real {
        if x.is_zero() {
            return Real::zero(p);
        }
        let bits = x.bits() as usize;
        let keep = p + 2 * WORD_BITS;
        let (m, shift) = if bits > keep {
            let s = bits - keep;
            (x.abs() >> s, s)
        } else {
            (x.abs(), 0)
        };
        let (_, digits) = m.to_u64_digits();
        let words: Vec<Word> = digits.iter().map(|&d| d as Word).collect();
        let sign = if x.sign() == BigSign::Minus {
            Sign::Neg
        } else {
            Sign::Pos
        };
        let e = (words.len() * WORD_BITS + shift) as astro_float::Exponent;
        let mut v = BigFloat::from_words(&words, sign, e);
        v.set_precision(p, RM).expect("rounding integer mantissa");
        Real::wrap(v, p)
    }

    pub fn from_rational(x: &BigRational, p: usize) -> Real {
        let q = Real::from_bigint(x.numer(), p + WORD_BITS)
            / Real::from_bigint(x.denom(), p + WORD_BITS);
        q.with_precision(p)
    }

    /// Parses a decimal literal such as `-1.25e-3`.
    pub fn parse(s: &str, p: usize) -> Result<Real, Error> {
        let v = BigFloat::parse(s.trim(), Radix::Dec, p, RM, &mut consts());
        if v.is_nan() || v.is_inf() {
            return Err(Error::InvalidArgument(alloc::format!("not a decimal number: {s}")));
        }
        Ok(Real::wrap(v, p))
    }

    pub fn pi(p: usize) -> Real {
        let mut cc = consts();
        Real::wrap(cc.pi(p, RM), p)
    }

    pub fn precision(&self) -> usize {
        self.p
    }

    pub fn with_precision(mut self, p: usize) -> Real {
        self.v.set_precision(p, RM).expect("changing precision");
        self.p = p;
        self
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        !(self.v.is_nan() || self.v.is_inf())
    }

    pub fn is_negative(&self) -> bool {
        self.v.is_negative() && !self.v.is_zero()
    }

    pub fn abs(&self) -> Real {
        Real::wrap(self.v.abs(), self.p)
    }

    pub fn sqrt(&self) -> Real {
        Real::wrap(self.v.sqrt(self.p, RM), self.p)
    }

    pub fn recip(&self) -> Real {
        Real::wrap(self.v.reciprocal(self.p, RM), self.p)
    }

    pub fn exp(&self) -> Real {
        Real::wrap(self.v.exp(self.p, RM, &mut consts()), self.p)
    }

    pub fn ln(&self) -> Real {
        Real::wrap(self.v.ln(self.p, RM, &mut consts()), self.p)
    }

    pub fn sin(&self) -> Real {
        Real::wrap(self.v.sin(self.p, RM, &mut consts()), self.p)
    }

    pub fn cos(&self) -> Real {
        Real::wrap(self.v.cos(self.p, RM, &mut consts()), self.p)
    }

    pub fn powi(&self, n: u32) -> Real {
        Real::wrap(self.v.powi(n as usize, self.p, RM), self.p)
    }

    /// Multiplies by `2^k` exactly.
    pub fn mul_pow2(&self, k: i64) -> Real {
        let mut v = self.v.clone();
        if let Some(e) = v.exponent() {
            if !v.is_zero() {
                v.set_exponent((e as i64 + k) as astro_float::Exponent);
            }
        }
        Real::wrap(v, self.p)
    }

    /// Binary exponent `e` with `2^(e-1) <= |x| < 2^e`, or `None` for zero.
    pub fn exponent(&self) -> Option<i64> {
        if self.v.is_zero() {
            None
        } else {
            self.v.exponent().map(|e| e as i64)
        }
    }

    pub fn max(self, other: Real) -> Real {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: Real) -> Real {
        if other < self {
            other
        } else {
            self
        }
    }

    /// Nearest `f64`, saturating to infinity outside its range.
    pub fn to_f64(&self) -> f64 {
        let Some((words, _, sign, e, _)) = self.v.as_raw_parts() else {
            return f64::NAN;
        };
        if self.v.is_zero() {
            return 0.0;
        }
        let top = *words.last().unwrap_or(&0) as f64 / pow2f(WORD_BITS as i32);
        let mut x = top;
        let mut e = e as i64;
        while e > 0 {
            let s = e.min(512);
            x *= pow2f(s as i32);
            e -= s;
        }
        while e < 0 {
            let s = (-e).min(512);
            x /= pow2f(s as i32);
            e += s;
        }
        if sign == Sign::Neg {
            -x
        } else {
            x
        }
    }

    /// Scientific notation rounded to `digits` significant decimal digits,
    /// e.g. `1.2500000000e-3`.
    pub fn to_decimal(&self, digits: u32) -> String {
        if self.v.is_zero() {
            return "0".to_string();
        }
        // format() prints every digit the mantissa carries; round the text.
        let raw = self
            .v
            .format(Radix::Dec, RM, &mut consts())
            .unwrap_or_else(|_| "NaN".to_string());
        round_decimal_string(&raw, digits.max(1) as usize).unwrap_or(raw)
    }
}

/// Rounds `[-]d.ddd[e[+-]x]` text to `n` significant digits, half away from zero.
fn round_decimal_string(s: &str, n: usize) -> Option<String> {
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s),
    };
    let (mant, exp) = match body.find(['e', 'E']) {
        Some(i) => (&body[..i], body[i + 1..].parse::<i64>().ok()?),
        None => (body, 0),
    };
    let (int_part, frac_part) = match mant.find('.') {
        Some(i) => (&mant[..i], &mant[i + 1..]),
        None => (mant, ""),
    };
    let mut digits: Vec<u8> = int_part
        .bytes()
        .chain(frac_part.bytes())
        .map(|b| b.wrapping_sub(b'0'))
        .collect();
    if digits.iter().any(|&d| d > 9) {
        return None;
    }
    // Exponent of the leading digit, after stripping leading zeros.
    let mut lead_exp = exp + int_part.len() as i64 - 1;
    let lz = digits.iter().take_while(|&&d| d == 0).count();
    if lz == digits.len() {
        return Some("0".to_string());
    }
    digits.drain(..lz);
    lead_exp -= lz as i64;
    if digits.len() > n {
        let round_up = digits[n] >= 5;
        digits.truncate(n);
        if round_up {
            let mut i = n;
            loop {
                if i == 0 {
                    digits.insert(0, 1);
                    digits.truncate(n);
                    lead_exp += 1;
                    break;
                }
                i -= 1;
                if digits[i] == 9 {
                    digits[i] = 0;
                } else {
                    digits[i] += 1;
                    break;
                }
            }
        }
    }
    while digits.len() < n {
        digits.push(0);
    }
    let mut out = String::with_capacity(n + 8);
    if neg {
        out.push('-');
    }
    out.push((b'0' + digits[0]) as char);
    if n > 1 {
        out.push('.');
        for &d in &digits[1..] {
            out.push((b'0' + d) as char);
        }
    }
    out.push('e');
    out.push_str(&lead_exp.to_string());
    Some(out)
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(40))
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = f.precision().unwrap_or(30) as u32;
        write!(f, "{}", self.to_decimal(d))
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Real) -> bool {
        self.v.cmp(&other.v) == Some(0)
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Real) -> Option<Ordering> {
        self.v.cmp(&other.v).map(|c| c.cmp(&0))
    }
}

macro_rules! real_binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl $tr<&Real> for &Real {
            type Output = Real;
            fn $m(self, rhs: &Real) -> Real {
                let p = self.p.max(rhs.p);
                Real::wrap(self.v.$f(&rhs.v, p, RM), p)
            }
        }
        impl $tr<Real> for Real {
            type Output = Real;
            fn $m(self, rhs: Real) -> Real {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Real> for Real {
            type Output = Real;
            fn $m(self, rhs: &Real) -> Real {
                (&self).$m(rhs)
            }
        }
        impl $tr<Real> for &Real {
            type Output = Real;
            fn $m(self, rhs: Real) -> Real {
                self.$m(&rhs)
            }
        }
    };
}

real_binop!(Add, add, add);
real_binop!(Sub, sub, sub);
real_binop!(Mul, mul, mul);
real_binop!(Div, div, div);

impl AddAssign<&Real> for Real {
    fn add_assign(&mut self, rhs: &Real) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Real> for Real {
    fn sub_assign(&mut self, rhs: &Real) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Real> for Real {
    fn mul_assign(&mut self, rhs: &Real) {
        *self = &*self * rhs;
    }
}

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real::wrap(BigFloat::neg(&self.v), self.p)
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real::wrap(BigFloat::neg(&self.v), self.p)
    }
}

/// Complex number with `Real` parts.
#[derive(Clone, PartialEq)]
pub struct Complex {
    pub re: Real,
    pub im: Real,
}

impl Complex {
    pub fn new(re: Real, im: Real) -> Complex {
        Complex { re, im }
    }

    pub fn zero(p: usize) -> Complex {
        Complex::new(Real::zero(p), Real::zero(p))
    }

    pub fn one(p: usize) -> Complex {
        Complex::new(Real::one(p), Real::zero(p))
    }

    pub fn i(p: usize) -> Complex {
        Complex::new(Real::zero(p), Real::one(p))
    }

    pub fn from_real(re: Real) -> Complex {
        let p = re.precision();
        Complex::new(re, Real::zero(p))
    }

    pub fn precision(&self) -> usize {
        self.re.precision().max(self.im.precision())
    }

    pub fn with_precision(self, p: usize) -> Complex {
        Complex::new(self.re.with_precision(p), self.im.with_precision(p))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn conj(&self) -> Complex {
        Complex::new(self.re.clone(), -&self.im)
    }

    pub fn norm_sqr(&self) -> Real {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn abs(&self) -> Real {
        if self.im.is_zero() {
            self.re.abs()
        } else if self.re.is_zero() {
            self.im.abs()
        } else {
            self.norm_sqr().sqrt()
        }
    }

    /// Multiplication by `i^k`.
    pub fn mul_i_pow(&self, k: i64) -> Complex {
        match k.rem_euclid(4) {
            0 => self.clone(),
            1 => Complex::new(-&self.im, self.re.clone()),
            2 => Complex::new(-&self.re, -&self.im),
            _ => Complex::new(self.im.clone(), -&self.re),
        }
    }

    pub fn scale(&self, k: &Real) -> Complex {
        Complex::new(&self.re * k, &self.im * k)
    }

    pub fn exp(&self) -> Complex {
        let m = self.re.exp();
        if self.im.is_zero() {
            return Complex::from_real(m);
        }
        Complex::new(&m * self.im.cos(), &m * self.im.sin())
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Complex {
        if self.im.is_zero() && !self.re.is_negative() {
            return Complex::from_real(self.re.sqrt());
        }
        let m = self.abs();
        let re = ((&m + &self.re).mul_pow2(-1)).sqrt();
        let im = ((&m - &self.re).mul_pow2(-1)).sqrt();
        if self.im.is_negative() {
            Complex::new(re, -im)
        } else {
            Complex::new(re, im)
        }
    }

    pub fn recip(&self) -> Complex {
        let n = self.norm_sqr();
        Complex::new(&self.re / &n, -(&self.im / &n))
    }
}

impl fmt::Debug for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?} + {:?}i)", self.re, self.im)
    }
}

impl Add<&Complex> for &Complex {
    type Output = Complex;
    fn add(self, r: &Complex) -> Complex {
        Complex::new(&self.re + &r.re, &self.im + &r.im)
    }
}

impl Sub<&Complex> for &Complex {
    type Output = Complex;
    fn sub(self, r: &Complex) -> Complex {
        Complex::new(&self.re - &r.re, &self.im - &r.im)
    }
}

impl Mul<&Complex> for &Complex {
    type Output = Complex;
    fn mul(self, r: &Complex) -> Complex {
        if self.im.is_zero() && r.im.is_zero() {
            let p = self.precision().max(r.precision());
            return Complex::new(&self.re * &r.re, Real::zero(p));
        }
        Complex::new(
            &self.re * &r.re - &self.im * &r.im,
            &self.re * &r.im + &self.im * &r.re,
        )
    }
}

impl Div<&Complex> for &Complex {
    type Output = Complex;
    fn div(self, r: &Complex) -> Complex {
        if r.im.is_zero() {
            return Complex::new(&self.re / &r.re, &self.im / &r.re);
        }
        self * &r.recip()
    }
}

macro_rules! complex_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Complex> for Complex {
            type Output = Complex;
            fn $m(self, r: Complex) -> Complex {
                (&self).$m(&r)
            }
        }
        impl $tr<&Complex> for Complex {
            type Output = Complex;
            fn $m(self, r: &Complex) -> Complex {
                (&self).$m(r)
            }
        }
    };
}

complex_owned!(Add, add);
complex_owned!(Sub, sub);
complex_owned!(Mul, mul);
complex_owned!(Div, div);

impl AddAssign<&Complex> for Complex {
    fn add_assign(&mut self, r: &Complex) {
        self.re += &r.re;
        self.im += &r.im;
    }
}

impl Neg for Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex::new(-self.re, -self.im)
    }
}

impl Neg for &Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex::new(-&self.re, -&self.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> usize {
        Precision::new(60).unwrap().working_bits()
    }

    #[test]
    fn precision_floor() {
        assert_eq!(Precision::new(29), Err(Error::PrecisionTooLow(29)));
        assert!(Precision::new(30).is_ok());
        assert!(Precision::new(60).unwrap().bits() >= 200);
    }

    #[test]
    fn bigint_round_trip() {
        let p = p();
        assert_eq!(Real::from_bigint(&BigInt::from(5), p), Real::from_i64(5, p));
        assert_eq!(Real::from_bigint(&BigInt::from(-7), p), Real::from_i64(-7, p));
        let big = BigInt::from(3u32).pow(400);
        let r = Real::from_bigint(&big, p);
        let direct = Real::from_i64(3, p).powi(400);
        let rel = ((&r - &direct) / &direct).abs();
        assert!(rel < Real::parse("1e-75", p).unwrap());
    }

    #[test]
    fn rational_and_f64() {
        let p = p();
        let q = BigRational::new(BigInt::from(1), BigInt::from(3));
        let third = Real::from_rational(&q, p);
        assert_eq!(third.to_decimal(5), "3.3333e-1");
        assert!((Real::from_f64(-2.5, p).to_f64() + 2.5).abs() < 1e-15);
        assert!((Real::pi(p).to_f64() - core::f64::consts::PI).abs() < 1e-15);
        assert_eq!(Real::from_i64(3, p).mul_pow2(-1).to_f64(), 1.5);
    }

    #[test]
    fn decimal_rounding() {
        assert_eq!(round_decimal_string("9.996e+2", 3).unwrap(), "1.00e3");
        assert_eq!(round_decimal_string("-1.2345e-7", 3).unwrap(), "-1.23e-7");
        assert_eq!(round_decimal_string("0.00125", 2).unwrap(), "1.3e-3");
    }

    #[test]
    fn decimal_round_trip() {
        let p = p();
        let x = Real::pi(p).sqrt();
        let s = x.to_decimal(60);
        let y = Real::parse(&s, p).unwrap();
        let rel = ((&x - &y) / &x).abs();
        assert!(rel < Real::parse("1e-59", p).unwrap());
    }

    #[test]
    fn complex_exp() {
        let p = p();
        let z = Complex::new(Real::zero(p), Real::pi(p));
        let e = z.exp();
        assert!((e.re.to_f64() + 1.0).abs() < 1e-30);
        assert!(e.im.abs().to_f64() < 1e-30);
    }
}
