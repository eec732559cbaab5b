//! Exact closed-form values.
//!
//! Every exact coefficient and series term in this crate has the shape
//! `q * sqrt(r) * pi^(k/4)` with rational `q`, positive integer `r` and
//! integer `k`. [`ExactTerm`] stores that shape; [`Scalar`] is its complex,
//! pi-free cousin used for user-facing coefficients in linear combinations.

use alloc::format;
use alloc::string::String;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Mul, Neg};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::numeric::{Complex, Real};

const SMALL_PRIMES: [u32; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn is_square(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let s = n.sqrt();
    (&s * &s == *n).then_some(s)
}

/// Splits `n > 0` as `out^2 * inside`, pulling out squares of small primes
/// and the whole number when it is itself a square. Radicands below 2^40 are
/// reduced completely.
fn split_square(n: &BigInt) -> (BigInt, BigInt) {
    if let Some(s) = is_square(n) {
        return (s, BigInt::one());
    }
    let mut inside = n.clone();
    let mut out = BigInt::one();
    let small = n.bits() <= 40;
    let strip = |p: u64, inside: &mut BigInt, out: &mut BigInt| {
        let pp = BigInt::from(p * p);
        loop {
            let (q, r) = inside.div_rem(&pp);
            if !r.is_zero() {
                break;
            }
            *inside = q;
            *out *= p;
        }
    };
    for &p in SMALL_PRIMES.iter() {
        strip(p as u64, &mut inside, &mut out);
    }
    if small {
        let mut p = 101u64;
        while BigInt::from(p * p) <= inside {
            strip(p, &mut inside, &mut out);
            p += 2;
        }
    }
    if let Some(s) = is_square(&inside) {
        out *= s;
        inside = BigInt::one();
    }
    (out, inside)
}

/// `sqrt(q)` for rational `q >= 0` as `(outside, radicand)` with
/// `sqrt(q) = outside * sqrt(radicand)`.
fn sqrt_rational(q: &BigRational) -> (BigRational, BigInt) {
    if q.is_zero() {
        return (BigRational::zero(), BigInt::one());
    }
    // sqrt(a/b) = sqrt(a*b) / b
    let ab = q.numer() * q.denom();
    let (out, inside) = split_square(&ab);
    (BigRational::new(out, q.denom().clone()), inside)
}

/// `mantissa * sqrt(radicand) * pi^(pi_quarters / 4)`.
#[derive(Clone)]
pub struct ExactTerm {
    mantissa: BigRational,
    radicand: BigInt,
    pi_quarters: i32,
}

impl ExactTerm {
    pub fn zero() -> ExactTerm {
        ExactTerm::from_rational(BigRational::zero())
    }

    pub fn one() -> ExactTerm {
        ExactTerm::from_rational(BigRational::one())
    }

    pub fn from_integer(n: impl Into<BigInt>) -> ExactTerm {
        ExactTerm::from_rational(BigRational::from_integer(n.into()))
    }

    pub fn from_rational(q: BigRational) -> ExactTerm {
        ExactTerm { mantissa: q, radicand: BigInt::one(), pi_quarters: 0 }
    }

    /// `sqrt(q)` for a non-negative rational.
    pub fn sqrt(q: &BigRational) -> ExactTerm {
        assert!(!q.is_negative(), "square root of a negative rational");
        let (out, radicand) = sqrt_rational(q);
        ExactTerm { mantissa: out, radicand, pi_quarters: 0 }.canonical()
    }

    /// `pi^(k/4)`.
    pub fn pi_pow_quarters(k: i32) -> ExactTerm {
        ExactTerm { mantissa: BigRational::one(), radicand: BigInt::one(), pi_quarters: k }
    }

    pub fn new(mantissa: BigRational, radicand: &BigRational, pi_quarters: i32) -> ExactTerm {
        ExactTerm::from_rational(mantissa) * ExactTerm::sqrt(radicand) * ExactTerm::pi_pow_quarters(pi_quarters)
    }

    /// Builds from a radicand already known to be square-free.
    pub(crate) fn from_reduced(mantissa: BigRational, radicand: BigInt, pi_quarters: i32) -> ExactTerm {
        ExactTerm { mantissa, radicand, pi_quarters }.canonical()
    }

    fn canonical(mut self) -> ExactTerm {
        if self.mantissa.is_zero() {
            self.radicand = BigInt::one();
            self.pi_quarters = 0;
        }
        self
    }

    pub fn mantissa(&self) -> &BigRational {
        &self.mantissa
    }

    pub fn radicand(&self) -> &BigInt {
        &self.radicand
    }

    pub fn pi_quarter_power(&self) -> i32 {
        self.pi_quarters
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn signum(&self) -> i32 {
        if self.mantissa.is_zero() {
            0
        } else if self.mantissa.is_negative() {
            -1
        } else {
            1
        }
    }

    /// The square `(mantissa^2 * radicand, 2 * pi_quarters)` as an exact
    /// rational times a power of pi.
    pub fn square_parts(&self) -> (BigRational, i32) {
        (
            &self.mantissa * &self.mantissa * BigRational::from_integer(self.radicand.clone()),
            2 * self.pi_quarters,
        )
    }

    /// Exact sum when both terms are rational multiples of the same
    /// irrational factor.
    pub fn checked_add(&self, other: &ExactTerm) -> Result<ExactTerm, Error> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.pi_quarters != other.pi_quarters {
            return Err(Error::IncompatibleRadicals);
        }
        // other = self-radical * sqrt(r_o / r_s); needs the ratio to be a square.
        let ratio = BigRational::new(other.radicand.clone(), self.radicand.clone());
        let (n, d) = (is_square(ratio.numer()), is_square(ratio.denom()));
        let (Some(n), Some(d)) = (n, d) else {
            return Err(Error::IncompatibleRadicals);
        };
        let m = &self.mantissa + &other.mantissa * BigRational::new(n, d);
        Ok(ExactTerm { mantissa: m, radicand: self.radicand.clone(), pi_quarters: self.pi_quarters }
            .canonical())
    }

    pub fn checked_sub(&self, other: &ExactTerm) -> Result<ExactTerm, Error> {
        self.checked_add(&-other)
    }

    pub fn recip(&self) -> ExactTerm {
        assert!(!self.is_zero(), "reciprocal of zero");
        // 1/(q sqrt r) = sqrt(r) / (q r)
        let r = BigRational::from_integer(self.radicand.clone());
        ExactTerm {
            mantissa: (&self.mantissa * r).recip(),
            radicand: self.radicand.clone(),
            pi_quarters: -self.pi_quarters,
        }
    }

    pub fn div(&self, other: &ExactTerm) -> ExactTerm {
        self * &other.recip()
    }

    /// Exact ordering when both sides carry the same power of pi.
    pub fn cmp_exact(&self, other: &ExactTerm) -> Option<Ordering> {
        let (sa, sb) = (self.signum(), other.signum());
        if sa == 0 || sb == 0 || sa != sb {
            return Some(sa.cmp(&sb));
        }
        if self.pi_quarters != other.pi_quarters {
            return None;
        }
        let (qa, _) = self.square_parts();
        let (qb, _) = other.square_parts();
        let mag = qa.cmp(&qb);
        Some(if sa > 0 { mag } else { mag.reverse() })
    }

    pub fn to_real(&self, p: usize) -> Real {
        if self.is_zero() {
            return Real::zero(p);
        }
        let mut v = Real::from_rational(&self.mantissa, p);
        if !self.radicand.is_one() {
            v = v * Real::from_bigint(&self.radicand, p).sqrt();
        }
        if self.pi_quarters != 0 {
            let quarter = Real::pi(p).sqrt().sqrt();
            let pw = quarter.powi(self.pi_quarters.unsigned_abs());
            v = if self.pi_quarters > 0 { v * pw } else { v / pw };
        }
        v
    }

    pub fn to_complex(&self, p: usize) -> Complex {
        Complex::from_real(self.to_real(p))
    }
}

impl PartialEq for ExactTerm {
    fn eq(&self, other: &ExactTerm) -> bool {
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        self.signum() == other.signum()
            && self.pi_quarters == other.pi_quarters
            && self.square_parts().0 == other.square_parts().0
    }
}

impl Eq for ExactTerm {}

impl Mul<&ExactTerm> for &ExactTerm {
    type Output = ExactTerm;
    fn mul(self, o: &ExactTerm) -> ExactTerm {
        // sqrt(a) sqrt(b) = g sqrt((a/g)(b/g)) with g = gcd(a, b)
        let g = self.radicand.gcd(&o.radicand);
        let rr = (&self.radicand / &g) * (&o.radicand / &g);
        let (out, inside) = split_square(&rr);
        let out = out * g;
        ExactTerm {
            mantissa: &self.mantissa * &o.mantissa * BigRational::from_integer(out),
            radicand: inside,
            pi_quarters: self.pi_quarters + o.pi_quarters,
        }
        .canonical()
    }
}

impl Mul<ExactTerm> for ExactTerm {
    type Output = ExactTerm;
    fn mul(self, o: ExactTerm) -> ExactTerm {
        &self * &o
    }
}

impl Neg for ExactTerm {
    type Output = ExactTerm;
    fn neg(mut self) -> ExactTerm {
        self.mantissa = -self.mantissa;
        self
    }
}

impl Neg for &ExactTerm {
    type Output = ExactTerm;
    fn neg(self) -> ExactTerm {
        -self.clone()
    }
}

impl fmt::Debug for ExactTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for ExactTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.mantissa)?;
        if !self.radicand.is_one() {
            write!(f, "*sqrt({})", self.radicand)?;
        }
        match self.pi_quarters {
            0 => Ok(()),
            4 => write!(f, "*pi"),
            k if k % 4 == 0 => write!(f, "*pi^({})", k / 4),
            k if k % 2 == 0 => write!(f, "*pi^({}/2)", k / 2),
            k => write!(f, "*pi^({k}/4)"),
        }
    }
}

/// Complex scalar `(re + i im) * sqrt(radicand)` with rational parts.
#[derive(Clone, PartialEq, Eq)]
pub struct Scalar {
    re: BigRational,
    im: BigRational,
    radicand: BigInt,
}

impl Scalar {
    pub fn new(re: BigRational, im: BigRational) -> Scalar {
        Scalar { re, im, radicand: BigInt::one() }.canonical()
    }

    pub fn real(re: BigRational) -> Scalar {
        Scalar::new(re, BigRational::zero())
    }

    pub fn one() -> Scalar {
        Scalar::real(BigRational::one())
    }

    pub fn zero() -> Scalar {
        Scalar::real(BigRational::zero())
    }

    pub fn i() -> Scalar {
        Scalar::new(BigRational::zero(), BigRational::one())
    }

    /// `sqrt(q)` for rational `q >= 0`.
    pub fn sqrt(q: &BigRational) -> Result<Scalar, Error> {
        if q.is_negative() {
            return Err(Error::InvalidArgument(format!("sqrt of negative {q}")));
        }
        let (out, radicand) = sqrt_rational(q);
        Ok(Scalar { re: out, im: BigRational::zero(), radicand }.canonical())
    }

    fn canonical(mut self) -> Scalar {
        if self.re.is_zero() && self.im.is_zero() {
            self.radicand = BigInt::one();
        }
        self
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn radicand(&self) -> &BigInt {
        &self.radicand
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero() && self.radicand.is_one()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Scalar {
        Scalar { re: self.re.clone(), im: -&self.im, radicand: self.radicand.clone() }
    }

    pub fn checked_add(&self, o: &Scalar) -> Result<Scalar, Error> {
        if self.is_zero() {
            return Ok(o.clone());
        }
        if o.is_zero() {
            return Ok(self.clone());
        }
        if self.radicand != o.radicand {
            return Err(Error::IncompatibleRadicals);
        }
        Ok(Scalar { re: &self.re + &o.re, im: &self.im + &o.im, radicand: self.radicand.clone() }
            .canonical())
    }

    /// The real part as an exact term, if the scalar is real.
    pub fn to_exact(&self) -> Option<ExactTerm> {
        if !self.is_real() {
            return None;
        }
        Some(
            ExactTerm::from_rational(self.re.clone())
                * ExactTerm::sqrt(&BigRational::from_integer(self.radicand.clone())),
        )
    }

    pub fn to_complex(&self, p: usize) -> Complex {
        let s = if self.radicand.is_one() {
            Real::one(p)
        } else {
            Real::from_bigint(&self.radicand, p).sqrt()
        };
        Complex::new(Real::from_rational(&self.re, p) * &s, Real::from_rational(&self.im, p) * &s)
    }

    /// Canonical text form used by the expression printer, e.g. `3/2`,
    /// `(1+2i)`, `-i`, `sqrt(2)`, `1/2*sqrt(3)`. Returns `None` for one.
    pub fn render(&self) -> Option<String> {
        if self.is_one() {
            return None;
        }
        let root = (!self.radicand.is_one()).then(|| format!("sqrt({})", self.radicand));
        let base = match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => {
                if root.is_some() && self.re.is_one() {
                    None
                } else if root.is_some() && (-&self.re).is_one() {
                    Some(String::from("-1"))
                } else {
                    Some(format!("{}", self.re))
                }
            }
            (true, false) => Some(if self.im.is_one() {
                String::from("i")
            } else if (-&self.im).is_one() {
                String::from("-i")
            } else {
                format!("{}i", self.im)
            }),
            (false, false) => {
                let sign = if self.im.is_negative() { '-' } else { '+' };
                Some(format!("({}{}{}i)", self.re, sign, self.im.abs()))
            }
        };
        Some(match (base, root) {
            (Some(b), Some(r)) => format!("{b}*{r}"),
            (Some(b), None) => b,
            (None, Some(r)) => r,
            (None, None) => String::from("1"),
        })
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        // sqrt(a) sqrt(b) = g sqrt((a/g)(b/g)) with g = gcd(a, b)
        let g = self.radicand.gcd(&o.radicand);
        let rr = (&self.radicand / &g) * (&o.radicand / &g);
        let (out, inside) = split_square(&rr);
        let out = out * g;
        let k = BigRational::from_integer(out);
        Scalar {
            re: (&self.re * &o.re - &self.im * &o.im) * &k,
            im: (&self.re * &o.im + &self.im * &o.re) * &k,
            radicand: inside,
        }
        .canonical()
    }
}

impl Mul<Scalar> for Scalar {
    type Output = Scalar;
    fn mul(self, o: Scalar) -> Scalar {
        &self * &o
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: -self.re, im: -self.im, radicand: self.radicand }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render().unwrap_or_else(|| String::from("1")))
    }
}
