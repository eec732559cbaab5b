//! Hermite polynomials and the oscillator eigenfunctions
//! `e_n(x) = H_n(x) exp(-x^2/2) / sqrt(2^n n! sqrt(pi))`.
//!
//! Polynomial values come from the three-term recurrence
//! `H_{n+1} = 2x H_n - 2n H_{n-1}`. Eigenfunction values use the normalized
//! form of the same recurrence, which keeps intermediate magnitudes near one.
//! In floating precision `D + 20` the normalized recurrence loses roughly
//! `log10(n)` digits; beyond `n` of a few hundred with `|x|` near the turning
//! point `sqrt(2n+1)` callers should raise the precision.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::Error;
use crate::exact::ExactTerm;
use crate::numeric::{Complex, Real};

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `H_n(0)`: zero for odd `n`, `(-1)^(n/2) n! / (n/2)!` otherwise.
pub fn hermite_at_zero(n: u32) -> BigInt {
    if n % 2 == 1 {
        return BigInt::zero();
    }
    let m = n / 2;
    let v: BigInt = (m + 1..=n).fold(BigInt::one(), |acc, k| acc * k);
    if m % 2 == 1 {
        -v
    } else {
        v
    }
}

/// `H_n(x)` for an integer argument, exactly.
pub fn hermite_integer(n: u32, x: &BigInt) -> BigInt {
    let two_x = x * 2;
    let (mut prev, mut cur) = (BigInt::zero(), BigInt::one());
    for k in 0..n {
        let next = &two_x * &cur - &prev * (2 * k);
        prev = cur;
        cur = next;
    }
    cur
}

/// `H_0(x), ..., H_n(x)`.
pub fn hermite_values(n: u32, x: &Real) -> Vec<Real> {
    let p = x.precision();
    let two_x = x.mul_pow2(1);
    let mut out = Vec::with_capacity(n as usize + 1);
    out.push(Real::one(p));
    if n >= 1 {
        out.push(two_x.clone());
    }
    for k in 1..n {
        let k = k as usize;
        let next = &two_x * &out[k] - &out[k - 1] * Real::from_u64(2 * k as u64, p);
        out.push(next);
    }
    out
}

pub fn hermite_eval(n: u32, x: &Real) -> Real {
    hermite_values(n, x).pop().expect("at least H_0")
}

pub fn hermite_eval_complex(n: u32, x: &Complex) -> Complex {
    let p = x.precision();
    let two_x = Complex::new(x.re.mul_pow2(1), x.im.mul_pow2(1));
    let (mut prev, mut cur) = (Complex::zero(p), Complex::one(p));
    for k in 0..n {
        let next = &two_x * &cur - prev.scale(&Real::from_u64(2 * k as u64, p));
        prev = cur;
        cur = next;
    }
    cur
}

/// `N_n = (2^n n! sqrt(pi))^(-1/2)` as an exact term.
pub fn normalization(n: u32) -> ExactTerm {
    // 2^n n! = out^2 * inside with inside square-free, from Legendre's formula
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    let mut out = BigInt::one();
    let mut inside = BigInt::one();
    for p in 2..=n {
        if !sieve[p] {
            continue;
        }
        for q in (p * p..=n).step_by(p) {
            sieve[q] = false;
        }
        let mut e = 0;
        let mut pk = p;
        while pk <= n {
            e += n / pk;
            pk = match pk.checked_mul(p) {
                Some(v) => v,
                None => break,
            };
        }
        if p == 2 {
            e += n;
        }
        out *= BigInt::from(p).pow((e / 2) as u32);
        if e % 2 == 1 {
            inside *= p;
        }
    }
    if n < 2 && n % 2 == 1 {
        // 2^1 * 1! = 2
        inside *= 2;
    }
    // 1/sqrt(out^2 inside) = sqrt(inside) / (out inside)
    let d = &out * &inside;
    ExactTerm::from_reduced(BigRational::new(BigInt::one(), d), inside, -1)
}

/// `e_0(x), ..., e_n(x)` from the normalized recurrence
/// `e_{k+1} = sqrt(2/(k+1)) x e_k - sqrt(k/(k+1)) e_{k-1}`.
pub fn eigenfunction_values(n: u32, x: &Real) -> Vec<Real> {
    let p = x.precision();
    let e0 = (-(x * x).mul_pow2(-1)).exp() / Real::pi(p).sqrt().sqrt();
    let mut out = Vec::with_capacity(n as usize + 1);
    out.push(e0);
    for k in 0..n as u64 {
        let kk = k as usize;
        let a = (Real::from_u64(2, p) / Real::from_u64(k + 1, p)).sqrt();
        let mut next = a * x * &out[kk];
        if k > 0 {
            let b = (Real::from_u64(k, p) / Real::from_u64(k + 1, p)).sqrt();
            next = next - b * &out[kk - 1];
        }
        out.push(next);
    }
    out
}

pub fn eigenfunction_eval(n: u32, x: &Real) -> Real {
    eigenfunction_values(n, x).pop().expect("at least e_0")
}

/// `e_n(z)` at a complex point.
pub fn eigenfunction_eval_complex(n: u32, z: &Complex) -> Complex {
    let p = z.precision();
    let zz = z * z;
    let g = Complex::new(-zz.re.mul_pow2(-1), -zz.im.mul_pow2(-1)).exp();
    let norm = normalization(n).to_real(p);
    (hermite_eval_complex(n, z) * g).scale(&norm)
}

/// `e_n(0)` exactly.
pub fn eigenfunction_at_zero(n: u32) -> ExactTerm {
    normalization(n) * ExactTerm::from_integer(hermite_at_zero(n))
}

/// `e_n^(k)(0)` through the ladder action `D = (c - c^dag)/sqrt(2)` with
/// `c e_m = sqrt(m) e_{m-1}` and `c^dag e_m = sqrt(m+1) e_{m+1}`; the
/// expansion `D^k e_n = sum_m a_m e_m` is then evaluated at zero.
pub fn eigenfunction_derivative_at_zero(n: u32, k: u32) -> ExactTerm {
    let half = ExactTerm::sqrt(&BigRational::new(BigInt::one(), BigInt::from(2)));
    let mut v: BTreeMap<u32, ExactTerm> = BTreeMap::new();
    v.insert(n, ExactTerm::one());
    for _ in 0..k {
        let mut w: BTreeMap<u32, ExactTerm> = BTreeMap::new();
        let mut put = |m: u32, t: ExactTerm| {
            let slot = w.entry(m).or_insert_with(ExactTerm::zero);
            *slot = slot.checked_add(&t).expect("ladder coefficients share one radical class");
        };
        for (&m, a) in &v {
            let a = a * &half;
            if m > 0 {
                put(m - 1, &a * &ExactTerm::sqrt(&BigRational::from_integer(m.into())));
            }
            put(m + 1, -(&a * &ExactTerm::sqrt(&BigRational::from_integer((m + 1).into()))));
        }
        v = w;
    }
    v.iter().fold(ExactTerm::zero(), |acc, (&m, a)| {
        acc.checked_add(&(a * &eigenfunction_at_zero(m)))
            .expect("terms of e_n^(k)(0) share one radical class")
    })
}

/// `e_n'(0)` from lowering alone: `c e_m = sqrt(m) e_{m-1}` with `c = (x + D)/sqrt(2)`
/// gives `e_{2j+1}'(0) = sqrt(2(2j+1)) e_{2j}(0)`, and `e_{2j}'(0) = 0` by parity.
pub fn derivative_at_zero_lowering_route(n: u32) -> ExactTerm {
    if n % 2 == 0 {
        return ExactTerm::zero();
    }
    ExactTerm::sqrt(&BigRational::from_integer((2 * n).into())) * eigenfunction_at_zero(n - 1)
}

/// `d^k/dx^k [H_n(x) exp(-x^2/2)]` at `x = 0`, an integer.
///
/// The generating function `sum_n g_n(x) t^n/n! = exp(2xt - t^2 - x^2/2)` gives
/// `sum_n g_n^(k)(0) t^n/n! = exp(-t^2) He_k(2t)`, so each value is a short
/// finite sum. Cost is `O(k)` big-integer operations per call.
pub fn gaussian_hermite_derivative_at_zero(n: u32, k: u32) -> BigInt {
    if (n + k) % 2 == 1 {
        return BigInt::zero();
    }
    let kf = factorial(k);
    let nf = factorial(n);
    let mut acc = BigRational::zero();
    // He_k(2t) = sum_i (-1)^i k! / (i! (k-2i)!) 2^(k-3i) t^(k-2i)
    for i in 0..=k / 2 {
        let s = k - 2 * i;
        if s > n {
            continue;
        }
        let pow = k as i64 - 3 * i as i64;
        let two = if pow >= 0 {
            BigRational::from_integer(BigInt::one() << pow as usize)
        } else {
            BigRational::new(BigInt::one(), BigInt::one() << (-pow) as usize)
        };
        let h = BigRational::new(kf.clone(), factorial(i) * factorial(s)) * two;
        let j = (n - s) / 2;
        let term = h * BigRational::new(nf.clone(), factorial(j));
        let sign = (i + j) % 2 == 1;
        acc = if sign { acc - term } else { acc + term };
    }
    assert!(acc.is_integer(), "g_n^(k)(0) is an integer");
    acc.to_integer()
}

/// Closed form of `sum_n z^n/n! H_n(x) H_n(y)`:
/// `(1 - 4z^2)^(-1/2) exp{ y^2 - (y - 2zx)^2 / (1 - 4z^2) }`.
///
/// The series itself converges only for `|z| < 1/2`; outside the disk this is
/// its analytic continuation, which is what summation arguments at the
/// boundary rely on. The square root is the principal branch.
pub fn mehler_kernel(z: &Complex, x: &Complex, y: &Complex) -> Result<Complex, Error> {
    let p = z.precision().max(x.precision()).max(y.precision());
    let four = Real::from_u64(4, p);
    let w = Complex::one(p) - (z * z).scale(&four);
    if w.is_zero() {
        return Err(Error::MehlerSingular(format!("{:?}", z.re)));
    }
    let d = y - &(z * x).scale(&Real::from_u64(2, p));
    let expo = y * y - &(&d * &d / &w);
    Ok(expo.exp() / w.sqrt())
}

/// Partial sum `sum_{n<N} z^n/n! H_n(x) H_n(y)`.
pub fn mehler_partial_sum(z: &Complex, x: &Complex, y: &Complex, terms: u32) -> Complex {
    let p = z.precision();
    let mut hx = vec![Complex::one(p)];
    let mut hy = vec![Complex::one(p)];
    let two = Real::from_u64(2, p);
    let (tx, ty) = (x.scale(&two), y.scale(&two));
    for k in 0..terms.saturating_sub(1) as usize {
        let kk = Real::from_u64(2 * k as u64, p);
        let nx = &tx * &hx[k] - if k > 0 { hx[k - 1].scale(&kk) } else { Complex::zero(p) };
        let ny = &ty * &hy[k] - if k > 0 { hy[k - 1].scale(&kk) } else { Complex::zero(p) };
        hx.push(nx);
        hy.push(ny);
    }
    let mut zn = Complex::one(p);
    let mut sum = Complex::zero(p);
    for n in 0..terms as usize {
        if n > 0 {
            zn = (&zn * z).scale(&Real::from_u64(n as u64, p).recip());
        }
        sum += &(&zn * &hx[n] * &hy[n]);
    }
    sum
}
