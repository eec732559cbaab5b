//! Half-integer Gamma values, terminating `2F1` sums and the moment integrals
//! `I_k(p) = \int x^p exp(-x^2/2) H_k(x) dx`, all exact.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::Error;
use crate::exact::ExactTerm;
use crate::hermite_core::factorial;

/// `Gamma(j + 1/2) = (2j)! sqrt(pi) / (4^j j!)`.
pub fn gamma_half_integer(j: u32) -> ExactTerm {
    let q = BigRational::new(factorial(2 * j), factorial(j) << (2 * j as usize));
    ExactTerm::from_rational(q) * ExactTerm::pi_pow_quarters(2)
}

/// Rational part of `Gamma(j + 1/2) / sqrt(pi)`.
pub fn gamma_half_integer_rational(j: u32) -> BigRational {
    BigRational::new(factorial(2 * j), factorial(j) << (2 * j as usize))
}

/// `F(-j, a; c; z) = sum_{i=0}^{j} (-j)_i (a)_i / ((c)_i i!) z^i`.
pub fn gauss_2f1_terminating(
    j: u32,
    a: &BigRational,
    c: &BigRational,
    z: &BigRational,
) -> Result<BigRational, Error> {
    let mut sum = BigRational::one();
    let mut term = BigRational::one();
    for i in 0..j {
        let ci = c + BigRational::from_integer(i.into());
        if ci.is_zero() {
            return Err(Error::HypergeometricPole(format!("{c}")));
        }
        let ii = BigRational::from_integer(i.into());
        let mj = BigRational::from_integer(BigInt::from(i) - BigInt::from(j));
        term = term * mj * (a + &ii) * z / (ci * (ii + BigRational::one()));
        sum += &term;
    }
    Ok(sum)
}

/// Successive values `F(-j, a; c; z)` for `j = 0, 1, 2, ...` from the
/// contiguous relation
/// `(c+j) f_{j+1} = (2j + c - (a+j) z) f_j + j (z-1) f_{j-1}`.
pub struct Terminating2F1 {
    a: BigRational,
    c: BigRational,
    z: BigRational,
    j: u32,
    prev: BigRational,
    cur: BigRational,
}

impl Terminating2F1 {
    pub fn new(a: BigRational, c: BigRational, z: BigRational) -> Terminating2F1 {
        Terminating2F1 { a, c, z, j: 0, prev: BigRational::zero(), cur: BigRational::one() }
    }
}

impl Iterator for Terminating2F1 {
    type Item = Result<BigRational, Error>;

    fn next(&mut self) -> Option<Self::Item> {
        let out = self.cur.clone();
        let jr = BigRational::from_integer(self.j.into());
        let denom = &self.c + &jr;
        if denom.is_zero() {
            return Some(Err(Error::HypergeometricPole(format!("{}", self.c))));
        }
        let two_j = &jr + &jr;
        let lead = (two_j + &self.c - (&self.a + &jr) * &self.z) * &self.cur;
        let tail = jr * (&self.z - BigRational::one()) * &self.prev;
        let next = (lead + tail) / denom;
        self.prev = core::mem::replace(&mut self.cur, next);
        self.j += 1;
        Some(Ok(out))
    }
}

fn half(n: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(2))
}

/// `2^(h/2)` exactly.
fn pow2_half(h: i64) -> ExactTerm {
    let whole = h.div_euclid(2);
    let q = if whole >= 0 {
        BigRational::from_integer(BigInt::one() << whole as usize)
    } else {
        BigRational::new(BigInt::one(), BigInt::one() << (-whole) as usize)
    };
    let t = ExactTerm::from_rational(q);
    if h.rem_euclid(2) == 1 {
        t * ExactTerm::sqrt(&BigRational::from_integer(2.into()))
    } else {
        t
    }
}

/// `I_k(p)` from the half-line tables for `\int_0^\infty e^{-2 alpha x^2} x^nu H_k dx`
/// at `alpha = 1/4`, doubled by parity:
///
/// `I_{2r}(nu)   = (-1)^r 2^(2r + 1/2 + nu/2) / sqrt(pi) Gamma((nu+1)/2) Gamma(r+1/2) F(-r, (nu+1)/2; 1/2; 2)`
/// `I_{2r+1}(nu) = (-1)^r 2^(2r + 3 + nu/2)   / sqrt(pi) Gamma(nu/2+1)   Gamma(r+3/2) F(-r, nu/2+1; 3/2; 2)`
pub fn moment_integral_closed_form(k: u32, p: u32) -> ExactTerm {
    if (k + p) % 2 == 1 {
        return ExactTerm::zero();
    }
    let two = BigRational::from_integer(2.into());
    let r = k / 2;
    let sign = if r % 2 == 1 { -ExactTerm::one() } else { ExactTerm::one() };
    let inv_sqrt_pi = ExactTerm::pi_pow_quarters(-2);
    if k % 2 == 0 {
        let f = gauss_2f1_terminating(r, &half(p as i64 + 1), &half(1), &two)
            .expect("c = 1/2 is never a pole");
        sign * pow2_half(4 * r as i64 + 1 + p as i64)
            * inv_sqrt_pi
            * gamma_half_integer(p / 2)
            * gamma_half_integer(r)
            * ExactTerm::from_rational(f)
    } else {
        let f = gauss_2f1_terminating(r, &half(p as i64 + 2), &half(3), &two)
            .expect("c = 3/2 is never a pole");
        sign * pow2_half(4 * r as i64 + 6 + p as i64)
            * inv_sqrt_pi
            * gamma_half_integer(p.div_ceil(2))
            * gamma_half_integer(r + 1)
            * ExactTerm::from_rational(f)
    }
}

/// `I_k(p) / sqrt(2 pi)` from integration by parts:
/// `I_{k+1}(p) = 2 I_k(p+1) - 2k I_{k-1}(p)`, `I_0(p) = (p-1)!! sqrt(2 pi)` for even `p`.
pub fn moment_integral_recurrence(k: u32, p: u32) -> BigInt {
    fn go(k: u32, p: u32, memo: &mut BTreeMap<(u32, u32), BigInt>) -> BigInt {
        if (k + p) % 2 == 1 {
            return BigInt::zero();
        }
        if let Some(v) = memo.get(&(k, p)) {
            return v.clone();
        }
        let v = if k == 0 {
            (1..p).step_by(2).fold(BigInt::one(), |acc, j| acc * j)
        } else {
            let a = go(k - 1, p + 1, memo) * 2;
            let b = if k >= 2 { go(k - 2, p, memo) * (2 * (k - 1)) } else { BigInt::zero() };
            a - b
        };
        memo.insert((k, p), v.clone());
        v
    }
    go(k, p, &mut BTreeMap::new())
}

/// `I_k(p) / sqrt(2 pi)` from the generating function
/// `sum_k I_k(p) t^k / k! = sqrt(2 pi) e^{t^2} sum_j C(p, j) (2t)^(p-j) m_j`,
/// `m_j = (j-1)!!` for even `j`. Costs `O(p)` per value, so it is the route
/// used when long runs of coefficients are needed.
pub fn moment_integral_scaled(k: u32, p: u32) -> BigInt {
    if (k + p) % 2 == 1 {
        return BigInt::zero();
    }
    let kf = factorial(k);
    let mut acc = BigInt::zero();
    // coefficient of t^s in the polynomial part: s = p - j, j even
    let mut j = 0;
    while j <= p {
        let s = p - j;
        if s <= k {
            let binom = factorial(p) / (factorial(j) * factorial(s));
            let m: BigInt = (1..j).step_by(2).fold(BigInt::one(), |acc, t| acc * t);
            let poly = binom * (BigInt::one() << s as usize) * m;
            acc += poly * &kf / factorial((k - s) / 2);
        }
        j += 2;
    }
    acc
}

/// `I_k(p)` exactly, from the closed form, cross-checked against the
/// generating-function sum (the recurrence is the slower third route).
pub fn moment_integral(k: u32, p: u32) -> Result<ExactTerm, Error> {
    let closed = moment_integral_closed_form(k, p);
    let rec = moment_integral_scaled(k, p);
    let root_2pi = ExactTerm::sqrt(&BigRational::from_integer(2.into())) * ExactTerm::pi_pow_quarters(2);
    let rec_term = ExactTerm::from_integer(rec.clone()) * root_2pi;
    if closed != rec_term {
        return Err(Error::MomentMismatch {
            k,
            p,
            closed: format!("{closed}"),
            recurrence: format!("{rec_term}"),
        });
    }
    Ok(closed)
}

/// `(a)_i` for rational `a`.
pub fn pochhammer(a: &BigRational, i: u32) -> BigRational {
    (0..i).fold(BigRational::one(), |acc, t| acc * (a + BigRational::from_integer(t.into())))
}

/// All `F(-r, a; c; z)` for `r < count`.
pub fn terminating_2f1_table(
    count: usize,
    a: BigRational,
    c: BigRational,
    z: BigRational,
) -> Result<Vec<BigRational>, Error> {
    Terminating2F1::new(a, c, z).take(count).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rational};
    use crate::numeric::{Precision, Real};

    #[test]
    fn gamma_examples_and_recurrence() {
        assert_eq!(gamma_half_integer(0), ExactTerm::pi_pow_quarters(2));
        assert_eq!(
            gamma_half_integer(1),
            ExactTerm::from_rational(rational(1, 2)) * ExactTerm::pi_pow_quarters(2)
        );
        assert_eq!(
            gamma_half_integer(2),
            ExactTerm::from_rational(rational(3, 4)) * ExactTerm::pi_pow_quarters(2)
        );
        for j in 0..40u32 {
            let step = ExactTerm::from_rational(rational(2 * j as i64 + 1, 2));
            assert_eq!(gamma_half_integer(j + 1), step * gamma_half_integer(j));
        }
    }

    #[test]
    fn hypergeometric_examples() {
        let (a, c, z) = (rational(1, 2), rational(1, 2), int(2));
        for j in 0..30 {
            let want = if j % 2 == 0 { int(1) } else { int(-1) };
            assert_eq!(gauss_2f1_terminating(j, &a, &c, &z).unwrap(), want);
        }
        assert_eq!(gauss_2f1_terminating(0, &int(7), &int(3), &int(5)).unwrap(), int(1));
        assert_eq!(gauss_2f1_terminating(1, &rational(3, 2), &c, &z).unwrap(), int(-5));
        assert!(matches!(
            gauss_2f1_terminating(3, &int(1), &int(-1), &int(1)),
            Err(Error::HypergeometricPole(_))
        ));
    }

    #[test]
    fn hypergeometric_recurrence_matches_sum() {
        for (a, c) in [(rational(5, 2), rational(1, 2)), (rational(7, 2), rational(3, 2)), (int(3), rational(3, 2))] {
            let table = terminating_2f1_table(40, a.clone(), c.clone(), int(2)).unwrap();
            for (j, v) in table.iter().enumerate() {
                assert_eq!(v, &gauss_2f1_terminating(j as u32, &a, &c, &int(2)).unwrap());
            }
        }
    }

    #[test]
    fn hypergeometric_against_floating_sum() {
        // Independent path: Gamma-ratio form of each term evaluated in floating point.
        let p = Precision::new(200).unwrap().working_bits();
        let (a, c, z) = (rational(9, 2), rational(1, 2), int(2));
        for j in [5u32, 17, 33] {
            let exact = gauss_2f1_terminating(j, &a, &c, &z).unwrap();
            let mut sum = Real::zero(p);
            for i in 0..=j {
                let num = pochhammer(&BigRational::from_integer(-BigInt::from(j)), i) * pochhammer(&a, i);
                let den = pochhammer(&c, i) * BigRational::from_integer(factorial(i));
                let t = Real::from_rational(&num, p) / Real::from_rational(&den, p)
                    * Real::from_u64(2, p).powi(i);
                sum += &t;
            }
            let diff = (sum - Real::from_rational(&exact, p)).abs();
            assert!(diff < Real::parse("1e-180", p).unwrap());
        }
    }

    #[test]
    fn moment_examples() {
        let root_2pi = ExactTerm::sqrt(&int(2)) * ExactTerm::pi_pow_quarters(2);
        assert_eq!(moment_integral(1, 0).unwrap(), ExactTerm::zero());
        assert_eq!(moment_integral(0, 0).unwrap(), root_2pi);
        assert_eq!(moment_integral(1, 1).unwrap(), ExactTerm::from_integer(2) * root_2pi);
    }

    #[test]
    fn moment_routes_agree() {
        for k in 0..=30 {
            for p in 0..=30 {
                let closed = moment_integral(k, p).unwrap_or_else(|e| panic!("{e}"));
                let scaled = moment_integral_scaled(k, p);
                let root_2pi = ExactTerm::sqrt(&int(2)) * ExactTerm::pi_pow_quarters(2);
                assert_eq!(closed, ExactTerm::from_integer(scaled) * root_2pi, "k = {k}, p = {p}");
            }
        }
    }
}
