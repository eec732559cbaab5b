//! Gauss–Hermite quadrature at arbitrary precision.
//!
//! Nodes are seeded from the classical asymptotic guesses, polished in `f64`,
//! then refined by Newton's method in full precision on the orthonormal
//! recurrence. This is the independent oracle for closed-form coefficients.

use alloc::vec::Vec;

use num_traits::Float;

use crate::error::Error;
use crate::numeric::{Complex, Real};

/// Change of variable applied before the `exp(-t^2)` rule.
///
/// `Gaussian` (`x = t`) integrates `poly * exp(-x^2/2)` exactly against `e_n`;
/// `Tempered` (`x = sqrt(2) t`) suits integrands of at most exponential
/// growth such as `exp(gamma x)`, `cos(omega x)` and monomials.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureScale {
    Gaussian,
    Tempered,
}

pub struct GaussHermite {
    nodes: Vec<Real>,
    weights: Vec<Real>,
    precision: usize,
}

/// Nonnegative roots of `p_n` in descending order, bracketed by sign changes
/// on a grid finer than the smallest root spacing and bisected in `f64`.
fn initial_guesses(n: usize) -> Vec<f64> {
    let top = Float::sqrt(2.0 * n as f64 + 1.0) + 1.0;
    let steps = 16 * n + 64;
    let h = top / steps as f64;
    let mut roots = Vec::with_capacity(n / 2 + 1);
    let mut prev = (h, sign_f64(n, h));
    for i in 2..=steps {
        let z = h * i as f64;
        let s = sign_f64(n, z);
        if s != prev.1 {
            let (mut lo, mut hi) = (prev.0, z);
            for _ in 0..64 {
                let mid = 0.5 * (lo + hi);
                if sign_f64(n, mid) == prev.1 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        prev = (z, s);
    }
    assert_eq!(roots.len(), n / 2, "bracketed {} of {} positive roots", roots.len(), n / 2);
    roots.reverse();
    if n % 2 == 1 {
        roots.push(0.0);
    }
    roots
}

/// Sign of `p_n(z)`, rescaling the recurrence to stay within `f64` range.
fn sign_f64(n: usize, z: f64) -> bool {
    let mut p1 = 1.0;
    let mut p2 = 0.0;
    for j in 1..=n {
        let jf = j as f64;
        let p3 = p2;
        p2 = p1;
        p1 = z * Float::sqrt(2.0 / jf) * p2 - Float::sqrt((jf - 1.0) / jf) * p3;
        if Float::abs(p1) > 1e200 {
            p1 *= 1e-200;
            p2 *= 1e-200;
        }
    }
    p1 >= 0.0
}

impl GaussHermite {
    /// Builds an `n`-point rule with `p` bits of precision.
    pub fn new(n: usize, p: usize) -> GaussHermite {
        assert!(n >= 2, "at least two nodes");
        let a: Vec<Real> = (1..=n)
            .map(|j| (Real::from_u64(2, p) / Real::from_u64(j as u64, p)).sqrt())
            .collect();
        let b: Vec<Real> = (1..=n)
            .map(|j| (Real::from_u64(j as u64 - 1, p) / Real::from_u64(j as u64, p)).sqrt())
            .collect();
        let p0 = Real::pi(p).sqrt().sqrt().recip();
        let sqrt_2n = Real::from_u64(2 * n as u64, p).sqrt();
        let eval = |z: &Real| -> (Real, Real) {
            let mut p1 = p0.clone();
            let mut p2 = Real::zero(p);
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                p1 = &a[j] * z * &p2 - &b[j] * &p3;
            }
            let pp = &sqrt_2n * &p2;
            (p1, pp)
        };
        let tol = Real::one(p).mul_pow2(-(p as i64) + 16);
        let mut pos_nodes = Vec::new();
        let mut pos_weights = Vec::new();
        for g in initial_guesses(n) {
            let mut z = Real::from_f64(g, p);
            let mut pp = Real::one(p);
            for _ in 0..30 {
                let (p1, d) = eval(&z);
                let dz = &p1 / &d;
                z = &z - &dz;
                pp = d;
                if dz.abs() <= &tol * z.abs().max(Real::one(p)) {
                    let (_, d) = eval(&z);
                    pp = d;
                    break;
                }
            }
            pos_weights.push(Real::from_u64(2, p) / (&pp * &pp));
            pos_nodes.push(z);
        }
        // Guesses run from the largest node down; mirror into ascending order.
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        let m = pos_nodes.len();
        for i in 0..m {
            if n % 2 == 1 && i == m - 1 {
                continue;
            }
            nodes.push(-&pos_nodes[i]);
            weights.push(pos_weights[i].clone());
        }
        for i in (0..m).rev() {
            if n % 2 == 1 && i == m - 1 {
                nodes.push(Real::zero(p));
            } else {
                nodes.push(pos_nodes[i].clone());
            }
            weights.push(pos_weights[i].clone());
        }
        GaussHermite { nodes, weights, precision: p }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    pub fn nodes(&self) -> &[Real] {
        &self.nodes
    }

    pub fn weights(&self) -> &[Real] {
        &self.weights
    }

    /// `sum_i w_i g(t_i)`, approximating `\int exp(-t^2) g(t) dt`.
    pub fn weighted_sum<F>(&self, mut g: F) -> Result<Complex, Error>
    where
        F: FnMut(&Real) -> Result<Complex, Error>,
    {
        let mut acc = Complex::zero(self.precision);
        for (t, w) in self.nodes.iter().zip(&self.weights) {
            let v = g(t)?;
            if !v.is_finite() {
                return Err(Error::NonFinite("quadrature sample"));
            }
            acc += &v.scale(w);
        }
        Ok(acc)
    }

    /// `\int f(x) dx` through the chosen change of variables.
    pub fn integrate<F>(&self, scale: QuadratureScale, mut f: F) -> Result<Complex, Error>
    where
        F: FnMut(&Real) -> Result<Complex, Error>,
    {
        let p = self.precision;
        let s = match scale {
            QuadratureScale::Gaussian => Real::one(p),
            QuadratureScale::Tempered => Real::from_u64(2, p).sqrt(),
        };
        let sum = self.weighted_sum(|t| {
            let x = t * &s;
            Ok(f(&x)?.scale(&(t * t).exp()))
        })?;
        Ok(sum.scale(&s))
    }

    /// `\int f(x) e_n(x) dx`.
    pub fn coefficient<F>(&self, n: usize, scale: QuadratureScale, mut f: F) -> Result<Complex, Error>
    where
        F: FnMut(&Real) -> Result<Complex, Error>,
    {
        let p = self.precision;
        let s = match scale {
            QuadratureScale::Gaussian => Real::one(p),
            QuadratureScale::Tempered => Real::from_u64(2, p).sqrt(),
        };
        let p0 = Real::pi(p).sqrt().sqrt().recip();
        let a: Vec<Real> = (1..=n)
            .map(|j| (Real::from_u64(2, p) / Real::from_u64(j as u64, p)).sqrt())
            .collect();
        let b: Vec<Real> = (1..=n)
            .map(|j| (Real::from_u64(j as u64 - 1, p) / Real::from_u64(j as u64, p)).sqrt())
            .collect();
        let sum = self
            .weighted_sum(|t| {
                let x = t * &s;
                // N_n H_n(x) = e_n(x) exp(x^2/2) by the orthonormal recurrence
                let mut q1 = p0.clone();
                let mut q2 = Real::zero(p);
                for j in 0..n {
                    let q3 = q2;
                    q2 = q1;
                    q1 = &a[j] * &x * &q2 - &b[j] * &q3;
                }
                // exp(t^2) exp(-x^2/2) is 1 for the tempered scale
                let factor = match scale {
                    QuadratureScale::Gaussian => (t * t).mul_pow2(-1).exp(),
                    QuadratureScale::Tempered => Real::one(p),
                };
                let v = f(&x)?;
                if !v.is_finite() {
                    return Err(Error::QuadratureFailure {
                        n,
                        reason: alloc::string::String::from("non-finite sample"),
                    });
                }
                Ok(v.scale(&(q1 * factor)))
            })
            .map_err(|e| match e {
                Error::NonFinite(_) => Error::QuadratureFailure {
                    n,
                    reason: alloc::string::String::from("non-finite sample"),
                },
                other => other,
            })?;
        Ok(sum.scale(&s))
    }
}
