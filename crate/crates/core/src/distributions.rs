//! Symbolic distributions and their Hermite coefficients `<e_n, F>`.
//!
//! Coefficients are produced sequentially in `n`. For the polynomial-times-
//! Gaussian families (`delta^(k)`, `x^p` and their normalized forms) every
//! coefficient reduces to
//! `C * sqrt(n!/2^n) * sum_s poly[s] * sigma^j / j!` with `j = (n - s)/2`,
//! where `poly` and `sigma` come from a generating function; the running
//! factor `sqrt(n!/2^n)` keeps the arithmetic well scaled. Exponential and
//! trigonometric inputs use normalized three-term recurrences instead.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::exact::{ExactTerm, Scalar};
use crate::hermite_core::{factorial, gaussian_hermite_derivative_at_zero, normalization};
use crate::numeric::{Complex, Real};
use crate::quadrature::{GaussHermite, QuadratureScale};
use crate::special_functions::moment_integral;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: u64) -> Parity {
        if n % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    /// Index parity of the coefficients that may be nonzero.
    pub fn offset(self) -> usize {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }
}

type SampleFn = dyn Fn(&Real) -> Complex + Send + Sync;

/// A function sampled pointwise and projected by quadrature.
#[derive(Clone)]
pub struct SampledFunction {
    label: String,
    f: Arc<SampleFn>,
    parity: Option<Parity>,
    scale: QuadratureScale,
}

impl SampledFunction {
    pub fn new<F>(label: &str, scale: QuadratureScale, parity: Option<Parity>, f: F) -> SampledFunction
    where
        F: Fn(&Real) -> Complex + Send + Sync + 'static,
    {
        SampledFunction { label: String::from(label), f: Arc::new(f), parity, scale }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn eval(&self, x: &Real) -> Complex {
        (self.f)(x)
    }

    pub fn scale(&self) -> QuadratureScale {
        self.scale
    }
}

impl PartialEq for SampledFunction {
    fn eq(&self, o: &SampledFunction) -> bool {
        Arc::ptr_eq(&self.f, &o.f) && self.label == o.label
    }
}

impl fmt::Debug for SampledFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "sample<{}>", self.label)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum L2Sample {
    /// Finite list of coefficients `<e_n, f>`, `n = 0, 1, ...`.
    Hermite(Vec<Scalar>),
    Function(SampledFunction),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Distribution {
    DeltaDeriv(u32),
    Monomial(u32),
    /// `phi_n = x^n / sqrt(n!)`
    NormalizedMonomial(u32),
    /// `psi_n = (-1)^n delta^(n) / sqrt(n!)`
    NormalizedDeltaDeriv(u32),
    ExpReal(BigRational),
    CosWave(BigRational),
    SinWave(BigRational),
    L2Sample(L2Sample),
    LinearCombo(Vec<(Scalar, Distribution)>),
}

impl Distribution {
    pub fn delta() -> Distribution {
        Distribution::DeltaDeriv(0)
    }

    pub fn zero() -> Distribution {
        Distribution::LinearCombo(Vec::new())
    }

    /// The Hermite function `e_n` as an L2 sample.
    pub fn hermite(n: usize) -> Distribution {
        let mut v = vec![Scalar::zero(); n + 1];
        v[n] = Scalar::one();
        Distribution::L2Sample(L2Sample::Hermite(v))
    }

    pub fn hermite_coefficients(c: Vec<Scalar>) -> Distribution {
        Distribution::L2Sample(L2Sample::Hermite(c))
    }

    pub fn sampled(f: SampledFunction) -> Distribution {
        Distribution::L2Sample(L2Sample::Function(f))
    }

    /// Flattened, merged linear combination.
    pub fn combo(items: Vec<(Scalar, Distribution)>) -> Distribution {
        let mut flat: Vec<(Scalar, Distribution)> = Vec::new();
        fn push(flat: &mut Vec<(Scalar, Distribution)>, s: Scalar, d: Distribution) {
            if s.is_zero() {
                return;
            }
            if let Distribution::LinearCombo(inner) = d {
                for (t, e) in inner {
                    push(flat, &s * &t, e);
                }
                return;
            }
            for slot in flat.iter_mut() {
                if slot.1 == d {
                    if let Ok(sum) = slot.0.checked_add(&s) {
                        slot.0 = sum;
                        return;
                    }
                }
            }
            flat.push((s, d));
        }
        for (s, d) in items {
            push(&mut flat, s, d);
        }
        flat.retain(|(s, _)| !s.is_zero());
        if flat.len() == 1 && flat[0].0.is_one() {
            return flat.pop().expect("one item").1;
        }
        Distribution::LinearCombo(flat)
    }

    pub fn scaled(self, s: Scalar) -> Distribution {
        Distribution::combo(vec![(s, self)])
    }

    pub fn plus(self, o: Distribution) -> Distribution {
        Distribution::combo(vec![(Scalar::one(), self), (Scalar::one(), o)])
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Distribution::LinearCombo(v) => v.is_empty(),
            Distribution::SinWave(w) => w.is_zero(),
            Distribution::L2Sample(L2Sample::Hermite(c)) => c.iter().all(Scalar::is_zero),
            _ => false,
        }
    }

    /// Parity shared by every nonzero coefficient, when known structurally.
    pub fn parity(&self) -> Option<Parity> {
        match self {
            Distribution::DeltaDeriv(k)
            | Distribution::Monomial(k)
            | Distribution::NormalizedMonomial(k)
            | Distribution::NormalizedDeltaDeriv(k) => Some(Parity::of(*k as u64)),
            Distribution::ExpReal(g) => g.is_zero().then_some(Parity::Even),
            Distribution::CosWave(_) => Some(Parity::Even),
            Distribution::SinWave(_) => Some(Parity::Odd),
            Distribution::L2Sample(L2Sample::Hermite(c)) => {
                let mut seen: Option<Parity> = None;
                for (n, s) in c.iter().enumerate() {
                    if s.is_zero() {
                        continue;
                    }
                    let p = Parity::of(n as u64);
                    match seen {
                        None => seen = Some(p),
                        Some(q) if q != p => return None,
                        _ => {}
                    }
                }
                seen.or(Some(Parity::Even))
            }
            Distribution::L2Sample(L2Sample::Function(f)) => f.parity,
            Distribution::LinearCombo(items) => {
                let mut seen: Option<Parity> = None;
                for (_, d) in items {
                    if d.is_zero() {
                        continue;
                    }
                    let p = d.parity()?;
                    match seen {
                        None => seen = Some(p),
                        Some(q) if q != p => return None,
                        _ => {}
                    }
                }
                seen.or(Some(Parity::Even))
            }
        }
    }

    /// Number of leading coefficients that can be nonzero, when finite.
    pub fn support(&self) -> Option<usize> {
        match self {
            Distribution::L2Sample(L2Sample::Hermite(c)) => Some(c.len()),
            Distribution::LinearCombo(items) => {
                let mut m = 0;
                for (_, d) in items {
                    m = m.max(d.support()?);
                }
                Some(m)
            }
            Distribution::SinWave(w) if w.is_zero() => Some(0),
            _ => None,
        }
    }
}

fn write_rational(f: &mut fmt::Formatter<'_>, q: &BigRational) -> fmt::Result {
    write!(f, "{q}")
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distribution::DeltaDeriv(0) => write!(f, "delta"),
            Distribution::DeltaDeriv(k) => write!(f, "delta^({k})"),
            Distribution::Monomial(p) => write!(f, "x^{p}"),
            Distribution::NormalizedMonomial(n) => write!(f, "phi({n})"),
            Distribution::NormalizedDeltaDeriv(n) => write!(f, "psi({n})"),
            Distribution::ExpReal(g) => {
                write!(f, "exp(")?;
                write_rational(f, g)?;
                write!(f, ")")
            }
            Distribution::CosWave(w) => {
                write!(f, "cos(")?;
                write_rational(f, w)?;
                write!(f, ")")
            }
            Distribution::SinWave(w) => {
                write!(f, "sin(")?;
                write_rational(f, w)?;
                write!(f, ")")
            }
            Distribution::L2Sample(L2Sample::Hermite(c)) => {
                let nonzero: Vec<usize> = (0..c.len()).filter(|&i| !c[i].is_zero()).collect();
                if nonzero.len() == 1 && nonzero[0] == c.len() - 1 && c[nonzero[0]].is_one() {
                    return write!(f, "e({})", nonzero[0]);
                }
                write!(f, "hermite[")?;
                for (i, s) in c.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    if s.is_zero() {
                        write!(f, "0")?;
                    } else {
                        write!(f, "{}", s.render().unwrap_or_else(|| String::from("1")))?;
                    }
                }
                write!(f, "]")
            }
            Distribution::L2Sample(L2Sample::Function(s)) => write!(f, "sample<{}>", s.label),
            Distribution::LinearCombo(items) => {
                if items.is_empty() {
                    return write!(f, "0");
                }
                for (i, (s, d)) in items.iter().enumerate() {
                    let negative = s.is_real() && s.re().is_negative();
                    let shown = if i > 0 && negative { -s.clone() } else { s.clone() };
                    if i > 0 {
                        write!(f, "{}", if negative { " - " } else { " + " })?;
                    }
                    match shown.render() {
                        None => write!(f, "{d}")?,
                        Some(r) => write!(f, "{r}*{d}")?,
                    }
                }
                Ok(())
            }
        }
    }
}

/// Source of coefficients `n -> <e_n, F>`.
pub trait Coefficients {
    fn coeff(&mut self, n: usize) -> Result<Complex, Error>;
    /// Exact value, when the coefficient has a closed form of `ExactTerm` shape.
    fn exact(&mut self, n: usize) -> Option<ExactTerm>;
    fn parity(&self) -> Option<Parity>;
    fn support(&self) -> Option<usize>;
    fn is_zero(&self) -> bool;
    fn precision(&self) -> usize;
}

/// Sequential numeric generator for one distribution.
trait Generator: Send {
    fn next(&mut self) -> Result<Complex, Error>;
}

/// `C * sqrt(n!/2^n) * sum_{s <= n, s = n mod 2} poly[s] sigma^j / j!`, `j = (n-s)/2`.
struct PolyGauss {
    c: Real,
    poly: Vec<Real>,
    sigma_negative: bool,
    n: usize,
    root: Real,
    inv_fact: Vec<Real>,
    p: usize,
}

impl PolyGauss {
    fn new(c: Real, poly: Vec<BigRational>, sigma_negative: bool, p: usize) -> PolyGauss {
        let poly = poly.iter().map(|q| Real::from_rational(q, p)).collect();
        PolyGauss { c, poly, sigma_negative, n: 0, root: Real::one(p), inv_fact: vec![Real::one(p)], p }
    }
}

impl Generator for PolyGauss {
    fn next(&mut self) -> Result<Complex, Error> {
        let n = self.n;
        if n > 0 {
            self.root = &self.root * (Real::from_u64(n as u64, self.p).mul_pow2(-1)).sqrt();
        }
        while self.inv_fact.len() <= n / 2 {
            let j = self.inv_fact.len();
            let v = &self.inv_fact[j - 1] / Real::from_u64(j as u64, self.p);
            self.inv_fact.push(v);
        }
        let mut sum = Real::zero(self.p);
        let mut s = n % 2;
        while s < self.poly.len() && s <= n {
            if !self.poly[s].is_zero() {
                let j = (n - s) / 2;
                let t = &self.poly[s] * &self.inv_fact[j];
                if self.sigma_negative && j % 2 == 1 {
                    sum -= &t;
                } else {
                    sum += &t;
                }
            }
            s += 2;
        }
        self.n += 1;
        Ok(Complex::from_real(&self.c * &self.root * sum))
    }
}

/// Coefficients of `He_k(2t)` (generating function of `delta^(k)`).
fn delta_poly(k: u32) -> Vec<BigRational> {
    let mut poly = vec![BigRational::zero(); k as usize + 1];
    let kf = factorial(k);
    for i in 0..=k / 2 {
        let s = k - 2 * i;
        let pow = k as i64 - 3 * i as i64;
        let two = if pow >= 0 {
            BigRational::from_integer(BigInt::one() << pow as usize)
        } else {
            BigRational::new(BigInt::one(), BigInt::one() << (-pow) as usize)
        };
        let mut h = BigRational::new(kf.clone(), factorial(i) * factorial(s)) * two;
        if i % 2 == 1 {
            h = -h;
        }
        poly[s as usize] = h;
    }
    poly
}

/// Coefficients of `sum_j C(p, j) (2t)^(p-j) m_j` (generating function of `x^p`).
fn monomial_poly(p: u32) -> Vec<BigRational> {
    let mut poly = vec![BigRational::zero(); p as usize + 1];
    let mut j = 0;
    while j <= p {
        let s = p - j;
        let binom = factorial(p) / (factorial(j) * factorial(s));
        let m: BigInt = (1..j).step_by(2).fold(BigInt::one(), |acc, t| acc * t);
        poly[s as usize] = BigRational::from_integer(binom * (BigInt::one() << s as usize) * m);
        j += 2;
    }
    poly
}

/// Normalized recurrence `v_{n+1} = a sqrt(2/(n+1)) v_n + sign * sqrt(n/(n+1)) v_{n-1}`.
struct ThreeTerm {
    c: Real,
    a: Real,
    plus: bool,
    n: usize,
    prev: Real,
    cur: Real,
    /// multiplies `v_n` by `mask(n)`: `None` keeps every index.
    mask: Option<Parity>,
    p: usize,
}

impl Generator for ThreeTerm {
    fn next(&mut self) -> Result<Complex, Error> {
        let n = self.n;
        let out = match self.mask {
            Some(par) if Parity::of(n as u64) != par => Real::zero(self.p),
            Some(_) => {
                // (-1)^{floor(n/2)} for the wave families
                let v = &self.c * &self.cur;
                if (n / 2) % 2 == 1 {
                    -v
                } else {
                    v
                }
            }
            None => &self.c * &self.cur,
        };
        let np1 = Real::from_u64(n as u64 + 1, self.p);
        let lead = &self.a * (Real::from_u64(2, self.p) / &np1).sqrt() * &self.cur;
        let tail = (Real::from_u64(n as u64, self.p) / &np1).sqrt() * &self.prev;
        let next = if self.plus { lead + tail } else { lead - tail };
        self.prev = core::mem::replace(&mut self.cur, next);
        self.n += 1;
        Ok(Complex::from_real(out))
    }
}

struct ListGen {
    items: Vec<Complex>,
    n: usize,
    p: usize,
}

impl Generator for ListGen {
    fn next(&mut self) -> Result<Complex, Error> {
        let v = self.items.get(self.n).cloned().unwrap_or_else(|| Complex::zero(self.p));
        self.n += 1;
        Ok(v)
    }
}

struct QuadGen {
    f: SampledFunction,
    rule: Arc<GaussHermite>,
    n: usize,
}

impl Generator for QuadGen {
    fn next(&mut self) -> Result<Complex, Error> {
        let f = &self.f;
        let v = self.rule.coefficient(self.n, f.scale, |x| Ok(f.eval(x)))?;
        self.n += 1;
        Ok(v)
    }
}

struct ComboGen {
    parts: Vec<(Complex, Box<dyn Generator>)>,
    p: usize,
}

impl Generator for ComboGen {
    fn next(&mut self) -> Result<Complex, Error> {
        let mut acc = Complex::zero(self.p);
        for (s, g) in self.parts.iter_mut() {
            let v = g.next()?;
            acc += &(&*s * &v);
        }
        Ok(acc)
    }
}

fn pi_quarter_inv(p: usize) -> Real {
    Real::pi(p).sqrt().sqrt().recip()
}

fn rational_real(q: &BigRational, p: usize) -> Real {
    Real::from_rational(q, p)
}

fn make_generator(d: &Distribution, p: usize, nodes: usize) -> Box<dyn Generator> {
    let inv_sqrt_fact = |n: u32| Real::from_bigint(&factorial(n), p).sqrt().recip();
    let root_2pi = (Real::pi(p).mul_pow2(1)).sqrt();
    match d {
        Distribution::DeltaDeriv(k) => {
            let c = pi_quarter_inv(p);
            let c = if k % 2 == 1 { -c } else { c };
            Box::new(PolyGauss::new(c, delta_poly(*k), true, p))
        }
        Distribution::NormalizedDeltaDeriv(k) => {
            // (-1)^k from psi and (-1)^k from <e_n, delta^(k)> cancel
            let c = pi_quarter_inv(p) * inv_sqrt_fact(*k);
            Box::new(PolyGauss::new(c, delta_poly(*k), true, p))
        }
        Distribution::Monomial(k) => {
            let c = pi_quarter_inv(p) * root_2pi;
            Box::new(PolyGauss::new(c, monomial_poly(*k), false, p))
        }
        Distribution::NormalizedMonomial(k) => {
            let c = pi_quarter_inv(p) * root_2pi * inv_sqrt_fact(*k);
            Box::new(PolyGauss::new(c, monomial_poly(*k), false, p))
        }
        Distribution::ExpReal(g) => {
            // <e_n, e^{gx}> = N_n sqrt(2 pi) i^n H_n(-i g) e^{g^2/2};
            // v_n = i^n H_n(-i g) / sqrt(2^n n!) obeys the `plus` recurrence.
            let gr = rational_real(g, p);
            let c = pi_quarter_inv(p) * root_2pi * (&gr * &gr).mul_pow2(-1).exp();
            Box::new(ThreeTerm { c, a: gr, plus: true, n: 0, prev: Real::zero(p), cur: Real::one(p), mask: None, p })
        }
        Distribution::CosWave(w) | Distribution::SinWave(w) => {
            // <e_n, e^{iwx}> = N_n sqrt(2 pi) i^n e^{-w^2/2} H_n(w)
            let wr = rational_real(w, p);
            let c = pi_quarter_inv(p) * root_2pi * (-(&wr * &wr).mul_pow2(-1)).exp();
            let mask = if matches!(d, Distribution::CosWave(_)) { Parity::Even } else { Parity::Odd };
            Box::new(ThreeTerm { c, a: wr, plus: false, n: 0, prev: Real::zero(p), cur: Real::one(p), mask: Some(mask), p })
        }
        Distribution::L2Sample(L2Sample::Hermite(c)) => {
            Box::new(ListGen { items: c.iter().map(|s| s.to_complex(p)).collect(), n: 0, p })
        }
        Distribution::L2Sample(L2Sample::Function(f)) => {
            Box::new(QuadGen { f: f.clone(), rule: Arc::new(GaussHermite::new(nodes, p)), n: 0 })
        }
        Distribution::LinearCombo(items) => Box::new(ComboGen {
            parts: items
                .iter()
                .map(|(s, d)| (s.to_complex(p), make_generator(d, p, nodes)))
                .collect(),
            p,
        }),
    }
}

/// Exact `<e_n, F>` when `F` has a closed form of `ExactTerm` shape.
pub fn exact_coeff(d: &Distribution, n: usize) -> Option<ExactTerm> {
    let n32 = u32::try_from(n).ok()?;
    let inv_sqrt_fact = |k: u32| ExactTerm::sqrt(&BigRational::new(BigInt::one(), factorial(k)));
    match d {
        Distribution::DeltaDeriv(k) => {
            let v = normalization(n32) * ExactTerm::from_integer(gaussian_hermite_derivative_at_zero(n32, *k));
            Some(if k % 2 == 1 { -v } else { v })
        }
        Distribution::NormalizedDeltaDeriv(k) => Some(
            normalization(n32)
                * ExactTerm::from_integer(gaussian_hermite_derivative_at_zero(n32, *k))
                * inv_sqrt_fact(*k),
        ),
        Distribution::Monomial(k) => Some(normalization(n32) * moment_integral(n32, *k).ok()?),
        Distribution::NormalizedMonomial(k) => {
            Some(normalization(n32) * moment_integral(n32, *k).ok()? * inv_sqrt_fact(*k))
        }
        Distribution::ExpReal(g) if g.is_zero() => exact_coeff(&Distribution::Monomial(0), n),
        Distribution::CosWave(w) if w.is_zero() => exact_coeff(&Distribution::Monomial(0), n),
        Distribution::SinWave(w) if w.is_zero() => Some(ExactTerm::zero()),
        Distribution::L2Sample(L2Sample::Hermite(c)) => match c.get(n) {
            Some(s) => s.to_exact(),
            None => Some(ExactTerm::zero()),
        },
        Distribution::LinearCombo(items) => {
            let mut acc = ExactTerm::zero();
            for (s, d) in items {
                let v = s.to_exact()? * exact_coeff(d, n)?;
                acc = acc.checked_add(&v).ok()?;
            }
            Some(acc)
        }
        _ => None,
    }
}

/// Memoized coefficient sequence of a distribution at a fixed precision.
pub struct CoeffSequence {
    dist: Distribution,
    p: usize,
    nodes: usize,
    memo: Vec<Complex>,
    cap: Option<usize>,
    generator: Box<dyn Generator>,
    next_index: usize,
}

impl CoeffSequence {
    /// Default node count for quadrature-backed samples.
    pub const DEFAULT_NODES: usize = 200;

    pub fn new(dist: Distribution, p: usize) -> CoeffSequence {
        CoeffSequence::with_options(dist, p, CoeffSequence::DEFAULT_NODES, None)
    }

    /// `cap` bounds the number of memoized entries; later entries are
    /// recomputed on demand.
    pub fn with_options(dist: Distribution, p: usize, nodes: usize, cap: Option<usize>) -> CoeffSequence {
        let generator = make_generator(&dist, p, nodes);
        CoeffSequence { dist, p, nodes, memo: Vec::new(), cap, generator, next_index: 0 }
    }

    pub fn distribution(&self) -> &Distribution {
        &self.dist
    }

    fn advance(&mut self) -> Result<Complex, Error> {
        let v = self.generator.next()?;
        if !v.is_finite() {
            return Err(Error::NonFinite("coefficient"));
        }
        self.next_index += 1;
        Ok(v)
    }
}

impl Coefficients for CoeffSequence {
    fn coeff(&mut self, n: usize) -> Result<Complex, Error> {
        if n < self.memo.len() {
            return Ok(self.memo[n].clone());
        }
        if n < self.next_index {
            self.generator = make_generator(&self.dist, self.p, self.nodes);
            self.next_index = 0;
        }
        loop {
            let idx = self.next_index;
            let v = self.advance()?;
            let room = self.cap.is_none_or(|c| self.memo.len() < c);
            if idx == self.memo.len() && room {
                self.memo.push(v.clone());
            }
            if idx == n {
                return Ok(v);
            }
        }
    }

    fn exact(&mut self, n: usize) -> Option<ExactTerm> {
        exact_coeff(&self.dist, n)
    }

    fn parity(&self) -> Option<Parity> {
        self.dist.parity()
    }

    fn support(&self) -> Option<usize> {
        match &self.dist {
            // Quadrature cannot resolve indices beyond half the node count.
            Distribution::L2Sample(L2Sample::Function(_)) => Some(self.nodes / 2),
            d => d.support(),
        }
    }

    fn is_zero(&self) -> bool {
        self.dist.is_zero()
    }

    fn precision(&self) -> usize {
        self.p
    }
}

/// `<e_n, F>` at `p` bits.
pub fn coeff(f: &Distribution, n: usize, p: usize) -> Result<Complex, Error> {
    CoeffSequence::new(f.clone(), p).coeff(n)
}

/// Gauss–Hermite approximation of `\int f(x) e_n(x) dx`.
pub fn quadrature_coeff<F>(f: F, n: usize, nodes: usize, scale: QuadratureScale, p: usize) -> Result<Complex, Error>
where
    F: Fn(&Real) -> Complex,
{
    GaussHermite::new(nodes, p).coefficient(n, scale, |x| Ok(f(x)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeakOp {
    /// multiplication by `x`
    MulX,
    /// `d/dx`
    Deriv,
}

fn sqrt_int(k: u32) -> Scalar {
    Scalar::sqrt(&BigRational::from_integer(k.into())).expect("non-negative")
}

fn int_scalar(k: i64) -> Scalar {
    Scalar::real(BigRational::from_integer(k.into()))
}

/// Symbolic action of `x` or `d/dx` on a distribution.
pub fn weak_apply(op: WeakOp, f: &Distribution) -> Result<Distribution, Error> {
    use Distribution as D;
    let out = match (op, f) {
        (WeakOp::Deriv, D::DeltaDeriv(k)) => D::DeltaDeriv(k + 1),
        (WeakOp::MulX, D::DeltaDeriv(0)) => D::zero(),
        (WeakOp::MulX, D::DeltaDeriv(k)) => D::DeltaDeriv(k - 1).scaled(int_scalar(-(*k as i64))),
        (WeakOp::Deriv, D::Monomial(0)) => D::zero(),
        (WeakOp::Deriv, D::Monomial(k)) => D::Monomial(k - 1).scaled(int_scalar(*k as i64)),
        (WeakOp::MulX, D::Monomial(k)) => D::Monomial(k + 1),
        // phi_k' = sqrt(k) phi_{k-1};  x phi_k = sqrt(k+1) phi_{k+1}
        (WeakOp::Deriv, D::NormalizedMonomial(0)) => D::zero(),
        (WeakOp::Deriv, D::NormalizedMonomial(k)) => D::NormalizedMonomial(k - 1).scaled(sqrt_int(*k)),
        (WeakOp::MulX, D::NormalizedMonomial(k)) => D::NormalizedMonomial(k + 1).scaled(sqrt_int(k + 1)),
        // psi_k' = -sqrt(k+1) psi_{k+1};  x psi_k = sqrt(k) psi_{k-1}
        (WeakOp::Deriv, D::NormalizedDeltaDeriv(k)) => {
            D::NormalizedDeltaDeriv(k + 1).scaled(-sqrt_int(k + 1))
        }
        (WeakOp::MulX, D::NormalizedDeltaDeriv(0)) => D::zero(),
        (WeakOp::MulX, D::NormalizedDeltaDeriv(k)) => D::NormalizedDeltaDeriv(k - 1).scaled(sqrt_int(*k)),
        (WeakOp::Deriv, D::ExpReal(g)) => D::ExpReal(g.clone()).scaled(Scalar::real(g.clone())),
        (WeakOp::Deriv, D::CosWave(w)) => D::SinWave(w.clone()).scaled(Scalar::real(-w.clone())),
        (WeakOp::Deriv, D::SinWave(w)) => D::CosWave(w.clone()).scaled(Scalar::real(w.clone())),
        (WeakOp::MulX, D::ExpReal(g)) if g.is_zero() => D::Monomial(1),
        (_, D::LinearCombo(items)) => {
            let mut out = Vec::with_capacity(items.len());
            for (s, d) in items {
                out.push((s.clone(), weak_apply(op, d)?));
            }
            D::combo(out)
        }
        (op, other) => {
            return Err(Error::Unsupported(format!("{op:?} applied to {other}")));
        }
    };
    Ok(out)
}
