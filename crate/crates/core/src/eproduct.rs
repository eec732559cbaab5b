//! Assembly and classification of e-product series.
//!
//! A pairing is reduced to a stream of terms `t_l` (Hermite indices of the
//! known parity only) and pushed through a fixed pipeline: parity, finite
//! support, ratio test, stabilization, Raabe, Abel. The first stage that
//! reaches a verdict decides the status.

use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::distributions::{exact_coeff, CoeffSequence, Coefficients, Distribution};
use crate::error::Error;
use crate::exact::ExactTerm;
use crate::hermite_core::factorial;
use crate::numeric::{Complex, Precision, Real};
use crate::special_functions::{gamma_half_integer_rational, gauss_2f1_terminating, Terminating2F1};
use crate::summation::{abel_sum, raabe_test, AbelConfig, AbelSum, RaabeEstimate, TermSource};

/// First level of the Abel ladder `r_k = 1 - 2^-k`.
pub const FIRST_ABEL_LEVEL: u32 = 4;

/// Terms examined before any verdict is attempted.
const INITIAL_WINDOW: usize = 256;
/// Terms inspected by the ratio and stabilization tests.
const TAIL: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct SummationConfig {
    pub precision: Precision,
    /// Budget of series terms (after parity compression).
    pub max_terms: usize,
    /// Relative tolerance.
    pub tolerance: f64,
    /// Last Abel level `K`.
    pub abel_levels: u32,
    pub extrapolation_depth: usize,
    pub divergence_margin: f64,
    pub partial_sum_cap: f64,
    /// Terms allowed inside one Abel mean `A(r_k)`.
    pub max_inner_terms: usize,
    /// Gauss–Hermite nodes for sampled L2 functions.
    pub quadrature_nodes: usize,
}

impl Default for SummationConfig {
    fn default() -> Self {
        SummationConfig {
            precision: Precision::default(),
            max_terms: 4096,
            tolerance: 1e-30,
            abel_levels: 20,
            extrapolation_depth: 6,
            divergence_margin: 0.1,
            partial_sum_cap: 1e100,
            max_inner_terms: 600,
            quadrature_nodes: CoeffSequence::DEFAULT_NODES,
        }
    }
}

impl SummationConfig {
    pub fn validate(&self) -> Result<(), Error> {
        let bad = |m: &str| Err(Error::InvalidArgument(String::from(m)));
        if self.max_terms < 16 {
            return bad("max_terms must be at least 16");
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return bad("tolerance must be positive");
        }
        if self.abel_levels < 6 || self.abel_levels < FIRST_ABEL_LEVEL + self.extrapolation_depth as u32 {
            return bad("abel_levels must be at least 6 and exceed the extrapolation depth");
        }
        if !(self.divergence_margin > 0.0 && self.divergence_margin < 1.0) {
            return bad("divergence_margin must lie in (0, 1)");
        }
        if !(self.partial_sum_cap > 1.0) {
            return bad("partial_sum_cap must exceed 1");
        }
        if self.quadrature_nodes < 2 {
            return bad("quadrature_nodes must be at least 2");
        }
        Ok(())
    }

    fn bits(&self) -> usize {
        self.precision.working_bits()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Status {
    ZeroByParity,
    AbsolutelyConvergent,
    Convergent,
    Divergent,
    AbelSummable,
    Inconclusive,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::ZeroByParity => "ZeroByParity",
            Status::AbsolutelyConvergent => "AbsolutelyConvergent",
            Status::Convergent => "Convergent",
            Status::Divergent => "Divergent",
            Status::AbelSummable => "AbelSummable",
            Status::Inconclusive => "Inconclusive",
        }
    }

    /// Whether a value accompanies this status.
    pub fn has_value(self) -> bool {
        !matches!(self, Status::Divergent | Status::Inconclusive)
    }
}

impl core::fmt::Display for Status {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Default)]
pub struct Diagnostics {
    /// `(l, S_l)` over the examined window, `l` counting series terms.
    pub partial_sums: Vec<(usize, Complex)>,
    pub ratio_estimate: Option<Real>,
    pub raabe: Option<RaabeEstimate>,
    pub abel: Option<AbelSum>,
    /// Series terms evaluated, Abel means included.
    pub n_terms_used: usize,
    pub low_confidence: bool,
    /// Exact factor multiplying the summed series, when one was split off.
    pub prefactor: Option<ExactTerm>,
}

#[derive(Debug, Clone)]
pub struct EProductResult {
    pub status: Status,
    pub value: Option<Complex>,
    /// Exact value when every term had a closed form.
    pub exact_value: Option<ExactTerm>,
    pub diagnostics: Diagnostics,
}

impl EProductResult {
    fn zero_by_parity(p: usize) -> EProductResult {
        EProductResult {
            status: Status::ZeroByParity,
            value: Some(Complex::zero(p)),
            exact_value: Some(ExactTerm::zero()),
            diagnostics: Diagnostics::default(),
        }
    }

    fn scaled(mut self, k: &ExactTerm, p: usize) -> EProductResult {
        let kr = k.to_real(p);
        self.value = self.value.map(|v| v.scale(&kr));
        self.exact_value = self.exact_value.map(|v| &v * k);
        for (_, s) in &mut self.diagnostics.partial_sums {
            *s = s.scale(&kr);
        }
        self.diagnostics.prefactor = Some(k.clone());
        self
    }
}

/// `t_l = conj(<e_n, F>) <e_n, G>` at `n = offset + stride * l`, carrying `r^n`.
struct PairTerms<'a> {
    f: &'a mut dyn Coefficients,
    g: &'a mut dyn Coefficients,
    offset: usize,
    stride: usize,
}

impl TermSource for PairTerms<'_> {
    fn term(&mut self, l: usize) -> Result<Option<(u64, Complex)>, Error> {
        let n = self.offset + self.stride * l;
        let t = self.f.coeff(n)?.conj() * self.g.coeff(n)?;
        Ok(Some((n as u64, t)))
    }
}

/// Replays cached terms before asking the source for more.
struct Cached<'a> {
    src: &'a mut dyn TermSource,
    terms: &'a mut Vec<(u64, Complex)>,
}

impl TermSource for Cached<'_> {
    fn term(&mut self, l: usize) -> Result<Option<(u64, Complex)>, Error> {
        while self.terms.len() <= l {
            match self.src.term(self.terms.len())? {
                Some(t) => self.terms.push(t),
                None => return Ok(None),
            }
        }
        Ok(Some(self.terms[l].clone()))
    }
}

fn rel_scale(v: &Complex) -> Real {
    v.abs().max(Real::one(v.precision()))
}

/// Running state of one classification.
struct Run<'a> {
    src: &'a mut dyn TermSource,
    terms: Vec<(u64, Complex)>,
    sums: Vec<Complex>,
    ended: bool,
    p: usize,
}

impl Run<'_> {
    fn extend_to(&mut self, len: usize) -> Result<(), Error> {
        while !self.ended && self.terms.len() < len {
            match self.src.term(self.terms.len())? {
                Some(t) => {
                    let prev = self.sums.last().cloned().unwrap_or_else(|| Complex::zero(self.p));
                    self.sums.push(prev + &t.1);
                    self.terms.push(t);
                }
                None => self.ended = true,
            }
        }
        Ok(())
    }

    fn last_sum(&self) -> Complex {
        self.sums.last().cloned().unwrap_or_else(|| Complex::zero(self.p))
    }

    /// Largest ratio `|t_{l+1} / t_l|` over the tail, skipping zero terms.
    fn ratio_estimate(&self) -> Option<Real> {
        let start = self.terms.len().saturating_sub(TAIL);
        let tail: Vec<Real> = self.terms[start..].iter().map(|(_, t)| t.abs()).filter(|a| !a.is_zero()).collect();
        if tail.len() < TAIL / 2 {
            return None;
        }
        tail.windows(2).map(|w| &w[1] / &w[0]).reduce(Real::max)
    }

    fn stabilized(&self, tol: &Real) -> bool {
        let n = self.terms.len();
        if n < 2 * TAIL {
            return false;
        }
        let bound = tol * &rel_scale(&self.last_sum());
        let small = self.terms[n - TAIL..].iter().all(|(_, t)| t.abs() <= bound);
        small && (&self.sums[n - 1] - &self.sums[n - 1 - TAIL]).abs() <= bound
    }

    /// Start of the longest suffix of real, nonzero terms of one sign.
    fn single_signed_from(&self) -> Option<usize> {
        let n = self.terms.len();
        let real_sign = |t: &Complex| -> Option<bool> {
            if t.re.is_zero() || t.im.abs() > t.re.abs().mul_pow2(-(self.p as i64) / 2) {
                None
            } else {
                Some(t.re.is_negative())
            }
        };
        let want = real_sign(&self.terms.last()?.1)?;
        let mut start = n;
        while start > 0 && real_sign(&self.terms[start - 1].1) == Some(want) {
            start -= 1;
        }
        (n - start >= 32 && start <= n / 2).then_some(start)
    }

    fn raabe(&self, start: usize) -> Result<RaabeEstimate, Error> {
        let mags: Vec<Real> = self.terms[start..].iter().map(|(_, t)| t.re.abs()).collect();
        raabe_test(&mags, start.max(1))
    }

    fn diagnostics(&self) -> Diagnostics {
        Diagnostics {
            partial_sums: self.sums.iter().cloned().enumerate().collect(),
            n_terms_used: self.terms.len(),
            ..Diagnostics::default()
        }
    }
}

/// Runs the ratio, stabilization, Raabe and Abel stages on a term stream.
fn classify_terms(src: &mut dyn TermSource, cfg: &SummationConfig) -> Result<EProductResult, Error> {
    let p = cfg.bits();
    let tol = Real::from_f64(cfg.tolerance, p);
    let one = Real::one(p);
    let margin = Real::from_f64(cfg.divergence_margin, p);
    let limit = cfg.max_terms;
    let mut run = Run { src, terms: Vec::new(), sums: Vec::new(), ended: false, p };
    run.extend_to(INITIAL_WINDOW.min(limit))?;

    let finish = |run: &Run<'_>, status: Status, value: Option<Complex>, d: Diagnostics| EProductResult {
        status,
        value,
        exact_value: None,
        diagnostics: Diagnostics { n_terms_used: d.n_terms_used.max(run.terms.len()), ..d },
    };

    if run.ended {
        let d = run.diagnostics();
        return Ok(finish(&run, Status::AbsolutelyConvergent, Some(run.last_sum()), d));
    }

    let ratio = run.ratio_estimate();
    if let Some(q) = ratio.clone().filter(|q| *q < &one - &margin) {
        loop {
            let (_, last) = run.terms.last().expect("window is nonempty");
            let tail = last.abs() * &q / (&one - &q);
            if tail <= &tol * &rel_scale(&run.last_sum()) || run.ended {
                let mut d = run.diagnostics();
                d.ratio_estimate = Some(q);
                return Ok(finish(&run, Status::AbsolutelyConvergent, Some(run.last_sum()), d));
            }
            if run.terms.len() >= limit {
                break;
            }
            let next = (run.terms.len() + 64).min(limit);
            run.extend_to(next)?;
        }
    }

    if run.stabilized(&tol) {
        let mut d = run.diagnostics();
        d.ratio_estimate = ratio;
        return Ok(finish(&run, Status::Convergent, Some(run.last_sum()), d));
    }

    let mut raabe = None;
    let mut certified_convergent = false;
    if run.single_signed_from().is_some() {
        // Widen the window until the estimate leaves the undecided band or
        // the budget runs out.
        loop {
            let Some(start) = run.single_signed_from() else { break };
            let est = run.raabe(start)?;
            let decided_low = est.estimate < &one - &margin;
            let decided_high = est.estimate > &one + &margin;
            raabe = Some(est);
            if decided_low {
                let mut d = run.diagnostics();
                d.ratio_estimate = ratio;
                d.raabe = raabe;
                return Ok(finish(&run, Status::Divergent, None, d));
            }
            if decided_high {
                certified_convergent = true;
                break;
            }
            if run.terms.len() >= limit || run.ended {
                break;
            }
            let next = (run.terms.len() * 2).min(limit);
            run.extend_to(next)?;
        }
    }

    let acfg = AbelConfig {
        first_level: FIRST_ABEL_LEVEL,
        last_level: cfg.abel_levels,
        depth: cfg.extrapolation_depth,
        tolerance: tol.clone(),
        max_inner_terms: cfg.max_inner_terms.min(limit),
    };
    let mut d = run.diagnostics();
    d.ratio_estimate = ratio;
    d.raabe = raabe;
    let mut cached_terms = core::mem::take(&mut run.terms);
    let abel = abel_sum(&mut Cached { src: &mut *run.src, terms: &mut cached_terms }, &acfg)?;
    run.terms = cached_terms;
    d.n_terms_used = d.n_terms_used.max(abel.terms_used);
    let value = abel.value.clone();
    d.abel = Some(abel);
    if let Some(v) = value {
        let status = if certified_convergent { Status::Convergent } else { Status::AbelSummable };
        return Ok(finish(&run, status, Some(v), d));
    }

    let cap = Real::from_f64(cfg.partial_sum_cap, p);
    if run.sums.iter().any(|s| s.abs() > cap) {
        d.low_confidence = true;
        return Ok(finish(&run, Status::Divergent, None, d));
    }
    Ok(finish(&run, Status::Inconclusive, None, d))
}

/// Classifies `sum_n conj(f_n) g_n` for two coefficient sources.
pub fn classify_series(
    f: &mut dyn Coefficients,
    g: &mut dyn Coefficients,
    cfg: &SummationConfig,
) -> Result<EProductResult, Error> {
    cfg.validate()?;
    let p = cfg.bits();
    if f.is_zero() || g.is_zero() {
        return Ok(EProductResult::zero_by_parity(p));
    }
    let parity = match (f.parity(), g.parity()) {
        (Some(a), Some(b)) if a != b => return Ok(EProductResult::zero_by_parity(p)),
        (a, b) => a.or(b),
    };
    let (offset, stride) = parity.map_or((0, 1), |q| (q.offset(), 2));
    let support = match (f.support(), g.support()) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    };
    if let Some(len) = support {
        return finite_sum(f, g, offset, stride, len, p);
    }
    classify_terms(&mut PairTerms { f, g, offset, stride }, cfg)
}

fn finite_sum(
    f: &mut dyn Coefficients,
    g: &mut dyn Coefficients,
    offset: usize,
    stride: usize,
    len: usize,
    p: usize,
) -> Result<EProductResult, Error> {
    let mut sum = Complex::zero(p);
    let mut sums = Vec::new();
    let mut exact = Some(ExactTerm::zero());
    for (l, n) in (offset..len).step_by(stride).enumerate() {
        sum += &(f.coeff(n)?.conj() * g.coeff(n)?);
        sums.push((l, sum.clone()));
        exact = match (exact, f.exact(n), g.exact(n)) {
            (Some(acc), Some(a), Some(b)) => acc.checked_add(&(a * b)).ok(),
            _ => None,
        };
    }
    let n_terms_used = sums.len();
    Ok(EProductResult {
        status: Status::AbsolutelyConvergent,
        value: Some(sum),
        exact_value: exact,
        diagnostics: Diagnostics { partial_sums: sums, n_terms_used, ..Diagnostics::default() },
    })
}

/// `<F, G>_e` with status.
pub fn classify_and_sum(f: &Distribution, g: &Distribution, cfg: &SummationConfig) -> Result<EProductResult, Error> {
    cfg.validate()?;
    let p = cfg.bits();
    let mut fs = CoeffSequence::with_options(f.clone(), p, cfg.quadrature_nodes, None);
    let mut gs = CoeffSequence::with_options(g.clone(), p, cfg.quadrature_nodes, None);
    classify_series(&mut fs, &mut gs, cfg)
}

/// `S_K = sum_{n <= K} conj(<e_n, F>) <e_n, G>` for `K = 0..count`.
pub fn partial_sums(f: &Distribution, g: &Distribution, count: usize, p: usize) -> Result<Vec<Complex>, Error> {
    let mut fs = CoeffSequence::new(f.clone(), p);
    let mut gs = CoeffSequence::new(g.clone(), p);
    let mut acc = Complex::zero(p);
    let mut out = Vec::with_capacity(count);
    for n in 0..count {
        acc += &(fs.coeff(n)?.conj() * gs.coeff(n)?);
        out.push(acc.clone());
    }
    Ok(out)
}

/// Exact partial sums; requires closed-form real coefficients on both sides.
pub fn exact_partial_sums(f: &Distribution, g: &Distribution, count: usize) -> Result<Vec<ExactTerm>, Error> {
    let missing = |d: &Distribution, n: usize| Error::Unsupported(alloc::format!("no exact coefficient {n} for {d}"));
    let mut acc = ExactTerm::zero();
    let mut out = Vec::with_capacity(count);
    for n in 0..count {
        let a = exact_coeff(f, n).ok_or_else(|| missing(f, n))?;
        let b = exact_coeff(g, n).ok_or_else(|| missing(g, n))?;
        acc = acc.checked_add(&(a * b))?;
        out.push(acc.clone());
    }
    Ok(out)
}

/// The four exact series families met in the `phi`/`psi` pairings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesKind {
    /// `(-4)^j / (2j)! Gamma(j+1/2)^2 F(-j, n+1/2; 1/2; 2) F(-j, m+1/2; 1/2; 2)`
    A,
    /// `(-4)^j / (2j+1)! Gamma(j+3/2)^2 F(-j, n+3/2; 3/2; 2) F(-j, m+3/2; 3/2; 2)`
    B,
    /// as `A` with `4^j`
    C,
    /// as `B` with `4^j`
    D,
}

impl SeriesKind {
    fn odd(self) -> bool {
        matches!(self, SeriesKind::B | SeriesKind::D)
    }

    fn alternating(self) -> bool {
        matches!(self, SeriesKind::A | SeriesKind::B)
    }

    fn c(self) -> BigRational {
        BigRational::new(if self.odd() { 3 } else { 1 }.into(), 2.into())
    }

    fn a(self, n: u32) -> BigRational {
        BigRational::from_integer(n.into()) + self.c()
    }
}

/// One term of the chosen family, as `rational * pi`.
pub fn exact_series_term(kind: SeriesKind, j: u32, n: u32, m: u32) -> ExactTerm {
    let two = BigRational::from_integer(2.into());
    let c = kind.c();
    let fa = gauss_2f1_terminating(j, &kind.a(n), &c, &two).expect("c is a positive half-integer");
    let fb = gauss_2f1_terminating(j, &kind.a(m), &c, &two).expect("c is a positive half-integer");
    let (g, fact) = if kind.odd() {
        (gamma_half_integer_rational(j + 1), factorial(2 * j + 1))
    } else {
        (gamma_half_integer_rational(j), factorial(2 * j))
    };
    let four = BigInt::one() << (2 * j as usize);
    let sign = if kind.alternating() && j % 2 == 1 { -BigInt::one() } else { BigInt::one() };
    let q = BigRational::new(sign * four, fact) * &g * &g * fa * fb;
    ExactTerm::from_rational(q) * ExactTerm::pi_pow_quarters(4)
}

/// Sequential terms `j = 0, 1, ...` of one family, as rationals times `pi`.
pub struct ExactSeries {
    kind: SeriesKind,
    fa: Terminating2F1,
    fb: Terminating2F1,
    /// `4^j Gamma(j+s)^2 / (pi (2j+t)!)`, updated by its term ratio
    weight: BigRational,
    j: u32,
}

impl ExactSeries {
    pub fn new(kind: SeriesKind, n: u32, m: u32) -> ExactSeries {
        let two = BigRational::from_integer(2.into());
        let c = kind.c();
        // j = 0: Gamma(1/2)^2 / 0! = pi, Gamma(3/2)^2 / 1! = pi / 4
        let weight = if kind.odd() { BigRational::new(1.into(), 4.into()) } else { BigRational::one() };
        ExactSeries {
            kind,
            fa: Terminating2F1::new(kind.a(n), c.clone(), two.clone()),
            fb: Terminating2F1::new(kind.a(m), c, two),
            weight,
            j: 0,
        }
    }
}

impl Iterator for ExactSeries {
    type Item = Result<BigRational, Error>;

    fn next(&mut self) -> Option<Self::Item> {
        let fa = match self.fa.next()? {
            Ok(v) => v,
            Err(e) => return Some(Err(e)),
        };
        let fb = match self.fb.next()? {
            Ok(v) => v,
            Err(e) => return Some(Err(e)),
        };
        let mut t = &self.weight * fa * fb;
        if self.kind.alternating() && self.j % 2 == 1 {
            t = -t;
        }
        // 4 (j+s)^2 / ((2j+t+1)(2j+t+2)) with s = 1/2, t = 0 or s = 3/2, t = 1
        let j = BigInt::from(self.j);
        let (num, den) = if self.kind.odd() {
            let h = BigInt::from(2) * &j + 3;
            (&h * &h, (&j * 2 + 2) * (&j * 2 + 3))
        } else {
            let h = BigInt::from(2) * &j + 1;
            (&h * &h, (&j * 2 + 1) * (&j * 2 + 2))
        };
        self.weight = &self.weight * BigRational::new(num, den);
        self.j += 1;
        Some(Ok(t))
    }
}

struct ExactSeriesTerms {
    series: ExactSeries,
    pi: Real,
    p: usize,
}

impl TermSource for ExactSeriesTerms {
    fn term(&mut self, l: usize) -> Result<Option<(u64, Complex)>, Error> {
        match self.series.next() {
            Some(t) => Ok(Some((l as u64, Complex::from_real(Real::from_rational(&t?, self.p) * &self.pi)))),
            None => Ok(None),
        }
    }
}

/// Classifies `sum_j` of one exact family; the Abel variable is `r^j`, so
/// `r -> 1^-` realizes `z -> -4` for the alternating kinds.
pub fn classify_exact_series(kind: SeriesKind, n: u32, m: u32, cfg: &SummationConfig) -> Result<EProductResult, Error> {
    cfg.validate()?;
    let p = cfg.bits();
    let mut src = ExactSeriesTerms { series: ExactSeries::new(kind, n, m), pi: Real::pi(p), p };
    classify_terms(&mut src, cfg)
}

/// Which two normalized families are paired.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// `x^n / sqrt(n!)`
    Phi,
    /// `(-1)^n delta^(n) / sqrt(n!)`
    Psi,
}

impl Family {
    pub fn distribution(self, n: u32) -> Distribution {
        match self {
            Family::Phi => Distribution::NormalizedMonomial(n),
            Family::Psi => Distribution::NormalizedDeltaDeriv(n),
        }
    }
}

/// Number of leading terms on which the prefactor is required to be constant.
const PREFACTOR_PROBES: u32 = 8;

/// The constant `P` with `<e_k, L_n> <e_k, R_m> = P * s_j(n/2, m/2)` for
/// `k = 2j + (n mod 2)`, obtained by dividing the composed closed-form
/// coefficients by the series term and checking the quotient never moves.
pub fn series_prefactor(left: Family, right: Family, n: u32, m: u32) -> Result<ExactTerm, Error> {
    if (n + m) % 2 == 1 {
        return Err(Error::InvalidArgument(String::from("indices of opposite parity")));
    }
    let kind = series_kind(left, right, n);
    let (ld, rd) = (left.distribution(n), right.distribution(m));
    let mut found: Option<ExactTerm> = None;
    for j in 0..PREFACTOR_PROBES {
        let k = (2 * j + n % 2) as usize;
        let t = exact_coeff(&ld, k).zip(exact_coeff(&rd, k)).map(|(a, b)| a * b);
        let t = t.ok_or_else(|| Error::Unsupported(String::from("missing closed-form coefficient")))?;
        let s = exact_series_term(kind, j, n / 2, m / 2);
        if s.is_zero() {
            if !t.is_zero() {
                return Err(Error::Unsupported(alloc::format!("series term {j} vanishes but the pairing term does not")));
            }
            continue;
        }
        let q = t.div(&s);
        match &found {
            None => found = Some(q),
            Some(prev) if *prev == q => {}
            Some(prev) => {
                return Err(Error::Unsupported(alloc::format!(
                    "prefactor not constant: {prev} at an earlier term, {q} at term {j}"
                )))
            }
        }
    }
    found.ok_or_else(|| Error::Unsupported(String::from("all probed series terms vanish")))
}

fn series_kind(left: Family, right: Family, n: u32) -> SeriesKind {
    match (left == right, n % 2 == 1) {
        (false, false) => SeriesKind::A,
        (false, true) => SeriesKind::B,
        (true, false) => SeriesKind::C,
        (true, true) => SeriesKind::D,
    }
}

/// `<L_n, R_m>_e` for any pairing of the two normalized families.
pub fn family_product(left: Family, right: Family, n: u32, m: u32, cfg: &SummationConfig) -> Result<EProductResult, Error> {
    cfg.validate()?;
    let p = cfg.bits();
    if (n + m) % 2 == 1 {
        return Ok(EProductResult::zero_by_parity(p));
    }
    let pref = series_prefactor(left, right, n, m)?;
    let kind = series_kind(left, right, n);
    Ok(classify_exact_series(kind, n / 2, m / 2, cfg)?.scaled(&pref, p))
}

/// `<phi_n, psi_m>_e` through the alternating exact series.
pub fn phi_psi_product(n: u32, m: u32, cfg: &SummationConfig) -> Result<EProductResult, Error> {
    family_product(Family::Phi, Family::Psi, n, m, cfg)
}

/// `<phi_n, phi_m>_e` through the positive exact series.
pub fn phi_phi_product(n: u32, m: u32, cfg: &SummationConfig) -> Result<EProductResult, Error> {
    family_product(Family::Phi, Family::Phi, n, m, cfg)
}

/// `<psi_n, psi_m>_e` through the positive exact series.
pub fn psi_psi_product(n: u32, m: u32, cfg: &SummationConfig) -> Result<EProductResult, Error> {
    family_product(Family::Psi, Family::Psi, n, m, cfg)
}

/// Checks `sum_{l<=L} (e_{2l+1}'(0))^2 >= 2 sum_{l<=L} (e_{2l}(0))^2` exactly
/// for every `L < levels`. Since the right side diverges, so does
/// `<delta', delta'>_e`.
pub fn derivative_domination(levels: usize) -> Result<bool, Error> {
    let d1 = Distribution::DeltaDeriv(1);
    let d0 = Distribution::delta();
    let two = ExactTerm::from_integer(2);
    let mut lhs = ExactTerm::zero();
    let mut rhs = ExactTerm::zero();
    for l in 0..levels {
        let a = exact_coeff(&d1, 2 * l + 1).expect("closed form");
        let b = exact_coeff(&d0, 2 * l).expect("closed form");
        lhs = lhs.checked_add(&(&a * &a))?;
        rhs = rhs.checked_add(&(&two * &(&b * &b)))?;
        if lhs.cmp_exact(&rhs) == Some(core::cmp::Ordering::Less) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Exact ratio `S_K(psi_n, psi_m) / S_K(phi_n, phi_m)` at every `K < count`
/// where the denominator is nonzero, or `None` if it is not one constant.
pub fn psi_phi_partial_sum_ratio(n: u32, m: u32, count: usize) -> Result<Option<ExactTerm>, Error> {
    let psi = exact_partial_sums(&Family::Psi.distribution(n), &Family::Psi.distribution(m), count)?;
    let phi = exact_partial_sums(&Family::Phi.distribution(n), &Family::Phi.distribution(m), count)?;
    let mut ratio: Option<ExactTerm> = None;
    for (s, t) in psi.iter().zip(&phi) {
        if t.is_zero() {
            if !s.is_zero() {
                return Ok(None);
            }
            continue;
        }
        let q = s.div(t);
        match &ratio {
            None => ratio = Some(q),
            Some(r) if *r == q => {}
            Some(_) => return Ok(None),
        }
    }
    Ok(ratio)
}
