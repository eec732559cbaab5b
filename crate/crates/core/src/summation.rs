//! Sequence acceleration, the Raabe test and Abel summation.
//!
//! Abel summation evaluates `A(r) = sum_l t_l r^{n_l}` at `r_k = 1 - 2^-k`
//! and extrapolates `r -> 1^-` twice over: by polynomial (Neville) fitting in
//! `h = 1 - r` on the last few levels, and by the epsilon algorithm over the
//! whole ladder of levels. Only agreement of the two counts as a value.

use alloc::vec::Vec;

use crate::error::Error;
use crate::numeric::{Complex, Real};

/// Incremental Wynn epsilon table over a stream of partial sums.
pub struct Wynn {
    diag: Vec<Complex>,
    huge: Complex,
}

impl Wynn {
    pub fn new(p: usize) -> Wynn {
        Wynn { diag: Vec::new(), huge: Complex::from_real(Real::one(p).mul_pow2(8 * p as i64)) }
    }

    /// Feeds the next partial sum and returns the current best estimate.
    ///
    /// After the update `diag[j]` holds `eps_{N-j}^{(j)}`. The estimate is the
    /// even-column entry that moved least since the previous diagonal, which
    /// stays sensible after the table has converged exactly (zero differences
    /// put the sentinel into the next column).
    pub fn push(&mut self, s: Complex) -> Complex {
        let n = self.diag.len();
        let p = s.precision();
        let old = self.diag.clone();
        self.diag.push(s.clone());
        if n == 0 {
            return s;
        }
        let mut aux2 = Complex::zero(p);
        for j in (1..=n).rev() {
            let aux1 = aux2;
            aux2 = self.diag[j - 1].clone();
            let diff = &self.diag[j] - &aux2;
            self.diag[j - 1] = if diff.is_zero() { self.huge.clone() } else { aux1 + diff.recip() };
        }
        let limit = self.huge.re.mul_pow2(-1);
        let mut best: Option<(Real, usize)> = None;
        let mut c = 0;
        while c < n {
            let new = &self.diag[n - c];
            let prev = &old[n - 1 - c];
            if new.abs() < limit && prev.abs() < limit {
                let d = (new - prev).abs();
                if best.as_ref().is_none_or(|(b, _)| d < *b) {
                    best = Some((d, n - c));
                }
            }
            c += 2;
        }
        match best {
            Some((_, j)) => self.diag[j].clone(),
            None => s,
        }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }
}

/// Value at `h = 0` of the polynomial through `(h_i, y_i)`.
pub fn neville_at_zero(h: &[Real], y: &[Complex]) -> Complex {
    assert_eq!(h.len(), y.len());
    assert!(!h.is_empty());
    let mut t = y.to_vec();
    let n = t.len();
    for m in 1..n {
        for i in 0..n - m {
            let num = t[i].scale(&h[i + m]) - t[i + 1].scale(&h[i]);
            t[i] = num.scale(&(&h[i + m] - &h[i]).recip());
        }
    }
    t.swap_remove(0)
}

pub fn neville_at_zero_real(h: &[Real], y: &[Real]) -> Real {
    let yc: Vec<Complex> = y.iter().cloned().map(Complex::from_real).collect();
    neville_at_zero(h, &yc).re
}

#[derive(Debug, Clone)]
pub struct RaabeEstimate {
    pub estimate: Real,
    /// `(l, rho_l)` samples fed to the extrapolation.
    pub samples: Vec<(usize, Real)>,
}

/// Raabe's quantity `rho_l = l (a_l / a_{l+1} - 1)` sampled at geometrically
/// spaced `l` and extrapolated in `1/l`. `terms[i]` is `a_{offset + i}`; all
/// must be positive.
pub fn raabe_test(terms: &[Real], offset: usize) -> Result<RaabeEstimate, Error> {
    if terms.len() < 32 {
        return Err(Error::InvalidArgument(alloc::format!(
            "Raabe test needs at least 32 terms, got {}",
            terms.len()
        )));
    }
    if terms.iter().any(|t| t.is_zero() || t.is_negative()) {
        return Err(Error::InvalidArgument(alloc::string::String::from(
            "Raabe test needs positive terms",
        )));
    }
    let p = terms[0].precision();
    let last = offset + terms.len() - 2;
    let mut ls = Vec::new();
    let mut l = last;
    while ls.len() < 5 && l >= offset.max(8) {
        ls.push(l);
        l /= 2;
    }
    ls.reverse();
    let mut samples = Vec::with_capacity(ls.len());
    for &l in &ls {
        let a = &terms[l - offset];
        let b = &terms[l + 1 - offset];
        let rho = Real::from_u64(l as u64, p) * (a / b - Real::one(p));
        samples.push((l, rho));
    }
    let h: Vec<Real> = samples.iter().map(|(l, _)| Real::from_u64(*l as u64, p).recip()).collect();
    let y: Vec<Real> = samples.iter().map(|(_, r)| r.clone()).collect();
    let estimate = neville_at_zero_real(&h, &y);
    Ok(RaabeEstimate { estimate, samples })
}

/// Terms `t_l` with the power `n_l` of `r` they carry in the Abel mean.
pub trait TermSource {
    /// `Ok(None)` ends a finite series.
    fn term(&mut self, l: usize) -> Result<Option<(u64, Complex)>, Error>;
}

/// Terms `t_l = f(l)` carrying `r^l`.
pub struct FnTerms<F>(pub F);

impl<F> TermSource for FnTerms<F>
where
    F: FnMut(usize) -> Result<Complex, Error>,
{
    fn term(&mut self, l: usize) -> Result<Option<(u64, Complex)>, Error> {
        Ok(Some((l as u64, (self.0)(l)?)))
    }
}

#[derive(Debug, Clone)]
pub struct AbelConfig {
    pub first_level: u32,
    pub last_level: u32,
    /// Polynomial degree of the Neville fit (uses `depth + 1` levels).
    pub depth: usize,
    /// Relative tolerance.
    pub tolerance: Real,
    pub max_inner_terms: usize,
}

#[derive(Debug, Clone)]
pub struct AbelStep {
    pub level: u32,
    pub r: Real,
    pub value: Complex,
    pub terms: usize,
    /// Neville extrapolant using this level as the newest point.
    pub extrapolant: Option<Complex>,
}

#[derive(Debug, Clone)]
pub struct AbelSum {
    /// Set only when both extrapolations agree.
    pub value: Option<Complex>,
    pub richardson: Option<Complex>,
    pub wynn: Option<Complex>,
    pub trace: Vec<AbelStep>,
    pub terms_used: usize,
}

struct Cache<'a> {
    src: &'a mut dyn TermSource,
    terms: Vec<(u64, Complex)>,
    ended: bool,
}

impl Cache<'_> {
    fn get(&mut self, l: usize) -> Result<Option<&(u64, Complex)>, Error> {
        while !self.ended && self.terms.len() <= l {
            match self.src.term(self.terms.len())? {
                Some(t) => self.terms.push(t),
                None => self.ended = true,
            }
        }
        Ok(self.terms.get(l))
    }
}



/// Consecutive quiet epsilon estimates required before an inner mean is
/// accepted; the least-moving entry can stall well above its error for a
/// few steps.
const SETTLE_RUN: usize = 16;

fn rel_scale(v: &Complex) -> Real {
    v.abs().max(Real::one(v.precision()))
}

/// `A(r)`, returning `(value, terms consumed)` or `None` if neither direct
/// truncation nor the epsilon estimate settles within the term budget.
fn abel_mean(cache: &mut Cache<'_>, r: &Real, gap: &Real, cfg: &AbelConfig) -> Result<Option<(Complex, usize)>, Error> {
    let p = r.precision();
    let mut sum = Complex::zero(p);
    let mut wynn = Wynn::new(p);
    let mut power = Real::one(p);
    let mut last_n = 0u64;
    let mut small_run = 0;
    let mut settled_run = 0;
    let mut prev_est: Option<Complex> = None;
    let target = &cfg.tolerance * gap;
    for l in 0..cfg.max_inner_terms {
        let Some((n, t)) = cache.get(l)?.cloned() else {
            return Ok(Some((sum, l)));
        };
        if n > last_n {
            power = &power * r.powi((n - last_n) as u32);
            last_n = n;
        } else if l == 0 && n == 0 {
            power = Real::one(p);
        }
        let x = t.scale(&power);
        sum += &x;
        let est = wynn.push(sum.clone());
        let scale = rel_scale(&sum);
        if x.abs() <= &target * &scale {
            small_run += 1;
        } else {
            small_run = 0;
        }
        if small_run >= 3 && l >= 8 {
            return Ok(Some((sum, l + 1)));
        }
        if let Some(prev) = &prev_est {
            if (&est - prev).abs() <= &target * &scale.mul_pow2(-4) {
                settled_run += 1;
            } else {
                settled_run = 0;
            }
            if settled_run >= SETTLE_RUN && l >= 12 {
                return Ok(Some((est, l + 1)));
            }
        }
        prev_est = Some(est);
    }
    Ok(None)
}

/// Abel summation of `sum_l t_l` with the ladder `r_k = 1 - 2^-k`.
pub fn abel_sum(src: &mut dyn TermSource, cfg: &AbelConfig) -> Result<AbelSum, Error> {
    let p = cfg.tolerance.precision();
    let mut cache = Cache { src, terms: Vec::new(), ended: false };
    let mut trace: Vec<AbelStep> = Vec::new();
    let mut hs: Vec<Real> = Vec::new();
    let mut vals: Vec<Complex> = Vec::new();
    let mut level_wynn = Wynn::new(p);
    let mut wynn_est = None;
    let mut terms_used = 0;
    for k in cfg.first_level..=cfg.last_level {
        let gap = Real::one(p).mul_pow2(-(k as i64));
        let r = Real::one(p) - &gap;
        let Some((v, used)) = abel_mean(&mut cache, &r, &gap, cfg)? else {
            break;
        };
        terms_used = terms_used.max(used);
        hs.push(gap);
        vals.push(v.clone());
        wynn_est = Some(level_wynn.push(v.clone()));
        let m = vals.len();
        let extrapolant = (m > cfg.depth).then(|| neville_at_zero(&hs[m - cfg.depth - 1..], &vals[m - cfg.depth - 1..]));
        trace.push(AbelStep { level: k, r, value: v, terms: used, extrapolant });
    }
    let m = trace.len();
    let richardson = trace.last().and_then(|s| s.extrapolant.clone());
    let previous = if m >= 2 { trace[m - 2].extrapolant.clone() } else { None };
    let value = match (&richardson, &previous, &wynn_est) {
        (Some(r), Some(prev), Some(w)) => {
            let scale = rel_scale(r);
            let tol = &cfg.tolerance * &scale;
            let stable = (r - prev).abs() <= tol;
            let agree = (r - w).abs() <= tol * Real::from_u64(10, p);
            (stable && agree).then(|| r.clone())
        }
        _ => None,
    };
    Ok(AbelSum { value, richardson, wynn: wynn_est, trace, terms_used })
}
