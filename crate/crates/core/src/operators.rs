//! Ladder-operator words acting on coefficient sequences, and the formal
//! adjoint with respect to the e-product.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::distributions::{CoeffSequence, Coefficients, Distribution, Parity};
use crate::eproduct::{classify_series, EProductResult, SummationConfig};
use crate::error::Error;
use crate::exact::{ExactTerm, Scalar};
use crate::numeric::{Complex, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    /// lowering
    C,
    /// raising
    Cdag,
    /// multiplication by `x = (c + c^dag) / sqrt(2)`
    X,
    /// `d/dx = (c - c^dag) / sqrt(2)`
    D,
}

impl Letter {
    pub fn symbol(self) -> &'static str {
        match self {
            Letter::C => "c",
            Letter::Cdag => "cdag",
            Letter::X => "x",
            Letter::D => "D",
        }
    }
}

/// Finite sum of `scalar * word`; words act right to left.
#[derive(Clone, PartialEq, Eq)]
pub struct OperatorExpr {
    terms: Vec<(Scalar, Vec<Letter>)>,
}

impl OperatorExpr {
    pub fn identity() -> OperatorExpr {
        OperatorExpr { terms: vec![(Scalar::one(), Vec::new())] }
    }

    pub fn zero() -> OperatorExpr {
        OperatorExpr { terms: Vec::new() }
    }

    pub fn letter(l: Letter) -> OperatorExpr {
        OperatorExpr { terms: vec![(Scalar::one(), vec![l])] }
    }

    pub fn word(letters: &[Letter]) -> OperatorExpr {
        OperatorExpr { terms: vec![(Scalar::one(), letters.to_vec())] }
    }

    pub fn from_terms(terms: Vec<(Scalar, Vec<Letter>)>) -> OperatorExpr {
        OperatorExpr { terms }
    }

    pub fn terms(&self) -> &[(Scalar, Vec<Letter>)] {
        &self.terms
    }

    pub fn scaled(mut self, s: &Scalar) -> OperatorExpr {
        for (k, _) in &mut self.terms {
            *k = &*k * s;
        }
        self
    }

    pub fn add(mut self, o: OperatorExpr) -> OperatorExpr {
        self.terms.extend(o.terms);
        self
    }

    /// Product `self * o`, so `o` acts first.
    pub fn compose(&self, o: &OperatorExpr) -> OperatorExpr {
        let mut terms = Vec::with_capacity(self.terms.len() * o.terms.len());
        for (a, wa) in &self.terms {
            for (b, wb) in &o.terms {
                let mut w = wa.clone();
                w.extend_from_slice(wb);
                terms.push((a * b, w));
            }
        }
        OperatorExpr { terms }
    }

    /// Formal adjoint: conjugate scalars, reverse words, swap `c` and
    /// `c^dag`, keep `x`, negate `D`.
    pub fn ddagger(&self) -> OperatorExpr {
        let terms = self
            .terms
            .iter()
            .map(|(s, w)| {
                let mut s = s.conj();
                let w: Vec<Letter> = w
                    .iter()
                    .rev()
                    .map(|l| match l {
                        Letter::C => Letter::Cdag,
                        Letter::Cdag => Letter::C,
                        other => *other,
                    })
                    .collect();
                if w.iter().filter(|l| **l == Letter::D).count() % 2 == 1 {
                    s = -s;
                }
                (s, w)
            })
            .collect();
        OperatorExpr { terms }
    }

    /// Rewrites `x` and `D` through `c`, `c^dag` and normalizes.
    pub fn to_ladder(&self) -> OperatorExpr {
        let half = Scalar::sqrt(&BigRational::new(BigInt::one(), BigInt::from(2))).expect("positive");
        let mut out = Vec::new();
        for (s, w) in &self.terms {
            let mut partial: Vec<(Scalar, Vec<Letter>)> = vec![(s.clone(), Vec::with_capacity(w.len()))];
            for l in w {
                let choices: &[(bool, Letter)] = match l {
                    Letter::C => &[(false, Letter::C)],
                    Letter::Cdag => &[(false, Letter::Cdag)],
                    Letter::X => &[(false, Letter::C), (false, Letter::Cdag)],
                    Letter::D => &[(false, Letter::C), (true, Letter::Cdag)],
                };
                let lowered = matches!(l, Letter::X | Letter::D);
                let mut next = Vec::with_capacity(partial.len() * choices.len());
                for (k, pw) in &partial {
                    for (neg, c) in choices {
                        let mut k = if lowered { k * &half } else { k.clone() };
                        if *neg {
                            k = -k;
                        }
                        let mut pw = pw.clone();
                        pw.push(*c);
                        next.push((k, pw));
                    }
                }
                partial = next;
            }
            out.extend(partial);
        }
        OperatorExpr { terms: out }.normalize()
    }

    /// Merges equal words whose scalars share a radicand, drops zeros and
    /// sorts. Idempotent.
    pub fn normalize(&self) -> OperatorExpr {
        let mut terms: Vec<(Scalar, Vec<Letter>)> = Vec::new();
        for (s, w) in &self.terms {
            if s.is_zero() {
                continue;
            }
            match terms.iter_mut().find(|(k, v)| v == w && k.radicand() == s.radicand()) {
                Some((k, _)) => *k = k.checked_add(s).expect("same radicand"),
                None => terms.push((s.clone(), w.clone())),
            }
        }
        terms.retain(|(s, _)| !s.is_zero());
        terms.sort_by(|(a, wa), (b, wb)| wa.cmp(wb).then_with(|| a.radicand().cmp(b.radicand())));
        OperatorExpr { terms }
    }

    pub fn is_ladder(&self) -> bool {
        self.terms.iter().all(|(_, w)| w.iter().all(|l| matches!(l, Letter::C | Letter::Cdag)))
    }
}

impl fmt::Display for OperatorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (s, w)) in self.terms.iter().enumerate() {
            let word = word_string(w);
            let (neg, body) = match s.render() {
                Some(r) if r.starts_with('-') => (true, Some(String::from(&r[1..]))),
                r => (false, r),
            };
            let body = body.filter(|b| b != "1" || word.is_empty());
            f.write_str(match (i, neg) {
                (0, false) => "",
                (0, true) => "-",
                (_, false) => " + ",
                (_, true) => " - ",
            })?;
            match (body, word.is_empty()) {
                (None, true) => f.write_str("1")?,
                (None, false) => f.write_str(&word)?,
                (Some(r), true) => f.write_str(&r)?,
                (Some(r), false) => write!(f, "{r}*{word}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for OperatorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OperatorExpr({self})")
    }
}

/// A ladder word reduced to `sqrt(weight) * s_{n + shift}`, or `None` when
/// a lowering step would pass below index zero.
fn walk(word: &[Letter], n: usize) -> Option<(BigInt, usize)> {
    let mut idx = n;
    let mut weight = BigInt::one();
    for l in word {
        match l {
            Letter::C => {
                idx += 1;
                weight *= idx;
            }
            Letter::Cdag => {
                if idx == 0 {
                    return None;
                }
                weight *= idx;
                idx -= 1;
            }
            _ => unreachable!("ladder form"),
        }
    }
    Some((weight, idx))
}

/// Coefficient sequence of `op F`, evaluated lazily from that of `F`.
pub struct Applied {
    op: OperatorExpr,
    inner: Box<dyn Coefficients>,
    p: usize,
    scalars: Vec<Complex>,
}

impl Applied {
    pub fn operator(&self) -> &OperatorExpr {
        &self.op
    }
}

/// `op` acting on a coefficient sequence: `(c s)_n = sqrt(n+1) s_{n+1}`,
/// `(c^dag s)_n = sqrt(n) s_{n-1}`.
pub fn apply(op: &OperatorExpr, inner: Box<dyn Coefficients>) -> Applied {
    let op = if op.is_ladder() { op.clone() } else { op.to_ladder() };
    let p = inner.precision();
    let scalars = op.terms.iter().map(|(s, _)| s.to_complex(p)).collect();
    Applied { op, inner, p, scalars }
}

impl Coefficients for Applied {
    fn coeff(&mut self, n: usize) -> Result<Complex, Error> {
        let mut acc = Complex::zero(self.p);
        for ((s, w), k) in self.op.terms.iter().zip(&self.scalars) {
            let Some((weight, idx)) = walk(w, n) else { continue };
            let mut v = self.inner.coeff(idx)?;
            if !weight.is_one() {
                v = v.scale(&Real::from_bigint(&weight, self.p).sqrt());
            }
            if !s.is_one() {
                v = k * &v;
            }
            if self.op.terms.len() == 1 {
                return Ok(v);
            }
            acc += &v;
        }
        Ok(acc)
    }

    fn exact(&mut self, n: usize) -> Option<ExactTerm> {
        let mut acc = ExactTerm::zero();
        for (s, w) in &self.op.terms {
            let Some((weight, idx)) = walk(w, n) else { continue };
            let v = s.to_exact()? * ExactTerm::sqrt(&BigRational::from_integer(weight)) * self.inner.exact(idx)?;
            acc = acc.checked_add(&v).ok()?;
        }
        Some(acc)
    }

    fn parity(&self) -> Option<Parity> {
        let base = self.inner.parity()?;
        let mut lengths = self.op.terms.iter().map(|(_, w)| w.len() % 2);
        let first = lengths.next()?;
        if lengths.any(|l| l != first) {
            return None;
        }
        Some(if first == 1 { base.flip() } else { base })
    }

    fn support(&self) -> Option<usize> {
        let base = self.inner.support()?;
        let raise = self
            .op
            .terms
            .iter()
            .map(|(_, w)| w.iter().filter(|l| **l == Letter::Cdag).count())
            .max()
            .unwrap_or(0);
        Some(base + raise)
    }

    fn is_zero(&self) -> bool {
        self.op.terms.is_empty() || self.inner.is_zero()
    }

    fn precision(&self) -> usize {
        self.p
    }
}

#[derive(Debug, Clone)]
pub struct AdjointReport {
    /// `<op^ddagger Phi, phi>_e`
    pub left: EProductResult,
    /// `<Phi, op phi>_e`
    pub right: EProductResult,
    /// `|left - right|`
    pub difference: Real,
    /// Largest `|S_K(left) - S_K(right)|` over the common window.
    pub max_partial_sum_deviation: Real,
}

/// Compares both sides of `<X^ddagger Phi, phi>_e = <Phi, X phi>_e`.
pub fn adjoint_check(
    op: &OperatorExpr,
    big_phi: &Distribution,
    small_phi: &Distribution,
    cfg: &SummationConfig,
) -> Result<AdjointReport, Error> {
    let p = cfg.precision.working_bits();
    let seq = |d: &Distribution| -> Box<dyn Coefficients> {
        Box::new(CoeffSequence::with_options(d.clone(), p, cfg.quadrature_nodes, None))
    };
    let mut lf = apply(&op.ddagger(), seq(big_phi));
    let mut lg = seq(small_phi);
    let left = classify_series(&mut lf, lg.as_mut(), cfg)?;
    let mut rf = seq(big_phi);
    let mut rg = apply(op, seq(small_phi));
    let right = classify_series(rf.as_mut(), &mut rg, cfg)?;
    let (Some(a), Some(b)) = (&left.value, &right.value) else {
        return Err(Error::Unsupported(alloc::format!(
            "adjoint pairing without a value ({} / {})",
            left.status,
            right.status
        )));
    };
    let difference = (a - b).abs();
    let mut dev = Real::zero(p);
    for ((_, s), (_, t)) in left.diagnostics.partial_sums.iter().zip(&right.diagnostics.partial_sums) {
        dev = dev.max((s - t).abs());
    }
    Ok(AdjointReport { left, right, difference, max_partial_sum_deviation: dev })
}

/// Renders a word list compactly, used in error messages and reports.
pub fn word_string(w: &[Letter]) -> String {
    let parts: Vec<&str> = w.iter().map(|l| l.symbol()).collect();
    parts.join(" ")
}
