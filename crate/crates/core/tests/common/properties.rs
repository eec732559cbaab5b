//! Structural properties of the e-product and of the operator algebra.

use eprod_core::distributions::{coeff, exact_coeff, weak_apply, CoeffSequence, Coefficients, WeakOp};
use eprod_core::eproduct::{exact_partial_sums, partial_sums};
use eprod_core::exact::rational;
use eprod_core::hermite_core::eigenfunction_values;
use eprod_core::operators::apply;
use eprod_core::quadrature::GaussHermite;
use eprod_core::summation::{abel_sum, AbelConfig, FnTerms};
use eprod_core::{
    classify_and_sum, Complex, Distribution, ExactTerm, Letter, OperatorExpr, Precision, Real, Scalar, Status,
    SummationConfig,
};
use num_rational::BigRational;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use proptest::strategy::ValueTree;

pub fn p() -> usize {
    Precision::default().working_bits()
}

pub fn parseval_tol(p: usize) -> Real {
    let d = Precision::default().digits() as i64;
    Real::parse(&format!("1e-{}", d - 15), p).unwrap()
}

pub fn scalar() -> impl Strategy<Value = Scalar> {
    (-9i64..=9, 1i64..=5, -9i64..=9).prop_map(|(a, d, b)| Scalar::new(rational(a, d), rational(b, d)))
}

pub fn finite_list() -> impl Strategy<Value = Vec<Scalar>> {
    prop::collection::vec(scalar(), 1..8)
}

pub fn letter() -> impl Strategy<Value = Letter> {
    prop_oneof![Just(Letter::C), Just(Letter::Cdag), Just(Letter::X), Just(Letter::D)]
}

pub fn operator() -> impl Strategy<Value = OperatorExpr> {
    prop::collection::vec((scalar(), prop::collection::vec(letter(), 0..4)), 1..4)
        .prop_map(OperatorExpr::from_terms)
}

/// `\int conj(f) g dx` for finite Hermite expansions, by Gauss–Hermite on
/// pointwise values (exact for the polynomial-times-Gaussian integrand).
pub fn quadrature_pairing(f: &[Scalar], g: &[Scalar], p: usize) -> Complex {
    let rule = GaussHermite::new(24, p);
    let top = f.len().max(g.len()) as u32;
    let mut acc = Complex::zero(p);
    for (t, w) in rule.nodes().iter().zip(rule.weights()) {
        let lift = (t * t).exp();
        let e = eigenfunction_values(top, t);
        let eval = |c: &[Scalar]| {
            let mut v = Complex::zero(p);
            for (j, s) in c.iter().enumerate() {
                v += &s.to_complex(p).scale(&e[j]);
            }
            v
        };
        acc += &(eval(f).conj() * eval(g)).scale(&(w * &lift));
    }
    acc
}

pub fn norm(f: &[Scalar], p: usize) -> Real {
    quadrature_pairing(f, f, p).re.sqrt()
}

pub fn close(a: &Complex, b: &Complex, tol: &Real) -> bool {
    let p = a.precision();
    (a - b).abs() <= tol * &b.abs().max(Real::one(p))
}

pub fn conjugate_symmetry_of_finite_pairings(f: Vec<Scalar>, g: Vec<Scalar>) -> Result<(), TestCaseError> {
    let p = p();
    let (df, dg) = (Distribution::hermite_coefficients(f), Distribution::hermite_coefficients(g));
    let a = partial_sums(&df, &dg, 10, p).unwrap();
    let b = partial_sums(&dg, &df, 10, p).unwrap();
    let ulp = Real::one(p).mul_pow2(-(p as i64) + 4);
    for (x, y) in a.iter().zip(&b) {
        prop_assert!(close(x, &y.conj(), &ulp));
    }
    Ok(())
}

pub fn linearity_of_finite_pairings(f: Vec<Scalar>, g: Vec<Scalar>, l: Vec<Scalar>, alpha: Scalar, beta: Scalar) -> Result<(), TestCaseError> {
    let p = p();
    let df = Distribution::hermite_coefficients(f);
    let dg = Distribution::hermite_coefficients(g);
    let dl = Distribution::hermite_coefficients(l);
    let combo = Distribution::combo(vec![(alpha.clone(), dg.clone()), (beta.clone(), dl.clone())]);
    let lhs = partial_sums(&df, &combo, 10, p).unwrap();
    let sg = partial_sums(&df, &dg, 10, p).unwrap();
    let sl = partial_sums(&df, &dl, 10, p).unwrap();
    let tol = Real::one(p).mul_pow2(-(p as i64) + 16);
    for k in 0..10 {
        let rhs = alpha.to_complex(p) * &sg[k] + beta.to_complex(p) * &sl[k];
        prop_assert!(close(&lhs[k], &rhs, &tol));
    }
    Ok(())
}

pub fn parseval_against_quadrature(f: Vec<Scalar>, g: Vec<Scalar>) -> Result<(), TestCaseError> {
    let p = p();
    let cfg = SummationConfig::default();
    let r = classify_and_sum(
        &Distribution::hermite_coefficients(f.clone()),
        &Distribution::hermite_coefficients(g.clone()),
        &cfg,
    ).unwrap();
    prop_assert!(r.status.has_value());
    let want = quadrature_pairing(&f, &g, p);
    prop_assert!(close(r.value.as_ref().unwrap(), &want, &parseval_tol(p)));
    Ok(())
}

pub fn adjoint_is_an_involution(op: OperatorExpr) -> Result<(), TestCaseError> {
    prop_assert_eq!(op.ddagger().ddagger(), op);
    Ok(())
}

pub fn adjoint_is_additive(a: OperatorExpr, b: OperatorExpr) -> Result<(), TestCaseError> {
    prop_assert_eq!(a.clone().add(b.clone()).ddagger(), a.ddagger().add(b.ddagger()));
    Ok(())
}

pub fn adjoint_reverses_products(x: Letter, y: Letter) -> Result<(), TestCaseError> {
    let xy = OperatorExpr::word(&[x, y]);
    let yx = OperatorExpr::letter(y).ddagger().compose(&OperatorExpr::letter(x).ddagger());
    prop_assert_eq!(xy.ddagger(), yx);
    Ok(())
}

pub fn ladder_lowering_is_idempotent(op: OperatorExpr) -> Result<(), TestCaseError> {
    let l = op.to_ladder();
    prop_assert_eq!(l.to_ladder(), l);
    Ok(())
}

pub fn bessel_bound(f: Vec<Scalar>, g: Vec<Scalar>) -> Result<(), TestCaseError> {
    let p = p();
    let r = classify_and_sum(
        &Distribution::hermite_coefficients(f.clone()),
        &Distribution::hermite_coefficients(g.clone()),
        &SummationConfig::default(),
    ).unwrap();
    let lhs = r.value.unwrap().abs();
    let rhs = norm(&f, p) * norm(&g, p);
    prop_assert!(lhs <= rhs * (Real::one(p) + parseval_tol(p)));
    Ok(())
}

/// Abel's theorem: on a convergent series the Abel value is the sum.
pub fn abel_agrees_with_direct_sums(a: i64, b: i64, q: i64, s: i64, c: i64, u: i64) -> Result<(), TestCaseError> {
    let (v, richardson, direct) = abel_vs_direct(a, b, q, s, c, u);
    let v = v.expect("extrapolants agree");
    let tol = Real::parse("1e-25", p()).unwrap();
    prop_assert!(close(&v, &direct, &tol), "{:?} vs {:?}", v, direct);
    prop_assert!(close(&richardson, &direct, &tol));
    Ok(())
}

/// Near r = 1 singularities may make the cross-check decline, but an
/// emitted value is never wrong.
pub fn abel_values_are_never_wrong(a: i64, q: i64, c: i64, u: i64) -> Result<(), TestCaseError> {
    let (v, richardson, direct) = abel_vs_direct(a, 0, q, 0, c, u);
    let tol = Real::parse("1e-25", p()).unwrap();
    if let Some(v) = v {
        prop_assert!(close(&v, &direct, &tol), "{:?} vs {:?}", v, direct);
    }
    let loose = Real::parse("1e-20", p()).unwrap();
    prop_assert!(close(&richardson, &direct, &loose));
    Ok(())
}

/// Abel value, Richardson extrapolant and direct sum of
/// `a q^l + b s^l + c l^2 u^l + 1/l!` with ratios in tenths.
fn abel_vs_direct(a: i64, b: i64, q: i64, s: i64, c: i64, u: i64) -> (Option<Complex>, Complex, Complex) {
    let p = p();
    let tol = Real::parse("1e-30", p).unwrap();
    let (a, b, c) = (Real::from_i64(a, p), Real::from_i64(b, p), Real::from_i64(c, p));
    let ten = Real::from_u64(10, p);
    let (q, s, u) = (Real::from_i64(q, p) / &ten, Real::from_i64(s, p) / &ten, Real::from_i64(u, p) / &ten);
    let term = |l: usize| -> Complex {
        let lr = Real::from_u64(l as u64, p);
        let mut v = &a * &q.powi(l as u32) + &b * &s.powi(l as u32) + &c * &lr * &lr * u.powi(l as u32);
        let fact = (1..=l as u64).fold(Real::one(p), |acc, j| acc * Real::from_u64(j, p));
        v += &fact.recip();
        Complex::from_real(v)
    };
    let mut direct = Complex::zero(p);
    let small = Real::parse("1e-50", p).unwrap();
    let mut l = 0;
    let mut quiet = 0;
    while quiet < 8 {
        let t = term(l);
        direct += &t;
        quiet = if t.abs() < small { quiet + 1 } else { 0 };
        l += 1;
    }
    let cfg = AbelConfig { first_level: 4, last_level: 20, depth: 6, tolerance: tol, max_inner_terms: 600 };
    let r = abel_sum(&mut FnTerms(|l| Ok(term(l))), &cfg).unwrap();
    (r.value, r.richardson.expect("enough levels"), direct)
}

pub fn conjugate_symmetry_on_distributions() {
    let p = p();
    let pairs = [
        (Distribution::Monomial(2), Distribution::DeltaDeriv(2)),
        (Distribution::ExpReal(rational(1, 2)), Distribution::CosWave(rational(1, 1))),
        (
            Distribution::combo(vec![(Scalar::i(), Distribution::delta()), (Scalar::one(), Distribution::Monomial(1))]),
            Distribution::hermite_coefficients(vec![Scalar::zero(), Scalar::new(rational(1, 2), rational(-3, 1))]),
        ),
    ];
    let ulp = Real::one(p).mul_pow2(-(p as i64) + 4);
    for (f, g) in &pairs {
        let a = partial_sums(f, g, 40, p).unwrap();
        let b = partial_sums(g, f, 40, p).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!(close(x, &y.conj(), &ulp), "{f} / {g}");
        }
    }
    // exact path: real closed forms give identical exact partial sums
    let (f, g) = (Distribution::DeltaDeriv(4), Distribution::DeltaDeriv(2));
    assert_eq!(exact_partial_sums(&f, &g, 40).unwrap(), exact_partial_sums(&g, &f, 40).unwrap());
}

pub fn linearity_on_distributions() {
    let p = p();
    let f = Distribution::DeltaDeriv(4);
    let (g, l) = (Distribution::delta(), Distribution::DeltaDeriv(2));
    let (alpha, beta) = (rational(3, 2), rational(-5, 7));
    let combo = Distribution::combo(vec![(Scalar::real(alpha.clone()), g.clone()), (Scalar::real(beta.clone()), l.clone())]);
    let lhs = exact_partial_sums(&f, &combo, 40).unwrap();
    let sg = exact_partial_sums(&f, &g, 40).unwrap();
    let sl = exact_partial_sums(&f, &l, 40).unwrap();
    for k in 0..40 {
        let rhs = (ExactTerm::from_rational(alpha.clone()) * sg[k].clone())
            .checked_add(&(ExactTerm::from_rational(beta.clone()) * sl[k].clone()))
            .unwrap();
        assert_eq!(lhs[k], rhs, "K = {k}");
    }
    // complex coefficients, numeric path
    let (a, b) = (Scalar::new(rational(1, 3), rational(2, 1)), Scalar::new(rational(0, 1), rational(-1, 2)));
    let (g, l) = (Distribution::ExpReal(rational(1, 1)), Distribution::Monomial(3));
    let f = Distribution::CosWave(rational(1, 2));
    let combo = Distribution::combo(vec![(a.clone(), g.clone()), (b.clone(), l.clone())]);
    let lhs = partial_sums(&f, &combo, 40, p).unwrap();
    let sg = partial_sums(&f, &g, 40, p).unwrap();
    let sl = partial_sums(&f, &l, 40, p).unwrap();
    let tol = Real::one(p).mul_pow2(-(p as i64) + 16);
    for k in 0..40 {
        let rhs = a.to_complex(p) * &sg[k] + b.to_complex(p) * &sl[k];
        assert!(close(&lhs[k], &rhs, &tol), "K = {k}");
    }
}

pub fn self_pairings_have_nondecreasing_real_partial_sums() {
    let p = p();
    let list = Distribution::hermite_coefficients(vec![
        Scalar::new(rational(1, 2), rational(1, 3)),
        Scalar::zero(),
        Scalar::new(rational(-2, 1), rational(0, 1)),
    ]);
    for f in [
        Distribution::delta(),
        Distribution::DeltaDeriv(1),
        Distribution::Monomial(2),
        Distribution::ExpReal(rational(1, 1)),
        Distribution::CosWave(rational(2, 1)),
        Distribution::combo(vec![(Scalar::i(), Distribution::delta()), (Scalar::one(), Distribution::Monomial(1))]),
        list,
    ] {
        let s = partial_sums(&f, &f, 60, p).unwrap();
        let mut prev = Real::zero(p);
        for v in &s {
            assert!(v.im.is_zero(), "{f}");
            assert!(v.re >= prev, "{f}");
            prev = v.re.clone();
        }
    }
}

pub fn pairing_with_a_basis_function_picks_one_coefficient() {
    let p = p();
    let cfg = SummationConfig::default();
    for g in [
        Distribution::ExpReal(rational(1, 1)),
        Distribution::delta(),
        Distribution::DeltaDeriv(3),
        Distribution::Monomial(3),
        Distribution::CosWave(rational(1, 1)),
        Distribution::SinWave(rational(1, 2)),
        Distribution::combo(vec![(Scalar::i(), Distribution::delta()), (Scalar::one(), Distribution::Monomial(1))]),
    ] {
        for m in 0..9usize {
            let r = classify_and_sum(&g, &Distribution::hermite(m), &cfg).unwrap();
            let c = coeff(&g, m, p).unwrap();
            if r.status == Status::ZeroByParity {
                assert!(c.is_zero(), "{g}, m = {m}");
                continue;
            }
            assert_eq!(r.status, Status::AbsolutelyConvergent);
            assert_eq!(r.value.as_ref().unwrap(), &c.conj(), "{g}, m = {m}");
            let sums = &r.diagnostics.partial_sums;
            let mut changes = 0;
            let mut prev = Complex::zero(p);
            for (_, s) in sums {
                if *s != prev {
                    changes += 1;
                }
                prev = s.clone();
            }
            assert!(changes <= 1, "{g}, m = {m}");
            if let Some(e) = exact_coeff(&g, m) {
                assert_eq!(r.exact_value.as_ref(), Some(&e), "{g}, m = {m}");
            }
        }
    }
}

pub fn canonical_commutator_is_the_identity() {
    let comm = OperatorExpr::word(&[Letter::C, Letter::Cdag])
        .add(OperatorExpr::word(&[Letter::Cdag, Letter::C]).scaled(&-Scalar::one()));
    let mut runner = proptest::test_runner::TestRunner::deterministic();
    let strategy = prop::collection::vec(-20i64..=20, 1..10);
    for _ in 0..20 {
        let v = strategy.new_tree(&mut runner).unwrap().current();
        let list: Vec<Scalar> = v.iter().map(|&a| Scalar::real(rational(a, 3))).collect();
        let seq = CoeffSequence::new(Distribution::hermite_coefficients(list.clone()), p());
        let mut applied = apply(&comm, Box::new(seq));
        for n in 0..list.len() + 2 {
            let want = list.get(n).and_then(Scalar::to_exact).unwrap_or_else(ExactTerm::zero);
            assert_eq!(applied.exact(n), Some(want), "n = {n}");
        }
    }
}

pub fn number_operator_on_normalized_monomials() {
    let n_op = OperatorExpr::word(&[Letter::X, Letter::D]);
    for k in 0..=6u32 {
        let phi = Distribution::NormalizedMonomial(k);
        let mut applied = apply(&n_op, Box::new(CoeffSequence::new(phi.clone(), p())));
        for n in 0..30usize {
            let want = ExactTerm::from_integer(k) * exact_coeff(&phi, n).unwrap();
            assert_eq!(applied.exact(n), Some(want), "k = {k}, n = {n}");
        }
        // the symbolic route lands on the same eigenvalue
        let sym = weak_apply(WeakOp::MulX, &weak_apply(WeakOp::Deriv, &phi).unwrap()).unwrap();
        let want = Distribution::combo(vec![(Scalar::real(BigRational::from_integer(k.into())), phi.clone())]);
        assert_eq!(sym, want, "k = {k}");
    }
}

pub fn applied_sequences_track_parity_and_support() {
    let seq = CoeffSequence::new(Distribution::hermite(3), p());
    let a = apply(&OperatorExpr::letter(Letter::Cdag), Box::new(seq));
    assert_eq!(a.support(), Some(5));
    assert_eq!(a.parity(), Some(eprod_core::Parity::Even));
}

pub fn two_lists() -> impl Strategy<Value = (Vec<Scalar>, Vec<Scalar>)> {
    (finite_list(), finite_list())
}

pub fn linear_inputs() -> impl Strategy<Value = (Vec<Scalar>, Vec<Scalar>, Vec<Scalar>, Scalar, Scalar)> {
    (finite_list(), finite_list(), finite_list(), scalar(), scalar())
}

/// Coefficients and ratios (in tenths) whose Abel means are analytic well
/// past `r = 1`.
pub fn convergent_series() -> impl Strategy<Value = (i64, i64, i64, i64, i64, i64)> {
    (-50i64..=50, -50i64..=50, -6i64..=6, -6i64..=6, -5i64..=5, -4i64..=4)
}

pub fn slow_series() -> impl Strategy<Value = (i64, i64, i64, i64)> {
    (-50i64..=50, -9i64..=9, -5i64..=5, -9i64..=9)
}
