//! Closed-form coefficients and moment integrals against Gauss–Hermite
//! quadrature, which knows nothing about the closed forms.

use eprod_core::distributions::{coeff, quadrature_coeff, CoeffSequence, Coefficients, L2Sample, SampledFunction};
use eprod_core::exact::rational;
use eprod_core::hermite_core::{eigenfunction_eval, eigenfunction_values, factorial};
use eprod_core::quadrature::{GaussHermite, QuadratureScale};
use eprod_core::special_functions::moment_integral;
use eprod_core::{Complex, Distribution, Precision, Real, Scalar};
use num_rational::BigRational;

const N_MAX: usize = 30;

fn p() -> usize {
    Precision::default().working_bits()
}

fn tol(p: usize) -> Real {
    let d = Precision::default().digits() as i64;
    Real::parse(&format!("1e-{}", d - 15), p).unwrap()
}

fn assert_close(got: &Complex, want: &Complex, what: &str) {
    let p = got.precision();
    let err = (got - want).abs();
    let scale = want.abs().max(Real::one(p));
    assert!(err <= tol(p) * scale, "{what}: got {got:?}, want {want:?}");
}

fn pow(x: &Real, k: u32) -> Real {
    x.powi(k)
}

pub fn monomials_and_normalized_monomials() {
    let p = p();
    for k in 0..=6u32 {
        let kf = Real::from_bigint(&factorial(k), p).sqrt();
        for n in 0..=N_MAX {
            let q = quadrature_coeff(|x| Complex::from_real(pow(x, k)), n, 60, QuadratureScale::Tempered, p).unwrap();
            assert_close(&coeff(&Distribution::Monomial(k), n, p).unwrap(), &q, &format!("x^{k}, n={n}"));
            let qn = q.scale(&kf.recip());
            let got = coeff(&Distribution::NormalizedMonomial(k), n, p).unwrap();
            assert_close(&got, &qn, &format!("phi({k}), n={n}"));
        }
    }
}

/// `e_n^(k)(0) = (2 pi)^(-1/2) i^k (-i)^n \int xi^k e_n(xi) d xi`, the
/// Fourier-side route to derivatives at the origin.
pub fn delta_derivatives_through_fourier_side() {
    let p = p();
    let inv_root_2pi = (Real::pi(p).mul_pow2(1)).sqrt().recip();
    for k in 0..=5u32 {
        let kf = Real::from_bigint(&factorial(k), p).sqrt();
        for n in 0..=N_MAX {
            let m = quadrature_coeff(|x| Complex::from_real(pow(x, k)), n, 60, QuadratureScale::Tempered, p).unwrap();
            let deriv = m.scale(&inv_root_2pi).mul_i_pow(k as i64 - n as i64);
            let sign = if k % 2 == 1 { -Real::one(p) } else { Real::one(p) };
            let want = deriv.scale(&sign);
            let got = coeff(&Distribution::DeltaDeriv(k), n, p).unwrap();
            assert_close(&got, &want, &format!("delta^({k}), n={n}"));
            let got = coeff(&Distribution::NormalizedDeltaDeriv(k), n, p).unwrap();
            assert_close(&got, &deriv.scale(&kf.recip()), &format!("psi({k}), n={n}"));
        }
    }
}

pub fn exponentials_and_waves() {
    let p = p();
    let rule = GaussHermite::new(160, p);
    for g in [rational(-1, 1), rational(1, 2), rational(2, 1), rational(0, 1)] {
        let gr = Real::from_rational(&g, p);
        let d = Distribution::ExpReal(g.clone());
        for n in 0..=N_MAX {
            let q = rule
                .coefficient(n, QuadratureScale::Tempered, |x| Ok(Complex::from_real((&gr * x).exp())))
                .unwrap();
            assert_close(&coeff(&d, n, p).unwrap(), &q, &format!("exp({g}), n={n}"));
        }
    }
    for w in [rational(1, 1), rational(3, 2)] {
        let wr = Real::from_rational(&w, p);
        for n in 0..=N_MAX {
            let qc = rule
                .coefficient(n, QuadratureScale::Tempered, |x| Ok(Complex::from_real((&wr * x).cos())))
                .unwrap();
            let qs = rule
                .coefficient(n, QuadratureScale::Tempered, |x| Ok(Complex::from_real((&wr * x).sin())))
                .unwrap();
            assert_close(&coeff(&Distribution::CosWave(w.clone()), n, p).unwrap(), &qc, &format!("cos({w}), n={n}"));
            assert_close(&coeff(&Distribution::SinWave(w.clone()), n, p).unwrap(), &qs, &format!("sin({w}), n={n}"));
        }
    }
}

pub fn finite_samples_and_combinations() {
    let p = p();
    let list: Vec<Scalar> = vec![
        Scalar::real(rational(1, 3)),
        Scalar::zero(),
        Scalar::new(rational(-2, 1), rational(1, 5)),
        Scalar::real(rational(7, 4)),
    ];
    let h = Distribution::hermite_coefficients(list.clone());
    let rule = GaussHermite::new(40, p);
    let eval_list = |x: &Real| -> Complex {
        let mut acc = Complex::zero(p);
        for (j, s) in list.iter().enumerate() {
            acc += &(s.to_complex(p).scale(&eigenfunction_eval(j as u32, x)));
        }
        acc
    };
    for n in 0..=N_MAX {
        let q = rule.coefficient(n, QuadratureScale::Gaussian, |x| Ok(eval_list(x))).unwrap();
        assert_close(&coeff(&h, n, p).unwrap(), &q, &format!("hermite list, n={n}"));
    }

    // A sampled function projected by quadrature reproduces its expansion.
    let sampled = SampledFunction::new("e2+3e5", QuadratureScale::Gaussian, None, move |x| {
        let v = eigenfunction_eval(2, x) + Real::from_u64(3, x.precision()) * eigenfunction_eval(5, x);
        Complex::from_real(v)
    });
    let mut d = CoeffSequence::with_options(Distribution::L2Sample(L2Sample::Function(sampled)), p, 60, None);
    for n in 0..=N_MAX {
        let want = match n {
            2 => Complex::one(p),
            5 => Complex::from_real(Real::from_u64(3, p)),
            _ => Complex::zero(p),
        };
        assert_close(&d.coeff(n).unwrap(), &want, &format!("sample, n={n}"));
    }

    // 2 x^2 + i delta
    let combo = Distribution::combo(vec![
        (Scalar::real(rational(2, 1)), Distribution::Monomial(2)),
        (Scalar::i(), Distribution::delta()),
    ]);
    for n in 0..=N_MAX {
        let a = coeff(&Distribution::Monomial(2), n, p).unwrap();
        let b = coeff(&Distribution::delta(), n, p).unwrap();
        let want = a.scale(&Real::from_u64(2, p)) + b.mul_i_pow(1);
        assert_close(&coeff(&combo, n, p).unwrap(), &want, &format!("combo, n={n}"));
    }
}

/// `I_k(p) = \int x^p e^{-x^2/2} H_k(x) dx` with `H_k = e_k e^{x^2/2} / N_k`.
pub fn moment_integrals_against_quadrature() {
    let p = p();
    let rule = GaussHermite::new(40, p);
    for k in 0..=20u32 {
        let nk = eprod_core::hermite_core::normalization(k).to_real(p);
        for q in 0..=20u32 {
            let want = rule
                .coefficient(k as usize, QuadratureScale::Tempered, |x| Ok(Complex::from_real(pow(x, q))))
                .unwrap()
                .scale(&nk.recip());
            let got = moment_integral(k, q).unwrap().to_complex(p);
            assert_close(&got, &want, &format!("I_{k}({q})"));
        }
    }
}

pub fn orthonormality() {
    let p = p();
    let rule = GaussHermite::new(50, p);
    // e_j(t) exp(t^2/2) at every node, so that the weights carry exp(-t^2)
    let table: Vec<Vec<Real>> = rule
        .nodes()
        .iter()
        .map(|t| {
            let lift = (t * t).mul_pow2(-1).exp();
            eigenfunction_values(40, t).into_iter().map(|v| v * &lift).collect()
        })
        .collect();
    for n in 0..=40usize {
        for m in 0..=40usize {
            let mut acc = Real::zero(p);
            for (row, w) in table.iter().zip(rule.weights()) {
                acc += &(w * &row[n] * &row[m]);
            }
            let want = if n == m { Complex::one(p) } else { Complex::zero(p) };
            assert_close(&Complex::from_real(acc), &want, &format!("<e_{n}, e_{m}>"));
        }
    }
}

pub fn rational_scalars_survive_projection() {
    let p = p();
    let third = BigRational::new(1.into(), 3.into());
    let d = Distribution::hermite_coefficients(vec![Scalar::zero(), Scalar::real(third.clone())]);
    let c = coeff(&d, 1, p).unwrap();
    assert_close(&c, &Complex::from_real(Real::from_rational(&third, p)), "1/3 e_1");
}
