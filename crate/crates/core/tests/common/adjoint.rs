//! `<X^ddagger Phi, phi>_e = <Phi, X phi>_e`, each side summed on its own.

use eprod_core::exact::rational;
use eprod_core::operators::adjoint_check;
use eprod_core::{Distribution, Letter, OperatorExpr, Real, Scalar, SummationConfig};

pub fn op(word: &[Letter]) -> OperatorExpr {
    OperatorExpr::word(word)
}

/// `(label, X, Phi, phi)`
pub fn triples() -> Vec<(&'static str, OperatorExpr, Distribution, Distribution)> {
    let e1 = Distribution::ExpReal(rational(1, 1));
    let e_half = Distribution::ExpReal(rational(1, 2));
    let list = Distribution::hermite_coefficients(vec![
        Scalar::zero(),
        Scalar::real(rational(1, 1)),
        Scalar::real(rational(2, 1)),
        Scalar::real(rational(3, 1)),
    ]);
    vec![
        ("c; delta; e(3)", op(&[Letter::C]), Distribution::delta(), Distribution::hermite(3)),
        ("x; delta; exp(1)", op(&[Letter::X]), Distribution::delta(), e1.clone()),
        ("D; delta; exp(1/2)", op(&[Letter::D]), Distribution::delta(), e_half.clone()),
        ("1; delta; cos(1)", OperatorExpr::identity(), Distribution::delta(), Distribution::CosWave(rational(1, 1))),
        ("cdag; delta'; e(2)", op(&[Letter::Cdag]), Distribution::DeltaDeriv(1), Distribution::hermite(2)),
        ("x; e(4); exp(1)", op(&[Letter::X]), Distribution::hermite(4), e1),
        ("c; e1+2e2+3e3; cos(1/2)", op(&[Letter::C]), list, Distribution::CosWave(rational(1, 2))),
        ("D; e(1); x^2", op(&[Letter::D]), Distribution::hermite(1), Distribution::Monomial(2)),
        ("x x; delta; exp(1/2)", op(&[Letter::X, Letter::X]), Distribution::delta(), e_half),
        (
            "c + cdag; delta; sin(1)",
            op(&[Letter::C]).add(op(&[Letter::Cdag])),
            Distribution::delta(),
            Distribution::SinWave(rational(1, 1)),
        ),
    ]
}

/// Both sides agree to `1e-15`, relative to the larger of 1 and the value.
pub fn sides_agree(x: &OperatorExpr, big: &Distribution, small: &Distribution) -> Result<(), String> {
    let cfg = SummationConfig::default();
    let p = cfg.precision.working_bits();
    let rep = adjoint_check(x, big, small, &cfg).map_err(|e| e.to_string())?;
    let (a, b) = (rep.left.value.clone().unwrap(), rep.right.value.clone().unwrap());
    let tol = Real::parse("1e-15", p).unwrap() * b.abs().max(Real::one(p));
    if rep.difference <= tol {
        Ok(())
    } else {
        Err(format!("{a:?} vs {b:?}"))
    }
}

pub fn generators_have_the_expected_adjoints() -> Result<(), String> {
    let minus_d = op(&[Letter::D]).scaled(&Scalar::real(rational(-1, 1)));
    let checks = [
        ("c", op(&[Letter::C]).ddagger(), op(&[Letter::Cdag])),
        ("x", op(&[Letter::X]).ddagger(), op(&[Letter::X])),
        ("D", op(&[Letter::D]).ddagger(), minus_d),
        ("c twice", op(&[Letter::C]).ddagger().ddagger(), op(&[Letter::C])),
    ];
    for (what, got, want) in checks {
        if got != want {
            return Err(format!("{what}: {got} != {want}"));
        }
    }
    Ok(())
}
