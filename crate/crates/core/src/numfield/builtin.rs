//! Preset fields with verified integral bases.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::NumberField;
use crate::error::{Error, Result};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn rows(r: &[&[(i64, i64)]]) -> Vec<Vec<BigRational>> {
    r.iter().map(|row| row.iter().map(|&(n, d)| q(n, d)).collect()).collect()
}

fn quadratic(name: &str, c0: i64, c1: i64, basis: &[&[(i64, i64)]], conj: &[(i64, i64)]) -> NumberField {
    NumberField::new(
        name,
        vec![BigInt::from(c0), BigInt::from(c1), BigInt::from(1)],
        rows(basis),
        rows(&[&[(0, 1), (1, 1)], conj]),
    )
    .expect("builtin field data is valid")
}

/// `Q`, presented as `Q[x]/(x)`.
pub fn rational() -> NumberField {
    NumberField::new("rational", vec![BigInt::from(0), BigInt::from(1)], rows(&[&[(1, 1)]]), rows(&[&[(0, 1)]]))
        .expect("builtin field data is valid")
}

/// `Q(i)` with basis `{1, i}`.
pub fn gaussian() -> NumberField {
    quadratic("gaussian", 1, 0, &[&[(1, 1), (0, 1)], &[(0, 1), (1, 1)]], &[(0, 1), (-1, 1)])
}

/// `Q(zeta_4)`; the same field as [`gaussian`] under its cyclotomic name.
pub fn cyclotomic4() -> NumberField {
    quadratic("cyclotomic4", 1, 0, &[&[(1, 1), (0, 1)], &[(0, 1), (1, 1)]], &[(0, 1), (-1, 1)])
}

/// `Q(zeta_3)` with basis `{1, zeta_3}`; conjugation sends `zeta_3` to
/// `zeta_3^2 = -1 - zeta_3`.
pub fn eisenstein() -> NumberField {
    quadratic("eisenstein", 1, 1, &[&[(1, 1), (0, 1)], &[(0, 1), (1, 1)]], &[(-1, 1), (-1, 1)])
}

pub fn sqrt2() -> NumberField {
    quadratic("sqrt2", -2, 0, &[&[(1, 1), (0, 1)], &[(0, 1), (1, 1)]], &[(0, 1), (-1, 1)])
}

pub fn sqrt_minus2() -> NumberField {
    quadratic("sqrt-2", 2, 0, &[&[(1, 1), (0, 1)], &[(0, 1), (1, 1)]], &[(0, 1), (-1, 1)])
}

/// `Q(sqrt 5)` with the non-monogenic-looking basis `{1, (1 + sqrt 5)/2}`.
pub fn sqrt5() -> NumberField {
    quadratic("sqrt5", -5, 0, &[&[(1, 1), (0, 1)], &[(1, 2), (1, 2)]], &[(0, 1), (-1, 1)])
}

pub const NAMES: &[&str] = &["rational", "gaussian", "cyclotomic4", "eisenstein", "sqrt2", "sqrt-2", "sqrt5"];

pub fn by_name(name: &str) -> Result<NumberField> {
    Ok(match name {
        "rational" => rational(),
        "gaussian" => gaussian(),
        "cyclotomic4" => cyclotomic4(),
        "eisenstein" => eisenstein(),
        "sqrt2" => sqrt2(),
        "sqrt-2" => sqrt_minus2(),
        "sqrt5" => sqrt5(),
        other => return Err(Error::Precondition(format!("unknown builtin field `{other}`"))),
    })
}
