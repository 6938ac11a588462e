//! Bounded searches: small elements of `Z[1/a]` and coprime conjugate
//! families.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use super::division::bezout_coprime;
use super::embed::NormEnclosure;
use super::{FieldElement, IntegerElement, Localization, LocalizedElement, NumberField};
use crate::error::{Error, Result};
use crate::{Config, Verdict};

/// `b = sum_j c_j a^{-j}` with `||b|| < 1`.
#[derive(Clone, Debug)]
pub struct UnitBallElement {
    pub value: FieldElement,
    pub localized: LocalizedElement,
    /// `c_0, ..., c_D`.
    pub coeffs: Vec<BigInt>,
    pub norm: NormEnclosure,
}

/// Values `0, 1, -1, 2, -2, ..., h, -h`.
fn small_values(h: i64) -> Vec<i64> {
    let mut v = vec![0];
    for k in 1..=h {
        v.push(k);
        v.push(-k);
    }
    v
}

/// Visits all tuples over `values` in lexicographic order, stopping early
/// when `visit` returns `Some`.
fn for_each_tuple<T>(len: usize, values: &[i64], mut visit: impl FnMut(&[i64]) -> Option<T>) -> Option<T> {
    let mut idx = vec![0usize; len];
    let mut tuple: Vec<i64> = vec![values[0]; len];
    loop {
        if let Some(t) = visit(&tuple) {
            return Some(t);
        }
        let mut pos = len;
        loop {
            if pos == 0 {
                return None;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < values.len() {
                tuple[pos] = values[idx[pos]];
                break;
            }
            idx[pos] = 0;
            tuple[pos] = values[0];
        }
    }
}

/// Finds a non-zero `b ∈ Z[1/a]` with certified `||b|| < 1`.
///
/// Candidates `sum_{j <= D} c_j a^{-j}` are tried by increasing degree `D`,
/// then increasing height `max |c_j|`, then lexicographically in
/// `(c_D, ..., c_0)` with values ordered `0, 1, -1, 2, -2, ...`.
pub fn unit_ball_search(
    loc: &Localization,
    degree_bound: u32,
    height_bound: u32,
    cfg: &Config,
) -> Result<UnitBallElement> {
    let field = loc.field();
    let a = loc.base();
    if field.norm(a).abs() <= BigInt::one() {
        return Err(Error::Precondition("unit_ball_search needs a non-zero non-unit a".into()));
    }
    let inv_a = field.finv(&a.to_field())?;
    let mut inv_pows = vec![field.one().to_field()];
    for d in 1..=degree_bound as usize {
        inv_pows.push(field.fmul(&inv_pows[d - 1], &inv_a));
    }
    let one = NormEnclosure::exact(BigRational::one());
    for d in 1..=degree_bound as usize {
        for h in 1..=height_bound as i64 {
            let values = small_values(h);
            let found = for_each_tuple(d + 1, &values, |t| {
                // t = (c_D, ..., c_0)
                if t[0] == 0 || t.iter().map(|c| c.abs()).max() != Some(h) {
                    return None;
                }
                let mut b = FieldElement::zero(field.degree());
                for (j, &c) in t.iter().rev().enumerate() {
                    if c != 0 {
                        b = &b + &inv_pows[j].scale(&BigRational::from_integer(c.into()));
                    }
                }
                if b.is_zero() {
                    return None;
                }
                let check = field.certify_norm_below(&b, |_| one.clone(), cfg);
                (check.verdict == Verdict::Pass).then(|| (b, check.value, t.to_vec()))
            });
            if let Some((value, norm, t)) = found {
                let localized = loc.from_field(&value).expect("b lies in Z[1/a] by construction");
                let coeffs = t.iter().rev().map(|&c| BigInt::from(c)).collect();
                return Ok(UnitBallElement { value, localized, coeffs, norm });
            }
        }
    }
    Err(Error::SearchExhausted(format!(
        "no element of norm < 1 with degree <= {degree_bound} and height <= {height_bound}"
    )))
}

/// Values `h, -h, h-1, -(h-1), ..., 1, -1, 0`.
fn descending_values(h: i64) -> Vec<i64> {
    let mut v = Vec::new();
    for k in (1..=h).rev() {
        v.push(k);
        v.push(-k);
    }
    v.push(0);
    v
}

/// True when the ideal `(x, y)` is all of `R`.
pub fn coprime(field: &NumberField, x: &IntegerElement, y: &IntegerElement) -> bool {
    bezout_coprime(field, x, y).is_ok()
}

/// Orbit of `c` under the listed automorphisms, in list order.
pub fn orbit(field: &NumberField, c: &IntegerElement, gal: &[usize]) -> Vec<IntegerElement> {
    gal.iter().map(|&g| field.apply(g, c)).collect()
}

/// Finds `count` non-units `c_j` whose conjugates under `gal` are all
/// distinct, such that `{b} ∪ {c_j^g}` is pairwise coprime.
///
/// Elements are enumerated by coordinate height `h = 1, 2, ...`; within one
/// height, tuples run lexicographically with coordinate values ordered
/// `h, -h, h-1, ..., 0`. Each accepted element's orbit joins the family
/// before the search continues.
pub fn conjugate_coprime_search(
    field: &NumberField,
    gal: &[usize],
    b: &IntegerElement,
    count: usize,
    height_bound: u32,
) -> Result<Vec<IntegerElement>> {
    if b.is_zero() {
        return Err(Error::Precondition("conjugate_coprime_search needs b != 0".into()));
    }
    if count == 0 {
        return Ok(Vec::new());
    }
    let n = field.degree();
    let mut family = vec![b.clone()];
    let mut found = Vec::new();
    for h in 1..=height_bound as i64 {
        let values = descending_values(h);
        for_each_tuple(n, &values, |t| {
            if t.iter().map(|c| c.abs()).max() != Some(h) {
                return None;
            }
            let c = IntegerElement::from_i64(t);
            if field.norm(&c).abs() <= BigInt::one() {
                return None;
            }
            let conj = orbit(field, &c, gal);
            let distinct = conj.iter().enumerate().all(|(i, x)| conj[..i].iter().all(|y| y != x));
            if !distinct {
                return None;
            }
            for (i, x) in conj.iter().enumerate() {
                if conj[..i].iter().any(|y| !coprime(field, x, y)) {
                    return None;
                }
                if family.iter().any(|y| !coprime(field, x, y)) {
                    return None;
                }
            }
            family.extend(conj);
            found.push(c);
            (found.len() == count).then_some(())
        });
        if found.len() == count {
            return Ok(found);
        }
    }
    Err(Error::SearchExhausted(format!(
        "found {} of {count} coprime primitive elements up to height {height_bound}",
        found.len()
    )))
}
