//! Independent oracles and generators shared by the integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::Rng;

use arithdisc::numfield::{builtin, FieldElement, IntegerElement, NumberField};
use arithdisc::series::{Layout, RingDescriptor, TruncatedSeries};

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Coefficients of `(1 - k^2 t)^{1/k}` from the generalized binomial
/// theorem: `c_n = binom(1/k, n) (-k^2)^n`.
pub fn binomial_root(k: u32, order: usize) -> Vec<BigRational> {
    let alpha = rat(1, i64::from(k));
    let x = -BigRational::from_integer(BigInt::from(i64::from(k) * i64::from(k)));
    let mut out = vec![BigRational::one()];
    for n in 1..order {
        let prev = out[n - 1].clone();
        let step = (&alpha - BigRational::from_integer(BigInt::from(n - 1))) / BigRational::from_integer(BigInt::from(n));
        out.push(prev * step * &x);
    }
    out
}

pub fn zeros(field: &NumberField, order: usize) -> Vec<FieldElement> {
    vec![FieldElement::zero(field.degree()); order]
}

/// Schoolbook product modulo `t^order`.
pub fn naive_mul(field: &NumberField, a: &[FieldElement], b: &[FieldElement], order: usize) -> Vec<FieldElement> {
    let mut out = zeros(field, order);
    for (i, x) in a.iter().enumerate().take(order) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(order - i) {
            out[i + j] = &out[i + j] + &field.fmul(x, y);
        }
    }
    out
}

pub fn naive_add(a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn naive_sub(a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `1 / a` modulo `t^order` by the triangular recurrence; `a_0 != 0`.
pub fn naive_inverse(field: &NumberField, a: &[FieldElement], order: usize) -> Vec<FieldElement> {
    let inv0 = field.finv(&a[0]).expect("invertible constant term");
    let mut out = zeros(field, order);
    out[0] = inv0.clone();
    for n in 1..order {
        let mut acc = FieldElement::zero(field.degree());
        for j in 1..=n.min(a.len() - 1) {
            acc = &acc + &field.fmul(&a[j], &out[n - j]);
        }
        out[n] = -&field.fmul(&acc, &inv0);
    }
    out
}

/// `sum_k p_k y^k` by Horner's rule.
pub fn naive_eval(field: &NumberField, poly: &[Vec<FieldElement>], y: &[FieldElement], order: usize) -> Vec<FieldElement> {
    let mut acc = zeros(field, order);
    for p in poly.iter().rev() {
        acc = naive_add(&naive_mul(field, &acc, y, order), &p[..order]);
    }
    acc
}

/// The root `y ≡ 0 (mod t)` of `sum_k p_k Y^k` by Newton's iteration in
/// `K[[t]]`; needs `p_1(0)` invertible and `p_0(0) = 0`.
pub fn newton_root(field: &NumberField, poly: &[Vec<FieldElement>], order: usize) -> Vec<FieldElement> {
    let deriv: Vec<Vec<FieldElement>> = poly
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, p)| p.iter().map(|c| c.scale(&BigRational::from_integer(BigInt::from(k)))).collect())
        .collect();
    let mut y = zeros(field, order);
    let mut precision = 1;
    while precision < order {
        precision = (2 * precision).min(order);
        let value = naive_eval(field, poly, &y, order);
        let slope = naive_eval(field, &deriv, &y, order);
        let step = naive_mul(field, &value, &naive_inverse(field, &slope, order), order);
        y = naive_sub(&y, &step);
    }
    y
}

pub fn gaussian() -> Arc<NumberField> {
    Arc::new(builtin::gaussian())
}

/// `Z; 2, 3, 5` with `a_1 = 2`.
pub fn rational_layout() -> Layout {
    let q = Arc::new(builtin::rational());
    Layout::new(q.clone(), vec![q.int(2), q.int(3), q.int(5)], 0).unwrap()
}

/// `Z[i]; 1 + i, 3, 2 + i` with `a_1 = 1 + i`.
pub fn gaussian_layout() -> Layout {
    let k = gaussian();
    let elems = vec![k.element(&[1, 1]), k.int(3), k.element(&[2, 1])];
    Layout::new(k, elems, 0).unwrap()
}

/// `Z[ζ_3]; 2, c, c̄` with `c = 2 - ζ_3` of norm 7, the branch elements of
/// the one-orbit flagship problem.
pub fn eisenstein_layout() -> Layout {
    let k = Arc::new(builtin::eisenstein());
    let c = k.element(&[2, -1]);
    let cbar = k.apply(1, &c);
    Layout::new(k.clone(), vec![k.int(2), c, cbar], 0).unwrap()
}

pub fn random_integer(field: &NumberField, height: i64, rng: &mut impl Rng) -> IntegerElement {
    IntegerElement((0..field.degree()).map(|_| BigInt::from(rng.gen_range(-height..=height))).collect())
}

/// Random coefficients `u / a^e` with `|u|_coords <= height`, `e <= max_exp`.
pub fn random_series(ring: &RingDescriptor, order: usize, height: i64, max_exp: u32, rng: &mut impl Rng) -> TruncatedSeries {
    let loc = &ring.loc;
    let coeffs = (0..order)
        .map(|_| {
            let u = random_integer(loc.field(), height, rng);
            loc.make(u, rng.gen_range(0..=max_exp))
        })
        .collect();
    TruncatedSeries::new(ring.clone(), coeffs)
}

pub fn field_coeffs_eq(a: &[FieldElement], b: &[FieldElement]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x == y)
}

pub fn is_zero_series(a: &[FieldElement]) -> bool {
    a.iter().all(FieldElement::is_zero)
}

pub fn rationals_to_field(field: &NumberField, c: &[BigRational]) -> Vec<FieldElement> {
    c.iter().map(|x| field.rational(x.clone())).collect()
}

/// Exact postconditions of a Weierstrass division `f = r + g h`: the
/// identity (via schoolbook products), `h_0 = 1` and integrality of the
/// certified remainder above the shift.
pub fn check_division(
    f: &TruncatedSeries,
    g: &TruncatedSeries,
    out: &arithdisc::series::WeierstrassOutcome,
) -> Result<(), String> {
    let field = f.field().clone();
    let order = f.order();
    let gh = naive_mul(&field, &g.field_coeffs(), &out.quotient.field_coeffs(), order);
    if !field_coeffs_eq(&f.field_coeffs(), &naive_add(&out.remainder.field_coeffs(), &gh)) {
        return Err("f != r + g h".into());
    }
    if out.quotient.coeff(0) != &f.loc().one() {
        return Err("h_0 != 1".into());
    }
    let cert = out.certified_remainder();
    if let Some(i) = (out.shift + 1..order).find(|&i| !cert.coeff(i).is_integral()) {
        return Err(format!("remainder coefficient {i} is not integral"));
    }
    if out.non_integral.iter().any(|&i| i != out.shift) {
        return Err(format!("unexpected non-integral indices {:?}", out.non_integral));
    }
    Ok(())
}

/// A divisor with valuation `shift` and non-zero leading coefficient.
pub fn random_divisor(ring: &RingDescriptor, order: usize, shift: usize, rng: &mut impl Rng) -> TruncatedSeries {
    let mut g = random_series(ring, order, 3, 2, rng);
    for i in 0..shift.min(order) {
        g.set_coeff(i, ring.loc.zero());
    }
    if shift < order && g.coeff(shift).is_zero() {
        g.set_coeff(shift, ring.loc.one());
    }
    g
}

/// Exact postconditions of an additive splitting `f = g + h`.
pub fn check_split(f: &TruncatedSeries, out: &arithdisc::series::SplitOutcome, all: &RingDescriptor) -> Result<(), String> {
    let g = out.g.convert(all).map_err(|e| e.to_string())?;
    let h = out.h.convert(all).map_err(|e| e.to_string())?;
    let f = f.convert(all).map_err(|e| e.to_string())?;
    if g.add(&h) != f {
        return Err("g + h != f".into());
    }
    if g.valuation() < f.valuation() || h.valuation() < f.valuation() {
        return Err(format!("valuation dropped: {} / {} vs {}", g.valuation(), h.valuation(), f.valuation()));
    }
    Ok(())
}

/// `1 + y` with `y ≡ 0 (mod t)` having random coefficients up to `degree`.
pub fn random_near_identity(
    ring: &RingDescriptor,
    n: usize,
    order: usize,
    degree: usize,
    rng: &mut impl Rng,
) -> arithdisc::matfact::SeriesMatrix {
    let entries = (0..n * n)
        .map(|k| {
            let mut s = random_series(ring, degree.min(order - 1) + 1, 3, 1, rng).pad(order);
            s.set_coeff(0, if k / n == k % n { ring.loc.one() } else { ring.loc.zero() });
            s
        })
        .collect();
    arithdisc::matfact::SeriesMatrix::new(n, entries)
}

/// A product of `count` elementary matrices `1 + x E_{ij}` with random
/// polynomial `x`, so the determinant is `1`.
pub fn random_unimodular(
    ring: &RingDescriptor,
    n: usize,
    order: usize,
    count: usize,
    rng: &mut impl Rng,
) -> arithdisc::matfact::SeriesMatrix {
    use arithdisc::matfact::SeriesMatrix;
    let mut b = SeriesMatrix::identity(ring, n, order);
    for _ in 0..count {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let mut e = SeriesMatrix::identity(ring, n, order);
        e.set(i, j, random_series(ring, 3.min(order), 2, 1, rng).pad(order));
        b = b.mul(&e);
    }
    b
}
