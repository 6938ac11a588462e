//! Seeded random inputs for scenarios that leave their data unspecified.

use rand::Rng;

use arithdisc::matfact::SeriesMatrix;
use arithdisc::numfield::{IntegerElement, LocalizedElement, NumberField};
use arithdisc::regroot::SeriesPolynomial;
use arithdisc::series::{RingDescriptor, TruncatedSeries};

pub fn integer(field: &NumberField, height: i64, rng: &mut impl Rng) -> IntegerElement {
    IntegerElement((0..field.degree()).map(|_| rng.gen_range(-height..=height).into()).collect())
}

fn coefficient(ring: &RingDescriptor, height: i64, max_exp: u32, rng: &mut impl Rng) -> LocalizedElement {
    let num = integer(ring.field(), height, rng);
    let exp = if ring.loc.is_trivial() { 0 } else { rng.gen_range(0..=max_exp) };
    ring.loc.make(num, exp)
}

pub fn series(ring: &RingDescriptor, order: usize, height: i64, max_exp: u32, rng: &mut impl Rng) -> TruncatedSeries {
    let coeffs = (0..order).map(|_| coefficient(ring, height, max_exp, rng)).collect();
    TruncatedSeries::new(ring.clone(), coeffs)
}

/// A series of valuation exactly `shift`.
pub fn divisor(ring: &RingDescriptor, order: usize, shift: usize, height: i64, rng: &mut impl Rng) -> TruncatedSeries {
    let mut g = series(ring, order, height, 2, rng);
    for i in 0..shift.min(order) {
        g.set_coeff(i, ring.loc.zero());
    }
    if shift < order {
        while g.coeff(shift).is_zero() {
            g.set_coeff(shift, coefficient(ring, height, 2, rng));
        }
    }
    g
}

/// A product of `count` elementary matrices with polynomial entries of
/// degree below 3; its determinant is 1.
pub fn unimodular(ring: &RingDescriptor, n: usize, order: usize, count: usize, rng: &mut impl Rng) -> SeriesMatrix {
    let mut b = SeriesMatrix::identity(ring, n, order);
    if n < 2 {
        return b;
    }
    for _ in 0..count {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let mut e = SeriesMatrix::identity(ring, n, order);
        e.set(i, j, series(ring, order.min(3), 3, 1, rng).pad(order));
        b = b.mul(&e);
    }
    b
}

/// Degree `degree` with `p_1(0) = 1`, `p_k(0) = 0` otherwise, and small
/// integral coefficients.
pub fn normalized_polynomial(ring: &RingDescriptor, order: usize, degree: usize, rng: &mut impl Rng) -> SeriesPolynomial {
    let coeffs = (0..=degree.max(1))
        .map(|k| {
            let mut p = series(ring, order, 3, 0, rng);
            p.set_coeff(0, if k == 1 { ring.loc.one() } else { ring.loc.zero() });
            p
        })
        .collect();
    SeriesPolynomial::new(coeffs).expect("coefficients share one ring")
}
