mod common;

use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use arithdisc::kummer::hensel_root;
use arithdisc::numfield::{builtin, FieldElement, Localization, NumberField};
use arithdisc::regroot::{normalize_poly, recursive_root, SeriesPolynomial};
use arithdisc::series::{RingDescriptor, TruncatedSeries};
use arithdisc::Error;

use common::{field_coeffs_eq, is_zero_series, naive_eval, newton_root, random_series};

fn integral_ring(field: NumberField) -> RingDescriptor {
    RingDescriptor::formal(Arc::new(Localization::integral(Arc::new(field))))
}

fn z_half() -> RingDescriptor {
    let q = Arc::new(builtin::rational());
    let two = q.int(2);
    RingDescriptor::formal(Arc::new(Localization::new(q, two).unwrap()))
}

/// A random polynomial in normalized shape of degree `1..=4`.
fn random_normalized(ring: &RingDescriptor, order: usize, max_exp: u32, rng: &mut impl Rng) -> SeriesPolynomial {
    let degree = rng.gen_range(1..=4);
    let coeffs = (0..=degree)
        .map(|k| {
            let mut p = random_series(ring, order, 3, max_exp, rng);
            p.set_coeff(0, if k == 1 { ring.loc.one() } else { ring.loc.zero() });
            p
        })
        .collect();
    SeriesPolynomial::new(coeffs).unwrap()
}

fn field_poly(h: &SeriesPolynomial) -> Vec<Vec<FieldElement>> {
    h.coeffs().iter().map(TruncatedSeries::field_coeffs).collect()
}

#[test]
fn cross_check_against_square_root() {
    // Y = 1 - sqrt(1 - 4t) solves Y^2 - 2Y + 4t = 0; with Y = 2t + tW the
    // equation becomes t W^2 + (4t - 2) W + 4t = 0.
    let ring = integral_ring(builtin::rational());
    let h = SeriesPolynomial::from_ints(&ring, &[&[0, 4], &[-2, 4], &[0, 1]], 8).unwrap();
    let (hn, record) = normalize_poly(&h).unwrap();
    assert_eq!(record.beta, ring.loc.int(-2));
    let w_hat = recursive_root(&hn).unwrap().root;
    let w = record.root_of_input(&w_hat).unwrap();
    let field = ring.loc.field();
    let f = hensel_root(2, 5).unwrap();
    for n in 1..5 {
        // y_n = 2 [n = 1] + w_{n-1}
        let two = if n == 1 { field.rational(common::rat(2, 1)) } else { FieldElement::zero(1) };
        let y_n = &two + &w[n - 1];
        assert_eq!(y_n, -&ring.loc.to_field(f.coeff(n)), "n = {n}");
    }
}

#[test]
fn recursive_root_rejects_non_normalized() {
    let ring = integral_ring(builtin::rational());
    let h = SeriesPolynomial::from_ints(&ring, &[&[0, 1], &[2], &[1]], 6).unwrap();
    assert!(matches!(recursive_root(&h).unwrap_err(), Error::NotNormalized(_)));
}

#[test]
fn normalization_with_denominators() {
    // p_0 = t^2/2 + t^3/8, p_1 = 3t/2 + t^2/4, p_2 = 5t^2
    let ring = z_half();
    let loc = ring.loc.clone();
    let mut p0 = TruncatedSeries::zero(&ring, 10);
    p0.set_coeff(2, loc.inverse_base(1));
    p0.set_coeff(3, loc.inverse_base(3));
    let mut p1 = TruncatedSeries::zero(&ring, 10);
    p1.set_coeff(1, loc.make(loc.field().int(3), 1));
    p1.set_coeff(2, loc.inverse_base(2));
    let mut p2 = TruncatedSeries::zero(&ring, 10);
    p2.set_coeff(2, loc.int(5));
    let h = SeriesPolynomial::new(vec![p0, p1, p2]).unwrap();
    let (hn, record) = normalize_poly(&h).unwrap();
    assert!(hn.is_normalized());
    assert!(hn.is_integral());
    assert_eq!(record.shift, 1);
    let back = record.denormalize(&hn).unwrap();
    for (k, p) in h.coeffs().iter().enumerate() {
        let fc = p.field_coeffs();
        assert!(field_coeffs_eq(&fc[..record.order + record.shift], &back[k]), "p_{k}");
    }
    let root = recursive_root(&hn).unwrap();
    let y = record.root_of_input(&root.root).unwrap();
    let value = naive_eval(loc.field(), &field_poly(&h), &y, h.order());
    assert!(is_zero_series(&value));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn root_matches_newton(seed in any::<u64>(), gaussian in any::<bool>()) {
        let ring = integral_ring(if gaussian { builtin::gaussian() } else { builtin::rational() });
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random_normalized(&ring, 12, 0, &mut rng);
        let out = recursive_root(&h).unwrap();
        prop_assert!(h.eval(&out.root).is_zero());
        prop_assert_eq!(out.integrality, Some(true));
        let newton = newton_root(ring.loc.field(), &field_poly(&h), 12);
        prop_assert!(field_coeffs_eq(&out.root.field_coeffs(), &newton));
    }

    #[test]
    fn non_integral_inputs_skip_the_integrality_claim(seed in any::<u64>()) {
        let ring = z_half();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random_normalized(&ring, 10, 2, &mut rng);
        let out = recursive_root(&h).unwrap();
        prop_assert!(h.eval(&out.root).is_zero());
        if !h.is_integral() {
            prop_assert_eq!(out.integrality, None);
        }
    }

    #[test]
    fn normalized_input_is_a_fixed_point(seed in any::<u64>()) {
        let ring = integral_ring(builtin::rational());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random_normalized(&ring, 10, 0, &mut rng);
        let (hn, record) = normalize_poly(&h).unwrap();
        prop_assert_eq!(&hn, &h);
        prop_assert!(record.is_identity(&ring.loc.one()));
    }
}
