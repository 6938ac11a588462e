mod common;

use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use arithdisc::matfact::near_identity::{iteration_bound, quadratic_progress};
use arithdisc::matfact::{general_factor, near_identity_factor, verify_near_identity, GeneralOptions, SeriesMatrix};
use arithdisc::series::{Layout, TruncatedSeries};
use arithdisc::{Config, Error, Verdict};

use common::{gaussian_layout, random_near_identity, random_series, random_unimodular, rational_layout};

fn half() -> BigRational {
    BigRational::new(1.into(), 2.into())
}

fn near_identity_ok(layout: &Layout, b: &SeriesMatrix, i: usize) -> Result<usize, String> {
    let res = near_identity_factor(layout, b, i, &half(), &Config::default()).map_err(|e| e.to_string())?;
    let all = layout.ring_all();
    let one = SeriesMatrix::identity(&all, b.dim(), b.order());
    let prod = res.p_left.convert(&all).unwrap().mul(b).mul(&res.p_right.convert(&all).unwrap());
    if prod != one {
        return Err("p' b p != 1".into());
    }
    if !quadratic_progress(&res.valuation_trace) {
        return Err(format!("trace {:?}", res.valuation_trace));
    }
    if res.iterations > iteration_bound(b.order()) {
        return Err(format!("{} iterations", res.iterations));
    }
    let failed: Vec<String> =
        verify_near_identity(layout, b, i, &res).into_iter().filter(|c| c.status != Verdict::Pass).map(|c| c.name).collect();
    if !failed.is_empty() {
        return Err(format!("verification failed: {failed:?}"));
    }
    if res.verdict != Verdict::Pass {
        return Err(format!("{:?}", res.checks));
    }
    Ok(res.iterations)
}

#[test]
fn rejects_matrices_not_near_identity() {
    let layout = rational_layout();
    let all = layout.ring_all();
    let b = SeriesMatrix::scalar(&TruncatedSeries::from_ints(&all, &[2], 6), 2);
    let err = near_identity_factor(&layout, &b, 0, &half(), &Config::default()).unwrap_err();
    assert_eq!(err, Error::NotNearIdentity);
}

#[test]
fn gaussian_three_branches() {
    let layout = gaussian_layout();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let b = random_near_identity(&layout.ring_all(), 2, 16, 4, &mut rng);
    for i in 0..layout.len() {
        near_identity_ok(&layout, &b, i).unwrap();
    }
}

#[test]
fn general_factor_over_gaussian_layout() {
    let layout = gaussian_layout();
    let all = layout.ring_all();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let b = random_unimodular(&all, 2, 16, 3, &mut rng);
    let mut s = random_series(&all, 16, 3, 1, &mut rng);
    s.set_coeff(0, all.loc.int(3));
    for swapped in [false, true] {
        for i in 0..layout.len() {
            let opts = GeneralOptions { swapped, ..Default::default() };
            let res = general_factor(&layout, &b, &s, i, &opts, &Config::default()).unwrap();
            assert_eq!(res.verdict, Verdict::Pass, "i = {i}, swapped = {swapped}: {:?}", res.checks);
            assert_eq!(res.n_eff, 16);
        }
    }
}

#[test]
fn general_factor_tracks_determinant_valuation() {
    // b = diag(t/3 + t^2, 1), so v_t(det b) = 1
    let layout = rational_layout();
    let all = layout.ring_all();
    let mut d = TruncatedSeries::from_ints(&all, &[0, 0, 1], 12);
    d.set_coeff(1, all.loc.make(layout.field().int(10), 1));
    let one = TruncatedSeries::one(&all, 12);
    let zero = TruncatedSeries::zero(&all, 12);
    let b = SeriesMatrix::new(2, vec![d, zero.clone(), zero, one.clone()]);
    for swapped in [false, true] {
        let opts = GeneralOptions { swapped, ..Default::default() };
        let res = general_factor(&layout, &b, &one, 1, &opts, &Config::default()).unwrap();
        assert_eq!(res.verdict, Verdict::Pass, "{:?}", res.checks);
        assert_eq!(res.check_order, if swapped { 11 } else { 12 });
        assert_eq!(res.n_eff, if swapped { 10 } else { 11 });
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn near_identity_factorization(seed in any::<u64>(), i in 0usize..3) {
        let layout = rational_layout();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = random_near_identity(&layout.ring_all(), 2, 12, 3, &mut rng);
        if let Err(e) = near_identity_ok(&layout, &b, i) {
            prop_assert!(false, "{}", e);
        }
    }

    #[test]
    fn general_round_trip(seed in any::<u64>(), i in 0usize..3, swapped in any::<bool>()) {
        let layout = rational_layout();
        let all = layout.ring_all();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = random_unimodular(&all, 2, 10, 3, &mut rng);
        let s = TruncatedSeries::one(&all, 10);
        let opts = GeneralOptions { swapped, ..Default::default() };
        let res = general_factor(&layout, &b, &s, i, &opts, &Config::default()).unwrap();
        prop_assert_eq!(res.verdict, Verdict::Pass, "{:?}", res.checks);
        prop_assert_eq!(res.n_eff, 10);
    }
}
