use std::sync::Arc;

use arithdisc::numfield::builtin;
use arithdisc::patch::{
    assemble, assign_generators, build_index, semidirect_product, validate_patching, FiniteGroup, GroupAction,
    GroupData, PatchingInput,
};
use arithdisc::{Config, Error, Verdict};

fn inversion(n: usize) -> Vec<Vec<usize>> {
    vec![(0..n).collect(), (0..n).map(|x| (n - x) % n).collect()]
}

fn flagship(order: usize) -> PatchingInput {
    let k = Arc::new(builtin::eisenstein());
    let a1 = k.int(2);
    PatchingInput::with_trivial_g1(k, vec![0, 1], FiniteGroup::cyclic(3), inversion(3), a1, order)
}

#[test]
fn flagship_drill_passes() {
    let cfg = Config::default();
    let data = assemble(&flagship(32), &cfg).unwrap();
    assert_eq!(data.index.len(), 7);
    assert!(data.fsep.group.isomorphism(&FiniteGroup::symmetric(3)).is_some());
    let report = validate_patching(&data, &cfg);
    for e in &report.entries {
        assert_eq!(e.status, Verdict::Pass, "{}: {}", e.name, e.details);
    }
    assert!(report.entries.iter().any(|e| e.name.starts_with("conjugate_kummer")));
    assert_eq!(report.entries.iter().filter(|e| e.name.starts_with("spot_check")).count(), 3);
}

#[test]
fn identity_listing_fails_generation() {
    let cfg = Config::default();
    let input = PatchingInput { listing: Some(vec![0, 0, 0]), spot_checks: 0, ..flagship(8) };
    let data = assemble(&input, &cfg).unwrap();
    let report = validate_patching(&data, &cfg);
    let status = |name: &str| report.entries.iter().find(|e| e.name == name).unwrap().status;
    assert_eq!(status("listing_bijective"), Verdict::Fail);
    assert_eq!(status("h_generated"), Verdict::Fail);
    assert_eq!(report.verdict, Verdict::Fail);
}

#[test]
fn non_coprime_branch_elements_fail() {
    let cfg = Config::default();
    let input = PatchingInput { spot_checks: 1, ..flagship(8) };
    let mut data = assemble(&input, &cfg).unwrap();
    data.branch[3] = data.field.mul(&data.branch[3], &data.branch[1]);
    let report = validate_patching(&data, &cfg);
    let coprime = report.entries.iter().find(|e| e.name == "branch_coprime").unwrap();
    assert_eq!(coprime.status, Verdict::Fail);
    assert!(report.entries.iter().any(|e| e.name == "spot_check[0]" && e.status == Verdict::Error));
}

#[test]
fn klein_four_generation() {
    let z2 = FiniteGroup::cyclic(2);
    let v4 = FiniteGroup::direct_product(&z2, &z2);
    let trivial = FiniteGroup::trivial();
    let act = GroupAction::trivial(&trivial, 4);
    let g = semidirect_product(&trivial, &v4, &GroupAction::trivial(&trivial, 4)).unwrap();
    let gamma_on_g = GroupAction::trivial(&trivial, 4);
    let index = build_index((0..4).map(|j| format!("j{j}")).collect(), &trivial).unwrap();
    let groups = GroupData { gamma: &trivial, h: &v4, gamma_on_h: &act, g: &g, gamma_on_g: &gamma_on_g };
    assert!(assign_generators(&index, &[0, 1, 2, 3], &groups).is_ok());
    assert_eq!(assign_generators(&index, &[0, 1, 1, 3], &groups).unwrap_err(), Error::ListingNotBijective);
}
