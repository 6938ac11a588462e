//! Acceptance suite. Prints one `criterion N: PASS|FAIL` line per criterion
//! and exits non-zero if any criterion fails.

mod common;

use std::sync::Arc;
use std::time::Instant;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use arithdisc::kummer::hensel_root;
use arithdisc::matfact::near_identity::{iteration_bound, quadratic_progress};
use arithdisc::matfact::{general_factor, near_identity_factor, verify_near_identity, GeneralOptions, SeriesMatrix};
use arithdisc::numfield::{builtin, FieldElement, Localization, NumberField};
use arithdisc::patch::{assemble, validate_patching, FiniteGroup, PatchingInput};
use arithdisc::regroot::{normalize_poly, recursive_root, SeriesPolynomial};
use arithdisc::series::{split_series, weierstrass_divide, DivisionMode, Layout, RingDescriptor, TruncatedSeries};
use arithdisc::{Config, Error, Verdict};

use common::*;

const SEED: u64 = 0x5eed_2024;

const HENSEL_ORDER: usize = 128;
const HENSEL_MAX_K: u32 = 12;

const DIVISION_CASES: usize = 200;
const DIVISION_ORDER: usize = 64;
/// Largest admissible fraction of undecided norm bounds.
const MAX_UNDECIDED_RATE: f64 = 0.01;

const SPLIT_CASES: usize = 200;
const SPLIT_ORDER: usize = 32;

const NEAR_IDENTITY_CASES: usize = 50;
const NEAR_IDENTITY_ORDER: usize = 32;
const MAX_ITERATIONS: usize = 6;

const GENERAL_CASES: usize = 20;
const GENERAL_ORDER: usize = 32;
const MIN_EFFECTIVE_ORDER: i64 = 24;

const ROOT_CASES: usize = 100;
const ROOT_ORDER: usize = 32;
const CROSS_CHECK_ORDER: usize = 5;

const PATCH_ORDER: usize = 32;
const PATCH_SPOT_CHECKS: usize = 3;

/// Status line plus up to ten failure lines.
struct Outcome {
    passed: bool,
    lines: Vec<String>,
}

fn report(criterion: u32, failures: &[String], detail: String, start: Instant) -> Outcome {
    let status = if failures.is_empty() { "PASS" } else { "FAIL" };
    let mut lines = vec![format!("criterion {criterion}: {status} ({detail}; {:.1?})", start.elapsed())];
    lines.extend(failures.iter().take(10).map(|f| format!("  criterion {criterion} failure: {f}")));
    Outcome { passed: failures.is_empty(), lines }
}

fn localized(field: NumberField, base: &[i64]) -> RingDescriptor {
    let field = Arc::new(field);
    let a = field.element(base);
    RingDescriptor::formal(Arc::new(Localization::new(field, a).unwrap()))
}

fn criterion_1_hensel_binomial() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    for k in 1..=HENSEL_MAX_K {
        let f = hensel_root(k, HENSEL_ORDER).unwrap();
        let oracle = binomial_root(k, HENSEL_ORDER);
        let coeffs: Vec<BigRational> = f.coeffs().iter().map(|c| f.loc().to_field(c).0[0].clone()).collect();
        if coeffs != oracle {
            failures.push(format!("k = {k}: differs from the binomial series"));
        }
        if !f.is_integral() {
            failures.push(format!("k = {k}: non-integral coefficient"));
        }
        let k2 = i64::from(k * k);
        if f.pow(k) != TruncatedSeries::from_ints(f.ring(), &[1, -k2], HENSEL_ORDER) {
            failures.push(format!("k = {k}: f^k != 1 - k^2 t"));
        }
    }
    report(1, &failures, format!("k = 1..={HENSEL_MAX_K}, N = {HENSEL_ORDER}"), start)
}

fn criterion_2_weierstrass_division() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut undecided = 0usize;
    let mut total = 0usize;
    let rings = [("Z[1/2]", localized(builtin::rational(), &[2])), ("Z[i][1/(1+i)]", localized(builtin::gaussian(), &[1, 1]))];
    for (name, ring) in &rings {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 2);
        for case in 0..DIVISION_CASES {
            let f = random_series(ring, DIVISION_ORDER, 6, 2, &mut rng);
            let shift = rng.gen_range(0..3);
            let g = random_divisor(ring, DIVISION_ORDER, shift, &mut rng);
            for mode in [DivisionMode::BoundRemainder, DivisionMode::BoundQuotient] {
                total += 1;
                match weierstrass_divide(&f, &g, mode, &Config::default()) {
                    Ok(out) => {
                        if let Err(e) = check_division(&f, &g, &out) {
                            failures.push(format!("{name} case {case} {mode:?}: {e}"));
                        }
                        match out.verdict {
                            Verdict::Pass => {}
                            Verdict::Undecidable => undecided += 1,
                            v => failures.push(format!("{name} case {case} {mode:?}: bound verdict {v}")),
                        }
                    }
                    Err(e) => failures.push(format!("{name} case {case} {mode:?}: {e}")),
                }
            }
        }
    }
    let rate = undecided as f64 / total as f64;
    if rate >= MAX_UNDECIDED_RATE {
        failures.push(format!("undecided rate {rate:.4} >= {MAX_UNDECIDED_RATE}"));
    }
    report(2, &failures, format!("{total} divisions, N = {DIVISION_ORDER}, {undecided} undecided"), start)
}

fn criterion_3_splitting() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    let layouts = [("Z; 2, 3, 5", rational_layout()), ("Z[ζ3]; flagship", eisenstein_layout())];
    for (name, layout) in &layouts {
        let all = layout.ring_all();
        let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 3);
        for case in 0..SPLIT_CASES {
            let mut f = random_series(&all, SPLIT_ORDER, 8, 3, &mut rng);
            for z in 0..rng.gen_range(0..4) {
                f.set_coeff(z, all.loc.zero());
            }
            let i = case % layout.len();
            match split_series(layout, &f, i, &Config::default()) {
                Ok(out) => {
                    if let Err(e) = check_split(&f, &out, &all) {
                        failures.push(format!("{name} case {case}: {e}"));
                    }
                    if out.verdict != Verdict::Pass {
                        failures.push(format!("{name} case {case}: C_1 certificate {}", out.verdict));
                    }
                    let certified = if i == layout.one_index() { out.h.bound_cert() } else { out.g.bound_cert() };
                    if certified.is_none() {
                        failures.push(format!("{name} case {case}: designated side carries no certificate"));
                    }
                }
                Err(e) => failures.push(format!("{name} case {case}: {e}")),
            }
        }
    }
    report(3, &failures, format!("{} splittings, N = {SPLIT_ORDER}", 2 * SPLIT_CASES), start)
}

fn near_identity_failures(layout: &Layout, b: &SeriesMatrix, i: usize) -> Vec<String> {
    let radius = BigRational::new(1.into(), 2.into());
    let res = match near_identity_factor(layout, b, i, &radius, &Config::default()) {
        Ok(r) => r,
        Err(e) => return vec![e.to_string()],
    };
    let all = layout.ring_all();
    let mut out = Vec::new();
    let prod = res.p_left.convert(&all).unwrap().mul(b).mul(&res.p_right.convert(&all).unwrap());
    if prod != SeriesMatrix::identity(&all, b.dim(), b.order()) {
        out.push("p' b p != 1".into());
    }
    if res.iterations > MAX_ITERATIONS || res.iterations > iteration_bound(b.order()) {
        out.push(format!("{} iterations", res.iterations));
    }
    if !quadratic_progress(&res.valuation_trace) {
        out.push(format!("trace {:?}", res.valuation_trace));
    }
    for c in verify_near_identity(layout, b, i, &res).into_iter().chain(res.checks) {
        if c.status != Verdict::Pass {
            out.push(format!("{}: {} {}", c.name, c.status, c.details));
        }
    }
    out
}

fn criterion_4_near_identity() -> Outcome {
    let start = Instant::now();
    let layout = gaussian_layout();
    let all = layout.ring_all();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 4);
    let mut failures = Vec::new();
    for case in 0..NEAR_IDENTITY_CASES {
        let b = random_near_identity(&all, 2, NEAR_IDENTITY_ORDER, 6, &mut rng);
        for i in 0..layout.len() {
            failures.extend(near_identity_failures(&layout, &b, i).into_iter().map(|e| format!("case {case}, i = {i}: {e}")));
        }
    }
    report(4, &failures, format!("{} factorizations, n = 2, |I| = 3, N = {NEAR_IDENTITY_ORDER}", NEAR_IDENTITY_CASES * 3), start)
}

fn criterion_5_general_factorization() -> Outcome {
    let start = Instant::now();
    let layout = gaussian_layout();
    let all = layout.ring_all();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 5);
    let mut failures = Vec::new();
    let mut min_eff = i64::MAX;
    for case in 0..GENERAL_CASES {
        let b = random_unimodular(&all, 2, GENERAL_ORDER, 4, &mut rng);
        let mut s = random_series(&all, GENERAL_ORDER, 3, 1, &mut rng);
        s.set_coeff(0, all.loc.make(random_integer(layout.field(), 3, &mut rng), 0));
        if s.coeff(0).is_zero() {
            s.set_coeff(0, all.loc.int(5));
        }
        let i = case % layout.len();
        let opts = GeneralOptions { swapped: case % 2 == 1, ..Default::default() };
        match general_factor(&layout, &b, &s, i, &opts, &Config::default()) {
            Ok(res) => {
                min_eff = min_eff.min(res.n_eff);
                // independent recomposition: s L_num R_num = b L_den R_den
                let (ln, ld) = (res.left.num.convert(&all).unwrap(), res.left.den.convert(&all).unwrap());
                let (rn, rd) = (res.right.num.convert(&all).unwrap(), res.right.den.convert(&all).unwrap());
                let lhs = ln.mul(&rn).scale(&s).truncate(res.check_order);
                let rhs = b.scale(&ld.mul(&rd)).truncate(res.check_order);
                if lhs != rhs {
                    failures.push(format!("case {case}: recomposition differs mod t^{}", res.check_order));
                }
                if res.n_eff < MIN_EFFECTIVE_ORDER {
                    failures.push(format!("case {case}: N_eff = {}", res.n_eff));
                }
                if res.verdict != Verdict::Pass {
                    let bad: Vec<_> = res.checks.iter().filter(|c| c.status != Verdict::Pass).map(|c| &c.name).collect();
                    failures.push(format!("case {case}: {bad:?}"));
                }
            }
            Err(e) => failures.push(format!("case {case}: {e}")),
        }
    }
    report(5, &failures, format!("{GENERAL_CASES} matrices, N = {GENERAL_ORDER}, min N_eff = {min_eff}"), start)
}

fn random_normalized(ring: &RingDescriptor, rng: &mut impl Rng) -> SeriesPolynomial {
    let degree = rng.gen_range(1..=4);
    let coeffs = (0..=degree)
        .map(|k| {
            let mut p = random_series(ring, ROOT_ORDER, 3, 0, rng);
            p.set_coeff(0, if k == 1 { ring.loc.one() } else { ring.loc.zero() });
            p
        })
        .collect();
    SeriesPolynomial::new(coeffs).unwrap()
}

fn criterion_6_regular_roots() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 6);
    let rings = [
        RingDescriptor::formal(Arc::new(Localization::integral(Arc::new(builtin::rational())))),
        RingDescriptor::formal(Arc::new(Localization::integral(gaussian()))),
    ];
    for case in 0..ROOT_CASES {
        let ring = &rings[case % 2];
        let field = ring.loc.field();
        let h = random_normalized(ring, &mut rng);
        let out = match recursive_root(&h) {
            Ok(o) => o,
            Err(e) => {
                failures.push(format!("case {case}: {e}"));
                continue;
            }
        };
        if !h.eval(&out.root).is_zero() {
            failures.push(format!("case {case}: h(y) != 0"));
        }
        let poly: Vec<Vec<FieldElement>> = h.coeffs().iter().map(TruncatedSeries::field_coeffs).collect();
        if !field_coeffs_eq(&out.root.field_coeffs(), &newton_root(field, &poly, ROOT_ORDER)) {
            failures.push(format!("case {case}: differs from Newton"));
        }
        if out.integrality != Some(true) {
            failures.push(format!("case {case}: integrality {:?}", out.integrality));
        }
    }

    // Y = 2t + tW turns Y^2 - 2Y + 4t into t W^2 + (4t - 2) W + 4t.
    let z = &rings[0];
    let h = SeriesPolynomial::from_ints(z, &[&[0, 4], &[-2, 4], &[0, 1]], CROSS_CHECK_ORDER).unwrap();
    let (hn, record) = normalize_poly(&h).unwrap();
    let w = record.root_of_input(&recursive_root(&hn).unwrap().root).unwrap();
    let f = hensel_root(2, CROSS_CHECK_ORDER).unwrap();
    for n in 1..CROSS_CHECK_ORDER {
        let lead = if n == 1 { z.loc.field().rational(rat(2, 1)) } else { FieldElement::zero(1) };
        if &lead + &w[n - 1] != -&z.loc.to_field(f.coeff(n)) {
            failures.push(format!("cross-check with hensel_root(2) fails at t^{n}"));
        }
    }
    report(6, &failures, format!("{ROOT_CASES} polynomials, N = {ROOT_ORDER}, cross-check mod t^{CROSS_CHECK_ORDER}"), start)
}

fn flagship_input() -> PatchingInput {
    let k = Arc::new(builtin::eisenstein());
    let a1 = k.int(2);
    let inversion = vec![vec![0, 1, 2], vec![0, 2, 1]];
    PatchingInput {
        spot_checks: PATCH_SPOT_CHECKS,
        seed: SEED,
        ..PatchingInput::with_trivial_g1(k, vec![0, 1], FiniteGroup::cyclic(3), inversion, a1, PATCH_ORDER)
    }
}

fn criterion_7_flagship_drill() -> Outcome {
    let start = Instant::now();
    let cfg = Config::default();
    let mut failures = Vec::new();
    match assemble(&flagship_input(), &cfg) {
        Ok(data) => {
            if data.fsep.group.isomorphism(&FiniteGroup::symmetric(3)).is_none() {
                failures.push("Γ ⋉ G is not S_3".into());
            }
            let report = validate_patching(&data, &cfg);
            for e in &report.entries {
                if e.status != Verdict::Pass {
                    failures.push(format!("{}: {} {}", e.name, e.status, e.details));
                }
            }
            for required in ["listing_bijective", "generator_equivariance", "h_generated", "g_generated", "subgroup_equivariance", "index_size", "branch_coprime", "branch_equivariance", "a_I_rational"] {
                if !report.entries.iter().any(|e| e.name == required) {
                    failures.push(format!("missing entry {required}"));
                }
            }
            let kummer3 = data.kummer_list.iter().filter(|d| d.k == 3).count();
            if kummer3 == 0 {
                failures.push("no Kummer data of degree 3".into());
            }
            if !report.entries.iter().any(|e| e.name.starts_with("conjugate_kummer")) {
                failures.push("no conjugate Kummer entries".into());
            }
            let spots = report.entries.iter().filter(|e| e.name.starts_with("spot_check")).count();
            if spots != PATCH_SPOT_CHECKS {
                failures.push(format!("{spots} spot checks"));
            }
        }
        Err(e) => failures.push(format!("assembly: {e}")),
    }
    report(7, &failures, format!("Q(ζ3), Γ = Z/2, H = Z/3, N = {PATCH_ORDER}"), start)
}

fn criterion_8_negative_controls() -> Outcome {
    let start = Instant::now();
    let cfg = Config::default();
    let mut failures = Vec::new();

    let small = PatchingInput { spot_checks: 1, ..flagship_input() };
    let small = PatchingInput { order: 8, ..small };
    let mut data = assemble(&small, &cfg).unwrap();
    data.branch[3] = data.field.mul(&data.branch[3], &data.branch[0]);
    let rep = validate_patching(&data, &cfg);
    if !rep.entries.iter().any(|e| e.name == "branch_coprime" && e.status == Verdict::Fail) || rep.verdict == Verdict::Pass {
        failures.push("non-coprime branch elements were not flagged".into());
    }

    let listing = PatchingInput { listing: Some(vec![0, 0, 0]), spot_checks: 0, ..small.clone() };
    let data = assemble(&listing, &cfg).unwrap();
    let rep = validate_patching(&data, &cfg);
    if !rep.entries.iter().any(|e| e.name == "h_generated" && e.status == Verdict::Fail) || rep.verdict == Verdict::Pass {
        failures.push("non-bijective listing was not flagged".into());
    }

    let layout = gaussian_layout();
    let all = layout.ring_all();
    let b = SeriesMatrix::scalar(&TruncatedSeries::from_ints(&all, &[1, 1], 8), 2).add(&SeriesMatrix::identity(&all, 2, 8));
    let radius = BigRational::new(1.into(), 2.into());
    if near_identity_factor(&layout, &b, 0, &radius, &cfg).map(|_| ()) != Err(Error::NotNearIdentity) {
        failures.push("b ≢ 1 mod t was not rejected".into());
    }

    let z = RingDescriptor::formal(Arc::new(Localization::integral(Arc::new(builtin::rational()))));
    let h = SeriesPolynomial::from_ints(&z, &[&[0, 1], &[2, 1], &[1]], 8).unwrap();
    if !matches!(recursive_root(&h), Err(Error::NotNormalized(_))) {
        failures.push("non-normalized polynomial was not rejected".into());
    }
    report(8, &failures, "4 sabotaged inputs".into(), start)
}

fn main() {
    let criteria: [fn() -> Outcome; 8] = [
        criterion_1_hensel_binomial,
        criterion_2_weierstrass_division,
        criterion_3_splitting,
        criterion_4_near_identity,
        criterion_5_general_factorization,
        criterion_6_regular_roots,
        criterion_7_flagship_drill,
        criterion_8_negative_controls,
    ];
    let outcomes: Vec<Outcome> = criteria
        .iter()
        .map(|c| {
            let o = c();
            for line in &o.lines {
                println!("{line}");
            }
            o
        })
        .collect();
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    println!("acceptance: {} of {} criteria passed", outcomes.len() - failed, outcomes.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
