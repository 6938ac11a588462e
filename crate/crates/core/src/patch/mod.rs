//! Assembly and validation of the finite data of a patching problem: the
//! groups `Γ`, `G_1`, `H`, `G = G_1 ⋉ H`, the index set, branch elements,
//! cyclic Kummer data and matrix-factorization spot checks.
//!
//! The fields `F_i`, `Q_i`, `Q` are never materialized. Only conditions that
//! are checkable on truncated data are reported.

pub mod group;
pub mod index;

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kummer::{build_kummer, kummer_verify, KummerData, TwistBounds};
use crate::matfact::{near_identity_factor, verify_near_identity, SeriesMatrix};
use crate::numfield::lattice::{smith, IntMatrix};
use crate::numfield::search::coprime;
use crate::numfield::{conjugate_coprime_search, IntegerElement, Localization, NumberField};
use crate::report::{overall, CheckEntry};
use crate::series::{Layout, RingDescriptor, TruncatedSeries};
use crate::{Config, Verdict};

pub use group::{semidirect_product, FiniteGroup, GroupAction, SemidirectProduct};
pub use index::{assign_generators, build_index, generator_checks, generator_map, GroupData, PatchingIndex};

/// `Γ` as an abstract group on the listed field automorphisms: element `g`
/// is `auts[g]`, and `gh` acts as `x -> (x^g)^h`.
pub fn galois_group(field: &NumberField, auts: &[usize]) -> Result<FiniteGroup> {
    if auts.is_empty() || auts.iter().any(|&a| a >= field.automorphisms().len()) {
        return Err(Error::GroupAxiom("automorphism list is empty or out of range".into()));
    }
    let table = auts
        .iter()
        .map(|&g| {
            auts.iter()
                .map(|&h| {
                    let gh = field.compose(g, h).ok_or_else(|| Error::GroupAxiom("composition not listed".into()))?;
                    auts.iter().position(|&x| x == gh).ok_or_else(|| Error::GroupAxiom("Γ is not closed".into()))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    FiniteGroup::new(auts.iter().map(|a| format!("σ{a}")).collect(), table)
}

/// `[K : Fix(Γ)] = |Γ|`, i.e. `K / Fix(Γ)` is Galois with group `Γ`.
pub fn is_galois_group(field: &NumberField, auts: &[usize]) -> bool {
    let n = field.degree();
    let mut rows = Vec::new();
    for &g in auts {
        let m = &field.automorphisms()[g].matrix;
        for r in 0..n {
            rows.push((0..n).map(|c| &m[(r, c)] - BigInt::from(u8::from(r == c))).collect());
        }
    }
    let fixed_dim = n - smith(&IntMatrix::from_rows(rows)).rank();
    let mut distinct = auts.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    distinct.len() == auts.len() && fixed_dim * auts.len() == n
}

/// `a_i = c_j^γ` for `i = j^γ`, with `a_1` given and the `c_j` from
/// [`conjugate_coprime_search`] seeded with `a_1`.
pub fn choose_branch_elements(
    field: &NumberField,
    gamma_auts: &[usize],
    a1: &IntegerElement,
    index: &PatchingIndex,
    height_bound: u32,
) -> Result<Vec<IntegerElement>> {
    if a1.is_zero() || field.is_unit(a1) {
        return Err(Error::Precondition("a_1 must be a non-zero non-unit".into()));
    }
    if !field.is_fixed(a1, gamma_auts) {
        return Err(Error::A1NotRational);
    }
    let c = conjugate_coprime_search(field, gamma_auts, a1, index.j_count(), height_bound)?;
    Ok((0..index.len())
        .map(|i| match index.decompose(i) {
            None => a1.clone(),
            Some((j, g)) => field.apply(gamma_auts[g], &c[j]),
        })
        .collect())
}

/// Description of a patching problem.
#[derive(Clone, Debug)]
pub struct PatchingInput {
    pub field: Arc<NumberField>,
    /// Field automorphisms forming `Γ = Gal(K / K_0)`.
    pub gamma_auts: Vec<usize>,
    pub h: FiniteGroup,
    /// `table[γ][x] = x^γ` on `H`.
    pub gamma_on_h: Vec<Vec<usize>>,
    pub g1: FiniteGroup,
    pub g1_on_h: Vec<Vec<usize>>,
    pub gamma_on_g1: Vec<Vec<usize>>,
    pub a1: IntegerElement,
    /// `j -> τ_j`; defaults to the enumeration of `H`.
    pub listing: Option<Vec<usize>>,
    pub order: usize,
    pub spot_checks: usize,
    pub seed: u64,
    pub height_bound: u32,
}

impl PatchingInput {
    /// `G_1` trivial, so `G = H`.
    pub fn with_trivial_g1(
        field: Arc<NumberField>,
        gamma_auts: Vec<usize>,
        h: FiniteGroup,
        gamma_on_h: Vec<Vec<usize>>,
        a1: IntegerElement,
        order: usize,
    ) -> Self {
        let g1 = FiniteGroup::trivial();
        let hn = h.order();
        let gn = gamma_auts.len();
        PatchingInput {
            field,
            gamma_auts,
            h,
            gamma_on_h,
            g1,
            g1_on_h: vec![(0..hn).collect()],
            gamma_on_g1: vec![vec![0]; gn],
            a1,
            listing: None,
            order,
            spot_checks: 3,
            seed: 0,
            height_bound: 6,
        }
    }
}

/// Assembled finite patching data.
#[derive(Clone, Debug)]
pub struct PatchingData {
    pub field: Arc<NumberField>,
    pub gamma_auts: Vec<usize>,
    pub gamma: FiniteGroup,
    pub h: FiniteGroup,
    pub g1: FiniteGroup,
    pub gamma_on_h: GroupAction,
    /// `G = G_1 ⋉ H`.
    pub g: SemidirectProduct,
    /// `Γ` acting on `G` componentwise.
    pub gamma_on_g: GroupAction,
    /// `Γ ⋉ G`.
    pub fsep: SemidirectProduct,
    pub index: PatchingIndex,
    pub listing: Vec<usize>,
    /// `a_i` for `i ∈ I`.
    pub branch: Vec<IntegerElement>,
    /// Kummer data over `R[1/a_j]` for each `j ∈ J`, of degree `|τ_j|`.
    pub kummer_list: Vec<KummerData>,
    pub order: usize,
    pub spot_checks: usize,
    pub seed: u64,
}

pub fn assemble(input: &PatchingInput, cfg: &Config) -> Result<PatchingData> {
    let field = input.field.clone();
    let gamma = galois_group(&field, &input.gamma_auts)?;
    let h = &input.h;
    let gamma_on_h = GroupAction::on_group(&gamma, h, input.gamma_on_h.clone())?;
    let g1_on_h = GroupAction::on_group(&input.g1, h, input.g1_on_h.clone())?;
    let gamma_on_g1 = GroupAction::on_group(&gamma, &input.g1, input.gamma_on_g1.clone())?;
    let g = semidirect_product(&input.g1, h, &g1_on_h)?;
    let table = (0..gamma.order())
        .map(|c| {
            (0..g.group.order())
                .map(|x| {
                    let (a, b) = g.components(x);
                    g.pair(gamma_on_g1.act(c, a), gamma_on_h.act(c, b))
                })
                .collect()
        })
        .collect();
    let gamma_on_g = GroupAction::on_group(&gamma, &g.group, table)?;
    let fsep = semidirect_product(&gamma, &g.group, &gamma_on_g)?;

    let listing = input.listing.clone().unwrap_or_else(|| (0..h.order()).collect());
    if listing.iter().any(|&x| x >= h.order()) {
        return Err(Error::ListingNotBijective);
    }
    let index = build_index((0..listing.len()).map(|j| format!("j{j}")).collect(), &gamma)?;
    let branch = choose_branch_elements(&field, &input.gamma_auts, &input.a1, &index, input.height_bound)?;
    let kummer_list = (0..index.j_count())
        .into_par_iter()
        .map(|j| {
            let k = h.element_order(listing[j]) as u32;
            let loc = Arc::new(Localization::new(field.clone(), branch[index.of_j(j)].clone())?);
            build_kummer(loc, k, input.order, &TwistBounds::default(), cfg)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PatchingData {
        field,
        gamma_auts: input.gamma_auts.clone(),
        gamma,
        h: h.clone(),
        g1: input.g1.clone(),
        gamma_on_h,
        g,
        gamma_on_g,
        fsep,
        index,
        listing,
        branch,
        kummer_list,
        order: input.order,
        spot_checks: input.spot_checks,
        seed: input.seed,
    })
}

#[derive(Clone, Debug)]
pub struct PatchReport {
    pub entries: Vec<CheckEntry>,
    pub verdict: Verdict,
}

/// `b = 1 + sum_{n>=1} c_n t^n` with `c_n` small integers divided by
/// `a_I^e`, `e ∈ {0, 1}`, for `n <= degree`.
pub fn random_near_identity(ring: &RingDescriptor, n: usize, order: usize, degree: usize, rng: &mut impl Rng) -> SeriesMatrix {
    let loc = &ring.loc;
    let field = loc.field();
    let entries = (0..n * n)
        .map(|k| {
            let mut s = if k / n == k % n { TruncatedSeries::one(ring, order) } else { TruncatedSeries::zero(ring, order) };
            for d in 1..=degree.min(order.saturating_sub(1)) {
                let coords: Vec<i64> = (0..field.degree()).map(|_| rng.gen_range(-3..=3)).collect();
                let exp = rng.gen_range(0..=1);
                s.set_coeff(d, loc.add(s.coeff(d), &loc.make(IntegerElement::from_i64(&coords), exp)));
            }
            s
        })
        .collect();
    SeriesMatrix::new(n, entries)
}

fn prefixed(prefix: &str, checks: Vec<CheckEntry>) -> Vec<CheckEntry> {
    checks
        .into_iter()
        .map(|c| CheckEntry { name: format!("{prefix}:{}", c.name), ..c })
        .collect()
}

fn kummer_entries(prefix: &str, data: &KummerData, expected: &Localization) -> Vec<CheckEntry> {
    let mut out = vec![CheckEntry::check(
        "support",
        data.ring().loc.same_ring(expected),
        format!("series over R[1/{}]", expected.base()),
    )];
    match kummer_verify(data) {
        Ok(rep) => out.extend(rep.checks),
        Err(e) => out.push(CheckEntry::error("kummer_verify", &e)),
    }
    prefixed(prefix, out)
}

fn branch_entries(data: &PatchingData) -> Vec<CheckEntry> {
    let field = &data.field;
    let a = &data.branch;
    let idx = &data.index;
    let nonunit = a.iter().all(|x| !x.is_zero() && !field.is_unit(x));
    let mut bad = Vec::new();
    for i in 0..a.len() {
        for j in 0..i {
            if a[i].is_zero() || a[j].is_zero() || !coprime(field, &a[i], &a[j]) {
                bad.push(format!("({}, {})", idx.label(j), idx.label(i)));
            }
        }
    }
    let equivariant = (0..idx.len()).all(|i| {
        (0..data.gamma.order()).all(|c| field.apply(data.gamma_auts[c], &a[i]) == a[idx.act(i, c)])
    });
    let a_all = a.iter().fold(field.one(), |acc, x| field.mul(&acc, x));
    vec![
        CheckEntry::check("branch_nonunit", nonunit, "a_i ∈ R \\ R^×"),
        CheckEntry::check(
            "branch_coprime",
            bad.is_empty(),
            if bad.is_empty() { format!("{} pairs", a.len() * (a.len() - 1) / 2) } else { format!("not coprime: {}", bad.join(", ")) },
        ),
        CheckEntry::check("branch_equivariance", equivariant, "a_i^γ = a_{i^γ}"),
        CheckEntry::check("a_I_rational", field.is_fixed(&a_all, &data.gamma_auts), format!("a_I = {a_all}")),
    ]
}

fn spot_check(layout: &Layout, data: &PatchingData, k: usize, cfg: &Config) -> CheckEntry {
    let name = format!("spot_check[{k}]");
    let n = data.g.group.order();
    let i = k % layout.len();
    let mut rng = ChaCha8Rng::seed_from_u64(data.seed.wrapping_add(k as u64));
    let b = random_near_identity(&layout.ring_all(), n, data.order, 3, &mut rng);
    let radius = BigRational::new(1.into(), 2.into());
    match near_identity_factor(layout, &b, i, &radius, cfg) {
        Ok(res) => {
            let verify = verify_near_identity(layout, &b, i, &res);
            let verdict = res.verdict.and(overall(&verify));
            let failed: Vec<&str> = res.checks.iter().chain(&verify).filter(|c| !c.status.is_pass()).map(|c| c.name.as_str()).collect();
            CheckEntry::new(
                name,
                verdict,
                format!("n = {n}, i = {}, {} iterations, trace {:?}, not passed: {failed:?}", data.index.label(i), res.iterations, res.valuation_trace),
            )
        }
        Err(e) => CheckEntry::error(name, &e),
    }
}

/// Reports every finitely checkable condition; never fails.
pub fn validate_patching(data: &PatchingData, cfg: &Config) -> PatchReport {
    let mut entries = Vec::new();
    let field = &data.field;
    entries.push(CheckEntry::check(
        "gamma_galois",
        is_galois_group(field, &data.gamma_auts),
        format!("|Γ| = {}, [K : Q] = {}", data.gamma.order(), field.degree()),
    ));
    entries.extend(data.index.structural_checks());
    let groups = GroupData {
        gamma: &data.gamma,
        h: &data.h,
        gamma_on_h: &data.gamma_on_h,
        g: &data.g,
        gamma_on_g: &data.gamma_on_g,
    };
    entries.extend(generator_checks(&data.index, &data.listing, &groups));
    entries.extend(branch_entries(data));

    let idx = &data.index;
    let locs: Vec<Result<Arc<Localization>>> =
        data.branch.iter().map(|a| Localization::new(field.clone(), a.clone()).map(Arc::new)).collect();
    let kummer: Vec<Vec<CheckEntry>> = (1..idx.len())
        .into_par_iter()
        .map(|i| {
            let (j, c) = idx.decompose(i).expect("i != 1");
            let Some(base) = data.kummer_list.get(j) else {
                return vec![CheckEntry::check(format!("kummer[{}]", idx.label(i)), false, "missing Kummer data")];
            };
            let loc = match &locs[i] {
                Ok(l) => l,
                Err(e) => return vec![CheckEntry::error(format!("kummer[{}]", idx.label(i)), e)],
            };
            if c == data.gamma.identity() {
                kummer_entries(&format!("kummer[{}]", idx.label(i)), base, loc)
            } else {
                let target = RingDescriptor::formal(loc.clone());
                let conj = base.conjugate(data.gamma_auts[c], &target);
                kummer_entries(&format!("conjugate_kummer[{}]", idx.label(i)), &conj, loc)
            }
        })
        .collect();
    entries.extend(kummer.into_iter().flatten());

    match Layout::new(field.clone(), data.branch.clone(), 0) {
        Ok(layout) => {
            let spots: Vec<CheckEntry> = (0..data.spot_checks).into_par_iter().map(|k| spot_check(&layout, data, k, cfg)).collect();
            entries.extend(spots);
        }
        Err(e) => entries.extend((0..data.spot_checks).map(|k| CheckEntry::error(format!("spot_check[{k}]"), &e))),
    }
    let verdict = overall(&entries);
    PatchReport { entries, verdict }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numfield::builtin;

    #[test]
    fn trivial_problem() {
        let q = Arc::new(builtin::rational());
        let input = PatchingInput {
            spot_checks: 1,
            ..PatchingInput::with_trivial_g1(q.clone(), vec![0], FiniteGroup::trivial(), vec![vec![0]], q.int(2), 8)
        };
        let data = assemble(&input, &Config::default()).unwrap();
        assert_eq!(data.branch, vec![q.int(2), q.int(3)]);
        let report = validate_patching(&data, &Config::default());
        assert_eq!(report.verdict, Verdict::Pass, "{:#?}", report.entries);
    }

    #[test]
    fn unit_a1_is_rejected() {
        let q = Arc::new(builtin::rational());
        let input = PatchingInput::with_trivial_g1(q.clone(), vec![0], FiniteGroup::trivial(), vec![vec![0]], q.int(1), 8);
        assert!(matches!(assemble(&input, &Config::default()), Err(Error::Precondition(_))));
    }

    #[test]
    fn eisenstein_branch_elements() {
        let k = Arc::new(builtin::eisenstein());
        let gamma = galois_group(&k, &[0, 1]).unwrap();
        let idx = build_index(vec!["j".into()], &gamma).unwrap();
        let a = choose_branch_elements(&k, &[0, 1], &k.int(2), &idx, 4).unwrap();
        assert_eq!(k.norm(&a[1]), BigInt::from(7));
        assert_eq!(a[2], k.apply(1, &a[1]));
        let prod = a.iter().fold(k.one(), |acc, x| k.mul(&acc, x));
        assert_eq!(prod, k.int(14));
    }
}
