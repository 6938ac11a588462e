//! The index set `I = {1} ⊔ (J x Γ)` and the generators `τ_i`.

use serde::Serialize;

use super::group::{FiniteGroup, GroupAction, SemidirectProduct};
use crate::error::{Error, Result};
use crate::report::CheckEntry;

/// `I = {1} ⊔ (J x Γ)`: index `0` is `1`, and `(j, γ)` has index
/// `1 + j |Γ| + γ`. `Γ` acts by `1^γ = 1` and `(j, γ')^γ = (j, γ'γ)`; `j` is
/// identified with `(j, 1)`.
#[derive(Clone, Debug, Serialize)]
pub struct PatchingIndex {
    pub j_labels: Vec<String>,
    pub gamma: FiniteGroup,
    pub action: GroupAction,
}

impl PatchingIndex {
    pub fn len(&self) -> usize {
        1 + self.j_labels.len() * self.gamma.order()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn j_count(&self) -> usize {
        self.j_labels.len()
    }

    /// Index of `(j, γ)`.
    pub fn pair(&self, j: usize, g: usize) -> usize {
        1 + j * self.gamma.order() + g
    }

    /// Index of `j = (j, 1)`.
    pub fn of_j(&self, j: usize) -> usize {
        self.pair(j, self.gamma.identity())
    }

    /// The unique `(j, γ)` with `i = j^γ`, or `None` for `i = 1`.
    pub fn decompose(&self, i: usize) -> Option<(usize, usize)> {
        (i > 0).then(|| ((i - 1) / self.gamma.order(), (i - 1) % self.gamma.order()))
    }

    /// `i^γ`.
    pub fn act(&self, i: usize, g: usize) -> usize {
        self.action.act(g, i)
    }

    pub fn label(&self, i: usize) -> String {
        match self.decompose(i) {
            None => "1".into(),
            Some((j, g)) => format!("({},{})", self.j_labels[j], self.gamma.label(g)),
        }
    }

    /// Fixed point `1`, freeness on `J x Γ`, unique decomposition `i = j^γ`
    /// and `|I| >= 2`.
    pub fn structural_checks(&self) -> Vec<CheckEntry> {
        let gamma = &self.gamma;
        let fixed = (0..gamma.order()).all(|g| self.act(0, g) == 0);
        let free = (0..self.j_count()).all(|j| {
            let mut orbit: Vec<usize> = (0..gamma.order()).map(|g| self.act(self.of_j(j), g)).collect();
            orbit.sort_unstable();
            orbit.dedup();
            orbit.len() == gamma.order()
        });
        let unique = (1..self.len()).all(|i| {
            let reps: Vec<(usize, usize)> = (0..self.j_count())
                .flat_map(|j| (0..gamma.order()).map(move |g| (j, g)))
                .filter(|&(j, g)| self.act(self.of_j(j), g) == i)
                .collect();
            reps.len() == 1 && Some(reps[0]) == self.decompose(i)
        });
        vec![
            CheckEntry::check("index_fixed_point", fixed, "1^γ = 1"),
            CheckEntry::check("index_free_orbits", free, format!("{} orbits of size {}", self.j_count(), gamma.order())),
            CheckEntry::check("index_decomposition", unique, "i = j^γ uniquely"),
            CheckEntry::check("index_size", self.len() >= 2, format!("|I| = {}", self.len())),
        ]
    }
}

pub fn build_index(j_labels: Vec<String>, gamma: &FiniteGroup) -> Result<PatchingIndex> {
    if j_labels.is_empty() {
        return Err(Error::EmptyJ);
    }
    let m = gamma.order();
    let size = 1 + j_labels.len() * m;
    let table = (0..m)
        .map(|g| (0..size).map(|i| if i == 0 { 0 } else { 1 + ((i - 1) / m) * m + gamma.mul((i - 1) % m, g) }).collect())
        .collect();
    let action = GroupAction::new(gamma, size, table)?;
    Ok(PatchingIndex { j_labels, gamma: gamma.clone(), action })
}

/// `τ_i = τ_j^{γ'}` for `i = j^{γ'}`, indexed by `I` with `τ_1` unset
/// (`None`).
pub fn generator_map(index: &PatchingIndex, listing: &[usize], gamma_on_h: &GroupAction) -> Vec<Option<usize>> {
    (0..index.len())
        .map(|i| index.decompose(i).map(|(j, g)| gamma_on_h.act(g, listing[j])))
        .collect()
}

pub fn is_bijective(listing: &[usize], h: &FiniteGroup) -> bool {
    let mut seen = vec![false; h.order()];
    listing.len() == h.order() && listing.iter().all(|&x| x < h.order() && !std::mem::replace(&mut seen[x], true))
}

/// Group data needed for the generation conditions.
pub struct GroupData<'a> {
    pub gamma: &'a FiniteGroup,
    pub h: &'a FiniteGroup,
    pub gamma_on_h: &'a GroupAction,
    /// `G = G_1 ⋉ H`.
    pub g: &'a SemidirectProduct,
    pub gamma_on_g: &'a GroupAction,
}

/// The conditions on the generators: `H = {τ_j}`, `τ_i^γ = τ_{i^γ}`,
/// `H = <τ_i>`, `G = <G_i>`, `H = <G_i : i ∈ I_2>` and `G_i^γ = G_{i^γ}`,
/// with `G_1` the first factor of `G` and `G_i = <τ_i>` inside `H`.
pub fn generator_checks(index: &PatchingIndex, listing: &[usize], groups: &GroupData<'_>) -> Vec<CheckEntry> {
    let GroupData { gamma, h, gamma_on_h, g, gamma_on_g } = *groups;
    let tau = generator_map(index, listing, gamma_on_h);
    let mut out = Vec::new();
    out.push(CheckEntry::check("listing_bijective", is_bijective(listing, h), format!("listing {listing:?} of H (order {})", h.order())));

    let mut equivariant = true;
    for i in 1..index.len() {
        for c in 0..gamma.order() {
            equivariant &= tau[i].map(|t| gamma_on_h.act(c, t)) == tau[index.act(i, c)];
        }
    }
    out.push(CheckEntry::check("generator_equivariance", equivariant, "τ_i^γ = τ_{i^γ} for all i, γ"));

    let taus: Vec<usize> = tau.iter().flatten().copied().collect();
    let span_h = h.generated(&taus);
    out.push(CheckEntry::check("h_generated", span_h.len() == h.order(), format!("|<τ_i>| = {} of {}", span_h.len(), h.order())));

    // subgroups G_i of G, as sets
    let g1: Vec<usize> = g.section.clone();
    let subgroup = |i: usize| -> Vec<usize> {
        match tau[i] {
            None => g1.clone(),
            Some(t) => h.generated(&[t]).into_iter().map(|x| g.kernel[x]).collect(),
        }
    };
    let subgroups: Vec<Vec<usize>> = (0..index.len()).map(subgroup).collect();
    let all: Vec<usize> = subgroups.iter().flatten().copied().collect();
    let span_g = g.group.generated(&all);
    let low: Vec<usize> = subgroups[1..].iter().flatten().copied().collect();
    let span_low = g.group.generated(&low);
    let h_in_g: std::collections::BTreeSet<usize> = g.kernel.iter().copied().collect();
    out.push(CheckEntry::check(
        "g_generated",
        span_g.len() == g.group.order() && span_low == h_in_g,
        format!("|<G_i>| = {} of {}, |<G_i : i in I_2>| = {}", span_g.len(), g.group.order(), span_low.len()),
    ));

    let mut conj_ok = true;
    for (i, sub) in subgroups.iter().enumerate() {
        for c in 0..gamma.order() {
            let mut image: Vec<usize> = sub.iter().map(|&x| gamma_on_g.act(c, x)).collect();
            image.sort_unstable();
            let mut target = subgroups[index.act(i, c)].clone();
            target.sort_unstable();
            conj_ok &= image == target;
        }
    }
    out.push(CheckEntry::check("subgroup_equivariance", conj_ok, "G_i^γ = G_{i^γ} for all i, γ"));
    out
}

/// Strict form: rejects non-bijective listings and failed generation.
pub fn assign_generators(index: &PatchingIndex, listing: &[usize], groups: &GroupData<'_>) -> Result<Vec<Option<usize>>> {
    if listing.len() != index.j_count() || !is_bijective(listing, groups.h) {
        return Err(Error::ListingNotBijective);
    }
    for c in generator_checks(index, listing, groups) {
        if !c.status.is_pass() {
            return Err(Error::GenerationFailed(format!("{}: {}", c.name, c.details)));
        }
    }
    Ok(generator_map(index, listing, groups.gamma_on_h))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|k| format!("j{k}")).collect()
    }

    #[test]
    fn index_sizes() {
        let idx = build_index(labels(1), &FiniteGroup::trivial()).unwrap();
        assert_eq!(idx.len(), 2);
        let z2 = FiniteGroup::cyclic(2);
        let idx = build_index(labels(1), &z2).unwrap();
        assert_eq!(idx.len(), 3);
        assert_eq!(idx.act(1, 1), 2);
        assert_eq!(idx.act(2, 1), 1);
        let idx = build_index(labels(2), &z2).unwrap();
        assert_eq!(idx.len(), 5);
        assert!(idx.structural_checks().iter().all(|c| c.status.is_pass()));
        assert_eq!(build_index(Vec::new(), &z2).unwrap_err(), Error::EmptyJ);
    }
}
