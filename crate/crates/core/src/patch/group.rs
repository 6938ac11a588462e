//! Finite groups given by multiplication tables, right actions, and
//! semidirect products.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};

/// A finite group; elements are `0..order` and `table[a][b] = ab`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiniteGroup {
    labels: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
}

impl FiniteGroup {
    /// Validates closure, associativity, identity and inverses exhaustively.
    pub fn new(labels: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 || labels.len() != n {
            return Err(Error::GroupAxiom("table and labels must be non-empty and of equal size".into()));
        }
        if table.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return Err(Error::GroupAxiom("table is not closed".into()));
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::GroupAxiom(format!(
                            "({} {}) {} != {} ({} {})",
                            labels[a], labels[b], labels[c], labels[a], labels[b], labels[c]
                        )));
                    }
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::GroupAxiom("no identity".into()))?;
        let inverses = (0..n)
            .map(|x| {
                (0..n)
                    .find(|&y| table[x][y] == identity && table[y][x] == identity)
                    .ok_or_else(|| Error::GroupAxiom(format!("{} has no inverse", labels[x])))
            })
            .collect::<Result<_>>()?;
        Ok(FiniteGroup { labels, table, identity, inverses })
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// `Z/n` with elements labelled `0, ..., n-1`.
    pub fn cyclic(n: usize) -> Self {
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::new((0..n).map(|a| a.to_string()).collect(), table).expect("cyclic group table")
    }

    /// The symmetric group on `n` letters; permutations in lexicographic
    /// order, composed left to right (`(pq)(x) = q(p(x))`).
    pub fn symmetric(n: usize) -> Self {
        let perms = permutations(n);
        let index = |p: &Vec<usize>| perms.iter().position(|q| q == p).expect("permutation listed");
        let table = perms
            .iter()
            .map(|p| perms.iter().map(|q| index(&p.iter().map(|&x| q[x]).collect())).collect())
            .collect();
        let labels = perms.iter().map(|p| format!("{p:?}")).collect();
        Self::new(labels, table).expect("symmetric group table")
    }

    /// `A x B` with pairs indexed `a * |B| + b`.
    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let (m, n) = (a.order(), b.order());
        let table = (0..m * n)
            .map(|x| (0..m * n).map(|y| a.mul(x / n, y / n) * n + b.mul(x % n, y % n)).collect())
            .collect();
        let labels = (0..m * n).map(|x| format!("({},{})", a.label(x / n), b.label(x % n))).collect();
        Self::new(labels, table).expect("direct product of groups")
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// The subgroup generated by `gens`, as a sorted set.
    pub fn generated(&self, gens: &[usize]) -> BTreeSet<usize> {
        let mut set = BTreeSet::from([self.identity]);
        let mut frontier = vec![self.identity];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if set.insert(y) {
                    frontier.push(y);
                }
            }
        }
        set
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order()).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// A small generating set, chosen greedily by element index.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = self.generated(&gens);
        for x in 0..self.order() {
            if !span.contains(&x) {
                gens.push(x);
                span = self.generated(&gens);
            }
        }
        gens
    }

    /// An isomorphism `self -> other` found by backtracking over images of
    /// a generating set, or `None`.
    pub fn isomorphism(&self, other: &FiniteGroup) -> Option<Vec<usize>> {
        if self.order() != other.order() {
            return None;
        }
        let gens = self.generators();
        let mut images = Vec::with_capacity(gens.len());
        self.extend_images(other, &gens, &mut images)
    }

    fn extend_images(&self, other: &FiniteGroup, gens: &[usize], images: &mut Vec<usize>) -> Option<Vec<usize>> {
        if images.len() == gens.len() {
            return self.homomorphism_from(other, gens, images).filter(|m| {
                let mut seen = vec![false; other.order()];
                m.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
            });
        }
        let g = gens[images.len()];
        for y in 0..other.order() {
            if other.element_order(y) != self.element_order(g) {
                continue;
            }
            images.push(y);
            if let Some(m) = self.extend_images(other, gens, images) {
                return Some(m);
            }
            images.pop();
        }
        None
    }

    /// Extends `gens[k] -> images[k]` along words; `None` when ill-defined.
    fn homomorphism_from(&self, other: &FiniteGroup, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
        let mut map = vec![usize::MAX; self.order()];
        map[self.identity] = other.identity;
        let mut frontier = vec![self.identity];
        while let Some(x) = frontier.pop() {
            for (&g, &y) in gens.iter().zip(images) {
                let xg = self.mul(x, g);
                let img = other.mul(map[x], y);
                if map[xg] == usize::MAX {
                    map[xg] = img;
                    frontier.push(xg);
                } else if map[xg] != img {
                    return None;
                }
            }
        }
        let hom = (0..self.order()).all(|a| (0..self.order()).all(|b| map[self.mul(a, b)] == other.mul(map[a], map[b])));
        hom.then_some(map)
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// A right action `x -> x^g` of a group on `0..target_size`, stored as
/// `table[g][x]`; compatibility reads `x^(gh) = (x^g)^h`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupAction {
    table: Vec<Vec<usize>>,
}

impl GroupAction {
    /// Checks that every map is a permutation, that the identity acts
    /// trivially, and compatibility with the multiplication of `acting`.
    pub fn new(acting: &FiniteGroup, target_size: usize, table: Vec<Vec<usize>>) -> Result<Self> {
        if table.len() != acting.order() {
            return Err(Error::NotAutomorphismAction("one map per group element is required".into()));
        }
        for (g, row) in table.iter().enumerate() {
            let mut seen = vec![false; target_size];
            if row.len() != target_size || row.iter().any(|&x| x >= target_size || std::mem::replace(&mut seen[x], true)) {
                return Err(Error::NotAutomorphismAction(format!("map of {} is not a permutation", acting.label(g))));
            }
        }
        if table[acting.identity()].iter().enumerate().any(|(x, &y)| x != y) {
            return Err(Error::NotAutomorphismAction("identity acts non-trivially".into()));
        }
        for g in 0..acting.order() {
            for h in 0..acting.order() {
                let gh = acting.mul(g, h);
                if (0..target_size).any(|x| table[gh][x] != table[h][table[g][x]]) {
                    return Err(Error::NotAutomorphismAction(format!(
                        "x^({}{}) != (x^{})^{}",
                        acting.label(g),
                        acting.label(h),
                        acting.label(g),
                        acting.label(h)
                    )));
                }
            }
        }
        Ok(GroupAction { table })
    }

    /// As [`GroupAction::new`], additionally requiring every map to be an
    /// automorphism of `target`.
    pub fn on_group(acting: &FiniteGroup, target: &FiniteGroup, table: Vec<Vec<usize>>) -> Result<Self> {
        let action = Self::new(acting, target.order(), table)?;
        for g in 0..acting.order() {
            let m = &action.table[g];
            for x in 0..target.order() {
                for y in 0..target.order() {
                    if m[target.mul(x, y)] != target.mul(m[x], m[y]) {
                        return Err(Error::NotAutomorphismAction(format!(
                            "{} does not respect {} * {}",
                            acting.label(g),
                            target.label(x),
                            target.label(y)
                        )));
                    }
                }
            }
        }
        Ok(action)
    }

    pub fn trivial(acting: &FiniteGroup, target_size: usize) -> Self {
        GroupAction { table: vec![(0..target_size).collect(); acting.order()] }
    }

    /// `x^g`.
    pub fn act(&self, g: usize, x: usize) -> usize {
        self.table[g][x]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn target_size(&self) -> usize {
        self.table.first().map_or(0, Vec::len)
    }
}

/// `A ⋉ B` with `(a1, b1)(a2, b2) = (a1 a2, b1^{a2} b2)`; pair `(a, b)` has
/// index `a * |B| + b`.
#[derive(Clone, Debug, Serialize)]
pub struct SemidirectProduct {
    pub group: FiniteGroup,
    /// `(a, b) -> a`.
    pub projection: Vec<usize>,
    /// `a -> (a, 1)`.
    pub section: Vec<usize>,
    /// `b -> (1, b)`.
    pub kernel: Vec<usize>,
}

impl SemidirectProduct {
    pub fn pair(&self, a: usize, b: usize) -> usize {
        a * self.kernel.len() + b
    }

    /// `(a, b)`.
    pub fn components(&self, x: usize) -> (usize, usize) {
        let n = self.kernel.len();
        (x / n, x % n)
    }
}

pub fn semidirect_product(a: &FiniteGroup, b: &FiniteGroup, action: &GroupAction) -> Result<SemidirectProduct> {
    let action = GroupAction::on_group(a, b, action.table.clone())?;
    let (m, n) = (a.order(), b.order());
    let table = (0..m * n)
        .map(|x| {
            let (a1, b1) = (x / n, x % n);
            (0..m * n)
                .map(|y| {
                    let (a2, b2) = (y / n, y % n);
                    a.mul(a1, a2) * n + b.mul(action.act(a2, b1), b2)
                })
                .collect()
        })
        .collect();
    let labels = (0..m * n).map(|x| format!("({},{})", a.label(x / n), b.label(x % n))).collect();
    let group = FiniteGroup::new(labels, table)?;
    let projection = (0..m * n).map(|x| x / n).collect();
    let section = (0..m).map(|x| x * n + b.identity()).collect();
    let kernel = (0..n).map(|y| a.identity() * n + y).collect();
    Ok(SemidirectProduct { group, projection, section, kernel })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inversion(n: usize) -> GroupAction {
        let z2 = FiniteGroup::cyclic(2);
        GroupAction::on_group(&z2, &FiniteGroup::cyclic(n), vec![(0..n).collect(), (0..n).map(|x| (n - x) % n).collect()])
            .unwrap()
    }

    #[test]
    fn trivial_action_gives_direct_product() {
        let z2 = FiniteGroup::cyclic(2);
        let z3 = FiniteGroup::cyclic(3);
        let sd = semidirect_product(&z2, &z3, &GroupAction::trivial(&z2, 3)).unwrap();
        assert!(sd.group.isomorphism(&FiniteGroup::cyclic(6)).is_some());
    }

    #[test]
    fn dihedral_is_symmetric() {
        let sd = semidirect_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(3), &inversion(3)).unwrap();
        assert!(!sd.group.is_abelian());
        assert!(sd.group.isomorphism(&FiniteGroup::symmetric(3)).is_some());
        assert!(sd.group.isomorphism(&FiniteGroup::cyclic(6)).is_none());
    }

    #[test]
    fn klein_four() {
        let z2 = FiniteGroup::cyclic(2);
        let sd = semidirect_product(&z2, &z2, &GroupAction::trivial(&z2, 2)).unwrap();
        assert!(sd.group.isomorphism(&FiniteGroup::direct_product(&z2, &z2)).is_some());
        assert!(sd.group.isomorphism(&FiniteGroup::cyclic(4)).is_none());
    }

    #[test]
    fn bad_tables_are_rejected() {
        let bad = FiniteGroup::new(vec!["a".into(), "b".into()], vec![vec![0, 1], vec![1, 1]]);
        assert!(matches!(bad, Err(Error::GroupAxiom(_))));
        let z2 = FiniteGroup::cyclic(2);
        // a non-homomorphic permutation of Z/3
        let act = GroupAction::on_group(&z2, &FiniteGroup::cyclic(3), vec![vec![0, 1, 2], vec![1, 0, 2]]);
        assert!(matches!(act, Err(Error::NotAutomorphismAction(_))));
    }

    #[test]
    fn projection_and_section() {
        let sd = semidirect_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(3), &inversion(3)).unwrap();
        for (a, &s) in sd.section.iter().enumerate() {
            assert_eq!(sd.projection[s], a);
        }
        for &k in &sd.kernel {
            assert_eq!(sd.projection[k], 0);
        }
    }
}
