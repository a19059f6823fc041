//! Structural predicates: cyclic, nilpotent, solvable, and brute-force
//! subgroup enumeration for small groups.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::group::FiniteGroup;
use crate::numtheory::factorize;

pub const DEFAULT_SUBGROUP_CAP: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StructureError {
    #[error("subgroup enumeration limited to order {cap}, group has order {order}")]
    OrderCapExceeded { order: usize, cap: usize },
}

/// A subgroup given by its sorted element indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SubgroupSet {
    elements: Vec<usize>,
}

impl SubgroupSet {
    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&x).is_ok()
    }
}

/// Dense membership mask, used as a canonical key for deduplication.
#[derive(Clone, PartialEq, Eq, Hash)]
struct Mask(Vec<u64>);

impl Mask {
    fn new(n: usize) -> Self {
        Mask(vec![0; n.div_ceil(64)])
    }
    fn insert(&mut self, x: usize) -> bool {
        let (w, b) = (x / 64, 1u64 << (x % 64));
        let fresh = self.0[w] & b == 0;
        self.0[w] |= b;
        fresh
    }
    fn contains(&self, x: usize) -> bool {
        self.0[x / 64] & (1u64 << (x % 64)) != 0
    }
}

/// Subgroup generated by `gens`.
pub fn generate_subgroup(g: &FiniteGroup, gens: &[usize]) -> SubgroupSet {
    let (_, mut elements) = generate_masked(g, gens);
    elements.sort_unstable();
    SubgroupSet { elements }
}

fn generate_masked(g: &FiniteGroup, gens: &[usize]) -> (Mask, Vec<usize>) {
    let mut mask = Mask::new(g.order());
    let mut elements = vec![0usize];
    mask.insert(0);
    let gens: Vec<usize> = gens.iter().copied().filter(|&x| x != 0).collect();
    let mut head = 0;
    while head < elements.len() {
        let x = elements[head];
        for &s in &gens {
            let y = g.mul(x, s);
            if mask.insert(y) {
                elements.push(y);
            }
        }
        head += 1;
    }
    (mask, elements)
}

/// True iff `set` (which must contain the identity) is closed under
/// multiplication. For finite sets this makes it a subgroup.
pub fn is_closed(g: &FiniteGroup, set: &[usize]) -> bool {
    let mut mask = Mask::new(g.order());
    for &x in set {
        mask.insert(x);
    }
    if !mask.contains(0) {
        return false;
    }
    set.iter().all(|&a| set.iter().all(|&b| mask.contains(g.mul(a, b))))
}

pub fn is_cyclic(g: &FiniteGroup) -> bool {
    g.element_orders().iter().any(|&o| o as usize == g.order())
}

/// Nilpotency of the subgroup with the given elements: for each prime `p`
/// dividing its order, the elements of `p`-power order must number exactly
/// the full `p`-part of the order and be closed under multiplication.
pub fn is_nilpotent_subgroup(g: &FiniteGroup, elements: &[usize]) -> bool {
    let order = elements.len() as u64;
    let f = factorize(order).expect("subgroup order is positive");
    for (&p, &a) in f.factors() {
        let p_part = p.pow(a as u32);
        let sylow: Vec<usize> = elements
            .iter()
            .copied()
            .filter(|&x| p_part % g.element_order(x) == 0)
            .collect();
        if sylow.len() as u64 != p_part || !is_closed(g, &sylow) {
            return false;
        }
    }
    true
}

pub fn is_nilpotent(g: &FiniteGroup) -> bool {
    let all: Vec<usize> = g.elements().collect();
    is_nilpotent_subgroup(g, &all)
}

/// Commutator subgroup `[H, H]` of the subgroup with the given elements.
pub fn derived_subgroup(g: &FiniteGroup, elements: &[usize]) -> SubgroupSet {
    let mut seen = Mask::new(g.order());
    let mut gens = Vec::new();
    for &x in elements {
        let xi = g.inv(x);
        for &y in elements {
            let c = g.mul(g.mul(xi, g.inv(y)), g.mul(x, y));
            if seen.insert(c) {
                gens.push(c);
            }
        }
    }
    generate_subgroup(g, &gens)
}

/// Derived series of `g`, starting with `g` itself and ending at the first
/// repeated term.
pub fn derived_series(g: &FiniteGroup) -> Vec<SubgroupSet> {
    let mut series = vec![SubgroupSet { elements: g.elements().collect() }];
    loop {
        let next = derived_subgroup(g, series.last().expect("nonempty").elements());
        if next.order() == series.last().expect("nonempty").order() {
            return series;
        }
        series.push(next);
    }
}

pub fn is_solvable(g: &FiniteGroup) -> bool {
    derived_series(g).last().expect("nonempty").order() == 1
}

pub fn enumerate_subgroups(g: &FiniteGroup) -> Result<Vec<SubgroupSet>, StructureError> {
    enumerate_subgroups_capped(g, DEFAULT_SUBGROUP_CAP)
}

/// All subgroups of `g`. Starts from the cyclic subgroups and repeatedly
/// joins every known subgroup with every cyclic subgroup until no new
/// subgroup appears; every subgroup is a join of cyclic ones, so this
/// reaches all of them.
pub fn enumerate_subgroups_capped(g: &FiniteGroup, cap: usize) -> Result<Vec<SubgroupSet>, StructureError> {
    if g.order() > cap {
        return Err(StructureError::OrderCapExceeded { order: g.order(), cap });
    }
    let mut seen: HashSet<Mask> = HashSet::new();
    // (generators, membership mask) for every subgroup found
    let mut found: Vec<(Vec<usize>, Mask)> = Vec::new();
    let mut cyclic_gens: Vec<usize> = Vec::new();
    for x in g.elements() {
        let (mask, _) = generate_masked(g, &[x]);
        if seen.insert(mask.clone()) {
            cyclic_gens.push(x);
            found.push((vec![x], mask));
        }
    }
    let mut head = 0;
    while head < found.len() {
        let (gens, mask) = found[head].clone();
        for &c in &cyclic_gens {
            if mask.contains(c) {
                continue;
            }
            let mut joined = gens.clone();
            joined.push(c);
            let (jmask, _) = generate_masked(g, &joined);
            if seen.insert(jmask.clone()) {
                found.push((joined, jmask));
            }
        }
        head += 1;
    }
    let mut out: Vec<SubgroupSet> = found
        .into_iter()
        .map(|(_, mask)| SubgroupSet { elements: g.elements().filter(|&x| mask.contains(x)).collect() })
        .collect();
    out.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.elements.cmp(&b.elements)));
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum SubgroupCount {
    Unique { subgroup: SubgroupSet },
    Multiple { count: usize },
    None,
}

/// Classifies how many subgroups of order `n` the group has.
pub fn unique_subgroup_of_order(g: &FiniteGroup, n: usize) -> Result<SubgroupCount, StructureError> {
    unique_subgroup_of_order_capped(g, n, DEFAULT_SUBGROUP_CAP)
}

pub fn unique_subgroup_of_order_capped(g: &FiniteGroup, n: usize, cap: usize) -> Result<SubgroupCount, StructureError> {
    if n == g.order() {
        return Ok(SubgroupCount::Unique { subgroup: SubgroupSet { elements: g.elements().collect() } });
    }
    let mut matching: Vec<SubgroupSet> = enumerate_subgroups_capped(g, cap)?
        .into_iter()
        .filter(|h| h.order() == n)
        .collect();
    Ok(match matching.len() {
        0 => SubgroupCount::None,
        1 => SubgroupCount::Unique { subgroup: matching.pop().expect("one") },
        count => SubgroupCount::Multiple { count },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::*;
    use crate::numtheory::divisor_count;

    #[test]
    fn cyclicity() {
        assert!(is_cyclic(&cyclic(12).unwrap()));
        assert!(!is_cyclic(&symmetric(3).unwrap()));
        assert!(is_cyclic(&direct_product(&cyclic(2).unwrap(), &cyclic(3).unwrap()).unwrap()));
        assert!(!is_cyclic(&elementary_abelian(2, 2).unwrap()));
    }

    #[test]
    fn nilpotency() {
        assert!(is_nilpotent(&quaternion_generalized(16).unwrap()));
        assert!(is_nilpotent(&dihedral(8).unwrap()));
        assert!(!is_nilpotent(&symmetric(3).unwrap()));
        assert!(!is_nilpotent(&dihedral(6).unwrap()));
        let q8c3 = direct_product(&quaternion_generalized(8).unwrap(), &cyclic(3).unwrap()).unwrap();
        assert!(is_nilpotent(&q8c3));
        assert!(!is_nilpotent(&alternating(4).unwrap()));
    }

    #[test]
    fn solvability() {
        assert!(is_solvable(&symmetric(3).unwrap()));
        assert!(is_solvable(&symmetric(4).unwrap()));
        assert!(!is_solvable(&alternating(5).unwrap()));
        assert!(!is_solvable(&symmetric(5).unwrap()));
        assert!(is_solvable(&elementary_abelian(3, 3).unwrap()));
        let series: Vec<usize> = derived_series(&symmetric(3).unwrap()).iter().map(|h| h.order()).collect();
        assert_eq!(series, vec![6, 3, 1]);
        let a5 = derived_series(&alternating(5).unwrap());
        assert_eq!(a5.len(), 1);
    }

    #[test]
    fn subgroup_enumeration() {
        for n in 1..=36usize {
            let subs = enumerate_subgroups(&cyclic(n).unwrap()).unwrap();
            assert_eq!(subs.len() as u64, divisor_count(n as u64).unwrap(), "n={n}");
        }
        let s3 = enumerate_subgroups(&symmetric(3).unwrap()).unwrap();
        assert_eq!(s3.iter().map(|h| h.order()).collect::<Vec<_>>(), vec![1, 2, 2, 2, 3, 6]);
        assert_eq!(enumerate_subgroups(&elementary_abelian(2, 2).unwrap()).unwrap().len(), 5);
        // known subgroup counts
        assert_eq!(enumerate_subgroups(&symmetric(4).unwrap()).unwrap().len(), 30);
        assert_eq!(enumerate_subgroups(&quaternion_generalized(8).unwrap()).unwrap().len(), 6);
        assert_eq!(enumerate_subgroups(&dihedral(4).unwrap()).unwrap().len(), 10);
        assert_eq!(enumerate_subgroups(&elementary_abelian(2, 4).unwrap()).unwrap().len(), 67);
        assert_eq!(enumerate_subgroups(&alternating(4).unwrap()).unwrap().len(), 10);
        let g = symmetric(4).unwrap();
        for h in enumerate_subgroups(&g).unwrap() {
            assert!(is_closed(&g, h.elements()));
            assert_eq!(24 % h.order(), 0);
        }
        assert!(matches!(
            enumerate_subgroups(&cyclic(201).unwrap()),
            Err(StructureError::OrderCapExceeded { order: 201, cap: 200 })
        ));
    }

    #[test]
    fn unique_subgroups() {
        let q8 = quaternion_generalized(8).unwrap();
        match unique_subgroup_of_order(&q8, 2).unwrap() {
            SubgroupCount::Unique { subgroup } => assert_eq!(subgroup.order(), 2),
            other => panic!("{other:?}"),
        }
        assert_eq!(
            unique_subgroup_of_order(&symmetric(3).unwrap(), 2).unwrap(),
            SubgroupCount::Multiple { count: 3 }
        );
        assert!(matches!(unique_subgroup_of_order(&cyclic(12).unwrap(), 4).unwrap(), SubgroupCount::Unique { .. }));
        assert_eq!(unique_subgroup_of_order(&alternating(4).unwrap(), 6).unwrap(), SubgroupCount::None);
    }

    #[test]
    fn implication_chain() {
        for g in [
            cyclic(12).unwrap(),
            dihedral(4).unwrap(),
            symmetric(4).unwrap(),
            alternating(5).unwrap(),
            inversion_semidirect(3, 1, 2).unwrap(),
        ] {
            if is_cyclic(&g) {
                assert!(is_nilpotent(&g));
            }
            if is_nilpotent(&g) {
                assert!(is_solvable(&g));
            }
        }
    }
}
