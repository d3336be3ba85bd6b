//! Families of `r`-ideals and the ideal graph.
//!
//! The family of all ideals of cardinality `r` determines the ball of radius
//! `r`, so most statistics used by the criteria live here: the union of the
//! family, its common core, the excess `lambda = |union| - r`, the essential
//! part `union \ core` and the number `k` of maximal elements of that part.
//!
//! Two `r`-ideals are adjacent in the ideal graph when they differ by swapping
//! one element; the graph is connected and every pair is joined by a path of
//! length equal to their Johnson distance.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::poset::Poset;
use crate::subset::Subset;

/// All ideals of cardinality `r` with derived statistics.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdealFamily {
    pub r: usize,
    /// Sorted by bitmask value.
    pub ideals: Vec<Subset>,
    /// Union of the family.
    pub union: Subset,
    /// Intersection of the family.
    pub core: Subset,
    /// `|core|`.
    pub u: usize,
    /// `|union| - r`.
    pub lambda: usize,
    /// `union \ core`.
    pub essential: Subset,
    /// Maximal elements of the essential part, as a subposet.
    pub k: usize,
}

impl IdealFamily {
    pub fn len(&self) -> usize {
        self.ideals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ideals.is_empty()
    }

    pub fn contains(&self, s: Subset) -> bool {
        self.ideals.binary_search(&s).is_ok()
    }

    /// Index of `s` in the canonical order.
    pub fn position(&self, s: Subset) -> Option<usize> {
        self.ideals.binary_search(&s).ok()
    }
}

/// Enumerates every ideal of cardinality `r`.
///
/// Depth-first reverse search: the parent of a nonempty ideal is the ideal with
/// its highest-index maximal element removed, so each ideal is produced once.
pub fn enumerate_ideals(poset: &Poset, r: usize) -> Result<IdealFamily> {
    let n = poset.len();
    if r > n {
        return Err(Error::Range(format!("radius {r} exceeds {n} elements")));
    }
    let mut ideals = Vec::new();
    let mut stack = vec![Subset::EMPTY];
    while let Some(ideal) = stack.pop() {
        if ideal.len() == r {
            ideals.push(ideal);
            continue;
        }
        let max = poset.maximal(ideal);
        let candidates = poset.minimal(ideal.complement(n));
        for x in candidates.iter() {
            // x becomes maximal in ideal + x; keep it only if it is the
            // largest maximal element there.
            let survivors = max - poset.down(x);
            if survivors.last().is_none_or(|m| m < x) {
                stack.push(ideal.with(x));
            }
        }
    }
    ideals.sort_unstable();
    Ok(family_from_ideals(poset, r, ideals))
}

fn family_from_ideals(poset: &Poset, r: usize, ideals: Vec<Subset>) -> IdealFamily {
    let union = ideals.iter().fold(Subset::EMPTY, |acc, &i| acc | i);
    let core = ideals.iter().fold(union, |acc, &i| acc & i);
    let essential = union - core;
    IdealFamily {
        r,
        u: core.len(),
        lambda: union.len() - r,
        k: poset.maximal(essential).len(),
        ideals,
        union,
        core,
        essential,
    }
}

/// Grows or shrinks an ideal to cardinality `target`.
///
/// Growing adds the lowest-index minimal element of the complement; shrinking
/// removes the highest-index maximal element.
pub fn adjust_ideal(poset: &Poset, ideal: Subset, target: usize) -> Result<Subset> {
    let n = poset.len();
    if !poset.is_ideal(ideal) {
        return Err(Error::InvalidIdeal(ideal.to_string()));
    }
    if target > n {
        return Err(Error::Range(format!("target {target} exceeds {n} elements")));
    }
    let mut cur = ideal;
    while cur.len() < target {
        let x = poset
            .minimal(cur.complement(n))
            .first()
            .expect("complement of a proper ideal has a minimal element");
        cur.insert(x);
    }
    while cur.len() > target {
        let x = poset
            .maximal(cur)
            .last()
            .expect("nonempty ideal has a maximal element");
        cur.remove(x);
    }
    Ok(cur)
}

/// Half the symmetric difference of two equal-size sets.
pub fn johnson_distance(a: Subset, b: Subset) -> Result<usize> {
    if a.len() != b.len() {
        return Err(Error::SizeMismatch(a.len(), b.len()));
    }
    Ok((a ^ b).len() / 2)
}

/// A shortest path from `from` to `to` through `r`-ideals, both endpoints
/// included; consecutive entries are at Johnson distance 1.
pub fn ideal_path(poset: &Poset, from: Subset, to: Subset, r: usize) -> Result<Vec<Subset>> {
    for s in [from, to] {
        if !poset.is_ideal(s) || s.len() != r {
            return Err(Error::InvalidIdeal(format!("{s} is not a {r}-ideal")));
        }
    }
    // Walk back from `to`: swap in a minimal element of from \ cur for a
    // maximal element of cur \ from.
    let mut rev = vec![to];
    let mut cur = to;
    while cur != from {
        let v = poset
            .minimal(from - cur)
            .first()
            .expect("distinct ideals of equal size differ on both sides");
        let w = poset
            .maximal(cur - from)
            .first()
            .expect("distinct ideals of equal size differ on both sides");
        cur = cur.with(v).without(w);
        debug_assert!(poset.is_ideal(cur));
        rev.push(cur);
    }
    rev.reverse();
    Ok(rev)
}

/// True when the graph on the family with Johnson-distance-1 edges is connected.
pub fn is_connected(family: &IdealFamily) -> bool {
    let ideals = &family.ideals;
    if ideals.is_empty() {
        return true;
    }
    let mut seen = vec![false; ideals.len()];
    let mut stack = vec![0];
    seen[0] = true;
    let mut count = 1;
    while let Some(i) = stack.pop() {
        for (j, &other) in ideals.iter().enumerate() {
            if !seen[j] && (ideals[i] ^ other).len() == 2 {
                seen[j] = true;
                count += 1;
                stack.push(j);
            }
        }
    }
    count == ideals.len()
}

/// Ideals `I_0..I_lambda` and elements `a_1..a_lambda` whose running unions
/// satisfy `I_0 ∪ .. ∪ I_i = I_0 ∪ {a_1, .., a_i}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbcSequence {
    pub ideals: Vec<Subset>,
    /// 0-based elements; `elements[i]` pairs with `ideals[i + 1]`.
    pub elements: Vec<usize>,
}

impl AbcSequence {
    /// Checks the running-union identity and the freshness of each element.
    pub fn is_valid(&self) -> bool {
        if self.ideals.len() != self.elements.len() + 1 {
            return false;
        }
        let mut union = self.ideals[0];
        let mut expected = self.ideals[0];
        for (i, &a) in self.elements.iter().enumerate() {
            let next = self.ideals[i + 1];
            if !next.contains(a) || expected.contains(a) {
                return false;
            }
            union |= next;
            expected.insert(a);
            if union != expected {
                return false;
            }
        }
        true
    }
}

/// Builds an [`AbcSequence`] by walking outward from the first ideal through
/// adjacent ideals, each step picking up exactly one new element.
pub fn abc_sequence(poset: &Poset, r: usize) -> Result<AbcSequence> {
    let family = enumerate_ideals(poset, r)?;
    let first = family.ideals[0];
    let mut ideals = vec![first];
    let mut elements = Vec::new();
    let mut reached = first;
    while reached != family.union {
        let (_, next) = family
            .ideals
            .iter()
            .filter(|i| i.is_subset(reached))
            .flat_map(|&inside| {
                family
                    .ideals
                    .iter()
                    .filter(move |&&out| !out.is_subset(reached) && (inside ^ out).len() == 2)
                    .map(move |&out| (inside, out))
            })
            .next()
            .expect("ideal graph is connected");
        let fresh = next - reached;
        debug_assert_eq!(fresh.len(), 1);
        let a = fresh.first().expect("one fresh element");
        ideals.push(next);
        elements.push(a);
        reached.insert(a);
    }
    Ok(AbcSequence { ideals, elements })
}

/// `[n]` minus the upset generated by the maximal elements of the ideal `v`.
pub fn shadow_w(poset: &Poset, v: Subset) -> Result<Subset> {
    if !poset.is_ideal(v) {
        return Err(Error::InvalidIdeal(v.to_string()));
    }
    let top = poset.principal_upset(poset.maximal(v));
    Ok(poset.ground() - top)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::tests::arb_poset;
    use proptest::prelude::*;

    fn s(labels: &[usize]) -> Subset {
        Subset::from_elements(labels.iter().map(|&l| l - 1))
    }

    /// Filters every `r`-subset by the ideal test.
    fn brute_force_ideals(poset: &Poset, r: usize) -> Vec<Subset> {
        poset
            .ground()
            .subsets()
            .filter(|x| x.len() == r && poset.is_ideal(*x))
            .collect()
    }

    #[test]
    fn chain_has_one_ideal_per_size() {
        let f = enumerate_ideals(&Poset::chain(5).unwrap(), 3).unwrap();
        assert_eq!(f.ideals, vec![s(&[1, 2, 3])]);
        assert_eq!((f.lambda, f.u, f.k), (0, 3, 0));
        assert_eq!(f.essential, Subset::EMPTY);
    }

    #[test]
    fn antichain_family_is_all_pairs() {
        let f = enumerate_ideals(&Poset::antichain(4).unwrap(), 2).unwrap();
        assert_eq!(f.len(), 6);
        assert_eq!(f.union, Subset::full(4));
        assert_eq!((f.lambda, f.u, f.k), (2, 0, 4));
    }

    #[test]
    fn crown_two_ideals() {
        let crown = Poset::crown(3).unwrap();
        let f = enumerate_ideals(&crown, 2).unwrap();
        assert_eq!(f.ideals, brute_force_ideals(&crown, 2));
        assert_eq!(f.ideals, vec![s(&[1, 2]), s(&[1, 3]), s(&[2, 3])]);
        assert_eq!(f.union, s(&[1, 2, 3]));
        assert_eq!((f.lambda, f.u, f.k), (1, 0, 3));
    }

    #[test]
    fn extreme_radii() {
        let crown = Poset::crown(3).unwrap();
        assert_eq!(enumerate_ideals(&crown, 0).unwrap().ideals, vec![Subset::EMPTY]);
        assert_eq!(enumerate_ideals(&crown, 6).unwrap().ideals, vec![Subset::full(6)]);
        assert!(matches!(enumerate_ideals(&crown, 7), Err(Error::Range(_))));
    }

    #[test]
    fn adjust_grows_and_shrinks() {
        let chain = Poset::chain(5).unwrap();
        let crown = Poset::crown(3).unwrap();
        assert_eq!(adjust_ideal(&chain, Subset::EMPTY, 2).unwrap(), s(&[1, 2]));
        assert_eq!(adjust_ideal(&crown, s(&[1, 2, 4]), 1).unwrap(), s(&[1]));
        assert_eq!(adjust_ideal(&crown, s(&[1, 3]), 2).unwrap(), s(&[1, 3]));
        assert!(matches!(
            adjust_ideal(&crown, s(&[4]), 2),
            Err(Error::InvalidIdeal(_))
        ));
        assert!(matches!(
            adjust_ideal(&crown, Subset::EMPTY, 7),
            Err(Error::Range(_))
        ));
    }

    #[test]
    fn johnson_distance_values() {
        assert_eq!(johnson_distance(s(&[1, 2]), s(&[1, 2])).unwrap(), 0);
        assert_eq!(johnson_distance(s(&[1, 2]), s(&[3, 4])).unwrap(), 2);
        assert_eq!(johnson_distance(s(&[1, 2]), s(&[2, 3])).unwrap(), 1);
        assert_eq!(
            johnson_distance(s(&[1]), s(&[2, 3])),
            Err(Error::SizeMismatch(1, 2))
        );
    }

    fn assert_valid_path(poset: &Poset, path: &[Subset], from: Subset, to: Subset, r: usize) {
        assert_eq!(path.first(), Some(&from));
        assert_eq!(path.last(), Some(&to));
        assert_eq!(path.len() - 1, johnson_distance(from, to).unwrap());
        for w in path.windows(2) {
            assert_eq!(johnson_distance(w[0], w[1]).unwrap(), 1);
        }
        for &k in path {
            assert!(poset.is_ideal(k) && k.len() == r);
        }
    }

    #[test]
    fn paths_between_ideals() {
        let anti = Poset::antichain(4).unwrap();
        let p = ideal_path(&anti, s(&[1, 2]), s(&[3, 4]), 2).unwrap();
        assert_valid_path(&anti, &p, s(&[1, 2]), s(&[3, 4]), 2);
        let crown = Poset::crown(3).unwrap();
        let p = ideal_path(&crown, s(&[1, 2]), s(&[2, 3]), 2).unwrap();
        assert_eq!(p, vec![s(&[1, 2]), s(&[2, 3])]);
        assert_eq!(
            ideal_path(&crown, s(&[1, 2]), s(&[1, 2]), 2).unwrap(),
            vec![s(&[1, 2])]
        );
        assert!(ideal_path(&crown, s(&[4, 1]), s(&[1, 2]), 2).is_err());
    }

    #[test]
    fn abc_examples() {
        let seq = abc_sequence(&Poset::chain(5).unwrap(), 2).unwrap();
        assert_eq!(seq.ideals, vec![s(&[1, 2])]);
        assert!(seq.elements.is_empty());

        let seq = abc_sequence(&Poset::antichain(4).unwrap(), 2).unwrap();
        assert_eq!(seq.elements.len(), 2);
        assert!(seq.is_valid());

        let seq = abc_sequence(&Poset::crown(3).unwrap(), 2).unwrap();
        assert_eq!(seq.ideals[0], s(&[1, 2]));
        assert_eq!(seq.elements, vec![2]);
        assert!(seq.ideals[1].contains(2));
        assert!(seq.is_valid());
    }

    #[test]
    fn shadow_examples() {
        let chain = Poset::chain(5).unwrap();
        assert_eq!(shadow_w(&chain, s(&[1, 2])).unwrap(), s(&[1]));
        let crown = Poset::crown(3).unwrap();
        assert_eq!(shadow_w(&crown, s(&[1, 2, 3])).unwrap(), Subset::EMPTY);
        let anti = Poset::antichain(4).unwrap();
        assert_eq!(shadow_w(&anti, s(&[1])).unwrap(), s(&[2, 3, 4]));
        assert!(shadow_w(&crown, s(&[4])).is_err());
    }

    proptest! {
        #[test]
        fn enumeration_matches_brute_force(p in arb_poset(10)) {
            for r in 0..=p.len() {
                let f = enumerate_ideals(&p, r).unwrap();
                prop_assert_eq!(&f.ideals, &brute_force_ideals(&p, r));
                prop_assert!(!f.is_empty());
                prop_assert!(is_connected(&f));
                let seq = abc_sequence(&p, r).unwrap();
                prop_assert_eq!(seq.elements.len(), f.lambda);
                prop_assert!(seq.is_valid());
            }
        }

        #[test]
        fn shadow_is_an_ideal_containing_non_maximal_part(p in arb_poset(10), bits in any::<u64>()) {
            let v = p.principal_ideal(Subset::from_bits(bits) & p.ground());
            let w = shadow_w(&p, v).unwrap();
            prop_assert!(p.is_ideal(w));
            prop_assert!((v - p.maximal(v)).is_subset(w));
        }
    }

    #[test]
    fn counts_on_chains_and_antichains() {
        let chain = Poset::chain(7).unwrap();
        let anti = Poset::antichain(7).unwrap();
        let binom = [1, 7, 21, 35, 35, 21, 7, 1];
        for r in 0..=7 {
            assert_eq!(enumerate_ideals(&chain, r).unwrap().len(), 1);
            assert_eq!(enumerate_ideals(&anti, r).unwrap().len(), binom[r]);
        }
    }
}
