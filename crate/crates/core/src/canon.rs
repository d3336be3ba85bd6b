//! Canonical labelling and isomorphism for small posets.
//!
//! Elements are first split into classes by iterated refinement of
//! (down-set size, up-set size, neighbour classes). The canonical labelling is
//! the lexicographically least comparability code over orderings that respect
//! those classes, found by branch and bound. Interchangeable twins (same strict
//! down and up sets) are only tried once.

use std::collections::BTreeMap;

use crate::poset::Poset;
use crate::subset::Subset;

/// Canonical form: `perm[i]` is the canonical label of element `i`.
#[derive(Clone, Debug)]
pub struct Canonical {
    pub code: Vec<u8>,
    pub perm: Vec<usize>,
}

impl Canonical {
    /// The relabelled poset.
    pub fn poset(&self, original: &Poset) -> Poset {
        original.relabel(&self.perm)
    }
}

fn refine_classes(p: &Poset) -> Vec<usize> {
    let n = p.len();
    let mut class: Vec<usize> = {
        let keys: Vec<(usize, usize)> = (0..n).map(|i| (p.down(i).len(), p.up(i).len())).collect();
        rank_keys(&keys)
    };
    loop {
        let keys: Vec<(usize, Vec<usize>, Vec<usize>)> = (0..n)
            .map(|i| {
                let mut below: Vec<usize> = p.down(i).without(i).iter().map(|j| class[j]).collect();
                let mut above: Vec<usize> = p.up(i).without(i).iter().map(|j| class[j]).collect();
                below.sort_unstable();
                above.sort_unstable();
                (class[i], below, above)
            })
            .collect();
        let next = rank_keys(&keys);
        let before = class.iter().max().map_or(0, |m| m + 1);
        let after = next.iter().max().map_or(0, |m| m + 1);
        class = next;
        if after == before {
            return class;
        }
    }
}

fn rank_keys<K: Ord + Clone>(keys: &[K]) -> Vec<usize> {
    let distinct: BTreeMap<K, usize> = keys
        .iter()
        .cloned()
        .map(|k| (k, 0))
        .collect::<BTreeMap<_, _>>()
        .into_keys()
        .enumerate()
        .map(|(i, k)| (k, i))
        .collect();
    keys.iter().map(|k| distinct[k]).collect()
}

struct Search<'a> {
    p: &'a Poset,
    class: Vec<usize>,
    slots: Vec<usize>,
    best: Option<(Vec<u8>, Vec<usize>)>,
    order: Vec<usize>,
    code: Vec<u8>,
    used: Subset,
}

impl Search<'_> {
    fn relation(&self, a: usize, b: usize) -> u8 {
        if self.p.leq(a, b) {
            1
        } else if self.p.leq(b, a) {
            2
        } else {
            0
        }
    }

    fn twin_of_smaller(&self, x: usize, candidates: Subset) -> bool {
        let (dx, ux) = (self.p.down(x).without(x), self.p.up(x).without(x));
        candidates.iter().take_while(|&y| y < x).any(|y| {
            self.p.down(y).without(y) == dx && self.p.up(y).without(y) == ux
        })
    }

    fn run(&mut self) {
        let pos = self.order.len();
        if pos == self.p.len() {
            let better = match &self.best {
                None => true,
                Some((code, _)) => self.code < *code,
            };
            if better {
                self.best = Some((self.code.clone(), self.order.clone()));
            }
            return;
        }
        let want = self.slots[pos];
        let candidates: Subset = (0..self.p.len())
            .filter(|&i| !self.used.contains(i) && self.class[i] == want)
            .collect();
        for x in candidates.iter() {
            if self.twin_of_smaller(x, candidates) {
                continue;
            }
            let mark = self.code.len();
            for k in 0..pos {
                let r = self.relation(x, self.order[k]);
                self.code.push(r);
            }
            let keep = match &self.best {
                None => true,
                Some((best, _)) => self.code[..] <= best[..self.code.len()],
            };
            if keep {
                self.order.push(x);
                self.used.insert(x);
                self.run();
                self.used.remove(x);
                self.order.pop();
            }
            self.code.truncate(mark);
        }
    }
}

/// Canonical labelling of `p`.
pub fn canonical(p: &Poset) -> Canonical {
    let class = refine_classes(p);
    let mut slots = class.clone();
    slots.sort_unstable();
    let mut search = Search {
        p,
        class: class.clone(),
        slots,
        best: None,
        order: Vec::with_capacity(p.len()),
        code: Vec::new(),
        used: Subset::EMPTY,
    };
    search.run();
    let (body, order) = search.best.unwrap_or_default();
    let mut perm = vec![0; p.len()];
    for (label, &elem) in order.iter().enumerate() {
        perm[elem] = label;
    }
    // Prefix the class sequence so posets with different classes never collide.
    let mut code: Vec<u8> = Vec::with_capacity(p.len() + body.len());
    let mut sizes: Vec<(usize, usize)> = (0..p.len())
        .map(|i| (p.down(i).len(), p.up(i).len()))
        .collect();
    sizes.sort_unstable();
    code.push(p.len() as u8);
    for (d, u) in sizes {
        code.push(d as u8);
        code.push(u as u8);
    }
    code.extend(body);
    Canonical { code, perm }
}

/// An isomorphism `a -> b` as an element map, if one exists.
pub fn isomorphism(a: &Poset, b: &Poset) -> Option<Vec<usize>> {
    if a.len() != b.len() {
        return None;
    }
    let ca = canonical(a);
    let cb = canonical(b);
    if ca.code != cb.code {
        return None;
    }
    let mut inv_b = vec![0; b.len()];
    for (elem, &label) in cb.perm.iter().enumerate() {
        inv_b[label] = elem;
    }
    let map: Vec<usize> = ca.perm.iter().map(|&label| inv_b[label]).collect();
    debug_assert!((0..a.len()).all(|x| (0..a.len()).all(|y| a.leq(x, y) == b.leq(map[x], map[y]))));
    Some(map)
}

pub fn is_isomorphic(a: &Poset, b: &Poset) -> bool {
    isomorphism(a, b).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::tests::arb_poset;
    use proptest::prelude::*;

    fn brute_isomorphic(a: &Poset, b: &Poset) -> bool {
        fn go(a: &Poset, b: &Poset, map: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
            let i = map.len();
            if i == a.len() {
                return true;
            }
            for j in 0..b.len() {
                if used[j] {
                    continue;
                }
                if (0..i).all(|k| a.leq(k, i) == b.leq(map[k], j) && a.leq(i, k) == b.leq(j, map[k])) {
                    used[j] = true;
                    map.push(j);
                    if go(a, b, map, used) {
                        return true;
                    }
                    map.pop();
                    used[j] = false;
                }
            }
            false
        }
        a.len() == b.len() && go(a, b, &mut Vec::new(), &mut vec![false; b.len()])
    }

    #[test]
    fn crown_and_shifted_crown_are_isomorphic() {
        let crown = Poset::crown(4).unwrap();
        let perm = [3, 0, 1, 2, 7, 4, 5, 6];
        let moved = crown.relabel(&perm);
        let map = isomorphism(&crown, &moved).unwrap();
        for x in 0..8 {
            for y in 0..8 {
                assert_eq!(crown.leq(x, y), moved.leq(map[x], map[y]));
            }
        }
        assert!(!is_isomorphic(&crown, &Poset::disjoint_chains(&[2, 2, 2, 2]).unwrap()));
    }

    #[test]
    fn large_antichain_is_cheap() {
        let a = Poset::antichain(12).unwrap();
        assert!(is_isomorphic(&a, &a.relabel(&(0..12).rev().collect::<Vec<_>>())));
    }

    proptest! {
        #[test]
        fn canonical_form_agrees_with_brute_force(a in arb_poset(6), b in arb_poset(6)) {
            prop_assert_eq!(is_isomorphic(&a, &b), brute_isomorphic(&a, &b));
        }

        #[test]
        fn relabelling_preserves_canonical_code(p in arb_poset(8), seed in any::<u64>()) {
            let n = p.len();
            let mut perm: Vec<usize> = (0..n).collect();
            let mut s = seed;
            for i in (1..n).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                perm.swap(i, (s >> 33) as usize % (i + 1));
            }
            let q = p.relabel(&perm);
            prop_assert_eq!(canonical(&p).code, canonical(&q).code);
            prop_assert_eq!(canonical(&p).poset(&p), canonical(&q).poset(&q));
        }
    }
}
