//! Finite posets on `{0, .., n-1}` stored as down/up closure masks.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::subset::{Subset, MAX_ELEMENTS};

/// A finite partial order.
///
/// `down[i]` is `{j : j <= i}` and `up[i]` is `{j : j >= i}`; both contain `i`.
/// Values are immutable once built.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poset {
    n: usize,
    down: Vec<Subset>,
    up: Vec<Subset>,
}

/// Which extremal elements to extract.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Extremal {
    Max,
    Min,
}

/// Named poset families.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum PosetKind {
    Chain { n: usize },
    Antichain { n: usize },
    DisjointChains { lengths: Vec<usize> },
    Crown { t: usize },
}

impl Poset {
    /// Reflexive-transitive closure of a cover list. Pairs `(a, b)` mean `a < b`,
    /// 0-based.
    pub fn from_covers(n: usize, covers: &[(usize, usize)]) -> Result<Self> {
        if n > MAX_ELEMENTS {
            return Err(Error::Range(format!(
                "{n} elements exceeds the limit of {MAX_ELEMENTS}"
            )));
        }
        let mut below = vec![Subset::EMPTY; n];
        for &(a, b) in covers {
            if a >= n || b >= n {
                return Err(Error::Range(format!(
                    "relation {} < {} outside 1..={n}",
                    a + 1,
                    b + 1
                )));
            }
            if a == b {
                return Err(Error::Cycle(a + 1));
            }
            below[b].insert(a);
        }

        // Kahn's algorithm over the "a below b" digraph.
        let mut indegree: Vec<usize> = below.iter().map(|s| s.len()).collect();
        let mut above = vec![Subset::EMPTY; n];
        for (b, s) in below.iter().enumerate() {
            for a in s.iter() {
                above[a].insert(b);
            }
        }
        let mut ready: Vec<usize> = (0..n).filter(|&i| indegree[i] == 0).rev().collect();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = ready.pop() {
            order.push(v);
            for w in above[v].iter() {
                indegree[w] -= 1;
                if indegree[w] == 0 {
                    ready.push(w);
                }
            }
        }
        if order.len() < n {
            let stuck = (0..n).find(|&i| indegree[i] > 0).unwrap_or(0);
            return Err(Error::Cycle(stuck + 1));
        }

        let mut down = vec![Subset::EMPTY; n];
        for &v in &order {
            let mut d = Subset::singleton(v);
            for a in below[v].iter() {
                d |= down[a];
            }
            down[v] = d;
        }
        Ok(Self::from_down_sets(down))
    }

    /// Same as [`Poset::from_covers`] but with 1-based pairs.
    pub fn from_covers_one_based(n: usize, covers: &[(usize, usize)]) -> Result<Self> {
        let mut zero = Vec::with_capacity(covers.len());
        for &(a, b) in covers {
            if a == 0 || b == 0 {
                return Err(Error::Range(format!("relation {a} < {b} outside 1..={n}")));
            }
            zero.push((a - 1, b - 1));
        }
        Self::from_covers(n, &zero)
    }

    /// Builds from already transitively closed down sets.
    fn from_down_sets(down: Vec<Subset>) -> Self {
        let n = down.len();
        let mut up = vec![Subset::EMPTY; n];
        for (i, d) in down.iter().enumerate() {
            for j in d.iter() {
                up[j].insert(i);
            }
        }
        Poset { n, down, up }
    }

    pub fn chain(n: usize) -> Result<Self> {
        Self::generate(&PosetKind::Chain { n })
    }

    pub fn antichain(n: usize) -> Result<Self> {
        Self::generate(&PosetKind::Antichain { n })
    }

    pub fn disjoint_chains(lengths: &[usize]) -> Result<Self> {
        Self::generate(&PosetKind::DisjointChains {
            lengths: lengths.to_vec(),
        })
    }

    pub fn crown(t: usize) -> Result<Self> {
        Self::generate(&PosetKind::Crown { t })
    }

    /// Chains and antichains are 1..n; disjoint chains are laid out consecutively;
    /// the crown on `2t` elements has minimal `1..t` and maximal `t+1..2t`,
    /// with `t+i` above `i` and `i+1`, and `2t` above `1` and `t`.
    pub fn generate(kind: &PosetKind) -> Result<Self> {
        match kind {
            PosetKind::Chain { n } => {
                check_count("chain", *n, 1)?;
                let covers: Vec<_> = (1..*n).map(|i| (i - 1, i)).collect();
                Self::from_covers(*n, &covers)
            }
            PosetKind::Antichain { n } => {
                check_count("antichain", *n, 1)?;
                Self::from_covers(*n, &[])
            }
            PosetKind::DisjointChains { lengths } => {
                if lengths.is_empty() || lengths.contains(&0) {
                    return Err(Error::Range(
                        "disjoint chains need at least one chain, each of length >= 1".into(),
                    ));
                }
                let n: usize = lengths.iter().sum();
                let mut covers = Vec::new();
                let mut start = 0;
                for &len in lengths {
                    covers.extend((start + 1..start + len).map(|i| (i - 1, i)));
                    start += len;
                }
                Self::from_covers(n, &covers)
            }
            PosetKind::Crown { t } => {
                if *t < 2 || 2 * t > MAX_ELEMENTS {
                    return Err(Error::Range(format!(
                        "crown needs 2 <= t <= {}, got {t}",
                        MAX_ELEMENTS / 2
                    )));
                }
                let t = *t;
                let mut covers = Vec::with_capacity(2 * t);
                for i in 0..t - 1 {
                    covers.push((i, t + i));
                    covers.push((i + 1, t + i));
                }
                covers.push((0, 2 * t - 1));
                covers.push((t - 1, 2 * t - 1));
                Self::from_covers(2 * t, &covers)
            }
        }
    }

    /// Number of elements.
    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// The whole ground set.
    #[inline]
    pub fn ground(&self) -> Subset {
        Subset::full(self.n)
    }

    #[inline]
    pub fn down(&self, i: usize) -> Subset {
        self.down[i]
    }

    #[inline]
    pub fn up(&self, i: usize) -> Subset {
        self.up[i]
    }

    pub fn down_sets(&self) -> &[Subset] {
        &self.down
    }

    /// `a <= b`.
    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.down[b].contains(a)
    }

    #[inline]
    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.leq(a, b) || self.leq(b, a)
    }

    /// Smallest ideal containing `s`.
    pub fn principal_ideal(&self, s: Subset) -> Subset {
        s.iter()
            .filter(|&i| i < self.n)
            .fold(Subset::EMPTY, |acc, i| acc | self.down[i])
    }

    /// Smallest upset containing `s`.
    pub fn principal_upset(&self, s: Subset) -> Subset {
        s.iter()
            .filter(|&i| i < self.n)
            .fold(Subset::EMPTY, |acc, i| acc | self.up[i])
    }

    pub fn is_ideal(&self, s: Subset) -> bool {
        s.fits(self.n) && self.principal_ideal(s) == s
    }

    pub fn is_upset(&self, s: Subset) -> bool {
        s.fits(self.n) && self.principal_upset(s) == s
    }

    /// Maximal or minimal elements of the subposet induced on `s`.
    pub fn extremal(&self, s: Subset, which: Extremal) -> Subset {
        s.iter()
            .filter(|&i| {
                let strict = match which {
                    Extremal::Max => self.up[i],
                    Extremal::Min => self.down[i],
                }
                .without(i);
                strict.is_disjoint(s)
            })
            .collect()
    }

    pub fn maximal(&self, s: Subset) -> Subset {
        self.extremal(s, Extremal::Max)
    }

    pub fn minimal(&self, s: Subset) -> Subset {
        self.extremal(s, Extremal::Min)
    }

    /// Number of elements in a longest chain inside `s` (0 for the empty set).
    pub fn height(&self, s: Subset) -> usize {
        self.longest_chain(s).len()
    }

    /// A longest chain inside `s`, listed bottom to top.
    pub fn longest_chain(&self, s: Subset) -> Vec<usize> {
        // Sorting by down-set size gives a linear extension.
        let mut order: Vec<usize> = s.iter().collect();
        order.sort_by_key(|&i| (self.down[i].len(), i));
        let mut best = vec![0usize; self.n];
        let mut prev = vec![usize::MAX; self.n];
        for &v in &order {
            let mut len = 1;
            for w in (self.down[v] & s).without(v).iter() {
                if best[w] + 1 > len {
                    len = best[w] + 1;
                    prev[v] = w;
                }
            }
            best[v] = len;
        }
        let Some(&top) = order.iter().max_by_key(|&&v| (best[v], usize::MAX - v)) else {
            return Vec::new();
        };
        let mut chain = vec![top];
        let mut cur = top;
        while prev[cur] != usize::MAX {
            cur = prev[cur];
            chain.push(cur);
        }
        chain.reverse();
        chain
    }

    /// Subposet induced on `s`, relabelled `0..|s|` in increasing order of the
    /// original labels. The second value maps new labels to old ones.
    pub fn induced(&self, s: Subset) -> (Poset, Vec<usize>) {
        let elements: Vec<usize> = s.iter().filter(|&i| i < self.n).collect();
        let mut index = vec![usize::MAX; self.n];
        for (k, &e) in elements.iter().enumerate() {
            index[e] = k;
        }
        let down = elements
            .iter()
            .map(|&e| (self.down[e] & s).iter().map(|j| index[j]).collect())
            .collect();
        (Self::from_down_sets(down), elements)
    }

    /// Applies a relabelling: element `i` becomes `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Poset {
        let mut down = vec![Subset::EMPTY; self.n];
        for i in 0..self.n {
            down[perm[i]] = self.down[i].iter().map(|j| perm[j]).collect();
        }
        Self::from_down_sets(down)
    }

    /// Cover pairs `(a, b)`, `a` covered by `b`, 0-based, sorted.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for b in 0..self.n {
            let strict = self.down[b].without(b);
            for a in strict.iter() {
                let between = (self.up[a] & strict).without(a);
                if between.is_empty() {
                    out.push((a, b));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Text format: `n <count>` then one `a < b` cover per line, 1-based.
    pub fn to_text(&self) -> String {
        let mut out = format!("n {}\n", self.n);
        for (a, b) in self.covers() {
            let _ = writeln!(out, "{} < {}", a + 1, b + 1);
        }
        out
    }

    /// Parses the text format. `#` starts a comment; blank lines are ignored.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut n = None;
        let mut covers = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parse_err = |message: String| Error::Parse {
                line: line_no,
                message,
            };
            match n {
                None => {
                    let mut parts = line.split_whitespace();
                    match (parts.next(), parts.next(), parts.next()) {
                        (Some("n"), Some(count), None) => {
                            let count: usize = count
                                .parse()
                                .map_err(|_| parse_err(format!("bad element count {count:?}")))?;
                            if count > MAX_ELEMENTS {
                                return Err(parse_err(format!(
                                    "{count} elements exceeds the limit of {MAX_ELEMENTS}"
                                )));
                            }
                            n = Some(count);
                        }
                        _ => return Err(parse_err(format!("expected `n <count>`, got {line:?}"))),
                    }
                }
                Some(count) => {
                    let (a, b) = line
                        .split_once('<')
                        .ok_or_else(|| parse_err(format!("expected `a < b`, got {line:?}")))?;
                    let a: usize = a
                        .trim()
                        .parse()
                        .map_err(|_| parse_err(format!("bad element {:?}", a.trim())))?;
                    let b: usize = b
                        .trim()
                        .parse()
                        .map_err(|_| parse_err(format!("bad element {:?}", b.trim())))?;
                    if a == 0 || b == 0 || a > count || b > count {
                        return Err(parse_err(format!("relation {a} < {b} outside 1..={count}")));
                    }
                    covers.push((a - 1, b - 1));
                }
            }
        }
        let n = n.ok_or(Error::Parse {
            line: 0,
            message: "missing `n <count>` header".into(),
        })?;
        Self::from_covers(n, &covers)
    }

    /// Checks reflexivity, antisymmetry, transitivity and that `up` transposes `down`.
    pub fn check_invariants(&self) -> bool {
        (0..self.n).all(|i| {
            self.down[i].contains(i)
                && self.up[i].contains(i)
                && (self.down[i] & self.up[i]) == Subset::singleton(i)
                && self.down[i].iter().all(|j| self.down[j].is_subset(self.down[i]))
                && (0..self.n).all(|j| self.down[i].contains(j) == self.up[j].contains(i))
        })
    }
}

fn check_count(what: &str, n: usize, min: usize) -> Result<()> {
    if n < min || n > MAX_ELEMENTS {
        return Err(Error::Range(format!(
            "{what} needs {min} <= n <= {MAX_ELEMENTS}, got {n}"
        )));
    }
    Ok(())
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(labels: &[usize]) -> Subset {
        Subset::from_elements(labels.iter().map(|&l| l - 1))
    }

    #[test]
    fn closure_of_covers() {
        let p = Poset::from_covers_one_based(3, &[]).unwrap();
        assert!((0..3).all(|i| p.down(i) == Subset::singleton(i)));
        let chain = Poset::from_covers_one_based(3, &[(1, 2), (2, 3)]).unwrap();
        assert_eq!(chain.down(2), s(&[1, 2, 3]));
        assert_eq!(
            Poset::from_covers_one_based(3, &[(1, 2), (2, 3), (3, 1)]),
            Err(Error::Cycle(1))
        );
        assert!(matches!(
            Poset::from_covers_one_based(3, &[(1, 4)]),
            Err(Error::Range(_))
        ));
    }

    #[test]
    fn crown_covers_match_definition() {
        let crown = Poset::crown(3).unwrap();
        assert_eq!(
            crown.covers(),
            vec![(0, 3), (0, 5), (1, 3), (1, 4), (2, 4), (2, 5)]
        );
        let max = crown.maximal(crown.ground());
        assert_eq!(max, s(&[4, 5, 6]));
        assert_eq!(crown.minimal(crown.ground()), s(&[1, 2, 3]));
        for a in max.iter() {
            assert_eq!(crown.down(a).len(), 3);
        }
        assert!(Poset::crown(1).is_err());
    }

    #[test]
    fn generators() {
        assert_eq!(
            Poset::disjoint_chains(&[2, 2]).unwrap().covers(),
            vec![(0, 1), (2, 3)]
        );
        assert!(Poset::antichain(5).unwrap().covers().is_empty());
        assert!(Poset::chain(0).is_err());
        assert!(Poset::disjoint_chains(&[2, 0]).is_err());
        assert!(Poset::antichain(65).is_err());
    }

    #[test]
    fn principal_closures() {
        let chain = Poset::chain(5).unwrap();
        let anti = Poset::antichain(5).unwrap();
        let crown = Poset::crown(3).unwrap();
        assert_eq!(chain.principal_ideal(s(&[2, 4])), s(&[1, 2, 3, 4]));
        assert_eq!(anti.principal_ideal(s(&[2, 4, 5])), s(&[2, 4, 5]));
        assert_eq!(crown.principal_ideal(s(&[4])), s(&[1, 2, 4]));
        assert_eq!(chain.principal_upset(s(&[3])), s(&[3, 4, 5]));
        assert_eq!(
            Poset::antichain(4).unwrap().principal_upset(s(&[1, 2])),
            s(&[1, 2])
        );
        assert_eq!(crown.principal_upset(s(&[1])), s(&[1, 4, 6]));
    }

    #[test]
    fn extremal_and_height() {
        let chain = Poset::chain(5).unwrap();
        let crown = Poset::crown(3).unwrap();
        assert_eq!(crown.extremal(crown.ground(), Extremal::Max), s(&[4, 5, 6]));
        assert_eq!(chain.extremal(s(&[1, 3, 5]), Extremal::Min), s(&[1]));
        assert_eq!(crown.extremal(Subset::EMPTY, Extremal::Max), Subset::EMPTY);
        assert_eq!(chain.height(chain.ground()), 5);
        assert_eq!(Poset::antichain(4).unwrap().height(Subset::full(4)), 1);
        assert_eq!(crown.height(crown.ground()), 2);
        assert_eq!(crown.height(Subset::EMPTY), 0);
        let ch = chain.longest_chain(s(&[2, 4, 5]));
        assert_eq!(ch, vec![1, 3, 4]);
    }

    #[test]
    fn ideal_membership() {
        let chain = Poset::chain(5).unwrap();
        let crown = Poset::crown(3).unwrap();
        assert!(chain.is_ideal(s(&[1, 2])));
        assert!(!crown.is_ideal(s(&[4])));
        assert!(crown.is_ideal(Subset::EMPTY));
    }

    #[test]
    fn induced_subposet_relabels_in_order() {
        let crown = Poset::crown(3).unwrap();
        let (q, map) = crown.induced(s(&[2, 4, 5]));
        assert_eq!(map, vec![1, 3, 4]);
        assert_eq!(q.covers(), vec![(0, 1), (0, 2)]);
    }

    #[test]
    fn text_round_trip() {
        let crown = Poset::crown(4).unwrap();
        let text = crown.to_text();
        assert!(text.starts_with("n 8\n1 < 5\n"));
        assert_eq!(Poset::parse_text(&text).unwrap(), crown);
        let commented = "# crown\n\nn 3 # three\n1 < 3\n\n2<3\n";
        let p = Poset::parse_text(commented).unwrap();
        assert_eq!(p.covers(), vec![(0, 2), (1, 2)]);
        assert!(matches!(
            Poset::parse_text("n 3\n1 < 7\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(Poset::parse_text("1 < 2"), Err(Error::Parse { .. })));
    }

    pub(crate) fn arb_poset(max_n: usize) -> impl Strategy<Value = Poset> {
        (1..=max_n)
            .prop_flat_map(|n| (Just(n), proptest::collection::vec(any::<bool>(), n * n)))
            .prop_map(|(n, bits)| {
                let covers: Vec<_> = (0..n)
                    .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
                    .filter(|&(a, b)| bits[a * n + b])
                    .collect();
                Poset::from_covers(n, &covers).unwrap()
            })
    }

    proptest! {
        #[test]
        fn closure_is_idempotent(p in arb_poset(16), bits in any::<u64>()) {
            let s = Subset::from_bits(bits) & p.ground();
            let once = p.principal_ideal(s);
            prop_assert_eq!(p.principal_ideal(once), once);
            prop_assert!(p.is_ideal(once));
            prop_assert!(s.is_subset(once));
            prop_assert!(p.check_invariants());
        }

        #[test]
        fn up_and_down_are_dual(p in arb_poset(12)) {
            for a in 0..p.len() {
                for b in 0..p.len() {
                    prop_assert_eq!(p.down(b).contains(a), p.up(a).contains(b));
                }
            }
            let round = Poset::from_covers(p.len(), &p.covers()).unwrap();
            prop_assert_eq!(round, p);
        }
    }

    #[test]
    fn crown_generator_shape() {
        for t in 2..=8 {
            let c = Poset::crown(t).unwrap();
            let max = c.maximal(c.ground());
            assert_eq!(max.len(), t);
            assert_eq!(c.minimal(c.ground()).len(), t);
            for a in max.iter() {
                assert_eq!(c.down(a).len() - 1, 2);
            }
            assert!(c.check_invariants());
        }
    }
}
