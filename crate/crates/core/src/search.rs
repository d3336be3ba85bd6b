//! Exhaustive searches used as ground truth: perfect codes by exact cover,
//! labelings of height-two posets, and a catalogue of all small posets.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::canon::canonical;
use crate::classify::{classify_m2, M2Verdict};
use crate::codes::{is_perfect, theorem_th1_check, Code, Th1Verdict, VerifyMode};
use crate::criteria::{run_battery, Verdict};
use crate::error::{Error, Result};
use crate::ideals::enumerate_ideals;
use crate::metric::{ball_members, ball_size};
use crate::poset::Poset;
use crate::subset::Subset;

/// Default cap on `n` for [`find_perfect_code`].
pub const SEARCH_LIMIT: usize = 14;
/// Default node budget per top-level branch.
pub const DEFAULT_NODE_LIMIT: u64 = 50_000_000;
/// [`find_poset_labeling`] refuses longer codes.
pub const LABELING_LIMIT: usize = 10;
/// [`exhaust_small_posets`] refuses larger posets.
pub const CATALOG_LIMIT: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchConfig {
    pub max_n: usize,
    pub node_limit: u64,
    /// Fix the zero word as the first codeword.
    pub symmetry: bool,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_n: SEARCH_LIMIT,
            node_limit: DEFAULT_NODE_LIMIT,
            symmetry: true,
            jobs: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum SearchOutcome {
    Found { code: Code },
    None,
    BudgetExceeded { node_limit: u64 },
}

impl SearchOutcome {
    pub fn found(&self) -> Option<&Code> {
        match self {
            SearchOutcome::Found { code } => Some(code),
            _ => None,
        }
    }
}

struct Cover<'a> {
    ball: &'a [Subset],
    covered: Vec<u64>,
    centers: Vec<Subset>,
    nodes: u64,
    limit: u64,
    full: u64,
}

enum Step {
    Done,
    Dead,
    Budget,
}

impl Cover<'_> {
    fn is_covered(&self, x: Subset) -> bool {
        self.covered[x.bits() as usize / 64] >> (x.bits() % 64) & 1 == 1
    }

    fn flip(&mut self, c: Subset) {
        for &b in self.ball {
            let x = (c ^ b).bits() as usize;
            self.covered[x / 64] ^= 1 << (x % 64);
        }
    }

    fn fits(&self, c: Subset) -> bool {
        self.ball.iter().all(|&b| !self.is_covered(c ^ b))
    }

    fn lowest_uncovered(&self) -> Option<Subset> {
        self.covered.iter().enumerate().find_map(|(w, &word)| {
            let free = !word;
            let x = w as u64 * 64 + free.trailing_zeros() as u64;
            (free != 0 && x < self.full).then(|| Subset::from_bits(x))
        })
    }

    /// Centers whose ball covers `v` and misses every covered word, ascending.
    fn candidates(&self, v: Subset) -> Vec<Subset> {
        let mut out: Vec<Subset> = self.ball.iter().map(|&b| v ^ b).filter(|&c| self.fits(c)).collect();
        out.sort_unstable();
        out
    }

    fn place(&mut self, c: Subset) {
        self.flip(c);
        self.centers.push(c);
    }

    fn unplace(&mut self) {
        let c = self.centers.pop().expect("placed before");
        self.flip(c);
    }

    /// Depth-first search from the current placement, with an explicit stack
    /// since depth can reach `2^n`.
    fn run(&mut self) -> Step {
        let Some(v) = self.lowest_uncovered() else {
            return Step::Done;
        };
        let mut stack: Vec<(Vec<Subset>, usize)> = vec![(self.candidates(v), 0)];
        while let Some((cands, next)) = stack.last_mut() {
            let Some(&c) = cands.get(*next) else {
                stack.pop();
                if stack.is_empty() {
                    return Step::Dead;
                }
                self.unplace();
                continue;
            };
            *next += 1;
            self.nodes += 1;
            if self.nodes > self.limit {
                return Step::Budget;
            }
            self.place(c);
            match self.lowest_uncovered() {
                None => return Step::Done,
                Some(v) => stack.push((self.candidates(v), 0)),
            }
        }
        Step::Dead
    }
}

/// Searches for an `r`-perfect code by exact cover of `F^n` with ball
/// translates: repeatedly take the lowest uncovered word and branch over the
/// centers whose ball covers it, in increasing order.
///
/// The tree is split below the root and the branches are searched in parallel
/// with their own budget; the reported outcome is the first non-empty branch
/// result in tree order, so it does not depend on the number of workers.
pub fn find_perfect_code(poset: &Poset, r: usize, cfg: &SearchConfig) -> Result<SearchOutcome> {
    let n = poset.len();
    if n > cfg.max_n {
        return Err(Error::CapExceeded(format!("search needs n <= {}, got {n}", cfg.max_n)));
    }
    let ball = ball_members(poset, r)?;
    let space = 1u64 << n;
    if !space.is_multiple_of(ball.len() as u64) {
        return Ok(SearchOutcome::None);
    }
    let mut root = Cover {
        ball: &ball,
        covered: vec![0; (space as usize).div_ceil(64)],
        centers: Vec::new(),
        nodes: 0,
        limit: u64::MAX,
        full: space,
    };
    let first: Vec<Subset> = if cfg.symmetry {
        vec![Subset::EMPTY]
    } else {
        root.candidates(Subset::EMPTY)
    };
    // Prefixes of length two, in tree order.
    let mut prefixes: Vec<Vec<Subset>> = Vec::new();
    for &c in &first {
        root.place(c);
        match root.lowest_uncovered() {
            None => prefixes.push(vec![c]),
            Some(v) => prefixes.extend(root.candidates(v).into_iter().map(|d| vec![c, d])),
        }
        root.unplace();
    }
    let explore = |prefix: &Vec<Subset>| -> Option<SearchOutcome> {
        let mut cover = Cover {
            ball: &ball,
            covered: vec![0; (space as usize).div_ceil(64)],
            centers: Vec::new(),
            nodes: 0,
            limit: cfg.node_limit,
            full: space,
        };
        for &c in prefix {
            cover.place(c);
        }
        match cover.run() {
            Step::Dead => None,
            Step::Budget => Some(SearchOutcome::BudgetExceeded {
                node_limit: cfg.node_limit,
            }),
            Step::Done => {
                let code = Code::explicit(n, cover.centers.clone()).expect("centers are distinct");
                Some(SearchOutcome::Found { code })
            }
        }
    };
    let search = || prefixes.par_iter().find_map_first(explore);
    let hit = match cfg.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build()
            .map_err(|e| Error::Precondition(format!("thread pool: {e}")))?
            .install(search),
        None => search(),
    };
    Ok(hit.unwrap_or(SearchOutcome::None))
}

/// Structural description of a height-two poset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShapeConstraint {
    pub n: usize,
    pub maximal: usize,
    /// For each nonmaximal element, how many maximal elements lie above it.
    pub nonmax_valencies: Vec<usize>,
    /// If set, every maximal element lies above exactly this many nonmaximal ones.
    pub maximal_valency: Option<usize>,
}

fn distinct_permutations(items: &[usize]) -> Vec<Vec<usize>> {
    let mut sorted = items.to_vec();
    sorted.sort_unstable();
    let mut out = vec![sorted.clone()];
    // Next lexicographic permutation.
    loop {
        let Some(i) = (1..sorted.len()).rev().find(|&i| sorted[i - 1] < sorted[i]) else {
            return out;
        };
        let j = (i..sorted.len()).rev().find(|&j| sorted[j] > sorted[i - 1]).expect("pivot");
        sorted.swap(i - 1, j);
        sorted[i..].reverse();
        out.push(sorted.clone());
    }
}

fn k_subsets(of: Subset, k: usize) -> impl Iterator<Item = Subset> {
    of.subsets().filter(move |s| s.len() == k)
}

/// Every labelled height-two poset on `[n]` matching `shape`, in a fixed order.
pub fn shaped_posets(shape: &ShapeConstraint) -> Result<Vec<Poset>> {
    let n = shape.n;
    let k = shape.nonmax_valencies.len();
    if shape.maximal + k != n {
        return Err(Error::Precondition(format!(
            "{} maximal plus {k} nonmaximal elements is not {n}",
            shape.maximal
        )));
    }
    if shape.nonmax_valencies.iter().any(|&v| v == 0 || v > shape.maximal) {
        return Err(Error::Precondition("valencies must lie in 1..=#maximal".into()));
    }
    let mut out = Vec::new();
    for low in k_subsets(Subset::full(n), k) {
        let high = Subset::full(n) - low;
        let lows: Vec<usize> = low.iter().collect();
        for vals in distinct_permutations(&shape.nonmax_valencies) {
            let mut choice: Vec<Subset> = Vec::with_capacity(k);
            assign(&lows, &vals, high, shape, &mut choice, &mut out)?;
        }
    }
    Ok(out)
}

fn assign(
    lows: &[usize],
    vals: &[usize],
    high: Subset,
    shape: &ShapeConstraint,
    choice: &mut Vec<Subset>,
    out: &mut Vec<Poset>,
) -> Result<()> {
    let i = choice.len();
    if i == lows.len() {
        if let Some(want) = shape.maximal_valency {
            if high.iter().any(|a| choice.iter().filter(|s| s.contains(a)).count() != want) {
                return Ok(());
            }
        }
        let covers: Vec<(usize, usize)> = lows
            .iter()
            .zip(choice.iter())
            .flat_map(|(&b, s)| s.iter().map(move |a| (b, a)))
            .collect();
        out.push(Poset::from_covers(shape.n, &covers)?);
        return Ok(());
    }
    for s in k_subsets(high, vals[i]) {
        choice.push(s);
        assign(lows, vals, high, shape, choice, out)?;
        choice.pop();
    }
    Ok(())
}

/// First labelled poset of the given shape under which `code` is `r`-perfect.
pub fn find_poset_labeling(code: &Code, r: usize, shape: &ShapeConstraint) -> Result<Option<Poset>> {
    let n = code.n();
    if n > LABELING_LIMIT {
        return Err(Error::CapExceeded(format!("labeling search needs n <= {LABELING_LIMIT}, got {n}")));
    }
    if shape.n != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: shape.n,
        });
    }
    let target = (1u128 << n) / code.size().max(1);
    let candidates = shaped_posets(shape)?;
    candidates
        .par_iter()
        .map(|p| -> Result<bool> {
            if r > n || ball_size(p, r)? as u128 != target {
                return Ok(false);
            }
            Ok(is_perfect(p, code, r, VerifyMode::Fast)?.perfect)
        })
        .collect::<Result<Vec<bool>>>()
        .map(|ok| ok.iter().position(|&b| b).map(|i| candidates[i].clone()))
}

/// All posets on `n` elements up to isomorphism, each in canonical labelling.
pub fn posets_up_to_iso(n: usize) -> Vec<Poset> {
    let mut level = vec![Poset::from_covers(0, &[]).expect("empty poset")];
    for size in 1..=n {
        let seen: HashSet<Vec<u8>> = HashSet::new();
        let seen = std::sync::Mutex::new(seen);
        let mut next: Vec<(Vec<u8>, Poset)> = level
            .par_iter()
            .flat_map_iter(|p| {
                let ideals: Vec<Subset> = (0..=p.len())
                    .flat_map(|r| enumerate_ideals(p, r).expect("r <= n").ideals)
                    .collect();
                ideals.into_iter().map(move |below| {
                    let mut covers = p.covers();
                    covers.extend(p.maximal(below).iter().map(|a| (a, size - 1)));
                    let q = Poset::from_covers(size, &covers).expect("adding a top keeps it acyclic");
                    let c = canonical(&q);
                    let q = c.poset(&q);
                    (c.code, q)
                })
            })
            .filter(|(code, _)| seen.lock().expect("no poisoning").insert(code.clone()))
            .collect();
        next.sort_by(|a, b| a.0.cmp(&b.0));
        level = next.into_iter().map(|(_, p)| p).collect();
    }
    level
}

/// One catalogue line: a poset, a codimension `m` and radius `r = m - offset`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CatalogRecord {
    pub n: usize,
    /// 1-based cover pairs.
    pub covers: Vec<(usize, usize)>,
    pub m: usize,
    pub r: usize,
    pub ball_size: u64,
    /// A perfect code of codimension `m` exists (exhaustive search).
    pub exists: bool,
    /// Prediction of the matching characterization, when there is one.
    pub theory: Option<bool>,
    pub battery: Verdict,
    /// Theory and battery both consistent with `exists`.
    pub agree: bool,
}

/// Runs every poset with at most `n_max` elements through the criteria
/// battery, the exact characterization for `offset` in `{0, 1, 2}` and the
/// exhaustive search, at every `m` with `r = m - offset >= 0`.
pub fn exhaust_small_posets(n_max: usize, offset: usize) -> Result<Vec<CatalogRecord>> {
    if n_max > CATALOG_LIMIT {
        return Err(Error::CapExceeded(format!("catalogue needs n <= {CATALOG_LIMIT}, got {n_max}")));
    }
    let mut posets = Vec::new();
    for n in 1..=n_max {
        posets.extend(posets_up_to_iso(n));
    }
    let cfg = SearchConfig::default();
    let records: Vec<Vec<CatalogRecord>> = posets
        .par_iter()
        .map(|p| -> Result<Vec<CatalogRecord>> {
            let n = p.len();
            let mut out = Vec::new();
            for m in offset..=n {
                let r = m - offset;
                let ball = ball_size(p, r)?;
                let exists = ball == 1u64 << m
                    && find_perfect_code(p, r, &cfg)?
                        .found()
                        .is_some();
                let theory = match offset {
                    0 => Some(enumerate_ideals(p, m)?.len() == 1),
                    1 if m >= 2 => Some(matches!(theorem_th1_check(p, m)?, Th1Verdict::Witness(_))),
                    1 => Some(false),
                    2 => Some(matches!(classify_m2(p, m)?, M2Verdict::Admissible { .. })),
                    _ => None,
                };
                let battery = run_battery(p, m, r)?.verdict;
                let battery_ok = match battery {
                    Verdict::NonexistenceProven => !exists,
                    Verdict::ExistenceConstructed => exists,
                    Verdict::Inconclusive => true,
                };
                out.push(CatalogRecord {
                    n,
                    covers: p.covers().into_iter().map(|(a, b)| (a + 1, b + 1)).collect(),
                    m,
                    r,
                    ball_size: ball,
                    exists,
                    theory,
                    battery,
                    agree: battery_ok && theory.is_none_or(|t| t == exists),
                });
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(records.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poset_counts_up_to_isomorphism() {
        let counts: Vec<usize> = (0..=6).map(|n| posets_up_to_iso(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 16, 63, 318]);
    }

    #[test]
    fn repetition_code_is_found() {
        let p = Poset::antichain(5).unwrap();
        let out = find_perfect_code(&p, 2, &SearchConfig::default()).unwrap();
        let code = out.found().unwrap();
        assert_eq!(code.words().unwrap(), vec![Subset::EMPTY, Subset::full(5)]);
    }

    #[test]
    fn indivisible_ball_short_circuits() {
        let p = Poset::crown(3).unwrap();
        assert_eq!(find_perfect_code(&p, 2, &SearchConfig::default()).unwrap(), SearchOutcome::None);
    }

    #[test]
    fn tiny_budget_is_reported() {
        let p = Poset::antichain(7).unwrap();
        let cfg = SearchConfig {
            node_limit: 1,
            ..SearchConfig::default()
        };
        assert!(matches!(
            find_perfect_code(&p, 1, &cfg).unwrap(),
            SearchOutcome::BudgetExceeded { .. }
        ));
    }

    #[test]
    fn outcome_does_not_depend_on_workers() {
        let p = Poset::antichain(7).unwrap();
        let one = find_perfect_code(&p, 1, &SearchConfig { jobs: Some(1), ..Default::default() }).unwrap();
        let four = find_perfect_code(&p, 1, &SearchConfig { jobs: Some(4), ..Default::default() }).unwrap();
        assert_eq!(one, four);
        assert!(one.found().is_some());
    }

    #[test]
    fn deep_trees_do_not_recurse() {
        let p = Poset::antichain(14).unwrap();
        let code = find_perfect_code(&p, 0, &SearchConfig::default()).unwrap();
        assert_eq!(code.found().unwrap().size(), 1 << 14);
    }

    #[test]
    fn distinct_permutations_of_multiset() {
        assert_eq!(distinct_permutations(&[2, 1, 1]).len(), 3);
        assert_eq!(distinct_permutations(&[4, 4, 4]).len(), 1);
    }
}
