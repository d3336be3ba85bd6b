//! Existence and nonexistence criteria for `r`-perfect codes of codimension `m`.
//!
//! Every check is a predicate over `(P, m, r)`; `m` is a hypothesis about the
//! code, not something read off a concrete code. Nonexistence verdicts carry a
//! witness that [`revalidate`] can check again from scratch.

use num_bigint::BigUint;
use serde::Serialize;

use crate::classify::{classify_m2, M2Verdict};
use crate::codes::{
    construct_m1_perfect, construct_m_perfect, is_perfect, theorem_th1_check, Code, CodeRepr, Th1Verdict,
    VerifyMode, WORD_LIMIT,
};
use crate::error::{Error, Result};
use crate::ideals::{enumerate_ideals, shadow_w, IdealFamily};
use crate::metric::{ball_size, p_weight};
use crate::poset::Poset;
use crate::subset::Subset;

/// Above this many ideal pairs the pairwise checks give up.
const PAIR_CAP: usize = 1 << 24;
/// Exhaustive `V` search in [`auto_v_search`] only runs below this many `(r+1)`-ideals.
const V_SEARCH_CAP: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    NonexistenceProven,
    ExistenceConstructed,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CriterionId {
    RadiusBound,
    BallPacking,
    LambdaRange,
    KInequality,
    UnionBound,
    TwoCover,
    Height,
    VCover,
    CorII,
    UpsetBall,
    Abcc,
    UniqueIdeal,
    ThreeIdeals,
    EssentialShape,
}

/// Which sub-condition of the three-part structural check failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AbccPart {
    A,
    B,
    C,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    RadiusBound { r: usize, m: usize },
    BallPacking { ball_size: u64, log2_target: usize },
    LambdaRange { lambda: usize, lower: usize, upper: Option<u64> },
    KInequality { lhs: String, rhs: String },
    Pair { ideals: [Subset; 2], union_size: usize },
    Height { chain: Subset, bound: usize },
    VCover { v: Subset, covers: Vec<[Subset; 3]> },
    CorII { v: Subset, w: Subset },
    UpsetBall { upset: Subset, l: usize, ball_size: u64, log2_bound: Option<usize>, equality: bool },
    Abcc { part: AbccPart, elements: Subset, value: usize, bound: usize },
    IdealCount { count: usize },
    ThreeIdealsRefuted,
    Inadmissible { essential_size: usize, radius: usize },
    Code { code: Code },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Entry {
    pub criterion: CriterionId,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Entry {
    fn nonexistence(criterion: CriterionId, witness: Witness) -> Self {
        Entry {
            criterion,
            verdict: Verdict::NonexistenceProven,
            witness: Some(witness),
            note: None,
        }
    }

    fn inconclusive(criterion: CriterionId) -> Self {
        Entry {
            criterion,
            verdict: Verdict::Inconclusive,
            witness: None,
            note: None,
        }
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn is_nonexistence(&self) -> bool {
        self.verdict == Verdict::NonexistenceProven
    }
}

fn pre(cond: bool, what: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Precondition(what()))
    }
}

/// Error-correcting radius never exceeds the codimension.
pub fn check_rm(n: usize, m: usize, r: usize) -> Result<Entry> {
    pre(m <= n, || format!("codimension {m} exceeds length {n}"))?;
    Ok(if r > m {
        Entry::nonexistence(CriterionId::RadiusBound, Witness::RadiusBound { r, m })
    } else {
        Entry::inconclusive(CriterionId::RadiusBound)
    })
}

/// A perfect code of codimension `m` needs `|B| = 2^m`.
pub fn check_ball_packing(poset: &Poset, m: usize, r: usize) -> Result<Entry> {
    let size = ball_size(poset, r)?;
    let target = 1u128.checked_shl(m as u32).unwrap_or(0);
    Ok(if m >= 128 || size as u128 != target {
        Entry::nonexistence(
            CriterionId::BallPacking,
            Witness::BallPacking {
                ball_size: size,
                log2_target: m,
            },
        )
    } else {
        Entry::inconclusive(CriterionId::BallPacking)
    })
}

/// `m - r < lambda <= 2^(m-r+1) - 2` for perfect codes with `r < m`.
pub fn check_lambda_range(m: usize, r: usize, lambda: usize) -> Result<Entry> {
    pre(r < m, || format!("needs r < m, got r = {r}, m = {m}"))?;
    let lower = m - r;
    let upper = 1u64.checked_shl((m - r + 1) as u32).filter(|_| m - r + 1 < 64).map(|p| p - 2);
    let too_big = upper.is_some_and(|u| lambda as u64 > u);
    Ok(if lambda <= lower || too_big {
        Entry::nonexistence(CriterionId::LambdaRange, Witness::LambdaRange { lambda, lower, upper })
    } else {
        Entry::inconclusive(CriterionId::LambdaRange)
    })
}

/// Both sides of the maximal-element counting bound, scaled by `2^k` so they
/// stay integral: `2^(r+l+k) - 2^(r+l) * sum_{s<l} C(k,s)` against `2^(m+k)`.
pub fn k_inequality_sides(m: usize, r: usize, lambda: usize, k: usize) -> (BigUint, BigUint) {
    let one = BigUint::from(1u32);
    let mut sum = BigUint::from(0u32);
    let mut binom = BigUint::from(1u32);
    for s in 0..lambda.min(k + 1) {
        sum += &binom;
        binom = binom * BigUint::from(k - s) / BigUint::from(s + 1);
    }
    let lhs_pos = &one << (r + lambda + k);
    let lhs_neg = (&one << (r + lambda)) * sum;
    let rhs = &one << (m + k);
    if lhs_neg > lhs_pos {
        (BigUint::from(0u32), rhs)
    } else {
        (lhs_pos - lhs_neg, rhs)
    }
}

/// Inconclusive when `k < lambda`, where the bound does not apply.
pub fn check_k_inequality(m: usize, r: usize, lambda: usize, k: usize) -> Result<Entry> {
    if k < lambda {
        return Ok(Entry::inconclusive(CriterionId::KInequality).with_note("k < lambda"));
    }
    let (lhs, rhs) = k_inequality_sides(m, r, lambda, k);
    Ok(if lhs > rhs {
        Entry::nonexistence(
            CriterionId::KInequality,
            Witness::KInequality {
                lhs: lhs.to_string(),
                rhs: rhs.to_string(),
            },
        )
    } else {
        Entry::inconclusive(CriterionId::KInequality)
    })
}

fn check_pairs(family: &IdealFamily) -> Result<()> {
    let k = family.len();
    if k.saturating_mul(k) / 2 > PAIR_CAP {
        return Err(Error::CapExceeded(format!("{k} ideals is too many for pairwise checks")));
    }
    Ok(())
}

/// Two `r`-ideals whose union exceeds `m` rule out `r`-error-correcting codes.
pub fn check_union_bound(poset: &Poset, m: usize, r: usize) -> Result<Entry> {
    let family = enumerate_ideals(poset, r)?;
    check_pairs(&family)?;
    let ideals = &family.ideals;
    for (i, &a) in ideals.iter().enumerate() {
        if let Some(&b) = ideals[i..].iter().find(|&&b| (a | b).len() > m) {
            return Ok(Entry::nonexistence(
                CriterionId::UnionBound,
                Witness::Pair {
                    ideals: [a, b],
                    union_size: (a | b).len(),
                },
            ));
        }
    }
    Ok(Entry::inconclusive(CriterionId::UnionBound))
}

/// Two distinct `r`-ideals covering `P^r`.
pub fn check_two_cover(poset: &Poset, r: usize) -> Result<Entry> {
    let family = enumerate_ideals(poset, r)?;
    check_pairs(&family)?;
    let ideals = &family.ideals;
    for (i, &a) in ideals.iter().enumerate() {
        if let Some(&b) = ideals[i + 1..].iter().find(|&&b| (a | b) == family.union) {
            return Ok(Entry::nonexistence(
                CriterionId::TwoCover,
                Witness::Pair {
                    ideals: [a, b],
                    union_size: family.union.len(),
                },
            ));
        }
    }
    Ok(Entry::inconclusive(CriterionId::TwoCover))
}

/// Chains in the essential part have at most `m - r` elements.
pub fn check_height(poset: &Poset, m: usize, r: usize) -> Result<Entry> {
    let family = enumerate_ideals(poset, r)?;
    let chain = poset.longest_chain(family.essential);
    let bound = m.saturating_sub(r);
    Ok(if chain.len() > bound {
        Entry::nonexistence(
            CriterionId::Height,
            Witness::Height {
                chain: chain.into_iter().collect(),
                bound,
            },
        )
    } else {
        Entry::inconclusive(CriterionId::Height)
    })
}

/// A word `v` of weight above `r` such that `v ∪ I` sits inside two
/// `r`-ideals for every `r`-ideal `I`.
pub fn check_v_cover(poset: &Poset, r: usize, v: Subset) -> Result<Entry> {
    if !v.fits(poset.len()) {
        return Err(Error::Range(format!("{v} is outside the ground set")));
    }
    pre(p_weight(poset, v) > r, || format!("weight of {v} must exceed {r}"))?;
    let family = enumerate_ideals(poset, r)?;
    check_pairs(&family)?;
    let ideals = &family.ideals;
    let mut covers = Vec::with_capacity(ideals.len());
    for &i in ideals {
        let target = v | i;
        let found = ideals.iter().enumerate().find_map(|(x, &a)| {
            ideals[x..]
                .iter()
                .find(|&&b| target.is_subset(a | b))
                .map(|&b| [i, a, b])
        });
        match found {
            Some(c) => covers.push(c),
            None => {
                return Ok(Entry::inconclusive(CriterionId::VCover)
                    .with_note(format!("{target} is not inside two ideals")))
            }
        }
    }
    Ok(Entry::nonexistence(CriterionId::VCover, Witness::VCover { v, covers }))
}

/// Evaluates both equivalent conditions for an `(r+1)`-ideal `v`: (a) every
/// `r`-ideal meets `max(v)`, (b) `|W(v)| < r`.
pub fn cor_ii_conditions(poset: &Poset, r: usize, v: Subset) -> Result<(bool, bool, Subset)> {
    pre(poset.is_ideal(v) && v.len() == r + 1, || format!("{v} is not an ideal of size {}", r + 1))?;
    let w = shadow_w(poset, v)?;
    let top = poset.maximal(v);
    let family = enumerate_ideals(poset, r)?;
    let a = family.ideals.iter().all(|i| !i.is_disjoint(top));
    let b = w.len() < r;
    Ok((a, b, w))
}

pub fn check_cor_ii(poset: &Poset, r: usize, v: Subset) -> Result<Entry> {
    let (a, b, w) = cor_ii_conditions(poset, r, v)?;
    assert_eq!(a, b, "conditions (a) and (b) disagree for V = {v}");
    Ok(if b {
        Entry::nonexistence(CriterionId::CorII, Witness::CorII { v, w })
    } else {
        Entry::inconclusive(CriterionId::CorII)
    })
}

/// Candidate `V` sets in the order they are tried by [`auto_v_search`].
pub fn v_candidates(poset: &Poset, r: usize) -> Result<Vec<Subset>> {
    let n = poset.len();
    let mut out = Vec::new();
    if r + 1 > n {
        return Ok(out);
    }
    let minimal = poset.minimal(poset.ground());
    if minimal.len() == r + 1 {
        out.push(minimal);
    }
    for a in minimal.iter() {
        let pa = poset.ground() - poset.up(a);
        if pa.len() == r {
            out.push(pa.with(a));
        }
    }
    if let Some(v) = crown_v(poset, r) {
        out.push(v);
    }
    let family = enumerate_ideals(poset, r + 1)?;
    if family.len() <= V_SEARCH_CAP {
        out.extend(family.ideals.iter().copied());
    }
    Ok(out)
}

fn crown_v(poset: &Poset, r: usize) -> Option<Subset> {
    let n = poset.len();
    if n < 6 || n % 2 == 1 {
        return None;
    }
    let t = n / 2;
    if *poset != Poset::crown(t).ok()? {
        return None;
    }
    if 2 * r >= t && r < t {
        let skip: Subset = (1..t - r).map(|j| 2 * j - 1).collect();
        Some(Subset::full(t) - skip)
    } else if t <= r && r < n {
        Some(Subset::full(r + 1))
    } else {
        None
    }
}

/// Tries the standard `V` choices through [`check_cor_ii`]; the first success
/// wins.
pub fn auto_v_search(poset: &Poset, r: usize) -> Result<Entry> {
    for v in v_candidates(poset, r)? {
        if !poset.is_ideal(v) || v.len() != r + 1 {
            continue;
        }
        let entry = check_cor_ii(poset, r, v)?;
        if entry.is_nonexistence() {
            return Ok(entry);
        }
    }
    Ok(Entry::inconclusive(CriterionId::CorII))
}

/// Ball of the induced upset `U` at radius `r - l` against `2^(m - l)`, with
/// `l = |P \ U|`.
pub fn check_upset_ball(poset: &Poset, upset: Subset, m: usize, r: usize) -> Result<Entry> {
    pre(upset.fits(poset.len()) && poset.is_upset(upset), || format!("{upset} is not an upset"))?;
    let l = poset.len() - upset.len();
    pre(l <= r, || format!("{l} elements outside the upset exceeds r = {r}"))?;
    let (sub, _) = poset.induced(upset);
    let size = ball_size(&sub, r - l)?;
    let log2_bound = m.checked_sub(l);
    let (exceeds, equality) = match log2_bound {
        None => (true, false),
        Some(e) if e >= 64 => (false, false),
        Some(e) => (size > 1u64 << e, size == 1u64 << e),
    };
    let witness = Witness::UpsetBall {
        upset,
        l,
        ball_size: size,
        log2_bound,
        equality,
    };
    Ok(if exceeds {
        Entry::nonexistence(CriterionId::UpsetBall, witness)
    } else {
        Entry {
            criterion: CriterionId::UpsetBall,
            verdict: Verdict::Inconclusive,
            witness: equality.then_some(witness),
            note: equality.then(|| "equality: any such code is perfect and the essential part lies in U".into()),
        }
    })
}

/// Structural bounds on a poset equal to its own essential part:
/// (a) `|P \ <a>| >= lambda`, (b) `|P \ <a, a'>| >= r + lambda - m`,
/// (c) `|upset(b)| <= lambda`, with `lambda = n - r`.
pub fn check_abcc(poset: &Poset, m: usize, r: usize) -> Result<Entry> {
    let n = poset.len();
    let family = enumerate_ideals(poset, r)?;
    pre(family.essential == poset.ground(), || "poset must equal its essential part; reduce first".into())?;
    let lambda = n - r;
    let fail = |part, elements: Subset, value, bound| {
        Ok(Entry::nonexistence(
            CriterionId::Abcc,
            Witness::Abcc {
                part,
                elements,
                value,
                bound,
            },
        ))
    };
    for a in 0..n {
        let rest = n - poset.down(a).len();
        if rest < lambda {
            return fail(AbccPart::A, Subset::singleton(a), rest, lambda);
        }
    }
    if let Some(bound) = (r + lambda).checked_sub(m) {
        for a in 0..n {
            for b in a + 1..n {
                let rest = n - (poset.down(a) | poset.down(b)).len();
                if rest < bound {
                    return fail(AbccPart::B, Subset::from_elements([a, b]), rest, bound);
                }
            }
        }
    }
    for b in 0..n {
        let up = poset.up(b).len();
        if up > lambda {
            return fail(AbccPart::C, Subset::singleton(b), up, lambda);
        }
    }
    Ok(Entry::inconclusive(CriterionId::Abcc))
}

/// The essential part of `P` at radius `r`, with the data needed to move codes
/// between the two.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Reduction {
    #[serde(skip)]
    pub poset: Poset,
    /// `elements[i]` is the original element behind element `i` of `poset`.
    #[serde(serialize_with = "one_based")]
    pub elements: Vec<usize>,
    pub essential: Subset,
    /// Radius on the essential part, `r - u`.
    pub r: usize,
    pub core: Subset,
    /// `P \ P^r`.
    pub outside: Subset,
    #[serde(skip)]
    n: usize,
}

fn one_based<S: serde::Serializer>(v: &[usize], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|i| i + 1))
}

pub fn reduce(poset: &Poset, r: usize) -> Result<Reduction> {
    let family = enumerate_ideals(poset, r)?;
    let (q, elements) = poset.induced(family.essential);
    Ok(Reduction {
        poset: q,
        elements,
        essential: family.essential,
        r: r - family.u,
        core: family.core,
        outside: poset.ground() - family.union,
        n: poset.len(),
    })
}

impl Reduction {
    pub fn u(&self) -> usize {
        self.core.len()
    }

    /// `log2(|C| / |C''|)`: a code on `P` has `2^|P \ P^r|` times as many words
    /// as the matching code on the essential part.
    pub fn log2_factor(&self) -> usize {
        self.outside.len()
    }

    /// Codimension on the essential part for codimension `m` on `P`.
    pub fn reduced_m(&self, m: usize) -> Option<usize> {
        m.checked_sub(self.u())
    }

    fn embed(&self, x: Subset) -> Subset {
        x.iter().map(|i| self.elements[i]).collect()
    }

    /// Lifts a code on the essential part: zero on the core, free outside `P^r`.
    pub fn lift(&self, code: &Code) -> Result<Code> {
        if code.n() != self.poset.len() {
            return Err(Error::LengthMismatch {
                expected: self.poset.len(),
                actual: code.n(),
            });
        }
        match code.repr() {
            CodeRepr::Linear { m, columns } => {
                let mut out = vec![0u64; self.n];
                for (i, &c) in columns.iter().enumerate() {
                    out[self.elements[i]] = c;
                }
                for (row, i) in self.core.iter().enumerate() {
                    out[i] = 1 << (m + row);
                }
                Code::linear(self.n, m + self.u(), out)
            }
            CodeRepr::Explicit(words) => {
                if self.outside.len() + words.len().max(1).ilog2() as usize > WORD_LIMIT as usize {
                    return Err(Error::CapExceeded("lifted code is too large to list".into()));
                }
                let mut out = Vec::with_capacity(words.len() << self.outside.len());
                for &w in words {
                    let base = self.embed(w);
                    out.extend(self.outside.subsets().map(|y| base | y));
                }
                Code::explicit(self.n, out)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriterionReport {
    pub n: usize,
    pub m: usize,
    pub r: usize,
    pub lambda: usize,
    pub u: usize,
    pub k: usize,
    pub essential: Subset,
    pub verdict: Verdict,
    pub entries: Vec<Entry>,
}

impl CriterionReport {
    pub fn constructed(&self) -> Option<&Code> {
        self.entries.iter().find_map(|e| match &e.witness {
            Some(Witness::Code { code }) if e.verdict == Verdict::ExistenceConstructed => Some(code),
            _ => None,
        })
    }
}

/// Runs every applicable criterion in a fixed order: arithmetic bounds, then
/// checks on the ideal family, then the structural checks on the essential
/// part. Constructions for `r` in `{m, m-1, m-2}` run only when no
/// nonexistence was proven; those characterizations are exact, so a failed
/// construction is itself a nonexistence proof.
pub fn run_battery(poset: &Poset, m: usize, r: usize) -> Result<CriterionReport> {
    let n = poset.len();
    pre(m <= n, || format!("codimension {m} exceeds length {n}"))?;
    let family = enumerate_ideals(poset, r)?;
    let red = reduce(poset, r)?;
    let mut entries = vec![check_rm(n, m, r)?];
    let soft = |res: Result<Entry>, id| match res {
        Err(Error::CapExceeded(msg)) => Ok(Entry::inconclusive(id).with_note(format!("skipped: {msg}"))),
        other => other,
    };
    entries.push(soft(check_ball_packing(poset, m, r), CriterionId::BallPacking)?);
    if r < m {
        entries.push(check_lambda_range(m, r, family.lambda)?);
    }
    entries.push(check_k_inequality(m, r, family.lambda, family.k)?);
    entries.push(soft(check_union_bound(poset, m, r), CriterionId::UnionBound)?);
    entries.push(soft(check_two_cover(poset, r), CriterionId::TwoCover)?);
    entries.push(check_height(poset, m, r)?);
    entries.push(soft(auto_v_search(poset, r), CriterionId::CorII)?);
    if let Some(m2) = red.reduced_m(m) {
        let e = soft(check_abcc(&red.poset, m2, red.r), CriterionId::Abcc)?;
        entries.push(relabel_entry(e, &red));
    }
    if !entries.iter().any(Entry::is_nonexistence) {
        if let Some(e) = construction_entry(poset, m, r)? {
            entries.push(e);
        }
    }
    let verdict = if entries.iter().any(Entry::is_nonexistence) {
        Verdict::NonexistenceProven
    } else if entries.iter().any(|e| e.verdict == Verdict::ExistenceConstructed) {
        Verdict::ExistenceConstructed
    } else {
        Verdict::Inconclusive
    };
    Ok(CriterionReport {
        n,
        m,
        r,
        lambda: family.lambda,
        u: family.u,
        k: family.k,
        essential: family.essential,
        verdict,
        entries,
    })
}

// Witness elements on the essential part are reported in original labels.
fn relabel_entry(mut e: Entry, red: &Reduction) -> Entry {
    if let Some(Witness::Abcc { elements, .. }) = &mut e.witness {
        *elements = red.embed(*elements);
        e.note = Some("checked on the essential part".into());
    }
    e
}

fn existence(criterion: CriterionId, code: Code) -> Entry {
    Entry {
        criterion,
        verdict: Verdict::ExistenceConstructed,
        witness: Some(Witness::Code { code }),
        note: None,
    }
}

fn construction_entry(poset: &Poset, m: usize, r: usize) -> Result<Option<Entry>> {
    if r == m {
        return Ok(Some(match construct_m_perfect(poset, m) {
            Ok(code) => existence(CriterionId::UniqueIdeal, code),
            Err(Error::NotUnique { count, .. }) => {
                Entry::nonexistence(CriterionId::UniqueIdeal, Witness::IdealCount { count })
            }
            Err(e) => return Err(e),
        }));
    }
    if m >= 2 && r == m - 1 {
        return Ok(Some(match theorem_th1_check(poset, m)? {
            Th1Verdict::Witness(_) => existence(CriterionId::ThreeIdeals, construct_m1_perfect(poset, m)?),
            Th1Verdict::Refuted => Entry::nonexistence(CriterionId::ThreeIdeals, Witness::ThreeIdealsRefuted),
        }));
    }
    if m >= 2 && r == m - 2 {
        return Ok(Some(match classify_m2(poset, m)? {
            M2Verdict::Admissible { code, .. } => existence(CriterionId::EssentialShape, code),
            M2Verdict::Inadmissible {
                essential_size,
                radius,
            } => Entry::nonexistence(
                CriterionId::EssentialShape,
                Witness::Inadmissible {
                    essential_size,
                    radius,
                },
            ),
        }));
    }
    Ok(None)
}

/// Re-checks an entry's witness against `(P, m, r)` without trusting the
/// code that produced it.
pub fn revalidate(poset: &Poset, m: usize, r: usize, entry: &Entry) -> Result<bool> {
    let Some(witness) = &entry.witness else {
        return Ok(entry.verdict == Verdict::Inconclusive);
    };
    let is_r_ideal = |s: &Subset| poset.is_ideal(*s) && s.len() == r;
    Ok(match witness {
        Witness::RadiusBound { r: wr, m: wm } => *wr == r && *wm == m && r > m,
        Witness::BallPacking { ball_size: b, .. } => {
            let actual = ball_size(poset, r)?;
            actual == *b && (m >= 64 || actual != 1u64 << m)
        }
        Witness::LambdaRange { lambda, .. } => {
            *lambda == enumerate_ideals(poset, r)?.lambda
                && check_lambda_range(m, r, *lambda)?.is_nonexistence()
        }
        Witness::KInequality { .. } => {
            let f = enumerate_ideals(poset, r)?;
            let (lhs, rhs) = k_inequality_sides(m, r, f.lambda, f.k);
            f.k >= f.lambda && lhs > rhs
        }
        Witness::Pair { ideals: [a, b], .. } => {
            let ok = is_r_ideal(a) && is_r_ideal(b);
            match entry.criterion {
                CriterionId::UnionBound => ok && (*a | *b).len() > m,
                CriterionId::TwoCover => ok && a != b && (*a | *b) == enumerate_ideals(poset, r)?.union,
                _ => false,
            }
        }
        Witness::Height { chain, bound } => {
            let ess = enumerate_ideals(poset, r)?.essential;
            let elems: Vec<usize> = chain.iter().collect();
            *bound == m.saturating_sub(r)
                && chain.is_subset(ess)
                && elems.iter().all(|&a| elems.iter().all(|&b| poset.comparable(a, b)))
                && chain.len() > *bound
        }
        Witness::VCover { v, covers } => {
            let family = enumerate_ideals(poset, r)?;
            p_weight(poset, *v) > r
                && covers.len() == family.len()
                && covers.iter().zip(&family.ideals).all(|([i, a, b], fi)| {
                    i == fi && is_r_ideal(a) && is_r_ideal(b) && (*v | *i).is_subset(*a | *b)
                })
        }
        Witness::CorII { v, w } => {
            poset.is_ideal(*v)
                && v.len() == r + 1
                && shadow_w(poset, *v)? == *w
                && w.len() < r
        }
        Witness::UpsetBall { upset, .. } => check_upset_ball(poset, *upset, m, r)?.is_nonexistence(),
        Witness::Abcc { .. } => {
            let red = reduce(poset, r)?;
            match red.reduced_m(m) {
                Some(m2) => check_abcc(&red.poset, m2, red.r)?.is_nonexistence(),
                None => false,
            }
        }
        Witness::IdealCount { count } => r == m && enumerate_ideals(poset, m)?.len() == *count && *count != 1,
        Witness::ThreeIdealsRefuted => {
            m >= 2 && r == m - 1 && theorem_th1_check(poset, m)? == Th1Verdict::Refuted
        }
        Witness::Inadmissible { .. } => {
            m >= 2 && r == m - 2 && matches!(classify_m2(poset, m)?, M2Verdict::Inadmissible { .. })
        }
        Witness::Code { code } => {
            code.n() == poset.len()
                && code.size() << m == 1u128 << poset.len()
                && is_perfect(poset, code, r, VerifyMode::Fast)?.perfect
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(labels: &[usize]) -> Subset {
        Subset::from_elements(labels.iter().map(|&l| l - 1))
    }

    #[test]
    fn arithmetic_checks() {
        assert!(check_rm(5, 2, 3).unwrap().is_nonexistence());
        assert!(!check_rm(5, 2, 2).unwrap().is_nonexistence());
        assert!(!check_rm(6, 6, 6).unwrap().is_nonexistence());
        assert!(!check_lambda_range(4, 3, 2).unwrap().is_nonexistence());
        assert!(check_lambda_range(4, 2, 7).unwrap().is_nonexistence());
        assert!(check_lambda_range(4, 2, 2).unwrap().is_nonexistence());
        assert!(check_lambda_range(3, 3, 1).is_err());
    }

    #[test]
    fn k_inequality_spot_values() {
        let (lhs, rhs) = k_inequality_sides(3, 1, 3, 3);
        assert_eq!(lhs, BigUint::from(2u32 * 8));
        assert_eq!(rhs, BigUint::from(8u32 * 8));
        assert!(check_k_inequality(5, 3, 3, 8).unwrap().is_nonexistence());
        assert!(!check_k_inequality(5, 3, 4, 3).unwrap().is_nonexistence());
    }

    #[test]
    fn crown_v_choices() {
        let c4 = Poset::crown(4).unwrap();
        assert_eq!(crown_v(&c4, 4), Some(s(&[1, 2, 3, 4, 5])));
        let c6 = Poset::crown(6).unwrap();
        assert_eq!(crown_v(&c6, 3), Some(s(&[1, 3, 5, 6])));
        let e = auto_v_search(&c6, 3).unwrap();
        assert!(e.is_nonexistence());
    }

    #[test]
    fn lift_preserves_offset() {
        let p = Poset::chain(5).unwrap();
        let red = reduce(&p, 2).unwrap();
        assert!(red.poset.is_empty());
        assert_eq!(red.r, 0);
        let lifted = red.lift(&Code::linear(0, 0, vec![]).unwrap()).unwrap();
        assert_eq!(lifted.size(), 8);
        assert!(is_perfect(&p, &lifted, 2, VerifyMode::Oracle).unwrap().perfect);
    }
}
