//! Binary codes, perfectness checks and the direct constructions.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf2;
use crate::ideals::{adjust_ideal, enumerate_ideals, IdealFamily};
use crate::metric::{ball_bits, BallBits, DENSE_BALL_LIMIT};
use crate::poset::Poset;
use crate::subset::{Subset, MAX_ELEMENTS};

/// Largest number of codewords [`Code::words`] will list.
pub const WORD_LIMIT: u32 = 24;
/// [`is_perfect`] needs `n` at most this.
pub const VERIFY_LIMIT: usize = DENSE_BALL_LIMIT;
/// Above this many ideal pairs the packing test switches to a convolution.
const PAIR_LIMIT: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CodeRepr {
    /// Sorted, duplicate-free codewords.
    Explicit(Vec<Subset>),
    /// Kernel of a parity-check matrix: `n` columns of `m` bits.
    Linear { m: usize, columns: Vec<u64> },
}

/// A binary code of length `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Code {
    n: usize,
    repr: CodeRepr,
}

impl Code {
    pub fn explicit(n: usize, mut words: Vec<Subset>) -> Result<Self> {
        check_length(n)?;
        if let Some(w) = words.iter().find(|w| !w.fits(n)) {
            return Err(Error::Range(format!("codeword {w} is longer than {n}")));
        }
        words.sort_unstable();
        if let Some(w) = words.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateWord(w[0].to_word(n)));
        }
        Ok(Code {
            n,
            repr: CodeRepr::Explicit(words),
        })
    }

    pub fn linear(n: usize, m: usize, columns: Vec<u64>) -> Result<Self> {
        check_length(n)?;
        if m > MAX_ELEMENTS {
            return Err(Error::Range(format!("{m} check rows exceeds {MAX_ELEMENTS}")));
        }
        if columns.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: columns.len(),
            });
        }
        let mask = Subset::full(m).bits();
        if let Some(c) = columns.iter().find(|&&c| c & !mask != 0) {
            return Err(Error::Range(format!("column {c:#b} has more than {m} rows")));
        }
        Ok(Code {
            n,
            repr: CodeRepr::Linear { m, columns },
        })
    }

    /// Linear span of `generators`.
    pub fn span(n: usize, generators: &[Subset]) -> Result<Self> {
        check_length(n)?;
        if let Some(g) = generators.iter().find(|g| !g.fits(n)) {
            return Err(Error::Range(format!("generator {g} is longer than {n}")));
        }
        let (m, columns) = gf2::dual_columns(n, generators);
        Code::linear(n, m, columns)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn repr(&self) -> &CodeRepr {
        &self.repr
    }

    pub fn is_linear(&self) -> bool {
        matches!(self.repr, CodeRepr::Linear { .. })
    }

    /// `log2 |C|` when `|C|` is a power of two.
    pub fn dimension(&self) -> Option<u32> {
        match &self.repr {
            CodeRepr::Linear { columns, .. } => Some((self.n - gf2::rank(columns)) as u32),
            CodeRepr::Explicit(words) => words
                .len()
                .is_power_of_two()
                .then(|| words.len().trailing_zeros()),
        }
    }

    pub fn size(&self) -> u128 {
        match &self.repr {
            CodeRepr::Linear { columns, .. } => 1u128 << (self.n - gf2::rank(columns)),
            CodeRepr::Explicit(words) => words.len() as u128,
        }
    }

    pub fn contains(&self, word: Subset) -> bool {
        match &self.repr {
            CodeRepr::Linear { columns, .. } => word.fits(self.n) && gf2::syndrome(columns, word) == 0,
            CodeRepr::Explicit(words) => words.binary_search(&word).is_ok(),
        }
    }

    /// Sorted codewords, refused above `2^WORD_LIMIT` words.
    pub fn words(&self) -> Result<Vec<Subset>> {
        match &self.repr {
            CodeRepr::Explicit(words) => Ok(words.clone()),
            CodeRepr::Linear { columns, .. } => {
                let basis = gf2::kernel_basis(columns);
                if basis.len() > WORD_LIMIT as usize {
                    return Err(Error::CapExceeded(format!(
                        "code has 2^{} words, listing stops at 2^{WORD_LIMIT}",
                        basis.len()
                    )));
                }
                Ok(gf2::span(&basis))
            }
        }
    }

    pub fn to_explicit(&self) -> Result<Code> {
        Code::explicit(self.n, self.words()?)
    }

    /// Kernel basis of a linear code.
    pub fn generators(&self) -> Option<Vec<Subset>> {
        match &self.repr {
            CodeRepr::Linear { columns, .. } => Some(gf2::kernel_basis(columns)),
            CodeRepr::Explicit(_) => None,
        }
    }

    /// Text format: header `n <len> repr explicit` followed by one word per
    /// line, or `n <len> repr linear <m>` followed by `n` check columns, each
    /// written as `m` bits with row 1 first.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        match &self.repr {
            CodeRepr::Explicit(words) => {
                let _ = writeln!(out, "n {} repr explicit", self.n);
                for w in words {
                    let _ = writeln!(out, "{}", w.to_word(self.n));
                }
            }
            CodeRepr::Linear { m, columns } => {
                let _ = writeln!(out, "n {} repr linear {m}", self.n);
                for &c in columns {
                    let _ = writeln!(out, "{}", Subset::from_bits(c).to_word(*m));
                }
            }
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, raw)| (i + 1, raw.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (line_no, header) = lines.next().ok_or(Error::Parse {
            line: 0,
            message: "empty code file".into(),
        })?;
        let err = |line: usize, message: String| Error::Parse { line, message };
        let parts: Vec<&str> = header.split_whitespace().collect();
        let n: usize = match parts.as_slice() {
            ["n", len, "repr", ..] => len
                .parse()
                .map_err(|_| err(line_no, format!("bad length {len:?}")))?,
            _ => return Err(err(line_no, format!("expected `n <len> repr ...`, got {header:?}"))),
        };
        if n > MAX_ELEMENTS {
            return Err(err(line_no, format!("length {n} exceeds {MAX_ELEMENTS}")));
        }
        let read_word = |line: usize, text: &str, len: usize| -> Result<Subset> {
            let (got, w) = Subset::parse_word(text).map_err(|e| match e {
                Error::Parse { message, .. } => err(line, message),
                other => other,
            })?;
            if got != len {
                return Err(err(line, format!("expected {len} symbols, got {got}")));
            }
            Ok(w)
        };
        match parts[3..] {
            ["explicit"] => {
                let words = lines
                    .map(|(l, t)| read_word(l, t, n))
                    .collect::<Result<Vec<_>>>()?;
                Code::explicit(n, words)
            }
            ["linear", m] => {
                let m: usize = m
                    .parse()
                    .map_err(|_| err(line_no, format!("bad row count {m:?}")))?;
                if m > MAX_ELEMENTS {
                    return Err(err(line_no, format!("{m} rows exceeds {MAX_ELEMENTS}")));
                }
                let columns = lines
                    .map(|(l, t)| read_word(l, t, m).map(Subset::bits))
                    .collect::<Result<Vec<_>>>()?;
                Code::linear(n, m, columns)
            }
            _ => Err(err(line_no, format!("unknown representation in {header:?}"))),
        }
    }
}

impl Serialize for Code {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Code", 4)?;
        st.serialize_field("n", &self.n)?;
        match &self.repr {
            CodeRepr::Explicit(words) => {
                st.serialize_field("repr", "explicit")?;
                let words: Vec<String> = words.iter().map(|w| w.to_word(self.n)).collect();
                st.serialize_field("words", &words)?;
            }
            CodeRepr::Linear { m, columns } => {
                st.serialize_field("repr", "linear")?;
                let columns: Vec<String> = columns
                    .iter()
                    .map(|&c| Subset::from_bits(c).to_word(*m))
                    .collect();
                st.serialize_field("columns", &columns)?;
            }
        }
        st.end()
    }
}

fn check_length(n: usize) -> Result<()> {
    if n > MAX_ELEMENTS {
        return Err(Error::Range(format!("length {n} exceeds {MAX_ELEMENTS}")));
    }
    Ok(())
}

fn check_lengths(poset: &Poset, code: &Code, r: usize) -> Result<()> {
    if code.n() != poset.len() {
        return Err(Error::LengthMismatch {
            expected: poset.len(),
            actual: code.n(),
        });
    }
    if r > poset.len() {
        return Err(Error::Range(format!("radius {r} exceeds {} elements", poset.len())));
    }
    Ok(())
}

/// Two codewords whose difference fits inside the union of two `r`-ideals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PackingWitness {
    pub first: Subset,
    pub second: Subset,
    pub ideals: [Subset; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PackingResult {
    pub ok: bool,
    pub witness: Option<PackingWitness>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VerifyMode {
    /// Packing by the two-ideal criterion, covering by counting.
    Fast,
    /// Full sweep of `F^n`, straight from the definition.
    Oracle,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationResult {
    pub r: usize,
    pub perfect: bool,
    pub packing: bool,
    pub covering: bool,
    pub code_size: u128,
    pub ball_size: u64,
    pub packing_witness: Option<PackingWitness>,
    /// Lowest word at distance more than `r` from the code.
    pub covering_witness: Option<Subset>,
}

/// Words that are differences of two ball members, i.e. lie inside the union
/// of two `r`-ideals.
enum BadSet {
    Dense(Vec<u64>),
    Unions(Vec<Subset>),
}

impl BadSet {
    fn build(poset: &Poset, family: &IdealFamily) -> Result<Self> {
        let n = poset.len();
        let k = family.len();
        let pairs = k.saturating_mul(k + 1) / 2;
        if pairs <= PAIR_LIMIT {
            let unions = maximal_unions(&family.ideals);
            if n > DENSE_BALL_LIMIT {
                return Ok(BadSet::Unions(unions));
            }
            let mut bits = vec![0u64; (1usize << n).div_ceil(64)];
            for u in unions {
                set_bit(&mut bits, u);
            }
            down_close(&mut bits, n);
            return Ok(BadSet::Dense(bits));
        }
        if n > DENSE_BALL_LIMIT {
            return Err(Error::CapExceeded(format!(
                "{k} ideals on {n} elements is too many for the packing test"
            )));
        }
        Ok(BadSet::Dense(sumset(n, &ball_bits(poset, family.r)?)))
    }

    fn contains(&self, d: Subset) -> bool {
        match self {
            BadSet::Dense(bits) => get_bit(bits, d),
            BadSet::Unions(unions) => unions.iter().any(|&u| d.is_subset(u)),
        }
    }
}

fn set_bit(bits: &mut [u64], x: Subset) {
    bits[x.bits() as usize / 64] |= 1 << (x.bits() % 64);
}

fn get_bit(bits: &[u64], x: Subset) -> bool {
    bits[x.bits() as usize / 64] >> (x.bits() % 64) & 1 == 1
}

fn maximal_unions(ideals: &[Subset]) -> Vec<Subset> {
    let mut all: Vec<Subset> = Vec::new();
    for (i, &a) in ideals.iter().enumerate() {
        for &b in &ideals[i..] {
            all.push(a | b);
        }
    }
    all.sort_unstable_by_key(|u| std::cmp::Reverse(u.len()));
    all.dedup();
    let mut kept: Vec<Subset> = Vec::new();
    for u in all {
        if !kept.iter().any(|&k| u.is_subset(k)) {
            kept.push(u);
        }
    }
    kept
}

// Closes a dense table under taking subsets.
fn down_close(bits: &mut [u64], n: usize) {
    const LOW: [u64; 6] = [
        0xAAAA_AAAA_AAAA_AAAA,
        0xCCCC_CCCC_CCCC_CCCC,
        0xF0F0_F0F0_F0F0_F0F0,
        0xFF00_FF00_FF00_FF00,
        0xFFFF_0000_FFFF_0000,
        0xFFFF_FFFF_0000_0000,
    ];
    for j in 0..n.min(6) {
        for w in bits.iter_mut() {
            *w |= (*w & LOW[j]) >> (1 << j);
        }
    }
    for j in 6..n {
        let step = 1usize << (j - 6);
        for i in 0..bits.len() {
            if i & step == 0 {
                bits[i] |= bits[i | step];
            }
        }
    }
}

// OR-convolution of the ball with itself by zeta/Moebius transforms.
fn sumset(n: usize, ball: &BallBits) -> Vec<u64> {
    let size = 1usize << n;
    let mut f = vec![0u64; size];
    for x in ball.iter() {
        f[x.bits() as usize] = 1;
    }
    for j in 0..n {
        for x in 0..size {
            if x >> j & 1 == 1 {
                f[x] = f[x].wrapping_add(f[x ^ 1 << j]);
            }
        }
    }
    for v in f.iter_mut() {
        *v = v.wrapping_mul(*v);
    }
    for j in 0..n {
        for x in 0..size {
            if x >> j & 1 == 1 {
                f[x] = f[x].wrapping_sub(f[x ^ 1 << j]);
            }
        }
    }
    let mut bits = vec![0u64; size.div_ceil(64)];
    for (x, &v) in f.iter().enumerate() {
        if v != 0 {
            bits[x / 64] |= 1 << (x % 64);
        }
    }
    bits
}

/// First pair of ideals, in canonical order, whose union contains `d`.
fn covering_ideals(family: &IdealFamily, d: Subset) -> [Subset; 2] {
    for &a in &family.ideals {
        let rest = d - a;
        if let Some(&b) = family.ideals.iter().find(|b| rest.is_subset(**b)) {
            return [a, b];
        }
    }
    unreachable!("difference {d} was classified as inside two ideals")
}

/// Whether `code` corrects `r` errors under the poset metric, i.e. the balls
/// of radius `r` around codewords are pairwise disjoint.
///
/// Uses the two-ideal criterion: distinct codewords collide exactly when their
/// difference lies inside the union of two `r`-ideals. The witness is the
/// first colliding pair in lexicographic order of the sorted codeword list.
pub fn is_error_correcting(poset: &Poset, code: &Code, r: usize) -> Result<PackingResult> {
    check_lengths(poset, code, r)?;
    let family = enumerate_ideals(poset, r)?;
    if let CodeRepr::Linear { columns, .. } = code.repr() {
        let dim = poset.len() - gf2::rank(columns);
        if dim > WORD_LIMIT as usize || poset.len() > DENSE_BALL_LIMIT {
            return linear_packing_by_rank(&family, columns);
        }
    }
    let bad = BadSet::build(poset, &family)?;
    let words = code.words()?;
    let hit = if code.is_linear() {
        words
            .par_iter()
            .skip(1)
            .find_first(|&&c| bad.contains(c))
            .map(|&c| (Subset::EMPTY, c))
    } else {
        (0..words.len()).into_par_iter().find_map_first(|i| {
            words[i + 1..]
                .iter()
                .find(|&&w| bad.contains(words[i] ^ w))
                .map(|&w| (words[i], w))
        })
    };
    Ok(match hit {
        None => PackingResult {
            ok: true,
            witness: None,
        },
        Some((first, second)) => PackingResult {
            ok: false,
            witness: Some(PackingWitness {
                first,
                second,
                ideals: covering_ideals(&family, first ^ second),
            }),
        },
    })
}

// A nonzero codeword inside a union exists iff those columns are dependent.
fn linear_packing_by_rank(family: &IdealFamily, columns: &[u64]) -> Result<PackingResult> {
    let k = family.len();
    if k.saturating_mul(k + 1) / 2 > PAIR_LIMIT {
        return Err(Error::CapExceeded(format!(
            "{k} ideals is too many for the rank-based packing test"
        )));
    }
    for u in maximal_unions(&family.ideals) {
        let sub: Vec<u64> = u.iter().map(|i| columns[i]).collect();
        if gf2::rank(&sub) < sub.len() {
            let local = gf2::kernel_basis(&sub)[0];
            let positions: Vec<usize> = u.iter().collect();
            let c: Subset = local.iter().map(|j| positions[j]).collect();
            return Ok(PackingResult {
                ok: false,
                witness: Some(PackingWitness {
                    first: Subset::EMPTY,
                    second: c,
                    ideals: covering_ideals(family, c),
                }),
            });
        }
    }
    Ok(PackingResult {
        ok: true,
        witness: None,
    })
}

/// Whether `code` is `r`-perfect: balls of radius `r` around codewords
/// partition `F^n`.
pub fn is_perfect(poset: &Poset, code: &Code, r: usize, mode: VerifyMode) -> Result<VerificationResult> {
    check_lengths(poset, code, r)?;
    let n = poset.len();
    if n > VERIFY_LIMIT {
        return Err(Error::CapExceeded(format!(
            "perfectness check needs n <= {VERIFY_LIMIT}, got {n}"
        )));
    }
    let ball = ball_bits(poset, r)?;
    let code_size = code.size();
    match mode {
        VerifyMode::Fast => {
            let packing = is_error_correcting(poset, code, r)?;
            let exact = code_size.checked_mul(ball.size as u128) == Some(1u128 << n);
            if packing.ok && exact {
                return Ok(VerificationResult {
                    r,
                    perfect: true,
                    packing: true,
                    covering: true,
                    code_size,
                    ball_size: ball.size,
                    packing_witness: None,
                    covering_witness: None,
                });
            }
            let words = code.words()?;
            let sweep = sweep(n, &words, &ball);
            Ok(VerificationResult {
                r,
                perfect: false,
                packing: packing.ok,
                covering: sweep.uncovered.is_none(),
                code_size,
                ball_size: ball.size,
                packing_witness: packing.witness,
                covering_witness: sweep.uncovered,
            })
        }
        VerifyMode::Oracle => {
            let words = code.words()?;
            let sweep = sweep(n, &words, &ball);
            let packing_witness = sweep.collision.map(|(x, first, second)| {
                // Each of x - first, x - second has weight <= r; grow their
                // ideals to size r.
                let grow = |e: Subset| {
                    adjust_ideal(poset, poset.principal_ideal(e), r)
                        .expect("ideal of a ball member has at most r elements")
                };
                PackingWitness {
                    first,
                    second,
                    ideals: [grow(x ^ first), grow(x ^ second)],
                }
            });
            let packing = packing_witness.is_none();
            let covering = sweep.uncovered.is_none();
            Ok(VerificationResult {
                r,
                perfect: packing && covering,
                packing,
                covering,
                code_size,
                ball_size: ball.size,
                packing_witness,
                covering_witness: sweep.uncovered,
            })
        }
    }
}

struct Sweep {
    collision: Option<(Subset, Subset, Subset)>,
    uncovered: Option<Subset>,
}

fn sweep(n: usize, words: &[Subset], ball: &BallBits) -> Sweep {
    let mut seen = vec![0u64; (1usize << n).div_ceil(64)];
    let mut collision = None;
    for &c in words {
        for e in ball.iter() {
            let x = c ^ e;
            if get_bit(&seen, x) {
                if collision.is_none() {
                    let other = words
                        .iter()
                        .copied()
                        .find(|&w| w != c && ball.contains(x ^ w))
                        .expect("some earlier codeword covers x");
                    collision = Some((x, other, c));
                }
            } else {
                set_bit(&mut seen, x);
            }
        }
    }
    let uncovered = (0..1u64 << n)
        .map(Subset::from_bits)
        .find(|&x| !get_bit(&seen, x));
    Sweep {
        collision,
        uncovered,
    }
}

/// The unique `m`-ideal when there is exactly one.
fn unique_ideal(poset: &Poset, m: usize) -> Result<Subset> {
    let family = enumerate_ideals(poset, m)?;
    match family.ideals.as_slice() {
        [only] => Ok(*only),
        other => Err(Error::NotUnique {
            r: m,
            count: other.len(),
        }),
    }
}

/// The `m`-perfect code `{x : x ∩ I = ∅}` for the unique `m`-ideal `I`.
pub fn construct_m_perfect(poset: &Poset, m: usize) -> Result<Code> {
    let ideal = unique_ideal(poset, m)?;
    let mut columns = vec![0u64; poset.len()];
    for (row, i) in ideal.iter().enumerate() {
        columns[i] = 1 << row;
    }
    Code::linear(poset.len(), m, columns)
}

/// The code `{ f(y) + y : y ⊆ [n] \ I }`, `m`-perfect for any `f` into `2^I`.
pub fn construct_m_perfect_with<F>(poset: &Poset, m: usize, f: F) -> Result<Code>
where
    F: Fn(Subset) -> Subset,
{
    let ideal = unique_ideal(poset, m)?;
    let n = poset.len();
    let free = ideal.complement(n);
    if free.len() > WORD_LIMIT as usize {
        return Err(Error::CapExceeded(format!(
            "explicit code would have 2^{} words",
            free.len()
        )));
    }
    let mut words = Vec::with_capacity(1 << free.len());
    for y in free.subsets() {
        let check = f(y);
        if !check.is_subset(ideal) {
            return Err(Error::InvalidCheckFunction {
                input: y.to_string(),
                output: check.to_string(),
            });
        }
        words.push(y | check);
    }
    Code::explicit(n, words)
}

/// `I^{m-1} = {I+a1, I+a2, I+a3}` with `|I| = m-2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ThreeIdealShape {
    pub base: Subset,
    /// 0-based, increasing. Serialized 1-based through the `Subset` view.
    #[serde(serialize_with = "one_based_triple")]
    pub tops: [usize; 3],
}

fn one_based_triple<S: serde::Serializer>(t: &[usize; 3], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(t.iter().map(|i| i + 1))
}

/// Detects the three-ideal shape of the `(m-1)`-ideal family.
pub fn three_ideal_shape(poset: &Poset, m: usize) -> Result<Option<ThreeIdealShape>> {
    if m < 2 || m - 1 > poset.len() {
        return Ok(None);
    }
    let family = enumerate_ideals(poset, m - 1)?;
    if family.len() != 3 {
        return Ok(None);
    }
    let base = family.core;
    if base.len() != m - 2 {
        return Ok(None);
    }
    let mut tops = [0; 3];
    for (slot, ideal) in tops.iter_mut().zip(&family.ideals) {
        *slot = (*ideal - base).first().expect("ideal is one larger than the core");
    }
    tops.sort_unstable();
    Ok(Some(ThreeIdealShape { base, tops }))
}

/// Linear `(m-1)`-perfect code for the three-ideal shape.
///
/// `I ∪ {a1, a2}` gets the standard basis in increasing element order,
/// `h(a3) = h(a1) + h(a2)`, and every other column cycles through the nonzero
/// vectors of `F^m`.
pub fn construct_m1_perfect(poset: &Poset, m: usize) -> Result<Code> {
    let shape = three_ideal_shape(poset, m)?.ok_or_else(|| {
        Error::ShapeMismatch(format!("the {}-ideals are not I+a1, I+a2, I+a3", m.saturating_sub(1)))
    })?;
    let [a1, a2, a3] = shape.tops;
    let n = poset.len();
    let mut columns = vec![0u64; n];
    for (row, i) in shape.base.with(a1).with(a2).iter().enumerate() {
        columns[i] = 1 << row;
    }
    columns[a3] = columns[a1] ^ columns[a2];
    let fixed = shape.base.with(a1).with(a2).with(a3);
    let period = (1u64 << m) - 1;
    for (k, i) in fixed.complement(n).iter().enumerate() {
        columns[i] = k as u64 % period + 1;
    }
    Code::linear(n, m, columns)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Th1Verdict {
    Witness(ThreeIdealShape),
    Refuted,
}

/// Searches for `I` in `I^{m-2}` and `a1 < a2 < a3` outside `I` with
/// (a) `<ai, aj> = I ∪ {ai, aj}` and (b) every element outside
/// `I ∪ {a1, a2, a3}` lies above `I ∪ {ai}` for some `i`.
pub fn theorem_th1_check(poset: &Poset, m: usize) -> Result<Th1Verdict> {
    if m < 2 {
        return Err(Error::Precondition(format!("needs m >= 2, got {m}")));
    }
    let n = poset.len();
    if m - 1 > n {
        return Ok(Th1Verdict::Refuted);
    }
    for &base in &enumerate_ideals(poset, m - 2)?.ideals {
        let cands: Vec<usize> = poset
            .minimal(base.complement(n))
            .iter()
            .collect();
        for (x, &a1) in cands.iter().enumerate() {
            for (y, &a2) in cands.iter().enumerate().skip(x + 1) {
                for &a3 in &cands[y + 1..] {
                    let tops = [a1, a2, a3];
                    if th1_conditions(poset, base, tops) {
                        return Ok(Th1Verdict::Witness(ThreeIdealShape { base, tops }));
                    }
                }
            }
        }
    }
    Ok(Th1Verdict::Refuted)
}

fn th1_conditions(poset: &Poset, base: Subset, tops: [usize; 3]) -> bool {
    let n = poset.len();
    let pair_ok = |i: usize, j: usize| {
        poset.principal_ideal(Subset::from_elements([tops[i], tops[j]])) == base.with(tops[i]).with(tops[j])
    };
    if !(pair_ok(0, 1) && pair_ok(0, 2) && pair_ok(1, 2)) {
        return false;
    }
    let inside = base.with(tops[0]).with(tops[1]).with(tops[2]);
    inside
        .complement(n)
        .iter()
        .all(|a| tops.iter().any(|&t| base.with(t).is_subset(poset.down(a))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{ball_oracle, p_weight};
    use crate::poset::tests::arb_poset;
    use proptest::prelude::*;

    fn w(s: &str) -> Subset {
        Subset::parse_word(s).unwrap().1
    }

    fn brute_perfect(poset: &Poset, words: &[Subset], r: usize) -> bool {
        let n = poset.len();
        (0..1u64 << n).all(|x| {
            words
                .iter()
                .filter(|&&c| p_weight(poset, Subset::from_bits(x) ^ c) <= r)
                .count()
                == 1
        })
    }

    #[test]
    fn text_round_trip() {
        let code = Code::span(7, &[w("1110000"), w("1001100"), w("0101010"), w("1101001")]).unwrap();
        let back = Code::parse_text(&code.to_text()).unwrap();
        assert_eq!(back, code);
        let explicit = code.to_explicit().unwrap();
        assert_eq!(Code::parse_text(&explicit.to_text()).unwrap(), explicit);
        assert_eq!(explicit.size(), 16);
    }

    #[test]
    fn parse_rejects_duplicates_and_bad_lengths() {
        assert!(matches!(
            Code::parse_text("n 3 repr explicit\n010\n010\n"),
            Err(Error::DuplicateWord(_))
        ));
        assert!(matches!(
            Code::parse_text("n 3 repr explicit\n01\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            Code::parse_text("n 2 repr linear 1\n1\n"),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn hamming_code_is_perfect_on_antichain() {
        let p = Poset::antichain(7).unwrap();
        let code = Code::linear(7, 3, (1..=7).collect()).unwrap();
        for mode in [VerifyMode::Fast, VerifyMode::Oracle] {
            let res = is_perfect(&p, &code, 1, mode).unwrap();
            assert!(res.perfect);
            assert_eq!(res.ball_size, 8);
        }
    }

    #[test]
    fn repetition_on_chains_fails_with_witnesses() {
        let p = Poset::chain(3).unwrap();
        let code = Code::explicit(3, vec![w("000"), w("111")]).unwrap();
        let res = is_perfect(&p, &code, 1, VerifyMode::Fast).unwrap();
        assert!(!res.perfect);
        assert!(res.packing);
        assert_eq!(res.covering_witness, Some(w("010")));
    }

    #[test]
    fn m_perfect_constructions() {
        let p = Poset::chain(5).unwrap();
        let code = construct_m_perfect(&p, 2).unwrap();
        assert_eq!(code.size(), 8);
        assert!(is_perfect(&p, &code, 2, VerifyMode::Oracle).unwrap().perfect);
        let custom = construct_m_perfect_with(&p, 2, |y| {
            if y.contains(4) { Subset::singleton(0) } else { Subset::EMPTY }
        })
        .unwrap();
        assert!(is_perfect(&p, &custom, 2, VerifyMode::Oracle).unwrap().perfect);
        let bad = construct_m_perfect_with(&p, 2, |_| Subset::singleton(3));
        assert!(matches!(bad, Err(Error::InvalidCheckFunction { .. })));
        assert!(matches!(
            construct_m_perfect(&Poset::antichain(3).unwrap(), 1),
            Err(Error::NotUnique { r: 1, count: 3 })
        ));
    }

    #[test]
    fn three_maximals_over_one_point() {
        let p = Poset::from_covers_one_based(4, &[(1, 2), (1, 3), (1, 4)]).unwrap();
        let code = construct_m1_perfect(&p, 3).unwrap();
        let words = code.words().unwrap();
        assert_eq!(words, vec![w("0000"), w("0111")]);
        assert!(brute_perfect(&p, &words, 2));
        let explicit = Code::explicit(4, vec![w("0000"), w("1111")]).unwrap();
        assert!(is_perfect(&p, &explicit, 2, VerifyMode::Fast).unwrap().perfect);
        assert!(matches!(
            construct_m1_perfect(&Poset::chain(4).unwrap(), 3),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn three_point_antichain_at_m_two() {
        let p = Poset::antichain(3).unwrap();
        assert_eq!(
            theorem_th1_check(&p, 2).unwrap(),
            Th1Verdict::Witness(ThreeIdealShape {
                base: Subset::EMPTY,
                tops: [0, 1, 2]
            })
        );
        assert_eq!(theorem_th1_check(&Poset::chain(3).unwrap(), 2).unwrap(), Th1Verdict::Refuted);
    }

    proptest! {
        #[test]
        fn fast_and_oracle_agree(p in arb_poset(7), r in 0usize..4, seed in any::<u64>()) {
            let n = p.len();
            let r = r.min(n);
            let mut s = seed | 1;
            let mut words = vec![Subset::EMPTY];
            for _ in 0..(seed % 6) {
                s ^= s << 13; s ^= s >> 7; s ^= s << 17;
                words.push(Subset::from_bits(s) & Subset::full(n));
            }
            words.sort_unstable();
            words.dedup();
            let code = Code::explicit(n, words.clone()).unwrap();
            let fast = is_perfect(&p, &code, r, VerifyMode::Fast).unwrap();
            let oracle = is_perfect(&p, &code, r, VerifyMode::Oracle).unwrap();
            prop_assert_eq!(fast.perfect, oracle.perfect);
            prop_assert_eq!(fast.packing, oracle.packing);
            prop_assert_eq!(fast.covering, oracle.covering);
            prop_assert_eq!(fast.perfect, brute_perfect(&p, &words, r));
            if let Some(wit) = fast.packing_witness {
                let d = wit.first ^ wit.second;
                prop_assert!(d.is_subset(wit.ideals[0] | wit.ideals[1]));
            }
        }

        #[test]
        fn linear_matches_its_expansion(p in arb_poset(7), r in 0usize..4, cols in proptest::collection::vec(0u64..8, 7)) {
            let n = p.len();
            let r = r.min(n);
            let code = Code::linear(n, 3, cols[..n].to_vec()).unwrap();
            let explicit = code.to_explicit().unwrap();
            prop_assert_eq!(
                is_perfect(&p, &code, r, VerifyMode::Fast).unwrap(),
                is_perfect(&p, &explicit, r, VerifyMode::Fast).unwrap()
            );
        }

        #[test]
        fn rank_route_agrees_on_packing(p in arb_poset(7), r in 0usize..4, cols in proptest::collection::vec(0u64..16, 7)) {
            let n = p.len();
            let r = r.min(n);
            let family = enumerate_ideals(&p, r).unwrap();
            let by_rank = linear_packing_by_rank(&family, &cols[..n]).unwrap();
            let code = Code::linear(n, 4, cols[..n].to_vec()).unwrap();
            prop_assert_eq!(by_rank.ok, is_error_correcting(&p, &code, r).unwrap().ok);
        }

        #[test]
        fn sumset_matches_unions(p in arb_poset(8), r in 0usize..5) {
            let n = p.len();
            let r = r.min(n);
            let family = enumerate_ideals(&p, r).unwrap();
            let by_conv = sumset(n, &ball_bits(&p, r).unwrap());
            let unions = maximal_unions(&family.ideals);
            let members = ball_oracle(&p, r).unwrap().members.unwrap();
            for x in 0..1u64 << n {
                let x = Subset::from_bits(x);
                let direct = unions.iter().any(|&u| x.is_subset(u));
                prop_assert_eq!(get_bit(&by_conv, x), direct);
                let pairwise = members.iter().any(|&a| members.contains(&(a ^ x)));
                prop_assert_eq!(pairwise, direct);
            }
        }

        #[test]
        fn th1_matches_three_ideal_shape(p in arb_poset(7), m in 2usize..7) {
            let by_search = matches!(theorem_th1_check(&p, m).unwrap(), Th1Verdict::Witness(_));
            let by_family = three_ideal_shape(&p, m).unwrap().is_some();
            prop_assert_eq!(by_search, by_family);
        }

        #[test]
        fn m1_construction_is_perfect(p in arb_poset(7), m in 2usize..7) {
            if three_ideal_shape(&p, m).unwrap().is_some() {
                let code = construct_m1_perfect(&p, m).unwrap();
                let res = is_perfect(&p, &code, m - 1, VerifyMode::Oracle).unwrap();
                prop_assert!(res.perfect);
                prop_assert_eq!(code.size(), 1u128 << (p.len() - m));
            }
        }
    }
}
