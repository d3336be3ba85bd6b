//! Subsets of the ground set, doubling as binary words.
//!
//! Elements are 0-based inside the library. Everything that crosses a file or
//! terminal boundary (text formats, JSON, `Display`) is 1-based, so the word
//! `01011` is the set `{2,4,5}`.

use std::fmt;
use std::ops::{BitAnd, BitAndAssign, BitOr, BitOrAssign, BitXor, BitXorAssign, Not, Sub};

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest ground set a [`Subset`] can describe.
pub const MAX_ELEMENTS: usize = 64;

/// A subset of `{0, .., n-1}` stored as a bitmask.
///
/// The same value is a binary word of length `n`: `+` on words is symmetric
/// difference, exposed here as `^`.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset(u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    #[inline]
    pub const fn from_bits(bits: u64) -> Self {
        Subset(bits)
    }

    #[inline]
    pub const fn bits(self) -> u64 {
        self.0
    }

    /// `{0, .., n-1}`.
    #[inline]
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_ELEMENTS);
        if n == MAX_ELEMENTS {
            Subset(u64::MAX)
        } else {
            Subset((1u64 << n) - 1)
        }
    }

    #[inline]
    pub fn singleton(i: usize) -> Self {
        debug_assert!(i < MAX_ELEMENTS);
        Subset(1u64 << i)
    }

    pub fn from_elements<I: IntoIterator<Item = usize>>(elements: I) -> Self {
        elements
            .into_iter()
            .fold(Subset::EMPTY, |acc, i| acc | Subset::singleton(i))
    }

    /// Builds a subset from 1-based element labels, rejecting labels outside `1..=n`.
    pub fn from_one_based(n: usize, labels: &[usize]) -> Result<Self> {
        let mut s = Subset::EMPTY;
        for &label in labels {
            if label == 0 || label > n {
                return Err(Error::Range(format!("element {label} is outside 1..={n}")));
            }
            s.insert(label - 1);
        }
        Ok(s)
    }

    #[inline]
    pub fn contains(self, i: usize) -> bool {
        i < MAX_ELEMENTS && self.0 >> i & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        self.0 |= 1u64 << i;
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        self.0 &= !(1u64 << i);
    }

    #[inline]
    pub fn with(self, i: usize) -> Self {
        Subset(self.0 | 1u64 << i)
    }

    #[inline]
    pub fn without(self, i: usize) -> Self {
        Subset(self.0 & !(1u64 << i))
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn is_subset(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn is_disjoint(self, other: Subset) -> bool {
        self.0 & other.0 == 0
    }

    /// Complement inside `{0, .., n-1}`.
    #[inline]
    pub fn complement(self, n: usize) -> Self {
        Subset(!self.0) & Subset::full(n)
    }

    /// Smallest element, if any.
    #[inline]
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Largest element, if any.
    #[inline]
    pub fn last(self) -> Option<usize> {
        (self.0 != 0).then(|| 63 - self.0.leading_zeros() as usize)
    }

    /// Elements in increasing order.
    #[inline]
    pub fn iter(self) -> Elements {
        Elements(self.0)
    }

    /// All subsets of `self`, in increasing bitmask order.
    pub fn subsets(self) -> Subsets {
        Subsets {
            mask: self.0,
            next: Some(0),
        }
    }

    /// True when no bit at position `n` or above is set.
    #[inline]
    pub fn fits(self, n: usize) -> bool {
        self.is_subset(Subset::full(n))
    }

    /// Word notation: position 1 leftmost.
    pub fn to_word(self, n: usize) -> String {
        (0..n)
            .map(|i| if self.contains(i) { '1' } else { '0' })
            .collect()
    }

    /// Parses word notation (`0`/`1` characters, position 1 leftmost).
    pub fn parse_word(word: &str) -> Result<(usize, Self)> {
        let n = word.chars().count();
        if n > MAX_ELEMENTS {
            return Err(Error::Range(format!(
                "word length {n} exceeds {MAX_ELEMENTS}"
            )));
        }
        let mut s = Subset::EMPTY;
        for (i, ch) in word.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => s.insert(i),
                other => {
                    return Err(Error::Parse {
                        line: 0,
                        message: format!("unexpected character {other:?} in word {word:?}"),
                    })
                }
            }
        }
        Ok((n, s))
    }

    /// 1-based labels of the members.
    pub fn to_one_based(self) -> Vec<usize> {
        self.iter().map(|i| i + 1).collect()
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        f.write_str("}")
    }
}

impl Serialize for Subset {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter().map(|i| i + 1))
    }
}

impl FromIterator<usize> for Subset {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        Subset::from_elements(iter)
    }
}

impl IntoIterator for Subset {
    type Item = usize;
    type IntoIter = Elements;

    fn into_iter(self) -> Elements {
        self.iter()
    }
}

macro_rules! bit_op {
    ($tr:ident, $method:ident, $op:tt, $tr_assign:ident, $method_assign:ident) => {
        impl $tr for Subset {
            type Output = Subset;
            #[inline]
            fn $method(self, rhs: Subset) -> Subset {
                Subset(self.0 $op rhs.0)
            }
        }
        impl $tr_assign for Subset {
            #[inline]
            fn $method_assign(&mut self, rhs: Subset) {
                self.0 = self.0 $op rhs.0;
            }
        }
    };
}

bit_op!(BitOr, bitor, |, BitOrAssign, bitor_assign);
bit_op!(BitAnd, bitand, &, BitAndAssign, bitand_assign);
bit_op!(BitXor, bitxor, ^, BitXorAssign, bitxor_assign);

impl Sub for Subset {
    type Output = Subset;
    #[inline]
    fn sub(self, rhs: Subset) -> Subset {
        Subset(self.0 & !rhs.0)
    }
}

/// Unbounded complement; callers mask with [`Subset::full`].
impl Not for Subset {
    type Output = Subset;
    #[inline]
    fn not(self) -> Subset {
        Subset(!self.0)
    }
}

/// Iterator over the members of a [`Subset`].
#[derive(Clone)]
pub struct Elements(u64);

impl Iterator for Elements {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let k = self.0.count_ones() as usize;
        (k, Some(k))
    }
}

impl ExactSizeIterator for Elements {}

/// Iterator over the subsets of a mask (`x -> (x - mask) & mask` walk).
#[derive(Clone)]
pub struct Subsets {
    mask: u64,
    next: Option<u64>,
}

impl Iterator for Subsets {
    type Item = Subset;

    fn next(&mut self) -> Option<Subset> {
        let cur = self.next?;
        let nxt = cur.wrapping_sub(self.mask) & self.mask;
        self.next = (nxt != 0).then_some(nxt);
        Some(Subset(cur))
    }
}
