//! Poset weight, distance and balls.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ideals::enumerate_ideals;
use crate::poset::Poset;
use crate::subset::Subset;

/// Up to this many elements the ball is tracked in a dense bitset over `F^n`.
pub const DENSE_BALL_LIMIT: usize = 24;
/// Members are listed only up to this many elements.
pub const MATERIALIZE_LIMIT: usize = 20;
/// Definition-level oracle refuses larger ground sets.
pub const ORACLE_LIMIT: usize = 20;
/// Upper bound on `|I_P^r| * 2^r` work for [`ball`].
pub const BALL_WORK_LIMIT: u64 = 1 << 32;

/// Size and (optionally) members of the ball of radius `r` around the zero word.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BallProfile {
    pub r: usize,
    pub size: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub members: Option<Vec<Subset>>,
}

/// Size of the smallest ideal containing `x`.
pub fn p_weight(poset: &Poset, x: Subset) -> usize {
    poset.principal_ideal(x).len()
}

pub fn p_distance(poset: &Poset, x: Subset, y: Subset) -> usize {
    p_weight(poset, x ^ y)
}

/// Ball of radius `r`, computed as the union of the power sets of all
/// `r`-ideals.
pub fn ball(poset: &Poset, r: usize) -> Result<BallProfile> {
    let n = poset.len();
    let family = enumerate_ideals(poset, r)?;
    let work = (family.len() as u64).saturating_mul(1u64 << r.min(63));
    if work > BALL_WORK_LIMIT {
        return Err(Error::CapExceeded(format!(
            "ball enumeration needs {work} steps"
        )));
    }
    if n <= DENSE_BALL_LIMIT {
        let bits = BallBits::from_ideals(n, &family.ideals);
        let members = (n <= MATERIALIZE_LIMIT).then(|| bits.iter().collect());
        Ok(BallProfile {
            r,
            size: bits.size,
            members,
        })
    } else {
        let mut seen = HashSet::new();
        for ideal in &family.ideals {
            seen.extend(ideal.subsets());
        }
        Ok(BallProfile {
            r,
            size: seen.len() as u64,
            members: None,
        })
    }
}

/// Dense membership table of a ball over `F^n`.
#[derive(Clone, Debug)]
pub(crate) struct BallBits {
    words: Vec<u64>,
    pub size: u64,
}

impl BallBits {
    fn from_ideals(n: usize, ideals: &[Subset]) -> Self {
        let mut words = vec![0u64; (1usize << n).div_ceil(64)];
        let mut size = 0u64;
        for ideal in ideals {
            for x in ideal.subsets() {
                let (w, b) = (x.bits() as usize / 64, x.bits() % 64);
                if words[w] >> b & 1 == 0 {
                    words[w] |= 1 << b;
                    size += 1;
                }
            }
        }
        BallBits { words, size }
    }

    pub fn contains(&self, x: Subset) -> bool {
        self.words[x.bits() as usize / 64] >> (x.bits() % 64) & 1 == 1
    }

    /// Members in increasing bitmask order.
    pub fn iter(&self) -> impl Iterator<Item = Subset> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &word)| {
            let mut rest = word;
            std::iter::from_fn(move || {
                (rest != 0).then(|| {
                    let b = rest.trailing_zeros() as u64;
                    rest &= rest - 1;
                    Subset::from_bits(w as u64 * 64 + b)
                })
            })
        })
    }
}

/// Dense ball table; needs `n <= DENSE_BALL_LIMIT`.
pub(crate) fn ball_bits(poset: &Poset, r: usize) -> Result<BallBits> {
    let n = poset.len();
    if n > DENSE_BALL_LIMIT {
        return Err(Error::CapExceeded(format!(
            "dense ball needs n <= {DENSE_BALL_LIMIT}, got {n}"
        )));
    }
    let family = enumerate_ideals(poset, r)?;
    Ok(BallBits::from_ideals(n, &family.ideals))
}

/// Ball size only.
pub fn ball_size(poset: &Poset, r: usize) -> Result<u64> {
    Ok(ball(poset, r)?.size)
}

/// Ball members as a sorted list, for ground sets small enough to materialize.
pub fn ball_members(poset: &Poset, r: usize) -> Result<Vec<Subset>> {
    if poset.len() > MATERIALIZE_LIMIT {
        return Err(Error::CapExceeded(format!(
            "ball members need n <= {MATERIALIZE_LIMIT}, got {}",
            poset.len()
        )));
    }
    Ok(ball(poset, r)?.members.expect("materialized below the limit"))
}

/// Brute force: every word of `F^n` with weight at most `r`.
pub fn ball_oracle(poset: &Poset, r: usize) -> Result<BallProfile> {
    ball_oracle_with_cap(poset, r, ORACLE_LIMIT)
}

pub fn ball_oracle_with_cap(poset: &Poset, r: usize, cap: usize) -> Result<BallProfile> {
    let n = poset.len();
    if n > cap {
        return Err(Error::CapExceeded(format!(
            "oracle ball needs n <= {cap}, got {n}"
        )));
    }
    if r > n {
        return Err(Error::Range(format!("radius {r} exceeds {n} elements")));
    }
    let members: Vec<Subset> = (0..1u64 << n)
        .map(Subset::from_bits)
        .filter(|&x| p_weight(poset, x) <= r)
        .collect();
    Ok(BallProfile {
        r,
        size: members.len() as u64,
        members: Some(members),
    })
}
