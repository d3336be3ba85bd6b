//! Small GF(2) linear algebra over bitmask vectors.
//!
//! A parity-check matrix with `m` rows is stored as `n` column masks of `m`
//! bits; a word `c` is a codeword when the columns indexed by `c` sum to zero.

use crate::subset::Subset;

/// Rank of a set of vectors.
pub fn rank(vectors: &[u64]) -> usize {
    let mut basis: Vec<u64> = Vec::new();
    for &v in vectors {
        let r = reduce(&basis, v);
        if r != 0 {
            basis.push(r);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

// Basis kept with distinct leading bits, sorted descending.
fn reduce(basis: &[u64], mut v: u64) -> u64 {
    for &b in basis {
        let lead = 63 - b.leading_zeros();
        if v >> lead & 1 == 1 {
            v ^= b;
        }
    }
    v
}

/// Basis of `{c : sum of columns[i] over i in c = 0}`.
pub fn kernel_basis(columns: &[u64]) -> Vec<Subset> {
    // Each pivot remembers which original columns it combines.
    let mut pivots: Vec<(u64, Subset)> = Vec::new();
    let mut kernel = Vec::new();
    for (i, &col) in columns.iter().enumerate() {
        let mut v = col;
        let mut combo = Subset::singleton(i);
        loop {
            if v == 0 {
                kernel.push(combo);
                break;
            }
            let lead = 63 - v.leading_zeros();
            match pivots.iter().find(|(p, _)| 63 - p.leading_zeros() == lead) {
                Some(&(p, c)) => {
                    v ^= p;
                    combo ^= c;
                }
                None => {
                    pivots.push((v, combo));
                    break;
                }
            }
        }
    }
    kernel
}

/// Every combination of `basis`, sorted.
pub fn span(basis: &[Subset]) -> Vec<Subset> {
    let mut out = Vec::with_capacity(1 << basis.len());
    out.push(Subset::EMPTY);
    for &b in basis {
        let cur = out.len();
        for i in 0..cur {
            out.push(out[i] ^ b);
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Parity-check columns (`m` bits each) of the span of `generators` in `F^n`.
///
/// Returns `(m, columns)` with `m = n - rank(generators)`.
pub fn dual_columns(n: usize, generators: &[Subset]) -> (usize, Vec<u64>) {
    let basis = independent(generators);
    // Column i of the generator matrix: bit j set when generator j contains i.
    let gen_columns: Vec<u64> = (0..n)
        .map(|i| {
            basis
                .iter()
                .enumerate()
                .filter(|(_, g)| g.contains(i))
                .fold(0u64, |acc, (j, _)| acc | 1 << j)
        })
        .collect();
    let dual = kernel_basis(&gen_columns);
    let columns = (0..n)
        .map(|i| {
            dual.iter()
                .enumerate()
                .filter(|(_, h)| h.contains(i))
                .fold(0u64, |acc, (t, _)| acc | 1 << t)
        })
        .collect();
    (dual.len(), columns)
}

/// A maximal linearly independent subset, in input order.
pub fn independent(vectors: &[Subset]) -> Vec<Subset> {
    let mut basis: Vec<u64> = Vec::new();
    let mut out = Vec::new();
    for &v in vectors {
        let r = reduce(&basis, v.bits());
        if r != 0 {
            basis.push(r);
            basis.sort_unstable_by(|a, b| b.cmp(a));
            out.push(v);
        }
    }
    out
}

/// Sum of the columns indexed by `word`.
pub fn syndrome(columns: &[u64], word: Subset) -> u64 {
    word.iter().fold(0, |acc, i| acc ^ columns[i])
}
