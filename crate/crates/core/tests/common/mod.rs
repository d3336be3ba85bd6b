#![allow(dead_code)]

use posetcode::Poset;
use rand::Rng;

/// Random poset on `n` elements: each pair `i < j` is related with
/// probability `density`, then closed transitively.
pub fn random_poset<R: Rng>(rng: &mut R, n: usize, density: f64) -> Poset {
    let mut rel = Vec::new();
    for j in 0..n {
        for i in 0..j {
            if rng.gen_bool(density) {
                rel.push((i, j));
            }
        }
    }
    let perm = {
        let mut p: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            p.swap(i, rng.gen_range(0..=i));
        }
        p
    };
    Poset::from_covers(n, &rel).unwrap().relabel(&perm)
}
