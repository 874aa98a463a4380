//! Seeded random families for fuzz suites.
//!
//! All randomness goes through `ChaCha8Rng::seed_from_u64(seed)`, so a
//! failing trial replays exactly from its seed.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::hypergraph::Hypergraph;

pub type FuzzRng = ChaCha8Rng;

pub fn rng(seed: u64) -> FuzzRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Keeps each k-subset of `0..n` independently with probability `p`.
pub fn random_family(rng: &mut FuzzRng, n: usize, k: usize, p: f64) -> Hypergraph {
    let all = Hypergraph::complete(n, k).expect("valid shape");
    all.retain(|_| rng.gen_bool(p))
}

/// Family of exactly `m` distinct k-subsets (clamped to `C(n,k)`).
pub fn random_family_of_size(rng: &mut FuzzRng, n: usize, k: usize, m: usize) -> Hypergraph {
    let all = Hypergraph::complete(n, k).expect("valid shape");
    let mut edges = all.edges().to_vec();
    edges.shuffle(rng);
    edges.truncate(m);
    Hypergraph::from_edges_unchecked(n, k, edges)
}

/// Random non-empty family with `n` in `2..=max_n`, `k` in `1..=min(max_k, n)`
/// and a random density.
pub fn random_shape_family(rng: &mut FuzzRng, max_n: usize, max_k: usize) -> Hypergraph {
    loop {
        let n = rng.gen_range(2..=max_n);
        let k = rng.gen_range(1..=max_k.min(n));
        let p = rng.gen_range(0.05..0.9);
        let h = random_family(rng, n, k, p);
        if !h.is_empty() {
            return h;
        }
    }
}
