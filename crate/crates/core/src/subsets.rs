//! k-subsets of `{0..n-1}` in colex order.
//!
//! Colex order on k-sets compares the largest element where two sets differ.
//! For sets stored as bitmasks this is exactly ascending numeric order of the
//! masks, which is what every search in the crate relies on for reproducible
//! output.

use crate::binomial::binomial_u64;
use crate::error::{ensure, Result};
use crate::hypergraph::{VertexSet, MAX_VERTICES};

/// Iterator over the k-subsets of `{0..n-1}` in colex order (Gosper's hack).
#[derive(Clone, Debug)]
pub struct KSubsets {
    limit: u64,
    next: Option<u64>,
}

impl Iterator for KSubsets {
    type Item = VertexSet;

    fn next(&mut self) -> Option<VertexSet> {
        let cur = self.next?;
        self.next = if cur == 0 {
            None
        } else {
            let low = cur & cur.wrapping_neg();
            let ripple = cur + low;
            let succ = (((cur ^ ripple) >> 2) / low) | ripple;
            (succ < self.limit).then_some(succ)
        };
        Some(VertexSet::from_mask(cur))
    }
}

/// All `C(n, k)` subsets of size `k` in colex order.
pub fn enumerate_ksubsets(n: usize, k: usize) -> Result<KSubsets> {
    ensure!(n <= MAX_VERTICES, "n = {n} exceeds the vertex cap {MAX_VERTICES}");
    ensure!(k <= n, "k = {k} exceeds n = {n}");
    let limit = 1u64 << n;
    let first = if k == 0 { 0 } else { (1u64 << k) - 1 };
    Ok(KSubsets {
        limit,
        next: Some(first),
    })
}

/// Position of `set` in the colex order of its size class.
pub fn colex_rank(set: VertexSet) -> u64 {
    set.iter()
        .enumerate()
        .map(|(i, v)| binomial_u64(v as u64, i as u64 + 1))
        .sum()
}

/// Inverse of [`colex_rank`] for k-subsets of `{0..n-1}`.
pub fn colex_unrank(n: usize, k: usize, rank: u64) -> Result<VertexSet> {
    ensure!(n <= MAX_VERTICES && k <= n, "bad subset shape ({n}, {k})");
    let total = binomial_u64(n as u64, k as u64);
    ensure!(rank < total, "rank {rank} out of range for C({n},{k}) = {total}");
    let mut rest = rank;
    let mut mask = 0u64;
    let mut top = n as u64;
    for i in (1..=k as u64).rev() {
        // largest c < top with C(c, i) <= rest
        let mut c = top - 1;
        while binomial_u64(c, i) > rest {
            c -= 1;
        }
        rest -= binomial_u64(c, i);
        mask |= 1 << c;
        top = c;
    }
    Ok(VertexSet::from_mask(mask))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sets(n: usize, k: usize) -> Vec<Vec<usize>> {
        enumerate_ksubsets(n, k).unwrap().map(|s| s.iter().collect()).collect()
    }

    #[test]
    fn three_choose_two() {
        assert_eq!(sets(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
    }

    #[test]
    fn degenerate_sizes() {
        assert_eq!(sets(4, 0), vec![Vec::<usize>::new()]);
        assert_eq!(sets(4, 4), vec![vec![0, 1, 2, 3]]);
        assert_eq!(sets(0, 0), vec![Vec::<usize>::new()]);
        assert!(enumerate_ksubsets(3, 4).is_err());
    }

    #[test]
    fn count_matches_binomial() {
        assert_eq!(enumerate_ksubsets(10, 4).unwrap().count(), 210);
        assert_eq!(enumerate_ksubsets(63, 2).unwrap().count(), 1953);
        assert_eq!(enumerate_ksubsets(63, 62).unwrap().count(), 63);
    }

    #[test]
    fn rank_unrank_bijection_small() {
        for n in 0..=12 {
            for k in 0..=n {
                for (i, s) in enumerate_ksubsets(n, k).unwrap().enumerate() {
                    assert_eq!(colex_rank(s), i as u64);
                    assert_eq!(colex_unrank(n, k, i as u64).unwrap(), s);
                }
            }
        }
        assert!(colex_unrank(6, 3, 20).is_err());
    }

    #[test]
    fn colex_is_ascending_mask_order() {
        let masks: Vec<u64> = enumerate_ksubsets(9, 4).unwrap().map(|s| s.mask()).collect();
        assert!(masks.windows(2).all(|w| w[0] < w[1]));
    }
}
