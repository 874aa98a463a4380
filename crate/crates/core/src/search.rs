//! Branch and bound for the best subfamily that avoids a monotone property.
//!
//! The property is "bad" when some witness set of edges is fully present
//! (a perfect matching, an `(s+1)`-matching, the support of a large
//! fractional matching). Starting from the whole universe, a node either has
//! no witness and is a candidate, or every good subfamily below it misses some
//! witness edge. Branch `i` excludes witness edge `i` and forces the earlier
//! ones in. The score must be monotone under edge insertion, so a node whose
//! score cannot beat the incumbent is cut.
//!
//! In stable mode the universe is ordered componentwise on sorted vertex
//! lists. Excluding an edge excludes everything above it and forcing an edge
//! forces everything below it, so every node is a down-set.

use crate::error::{Error, Result};
use crate::hypergraph::VertexSet;
use crate::subsets::colex_rank;

pub const DEFAULT_NODE_BUDGET: u64 = 5_000_000;

/// Node budget for searches, overridable by `HM_BUDGET_NODES`.
pub fn default_node_budget() -> u64 {
    std::env::var("HM_BUDGET_NODES")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_NODE_BUDGET)
}

#[derive(Clone, Debug)]
pub(crate) struct Outcome {
    pub value: u64,
    pub family: Vec<u64>,
    pub nodes: u64,
}

/// `a <= b` componentwise on sorted vertex lists, for equal sizes.
pub(crate) fn gale_le(a: u64, b: u64) -> bool {
    let (mut a, mut b) = (a, b);
    while a != 0 {
        if a.trailing_zeros() > b.trailing_zeros() {
            return false;
        }
        a &= a - 1;
        b &= b - 1;
    }
    true
}

/// Minimum d-degree of raw edges on `n` vertices; `d = 0` gives the count.
pub(crate) fn min_degree_masks(n: usize, d: usize, edges: &[u64]) -> u64 {
    if d == 0 {
        return edges.len() as u64;
    }
    let cells = crate::binomial::binomial_u64(n as u64, d as u64) as usize;
    let mut deg = vec![0u64; cells];
    for &e in edges {
        for sub in SubsetsOf::new(e, d) {
            deg[colex_rank(VertexSet::from_mask(sub)) as usize] += 1;
        }
    }
    deg.into_iter().min().unwrap_or(0)
}

/// The `d`-subsets of a mask, by Gosper's hack over its bit positions.
struct SubsetsOf {
    bits: Vec<u32>,
    pick: u64,
    end: u64,
}

impl SubsetsOf {
    fn new(mask: u64, d: usize) -> Self {
        let bits: Vec<u32> = VertexSet::from_mask(mask).iter().map(|v| v as u32).collect();
        let end = 1u64 << bits.len();
        let pick = if d > bits.len() { end } else { (1u64 << d) - 1 };
        SubsetsOf { bits, pick, end }
    }
}

impl Iterator for SubsetsOf {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.pick >= self.end {
            return None;
        }
        let mut out = 0u64;
        let mut p = self.pick;
        while p != 0 {
            out |= 1u64 << self.bits[p.trailing_zeros() as usize];
            p &= p - 1;
        }
        if self.pick == 0 {
            self.pick = self.end;
        } else {
            let c = self.pick & self.pick.wrapping_neg();
            let r = self.pick + c;
            self.pick = (((r ^ self.pick) >> 2) / c) | r;
        }
        Some(out)
    }
}

struct Search<'a, S, W> {
    universe: &'a [u64],
    above: Vec<Vec<usize>>,
    below: Vec<Vec<usize>>,
    stable: bool,
    excluded: Vec<u32>,
    forced: Vec<u32>,
    score: S,
    witness: W,
    best: Option<(u64, Vec<u64>)>,
    nodes: u64,
    cap: u64,
}

impl<S, W> Search<'_, S, W>
where
    S: FnMut(&[u64]) -> u64,
    W: FnMut(&[u64]) -> Result<Option<Vec<u64>>>,
{
    fn node(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.cap {
            return Err(Error::limit(
                format!("search exceeded {} nodes", self.cap),
                self.best.as_ref().map(|b| b.0),
            ));
        }
        let current: Vec<u64> = self
            .universe
            .iter()
            .zip(&self.excluded)
            .filter(|(_, &x)| x == 0)
            .map(|(&e, _)| e)
            .collect();
        let score = (self.score)(&current);
        if self.best.as_ref().is_some_and(|b| score <= b.0) {
            return Ok(());
        }
        let Some(witness) = (self.witness)(&current)? else {
            self.best = Some((score, current));
            return Ok(());
        };
        let idx: Vec<usize> = witness
            .iter()
            .map(|e| self.universe.binary_search(e).expect("witness edge from the universe"))
            .collect();
        let mut pinned = Vec::new();
        for &i in &idx {
            if self.forced[i] == 0 {
                self.bump_excluded(i, true);
                let r = self.node();
                self.bump_excluded(i, false);
                r?;
            }
            self.bump_forced(i, true);
            pinned.push(i);
        }
        for i in pinned {
            self.bump_forced(i, false);
        }
        Ok(())
    }

    fn bump_excluded(&mut self, i: usize, up: bool) {
        let targets: &[usize] = if self.stable {
            &self.above[i]
        } else {
            std::slice::from_ref(&i)
        };
        for &t in targets {
            if up {
                self.excluded[t] += 1;
            } else {
                self.excluded[t] -= 1;
            }
        }
    }

    fn bump_forced(&mut self, i: usize, up: bool) {
        let targets: &[usize] = if self.stable {
            &self.below[i]
        } else {
            std::slice::from_ref(&i)
        };
        for &t in targets {
            if up {
                self.forced[t] += 1;
            } else {
                self.forced[t] -= 1;
            }
        }
    }
}

/// Best score over good subfamilies of `universe` (sorted, equal sizes).
///
/// `incumbent` must itself be good; only strictly better families replace it.
pub(crate) fn maximize<S, W>(
    universe: &[u64],
    stable: bool,
    cap: u64,
    incumbent: Option<(u64, Vec<u64>)>,
    score: S,
    witness: W,
) -> Result<Outcome>
where
    S: FnMut(&[u64]) -> u64,
    W: FnMut(&[u64]) -> Result<Option<Vec<u64>>>,
{
    debug_assert!(universe.windows(2).all(|w| w[0] < w[1]));
    let n = universe.len();
    let (mut above, mut below) = (Vec::new(), Vec::new());
    if stable {
        above = vec![Vec::new(); n];
        below = vec![Vec::new(); n];
        for i in 0..n {
            for j in 0..n {
                if gale_le(universe[i], universe[j]) {
                    above[i].push(j);
                    below[j].push(i);
                }
            }
        }
    }
    let mut search = Search {
        universe,
        above,
        below,
        stable,
        excluded: vec![0; n],
        forced: vec![0; n],
        score,
        witness,
        best: incumbent,
        nodes: 0,
        cap,
    };
    search.node()?;
    let (value, family) = search.best.unwrap_or_default();
    Ok(Outcome {
        value,
        family,
        nodes: search.nodes,
    })
}

/// Literal scan of all `2^N` subfamilies, no pruning beyond skipping the
/// badness test for subfamilies that cannot beat the incumbent.
///
/// `cells[c]` is the bitmask of universe indices containing d-set `c`; the
/// score of a subfamily is its minimum popcount over cells.
pub(crate) fn exhaustive<B>(universe_len: usize, cells: &[u64], mut is_bad: B) -> Result<(u64, u64, u64)>
where
    B: FnMut(u64) -> Result<bool>,
{
    debug_assert!(universe_len < 64);
    let total = 1u64 << universe_len;
    let mut best: Option<(u64, u64)> = None;
    let mut checks = 0u64;
    for mask in 0..total {
        let score = cells.iter().map(|c| (c & mask).count_ones() as u64).min().unwrap_or(0);
        if best.is_some_and(|b| score <= b.0) {
            continue;
        }
        checks += 1;
        if !is_bad(mask)? {
            best = Some((score, mask));
        }
    }
    let (value, mask) = best.unwrap_or_default();
    Ok((value, mask, checks))
}

/// Incidence cells for [`exhaustive`]: one per d-set, in colex order.
pub(crate) fn degree_cells(n: usize, d: usize, universe: &[u64]) -> Vec<u64> {
    debug_assert!(universe.len() < 64);
    if d == 0 {
        return vec![(1u64 << universe.len()) - 1];
    }
    let cells = crate::binomial::binomial_u64(n as u64, d as u64) as usize;
    let mut out = vec![0u64; cells];
    for (i, &e) in universe.iter().enumerate() {
        for sub in SubsetsOf::new(e, d) {
            out[colex_rank(VertexSet::from_mask(sub)) as usize] |= 1u64 << i;
        }
    }
    out
}

pub(crate) fn select(universe: &[u64], mask: u64) -> Vec<u64> {
    universe
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, &e)| e)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::Hypergraph;
    use crate::solve::masks_have_matching;

    #[test]
    fn gale_order() {
        let m = |v: &[usize]| VertexSet::from_vertices(v.iter().copied()).unwrap().mask();
        assert!(gale_le(m(&[0, 1]), m(&[0, 2])));
        assert!(gale_le(m(&[0, 3]), m(&[1, 3])));
        assert!(!gale_le(m(&[0, 3]), m(&[1, 2])));
        assert!(!gale_le(m(&[1, 2]), m(&[0, 3])));
        assert!(gale_le(m(&[1, 2]), m(&[1, 2])));
    }

    #[test]
    fn subsets_of_mask() {
        let all: Vec<u64> = SubsetsOf::new(0b10110, 2).collect();
        assert_eq!(all, vec![0b00110, 0b10010, 0b10100]);
        assert_eq!(SubsetsOf::new(0b101, 0).collect::<Vec<_>>(), vec![0]);
        assert!(SubsetsOf::new(0b1, 2).next().is_none());
    }

    #[test]
    fn degree_helpers_agree_with_hypergraph() {
        let mut rng = crate::random::rng(11);
        for _ in 0..50 {
            let h = crate::random::random_shape_family(&mut rng, 7, 3);
            let masks: Vec<u64> = h.edges().iter().map(|e| e.mask()).collect();
            for d in 0..h.k() {
                let want = h.min_d_degree(d).unwrap();
                assert_eq!(min_degree_masks(h.n(), d, &masks), want);
                if masks.len() < 64 {
                    let cells = degree_cells(h.n(), d, &masks);
                    let all = (1u64 << masks.len()) - 1;
                    let got = cells.iter().map(|c| (c & all).count_ones() as u64).min().unwrap();
                    assert_eq!(got, want);
                }
            }
        }
    }

    #[test]
    fn pruned_and_exhaustive_agree_on_graph_matchings() {
        // largest graph on 6 vertices with no 2-matching is 5 (star or triangle)
        let universe: Vec<u64> = Hypergraph::complete(6, 2)
            .unwrap()
            .edges()
            .iter()
            .map(|e| e.mask())
            .collect();
        for stable in [false, true] {
            let out = maximize(
                &universe,
                stable,
                1_000_000,
                None,
                |f| f.len() as u64,
                |f| Ok(masks_have_matching(6, 2, f, 2)),
            )
            .unwrap();
            assert_eq!(out.value, 5);
            assert!(masks_have_matching(6, 2, &out.family, 2).is_none());
        }
        let cells = degree_cells(6, 0, &universe);
        let (v, mask, _) = exhaustive(universe.len(), &cells, |m| {
            Ok(masks_have_matching(6, 2, &select(&universe, m), 2).is_some())
        })
        .unwrap();
        assert_eq!(v, 5);
        assert_eq!(mask.count_ones(), 5);
    }

    #[test]
    fn node_cap_reports_partial() {
        let universe: Vec<u64> = Hypergraph::complete(8, 2)
            .unwrap()
            .edges()
            .iter()
            .map(|e| e.mask())
            .collect();
        let err = maximize(
            &universe,
            false,
            3,
            None,
            |f| f.len() as u64,
            |f| Ok(masks_have_matching(8, 2, f, 2)),
        )
        .unwrap_err();
        assert!(matches!(err, Error::ResourceLimit { .. }));
    }
}
