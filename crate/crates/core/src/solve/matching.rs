//! Maximum matching by branch and bound over bitmask edges.
//!
//! The search always branches on the smallest vertex that is still
//! available: either some edge containing it (tried in colex order) is taken,
//! or the vertex is dropped. A greedy packing seeds the incumbent, and a node
//! is cut once `taken + available / k` cannot beat it.

use crate::hypergraph::{Hypergraph, Matching, VertexSet};

/// Edge lists indexed by their smallest vertex, in colex order.
pub(crate) struct MatchingSearch {
    k: usize,
    by_min: Vec<Vec<u64>>,
    support: u64,
}

impl MatchingSearch {
    pub(crate) fn new(n: usize, k: usize, edges: impl IntoIterator<Item = u64>) -> Self {
        let mut by_min = vec![Vec::new(); n.max(1)];
        let mut support = 0u64;
        for e in edges.into_iter().filter(|&e| e != 0) {
            support |= e;
            by_min[e.trailing_zeros() as usize].push(e);
        }
        for list in &mut by_min {
            list.sort_unstable();
        }
        MatchingSearch { k, by_min, support }
    }

    /// Searches for a matching of size `target`, or the largest one when
    /// `target` is `None`.
    pub(crate) fn run(&self, target: Option<usize>) -> Vec<u64> {
        if self.k == 0 {
            return Vec::new();
        }
        let mut state = State {
            best: self.greedy(),
            stack: Vec::new(),
            target,
        };
        if let Some(t) = target {
            if state.best.len() >= t {
                state.best.truncate(t);
                return state.best;
            }
        }
        self.descend(self.support, &mut state);
        state.best
    }

    fn greedy(&self) -> Vec<u64> {
        let mut used = 0u64;
        let mut out = Vec::new();
        for list in &self.by_min {
            if let Some(&e) = list.iter().find(|&&e| e & used == 0) {
                used |= e;
                out.push(e);
            }
        }
        out
    }

    /// Returns true when the target has been reached and the search should stop.
    fn descend(&self, available: u64, state: &mut State) -> bool {
        let taken = state.stack.len();
        if taken > state.best.len() {
            state.best = state.stack.clone();
            if state.target.is_some_and(|t| taken >= t) {
                return true;
            }
        }
        if available == 0 {
            return false;
        }
        let mut floor = state.best.len();
        if let Some(t) = state.target {
            floor = floor.max(t - 1);
        }
        let room = available.count_ones() as usize / self.k;
        if taken + room <= floor {
            return false;
        }
        let v = available.trailing_zeros() as usize;
        for &e in &self.by_min[v] {
            if e & !available == 0 {
                state.stack.push(e);
                let stop = self.descend(available & !e, state);
                state.stack.pop();
                if stop {
                    return true;
                }
            }
        }
        // leave v uncovered
        self.descend(available & !(1 << v), state)
    }
}

struct State {
    best: Vec<u64>,
    stack: Vec<u64>,
    target: Option<usize>,
}

fn to_matching(edges: Vec<u64>) -> Matching {
    let mut edges: Vec<VertexSet> = edges.into_iter().map(VertexSet::from_mask).collect();
    edges.sort_unstable();
    Matching::from_disjoint(edges)
}

/// A maximum matching; `ν(H)` is its size.
pub fn max_matching(h: &Hypergraph) -> Matching {
    let search = MatchingSearch::new(h.n(), h.k(), h.edges().iter().map(|e| e.mask()));
    to_matching(search.run(None))
}

/// `ν(H)`.
pub fn matching_number(h: &Hypergraph) -> usize {
    max_matching(h).size()
}

/// A matching of exactly `size` edges if one exists.
pub fn find_matching_of_size(h: &Hypergraph, size: usize) -> Option<Matching> {
    if size == 0 {
        return Some(Matching::default());
    }
    let search = MatchingSearch::new(h.n(), h.k(), h.edges().iter().map(|e| e.mask()));
    let found = search.run(Some(size));
    (found.len() >= size).then(|| to_matching(found))
}

/// Same as [`find_matching_of_size`] over raw bitmask edges.
pub(crate) fn masks_have_matching(n: usize, k: usize, edges: &[u64], size: usize) -> Option<Vec<u64>> {
    if size == 0 {
        return Some(Vec::new());
    }
    let search = MatchingSearch::new(n, k, edges.iter().copied());
    let found = search.run(Some(size));
    (found.len() >= size).then_some(found)
}
