//! The k-uniform hypergraph type and its degree and shadow operators.

use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{ensure, Error, Result};
use crate::subsets::enumerate_ksubsets;

/// Largest vertex count a [`Hypergraph`] can hold. Edges are `u64` bitmasks.
pub const MAX_VERTICES: usize = 63;

/// A set of vertices stored as a bitmask; bit `v` is vertex `v`.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexSet(u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub const fn from_mask(mask: u64) -> Self {
        VertexSet(mask)
    }

    pub fn from_vertices<I: IntoIterator<Item = usize>>(vertices: I) -> Result<Self> {
        let mut mask = 0u64;
        for v in vertices {
            ensure!(v < MAX_VERTICES, "vertex {v} exceeds the vertex cap");
            ensure!(mask & (1 << v) == 0, "vertex {v} repeated");
            mask |= 1 << v;
        }
        Ok(VertexSet(mask))
    }

    /// `{0, .., len-1}`.
    pub fn prefix(len: usize) -> Self {
        debug_assert!(len <= MAX_VERTICES);
        VertexSet((1u64 << len) - 1)
    }

    pub const fn mask(self) -> u64 {
        self.0
    }

    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub const fn contains(self, v: usize) -> bool {
        v < 64 && self.0 & (1 << v) != 0
    }

    pub const fn is_subset(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub const fn is_disjoint(self, other: VertexSet) -> bool {
        self.0 & other.0 == 0
    }

    pub const fn union(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 | other.0)
    }

    pub const fn intersection(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & other.0)
    }

    pub const fn with(self, v: usize) -> VertexSet {
        VertexSet(self.0 | (1 << v))
    }

    pub const fn without(self, v: usize) -> VertexSet {
        VertexSet(self.0 & !(1 << v))
    }

    /// Smallest member, if any.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Largest member, if any.
    pub fn last(self) -> Option<usize> {
        (self.0 != 0).then(|| 63 - self.0.leading_zeros() as usize)
    }

    /// Members in ascending order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(v)
        })
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in self.iter() {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
            first = false;
        }
        Ok(())
    }
}

/// An `n`-vertex `k`-uniform hypergraph on vertices `0..n`.
///
/// Edges are kept sorted in colex order without duplicates, so two
/// hypergraphs with the same edge set compare equal and print identically.
/// `k = 0` is allowed so that the shadow of a 1-graph is representable.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Hypergraph {
    n: usize,
    k: usize,
    edges: Vec<VertexSet>,
}

impl Hypergraph {
    /// Builds a hypergraph, rejecting malformed or repeated edges.
    pub fn new<I: IntoIterator<Item = VertexSet>>(n: usize, k: usize, edges: I) -> Result<Self> {
        ensure!(n <= MAX_VERTICES, "n = {n} exceeds the vertex cap {MAX_VERTICES}");
        let range = VertexSet::prefix(n);
        let mut edges: Vec<VertexSet> = edges.into_iter().collect();
        for e in &edges {
            ensure!(e.len() == k, "edge {{{e}}} does not have {k} vertices");
            ensure!(e.is_subset(range), "edge {{{e}}} has a vertex outside 0..{n}");
        }
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::invalid(format!("duplicate edge {{{}}}", w[0])));
        }
        Ok(Hypergraph { n, k, edges })
    }

    /// Builds from edges that are already valid, deduplicating silently.
    pub(crate) fn from_edges_unchecked(n: usize, k: usize, mut edges: Vec<VertexSet>) -> Self {
        debug_assert!(edges.iter().all(|e| e.len() == k && e.last().is_none_or(|m| m < n)));
        edges.sort_unstable();
        edges.dedup();
        Hypergraph { n, k, edges }
    }

    pub fn empty(n: usize, k: usize) -> Result<Self> {
        Hypergraph::new(n, k, std::iter::empty())
    }

    /// All k-subsets of `0..n`.
    pub fn complete(n: usize, k: usize) -> Result<Self> {
        if k > n {
            return Hypergraph::empty(n, k);
        }
        Ok(Hypergraph {
            n,
            k,
            edges: enumerate_ksubsets(n, k)?.collect(),
        })
    }

    /// All k-subsets of `0..n` that satisfy `keep`.
    pub fn filtered(n: usize, k: usize, keep: impl Fn(VertexSet) -> bool) -> Result<Self> {
        ensure!(k <= n, "k = {k} exceeds n = {n}");
        Ok(Hypergraph {
            n,
            k,
            edges: enumerate_ksubsets(n, k)?.filter(|&e| keep(e)).collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn edges(&self) -> &[VertexSet] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::prefix(self.n)
    }

    pub fn contains(&self, edge: VertexSet) -> bool {
        self.edges.binary_search(&edge).is_ok()
    }

    /// Same vertex set and uniformity, edges restricted to `keep`.
    pub fn retain(&self, mut keep: impl FnMut(VertexSet) -> bool) -> Hypergraph {
        Hypergraph {
            n: self.n,
            k: self.k,
            edges: self.edges.iter().copied().filter(|&e| keep(e)).collect(),
        }
    }

    pub fn with_edge(&self, edge: VertexSet) -> Result<Hypergraph> {
        Hypergraph::new(self.n, self.k, self.edges.iter().copied().chain([edge]))
    }

    pub fn without_edge(&self, edge: VertexSet) -> Hypergraph {
        self.retain(|e| e != edge)
    }

    /// Number of edges containing `s`.
    pub fn degree(&self, s: VertexSet) -> Result<u64> {
        ensure!(s.is_subset(self.vertices()), "set {{{s}}} is not inside 0..{}", self.n);
        ensure!(s.len() <= self.k, "|S| = {} exceeds k = {}", s.len(), self.k);
        Ok(self.edges.iter().filter(|e| s.is_subset(**e)).count() as u64)
    }

    /// Minimum, over all d-sets `S`, of `degree(S)`; `|E|` when `d = 0`.
    pub fn min_d_degree(&self, d: usize) -> Result<u64> {
        ensure!(d < self.k.max(1), "d = {d} outside 0..=k-1 for k = {}", self.k);
        ensure!(d <= self.n, "d = {d} exceeds n = {}", self.n);
        if d == 0 {
            return Ok(self.edges.len() as u64);
        }
        let sets = crate::binomial::binomial_u64(self.n as u64, d as u64);
        let covered = self.edges.len() as u64 * crate::binomial::binomial_u64(self.k as u64, d as u64);
        if covered < sets {
            // pigeonhole: some d-set lies in no edge
            return Ok(0);
        }
        let mut best = u64::MAX;
        for s in enumerate_ksubsets(self.n, d)? {
            let deg = self.edges.iter().filter(|e| s.is_subset(**e)).count() as u64;
            best = best.min(deg);
            if best == 0 {
                break;
            }
        }
        Ok(best)
    }

    /// All (k-1)-sets contained in some edge.
    pub fn shadow(&self) -> Hypergraph {
        let mut out = Vec::with_capacity(self.edges.len() * self.k);
        for e in &self.edges {
            for v in e.iter() {
                out.push(e.without(v));
            }
        }
        Hypergraph::from_edges_unchecked(self.n, self.k.saturating_sub(1), out)
    }

    /// Text form: `n k` header then one edge per line in colex order.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.k);
        for e in &self.edges {
            out.push_str(&e.to_string());
            out.push('\n');
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<Hypergraph> {
        parse_block(text.lines().enumerate().map(|(i, l)| (i + 1, l)))
    }
}

impl fmt::Debug for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hypergraph(n={}, k={}, ", self.n, self.k)?;
        f.debug_list().entries(self.edges.iter()).finish()?;
        f.write_str(")")
    }
}

fn significant(line: &str) -> Option<&str> {
    let trimmed = line.trim_end_matches(['\r', '\n']);
    (!trimmed.trim().is_empty() && !trimmed.trim_start().starts_with('#')).then_some(trimmed)
}

fn parse_uint(token: &str, line: usize) -> Result<usize> {
    token
        .parse::<usize>()
        .map_err(|_| Error::parse(line, format!("expected a non-negative integer, found '{token}'")))
}

fn parse_block<'a, I: Iterator<Item = (usize, &'a str)>>(lines: I) -> Result<Hypergraph> {
    let mut lines = lines.filter_map(|(no, l)| significant(l).map(|l| (no, l)));
    let (head_no, head) = lines.next().ok_or_else(|| Error::parse(0, "missing 'n k' header"))?;
    let head: Vec<&str> = head.split(' ').collect();
    if head.len() != 2 {
        return Err(Error::parse(head_no, "header must be 'n k'"));
    }
    let n = parse_uint(head[0], head_no)?;
    let k = parse_uint(head[1], head_no)?;
    if n > MAX_VERTICES {
        return Err(Error::parse(
            head_no,
            format!("n = {n} exceeds the vertex cap {MAX_VERTICES}"),
        ));
    }
    let mut edges = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (no, line) in lines {
        let ids = line.split(' ').map(|t| parse_uint(t, no)).collect::<Result<Vec<_>>>()?;
        if ids.len() != k {
            return Err(Error::parse(
                no,
                format!("edge has {} vertices, expected {k}", ids.len()),
            ));
        }
        if ids.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::parse(no, "vertex ids must be strictly ascending"));
        }
        if let Some(&v) = ids.iter().find(|&&v| v >= n) {
            return Err(Error::parse(no, format!("vertex {v} outside 0..{n}")));
        }
        let edge = VertexSet::from_vertices(ids).map_err(|e| Error::parse(no, e.to_string()))?;
        if !seen.insert(edge) {
            return Err(Error::parse(no, format!("duplicate edge {{{edge}}}")));
        }
        edges.push(edge);
    }
    Hypergraph::new(n, k, edges)
}

/// Splits a multi-family file (blocks separated by `%` lines) and parses
/// each block as a hypergraph.
pub fn parse_multi(text: &str) -> Result<Vec<Hypergraph>> {
    let mut blocks: Vec<Vec<(usize, &str)>> = vec![Vec::new()];
    for (i, line) in text.lines().enumerate() {
        if line.trim() == "%" {
            blocks.push(Vec::new());
        } else {
            blocks.last_mut().expect("non-empty").push((i + 1, line));
        }
    }
    blocks.into_iter().map(|b| parse_block(b.into_iter())).collect()
}

/// Joins hypergraphs into the multi-family text form.
pub fn to_multi_text(families: &[Hypergraph]) -> String {
    families.iter().map(Hypergraph::to_text).collect::<Vec<_>>().join("%\n")
}

/// A set of pairwise-disjoint edges.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Matching {
    edges: Vec<VertexSet>,
}

impl Matching {
    pub fn new(edges: Vec<VertexSet>) -> Result<Self> {
        let mut covered = VertexSet::EMPTY;
        for e in &edges {
            ensure!(e.is_disjoint(covered), "edge {{{e}}} overlaps an earlier edge");
            covered = covered.union(*e);
        }
        Ok(Matching { edges })
    }

    pub(crate) fn from_disjoint(edges: Vec<VertexSet>) -> Self {
        debug_assert!(Matching::new(edges.clone()).is_ok());
        Matching { edges }
    }

    pub fn edges(&self) -> &[VertexSet] {
        &self.edges
    }

    pub fn size(&self) -> usize {
        self.edges.len()
    }

    pub fn covered(&self) -> VertexSet {
        self.edges.iter().fold(VertexSet::EMPTY, |acc, e| acc.union(*e))
    }

    /// True when every edge belongs to `host` and edges are disjoint.
    pub fn is_valid_in(&self, host: &Hypergraph) -> bool {
        Matching::new(self.edges.clone()).is_ok() && self.edges.iter().all(|e| host.contains(*e))
    }
}

impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl Serialize for Hypergraph {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Hypergraph", 3)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("k", &self.k)?;
        st.serialize_field("edges", &self.edges)?;
        st.end()
    }
}
