//! Shifting, cross-dependent families and the extremal search behind the
//! Erdős matching conjecture.

use num::bigint::BigUint;
use rand::Rng;
use serde::Serialize;

use crate::binomial::binomial;
use crate::bounds::emc_conjecture_bound;
use crate::constructions::{build_a_ks, build_a_n1s};
use crate::error::{ensure, Error, Result};
use crate::hypergraph::{Hypergraph, VertexSet};
use crate::random::FuzzRng;
use crate::rational::{from_biguint, int, Rational};
use crate::search::{self, select};
use crate::solve::{masks_have_matching, matching_number};

/// A family `F ⊆ C([n],k)`; the same type as a hypergraph.
pub type Family = Hypergraph;

/// The `(i,j)`-shift: every edge with `j` in and `i` out moves to
/// `e - j + i` unless that set is already present.
pub fn shift(f: &Family, i: usize, j: usize) -> Result<Family> {
    ensure!(i < j, "shift needs i < j, got i = {i}, j = {j}");
    ensure!(j < f.n(), "vertex {j} outside 0..{}", f.n());
    let edges = f
        .edges()
        .iter()
        .map(|&e| {
            if e.contains(j) && !e.contains(i) {
                let moved = e.without(j).with(i);
                if !f.contains(moved) {
                    return moved;
                }
            }
            e
        })
        .collect();
    Ok(Hypergraph::from_edges_unchecked(f.n(), f.k(), edges))
}

/// Applies every `(i,j)`-shift until none changes the family.
pub fn stabilize(f: &Family) -> Family {
    let mut current = f.clone();
    loop {
        let mut changed = false;
        for j in 1..f.n() {
            for i in 0..j {
                let next = shift(&current, i, j).expect("i < j < n");
                if next != current {
                    current = next;
                    changed = true;
                }
            }
        }
        if !changed {
            return current;
        }
    }
}

pub fn is_stable(f: &Family) -> bool {
    f.edges().iter().all(|&e| {
        e.iter().all(|j| {
            (0..j)
                .filter(|&i| !e.contains(i))
                .all(|i| f.contains(e.without(j).with(i)))
        })
    })
}

/// Families `F_1, ..., F_{s+1}` of `ℓ`-sets over a common ground set `Y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilySequence {
    families: Vec<Family>,
}

impl FamilySequence {
    pub fn new(families: Vec<Family>) -> Result<Self> {
        ensure!(!families.is_empty(), "need at least one family");
        let (y, ell) = (families[0].n(), families[0].k());
        for f in &families {
            ensure!(
                f.n() == y && f.k() == ell,
                "families disagree on ground set or uniformity"
            );
        }
        Ok(FamilySequence { families })
    }

    pub fn families(&self) -> &[Family] {
        &self.families
    }

    pub fn ground_size(&self) -> usize {
        self.families[0].n()
    }

    pub fn uniformity(&self) -> usize {
        self.families[0].k()
    }

    /// `s`, one less than the number of families.
    pub fn s(&self) -> usize {
        self.families.len() - 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossDependence {
    pub cross_dependent: bool,
    /// Pairwise-disjoint `F_i ∈ F_i`, one per family, when not cross-dependent.
    pub witness: Option<Vec<VertexSet>>,
}

pub fn is_cross_dependent(seq: &FamilySequence) -> CrossDependence {
    fn pick(families: &[Family], used: u64, chosen: &mut Vec<VertexSet>) -> bool {
        let Some(f) = families.get(chosen.len()) else {
            return true;
        };
        for &e in f.edges() {
            if e.mask() & used == 0 {
                chosen.push(e);
                if pick(families, used | e.mask(), chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    let mut chosen = Vec::new();
    if pick(&seq.families, 0, &mut chosen) {
        CrossDependence {
            cross_dependent: false,
            witness: Some(chosen),
        }
    } else {
        CrossDependence {
            cross_dependent: true,
            witness: None,
        }
    }
}

/// `F_{s+1} ⊆ F_s ⊆ ... ⊆ F_1`.
pub fn is_nested(seq: &FamilySequence) -> bool {
    seq.families
        .windows(2)
        .all(|w| w[1].edges().iter().all(|&e| w[0].contains(e)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NestedInequalityReport {
    pub s: usize,
    pub ell: usize,
    pub ground_size: usize,
    #[serde(serialize_with = "crate::report::rational")]
    pub beta: Rational,
    pub t: usize,
    /// `|F_1| + ... + |F_s| + (s+1)|F_{s+1}|`
    pub lhs: u64,
    /// `(s/β) C(|Y|, ℓ)`
    #[serde(serialize_with = "crate::report::rational")]
    pub cap: Rational,
    pub holds: bool,
}

/// Evaluates both sides of the nested cross-dependent inequality.
pub fn check_nested_inequality(seq: &FamilySequence, beta: &Rational, t: usize) -> Result<NestedInequalityReport> {
    ensure!(
        *beta > int(0) && *beta < int(1),
        "hypothesis beta in (0,1) fails: beta = {beta}"
    );
    ensure!(is_nested(seq), "hypothesis fails: families are not nested");
    ensure!(
        is_cross_dependent(seq).cross_dependent,
        "hypothesis fails: families are not cross-dependent"
    );
    let (s, ell, y) = (seq.s(), seq.uniformity(), seq.ground_size());
    ensure!(y >= t * ell, "hypothesis |Y| >= t*l fails: {y} < {}", t * ell);
    let need = beta * int(2 * s as i64 + 1);
    ensure!(int(t as i64) >= need, "hypothesis t >= beta(2s+1) fails: {t} < {need}");
    let fams = &seq.families;
    let lhs = fams[..s].iter().map(|f| f.len() as u64).sum::<u64>() + (s as u64 + 1) * fams[s].len() as u64;
    let cap = int(s as i64) / beta * from_biguint(&binomial(y as u64, ell as i64));
    Ok(NestedInequalityReport {
        s,
        ell,
        ground_size: y,
        beta: beta.clone(),
        t,
        lhs,
        holds: int(lhs as i64) <= cap,
        cap,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShadowReport {
    pub nu: usize,
    pub family_size: usize,
    pub shadow_size: usize,
    pub holds: bool,
}

/// Checks `ν(F)·|∂F| >= |F|`.
pub fn verify_shadow_theorem(f: &Family) -> Result<ShadowReport> {
    ensure!(!f.is_empty(), "family must be non-empty");
    let nu = matching_number(f);
    let shadow_size = f.shadow().len();
    Ok(ShadowReport {
        nu,
        family_size: f.len(),
        shadow_size,
        holds: nu * shadow_size >= f.len(),
    })
}

/// Partition of a stable family by its trace on `{0, ..., s}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionReport {
    pub n: usize,
    pub k: usize,
    pub s: usize,
    /// `n - s - 1`
    pub m: usize,
    /// `(Q as a vertex list, |F(Q)|, |A(Q)|)` for every `Q ⊆ {0..s}`.
    pub parts: Vec<(Vec<usize>, u64, u64)>,
    /// `|A(Q)| = C(m, k - |Q|)` whenever `|Q| >= 2`.
    pub a_counts_match: bool,
    /// `|F(Q)| <= |A(Q)|` whenever `|Q| >= 2`.
    pub f_below_a: bool,
    pub empty_part_shadow: usize,
    pub last_singleton: usize,
    /// `|∂F(∅)| <= |F({s})|`, with `H + s ∈ F` for every shadow set `H`.
    pub shadow_absorbed: bool,
    pub nested: bool,
    pub cross_dependent: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nested_inequality: Option<NestedInequalityReport>,
}

impl PartitionReport {
    pub fn all_hold(&self) -> bool {
        self.a_counts_match
            && self.f_below_a
            && self.shadow_absorbed
            && self.nested
            && self.cross_dependent
            && self.nested_inequality.as_ref().is_none_or(|t| t.holds)
    }
}

/// The families `F_i = {F - i : F ∩ {0..s} = {i}}` over `Y = {s+1..n-1}`,
/// relabelled to `0..m`.
pub fn partition_families(f: &Family, s: usize) -> Result<FamilySequence> {
    let (n, k) = (f.n(), f.k());
    ensure!(k >= 2, "partition families need k >= 2");
    ensure!(s + 1 < n, "need s + 1 < n");
    let head = VertexSet::prefix(s + 1).mask();
    let mut families = Vec::with_capacity(s + 1);
    for i in 0..=s {
        let edges = f
            .edges()
            .iter()
            .filter(|e| e.mask() & head == 1u64 << i)
            .map(|e| VertexSet::from_mask((e.mask() & !head) >> (s + 1)))
            .collect();
        families.push(Hypergraph::from_edges_unchecked(n - s - 1, k - 1, edges));
    }
    FamilySequence::new(families)
}

/// Recomputes the partition steps for a stable family with `ν(F) = s`.
///
/// With `alpha`, also instantiates the nested inequality with
/// `β = (αk-1)/(2k-2)` and `t = ceil(β(2s+1))`.
pub fn partition_report(f: &Family, alpha: Option<&Rational>) -> Result<PartitionReport> {
    ensure!(is_stable(f), "family is not stable");
    let (n, k) = (f.n(), f.k());
    let s = matching_number(f);
    ensure!(k >= 2, "partition needs k >= 2");
    ensure!(s + 1 < n, "need s + 1 < n");
    let m = n - s - 1;
    let head = VertexSet::prefix(s + 1).mask();
    let a_family = build_a_n1s(n, k, s)?;
    let mut parts = Vec::new();
    let (mut a_counts_match, mut f_below_a) = (true, true);
    for q in 0..(1u64 << (s + 1)) {
        let count = |h: &Hypergraph| h.edges().iter().filter(|e| e.mask() & head == q).count() as u64;
        let (fq, aq) = (count(f), count(&a_family));
        if q.count_ones() >= 2 {
            let expected = binomial(m as u64, k as i64 - q.count_ones() as i64);
            a_counts_match &= BigUint::from(aq) == expected;
            f_below_a &= fq <= aq;
        }
        parts.push((VertexSet::from_mask(q).iter().collect(), fq, aq));
    }
    let empty_part = f.retain(|e| e.mask() & head == 0);
    let shadow = empty_part.shadow();
    let last = 1u64 << s;
    let last_singleton = f.edges().iter().filter(|e| e.mask() & head == last).count();
    let shadow_absorbed = shadow.len() <= last_singleton && shadow.edges().iter().all(|h| f.contains(h.with(s)));
    let seq = partition_families(f, s)?;
    let nested = is_nested(&seq);
    let cross_dependent = is_cross_dependent(&seq).cross_dependent;
    let nested_inequality = match alpha {
        Some(alpha) if nested && cross_dependent => {
            let kk = int(k as i64);
            let beta = (alpha * &kk - int(1)) / (int(2) * kk - int(2));
            let t = (&beta * int(2 * s as i64 + 1)).ceil().to_integer();
            let t: usize = t.try_into().map_err(|_| Error::invalid("t out of range"))?;
            Some(check_nested_inequality(&seq, &beta, t)?)
        }
        _ => None,
    };
    Ok(PartitionReport {
        n,
        k,
        s,
        m,
        parts,
        a_counts_match,
        f_below_a,
        empty_part_shadow: shadow.len(),
        last_singleton,
        shadow_absorbed,
        nested,
        cross_dependent,
        nested_inequality,
    })
}

/// Random nested cross-dependent sequence: a random descending chain, then
/// any disjoint transversal is broken by deleting one of its sets from its
/// family and every later one.
pub fn random_nested_cross_dependent(rng: &mut FuzzRng, y: usize, ell: usize, s: usize) -> FamilySequence {
    let density = rng.gen_range(0.2..0.9);
    let base = crate::random::random_family(rng, y, ell, density);
    let mut families = vec![base];
    for _ in 0..s {
        let keep = rng.gen_range(0.3..1.0);
        let next = families.last().expect("non-empty").retain(|_| rng.gen_bool(keep));
        families.push(next);
    }
    loop {
        let seq = FamilySequence {
            families: families.clone(),
        };
        let Some(witness) = is_cross_dependent(&seq).witness else {
            return seq;
        };
        let j = rng.gen_range(0..witness.len());
        for f in &mut families[j..] {
            *f = f.without_edge(witness[j]);
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    /// Every subfamily of `C([n],k)`.
    Exhaustive,
    /// Branch and bound over all families.
    Pruned,
    /// Branch and bound over stable families only.
    Stable,
}

/// Largest `C(n,k)` scanned literally.
pub const EXHAUSTIVE_MAX_EDGES: usize = 22;
/// Largest `C(n,k)` accepted by the pruned searches.
pub const SEARCH_MAX_EDGES: usize = 500;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchReport {
    pub n: usize,
    pub k: usize,
    pub s: usize,
    pub objective: &'static str,
    pub mode: SearchMode,
    pub value: u64,
    pub witness: Family,
    pub witness_nu: usize,
    pub nodes: u64,
    #[serde(serialize_with = "crate::report::opt_biguint_str")]
    pub conjecture_bound: Option<BigUint>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

/// Maximum `|F|` over `F ⊆ C([n],k)` with `ν(F) <= s`.
///
/// `Stable` searches down-sets of the componentwise order only; shifting
/// keeps `|F|` and never raises `ν`, so the maximum is the same. Without it,
/// `C(n,k) <= EXHAUSTIVE_MAX_EDGES` is scanned literally and larger cases use
/// the pruned search.
pub fn emc_extremal_search(n: usize, k: usize, s: usize, restrict_stable: bool, node_cap: u64) -> Result<SearchReport> {
    let mode = if restrict_stable {
        SearchMode::Stable
    } else if binomial(n as u64, k as i64) <= BigUint::from(EXHAUSTIVE_MAX_EDGES) {
        SearchMode::Exhaustive
    } else {
        SearchMode::Pruned
    };
    emc_search_with_mode(n, k, s, mode, node_cap)
}

pub fn emc_search_with_mode(n: usize, k: usize, s: usize, mode: SearchMode, node_cap: u64) -> Result<SearchReport> {
    ensure!(k >= 1 && k <= n, "need 1 <= k <= n, got n = {n}, k = {k}");
    ensure!(n <= crate::MAX_VERTICES, "n = {n} exceeds {}", crate::MAX_VERTICES);
    let size = binomial(n as u64, k as i64);
    let cap = match mode {
        SearchMode::Exhaustive => EXHAUSTIVE_MAX_EDGES,
        _ => SEARCH_MAX_EDGES,
    };
    if size > BigUint::from(cap) {
        return Err(Error::limit(
            format!("C({n},{k}) = {size} exceeds the {mode:?} cap of {cap}"),
            None,
        ));
    }
    let mut warnings = Vec::new();
    let conjecture_bound = emc_conjecture_bound(n, k, s).ok();
    if conjecture_bound.is_none() {
        warnings.push(format!("n < k(s+1) - 1 = {}", (k * (s + 1)).saturating_sub(1)));
    }
    let universe: Vec<u64> = Hypergraph::complete(n, k)?.edges().iter().map(|e| e.mask()).collect();
    let bad = |f: &[u64]| masks_have_matching(n, k, f, s + 1);
    let (value, family, nodes) = match mode {
        SearchMode::Exhaustive => {
            let cells = search::degree_cells(n, 0, &universe);
            let (value, mask, checks) =
                search::exhaustive(universe.len(), &cells, |m| Ok(bad(&select(&universe, m)).is_some()))?;
            (value, select(&universe, mask), checks)
        }
        SearchMode::Pruned | SearchMode::Stable => {
            let incumbent = canonical_incumbent(n, k, s);
            let out = search::maximize(
                &universe,
                mode == SearchMode::Stable,
                node_cap,
                incumbent,
                |f| f.len() as u64,
                |f| Ok(bad(f)),
            )?;
            (out.value, out.family, out.nodes)
        }
    };
    let witness = Hypergraph::from_edges_unchecked(n, k, family.into_iter().map(VertexSet::from_mask).collect());
    let witness_nu = matching_number(&witness);
    Ok(SearchReport {
        n,
        k,
        s,
        objective: "max |F| subject to nu(F) <= s",
        mode,
        value,
        witness,
        witness_nu,
        nodes,
        conjecture_bound,
        warnings,
    })
}

/// The larger of the two canonical constructions that fit, as a seed.
fn canonical_incumbent(n: usize, k: usize, s: usize) -> Option<(u64, Vec<u64>)> {
    let mut best: Option<(u64, Vec<u64>)> = None;
    let candidates = [build_a_ks(k, s, n).ok(), build_a_n1s(n, k, s).ok()];
    for h in candidates.into_iter().flatten() {
        let masks: Vec<u64> = h.edges().iter().map(|e| e.mask()).collect();
        debug_assert!(masks_have_matching(n, k, &masks, s + 1).is_none());
        if best.as_ref().is_none_or(|b| (masks.len() as u64) > b.0) {
            best = Some((masks.len() as u64, masks));
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(n: usize, k: usize, edges: &[&[usize]]) -> Family {
        Hypergraph::new(
            n,
            k,
            edges
                .iter()
                .map(|e| VertexSet::from_vertices(e.iter().copied()).unwrap()),
        )
        .unwrap()
    }

    #[test]
    fn single_edge_shift() {
        let f = fam(3, 2, &[&[1, 2]]);
        assert_eq!(shift(&f, 0, 2).unwrap(), fam(3, 2, &[&[0, 1]]));
        assert!(shift(&f, 2, 0).is_err());
        assert!(!is_stable(&f));
        assert!(is_stable(&stabilize(&f)));
    }

    #[test]
    fn stable_examples() {
        assert!(is_stable(&Hypergraph::complete(6, 3).unwrap()));
        assert!(is_stable(&build_a_n1s(7, 3, 2).unwrap()));
        assert!(is_stable(&build_a_ks(3, 2, 9).unwrap()));
        let f = build_a_n1s(7, 3, 2).unwrap();
        assert_eq!(stabilize(&f), f);
    }

    #[test]
    fn cross_dependence_examples() {
        let empty = FamilySequence::new(vec![Hypergraph::empty(4, 1).unwrap(); 3]).unwrap();
        assert!(is_cross_dependent(&empty).cross_dependent);
        let singles = FamilySequence::new((0..3).map(|i| fam(4, 1, &[&[i]])).collect()).unwrap();
        let cd = is_cross_dependent(&singles);
        assert!(!cd.cross_dependent);
        let w: Vec<usize> = cd.witness.unwrap().iter().map(|e| e.first().unwrap()).collect();
        assert_eq!(w, vec![0, 1, 2]);
    }

    #[test]
    fn nesting_examples() {
        let f = fam(4, 2, &[&[0, 1]]);
        assert!(is_nested(&FamilySequence::new(vec![f.clone(), f.clone()]).unwrap()));
        let e = Hypergraph::empty(4, 2).unwrap();
        assert!(!is_nested(&FamilySequence::new(vec![e, f]).unwrap()));
    }

    #[test]
    fn search_small_graphs() {
        let r = emc_extremal_search(6, 2, 1, false, 1_000_000).unwrap();
        assert_eq!(r.value, 5);
        assert_eq!(r.mode, SearchMode::Exhaustive);
        let r = emc_extremal_search(6, 2, 1, true, 1_000_000).unwrap();
        assert_eq!(r.value, 5);
        assert!(r.witness_nu <= 1);
    }
}
