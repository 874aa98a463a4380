//! Extremal constructions and the parity-construction degree `δ(n,k,d)`.
//!
//! Every construction uses canonical fixed sets: `{0..s-1}` for the
//! "meets a fixed s-set" families and `A = {0..a-1}` for the parity
//! constructions. The families are invariant under relabeling, so one
//! representative per parameter set is enough.

use std::fmt;

use num::bigint::BigUint;
use num::Zero;
use serde::Serialize;

use crate::binomial::binomial;
use crate::error::{ensure, Result};
use crate::hypergraph::{Hypergraph, VertexSet, MAX_VERTICES};

/// Which parity of `|e ∩ A|` a parity construction keeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    /// `B_{n,k}(A,B)`: edges meeting `A` an odd number of times.
    Odd,
    /// `B̄_{n,k}(A,B)`: edges meeting `A` an even number of times.
    Even,
}

impl Parity {
    fn residue(self) -> usize {
        match self {
            Parity::Odd => 1,
            Parity::Even => 0,
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Odd => "odd",
            Parity::Even => "even",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConstructionSpec {
    /// All k-sets meeting a fixed s-set.
    G { n: usize, k: usize, s: usize },
    /// All k-subsets of the first `k(s+1)-1` vertices.
    Aks { n: usize, k: usize, s: usize },
    /// All k-sets meeting `{0..s-1}`; literally the same edge set as `G`.
    An1s { n: usize, k: usize, s: usize },
    /// Parity construction with `|A| = a`.
    Parity {
        n: usize,
        k: usize,
        a: usize,
        parity: Parity,
    },
}

impl ConstructionSpec {
    pub fn build(&self) -> Result<Hypergraph> {
        match *self {
            ConstructionSpec::G { n, k, s } => build_g(n, k, s),
            ConstructionSpec::Aks { n, k, s } => build_a_ks(k, s, n),
            ConstructionSpec::An1s { n, k, s } => build_a_n1s(n, k, s),
            ConstructionSpec::Parity { n, k, a, parity } => build_parity(n, k, a, parity),
        }
    }
}

fn check_shape(n: usize, k: usize) -> Result<()> {
    ensure!(n <= MAX_VERTICES, "n = {n} exceeds the vertex cap {MAX_VERTICES}");
    ensure!(k >= 1, "uniformity must be at least 1");
    ensure!(k <= n, "k = {k} exceeds n = {n}");
    Ok(())
}

/// `G(s)`: every k-set meeting `{0..s-1}`. Requires `s < n/k`.
pub fn build_g(n: usize, k: usize, s: usize) -> Result<Hypergraph> {
    check_shape(n, k)?;
    ensure!(s * k < n, "G(s) needs s < n/k, got s = {s} with n = {n}, k = {k}");
    let fixed = VertexSet::prefix(s);
    Hypergraph::filtered(n, k, |e| !e.is_disjoint(fixed))
}

/// `A(k,s)`: all k-subsets of `{0..k(s+1)-2}`, inside `n` vertices.
pub fn build_a_ks(k: usize, s: usize, n: usize) -> Result<Hypergraph> {
    check_shape(n, k)?;
    let span = k * (s + 1) - 1;
    ensure!(n >= span, "A(k,s) needs n >= k(s+1)-1 = {span}, got n = {n}");
    let inside = VertexSet::prefix(span);
    Hypergraph::filtered(n, k, |e| e.is_subset(inside))
}

/// `A(n,1,s)`: all k-sets meeting `{0..s-1}`.
pub fn build_a_n1s(n: usize, k: usize, s: usize) -> Result<Hypergraph> {
    check_shape(n, k)?;
    ensure!(s <= n, "A(n,1,s) needs s <= n, got s = {s}");
    let fixed = VertexSet::prefix(s);
    Hypergraph::filtered(n, k, |e| !e.is_disjoint(fixed))
}

/// Parity construction on `A = {0..a-1}`, `B` the rest.
pub fn build_parity(n: usize, k: usize, a: usize, parity: Parity) -> Result<Hypergraph> {
    check_shape(n, k)?;
    ensure!(a >= 1 && a < n, "parity construction needs 1 <= |A| <= n-1, got {a}");
    let part = VertexSet::prefix(a);
    Hypergraph::filtered(n, k, |e| e.intersection(part).len() % 2 == parity.residue())
}

/// One member of `H_ext(n,k)`, described without building it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct ExtMember {
    pub a: usize,
    pub parity: Parity,
}

impl ExtMember {
    pub fn build(&self, n: usize, k: usize) -> Result<Hypergraph> {
        build_parity(n, k, self.a, self.parity)
    }
}

/// Members of `H_ext(n,k)`: `B̄` for odd `|A|`, `B` when `|A| - n/k` is odd.
pub fn hext_members(n: usize, k: usize) -> Result<Vec<ExtMember>> {
    ensure!(k >= 1, "uniformity must be at least 1");
    ensure!(n.is_multiple_of(k), "k = {k} does not divide n = {n}");
    let parts = n / k;
    let mut out = Vec::new();
    for a in 1..n {
        if a % 2 == 1 {
            out.push(ExtMember {
                a,
                parity: Parity::Even,
            });
        }
        if (a + parts) % 2 == 1 {
            out.push(ExtMember { a, parity: Parity::Odd });
        }
    }
    Ok(out)
}

/// Lazily builds every hypergraph of `H_ext(n,k)` in member order.
pub fn enumerate_hext(n: usize, k: usize) -> Result<impl Iterator<Item = (ExtMember, Hypergraph)>> {
    check_shape(n, k)?;
    let members = hext_members(n, k)?;
    Ok(members.into_iter().map(move |m| {
        let h = m.build(n, k).expect("member parameters are valid");
        (m, h)
    }))
}

/// `δ(n,k,d)` with the members attaining it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaExt {
    #[serde(serialize_with = "crate::report::biguint_str")]
    pub value: BigUint,
    pub argmax: Vec<ExtMember>,
}

/// Minimum d-degree of a parity construction, from binomial sums.
///
/// For a d-set `S` with `i = |S ∩ A|`, its degree counts the (k-d)-sets
/// `T` outside `S` with `j = |T ∩ A|` and `i + j` of the required parity.
pub fn parity_min_degree(n: usize, k: usize, d: usize, a: usize, parity: Parity) -> Result<BigUint> {
    ensure!(k >= 1 && d < k, "d = {d} outside 0..=k-1");
    ensure!(k <= n, "k = {k} exceeds n = {n}");
    ensure!(a >= 1 && a < n, "need 1 <= |A| <= n-1, got {a}");
    let b = n - a;
    let lo = d.saturating_sub(b);
    let hi = d.min(a);
    let rest = k - d;
    let mut best: Option<BigUint> = None;
    for i in lo..=hi {
        let (a_left, b_left) = (a - i, b - (d - i));
        let mut deg = BigUint::zero();
        for j in 0..=rest {
            if (i + j) % 2 == parity.residue() {
                deg += binomial(a_left as u64, j as i64) * binomial(b_left as u64, (rest - j) as i64);
            }
        }
        if best.as_ref().is_none_or(|b| deg < *b) {
            best = Some(deg);
        }
    }
    Ok(best.unwrap_or_default())
}

/// `δ(n,k,d)` by closed-form parity sums; valid for any `n`.
pub fn delta_ext(n: usize, k: usize, d: usize) -> Result<DeltaExt> {
    ensure!(k >= 1 && d < k, "d = {d} outside 0..=k-1");
    ensure!(k <= n, "k = {k} exceeds n = {n}");
    let mut scored = Vec::new();
    for m in hext_members(n, k)? {
        scored.push((m, parity_min_degree(n, k, d, m.a, m.parity)?));
    }
    Ok(collect_argmax(scored))
}

/// `δ(n,k,d)` by building every member and scanning all d-sets.
pub fn delta_ext_enumerated(n: usize, k: usize, d: usize) -> Result<DeltaExt> {
    ensure!(d < k, "d = {d} outside 0..=k-1");
    let mut scored = Vec::new();
    for (m, h) in enumerate_hext(n, k)? {
        scored.push((m, BigUint::from(h.min_d_degree(d)?)));
    }
    Ok(collect_argmax(scored))
}

fn collect_argmax(scored: Vec<(ExtMember, BigUint)>) -> DeltaExt {
    let value = scored.iter().map(|(_, v)| v.clone()).max().unwrap_or_default();
    let argmax = scored
        .into_iter()
        .filter(|(_, v)| *v == value)
        .map(|(m, _)| m)
        .collect();
    DeltaExt { value, argmax }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binomial::binomial_u64;
    use crate::solve::{has_perfect_matching, matching_number};
    use crate::subsets::enumerate_ksubsets;

    fn count_where(n: usize, k: usize, pred: impl Fn(&[usize]) -> bool) -> usize {
        enumerate_ksubsets(n, k)
            .unwrap()
            .filter(|s| pred(&s.iter().collect::<Vec<_>>()))
            .count()
    }

    #[test]
    fn g_sizes_match_scan() {
        let g = build_g(6, 3, 1).unwrap();
        assert_eq!(g.len(), count_where(6, 3, |e| e.contains(&0)));
        assert_eq!(g.len(), 10);
        assert!(build_g(6, 3, 0).unwrap().is_empty());
        assert!(build_g(6, 3, 2).is_err());
        for (n, k) in [(9usize, 3usize), (8, 2), (12, 4), (10, 3)] {
            for s in 0..n.div_ceil(k) {
                if s * k >= n {
                    continue;
                }
                let expected = binomial_u64(n as u64, k as u64) - binomial_u64((n - s) as u64, k as u64);
                assert_eq!(build_g(n, k, s).unwrap().len() as u64, expected);
            }
        }
    }

    #[test]
    fn g_just_below_n_over_k_has_no_perfect_matching() {
        let g = build_g(9, 3, 2).unwrap();
        assert!(has_perfect_matching(&g).unwrap().is_none());
    }

    #[test]
    fn a_ks_sizes_and_matching_number() {
        let a = build_a_ks(3, 1, 6).unwrap();
        assert_eq!(a.len(), 10);
        assert_eq!(matching_number(&a), 1);
        let b = build_a_ks(2, 2, 6).unwrap();
        assert_eq!(b.len(), 10);
        assert_eq!(matching_number(&b), 2);
        assert!(build_a_ks(3, 2, 7).is_err());
    }

    #[test]
    fn a_n1s_equals_g() {
        let a = build_a_n1s(6, 3, 2).unwrap();
        assert_eq!(a.len(), count_where(6, 3, |e| e.contains(&0) || e.contains(&1)));
        assert_eq!(a.len(), 16);
        // G(2) itself is out of range at (6,3): s must stay below n/k
        assert!(build_g(6, 3, 2).is_err());
        let meets_fixed = Hypergraph::filtered(6, 3, |e| !e.is_disjoint(VertexSet::prefix(2))).unwrap();
        assert_eq!(a, meets_fixed);
        assert_eq!(build_a_n1s(9, 3, 2).unwrap(), build_g(9, 3, 2).unwrap());
        assert!(build_a_n1s(6, 3, 0).unwrap().is_empty());
    }

    #[test]
    fn parity_examples() {
        let star = build_parity(4, 2, 1, Parity::Odd).unwrap();
        assert_eq!(star.len(), 3);
        assert!(star.edges().iter().all(|e| e.contains(0)));
        let even = build_parity(4, 2, 2, Parity::Even).unwrap();
        assert_eq!(
            even.len(),
            count_where(4, 2, |e| e.iter().filter(|&&v| v < 2).count() % 2 == 0)
        );
        assert_eq!(even.len(), 2);
        for (n, k, a) in [(7, 3, 2), (8, 4, 5), (6, 2, 3)] {
            let odd = build_parity(n, k, a, Parity::Odd).unwrap().len();
            let even = build_parity(n, k, a, Parity::Even).unwrap().len();
            assert_eq!((odd + even) as u64, binomial_u64(n as u64, k as u64));
        }
        assert!(build_parity(4, 2, 0, Parity::Odd).is_err());
        assert!(build_parity(4, 2, 4, Parity::Odd).is_err());
    }

    #[test]
    fn hext_membership_rule() {
        let members = hext_members(6, 3).unwrap();
        let even: Vec<usize> = members
            .iter()
            .filter(|m| m.parity == Parity::Even)
            .map(|m| m.a)
            .collect();
        let odd: Vec<usize> = members
            .iter()
            .filter(|m| m.parity == Parity::Odd)
            .map(|m| m.a)
            .collect();
        assert_eq!(even, vec![1, 3, 5]);
        assert_eq!(odd, vec![1, 3, 5]);
        assert!(hext_members(7, 3).is_err());
    }

    #[test]
    fn hext_members_have_no_perfect_matching() {
        for n in 2..=12 {
            for k in 1..=4 {
                if n % k != 0 || k > n {
                    continue;
                }
                for (m, h) in enumerate_hext(n, k).unwrap() {
                    assert!(has_perfect_matching(&h).unwrap().is_none(), "n={n} k={k} {m:?}");
                }
            }
        }
    }

    #[test]
    fn star_complement_on_four_vertices() {
        let h = build_parity(4, 2, 1, Parity::Even).unwrap();
        assert_eq!(h, Hypergraph::filtered(4, 2, |e| !e.contains(0)).unwrap());
        assert!(has_perfect_matching(&h).unwrap().is_none());
    }

    #[test]
    fn closed_form_matches_enumeration() {
        for n in 2..=12 {
            for k in 1..=4.min(n) {
                if n % k != 0 {
                    continue;
                }
                for d in 0..k {
                    let closed = delta_ext(n, k, d).unwrap();
                    let scanned = delta_ext_enumerated(n, k, d).unwrap();
                    assert_eq!(closed, scanned, "n={n} k={k} d={d}");
                    assert!(closed.value <= binomial((n - d) as u64, (k - d) as i64));
                }
            }
        }
    }

    #[test]
    fn small_delta_values() {
        assert_eq!(delta_ext(4, 2, 1).unwrap().value, BigUint::from(1u32));
        assert_eq!(delta_ext(6, 2, 1).unwrap().value, BigUint::from(2u32));
        let oracle = delta_ext_enumerated(6, 3, 2).unwrap();
        assert_eq!(delta_ext(6, 3, 2).unwrap(), oracle);
    }

    #[test]
    fn delta_is_near_half_of_the_cap() {
        use crate::rational::{from_biguint, ratio};
        for k in 2..=4 {
            for n in (4 * k..=40).step_by(k) {
                for d in 1..k {
                    let v = from_biguint(&delta_ext(n, k, d).unwrap().value);
                    let cap = from_biguint(&binomial((n - d) as u64, (k - d) as i64));
                    let frac = v / cap;
                    assert!(frac >= ratio(3, 10) && frac <= ratio(7, 10), "n={n} k={k} d={d} {frac}");
                }
            }
        }
    }
}
