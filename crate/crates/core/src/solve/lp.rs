//! Maximum fractional matching as an exact rational LP.
//!
//! maximize  sum_e w_e
//! s.t.      sum_{e ∋ v} w_e <= 1   for every vertex v
//!           w_e >= 0
//!
//! The all-slack basis is feasible (right-hand side is all ones), so a single
//! phase of primal simplex with Bland's rule suffices. At the optimum the
//! negated slack reduced costs are the vertex potentials of a fractional
//! cover, which is checked for feasibility and equal value before returning.

use num::{One, Signed, Zero};

use crate::error::{ensure, Error, Result};
use crate::hypergraph::{Hypergraph, VertexSet};
use crate::rational::{int, ratio, Rational};

/// Size limits for the dense tableau.
#[derive(Clone, Copy, Debug)]
pub struct LpCaps {
    pub max_edges: usize,
    pub max_pivots: usize,
}

impl Default for LpCaps {
    fn default() -> Self {
        LpCaps {
            max_edges: 5_000,
            max_pivots: 200_000,
        }
    }
}

/// Edge weights with every vertex load at most one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FractionalMatching {
    weights: Vec<(VertexSet, Rational)>,
    size: Rational,
}

impl FractionalMatching {
    /// Non-zero weights in colex edge order.
    pub fn weights(&self) -> &[(VertexSet, Rational)] {
        &self.weights
    }

    pub fn size(&self) -> &Rational {
        &self.size
    }

    pub fn weight_of(&self, edge: VertexSet) -> Rational {
        self.weights
            .iter()
            .find(|(e, _)| *e == edge)
            .map(|(_, w)| w.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn load(&self, v: usize) -> Rational {
        self.weights
            .iter()
            .filter(|(e, _)| e.contains(v))
            .fold(Rational::zero(), |acc, (_, w)| acc + w)
    }

    /// Checks weights in `[0,1]`, loads at most one, and the stored size.
    pub fn is_valid_in(&self, host: &Hypergraph) -> bool {
        let zero = Rational::zero();
        let one = Rational::one();
        let weights_ok = self
            .weights
            .iter()
            .all(|(e, w)| host.contains(*e) && *w >= zero && *w <= one);
        let loads_ok = (0..host.n()).all(|v| self.load(v) <= one);
        let total = self.weights.iter().fold(Rational::zero(), |acc, (_, w)| acc + w);
        weights_ok && loads_ok && total == self.size
    }
}

/// Vertex potentials covering every edge with total at least one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FractionalCover {
    potentials: Vec<Rational>,
    value: Rational,
}

impl FractionalCover {
    pub fn potentials(&self) -> &[Rational] {
        &self.potentials
    }

    pub fn value(&self) -> &Rational {
        &self.value
    }

    pub fn is_valid_in(&self, host: &Hypergraph) -> bool {
        let one = Rational::one();
        self.potentials.len() == host.n()
            && self.potentials.iter().all(|p| !p.is_negative())
            && host
                .edges()
                .iter()
                .all(|e| e.iter().fold(Rational::zero(), |acc, v| acc + &self.potentials[v]) >= one)
            && self.potentials.iter().fold(Rational::zero(), |acc, p| acc + p) == self.value
    }
}

/// An optimal fractional matching together with its dual certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FractionalSolution {
    pub matching: FractionalMatching,
    pub cover: FractionalCover,
    pub pivots: usize,
}

pub fn max_fractional_matching(h: &Hypergraph) -> Result<FractionalSolution> {
    max_fractional_matching_with(h, LpCaps::default())
}

pub fn max_fractional_matching_with(h: &Hypergraph, caps: LpCaps) -> Result<FractionalSolution> {
    if h.len() > caps.max_edges {
        return Err(Error::limit(
            format!("{} edges exceed the LP cap of {}", h.len(), caps.max_edges),
            None,
        ));
    }
    let masks: Vec<u64> = h.edges().iter().map(|e| e.mask()).collect();
    let (x, y, pivots) = solve_packing(h.n(), &masks, caps.max_pivots)?;

    let weights: Vec<(VertexSet, Rational)> = h
        .edges()
        .iter()
        .zip(x)
        .filter(|(_, w)| !w.is_zero())
        .map(|(e, w)| (*e, w))
        .collect();
    let size = weights.iter().fold(Rational::zero(), |acc, (_, w)| acc + w);
    let value = y.iter().fold(Rational::zero(), |acc, p| acc + p);
    let matching = FractionalMatching { weights, size };
    let cover = FractionalCover { potentials: y, value };
    // certificate: primal and dual feasible with equal objective
    if !(matching.is_valid_in(h) && cover.is_valid_in(h) && matching.size == cover.value) {
        return Err(Error::invalid("LP certificate check failed"));
    }
    Ok(FractionalSolution {
        matching,
        cover,
        pivots,
    })
}

/// True iff the maximum fractional matching has size exactly `n/k`.
pub fn has_perfect_fractional_matching(h: &Hypergraph) -> Result<bool> {
    ensure!(h.k() >= 1, "uniformity must be at least 1");
    let target = ratio(h.n() as i64, h.k() as i64);
    Ok(*max_fractional_matching(h)?.matching.size() == target)
}

/// Returns (primal weights per edge, dual potentials per vertex, pivot count).
fn solve_packing(n: usize, edges: &[u64], max_pivots: usize) -> Result<(Vec<Rational>, Vec<Rational>, usize)> {
    let m = edges.len();
    let cols = m + n;
    // rows[i][j]: coefficient of column j in row i; rhs[i]
    let mut rows: Vec<Vec<Rational>> = (0..n)
        .map(|v| {
            let mut row = vec![Rational::zero(); cols];
            for (j, e) in edges.iter().enumerate() {
                if e & (1 << v) != 0 {
                    row[j] = Rational::one();
                }
            }
            row[m + v] = Rational::one();
            row
        })
        .collect();
    let mut rhs: Vec<Rational> = vec![Rational::one(); n];
    // reduced costs c_j - z_j for a maximization problem
    let mut reduced: Vec<Rational> = (0..cols)
        .map(|j| if j < m { Rational::one() } else { Rational::zero() })
        .collect();
    let mut basis: Vec<usize> = (m..cols).collect();

    let mut pivots = 0;
    while let Some(enter) = reduced.iter().position(|c| c.is_positive()) {
        let mut leave: Option<usize> = None;
        let mut best_ratio = Rational::zero();
        for i in 0..n {
            let a = &rows[i][enter];
            if !a.is_positive() {
                continue;
            }
            let r = &rhs[i] / a;
            let better = match leave {
                None => true,
                Some(l) => r < best_ratio || (r == best_ratio && basis[i] < basis[l]),
            };
            if better {
                best_ratio = r;
                leave = Some(i);
            }
        }
        // the feasible region is bounded, so some row always blocks
        let leave = leave.ok_or_else(|| Error::invalid("unbounded packing LP"))?;
        pivot(&mut rows, &mut rhs, &mut reduced, leave, enter);
        basis[leave] = enter;
        pivots += 1;
        if pivots > max_pivots {
            return Err(Error::limit(format!("LP exceeded {max_pivots} pivots"), None));
        }
    }

    let mut x = vec![Rational::zero(); m];
    for (i, &b) in basis.iter().enumerate() {
        if b < m {
            x[b] = rhs[i].clone();
        }
    }
    let y: Vec<Rational> = (0..n).map(|v| -reduced[m + v].clone()).collect();
    Ok((x, y, pivots))
}

fn pivot(rows: &mut [Vec<Rational>], rhs: &mut [Rational], reduced: &mut [Rational], leave: usize, enter: usize) {
    let inv = Rational::one() / &rows[leave][enter];
    for a in rows[leave].iter_mut() {
        if !a.is_zero() {
            *a *= &inv;
        }
    }
    rhs[leave] *= &inv;
    let pivot_row = rows[leave].clone();
    let pivot_rhs = rhs[leave].clone();
    let support: Vec<usize> = (0..pivot_row.len()).filter(|&j| !pivot_row[j].is_zero()).collect();

    for (i, row) in rows.iter_mut().enumerate() {
        if i == leave || row[enter].is_zero() {
            continue;
        }
        let factor = row[enter].clone();
        for &j in &support {
            row[j] -= &factor * &pivot_row[j];
        }
        rhs[i] -= &factor * &pivot_rhs;
    }
    if !reduced[enter].is_zero() {
        let factor = reduced[enter].clone();
        for &j in &support {
            reduced[j] -= &factor * &pivot_row[j];
        }
    }
}

/// `n/k` as a rational, the trivial cap on any fractional matching.
pub fn trivial_cap(h: &Hypergraph) -> Rational {
    if h.k() == 0 {
        return int(0);
    }
    ratio(h.n() as i64, h.k() as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::VertexSet;

    fn vs(v: &[usize]) -> VertexSet {
        VertexSet::from_vertices(v.iter().copied()).unwrap()
    }

    #[test]
    fn single_edge() {
        let h = Hypergraph::new(3, 3, [vs(&[0, 1, 2])]).unwrap();
        let sol = max_fractional_matching(&h).unwrap();
        assert_eq!(*sol.matching.size(), int(1));
        assert_eq!(sol.matching.weight_of(vs(&[0, 1, 2])), int(1));
    }

    /// Brute-force LP vertex enumeration for the triangle: every basic
    /// solution of 3 variables picks 3 tight constraints among the 3 vertex
    /// rows and 3 non-negativity rows.
    fn triangle_vertex_enumeration() -> Rational {
        // variables w01, w02, w12; loads: v0 = w01 + w02, v1 = w01 + w12, v2 = w02 + w12
        let constraints: [([i64; 3], i64); 6] = [
            ([1, 1, 0], 1),
            ([1, 0, 1], 1),
            ([0, 1, 1], 1),
            ([1, 0, 0], 0),
            ([0, 1, 0], 0),
            ([0, 0, 1], 0),
        ];
        let mut best: Option<Rational> = None;
        for a in 0..6 {
            for b in a + 1..6 {
                for c in b + 1..6 {
                    let sys = [constraints[a], constraints[b], constraints[c]];
                    if let Some(x) = solve3(&sys) {
                        let feasible = x.iter().all(|w| !w.is_negative())
                            && [(0, 1), (0, 2), (1, 2)].iter().all(|&(i, j)| &x[i] + &x[j] <= int(1));
                        if feasible {
                            let val = &x[0] + &x[1] + &x[2];
                            if best.as_ref().is_none_or(|b| val > *b) {
                                best = Some(val);
                            }
                        }
                    }
                }
            }
        }
        best.unwrap()
    }

    // Cramer's rule on a 3x3 system.
    fn solve3(sys: &[([i64; 3], i64); 3]) -> Option<[Rational; 3]> {
        let det = |m: [[i64; 3]; 3]| -> i64 {
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        };
        let a = [sys[0].0, sys[1].0, sys[2].0];
        let d = det(a);
        if d == 0 {
            return None;
        }
        let mut out = [int(0), int(0), int(0)];
        for col in 0..3 {
            let mut m = a;
            for row in 0..3 {
                m[row][col] = sys[row].1;
            }
            out[col] = ratio(det(m), d);
        }
        Some(out)
    }

    #[test]
    fn triangle_graph_is_three_halves() {
        let oracle = triangle_vertex_enumeration();
        assert_eq!(oracle, ratio(3, 2));
        let h = Hypergraph::complete(3, 2).unwrap();
        let sol = max_fractional_matching(&h).unwrap();
        assert_eq!(*sol.matching.size(), oracle);
        assert_eq!(*sol.cover.value(), oracle);
        for e in h.edges() {
            assert_eq!(sol.matching.weight_of(*e), ratio(1, 2));
        }
        assert!(sol.cover.potentials().iter().all(|p| *p == ratio(1, 2)));
    }

    #[test]
    fn complete_graphs_reach_n_over_k() {
        for (n, k) in [(6, 3), (7, 3), (5, 2), (8, 4), (7, 2)] {
            let h = Hypergraph::complete(n, k).unwrap();
            let sol = max_fractional_matching(&h).unwrap();
            assert_eq!(*sol.matching.size(), ratio(n as i64, k as i64));
            assert!(has_perfect_fractional_matching(&h).unwrap());
        }
    }

    #[test]
    fn empty_graph_has_no_perfect_fractional_matching() {
        let h = Hypergraph::empty(4, 2).unwrap();
        assert_eq!(*max_fractional_matching(&h).unwrap().matching.size(), int(0));
        assert!(!has_perfect_fractional_matching(&h).unwrap());
        assert!(has_perfect_fractional_matching(&Hypergraph::empty(0, 2).unwrap()).unwrap());
    }

    #[test]
    fn edge_cap_is_enforced() {
        let h = Hypergraph::complete(8, 3).unwrap();
        let caps = LpCaps {
            max_edges: 10,
            ..LpCaps::default()
        };
        assert!(matches!(
            max_fractional_matching_with(&h, caps),
            Err(Error::ResourceLimit { .. })
        ));
    }
}
