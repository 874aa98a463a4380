//! Brute-force degree thresholds at desk scale and a finite-n replay of the
//! reduction from fractional matchings to the main cardinality bound.

use std::cell::Cell;
use std::str::FromStr;

use num::bigint::BigUint;
use num::{Signed, Zero};
use serde::Serialize;

use crate::binomial::binomial;
use crate::bounds::{emc_main_bound, g_coefficient};
use crate::constructions::{build_g, delta_ext};
use crate::emc::emc_extremal_search;
use crate::error::{ensure, Error, Result};
use crate::hypergraph::{Hypergraph, VertexSet};
use crate::rational::{from_biguint, int, ratio, Rational};
use crate::search::{self, min_degree_masks, select};
use crate::solve::{masks_have_matching, matching_number, max_fractional_matching};

/// Largest `C(n,k)` scanned literally.
pub const EXHAUSTIVE_MAX_EDGES: usize = 24;
/// Largest `C(n,k)` accepted by the pruned searches.
pub const PRUNED_MAX_EDGES: usize = 500;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdKind {
    /// Minimum d-degree forcing a perfect matching.
    Md,
    /// Minimum d-degree forcing a fractional matching of size `s`.
    Fd,
    /// Edge count forcing a matching of size `s`.
    M0,
}

impl FromStr for ThresholdKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "md" | "m_d" => Ok(ThresholdKind::Md),
            "fd" | "f_d" => Ok(ThresholdKind::Fd),
            "m0" | "m0_s" => Ok(ThresholdKind::M0),
            _ => Err(Error::invalid(format!("unknown threshold kind '{s}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdMode {
    Trivial,
    Exhaustive,
    Pruned,
    Stable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThresholdReport {
    pub kind: ThresholdKind,
    pub n: usize,
    pub k: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(
        skip_serializing_if = "Option::is_none",
        serialize_with = "crate::report::opt_rational"
    )]
    pub s: Option<Rational>,
    /// The threshold itself: one more than the best score of a bad family.
    pub value: u64,
    /// Best min-degree (or size) among families without the target matching.
    pub extremal_score: u64,
    /// A family attaining `extremal_score`.
    pub witness: Hypergraph,
    pub mode: ThresholdMode,
    pub nodes: u64,
    pub lp_solves: u64,
    /// `ν <= ν* <= n/k` held on every LP solved.
    pub lp_sandwich_ok: bool,
}

/// Shared search plumbing for the degree thresholds.
struct Degrees {
    n: usize,
    k: usize,
    d: usize,
    universe: Vec<u64>,
}

impl Degrees {
    fn new(n: usize, k: usize, d: usize, exhaustive: bool) -> Result<Self> {
        ensure!(k >= 1 && k <= n, "need 1 <= k <= n, got n = {n}, k = {k}");
        ensure!(d < k, "need d < k, got d = {d}, k = {k}");
        ensure!(n <= crate::MAX_VERTICES, "n = {n} exceeds {}", crate::MAX_VERTICES);
        let size = binomial(n as u64, k as i64);
        let cap = if exhaustive {
            EXHAUSTIVE_MAX_EDGES
        } else {
            PRUNED_MAX_EDGES
        };
        if size > BigUint::from(cap) {
            return Err(Error::limit(
                format!("C({n},{k}) = {size} exceeds the scan cap of {cap}"),
                None,
            ));
        }
        let universe = Hypergraph::complete(n, k)?.edges().iter().map(|e| e.mask()).collect();
        Ok(Degrees { n, k, d, universe })
    }

    /// Best `δ_d` over subfamilies with no witness.
    fn maximize(
        &self,
        exhaustive: bool,
        node_cap: u64,
        incumbent: Option<(u64, Vec<u64>)>,
        mut witness: impl FnMut(&[u64]) -> Result<Option<Vec<u64>>>,
    ) -> Result<(u64, Vec<u64>, u64, ThresholdMode)> {
        if exhaustive {
            let cells = search::degree_cells(self.n, self.d, &self.universe);
            let (value, mask, checks) = search::exhaustive(self.universe.len(), &cells, |m| {
                Ok(witness(&select(&self.universe, m))?.is_some())
            })?;
            Ok((value, select(&self.universe, mask), checks, ThresholdMode::Exhaustive))
        } else {
            let (n, d) = (self.n, self.d);
            let out = search::maximize(
                &self.universe,
                false,
                node_cap,
                incumbent,
                |f| min_degree_masks(n, d, f),
                witness,
            )?;
            Ok((out.value, out.family, out.nodes, ThresholdMode::Pruned))
        }
    }

    fn family(&self, masks: Vec<u64>) -> Hypergraph {
        Hypergraph::from_edges_unchecked(self.n, self.k, masks.into_iter().map(VertexSet::from_mask).collect())
    }
}

fn masks_of(h: &Hypergraph) -> Vec<u64> {
    h.edges().iter().map(|e| e.mask()).collect()
}

/// `m_d(k,n)`: one more than the best `δ_d` of a family with no perfect
/// matching.
pub fn brute_m_d(n: usize, k: usize, d: usize, exhaustive: bool, node_cap: u64) -> Result<ThresholdReport> {
    ensure!(k >= 1 && n.is_multiple_of(k), "k = {k} must divide n = {n}");
    let space = Degrees::new(n, k, d, exhaustive)?;
    let target = n / k;
    let mut incumbent: Option<(u64, Vec<u64>)> = None;
    if !exhaustive {
        // parity constructions and G(n/k - 1) have no perfect matching
        let mut seeds: Vec<Hypergraph> = delta_ext(n, k, d)?
            .argmax
            .iter()
            .map(|m| m.build(n, k))
            .collect::<Result<_>>()?;
        if target >= 1 {
            seeds.push(build_g(n, k, target - 1)?);
        }
        for h in seeds {
            let masks = masks_of(&h);
            debug_assert!(masks_have_matching(n, k, &masks, target).is_none());
            let score = min_degree_masks(n, d, &masks);
            if incumbent.as_ref().is_none_or(|b| score > b.0) {
                incumbent = Some((score, masks));
            }
        }
    }
    let (best, family, nodes, mode) = space.maximize(exhaustive, node_cap, incumbent, |f| {
        Ok(masks_have_matching(n, k, f, target))
    })?;
    Ok(ThresholdReport {
        kind: ThresholdKind::Md,
        n,
        k,
        d: Some(d),
        s: None,
        value: best + 1,
        extremal_score: best,
        witness: space.family(family),
        mode,
        nodes,
        lp_solves: 0,
        lp_sandwich_ok: true,
    })
}

/// `f_d^s(k,n)`: one more than the best `δ_d` of a family whose fractional
/// matching number is below `s`.
pub fn brute_f_d(
    n: usize,
    k: usize,
    d: usize,
    s: &Rational,
    exhaustive: bool,
    node_cap: u64,
) -> Result<ThresholdReport> {
    ensure!(!s.is_negative(), "s must be non-negative, got {s}");
    ensure!(
        k >= 1 && *s <= ratio(n as i64, k as i64),
        "s must be at most n/k, got {s}"
    );
    let space = Degrees::new(n, k, d, exhaustive)?;
    if s.is_zero() {
        return Ok(ThresholdReport {
            kind: ThresholdKind::Fd,
            n,
            k,
            d: Some(d),
            s: Some(s.clone()),
            value: 0,
            extremal_score: 0,
            witness: Hypergraph::empty(n, k)?,
            mode: ThresholdMode::Trivial,
            nodes: 0,
            lp_solves: 0,
            lp_sandwich_ok: true,
        });
    }
    let integral: usize = s
        .ceil()
        .to_integer()
        .try_into()
        .map_err(|_| Error::invalid("s out of range"))?;
    let lp_solves = Cell::new(0u64);
    let sandwich = Cell::new(true);
    let cap = ratio(n as i64, k as i64);
    let (best, family, nodes, mode) = space.maximize(exhaustive, node_cap, None, |f| {
        if let Some(m) = masks_have_matching(n, k, f, integral) {
            return Ok(Some(m));
        }
        let h = space.family(f.to_vec());
        let sol = max_fractional_matching(&h)?;
        lp_solves.set(lp_solves.get() + 1);
        let size = sol.matching.size();
        let nu = int(matching_number(&h) as i64);
        if !(nu <= *size && *size <= cap) {
            sandwich.set(false);
        }
        Ok((*size >= *s).then(|| sol.matching.weights().iter().map(|(e, _)| e.mask()).collect()))
    })?;
    Ok(ThresholdReport {
        kind: ThresholdKind::Fd,
        n,
        k,
        d: Some(d),
        s: Some(s.clone()),
        value: best + 1,
        extremal_score: best,
        witness: space.family(family),
        mode,
        nodes,
        lp_solves: lp_solves.get(),
        lp_sandwich_ok: sandwich.get(),
    })
}

/// `m_0^s(k,n)`: one more than the largest family with `ν <= s - 1`.
pub fn brute_m0_s(n: usize, k: usize, s: usize, stable: bool, node_cap: u64) -> Result<ThresholdReport> {
    ensure!(k >= 1 && k <= n, "need 1 <= k <= n, got n = {n}, k = {k}");
    ensure!(s * k <= n, "no matching of size {s} fits on {n} vertices");
    if s == 0 {
        return Ok(ThresholdReport {
            kind: ThresholdKind::M0,
            n,
            k,
            d: None,
            s: Some(int(0)),
            value: 0,
            extremal_score: 0,
            witness: Hypergraph::empty(n, k)?,
            mode: ThresholdMode::Trivial,
            nodes: 0,
            lp_solves: 0,
            lp_sandwich_ok: true,
        });
    }
    let r = emc_extremal_search(n, k, s - 1, stable, node_cap)?;
    let mode = match r.mode {
        crate::emc::SearchMode::Exhaustive => ThresholdMode::Exhaustive,
        crate::emc::SearchMode::Pruned => ThresholdMode::Pruned,
        crate::emc::SearchMode::Stable => ThresholdMode::Stable,
    };
    Ok(ThresholdReport {
        kind: ThresholdKind::M0,
        n,
        k,
        d: None,
        s: Some(int(s as i64)),
        value: r.value + 1,
        extremal_score: r.value,
        witness: r.witness,
        mode,
        nodes: r.nodes,
        lp_solves: 0,
        lp_sandwich_ok: true,
    })
}

/// A single query, as issued from the command line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThresholdQuery {
    pub kind: ThresholdKind,
    pub n: usize,
    pub k: usize,
    pub d: Option<usize>,
    pub s: Option<Rational>,
    pub exhaustive: bool,
    pub node_cap: u64,
}

impl ThresholdQuery {
    pub fn run(&self) -> Result<ThresholdReport> {
        let need_d = || self.d.ok_or_else(|| Error::invalid("this threshold needs d"));
        let need_s = || self.s.clone().ok_or_else(|| Error::invalid("this threshold needs s"));
        match self.kind {
            ThresholdKind::Md => brute_m_d(self.n, self.k, need_d()?, self.exhaustive, self.node_cap),
            ThresholdKind::Fd => brute_f_d(self.n, self.k, need_d()?, &need_s()?, self.exhaustive, self.node_cap),
            ThresholdKind::M0 => {
                let s = need_s()?;
                ensure!(
                    s.is_integer() && !s.is_negative(),
                    "s must be a non-negative integer, got {s}"
                );
                let s: usize = s
                    .to_integer()
                    .try_into()
                    .map_err(|_| Error::invalid("s out of range"))?;
                brute_m0_s(self.n, self.k, s, !self.exhaustive, self.node_cap)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub holds: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReplayReport {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub reduced_k: usize,
    pub reduced_n: usize,
    #[serde(serialize_with = "crate::report::rational")]
    pub alpha: Rational,
    pub s: usize,
    /// `emc_main_bound(n', k', s, α) + 1`, when its hypotheses hold.
    #[serde(serialize_with = "crate::report::opt_biguint_str")]
    pub matching_threshold: Option<BigUint>,
    #[serde(serialize_with = "crate::report::rational")]
    pub g: Rational,
    /// `g · C(n-d, k-d)`
    #[serde(serialize_with = "crate::report::rational")]
    pub target: Rational,
    /// `matching_threshold / C(n-d, k-d) - g`: the finite-n stand-in for o(1).
    #[serde(serialize_with = "crate::report::opt_rational")]
    pub residual: Option<Rational>,
    pub checks: Vec<Check>,
}

impl ReplayReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Recomputes the reduction chain at finite `n`: `k' = k-d`, `n' = n-d`,
/// `α = k/k'`, `s + 1 = floor((n' - k' + 1)/k)`.
pub fn replay_fractional_chain(n: usize, k: usize, d: usize) -> Result<ReplayReport> {
    let g = g_coefficient(k, d)?;
    let (kp, np) = (k - d, n.checked_sub(d).ok_or_else(|| Error::invalid("need n >= d"))?);
    ensure!(
        np + 1 >= kp + k,
        "n = {n} too small: s + 1 = floor((n'-k'+1)/k) must be at least 1"
    );
    let s = (np + 1 - kp) / k - 1;
    let alpha = ratio(k as i64, kp as i64);
    let mut checks = Vec::new();
    let top = int(2) - ratio(1, kp as i64);
    checks.push(Check {
        name: "alpha_range",
        holds: alpha > int(1) && alpha <= top,
        detail: format!("alpha = {alpha}, need 1 < alpha <= {top}"),
    });
    let need = &alpha * int((kp * (s + 1)) as i64) + int(kp as i64 - 1);
    checks.push(Check {
        name: "reduced_size",
        holds: int(np as i64) >= need,
        detail: format!("n' = {np}, need n' >= {need}"),
    });
    checks.push(Check {
        name: "n_over_k_le_s_plus_3",
        holds: n <= k * (s + 3),
        detail: format!("n/k = {}, s + 3 = {}", ratio(n as i64, k as i64), s + 3),
    });
    checks.push(Check {
        name: "fractional_reduction_shape",
        holds: n >= k && k >= 3 && d >= 1 && d + 2 <= k,
        detail: format!(
            "need n >= k >= 3 and 1 <= d <= k-2 with a = 1/k, target size n/k = {}",
            ratio(n as i64, k as i64)
        ),
    });
    if s > 0 {
        let frac = ratio((np - s) as i64, np as i64);
        let gap = (&frac - (int(1) - ratio(1, k as i64))).abs();
        let band = ratio(2, s as i64);
        checks.push(Check {
            name: "reduced_ratio_band",
            holds: gap < band,
            detail: format!("|(n'-s)/n' - (1-1/k)| = {gap}, band 2/s = {band}"),
        });
    }
    let scale = from_biguint(&binomial((n - d) as u64, (k - d) as i64));
    let matching_threshold = emc_main_bound(np, kp, s, &alpha).ok().map(|b| b + 1u32);
    let residual = matching_threshold.as_ref().map(|m| from_biguint(m) / &scale - &g);
    Ok(ReplayReport {
        n,
        k,
        d,
        reduced_k: kp,
        reduced_n: np,
        alpha,
        s,
        matching_threshold,
        target: &g * &scale,
        g,
        residual,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kinds_parse() {
        assert_eq!("md".parse::<ThresholdKind>().unwrap(), ThresholdKind::Md);
        assert_eq!("FD".parse::<ThresholdKind>().unwrap(), ThresholdKind::Fd);
        assert_eq!("m0".parse::<ThresholdKind>().unwrap(), ThresholdKind::M0);
        assert!("mx".parse::<ThresholdKind>().is_err());
    }

    #[test]
    fn trivial_cases() {
        let r = brute_f_d(6, 3, 1, &int(0), false, 10).unwrap();
        assert_eq!(r.value, 0);
        let r = brute_m0_s(6, 2, 0, true, 10).unwrap();
        assert_eq!(r.value, 0);
        assert!(brute_m_d(7, 3, 1, false, 10).is_err());
    }

    #[test]
    fn replay_small() {
        let r = replay_fractional_chain(60, 5, 2).unwrap();
        assert_eq!(r.s, 10);
        assert_eq!(r.alpha, ratio(5, 3));
        assert!(r.all_hold());
    }
}
