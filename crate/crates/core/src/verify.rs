//! The acceptance battery: each criterion recomputes its quantities from
//! scratch and reports pass or fail with a short detail line.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num::bigint::BigUint;
use num::One;
use serde::Serialize;

use crate::bounds::{
    compare_bounds, emc_conjecture_bound, emc_main_bound, frankl_linear_bound, g_coefficient, h_value,
};
use crate::constructions::{build_a_ks, build_a_n1s, build_g, enumerate_hext};
use crate::emc::{emc_extremal_search, is_stable, stabilize, verify_shadow_theorem};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::interval::Precision;
use crate::random::{random_family, random_shape_family, rng};
use crate::rational::{approx, half, int, ratio, Rational};
use crate::solve::{has_perfect_matching, matching_number, max_fractional_matching};
use crate::thresholds::{brute_f_d, replay_fractional_chain};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Profile {
    Quick,
    Full,
}

impl FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "quick" => Ok(Profile::Quick),
            "full" => Ok(Profile::Full),
            _ => Err(Error::invalid(format!("unknown profile '{s}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriterionResult {
    pub id: &'static str,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{mark} {:<6} {:<28} {}", self.id, self.title, self.detail)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub profile: Profile,
    pub seed: u64,
    pub results: Vec<CriterionResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u128>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    /// One line per criterion.
    pub fn matrix(&self) -> String {
        let mut out = String::new();
        for r in &self.results {
            out.push_str(&r.to_string());
            out.push('\n');
        }
        let ok = self.results.iter().filter(|r| r.passed).count();
        out.push_str(&format!("{ok}/{} criteria passed\n", self.results.len()));
        out
    }
}

pub const CRITERIA: [&str; 10] = [
    "AC-1", "AC-2", "AC-3", "AC-4", "AC-5", "AC-6", "AC-7", "AC-8", "AC-9", "AC-10",
];

pub const DEFAULT_SEED: u64 = 2024;

struct Ctx {
    profile: Profile,
    seed: u64,
    node_cap: u64,
}

impl Ctx {
    fn trials(&self, full: usize) -> usize {
        match self.profile {
            Profile::Full => full,
            Profile::Quick => (full / 5).max(1),
        }
    }
}

/// Runs the whole battery in order.
pub fn verify_suite(profile: Profile, seed: u64, timed: bool) -> SuiteReport {
    let start = Instant::now();
    let results = CRITERIA
        .iter()
        .map(|id| run_criterion(id, profile, seed).expect("known id"))
        .collect();
    SuiteReport {
        profile,
        seed,
        results,
        wall_ms: timed.then(|| start.elapsed().as_millis()),
    }
}

/// Runs one criterion by id, e.g. `"AC-5"`.
pub fn run_criterion(id: &str, profile: Profile, seed: u64) -> Result<CriterionResult> {
    let ctx = Ctx {
        profile,
        seed,
        node_cap: crate::default_node_budget(),
    };
    let (title, outcome): (&'static str, Result<(bool, String)>) = match id {
        "AC-1" => ("g below one half", ac1()),
        "AC-2" => ("h certified and monotone", ac2()),
        "AC-3" => ("bound crossover", ac3()),
        "AC-4" => ("constructions PM-free", ac4()),
        "AC-5" => ("fractional exact result", ac5(&ctx)),
        "AC-6" => ("EMC desk scale", ac6(&ctx)),
        "AC-7" => ("shadow theorem", ac7(&ctx)),
        "AC-8" => ("stability machinery", ac8(&ctx)),
        "AC-9" => ("LP duality", ac9(&ctx)),
        "AC-10" => ("finite-n replay", ac10()),
        _ => return Err(Error::invalid(format!("unknown criterion '{id}'"))),
    };
    let id = CRITERIA.iter().find(|c| **c == id).copied().expect("matched above");
    let (passed, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    Ok(CriterionResult {
        id,
        title,
        passed,
        detail,
    })
}

fn ac1() -> Result<(bool, String)> {
    let mut pairs = vec![(12, 5), (17, 7)];
    for k in 3..=200usize {
        // 0.42k <= d < k/2
        pairs.extend((1..k).filter(|&d| 50 * d >= 21 * k && 2 * d < k).map(|d| (k, d)));
    }
    let mut bad = Vec::new();
    for &(k, d) in &pairs {
        if g_coefficient(k, d)? >= half() {
            bad.push(format!("({k},{d})"));
        }
    }
    Ok((
        bad.is_empty(),
        format!("{} pairs checked, failures: [{}]", pairs.len(), bad.join(", ")),
    ))
}

fn ac2() -> Result<(bool, String)> {
    let prec = Precision::default();
    let point = h_value(20, &ratio(21, 50), prec)?;
    let below = point.certainly_less(&crate::interval::Interval::point(half()))?;
    let xs: Vec<Rational> = (26..=49).map(|c| ratio(c, 100)).collect();
    let grid: Vec<Vec<_>> = (2..=60usize)
        .map(|k| xs.iter().map(|x| h_value(k, x, prec)).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    let mut violations = 0usize;
    for (ki, row) in grid.iter().enumerate() {
        for xi in 0..row.len() {
            if xi + 1 < row.len() && !row[xi + 1].certainly_less(&row[xi])? {
                violations += 1;
            }
            if ki + 1 < grid.len() && !grid[ki + 1][xi].certainly_less(&row[xi])? {
                violations += 1;
            }
        }
    }
    Ok((
        below && violations == 0,
        format!(
            "h(20,21/50) in [{:.6}, {:.6}], grid violations {violations}",
            approx(point.lo()),
            approx(point.hi())
        ),
    ))
}

fn ac3() -> Result<(bool, String)> {
    let large = compare_bounds(100, 42)?;
    let small = compare_bounds(5, 1)?;
    let ok_large = large.g < large.koto;
    let ok_small = small.koto < small.g;
    Ok((
        ok_large && ok_small,
        format!(
            "(100,42): {} [{}]; (5,1): {} [{}], koto = {}, g = {}",
            large.order,
            if ok_large { "ok" } else { "fail" },
            small.order,
            if ok_small { "ok" } else { "fail" },
            small.koto,
            small.g
        ),
    ))
}

fn ac4() -> Result<(bool, String)> {
    let shapes = [(4, 2), (6, 2), (8, 2), (6, 3), (9, 3), (8, 4), (12, 3), (12, 4)];
    let mut checked = 0usize;
    let mut bad = Vec::new();
    for (n, k) in shapes {
        let mut family: Vec<(String, Hypergraph)> = enumerate_hext(n, k)?.map(|(m, h)| (format!("{m:?}"), h)).collect();
        family.push((format!("G({})", n / k - 1), build_g(n, k, n / k - 1)?));
        for (name, h) in family {
            checked += 1;
            if has_perfect_matching(&h)?.is_some() {
                bad.push(format!("({n},{k}) {name}"));
            }
        }
    }
    Ok((
        bad.is_empty(),
        format!("{checked} families, with perfect matching: [{}]", bad.join(", ")),
    ))
}

fn ac5(ctx: &Ctx) -> Result<(bool, String)> {
    let exhaustive = ctx.profile == Profile::Full;
    let r = brute_f_d(6, 3, 2, &int(2), exhaustive, ctx.node_cap)?;
    Ok((
        r.value == 2 && r.lp_sandwich_ok,
        format!(
            "f = {} via {:?} scan, {} nodes, {} LPs",
            r.value, r.mode, r.nodes, r.lp_solves
        ),
    ))
}

const AC6_CASES: [(usize, usize, usize, bool); 9] = [
    (5, 2, 1, true),
    (6, 2, 1, true),
    (6, 2, 2, true),
    (7, 2, 2, true),
    (5, 3, 1, true),
    (6, 3, 1, true),
    (7, 3, 1, true),
    (8, 3, 1, true),
    (9, 3, 2, false),
];

fn legal_alphas(n: usize, k: usize, s: usize) -> Vec<Rational> {
    let top = int(2) - ratio(1, k as i64);
    (1..=8)
        .map(|i| Rational::one() + (&top - Rational::one()) * ratio(i, 8))
        .filter(|a| int(n as i64) >= a * int((k * (s + 1)) as i64) + int(k as i64 - 1))
        .collect()
}

fn ac6(ctx: &Ctx) -> Result<(bool, String)> {
    let mut notes = Vec::new();
    for (n, k, s, _) in AC6_CASES {
        let r = emc_extremal_search(n, k, s, true, ctx.node_cap)?;
        let v = BigUint::from(r.value);
        if v != emc_conjecture_bound(n, k, s)? {
            notes.push(format!("({n},{k},{s}) {} != conjecture", r.value));
        }
        for a in legal_alphas(n, k, s) {
            if v > emc_main_bound(n, k, s, &a)? {
                notes.push(format!("({n},{k},{s}) exceeds main bound at alpha {a}"));
            }
        }
        let linear = frankl_linear_bound(n, k, s)?;
        if v > linear {
            notes.push(format!("({n},{k},{s}) {} > linear bound {linear}", r.value));
        }
    }
    Ok((
        notes.is_empty(),
        format!("{} instances, violations: [{}]", AC6_CASES.len(), notes.join("; ")),
    ))
}

fn constructions() -> Result<Vec<Hypergraph>> {
    let mut all = vec![
        build_a_ks(3, 2, 9)?,
        build_a_ks(2, 2, 6)?,
        build_a_n1s(8, 3, 2)?,
        build_a_n1s(10, 4, 1)?,
        build_g(9, 3, 2)?,
        build_g(12, 4, 2)?,
    ];
    for (n, k) in [(8, 4), (9, 3), (6, 2)] {
        all.extend(enumerate_hext(n, k)?.map(|(_, h)| h));
    }
    Ok(all)
}

fn ac7(ctx: &Ctx) -> Result<(bool, String)> {
    let mut r = rng(ctx.seed);
    let trials = ctx.trials(1000);
    let mut failures = 0usize;
    for _ in 0..trials {
        let f = random_shape_family(&mut r, 10, 4);
        if !verify_shadow_theorem(&f)?.holds {
            failures += 1;
        }
    }
    let built = constructions()?;
    for f in built.iter().filter(|f| !f.is_empty()) {
        if !verify_shadow_theorem(f)?.holds {
            failures += 1;
        }
    }
    Ok((
        failures == 0,
        format!("{trials} random + {} constructions, failures {failures}", built.len()),
    ))
}

fn ac8(ctx: &Ctx) -> Result<(bool, String)> {
    let mut r = rng(ctx.seed);
    let trials = ctx.trials(500);
    let mut failures = 0usize;
    for _ in 0..trials {
        let f = random_shape_family(&mut r, 9, 3);
        let g = stabilize(&f);
        if !(is_stable(&g) && stabilize(&g) == g && g.len() == f.len() && matching_number(&g) <= matching_number(&f)) {
            failures += 1;
        }
    }
    let mut compared = 0usize;
    let mut disagree = Vec::new();
    for (n, k, s, _) in AC6_CASES.iter().copied().filter(|c| c.3) {
        let stable = emc_extremal_search(n, k, s, true, ctx.node_cap)?;
        if let Ok(full) = emc_extremal_search(n, k, s, false, ctx.node_cap) {
            compared += 1;
            if full.value != stable.value {
                disagree.push(format!("({n},{k},{s})"));
            }
        }
    }
    Ok((
        failures == 0 && disagree.is_empty(),
        format!(
            "{trials} families, failures {failures}; {compared} searches compared, disagreements: [{}]",
            disagree.join(", ")
        ),
    ))
}

/// Solves the LP (certificate checked inside) and tests `ν <= ν* <= n/k`.
fn sandwich(h: &Hypergraph) -> Result<bool> {
    let sol = max_fractional_matching(h)?;
    let size = sol.matching.size();
    Ok(int(matching_number(h) as i64) <= *size && *size <= ratio(h.n() as i64, h.k() as i64))
}

fn ac9(ctx: &Ctx) -> Result<(bool, String)> {
    let mut solved = 0u64;
    let mut failures = 0usize;
    let r5 = brute_f_d(6, 3, 2, &int(2), ctx.profile == Profile::Full, ctx.node_cap)?;
    solved += r5.lp_solves;
    if !r5.lp_sandwich_ok {
        failures += 1;
    }
    for (n, k, s, _) in AC6_CASES {
        let r = emc_extremal_search(n, k, s, true, ctx.node_cap)?;
        solved += 1;
        if !sandwich(&r.witness)? {
            failures += 1;
        }
    }
    let mut rg = rng(ctx.seed ^ 0x9e37_79b9);
    for i in 0..200usize {
        let (n, k) = [(6, 2), (7, 3), (8, 3), (8, 4), (9, 3)][i % 5];
        let h = random_family(&mut rg, n, k, 0.3);
        solved += 1;
        if !sandwich(&h)? {
            failures += 1;
        }
    }
    Ok((
        failures == 0,
        format!("{solved} certified LPs, sandwich failures {failures}"),
    ))
}

fn ac10() -> Result<(bool, String)> {
    let reports = [60, 120, 300].map(|n| replay_fractional_chain(n, 5, 2));
    let mut residuals = Vec::new();
    let mut hyp = true;
    for r in reports {
        let r = r?;
        hyp &=
            r.check("alpha_range").is_some_and(|c| c.holds) && r.check("n_over_k_le_s_plus_3").is_some_and(|c| c.holds);
        let res = r
            .residual
            .ok_or_else(|| Error::invalid(format!("no bound at n = {}", r.n)))?;
        residuals.push(num::Signed::abs(&res));
    }
    let shrinks = residuals.windows(2).all(|w| w[1] < w[0]);
    let shown: Vec<String> = residuals.iter().map(|r| format!("{:.5}", approx(r))).collect();
    Ok((
        hyp && shrinks,
        format!("|residual| at n = 60, 120, 300: {}", shown.join(", ")),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_parse() {
        assert_eq!("quick".parse::<Profile>().unwrap(), Profile::Quick);
        assert_eq!("FULL".parse::<Profile>().unwrap(), Profile::Full);
        assert!("slow".parse::<Profile>().is_err());
    }

    #[test]
    fn unknown_criterion() {
        assert!(run_criterion("AC-11", Profile::Quick, 1).is_err());
    }

    #[test]
    fn fast_criteria() {
        for id in ["AC-1", "AC-10"] {
            assert!(run_criterion(id, Profile::Quick, 1).unwrap().passed);
        }
    }
}
