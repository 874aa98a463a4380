//! Closed-form threshold coefficients and cardinality bounds.
//!
//! Coefficients that are rational for integer inputs are computed exactly.
//! Expressions with a non-integer exponent or a factor of `e` come back as
//! certified [`Interval`]s. Thresholds round up and cardinality caps round
//! down.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num::bigint::BigUint;
use num::{One, Signed, Zero};
use serde::Serialize;

use crate::binomial::binomial;
use crate::constructions::delta_ext;
use crate::error::{ensure, Error, Result};
use crate::interval::{self, Interval, Precision};
use crate::rational::{ceil_nonneg, floor_nonneg, from_biguint, half, int, ratio, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FormulaId {
    ConjLower,
    Koto,
    GKd,
    HKx,
    GLimit,
    EmcMain,
    EmcConj,
    FranklLinear,
    TrzhCombine,
}

impl FormulaId {
    pub const ALL: [FormulaId; 9] = [
        FormulaId::ConjLower,
        FormulaId::Koto,
        FormulaId::GKd,
        FormulaId::HKx,
        FormulaId::GLimit,
        FormulaId::EmcMain,
        FormulaId::EmcConj,
        FormulaId::FranklLinear,
        FormulaId::TrzhCombine,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FormulaId::ConjLower => "CONJ_LOWER",
            FormulaId::Koto => "KOTO",
            FormulaId::GKd => "G_KD",
            FormulaId::HKx => "H_KX",
            FormulaId::GLimit => "G_LIMIT",
            FormulaId::EmcMain => "EMC_MAIN",
            FormulaId::EmcConj => "EMC_CONJ",
            FormulaId::FranklLinear => "FRANKL_LINEAR",
            FormulaId::TrzhCombine => "TRZH_COMBINE",
        }
    }
}

impl fmt::Display for FormulaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FormulaId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let wanted = s.trim().to_ascii_uppercase().replace('-', "_");
        let short = match wanted.as_str() {
            "G" => Some(FormulaId::GKd),
            "H" => Some(FormulaId::HKx),
            "CONJ" => Some(FormulaId::ConjLower),
            "EMC" => Some(FormulaId::EmcMain),
            "FRANKL" => Some(FormulaId::FranklLinear),
            "TRZH" => Some(FormulaId::TrzhCombine),
            _ => None,
        };
        short
            .or_else(|| FormulaId::ALL.into_iter().find(|f| f.name() == wanted))
            .ok_or_else(|| Error::invalid(format!("unknown formula '{s}'")))
    }
}

/// Inputs accepted by [`evaluate`]. Each formula reads the fields it needs.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BoundParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<usize>,
    #[serde(
        skip_serializing_if = "Option::is_none",
        serialize_with = "crate::report::opt_rational"
    )]
    pub alpha: Option<Rational>,
    #[serde(
        skip_serializing_if = "Option::is_none",
        serialize_with = "crate::report::opt_rational"
    )]
    pub x: Option<Rational>,
}

impl BoundParams {
    fn need<T: Clone>(v: &Option<T>, name: &str, id: FormulaId) -> Result<T> {
        v.clone()
            .ok_or_else(|| Error::invalid(format!("{id} needs parameter {name}")))
    }
}

/// One evaluated formula.
///
/// `coefficient` is the fraction of `C(n-d,k-d)` for threshold formulas and
/// of `C(n,k)` for cardinality bounds. For interval-valued formulas it is the
/// midpoint of `enclosure`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundValue {
    pub formula_id: FormulaId,
    pub params: BoundParams,
    #[serde(serialize_with = "crate::report::rational")]
    pub coefficient: Rational,
    #[serde(serialize_with = "crate::report::opt_biguint_str")]
    pub absolute: Option<BigUint>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub enclosure: Option<Interval>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

fn check_kd(k: usize, d: usize) -> Result<()> {
    ensure!(k >= 1, "k must be at least 1");
    ensure!(d >= 1 && d < k, "need 1 <= d <= k-1, got d = {d}, k = {k}");
    Ok(())
}

fn check_half_range(k: usize, d: usize) -> Result<()> {
    ensure!(d >= 1 && 2 * d < k, "need 1 <= d < k/2, got d = {d}, k = {k}");
    Ok(())
}

/// `(1 - 1/k)^e` exactly.
fn one_minus_recip_pow(k: usize, e: usize) -> Rational {
    num::pow(ratio(k as i64 - 1, k as i64), e)
}

/// `max{1/2, 1 - (1-1/k)^(k-d)}`.
pub fn conjecture_coefficient(k: usize, d: usize) -> Result<Rational> {
    check_kd(k, d)?;
    let g_branch = Rational::one() - one_minus_recip_pow(k, k - d);
    Ok(g_branch.max(half()))
}

/// `(k-d)/k - (k-d-1)/k^(k-d)`.
pub fn koto_coefficient(k: usize, d: usize) -> Result<Rational> {
    check_half_range(k, d)?;
    let kd = (k - d) as i64;
    let power = num::pow(num::BigInt::from(k), k - d);
    Ok(ratio(kd, k as i64) - Rational::new(num::BigInt::from(kd - 1), power))
}

/// `1 - (1 - (k-d)(k-2d-1)/(k-1)^2) (1-1/k)^(k-d)`.
pub fn g_coefficient(k: usize, d: usize) -> Result<Rational> {
    ensure!(k >= 3, "k must be at least 3, got {k}");
    check_half_range(k, d)?;
    let (k, d) = (k as i64, d as i64);
    let inner = Rational::one() - ratio((k - d) * (k - 2 * d - 1), (k - 1) * (k - 1));
    Ok(Rational::one() - inner * one_minus_recip_pow(k as usize, (k - d) as usize))
}

/// `1 - (3x - 2x^2) (1-1/k)^((1-x)k)` as a certified interval.
pub fn h_value(k: usize, x: &Rational, prec: Precision) -> Result<Interval> {
    ensure!(k >= 2, "k must be at least 2, got {k}");
    ensure!(*x > ratio(1, 4) && *x < half(), "x must lie in (1/4, 1/2), got {x}");
    let factor = x * int(3) - x * x * int(2);
    let exponent = (Rational::one() - x) * int(k as i64);
    let power = interval::pow(&ratio(k as i64 - 1, k as i64), &exponent, prec)?;
    Ok(one_minus(&power.scale(&factor)))
}

fn one_minus(iv: &Interval) -> Interval {
    Interval::point(Rational::one()).sub(iv)
}

/// `g(x) = 1 - (3x - 2x^2) e^(x-1)` and the cap `1 - 3x/e`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GLimit {
    pub value: Interval,
    pub cap: Interval,
}

/// Certified `g(x)` for `x` in `(0, 1/2)`. Fails if the cap
/// `g(x) <= 1 - 3x/e` is violated or cannot be decided.
pub fn g_limit(x: &Rational, prec: Precision) -> Result<GLimit> {
    ensure!(x.is_positive() && *x < half(), "x must lie in (0, 1/2), got {x}");
    let factor = x * int(3) - x * x * int(2);
    let value = one_minus(&interval::exp(&(x - Rational::one()), prec).scale(&factor));
    let inv_e = interval::exp(&int(-1), prec);
    let cap = one_minus(&inv_e.scale(&(x * int(3))));
    if value.hi() <= cap.lo() {
        Ok(GLimit { value, cap })
    } else if value.lo() > cap.hi() {
        Err(Error::invalid(format!("cap g(x) <= 1 - 3x/e fails at x = {x}")))
    } else {
        Err(Error::Indeterminate(format!("cap comparison at x = {x}")))
    }
}

/// Exact value of the main Erdős-matching bound before flooring.
pub fn emc_main_exact(n: usize, k: usize, s: usize, alpha: &Rational) -> Result<Rational> {
    ensure!(k >= 1, "k must be at least 1");
    let upper = int(2) - ratio(1, k as i64);
    ensure!(
        *alpha > Rational::one() && *alpha <= upper,
        "alpha must lie in (1, 2-1/k], got {alpha}"
    );
    let kk = int(k as i64);
    let need = alpha * &kk * int(s as i64 + 1) + int(k as i64 - 1);
    ensure!(
        int(n as i64) >= need,
        "need n >= alpha*k*(s+1) + k - 1 = {need}, got n = {n}"
    );
    let (nu, su) = (n as u64, s as i64);
    let base = from_biguint(&binomial(nu, k as i64)) - from_biguint(&binomial(nu - s as u64, k as i64));
    let coeff = ((int(2) - alpha) * &kk - Rational::one()) / (alpha * &kk - Rational::one());
    let tail = from_biguint(&binomial(nu - s as u64 - 1, k as i64 - 1)) * int(su);
    Ok(base + coeff * tail)
}

/// `C(n,k) - C(n-s,k) + ((2-α)k-1)/(αk-1) · s · C(n-s-1,k-1)`, floored.
pub fn emc_main_bound(n: usize, k: usize, s: usize, alpha: &Rational) -> Result<BigUint> {
    Ok(floor_nonneg(&emc_main_exact(n, k, s, alpha)?))
}

/// `s · C(n-1,k-1)`.
pub fn frankl_linear_bound(n: usize, k: usize, s: usize) -> Result<BigUint> {
    ensure!(k >= 1 && n >= k, "need n >= k >= 1, got n = {n}, k = {k}");
    Ok(binomial(n as u64 - 1, k as i64 - 1) * BigUint::from(s))
}

/// `max{C(k(s+1)-1, k), C(n,k) - C(n-s,k)}`.
pub fn emc_conjecture_bound(n: usize, k: usize, s: usize) -> Result<BigUint> {
    ensure!(k >= 1, "k must be at least 1");
    let floor_n = k * (s + 1) - 1;
    ensure!(n >= floor_n, "need n >= k(s+1) - 1 = {floor_n}, got n = {n}");
    let clique = binomial(floor_n as u64, k as i64);
    let star = binomial(n as u64, k as i64) - binomial((n - s) as u64, k as i64);
    Ok(clique.max(star))
}

pub const O1_OMITTED: &str = "o(1) omitted: finite-n evaluation of an asymptotic bound";

/// `max{δ(n,k,d)+1, ceil(c · C(n-d,k-d))}` with both branches kept.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CombinedThreshold {
    #[serde(serialize_with = "crate::report::rational")]
    pub coefficient: Rational,
    #[serde(serialize_with = "crate::report::biguint_str")]
    pub delta_branch: BigUint,
    #[serde(serialize_with = "crate::report::biguint_str")]
    pub coefficient_branch: BigUint,
    #[serde(serialize_with = "crate::report::biguint_str")]
    pub value: BigUint,
    pub note: &'static str,
}

pub fn trzh_combine(n: usize, k: usize, d: usize, c: &Rational) -> Result<CombinedThreshold> {
    ensure!(k >= 1 && n.is_multiple_of(k), "k = {k} must divide n = {n}");
    ensure!(d < k, "need d < k, got d = {d}");
    ensure!(
        !c.is_negative() && *c <= Rational::one(),
        "coefficient must lie in [0, 1], got {c}"
    );
    let delta_branch = delta_ext(n, k, d)?.value + BigUint::one();
    let scale = binomial((n - d) as u64, (k - d) as i64);
    let coefficient_branch = ceil_nonneg(&(c * from_biguint(&scale)));
    let value = delta_branch.clone().max(coefficient_branch.clone());
    Ok(CombinedThreshold {
        coefficient: c.clone(),
        delta_branch,
        coefficient_branch,
        value,
        note: O1_OMITTED,
    })
}

/// The combined threshold with `c = g(k,d)`.
pub fn combined_threshold(n: usize, k: usize, d: usize) -> Result<CombinedThreshold> {
    ensure!(k >= 1 && n.is_multiple_of(k), "k = {k} must divide n = {n}");
    let g = g_coefficient(k, d)?;
    trzh_combine(n, k, d, &g)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Winner {
    /// The `(k-d)/k - ...` coefficient is strictly smaller.
    Koto,
    /// `g(k,d)` is strictly smaller.
    G,
    Tie,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub k: usize,
    pub d: usize,
    #[serde(serialize_with = "crate::report::rational")]
    pub g: Rational,
    #[serde(serialize_with = "crate::report::rational")]
    pub koto: Rational,
    #[serde(serialize_with = "crate::report::rational")]
    pub conjecture: Rational,
    /// Ascending, with `=` between tied formulas.
    pub order: String,
    pub winner: Winner,
}

pub fn compare_bounds(k: usize, d: usize) -> Result<BoundReport> {
    let g = g_coefficient(k, d)?;
    let koto = koto_coefficient(k, d)?;
    let conjecture = conjecture_coefficient(k, d)?;
    let mut ranked = [
        (FormulaId::GKd, &g),
        (FormulaId::Koto, &koto),
        (FormulaId::ConjLower, &conjecture),
    ];
    ranked.sort_by(|a, b| a.1.cmp(b.1).then(a.0.cmp(&b.0)));
    let mut order = ranked[0].0.name().to_string();
    for w in ranked.windows(2) {
        let sep = if w[0].1 == w[1].1 { " = " } else { " < " };
        order.push_str(sep);
        order.push_str(w[1].0.name());
    }
    let winner = match g.cmp(&koto) {
        Ordering::Less => Winner::G,
        Ordering::Greater => Winner::Koto,
        Ordering::Equal => Winner::Tie,
    };
    Ok(BoundReport {
        k,
        d,
        g: g.clone(),
        koto: koto.clone(),
        conjecture: conjecture.clone(),
        order,
        winner,
    })
}

/// Evaluates one formula by id.
pub fn evaluate(id: FormulaId, params: &BoundParams, prec: Precision) -> Result<BoundValue> {
    let p = params;
    let need_k = || BoundParams::need(&p.k, "k", id);
    let need_d = || BoundParams::need(&p.d, "d", id);
    let need_n = || BoundParams::need(&p.n, "n", id);
    let need_s = || BoundParams::need(&p.s, "s", id);
    let need_x = || BoundParams::need(&p.x, "x", id);
    let mut notes = Vec::new();
    let mut enclosure = None;
    let (coefficient, absolute) = match id {
        FormulaId::ConjLower | FormulaId::Koto | FormulaId::GKd => {
            let (k, d) = (need_k()?, need_d()?);
            let c = match id {
                FormulaId::ConjLower => conjecture_coefficient(k, d)?,
                FormulaId::Koto => koto_coefficient(k, d)?,
                _ => g_coefficient(k, d)?,
            };
            let abs = match p.n {
                Some(n) => {
                    ensure!(n >= k, "need n >= k, got n = {n}");
                    notes.push(O1_OMITTED.to_string());
                    let scale = binomial((n - d) as u64, (k - d) as i64);
                    Some(ceil_nonneg(&(&c * from_biguint(&scale))))
                }
                None => None,
            };
            (c, abs)
        }
        FormulaId::HKx => {
            let iv = h_value(need_k()?, &need_x()?, prec)?;
            let mid = iv.midpoint();
            enclosure = Some(iv);
            (mid, None)
        }
        FormulaId::GLimit => {
            let gl = g_limit(&need_x()?, prec)?;
            notes.push("cap g(x) <= 1 - 3x/e verified".to_string());
            let mid = gl.value.midpoint();
            enclosure = Some(gl.value);
            (mid, None)
        }
        FormulaId::EmcMain | FormulaId::EmcConj | FormulaId::FranklLinear => {
            let (n, k, s) = (need_n()?, need_k()?, need_s()?);
            let abs = match id {
                FormulaId::EmcMain => emc_main_bound(n, k, s, &BoundParams::need(&p.alpha, "alpha", id)?)?,
                FormulaId::EmcConj => emc_conjecture_bound(n, k, s)?,
                _ => frankl_linear_bound(n, k, s)?,
            };
            let total = binomial(n as u64, k as i64);
            let c = if total.is_zero() {
                Rational::zero()
            } else {
                from_biguint(&abs) / from_biguint(&total)
            };
            (c, Some(abs))
        }
        FormulaId::TrzhCombine => {
            let t = combined_threshold(need_n()?, need_k()?, need_d()?)?;
            notes.push(t.note.to_string());
            notes.push(format!(
                "delta branch {}, g branch {}",
                t.delta_branch, t.coefficient_branch
            ));
            (t.coefficient, Some(t.value))
        }
    };
    Ok(BoundValue {
        formula_id: id,
        params: params.clone(),
        coefficient,
        absolute,
        enclosure,
        notes,
    })
}

/// How `d` is chosen for each `k` in a table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DRule {
    /// Every `d` with `1 <= d < k/2`.
    All,
    Fixed(usize),
    /// Every `d` with `x·k <= d < k/2`.
    AtLeast(Rational),
}

impl FromStr for DRule {
    type Err = Error;

    /// `all`, `fixed:<d>` or `min-ratio:<x>`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "all" {
            return Ok(DRule::All);
        }
        if let Some(v) = s.strip_prefix("fixed:") {
            let d = v.parse().map_err(|_| Error::invalid(format!("bad d in '{s}'")))?;
            return Ok(DRule::Fixed(d));
        }
        if let Some(v) = s.strip_prefix("min-ratio:") {
            return Ok(DRule::AtLeast(crate::rational::parse_rational(v)?));
        }
        Err(Error::invalid(format!(
            "unknown d rule '{s}' (expected all, fixed:<d>, min-ratio:<x>)"
        )))
    }
}

impl DRule {
    pub fn values(&self, k: usize) -> Vec<usize> {
        let legal = (1..k).filter(|d| 2 * d < k);
        match self {
            DRule::All => legal.collect(),
            DRule::Fixed(d) => legal.filter(|v| v == d).collect(),
            DRule::AtLeast(x) => legal.filter(|&d| int(d as i64) >= x * int(k as i64)).collect(),
        }
    }
}

/// Rows for `CONJ_LOWER`, `KOTO` and `G_KD` over a range of `k`.
pub fn bounds_table(ks: std::ops::RangeInclusive<usize>, rule: &DRule) -> Result<Vec<BoundValue>> {
    let mut rows = Vec::new();
    for k in ks.filter(|&k| k >= 3) {
        for d in rule.values(k) {
            let params = BoundParams {
                k: Some(k),
                d: Some(d),
                ..Default::default()
            };
            for id in [FormulaId::ConjLower, FormulaId::Koto, FormulaId::GKd] {
                rows.push(evaluate(id, &params, Precision::default())?);
            }
        }
    }
    Ok(rows)
}
