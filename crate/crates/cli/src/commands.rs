use std::fs;
use std::io::Read;
use std::path::Path;
use std::time::Instant;

use hypermatch::bounds::{bounds_table, compare_bounds, evaluate, BoundParams, DRule, FormulaId};
use hypermatch::constructions::{ConstructionSpec, Parity};
use hypermatch::emc::{
    check_nested_inequality, emc_extremal_search, emc_search_with_mode, verify_shadow_theorem, FamilySequence,
    SearchMode,
};
use hypermatch::hypergraph::parse_multi;
use hypermatch::interval::{Interval, Precision};
use hypermatch::rational::{approx, half, int, parse_rational, RationalRepr};
use hypermatch::solve::{has_perfect_matching, max_fractional_matching, max_matching};
use hypermatch::thresholds::{replay_fractional_chain, ThresholdKind, ThresholdQuery};
use hypermatch::verify::{run_criterion, verify_suite, Profile, SuiteReport, DEFAULT_SEED};
use hypermatch::{default_node_budget, Error, Hypergraph, Rational, Result, VertexSet};
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::*;
use crate::report::{render, Envelope};

pub struct Output {
    pub stdout: String,
    pub code: u8,
}

struct Ctx<'a> {
    cli: &'a Cli,
    args: &'a [String],
    start: Instant,
}

impl Ctx<'_> {
    fn finish(&self, mut env: Envelope, result: Value, text: String) -> Output {
        if self.cli.global.timed {
            env.wall_ms = Some(self.start.elapsed().as_millis());
        }
        let stdout = if self.cli.global.json {
            render(self.cli, self.args, &env, result)
        } else {
            match env.wall_ms {
                Some(ms) => format!("{text}# wall time {ms} ms\n"),
                None => text,
            }
        };
        Output { stdout, code: 0 }
    }

    /// Writes `h` to `--out` when given and records the path.
    fn witness(&self, env: &mut Envelope, h: &Hypergraph) -> Result<()> {
        if let Some(path) = &self.cli.global.out {
            fs::write(path, h.to_text())
                .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))?;
            env.witness_files.push(path.display().to_string());
        }
        Ok(())
    }
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn rat(q: &Rational) -> Value {
    to_json(&RationalRepr::from(q))
}

fn read_input(path: Option<&Path>) -> Result<String> {
    match path {
        Some(p) if p != Path::new("-") => {
            fs::read_to_string(p).map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", p.display())))
        }
        _ => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Error::InvalidInput(format!("cannot read stdin: {e}")))?;
            Ok(s)
        }
    }
}

fn read_hypergraph(path: Option<&Path>) -> Result<Hypergraph> {
    Hypergraph::parse_text(&read_input(path)?)
}

fn parse_q(text: &str, name: &str) -> Result<Rational> {
    parse_rational(text).map_err(|e| Error::InvalidInput(format!("--{name}: {e}")))
}

pub fn run(cli: &Cli, args: &[String]) -> Result<Output> {
    if cli.global.threads == 0 {
        return Err(Error::InvalidInput("--threads must be at least 1".into()));
    }
    let ctx = Ctx {
        cli,
        args,
        start: Instant::now(),
    };
    match &cli.command {
        Command::Construct(a) => construct(&ctx, a),
        Command::Bounds(BoundsCommand::Eval(a)) => bounds_eval(&ctx, a),
        Command::Bounds(BoundsCommand::Table(a)) => bounds_table_cmd(&ctx, a),
        Command::Bounds(BoundsCommand::Compare(a)) => bounds_compare(&ctx, a),
        Command::Solve(a) => solve(&ctx, a),
        Command::Emc(EmcCommand::Search(a)) => emc_search(&ctx, a),
        Command::Emc(EmcCommand::VerifyShadow(a)) => emc_shadow(&ctx, a),
        Command::Emc(EmcCommand::CheckNested(a)) => emc_nested(&ctx, a),
        Command::Threshold(a) => threshold(&ctx, a),
        Command::Replay(a) => replay(&ctx, a),
        Command::Verify(a) => verify(&ctx, a),
    }
}

fn construct(ctx: &Ctx, a: &ConstructArgs) -> Result<Output> {
    let need_s = || {
        a.s.ok_or_else(|| Error::InvalidInput("this construction needs --s".into()))
    };
    let (n, k) = (a.n, a.k);
    let spec = match a.kind {
        ConstructKind::G => ConstructionSpec::G { n, k, s: need_s()? },
        ConstructKind::Aks => ConstructionSpec::Aks { n, k, s: need_s()? },
        ConstructKind::An1s => ConstructionSpec::An1s { n, k, s: need_s()? },
        ConstructKind::Parity => ConstructionSpec::Parity {
            n,
            k,
            a: a.a
                .ok_or_else(|| Error::InvalidInput("parity construction needs --a".into()))?,
            parity: match a.parity {
                ParityArg::Odd => Parity::Odd,
                ParityArg::Even => Parity::Even,
            },
        },
    };
    let h = spec.build()?;
    let mut env = Envelope::new("construction");
    ctx.witness(&mut env, &h)?;
    let result = json!({ "spec": spec, "n": h.n(), "k": h.k(), "size": h.len(), "edges": h.edges() });
    Ok(ctx.finish(env, result, h.to_text()))
}

/// Whether a threshold coefficient sits strictly below one half; `None` when
/// an enclosure straddles it.
fn lt_half(coefficient: &Rational, enclosure: Option<&Interval>) -> Option<bool> {
    match enclosure {
        Some(iv) => iv.compare(&half()).ok().map(|o| o.is_lt()),
        None => Some(*coefficient < half()),
    }
}

fn bounds_eval(ctx: &Ctx, a: &EvalArgs) -> Result<Output> {
    let id: FormulaId = a.formula.parse()?;
    let params = BoundParams {
        n: a.n,
        k: a.k,
        d: a.d,
        s: a.s,
        alpha: a.alpha.as_deref().map(|t| parse_q(t, "alpha")).transpose()?,
        x: a.x.as_deref().map(|t| parse_q(t, "x")).transpose()?,
    };
    if a.bits < 16 {
        return Err(Error::InvalidInput("--bits must be at least 16".into()));
    }
    let v = evaluate(id, &params, Precision::new(a.bits))?;
    let coefficient_kind = matches!(
        id,
        FormulaId::ConjLower | FormulaId::Koto | FormulaId::GKd | FormulaId::HKx | FormulaId::GLimit
    );
    let below = coefficient_kind
        .then(|| lt_half(&v.coefficient, v.enclosure.as_ref()))
        .flatten();
    let mut result = to_json(&v);
    if coefficient_kind {
        result["lt_half"] = json!(below);
    }
    let mut text = format!(
        "{} = {} (~{:.8})\n",
        v.formula_id,
        v.coefficient,
        approx(&v.coefficient)
    );
    if let Some(iv) = &v.enclosure {
        text += &format!("enclosure [{}, {}]\n", iv.lo(), iv.hi());
    }
    if let Some(abs) = &v.absolute {
        text += &format!("absolute {abs}\n");
    }
    if coefficient_kind {
        let shown = below.map_or("undecided".to_string(), |b| b.to_string());
        text += &format!("below 1/2: {shown}\n");
    }
    for note in &v.notes {
        text += &format!("note: {note}\n");
    }
    Ok(ctx.finish(Envelope::new(v.formula_id.name()), result, text))
}

fn parse_range(text: &str) -> Result<std::ops::RangeInclusive<usize>> {
    let bad = || Error::InvalidInput(format!("bad range '{text}', expected e.g. 3..12"));
    let (lo, hi) = text
        .split_once("..=")
        .or_else(|| text.split_once(".."))
        .or_else(|| text.split_once('-'))
        .ok_or_else(bad)?;
    let lo: usize = lo.trim().parse().map_err(|_| bad())?;
    let hi: usize = hi.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok(lo..=hi)
}

fn bounds_table_cmd(ctx: &Ctx, a: &TableArgs) -> Result<Output> {
    let range = parse_range(&a.k_range)?;
    let rule: DRule = a.d_rule.parse()?;
    let rows = bounds_table(range, &rule)?;
    let mut text = format!(
        "{:<11} {:>4} {:>4} {:>12}  {}\n",
        "formula", "k", "d", "approx", "coefficient"
    );
    for r in &rows {
        text += &format!(
            "{:<11} {:>4} {:>4} {:>12.8}  {}\n",
            r.formula_id.name(),
            r.params.k.unwrap_or(0),
            r.params.d.unwrap_or(0),
            approx(&r.coefficient),
            r.coefficient
        );
    }
    Ok(ctx.finish(Envelope::new("bounds-table"), json!({ "rows": rows }), text))
}

fn bounds_compare(ctx: &Ctx, a: &CompareArgs) -> Result<Output> {
    let r = compare_bounds(a.k, a.d)?;
    let text = format!("{}\nwinner: {:?}\n", r.order, r.winner);
    Ok(ctx.finish(Envelope::new("compare"), to_json(&r), text))
}

fn solve(ctx: &Ctx, a: &SolveArgs) -> Result<Output> {
    let h = read_hypergraph(a.input.as_deref())?;
    let mut env = Envelope::new(match a.mode {
        SolveMode::Nu | SolveMode::Pm => "matching-branch-and-bound",
        SolveMode::Frac | SolveMode::Pfm => "exact-simplex",
    });
    let (result, text, witness) = match a.mode {
        SolveMode::Nu => {
            let m = max_matching(&h);
            let size = int(m.size() as i64);
            let w = Hypergraph::new(h.n(), h.k(), m.edges().iter().copied())?;
            (
                json!({ "mode": "nu", "value": rat(&size), "witness": m.edges(), "certificate": null }),
                format!("{size}\n"),
                Some(w),
            )
        }
        SolveMode::Pm => {
            let m = has_perfect_matching(&h)?;
            let found = m.is_some();
            let w = m
                .as_ref()
                .map(|m| Hypergraph::new(h.n(), h.k(), m.edges().iter().copied()))
                .transpose()?;
            let edges: Option<&[VertexSet]> = m.as_ref().map(|m| m.edges());
            (
                json!({ "mode": "pm", "value": found, "witness": edges, "certificate": null }),
                format!("{found}\n"),
                w,
            )
        }
        SolveMode::Frac | SolveMode::Pfm => {
            let sol = max_fractional_matching(&h)?;
            let size = sol.matching.size().clone();
            let weights: Vec<Value> = sol
                .matching
                .weights()
                .iter()
                .map(|(e, w)| json!({ "edge": e, "weight": rat(w) }))
                .collect();
            let cert = json!({
                "potentials": sol.cover.potentials().iter().map(rat).collect::<Vec<_>>(),
                "value": rat(sol.cover.value()),
                "pivots": sol.pivots,
            });
            let support = Hypergraph::new(h.n(), h.k(), sol.matching.weights().iter().map(|(e, _)| *e))?;
            if a.mode == SolveMode::Frac {
                (
                    json!({ "mode": "frac", "value": rat(&size), "witness": weights, "certificate": cert }),
                    format!("{size}\n"),
                    Some(support),
                )
            } else {
                if h.k() == 0 {
                    return Err(Error::InvalidInput("uniformity must be at least 1".into()));
                }
                let target = int(h.n() as i64) / int(h.k() as i64);
                let perfect = size == target;
                (
                    json!({ "mode": "pfm", "value": perfect, "size": rat(&size), "witness": weights, "certificate": cert }),
                    format!("{perfect}\n"),
                    Some(support),
                )
            }
        }
    };
    if let Some(w) = witness {
        ctx.witness(&mut env, &w)?;
    }
    Ok(ctx.finish(env, result, text))
}

fn emc_search(ctx: &Ctx, a: &SearchArgs) -> Result<Output> {
    let cap = a.cap_nodes.unwrap_or_else(default_node_budget);
    let r = match a.mode {
        Some(m) => {
            let mode = match m {
                SearchModeArg::Exhaustive => SearchMode::Exhaustive,
                SearchModeArg::Pruned => SearchMode::Pruned,
                SearchModeArg::Stable => SearchMode::Stable,
            };
            emc_search_with_mode(a.n, a.k, a.s, mode, cap)?
        }
        None => emc_extremal_search(a.n, a.k, a.s, a.stable, cap)?,
    };
    let mut env = Envelope::new("emc-search").searched(cap);
    ctx.witness(&mut env, &r.witness)?;
    let mut text = format!("{}\n", r.value);
    if let Some(c) = &r.conjecture_bound {
        text += &format!("# conjectured {c}\n");
    }
    for w in &r.warnings {
        text += &format!("# warning: {w}\n");
    }
    Ok(ctx.finish(env, to_json(&r), text))
}

fn emc_shadow(ctx: &Ctx, a: &InputArgs) -> Result<Output> {
    let h = read_hypergraph(a.input.as_deref())?;
    let r = verify_shadow_theorem(&h)?;
    let text = format!(
        "{}: nu = {}, |F| = {}, |shadow| = {}\n",
        if r.holds { "holds" } else { "fails" },
        r.nu,
        r.family_size,
        r.shadow_size
    );
    Ok(ctx.finish(Envelope::new("shadow"), to_json(&r), text))
}

fn emc_nested(ctx: &Ctx, a: &NestedArgs) -> Result<Output> {
    let families = parse_multi(&read_input(a.input.as_deref())?)?;
    let seq = FamilySequence::new(families)?;
    let beta = parse_q(&a.beta, "beta")?;
    let t = match a.t {
        Some(t) => t,
        None => {
            let need = &beta * int(2 * seq.s() as i64 + 1);
            need.ceil()
                .to_integer()
                .try_into()
                .map_err(|_| Error::InvalidInput("beta out of range".into()))?
        }
    };
    let r = check_nested_inequality(&seq, &beta, t)?;
    let text = format!(
        "{}: lhs = {}, cap = {}\n",
        if r.holds { "holds" } else { "fails" },
        r.lhs,
        r.cap
    );
    Ok(ctx.finish(Envelope::new("nested-cross-dependent"), to_json(&r), text))
}

fn threshold(ctx: &Ctx, a: &ThresholdArgs) -> Result<Output> {
    let cap = a.cap_nodes.unwrap_or_else(default_node_budget);
    let q = ThresholdQuery {
        kind: match a.kind {
            KindArg::Md => ThresholdKind::Md,
            KindArg::Fd => ThresholdKind::Fd,
            KindArg::M0 => ThresholdKind::M0,
        },
        n: a.n,
        k: a.k,
        d: a.d,
        s: a.s.as_deref().map(|t| parse_q(t, "s")).transpose()?,
        exhaustive: a.exhaustive,
        node_cap: cap,
    };
    let r = q.run()?;
    let mut env = Envelope::new(format!("threshold-{}", to_json(&r.kind).as_str().unwrap_or("?"))).searched(cap);
    ctx.witness(&mut env, &r.witness)?;
    Ok(ctx.finish(env, to_json(&r), format!("{}\n", r.value)))
}

fn replay(ctx: &Ctx, a: &ReplayArgs) -> Result<Output> {
    let r = replay_fractional_chain(a.n, a.k, a.d)?;
    let mut text = format!(
        "s = {}, alpha = {}, n' = {}, k' = {}\n",
        r.s, r.alpha, r.reduced_n, r.reduced_k
    );
    if let Some(m) = &r.matching_threshold {
        text += &format!("matching threshold {m}\n");
    }
    if let Some(res) = &r.residual {
        text += &format!("residual {res} (~{:.6})\n", approx(res));
    }
    for c in &r.checks {
        text += &format!("{} {}: {}\n", if c.holds { "ok  " } else { "FAIL" }, c.name, c.detail);
    }
    Ok(ctx.finish(Envelope::new("replay"), to_json(&r), text))
}

fn verify(ctx: &Ctx, a: &VerifyArgs) -> Result<Output> {
    let profile: Profile = a.profile.parse()?;
    let seed = ctx.cli.global.seed.unwrap_or(DEFAULT_SEED);
    let report = match &a.only {
        Some(id) => SuiteReport {
            profile,
            seed,
            results: vec![run_criterion(id, profile, seed)?],
            wall_ms: None,
        },
        None => verify_suite(profile, seed, false),
    };
    let mut out = ctx.finish(Envelope::new("acceptance"), to_json(&report), report.matrix());
    out.code = if report.passed() { 0 } else { 1 };
    Ok(out)
}
