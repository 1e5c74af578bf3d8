use num_traits::{One, Zero};
use serde_json::{json, Value};
use univoque::cantor::{
    decompose, default_level_tol, entropy_estimate, find_threshold_j, leaf_cover, level_factors,
    realize_level, sum_cover, tail_factors, thickness, threshold_conditions, verify_gap_bounds,
    CantorLevel, ThicknessScale,
};
use univoque::components::{check_prop51, component_for_word, cover_report, kl_constant};
use univoque::expand::{
    dyadic_expansion, eval_series, expansion_digits, is_unique_expansion, ExpansionMode,
    UniquenessVerdict,
};
use univoque::matching::{build_nm, check_eq41, doubling_criterion, matching_run, AlphaParam};
use univoque::rational::{digits_for_tolerance, int, parse_rational, to_decimal};
use univoque::solve::{general_bracket, solve_base};
use univoque::{BaseEnclosure, EventuallyPeriodicWord, FiniteWord, Rational};

use crate::render;
use crate::{
    Command, DecomposeArgs, EntropyArgs, EvalArgs, ExpandArgs, Failure, Format, LevelArgs,
    LevelOptArgs, MatchArgs, Mode, NmArgs, Outcome, SolveArgs, SumcoverArgs, SweepArgs,
    ThresholdArgs, TolArgs, UniqueArgs, WordArgs, XArgs,
};

type Res = Result<Outcome, Failure>;

fn rational_arg(flag: &str, text: &str) -> Result<Rational, Failure> {
    parse_rational(text)
        .map_err(|_| Failure::Usage(format!("invalid rational literal '{text}' for --{flag}")))
}

fn tol_arg(text: &str) -> Result<Rational, Failure> {
    let t = rational_arg("tol", text)?;
    if t <= Rational::zero() {
        return Err(Failure::Usage(format!(
            "tolerance '{text}' must be positive"
        )));
    }
    Ok(t)
}

fn seq_arg(flag: &str, text: &str) -> Result<EventuallyPeriodicWord, Failure> {
    text.parse().map_err(|e| {
        Failure::Usage(format!(
            "invalid sequence literal '{text}' for --{flag}: {e}"
        ))
    })
}

fn word_arg(text: &str) -> Result<FiniteWord, Failure> {
    text.parse()
        .map_err(|e| Failure::Usage(format!("invalid word '{text}' for --word: {e}")))
}

fn ok(result: Value, precision: Value) -> Res {
    Ok(Outcome {
        result,
        precision,
        csv: None,
    })
}

fn no_precision() -> Value {
    json!({ "tol": null, "depth": null })
}

fn precision(tol: &Rational, depth: Option<usize>) -> Value {
    json!({ "tol": render::rational(tol), "depth": depth })
}

pub fn run(cmd: &Command, format: Format) -> Res {
    match cmd {
        Command::Eval(a) => eval(a),
        Command::Expand(a) => expand(a),
        Command::Dyadic(a) => dyadic(a),
        Command::Unique(a) => unique(a),
        Command::Solve(a) => solve(a),
        Command::Decompose(a) => decomposition(a),
        Command::Level(a) => level(a, format),
        Command::Thickness(a) => thickness_cmd(a),
        Command::Sumcover(a) => sumcover(a),
        Command::Thresholdj(a) => thresholdj(a),
        Command::Match(a) => matching(a),
        Command::MatchSweep(a) => sweep(a),
        Command::Nm(a) => nm(a, format),
        Command::Component(a) => component(a),
        Command::Prop51(a) => prop51(a),
        Command::Klconstant(a) => klconstant(a),
        Command::Entropy(a) => entropy(a),
    }
}

fn eval(a: &EvalArgs) -> Res {
    let d = seq_arg("seq", &a.seq)?;
    let q = rational_arg("q", &a.q)?;
    let v = eval_series(&d, &q)?;
    ok(
        json!({
            "sequence": d.to_string(),
            "value": render::rational(&v),
            "decimal": to_decimal(&v, a.digits),
        }),
        no_precision(),
    )
}

fn expand(a: &ExpandArgs) -> Res {
    let x = rational_arg("x", &a.x)?;
    let q = rational_arg("q", &a.q)?;
    let mode = match a.mode {
        Mode::Greedy => ExpansionMode::Greedy,
        Mode::QuasiGreedy => ExpansionMode::QuasiGreedy,
    };
    let w = expansion_digits(&x, &q, a.depth, mode)?;
    ok(
        json!({ "digits": w.to_string() }),
        json!({ "tol": null, "depth": a.depth }),
    )
}

fn dyadic(a: &XArgs) -> Res {
    let x = rational_arg("x", &a.x)?;
    let d = dyadic_expansion(&x)?;
    ok(json!({ "sequence": d.to_string() }), no_precision())
}

fn unique(a: &UniqueArgs) -> Res {
    let d = seq_arg("seq", &a.seq)?;
    let q = rational_arg("q", &a.q)?;
    let v = is_unique_expansion(&d, &BaseEnclosure::exact(q)?, a.depth)?;
    let (name, depth) = match v {
        UniquenessVerdict::Unique => ("unique", None),
        UniquenessVerdict::NotUnique => ("not_unique", None),
        UniquenessVerdict::Unknown(d) => ("unknown", Some(d)),
    };
    ok(
        json!({ "sequence": d.to_string(), "verdict": name, "unknown_depth": depth }),
        json!({ "tol": null, "depth": a.depth }),
    )
}

fn solve(a: &SolveArgs) -> Res {
    let d = seq_arg("seq", &a.seq)?;
    let x = rational_arg("x", &a.x)?;
    let tol = tol_arg(&a.tol)?;
    let e = solve_base(&d, &x, &general_bracket(), &tol)?;
    ok(render::enclosure(&e, &tol), precision(&tol, None))
}

fn decomposition(a: &DecomposeArgs) -> Res {
    let x = rational_arg("x", &a.x)?;
    let dec = decompose(&x)?;
    let mut levels = Vec::new();
    for j in 1..=a.j.max(1) {
        levels.push(json!({
            "j": j,
            "n": dec.n(j)?,
            "prefix": dec.prefix_for(j)?.to_string(),
        }));
    }
    ok(
        json!({
            "x": render::rational(&x),
            "dyadic": dec.dyadic.to_string(),
            "case": dec.case.to_string(),
            "m": dec.m,
            "levels": levels,
        }),
        no_precision(),
    )
}

fn level_tol(t: &Option<String>) -> Result<Rational, Failure> {
    t.as_deref()
        .map(tol_arg)
        .unwrap_or_else(|| Ok(default_level_tol()))
}

fn level(a: &LevelArgs, format: Format) -> Res {
    let x = rational_arg("x", &a.x)?;
    let tol = level_tol(&a.tol)?;
    let lv = realize_level(&x, a.j, a.depth, &tol)?;
    level_outcome(
        &lv,
        digits_for_tolerance(&tol),
        precision(&tol, Some(lv.depth)),
        format,
    )
}

fn level_outcome(lv: &CantorLevel, digits: usize, precision: Value, format: Format) -> Res {
    let csv = match format {
        Format::Csv => Some(render::level_csv(lv).map_err(|e| Failure::Other(e.to_string()))?),
        Format::Json => None,
    };
    Ok(Outcome {
        result: render::level(lv, digits),
        precision,
        csv,
    })
}

struct Resolved {
    x: Rational,
    j: usize,
    depth: usize,
    tol: Rational,
    m: usize,
    n: usize,
}

fn resolve(a: &LevelOptArgs) -> Result<Resolved, Failure> {
    let x = rational_arg("x", &a.x)?;
    let tol = level_tol(&a.tol)?;
    let dec = decompose(&x)?;
    let j = match a.j {
        Some(j) => j,
        None => find_threshold_j(&x, 64)?,
    };
    let n = dec.n(j)?;
    let depth = a.depth.unwrap_or(dec.m + n + 8);
    Ok(Resolved {
        x,
        j,
        depth,
        tol,
        m: dec.m,
        n,
    })
}

fn thickness_cmd(a: &LevelOptArgs) -> Res {
    let r = resolve(a)?;
    let lv = realize_level(&r.x, r.j, r.depth, &r.tol)?;
    let linear = thickness(&lv, ThicknessScale::Linear)?;
    let log = thickness(&lv, ThicknessScale::Log)?;
    let bounds = verify_gap_bounds(&lv, r.m, r.n)?;
    ok(
        json!({
            "x": render::rational(&r.x),
            "j": r.j,
            "m": r.m,
            "n": r.n,
            "linear": render::thickness(&linear),
            "log": render::thickness(&log),
            "gap_bounds": render::gap_bounds(&bounds),
        }),
        precision(&r.tol, Some(r.depth)),
    )
}

fn sumcover(a: &SumcoverArgs) -> Res {
    let lambda = rational_arg("lambda", &a.lambda)?;
    let r = resolve(&a.level)?;
    let lv = realize_level(&r.x, r.j, r.depth, &r.tol)?;
    let leaves = leaf_cover(&lv)?;
    let report = cover_report(sum_cover(&leaves, &lambda, &leaves)?)?;
    ok(
        json!({
            "x": render::rational(&r.x),
            "j": r.j,
            "lambda": render::rational(&lambda),
            "leaves": leaves.len(),
            "components": report.components,
            "connected": report.components == 1,
            "hull": render::interval(&report.hull),
            "largest_gap": report.largest_gap.as_ref().map(render::rational),
            "total_gap": render::rational(&report.total_gap),
            "intervals": report.intervals.iter().map(render::interval).collect::<Vec<_>>(),
        }),
        precision(&r.tol, Some(r.depth)),
    )
}

fn thresholdj(a: &ThresholdArgs) -> Res {
    let x = rational_arg("x", &a.x)?;
    let j = find_threshold_j(&x, a.j)?;
    let dec = decompose(&x)?;
    let n = dec.n(j)?;
    let c = threshold_conditions(dec.m, n)?;
    ok(
        json!({
            "x": render::rational(&x),
            "j": j,
            "m": dec.m,
            "n": n,
            "left_condition": render::verdict(c.left_condition),
            "right_condition": render::verdict(c.right_condition),
            "gap_condition": render::verdict(c.gap_condition),
            "window": univoque::cantor::THRESHOLD_WINDOW,
        }),
        no_precision(),
    )
}

fn alpha_arg(flag: &str, text: &str) -> Result<AlphaParam, Failure> {
    Ok(AlphaParam::new(rational_arg(flag, text)?)?)
}

fn doubling(a: &AlphaParam, budget: usize) -> Result<Value, Failure> {
    if a.value() > &Rational::one() {
        Ok(render::matching(&doubling_criterion(a, budget)?))
    } else {
        Ok(Value::Null)
    }
}

fn matching(a: &MatchArgs) -> Res {
    let alpha = alpha_arg("alpha", &a.alpha)?;
    let run = matching_run(&alpha, a.budget);
    ok(
        json!({
            "alpha": render::rational(alpha.value()),
            "verdict": render::matching(&run.verdict),
            "doubling": doubling(&alpha, a.budget)?,
            "orbit_one": run.orbit_one.iter().map(render::fraction).collect::<Vec<_>>(),
            "orbit_other": run.orbit_other.iter().map(render::fraction).collect::<Vec<_>>(),
        }),
        json!({ "tol": null, "depth": null, "budget": a.budget }),
    )
}

fn sweep(a: &SweepArgs) -> Res {
    let from = rational_arg("from", &a.from)?;
    let to = rational_arg("to", &a.to)?;
    if a.count == 0 {
        return Err(Failure::Usage("--count must be positive".into()));
    }
    let step = if a.count > 1 {
        (&to - &from) / int(a.count as i64 - 1)
    } else {
        Rational::zero()
    };
    let mut rows = Vec::with_capacity(a.count);
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Failure::Other(e.to_string());
    w.write_record(["alpha", "verdict", "m_or_cycle_length"])
        .map_err(csv_err)?;
    for i in 0..a.count {
        let value = &from + &step * int(i as i64);
        let alpha = AlphaParam::new(value)?;
        let run = matching_run(&alpha, a.budget);
        let (kind, n) = render::matching_kind(&run.verdict);
        let label = render::fraction(alpha.value());
        w.write_record([
            label.clone(),
            kind.to_string(),
            n.map(|n| n.to_string()).unwrap_or_default(),
        ])
        .map_err(csv_err)?;
        rows.push(json!({ "alpha": label, "verdict": kind, "m_or_cycle_length": n }));
    }
    let bytes = w.into_inner().map_err(|e| Failure::Other(e.to_string()))?;
    Ok(Outcome {
        result: json!({ "rows": rows }),
        precision: json!({ "tol": null, "depth": null, "budget": a.budget }),
        csv: Some(String::from_utf8(bytes).expect("csv output is utf-8")),
    })
}

fn nm(a: &NmArgs, format: Format) -> Res {
    let lv = build_nm(a.m, a.depth)?;
    // parameter-space endpoints are exact rationals
    let mut out = level_outcome(&lv, 20, json!({ "tol": null, "depth": a.depth }), format)?;
    let members_ok = lv.entries().iter().all(|e| {
        e.symbolic.as_ref().is_some_and(|s| {
            [&s.left, &s.right]
                .iter()
                .all(|q| check_eq41(q, q.orbit_len()).unwrap_or(false))
        })
    });
    let report = thickness(&lv, ThicknessScale::Linear)?;
    if let Value::Object(m) = &mut out.result {
        m.insert("members_ok".into(), json!(members_ok));
        m.insert("thickness".into(), render::thickness(&report));
    }
    Ok(out)
}

fn component_json(rec: &univoque::components::ComponentRecord, tol: &Rational) -> Value {
    json!({
        "word": rec.word.to_string(),
        "q_l": render::enclosure(&rec.q_l, tol),
        "q_r": render::enclosure(&rec.q_r, tol),
        "q_kl": render::enclosure(&rec.q_kl, tol),
    })
}

fn component(a: &WordArgs) -> Res {
    let w = word_arg(&a.word)?;
    let tol = tol_arg(&a.tol)?;
    let rec = component_for_word(&w, &tol)?;
    ok(component_json(&rec, &tol), precision(&tol, None))
}

fn prop51(a: &WordArgs) -> Res {
    let w = word_arg(&a.word)?;
    let tol = tol_arg(&a.tol)?;
    let r = check_prop51(&w, &tol)?;
    let d = 8;
    let dec = |iv: &univoque::Interval| render::decimal_of(iv, d);
    ok(
        json!({
            "word": w.to_string(),
            "sum_gap_ok": r.sum_gap_ok,
            "product_gap_ok": r.product_gap_ok,
            "right_gap": dec(&r.right_gap),
            "left_gap": dec(&r.left_gap),
            "right_ratio": dec(&r.right_ratio),
            "left_ratio": dec(&r.left_ratio),
            "sum_margin": render::interval(&r.sum_margin),
            "product_margin": render::interval(&r.product_margin),
            "record": component_json(&r.record, &r.tol),
        }),
        precision(&r.tol, None),
    )
}

fn klconstant(a: &TolArgs) -> Res {
    let tol = tol_arg(&a.tol)?;
    let e = kl_constant(&tol)?;
    ok(render::enclosure(&e, &tol), precision(&tol, None))
}

fn entropy(a: &EntropyArgs) -> Res {
    let (words, source, depth) = match &a.x {
        Some(x) => {
            let opt = LevelOptArgs {
                x: x.clone(),
                j: a.j,
                depth: a.depth,
                tol: None,
            };
            let r = resolve(&opt)?;
            let lv = realize_level(&r.x, r.j, r.depth, &r.tol)?;
            (level_factors(&lv, a.k)?, "level", Some(r.depth))
        }
        None => {
            let n =
                a.n.ok_or_else(|| Failure::Usage("entropy needs --n or --x".into()))?;
            (tail_factors(n, a.k)?, "tail_shift", None)
        }
    };
    let e = entropy_estimate(&words, a.k)?;
    ok(
        json!({
            "source": source,
            "k": e.k,
            "blocks": e.blocks,
            "bits": format!("{:.12}", e.bits),
            "exact": e.exact.as_ref().map(render::rational),
        }),
        json!({ "tol": null, "depth": depth }),
    )
}
