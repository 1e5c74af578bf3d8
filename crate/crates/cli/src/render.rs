//! JSON rendering of exact values. Rationals never pass through floating point.

use serde_json::{json, Value};
use univoque::cantor::{
    CantorLevel, GapBoundReport, RealInterval, ThicknessReport, ThicknessScale,
};
use univoque::matching::MatchingVerdict;
use univoque::rational::{digits_for_tolerance, to_decimal};
use univoque::{BaseEnclosure, Interval, Rational, Verdict};

pub fn rational(r: &Rational) -> Value {
    json!({ "num": r.numer().to_string(), "den": r.denom().to_string() })
}

pub fn fraction(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn interval(iv: &Interval) -> Value {
    json!({ "lo": rational(&iv.lo), "hi": rational(&iv.hi) })
}

/// Midpoint rounded to `digits`; certain when both ends round the same way.
pub fn decimal_of(iv: &Interval, digits: usize) -> Value {
    let lo = to_decimal(&iv.lo, digits);
    let hi = to_decimal(&iv.hi, digits);
    json!({
        "decimal": to_decimal(&iv.midpoint(), digits),
        "digits": digits,
        "certain": lo == hi,
    })
}

pub fn enclosure(e: &BaseEnclosure, tol: &Rational) -> Value {
    enclosure_interval(e.interval(), tol)
}

pub fn enclosure_interval(iv: &Interval, tol: &Rational) -> Value {
    let mut v = decimal_of(iv, digits_for_tolerance(tol));
    let m = v.as_object_mut().expect("object");
    m.insert("lo".into(), rational(&iv.lo));
    m.insert("hi".into(), rational(&iv.hi));
    m.insert("width".into(), rational(&iv.width()));
    m.insert("lo_decimal".into(), Value::String(to_decimal(&iv.lo, 20)));
    m.insert("hi_decimal".into(), Value::String(to_decimal(&iv.hi, 20)));
    v
}

pub fn verdict(v: Verdict) -> Value {
    Value::String(
        match v {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Undecided => "undecided",
        }
        .into(),
    )
}

pub fn matching(v: &MatchingVerdict) -> Value {
    match v {
        MatchingVerdict::Matched { step } => json!({ "kind": "matched", "step": step }),
        MatchingVerdict::NonMatching {
            preperiod,
            cycle_len,
        } => {
            json!({ "kind": "nonmatching", "preperiod": preperiod, "cycle_len": cycle_len })
        }
        MatchingVerdict::NoMatchUpTo { budget } => json!({ "kind": "undecided", "budget": budget }),
    }
}

pub fn matching_kind(v: &MatchingVerdict) -> (&'static str, Option<usize>) {
    match v {
        MatchingVerdict::Matched { step } => ("matched", Some(*step)),
        MatchingVerdict::NonMatching { cycle_len, .. } => ("nonmatching", Some(*cycle_len)),
        MatchingVerdict::NoMatchUpTo { .. } => ("undecided", None),
    }
}

pub fn scale_name(s: ThicknessScale) -> &'static str {
    match s {
        ThicknessScale::Linear => "linear",
        ThicknessScale::Log => "log",
    }
}

pub fn thickness(r: &ThicknessReport) -> Value {
    json!({
        "scale": scale_name(r.scale),
        "tau_lo": rational(&r.tau_lo),
        "tau_hi": rational(&r.tau_hi),
        "tau_lo_decimal": to_decimal(&r.tau_lo, 6),
        "tau_hi_decimal": to_decimal(&r.tau_hi, 6),
        "argmin": r.argmin.to_string(),
        "depth": r.depth,
        "gaps": r.gaps,
        "at_least_one": r.tau_lo >= Rational::from_integer(1.into()),
    })
}

pub fn gap_bounds(reports: &[GapBoundReport]) -> Value {
    let names = [
        "left_upper",
        "left_lower",
        "right_upper",
        "right_lower",
        "gap_upper",
        "gap_le_left",
        "gap_le_right",
        "log_gap_le_left",
        "log_gap_le_right",
    ];
    let mut summary = serde_json::Map::new();
    for (i, name) in names.iter().enumerate() {
        let count = |want: Verdict| reports.iter().filter(|r| r.all()[i] == want).count();
        summary.insert(
            (*name).into(),
            json!({
                "holds": count(Verdict::Holds),
                "fails": count(Verdict::Fails),
                "undecided": count(Verdict::Undecided),
            }),
        );
    }
    let failing: Vec<Value> = reports
        .iter()
        .filter(|r| !(r.conclusions_hold() && r.log_conclusions_hold()))
        .map(|r| Value::String(r.word.to_string()))
        .collect();
    json!({
        "gaps": reports.len(),
        "conclusions_hold": reports.iter().all(|r| r.conclusions_hold()),
        "log_conclusions_hold": reports.iter().all(|r| r.log_conclusions_hold()),
        "checks": Value::Object(summary),
        "failing_words": failing,
    })
}

pub struct Row {
    pub word: String,
    pub kind: &'static str,
    pub lo: Rational,
    pub hi: Rational,
    pub len: usize,
}

/// One row per realized interval and gap, bounded outward.
pub fn level_rows(level: &CantorLevel) -> Vec<Row> {
    let mut rows = Vec::new();
    let mut push = |word: String, kind, r: &RealInterval, len| {
        let o = r.outer();
        rows.push(Row {
            word,
            kind,
            lo: o.lo,
            hi: o.hi,
            len,
        });
    };
    for e in level.entries() {
        let word = level.word(e).to_string();
        let len = level.word_len(e);
        push(word.clone(), "interval", &e.interval, len);
        if let Some(g) = &e.gap {
            push(word, "gap", g, len);
        }
    }
    rows
}

pub fn level(level: &CantorLevel, digits: usize) -> Value {
    let entries: Vec<Value> = level_rows(level)
        .into_iter()
        .map(|r| {
            json!({
                "word": r.word,
                "kind": r.kind,
                "length": r.len,
                "lo": rational(&r.lo),
                "hi": rational(&r.hi),
                "lo_decimal": to_decimal(&r.lo, digits),
                "hi_decimal": to_decimal(&r.hi, digits),
            })
        })
        .collect();
    json!({
        "x": level.x.as_ref().map(rational),
        "j": level.j,
        "m": level.m,
        "n": level.n,
        "depth": level.depth,
        "prefix": level.prefix.iter().map(|d| char::from(b'0' + d)).collect::<String>(),
        "orientation": match level.orientation {
            univoque::cantor::Orientation::Increasing => "increasing",
            univoque::cantor::Orientation::Decreasing => "decreasing",
        },
        "intervals": level.entries().len(),
        "gaps": level.gaps().len(),
        "entries": entries,
    })
}

pub fn level_csv(level: &CantorLevel) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["word", "kind", "lo", "hi"])?;
    for r in level_rows(level) {
        w.write_record([r.word, r.kind.to_string(), fraction(&r.lo), fraction(&r.hi)])?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
