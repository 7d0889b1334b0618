//! Output rendering: exact rationals as "a/b" strings, floats as JSON
//! numbers carrying 17 significant digits, points as comma-separated
//! coordinate lists.

use serde_json::{Map, Number, Value};
use symact_core::activation::ActivationReport;
use symact_core::geometry::RationalPoint3;
use symact_core::rational::{rat_to_f64, Rat};
use symact_core::PureState;

/// A JSON number spelled with 17 significant digits, enough to reproduce
/// the f64 bit pattern exactly. Non-finite values have no JSON spelling
/// and render as null.
pub fn float(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    match format!("{x:.16e}").parse::<Number>() {
        Ok(n) => Value::Number(n),
        Err(_) => Value::Null,
    }
}

pub fn rational(r: &Rat) -> Value {
    Value::String(r.to_string())
}

/// "a, b, c" with exact rational coordinates.
pub fn point_string(p: &RationalPoint3) -> String {
    format!("{}, {}, {}", p[0], p[1], p[2])
}

/// An interval as a two-element array of rational strings, or null.
pub fn interval(iv: &Option<(Rat, Rat)>) -> Value {
    match iv {
        Some((lo, hi)) => Value::Array(vec![rational(lo), rational(hi)]),
        None => Value::Null,
    }
}

pub fn rational_array(values: &[Rat]) -> Value {
    Value::Array(values.iter().map(rational).collect())
}

/// The PureState wire form: labels, dims and split real/imaginary
/// amplitude arrays.
pub fn pure_state(state: &PureState) -> Value {
    let mut obj = Map::new();
    obj.insert("labels".into(), serde_json::json!(state.layout().labels()));
    obj.insert("dims".into(), serde_json::json!(state.layout().dims()));
    obj.insert(
        "re".into(),
        Value::Array(state.amplitudes().iter().map(|z| float(z.re)).collect()),
    );
    obj.insert(
        "im".into(),
        Value::Array(state.amplitudes().iter().map(|z| float(z.im)).collect()),
    );
    Value::Object(obj)
}

/// Field-for-field activation report; the exact rationals come first,
/// float twins of the two physical quantities follow for convenience.
pub fn activation(report: &ActivationReport) -> Map<String, Value> {
    let mut obj = Map::new();
    obj.insert("d".into(), serde_json::json!(report.d));
    obj.insert("alpha".into(), rational(&report.alpha));
    obj.insert("lambda".into(), rational_array(&report.lambda));
    obj.insert("fidelity".into(), rational(&report.fidelity));
    obj.insert(
        "success_probability".into(),
        rational(&report.success_probability),
    );
    obj.insert("margin".into(), rational(&report.margin));
    obj.insert("activated".into(), Value::Bool(report.activated));
    obj.insert("fidelity_float".into(), float(rat_to_f64(&report.fidelity)));
    obj.insert(
        "success_probability_float".into(),
        float(rat_to_f64(&report.success_probability)),
    );
    obj
}

/// Pretty JSON with a trailing newline, ready to print or write.
pub fn pretty(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("rendering cannot fail");
    text.push('\n');
    text
}
