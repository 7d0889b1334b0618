//! JSON serialization for operators and pure states.
//!
//! Format: {"labels": [...], "dims": [...], "re": [...], "im": [...]} with
//! row-major entries; an operator carries n*n values per component, a pure
//! state n. Readers validate label/dimension consistency, exact lengths and
//! finiteness before constructing anything, so malformed files are rejected
//! with an error rather than a panic.

use super::{LabeledOperator, PureState, SubsystemLayout};
use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Serialize, Deserialize)]
struct MatrixJson {
    labels: Vec<String>,
    dims: Vec<usize>,
    re: Vec<f64>,
    im: Vec<f64>,
}

fn decode(json: &MatrixJson, square: bool) -> Result<(SubsystemLayout, Vec<Complex64>)> {
    let layout = SubsystemLayout::from_parts(json.labels.clone(), json.dims.clone())?;
    let n = layout.total_dim();
    let want = if square {
        n.checked_mul(n)
            .ok_or_else(|| Error::InvalidLayout("matrix size overflows".into()))?
    } else {
        n
    };
    if json.re.len() != want {
        return Err(Error::LengthMismatch {
            got: json.re.len(),
            want,
        });
    }
    if json.im.len() != want {
        return Err(Error::LengthMismatch {
            got: json.im.len(),
            want,
        });
    }
    if json.re.iter().chain(json.im.iter()).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    let data = json
        .re
        .iter()
        .zip(&json.im)
        .map(|(&re, &im)| Complex64::new(re, im))
        .collect();
    Ok((layout, data))
}

fn encode(layout: &SubsystemLayout, data: &[Complex64]) -> MatrixJson {
    MatrixJson {
        labels: layout.labels().to_vec(),
        dims: layout.dims().to_vec(),
        re: data.iter().map(|z| z.re).collect(),
        im: data.iter().map(|z| z.im).collect(),
    }
}

pub fn operator_from_json_str(s: &str) -> Result<LabeledOperator> {
    let json: MatrixJson = serde_json::from_str(s)?;
    let (layout, data) = decode(&json, true)?;
    LabeledOperator::from_entries(layout, data)
}

pub fn operator_to_json_string(op: &LabeledOperator) -> String {
    serde_json::to_string(&encode(op.layout(), op.entries())).expect("serialization cannot fail")
}

pub fn read_operator(path: &Path) -> Result<LabeledOperator> {
    operator_from_json_str(&std::fs::read_to_string(path)?)
}

pub fn write_operator(path: &Path, op: &LabeledOperator) -> Result<()> {
    std::fs::write(path, operator_to_json_string(op))?;
    Ok(())
}

pub fn state_from_json_str(s: &str) -> Result<PureState> {
    let json: MatrixJson = serde_json::from_str(s)?;
    let (layout, amplitudes) = decode(&json, false)?;
    PureState::new(layout, amplitudes)
}

pub fn state_to_json_string(state: &PureState) -> String {
    serde_json::to_string(&encode(state.layout(), state.amplitudes()))
        .expect("serialization cannot fail")
}

pub fn read_state(path: &Path) -> Result<PureState> {
    state_from_json_str(&std::fs::read_to_string(path)?)
}

pub fn write_state(path: &Path, state: &PureState) -> Result<()> {
    std::fs::write(path, state_to_json_string(state))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::super::{flip_operator, max_entangled_state};
    use super::*;

    #[test]
    fn operator_round_trips_exactly() {
        let f = flip_operator(3).unwrap();
        let s = operator_to_json_string(&f);
        let back = operator_from_json_str(&s).unwrap();
        assert_eq!(back.layout(), f.layout());
        assert_eq!(back.entries(), f.entries());
    }

    #[test]
    fn state_round_trips_exactly() {
        let omega = max_entangled_state(4).unwrap();
        let s = state_to_json_string(&omega);
        let back = state_from_json_str(&s).unwrap();
        assert_eq!(back.amplitudes(), omega.amplitudes());
    }

    #[test]
    fn rejects_mismatched_lengths_and_bad_layouts() {
        let cases = [
            r#"{"labels":["A"],"dims":[2],"re":[1,0,0],"im":[0,0,0,0]}"#,
            r#"{"labels":["A"],"dims":[2],"re":[1,0,0,1],"im":[0,0,0]}"#,
            r#"{"labels":["A","A"],"dims":[2,2],"re":[],"im":[]}"#,
            r#"{"labels":["A"],"dims":[2,2],"re":[],"im":[]}"#,
            r#"{"labels":["A"],"dims":[0],"re":[],"im":[]}"#,
            r#"{"labels":[],"dims":[],"re":[],"im":[]}"#,
            r#"{"labels":["A"],"dims":[18446744073709551615],"re":[],"im":[]}"#,
        ];
        for c in cases {
            assert!(operator_from_json_str(c).is_err(), "accepted {c}");
        }
        assert!(operator_from_json_str("not json").is_err());
    }

    #[test]
    fn rejects_unnormalized_states() {
        let s = r#"{"labels":["A"],"dims":[2],"re":[1,1],"im":[0,0]}"#;
        assert!(state_from_json_str(s).is_err());
    }
}
