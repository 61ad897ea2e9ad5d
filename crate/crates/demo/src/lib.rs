//! Browser bindings. Every export takes plain values and returns a JSON string,
//! so the page needs no glue beyond `JSON.parse`.

use serde_json::{json, Value};
use subed::exact_oracles::window_shifts_2approx;
use subed::string_oracle::clamped_range;
use subed::workbench::{generate, GeneratorSpec};
use subed::{capped_edit_distance, decide_gap, GapConfig, Profile, StringOracle};
use wasm_bindgen::prelude::*;

/// Longest input the exact column of [`shift_profile`] is computed for.
pub const EXACT_LIMIT: usize = 2000;

fn err(msg: impl ToString) -> String {
    json!({ "error": msg.to_string() }).to_string()
}

/// Generates an instance from a workbench generator spec, e.g.
/// `{"kind":"planted_edits","k":3,"n":200,"seed":1}`.
pub fn generate_json(spec: &str) -> String {
    let spec: GeneratorSpec = match serde_json::from_str(spec) {
        Ok(s) => s,
        Err(e) => return err(format!("bad spec: {e}")),
    };
    match generate(&spec) {
        Ok(inst) => {
            let text = |s: &[u8]| String::from_utf8_lossy(s).into_owned();
            let (x, y) = inst.pair();
            json!({ "x": text(x), "y": text(y) }).to_string()
        }
        Err(e) => err(e),
    }
}

/// The many-shifts profile of `x` against `y` around the identity alignment,
/// with exact capped distances alongside when the strings are short.
pub fn shift_profile_json(x: &str, y: &str, k: usize) -> String {
    let (x, y) = (x.as_bytes(), y.as_bytes());
    let approx = window_shifts_2approx(x, y, 0, k);
    let exact: Value = if x.len().max(y.len()) <= EXACT_LIMIT {
        approx
            .shifts()
            .map(|s| {
                let (lo, hi) = clamped_range(y.len(), s, x.len() as i64 + s);
                capped_edit_distance(x, &y[lo..hi], k)
            })
            .collect::<Vec<_>>()
            .into()
    } else {
        Value::Null
    };
    json!({
        "k": k,
        "shifts": approx.shifts().collect::<Vec<_>>(),
        "approx": approx.values,
        "exact": exact,
    })
    .to_string()
}

/// Runs the gap decision and returns its report.
pub fn gap_json(x: &str, y: &str, k: usize, branching: usize, profile: &str, seed: u64) -> String {
    let profile: Profile = match profile.parse() {
        Ok(p) => p,
        Err(_) => return err(format!("unknown profile {profile:?}")),
    };
    let (xo, yo) = (StringOracle::new(x.as_bytes()), StringOracle::new(y.as_bytes()));
    match decide_gap(&xo, &yo, k, branching, &GapConfig::new(profile, seed)) {
        Ok(report) => serde_json::to_string(&report).unwrap_or_else(err),
        Err(e) => err(e),
    }
}

#[wasm_bindgen]
pub fn generate_instance(spec: &str) -> String {
    generate_json(spec)
}

#[wasm_bindgen]
pub fn shift_profile(x: &str, y: &str, k: usize) -> String {
    shift_profile_json(x, y, k)
}

#[wasm_bindgen]
pub fn gap(x: &str, y: &str, k: usize, branching: usize, profile: &str, seed: u64) -> String {
    gap_json(x, y, k, branching, profile, seed)
}
