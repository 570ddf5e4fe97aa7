//! Helpers shared by the integration test targets.
#![allow(dead_code)]

use std::path::PathBuf;

use serde_json::{json, Value};
use tropica::trace::{parse_trace_json, verify_trace, DerivationTrace, Rejection};

pub const TRACE_FILES: [&str; 4] = ["x_xy.json", "bend_y_plus_z.json", "x_y_and_y_0.json", "nullstellensatz.json"];

pub fn trace_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join("traces").join(name)
}

pub fn trace_text(name: &str) -> String {
    std::fs::read_to_string(trace_path(name)).expect("shipped trace exists")
}

pub fn load_trace(name: &str) -> DerivationTrace {
    parse_trace_json(&trace_text(name)).expect("shipped trace parses")
}

/// One corrupted step of a shipped trace and the step index at which the
/// checker must reject it.
pub struct Mutation {
    pub file: &'static str,
    pub step: usize,
    pub field: &'static str,
    pub value: Value,
    pub expected_step: usize,
}

pub fn mutations() -> Vec<Mutation> {
    vec![
        // wrong conclusion for a transitivity step
        Mutation { file: "x_xy.json", step: 3, field: "conclusion", value: json!(["x", "x*y"]), expected_step: 3 },
        // premises that do not chain
        Mutation { file: "x_xy.json", step: 6, field: "args", value: json!([5, 3]), expected_step: 6 },
        // deleted monomial outside the generator's support
        Mutation { file: "bend_y_plus_z.json", step: 0, field: "args", value: json!([0, "z"]), expected_step: 0 },
        // reflexivity with unequal sides
        Mutation { file: "bend_y_plus_z.json", step: 9, field: "conclusion", value: json!(["z", "y"]), expected_step: 9 },
        // premise from the future
        Mutation { file: "bend_y_plus_z.json", step: 10, field: "args", value: json!([8, 11]), expected_step: 10 },
        // product with a wrong right-hand side
        Mutation { file: "x_y_and_y_0.json", step: 11, field: "conclusion", value: json!(["0", "y^2"]), expected_step: 11 },
        // nonexistent generator
        Mutation { file: "x_y_and_y_0.json", step: 4, field: "args", value: json!([5, "y^2"]), expected_step: 4 },
        // sum of the wrong premises
        Mutation { file: "nullstellensatz.json", step: 4, field: "args", value: json!([2, 1]), expected_step: 4 },
        // transitivity in the wrong order
        Mutation { file: "nullstellensatz.json", step: 11, field: "args", value: json!([9, 10]), expected_step: 11 },
        // symmetry of the wrong premise
        Mutation { file: "nullstellensatz.json", step: 10, field: "args", value: json!([9]), expected_step: 10 },
    ]
}

/// Apply a mutation and run the checker.
pub fn run_mutation(m: &Mutation) -> Result<(), Rejection> {
    let mut v: Value = serde_json::from_str(&trace_text(m.file)).expect("json");
    v["steps"][m.step][m.field] = m.value.clone();
    let trace = parse_trace_json(&v.to_string()).expect("mutated trace still parses");
    verify_trace(&trace)
}
