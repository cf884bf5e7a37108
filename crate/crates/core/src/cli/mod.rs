//! Script front end: parsing, dispatch over the coefficient field, reports.

pub mod run;
pub mod script;

use serde_json::{json, Value};

use crate::field::Fp;
use crate::Rational;
use run::{run_script, Status};
use script::{FieldSpec, SessionScript};

/// Primes accepted by `fp:P`; each is a separate monomorphization.
pub const SUPPORTED_PRIMES: [u64; 4] = [32003, 65521, 1000003, 2147483647];

/// Runs `script` over `field`, or over the script's own field.
pub fn run_parsed(script: &SessionScript, seed: u64, field: Option<FieldSpec>) -> (Value, Status) {
    match field.unwrap_or_else(|| script.ring.field.clone()) {
        FieldSpec::Rationals => run_script::<Rational>(script, seed),
        FieldSpec::Prime(32003) => run_script::<Fp<32003>>(script, seed),
        FieldSpec::Prime(65521) => run_script::<Fp<65521>>(script, seed),
        FieldSpec::Prime(1000003) => run_script::<Fp<1000003>>(script, seed),
        FieldSpec::Prime(2147483647) => run_script::<Fp<2147483647>>(script, seed),
        FieldSpec::Prime(p) => {
            let v = json!({
                "schema": run::SCHEMA_VERSION,
                "error": {
                    "error": "UNSUPPORTED-FIELD",
                    "message": format!("fp:{p} is not one of the supported primes {SUPPORTED_PRIMES:?}"),
                },
                "status": Status::Error.tag(),
            });
            (v, Status::Error)
        }
    }
}

/// Parses and runs script text; parse failures become an error report.
pub fn run_script_text(text: &str, seed: u64, field: Option<FieldSpec>) -> (Value, Status) {
    match script::parse_script(text) {
        Ok(s) => run_parsed(&s, seed, field),
        Err(e) => {
            let v = json!({
                "schema": run::SCHEMA_VERSION,
                "error": run::error_json(&e),
                "status": Status::Error.tag(),
            });
            (v, Status::Error)
        }
    }
}

/// Shipped acceptance scripts, by file name.
pub const FIXTURES: &[(&str, &str)] = &[
    ("counterexample.gm", include_str!("../../fixtures/counterexample.gm")),
    ("sop_plane.gm", include_str!("../../fixtures/sop_plane.gm")),
    ("sop_random.gm", include_str!("../../fixtures/sop_random.gm")),
    ("sop_space.gm", include_str!("../../fixtures/sop_space.gm")),
    ("cubic_cone.gm", include_str!("../../fixtures/cubic_cone.gm")),
    ("transfer.gm", include_str!("../../fixtures/transfer.gm")),
    ("transfer_counterexample.gm", include_str!("../../fixtures/transfer_counterexample.gm")),
    ("rees_plane.gm", include_str!("../../fixtures/rees_plane.gm")),
    ("degseq.gm", include_str!("../../fixtures/degseq.gm")),
    ("fc_plane.gm", include_str!("../../fixtures/fc_plane.gm")),
    ("invariance.gm", include_str!("../../fixtures/invariance.gm")),
];

/// Seed used by `verify-suite`.
pub const SUITE_SEED: u64 = 1;
