//! One line per acceptance criterion; exits nonzero if any fails.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::*;
use gradmult::cli::{run_script_text, FIXTURES, SUITE_SEED};
use proptest::test_runner::{Config, TestRunner};
use serde_json::Value;

fn fixture(name: &str) -> Value {
    let text = FIXTURES.iter().find(|(n, _)| *n == name).unwrap().1;
    run_script_text(text, SUITE_SEED, None).0
}

fn reports<'a>(v: &'a Value, command: &str) -> Vec<&'a Value> {
    v["reports"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["command"].as_str().unwrap().starts_with(command))
        .collect()
}

fn value(v: &Value) -> Option<u64> {
    v["value"].as_u64()
}

fn exact(a: Option<u64>, b: Option<u64>) -> bool {
    matches!((a, b), (Some(a), Some(b)) if within_tolerance(a, b))
}

struct Line {
    ok: bool,
    detail: String,
}

type Check = fn() -> Line;

fn line(ok: bool, detail: impl Into<String>) -> Line {
    Line { ok, detail: detail.into() }
}

fn counterexample() -> Line {
    let v = fixture("counterexample.gm");
    let hilbert = &reports(&v, "cmd hilbert")[0]["results"];
    let samuel = &reports(&v, "cmd samuel")[0]["results"];
    let fc = &reports(&v, "cmd fc_check")[0]["results"];
    let ok = hilbert["dim"] == 1
        && value(&hilbert["multiplicity"]) == Some(1)
        && value(&samuel["oracle"]) == Some(2)
        && value(&samuel["order_product"]) == Some(1)
        && samuel["fastpath"]["error"] == "HYPOTHESIS-FAIL"
        && fc["fc2"]["witness"] == "Y";
    line(
        ok,
        format!(
            "oracle e(x;S) = {}, o(x)e(S) = {}, fastpath {}, dim S = {}, e(S) = {}",
            samuel["oracle"]["value"], samuel["order_product"]["value"], samuel["fastpath"]["error"],
            hilbert["dim"], hilbert["multiplicity"]["value"]
        ),
    )
}

fn order_products() -> Line {
    let mut n = 0;
    let mut ok = true;
    let mut values = Vec::new();
    for name in ["sop_plane.gm", "sop_random.gm", "sop_space.gm", "cubic_cone.gm"] {
        let v = fixture(name);
        for r in reports(&v, "cmd samuel") {
            let res = &r["results"];
            let (o, f) = (value(&res["oracle"]), value(&res["fastpath"]));
            ok &= exact(o, f);
            values.push(format!("{}", o.unwrap_or(0)));
            n += 1;
        }
    }
    ok &= n >= 5;
    line(ok, format!("{n} systems of parameters, fastpath = oracle: [{}]", values.join(", ")))
}

fn transfer() -> Line {
    let v = fixture("transfer.gm");
    let domain: Vec<_> = reports(&v, "cmd transfer");
    let domain_ok = domain.iter().all(|r| r["results"]["equal"] == true);
    let c = fixture("counterexample.gm");
    let non_domain = &reports(&c, "cmd transfer")[0]["results"];
    let ok = domain_ok && !domain.is_empty() && non_domain["equal"] == false;
    // outside the hypotheses actually needed: m-primary I in a domain with
    // in I not m-primary
    let k = fixture("transfer_counterexample.gm");
    let outside: Vec<String> = reports(&k, "cmd transfer")
        .iter()
        .map(|r| format!("{} vs {}", r["results"]["lhs"]["value"], r["results"]["rhs"]["value"].as_str().unwrap_or("?")))
        .collect();
    line(
        ok,
        format!(
            "{} domain transfers equal; non-domain equal = {}; recorded domain failures, lhs vs rhs: {}",
            domain.len(),
            non_domain["equal"],
            outside.join(", ")
        ),
    )
}

fn rees_and_mixed() -> Line {
    let plane = fixture("rees_plane.gm");
    let cone = fixture("cubic_cone.gm");
    let mut rees = Vec::new();
    let mut ok = true;
    for r in reports(&plane, "cmd rees_mult").into_iter().chain(reports(&cone, "cmd rees_mult")) {
        let res = &r["results"];
        let (o, f) = (value(&res["oracle"]), value(&res["fastpath"]));
        ok &= exact(o, f);
        rees.push(o.unwrap_or(0));
    }
    ok &= rees == [2, 3, 2, 6];
    let mut mixed = 0;
    let mut vanishing = 0;
    for r in reports(&plane, "cmd mixed ").into_iter().chain(reports(&cone, "cmd mixed ")) {
        for e in r["results"]["by_index"].as_array().unwrap() {
            ok &= e["agree"] == true;
            mixed += 1;
            if e["method"] == "mixed-vanishing" {
                vanishing += 1;
                ok &= e["oracle"] == 0;
            }
        }
    }
    line(
        ok,
        format!("e(R(I)) oracle = fastpath = {rees:?}; {mixed} mixed entries agree, {vanishing} vanishing"),
    )
}

fn degree_sequences() -> Line {
    let v = fixture("degseq.gm");
    let mut ok = reports(&v, "cmd degseq").iter().all(|r| r["results"]["agree"] == true);
    let runs = regeneration_invariance(SUITE_SEED, 100);
    ok &= runs.iter().all(|r| r.stable && r.mu_matches);
    line(ok, format!("100 regenerations of {} ideals: degree sequences stable, mu(in I) = mu(I)", runs.len() + 3))
}

fn fc_sequences() -> Line {
    let mut ok = true;
    let mut seen = Vec::new();
    for name in ["fc_plane.gm", "cubic_cone.gm"] {
        let v = fixture(name);
        for r in reports(&v, "cmd fc_sequence") {
            let res = &r["results"];
            ok &= res["agree"] == true;
            for rep in res["reports"].as_array().unwrap() {
                ok &= rep["fc1"]["verdict"] == "PASS" && rep["fc2"]["verdict"] == "PASS";
            }
            seen.push(res["orders"].to_string());
        }
    }
    line(ok, format!("sorted orders equal reduction degree sequences: {}", seen.join(" ")))
}

fn invariance() -> Line {
    let v = fixture("invariance.gm");
    let res = &reports(&v, "cmd invariance")[0]["results"];
    let fast = &res["rees_fastpath"];
    let oracle = &res["rees_oracle"];
    let ok = res["agree"] == true && fast[0] == fast[1] && oracle[0] == oracle[1] && fast == oracle;
    line(ok, format!("e(R(I)), e(R(E)): fastpath {fast}, oracle {oracle}"))
}

fn kernel() -> Line {
    const CASES: u32 = 256;
    let runner = || {
        TestRunner::new(Config {
            cases: CASES,
            failure_persistence: None,
            ..Config::default()
        })
    };
    let mut failures = Vec::new();
    if let Err(e) = runner().run(&(gens_strategy(), common::raw_poly(3, 5, 6)), |(g, f)| check_nf_idempotent(&g, &f)) {
        failures.push(format!("normal form: {e}"));
    }
    let recombination = (
        gens_strategy(),
        proptest::collection::vec(1i64..50, 3),
        proptest::collection::vec(common::raw_poly(3, 2, 3), 3),
    );
    if let Err(e) = runner().run(&recombination, |(g, s, m)| check_gb_recombination(&g, &s, &m)) {
        failures.push(format!("recombination: {e}"));
    }
    if let Err(e) = runner().run(&forms_strategy(), |f| check_hilbert_bruteforce(&f, 10)) {
        failures.push(format!("hilbert: {e}"));
    }
    if let Err(e) = runner().run(&gens_strategy(), |g| check_saturation_fixpoint(&g)) {
        failures.push(format!("saturation: {e}"));
    }
    let detail = if failures.is_empty() {
        format!("{CASES} cases each: NF idempotence, GB recombination, Hilbert degrees 0..10, saturation fixpoint")
    } else {
        failures.join("; ")
    };
    line(failures.is_empty(), detail)
}

fn main() -> ExitCode {
    let criteria: [(&str, Check); 8] = [
        ("counterexample to the order-product formula", counterexample),
        ("order-product formula on systems of parameters", order_products),
        ("colength and multiplicity transfer", transfer),
        ("Rees and mixed multiplicities", rees_and_mixed),
        ("degree-sequence invariance", degree_sequences),
        ("FC sequences with orders equal to degrees", fc_sequences),
        ("Rees multiplicity invariance across reductions", invariance),
        ("kernel properties", kernel),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let l = check();
        failed += usize::from(!l.ok);
        println!(
            "criterion {} [{}] {name}: {} ({} ms)",
            k + 1,
            if l.ok { "PASS" } else { "FAIL" },
            l.detail,
            start.elapsed().as_millis()
        );
    }
    println!("acceptance: {} of {} criteria pass, tolerance {TOLERANCE}", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
