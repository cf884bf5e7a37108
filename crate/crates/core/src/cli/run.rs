//! Command dispatch and JSON reports.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use super::script::{eval, Arg, Command, Decl, IdealExpr, SessionScript};
use crate::algebra::{AlgElement, AlgIdeal, GradedAlgebra};
use crate::degseq::{
    degree_sequence, initial_ideal, random_regeneration, verify_initial_transfer, TransferKind,
};
use crate::error::{Error, Result};
use crate::fc::{build_fc_sequence, fc_check_element, Fc1Verdict, Fc2Verdict, FcWindow};
use crate::field::Field;
use crate::mixed::{
    bhattacharya_oracle, equimultiple_data, EquimultipleData, invariance_check, mixed_fastpath, mixed_via_fc_quotient,
    rees_fastpath, rees_multiplicity_oracle_of, rees_sum_rule, Grid,
};
use crate::monomial::{MonomialOrder, Ring};
use crate::multiplicity::{
    colength, default_window, local_colength, samuel_fastpath_domain, samuel_fastpath_general,
    samuel_oracle, SamuelResult,
};
use crate::reduction::{find_minimal_reduction, height_and_equimultiple, is_reduction, ReductionVerdict};
use crate::rees::rees_presentation;

pub const SCHEMA_VERSION: u64 = 1;

/// Default bound on `n` in reduction tests.
const DEFAULT_N_MAX: u32 = 8;
const DEFAULT_RETRIES: usize = 32;

/// Outcome class of a command, ordered by exit-code precedence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Pass,
    HypothesisFail,
    Inconclusive,
    Error,
    Disagree,
}

impl Status {
    pub fn tag(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::HypothesisFail => "hypothesis-fail",
            Status::Inconclusive => "inconclusive",
            Status::Error => "error",
            Status::Disagree => "disagree",
        }
    }

    /// Process exit code: 0 pass, 1 disagreement, 2 hypothesis failure,
    /// 3 inconclusive, 4 other errors.
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Disagree => 1,
            Status::HypothesisFail => 2,
            Status::Inconclusive => 3,
            Status::Error => 4,
        }
    }

    fn of_error(e: &Error) -> Status {
        if e.is_inconclusive() {
            Status::Inconclusive
        } else if e.is_hypothesis_failure() {
            Status::HypothesisFail
        } else {
            Status::Error
        }
    }
}

pub fn error_json(e: &Error) -> Value {
    json!({ "error": e.code(), "message": e.to_string() })
}

fn samuel_json(r: &SamuelResult) -> Value {
    let mut v = json!({ "value": r.value, "method": r.method.tag() });
    if let Some((lo, hi)) = r.window {
        v["window"] = json!([lo, hi]);
        v["lengths"] = json!(r.lengths);
        v["stable_differences"] = json!(r.witness);
    }
    v
}

fn valued(value: u64, method: &str) -> Value {
    json!({ "value": value, "method": method })
}

/// Declared objects of a script instantiated over `F`.
pub struct Session<F: Field> {
    pub alg: Arc<GradedAlgebra<F>>,
    pub elems: BTreeMap<String, AlgElement<F>>,
    pub ideals: BTreeMap<String, AlgIdeal<F>>,
    pub seed: u64,
}

impl<F: Field> Session<F> {
    pub fn build(script: &SessionScript, seed: u64) -> Result<Self> {
        let ring = Ring::new(script.ring.vars.clone(), MonomialOrder::DegRevLex);
        let none = |_: &str| None;
        let relations = script
            .ring
            .relations
            .iter()
            .map(|r| eval::<F>(r, &ring, &none))
            .collect::<Result<Vec<_>>>()?;
        let alg = GradedAlgebra::new(&ring, relations)?;
        let mut elems: BTreeMap<String, AlgElement<F>> = BTreeMap::new();
        let mut ideals: BTreeMap<String, AlgIdeal<F>> = BTreeMap::new();
        for d in &script.decls {
            let lookup = |name: &str| elems.get(name).map(|e: &AlgElement<F>| e.rep().clone());
            match d {
                Decl::Elem(name, e) => {
                    let p = eval(e, &ring, &lookup)?;
                    elems.insert(name.clone(), alg.element(&p));
                }
                Decl::Ideal(name, value) => {
                    let ideal = match value {
                        IdealExpr::Gens(gens) => {
                            let ps = gens.iter().map(|g| eval(g, &ring, &lookup)).collect::<Result<Vec<_>>>()?;
                            alg.ideal(&ps)
                        }
                        IdealExpr::Maximal => alg.maximal_ideal(),
                        IdealExpr::Power(None, k) => alg.irrelevant_power(*k),
                        IdealExpr::Power(Some(base), k) => ideals[base].power(*k),
                    };
                    ideals.insert(name.clone(), ideal);
                }
            }
        }
        Ok(Session {
            alg,
            elems,
            ideals,
            seed,
        })
    }

    fn ideal(&self, name: &str) -> Result<AlgIdeal<F>> {
        if name == "maximal" {
            return Ok(self.alg.maximal_ideal());
        }
        self.ideals
            .get(name)
            .cloned()
            .or_else(|| self.elems.get(name).map(|e| self.alg.ideal_of(std::slice::from_ref(e))))
            .ok_or_else(|| Error::Precondition(format!("'{name}' is not an ideal")))
    }

    fn elements(&self, arg: &Arg) -> Result<Vec<AlgElement<F>>> {
        let names: Vec<&String> = match arg {
            Arg::Name(n) => vec![n],
            Arg::List(ns) => ns.iter().collect(),
        };
        let mut out = Vec::new();
        for n in names {
            match self.elems.get(n) {
                Some(e) => out.push(e.clone()),
                None => match self.ideals.get(n) {
                    Some(i) if matches!(arg, Arg::Name(_)) => out.extend(i.elements()),
                    _ => return Err(Error::Precondition(format!("'{n}' is not an element"))),
                },
            }
        }
        Ok(out)
    }
}

/// Typed access to command options.
struct Opts<'a> {
    map: &'a BTreeMap<String, String>,
}

impl Opts<'_> {
    fn get(&self, k: &str) -> Option<&str> {
        self.map.get(k).map(String::as_str)
    }

    fn u32(&self, k: &str, default: u32) -> Result<u32> {
        match self.get(k) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| Error::Precondition(format!("option {k}={v} is not a number"))),
        }
    }

    fn u64(&self, k: &str, default: u64) -> Result<u64> {
        match self.get(k) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| Error::Precondition(format!("option {k}={v} is not a number"))),
        }
    }

    fn flag(&self, k: &str, default: bool) -> Result<bool> {
        match self.get(k) {
            None => Ok(default),
            Some("true") => Ok(true),
            Some("false") => Ok(false),
            Some(v) => Err(Error::Precondition(format!("option {k}={v} is not a boolean"))),
        }
    }

    /// `lo..hi`, inclusive.
    fn range(&self, k: &str) -> Result<Option<(u32, u32)>> {
        let Some(v) = self.get(k) else { return Ok(None) };
        let bad = || Error::Precondition(format!("option {k}={v} is not a range lo..hi"));
        let (a, b) = v.split_once("..").ok_or_else(bad)?;
        let lo: u32 = a.parse().map_err(|_| bad())?;
        let hi: u32 = b.parse().map_err(|_| bad())?;
        if hi < lo {
            return Err(bad());
        }
        Ok(Some((lo, hi)))
    }

    fn mode(&self) -> Result<(bool, bool)> {
        match self.get("mode").unwrap_or("both") {
            "oracle" => Ok((true, false)),
            "fastpath" => Ok((false, true)),
            "both" => Ok((true, true)),
            v => Err(Error::Precondition(format!("mode={v} is not oracle, fastpath or both"))),
        }
    }
}

/// Accumulates results, errors and agreement checks for one command.
struct Out {
    tags: Vec<&'static str>,
    results: Map<String, Value>,
    errors: Vec<Error>,
    /// `None` entries are comparisons with a missing side.
    checks: Vec<Option<bool>>,
}

impl Out {
    fn new() -> Self {
        Out {
            tags: Vec::new(),
            results: Map::new(),
            errors: Vec::new(),
            checks: Vec::new(),
        }
    }

    fn set(&mut self, k: &str, v: Value) {
        self.results.insert(k.to_string(), v);
    }

    /// Stores `r` under `k`, or its error.
    fn put<T>(&mut self, k: &str, r: Result<T>, f: impl FnOnce(&T) -> Value) -> Option<T> {
        match r {
            Ok(v) => {
                self.set(k, f(&v));
                Some(v)
            }
            Err(e) => {
                self.set(k, error_json(&e));
                self.errors.push(e);
                None
            }
        }
    }

    fn check(&mut self, outcome: Option<bool>) {
        self.checks.push(outcome);
    }

    fn agree(&self) -> Option<Value> {
        if self.checks.is_empty() {
            return None;
        }
        if self.checks.contains(&Some(false)) {
            Some(Value::Bool(false))
        } else if self.checks.contains(&None) {
            Some(Value::Null)
        } else {
            Some(Value::Bool(true))
        }
    }
}

fn both<A: PartialEq>(a: &Option<A>, b: &Option<A>) -> Option<bool> {
    match (a, b) {
        (Some(a), Some(b)) => Some(a == b),
        _ => None,
    }
}

fn strings<T: std::fmt::Display>(xs: &[T]) -> Value {
    Value::Array(xs.iter().map(|x| Value::String(x.to_string())).collect())
}

fn polys<F: Field>(xs: &[AlgElement<F>]) -> Value {
    strings(xs)
}

/// Value at a dotted path; numeric segments index arrays.
fn lookup_path<'a>(v: &'a Value, path: &str) -> Option<&'a Value> {
    let mut cur = v;
    for seg in path.split('.') {
        cur = match cur {
            Value::Object(m) => m.get(seg)?,
            Value::Array(a) => a.get(seg.parse::<usize>().ok()?)?,
            _ => return None,
        };
    }
    Some(cur)
}

#[allow(clippy::cmp_owned)]
fn matches_expectation(actual: Option<&Value>, expected: &str) -> bool {
    match actual {
        None => expected == "absent",
        Some(Value::String(s)) => s == expected,
        Some(v) => v.to_string() == expected,
    }
}

/// Runs one command and returns its report and status.
pub fn run_command<F: Field>(session: &Session<F>, cmd: &Command) -> (Value, Status) {
    let start = Instant::now();
    let mut out = Out::new();
    if let Err(e) = dispatch(session, cmd, &mut out) {
        out.set("error", error_json(&e).get("error").cloned().unwrap_or(Value::Null));
        out.set("message", Value::String(e.to_string()));
        out.errors.push(e);
    }
    let agree = out.agree();
    if let Some(a) = &agree {
        out.set("agree", a.clone());
    }
    let results = Value::Object(out.results);

    let expectations: Vec<(&str, &str)> = cmd
        .options
        .iter()
        .filter_map(|(k, v)| k.strip_prefix("expect.").map(|p| (p, v.as_str())))
        .collect();
    let mut report = json!({
        "command": cmd.echo,
        "line": cmd.pos.line,
        "tags": out.tags,
        "results": results,
    });
    let status = if expectations.is_empty() {
        if agree == Some(Value::Bool(false)) {
            Status::Disagree
        } else {
            out.errors.iter().map(Status::of_error).max().unwrap_or(Status::Pass)
        }
    } else {
        let mut all = true;
        let checked: Vec<Value> = expectations
            .iter()
            .map(|(path, expected)| {
                let actual = lookup_path(&report["results"], path);
                let pass = matches_expectation(actual, expected);
                all &= pass;
                json!({
                    "path": path,
                    "expected": expected,
                    "actual": actual.cloned().unwrap_or(Value::Null),
                    "pass": pass,
                })
            })
            .collect();
        report["expectations"] = Value::Array(checked);
        if all {
            Status::Pass
        } else {
            Status::Disagree
        }
    };
    report["status"] = Value::String(status.tag().into());
    report["wall_time_ms"] = json!(start.elapsed().as_millis() as u64);
    (report, status)
}

fn arg(cmd: &Command, k: usize) -> Result<&Arg> {
    cmd.args
        .get(k)
        .ok_or_else(|| Error::Precondition(format!("{} needs at least {} argument(s)", cmd.name, k + 1)))
}

fn name_arg(cmd: &Command, k: usize) -> Result<&str> {
    match arg(cmd, k)? {
        Arg::Name(n) => Ok(n),
        Arg::List(_) => Err(Error::Precondition(format!("argument {} must be a name", k + 1))),
    }
}

fn ideal_arg<F: Field>(s: &Session<F>, cmd: &Command, k: usize) -> Result<AlgIdeal<F>> {
    s.ideal(name_arg(cmd, k)?)
}

fn dispatch<F: Field>(s: &Session<F>, cmd: &Command, out: &mut Out) -> Result<()> {
    let opts = Opts { map: &cmd.options };
    let seed = opts.u64("seed", s.seed)?;
    let retries = opts.u32("retries", DEFAULT_RETRIES as u32)? as usize;
    let n_max = opts.u32("nmax", DEFAULT_N_MAX)?;
    match cmd.name.as_str() {
        "hilbert" => {
            out.tags.push("hilbert-series");
            let h = s.alg.hilbert();
            out.set("dim", json!(h.dimension));
            out.set("multiplicity", valued(h.multiplicity as u64, "homogeneous-series"));
            out.set("numerator", json!(h.numerator));
            out.set("reduced_numerator", json!(h.reduced));
        }
        "groebner" => {
            out.tags.push("groebner-basis");
            let i = ideal_arg(s, cmd, 0)?;
            out.set("generators", strings(i.reps()));
            out.set("lift_groebner_basis", strings(i.lift().groebner()));
        }
        "degseq" => {
            out.tags.push("degree-sequence");
            let i = ideal_arg(s, cmd, 0)?;
            let init = initial_ideal(&i)?;
            let seq = init.degree_sequence();
            out.set("degree_sequence", json!(seq));
            out.set("method", json!("graded-span-adjustment"));
            out.set("mu", json!(init.mu));
            out.set("initial_ideal", polys(&init.initial_forms()));
            out.set("adjusted_basis", polys(&init.basis));
            let regenerations = opts.u32("regenerations", 0)?;
            if regenerations > 0 {
                out.tags.push("degree-sequence-invariance");
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut same_seq = true;
                let mut same_mu = true;
                for _ in 0..regenerations {
                    let regen = s.alg.ideal_of(&random_regeneration(&i.elements(), &mut rng));
                    let other = initial_ideal(&regen)?;
                    same_seq &= other.degree_sequence() == seq;
                    same_mu &= other.ideal.minimal_basis()?.mu == init.mu;
                }
                out.set(
                    "regenerations",
                    json!({ "count": regenerations, "same_degree_sequence": same_seq, "mu_in_equals_mu": same_mu }),
                );
                out.check(Some(same_seq && same_mu));
            }
        }
        "colength" => {
            out.tags.push("colength");
            let i = ideal_arg(s, cmd, 0)?;
            out.put("colength", colength(&i), |v| valued(*v, "k-dimension"));
            out.put("local_colength", local_colength(&i), |v| valued(*v, "local-length"));
        }
        "transfer" => {
            let i = ideal_arg(s, cmd, 0)?;
            let kind = match opts.get("kind").unwrap_or("colength") {
                "colength" => TransferKind::Colength,
                "samuel" => TransferKind::Samuel,
                "graded-mult" => TransferKind::GradedMultiplicity,
                v => return Err(Error::Precondition(format!("kind={v} is not colength, samuel or graded-mult"))),
            };
            out.tags.push(match kind {
                TransferKind::Colength => "initial-colength-transfer",
                TransferKind::Samuel => "initial-samuel-transfer",
                TransferKind::GradedMultiplicity => "initial-multiplicity-transfer",
            });
            let domain = opts.flag("domain", false)?;
            let rep = verify_initial_transfer(&i, kind)?;
            out.set("kind", json!(kind.tag()));
            out.set("lhs", valued(rep.lhs, rep.lhs_method));
            out.set(
                "rhs",
                match rep.rhs {
                    Some(v) => valued(v, rep.rhs_method),
                    None => json!({ "value": "INFINITE", "method": rep.rhs_method }),
                },
            );
            out.set("equal", json!(rep.equal));
            out.set("domain_asserted", json!(domain));
            if domain {
                out.check(Some(rep.equal));
            }
        }
        "samuel" => samuel(s, cmd, &opts, out, seed, retries, n_max)?,
        "reduction" => {
            out.tags.push("reduction-test");
            let j = ideal_arg(s, cmd, 0)?;
            let i = ideal_arg(s, cmd, 1)?;
            let cert = is_reduction(&j, &i, n_max)?;
            out.set("verdict", json!(cert.verdict.to_string()));
            out.set(
                "n",
                match cert.verdict {
                    ReductionVerdict::Reduction(n) => json!(n),
                    ReductionVerdict::Inconclusive(_) => Value::Null,
                },
            );
            out.set("detail", json!(cert.detail));
        }
        "spread" => {
            out.tags.push("analytic-spread");
            let i = ideal_arg(s, cmd, 0)?;
            let h = height_and_equimultiple(&i)?;
            out.set("analytic_spread", json!(h.spread));
            out.set("height", json!(h.height));
            out.set("height_convention", json!("codimension: dim S - dim S/I"));
            out.set("equimultiple", json!(h.equimultiple));
        }
        "min_reduction" => {
            out.tags.push("minimal-reduction");
            let i = ideal_arg(s, cmd, 0)?;
            let homogeneous = opts.flag("homogeneous", i.is_homogeneous())?;
            let red = find_minimal_reduction(&i, homogeneous, seed, retries, n_max)?;
            out.set("generators", polys(&red.generators));
            out.set("degrees", json!(red.degrees));
            out.set("analytic_spread", json!(red.spread));
            out.set("verdict", json!(red.certificate.verdict.to_string()));
            out.set("attempts", json!(red.attempts));
        }
        "fc_check" => {
            out.tags.push("fc-conditions");
            let x = s.elements(arg(cmd, 0)?)?;
            let [x] = x.as_slice() else {
                return Err(Error::Precondition("fc_check takes one element".into()));
            };
            let ideals: Vec<AlgIdeal<F>> = match arg(cmd, 1)? {
                Arg::Name(n) => vec![s.ideal(n)?],
                Arg::List(ns) => ns.iter().map(|n| s.ideal(n)).collect::<Result<_>>()?,
            };
            let slot = opts.u32("slot", 1)?.max(1) as usize - 1;
            let window = fc_window(&opts)?;
            let rep = fc_check_element(x, &ideals, &s.alg.maximal_ideal(), slot, window)?;
            out.set("element", json!(x.to_string()));
            out.set("slot", json!(slot + 1));
            out.set("window", fc_window_json(window));
            out.set("fc1", fc1_json(&rep.fc1));
            out.set("fc2", fc2_json(&rep.fc2));
        }
        "fc_sequence" => {
            out.tags.push("fc-reduction-degree-sequence");
            let i = ideal_arg(s, cmd, 0)?;
            let window = fc_window(&opts)?;
            let spread = height_and_equimultiple(&i)?.spread;
            let j = match cmd.args.get(1) {
                Some(_) => ideal_arg(s, cmd, 1)?,
                None => find_minimal_reduction(&i, i.is_homogeneous(), seed, retries, n_max)?.ideal,
            };
            let seq = build_fc_sequence(&j, &i, spread, seed, retries, window)?;
            let degs = if j.is_homogeneous() && j.minimal_basis()?.mu == spread {
                Some(degree_sequence(&j)?)
            } else {
                None
            };
            out.set("reduction", json!(j.to_string()));
            out.set("elements", polys(&seq.elements));
            out.set("orders", json!(seq.order_multiset()));
            out.set(
                "reports",
                Value::Array(
                    seq.reports
                        .iter()
                        .map(|r| json!({ "element": r.element.to_string(), "fc1": fc1_json(&r.fc1), "fc2": fc2_json(&r.fc2) }))
                        .collect(),
                ),
            );
            out.set("attempts", json!(seq.attempts));
            out.set("window", fc_window_json(window));
            if let Some(degs) = degs {
                out.set("reduction_degree_sequence", json!(degs));
                out.check(Some(degs == seq.order_multiset()));
            }
        }
        "mixed" => mixed(s, cmd, &opts, out, seed, retries, n_max)?,
        "mixed_fc" => {
            out.tags.push("fc-quotient-mixed");
            let xs = match cmd.args.first() {
                Some(a) => s.elements(a)?,
                None => Vec::new(),
            };
            let res = mixed_via_fc_quotient(&s.alg, &xs, opts.range("window")?)?;
            out.set("t", json!(xs.len()));
            out.set("quotient_multiplicity", samuel_json(&res.quotient));
            out.set(
                "order_product",
                match res.order_product {
                    Some(v) => valued(v, "order-product"),
                    None => Value::Null,
                },
            );
            if res.order_product.is_some() {
                out.check(res.agree);
            }
            if let Some(name) = opts.get("compare") {
                let i = s.ideal(name)?;
                let t = xs.len();
                let entry = bhattacharya_oracle(std::slice::from_ref(&i), None).map(|tab| tab.single(t));
                if let Some(Some(v)) = out.put("oracle_entry", entry, |v| match v {
                    Some(v) => valued(*v, "bhattacharya-fit"),
                    None => Value::Null,
                }) {
                    out.check(Some(v == res.quotient.value));
                } else {
                    out.check(None);
                }
            }
        }
        "rees" => {
            out.tags.push("rees-presentation");
            let i = ideal_arg(s, cmd, 0)?;
            let pres = rees_presentation(&i)?;
            out.set("ring", json!(pres.ring.names()));
            out.set("rees_ideal", strings(pres.ideal.groebner()));
            out.set("dim", json!(pres.dim));
            out.set("generators", polys(&pres.generators));
            out.set("substitution_check", json!(pres.check_substitution()));
        }
        "rees_mult" => {
            out.tags.push("rees-degree-sum");
            let i = ideal_arg(s, cmd, 0)?;
            let (want_oracle, want_fast) = opts.mode()?;
            out.set("filtration", json!("N-adic on k[x, T] / rees_ideal"));
            let fast = if want_fast {
                let data = out.put("equimultiple", equimultiple_data(&i, seed, retries, n_max), equimultiple_json);
                data.map(|data| {
                    let f = rees_fastpath(&data);
                    out.set("fastpath", valued(f, "rees-degree-sum"));
                    let rule = rees_sum_rule(&data).ok();
                    out.set("sum_rule", json!({ "value": rule, "method": "mixed-sum-rule", "agree": rule == Some(f) }));
                    out.check(Some(rule == Some(f)));
                    f
                })
            } else {
                None
            };
            if want_fast && fast.is_none() {
                out.set("fastpath", out.results["equimultiple"].clone());
            }
            let oracle = if want_oracle {
                out.put("oracle", rees_multiplicity_oracle_of(&i, opts.range("window")?), samuel_json)
                    .map(|r| r.value)
            } else {
                None
            };
            if want_oracle && want_fast {
                out.check(both(&fast, &oracle));
            }
        }
        "invariance" => {
            out.tags.push("rees-reduction-invariance");
            let i = ideal_arg(s, cmd, 0)?;
            let e = ideal_arg(s, cmd, 1)?;
            let with_oracle = opts.flag("oracle", true)?;
            let rep = invariance_check(&i, &e, with_oracle, seed, retries, n_max)?;
            out.set("degree_sequences", json!([rep.degrees_i, rep.degrees_e]));
            out.set("rees_fastpath", json!([rep.rees_fast.0, rep.rees_fast.1]));
            out.set(
                "rees_oracle",
                match rep.rees_oracle {
                    Some((a, b)) => json!([a, b]),
                    None => Value::Null,
                },
            );
            out.set(
                "mixed_fastpath",
                Value::Array(rep.mixed_fast.iter().map(|(a, b)| json!([a, b])).collect()),
            );
            out.set("method", json!("rees-degree-sum"));
            out.check(Some(rep.agree));
        }
        other => return Err(Error::Precondition(format!("unknown command '{other}'"))),
    }
    Ok(())
}

fn equimultiple_json(d: &EquimultipleData) -> Value {
    json!({
        "height": d.height,
        "height_convention": "codimension: dim S - dim S/I",
        "degree_sequence": d.degrees,
        "e_S": d.e_s,
    })
}

fn fc_window(opts: &Opts) -> Result<FcWindow> {
    let mut w = FcWindow::default();
    if let Some(r) = opts.range("slot_window")? {
        w.slot = r;
    }
    w.others_hi = opts.u32("others_hi", w.others_hi)?;
    Ok(w)
}

fn fc_window_json(w: FcWindow) -> Value {
    json!({ "slot": [w.slot.0, w.slot.1], "others": [0, w.others_hi] })
}

fn fc1_json(v: &Fc1Verdict) -> Value {
    match v {
        Fc1Verdict::Pass { tuples } => json!({ "verdict": "PASS", "tuples": tuples }),
        Fc1Verdict::Fail { tuple } => json!({ "verdict": "FAIL", "tuple": tuple }),
    }
}

fn fc2_json<F: Field>(v: &Fc2Verdict<F>) -> Value {
    match v {
        Fc2Verdict::Pass => json!({ "verdict": "PASS" }),
        Fc2Verdict::Fail { witness } => json!({ "verdict": "FAIL", "witness": witness.to_string() }),
    }
}

fn samuel<F: Field>(
    s: &Session<F>,
    cmd: &Command,
    opts: &Opts,
    out: &mut Out,
    seed: u64,
    retries: usize,
    n_max: u32,
) -> Result<()> {
    let (want_oracle, want_fast) = opts.mode()?;
    let domain = opts.flag("domain", false)?;
    let a = arg(cmd, 0)?;
    let is_ideal = matches!(a, Arg::Name(n) if s.ideals.contains_key(n) || n == "maximal");
    let d = s.alg.dim();
    let window = opts.range("window")?.unwrap_or_else(|| default_window(d));
    let (q, xs) = if is_ideal {
        let q = ideal_arg(s, cmd, 0)?;
        let xs = q.elements();
        (q, xs)
    } else {
        let xs = s.elements(a)?;
        (s.alg.ideal_of(&xs), xs)
    };
    out.set("ideal", json!(q.to_string()));
    out.set("e_S", valued(s.alg.multiplicity(), "homogeneous-series"));
    let oracle = if want_oracle {
        out.put("oracle", samuel_oracle(&q, window), samuel_json).map(|r| r.value)
    } else {
        None
    };
    let fast = if want_fast {
        if is_ideal && domain {
            out.tags.push("domain-reduction-degree-product");
            let red = find_minimal_reduction(&q, q.is_homogeneous(), seed, retries, n_max)
                .and_then(|red| samuel_fastpath_domain(&q, &red.ideal, true, n_max).map(|r| (r, red)));
            out.put("fastpath", red, |(r, red)| {
                let mut v = samuel_json(r);
                v["reduction"] = polys(&red.generators);
                v
            })
            .map(|(r, _)| r.value)
        } else {
            out.tags.push("sop-order-product");
            let orders: Vec<Value> = xs
                .iter()
                .map(|x| match x.order().finite() {
                    Some(o) => json!(o),
                    None => Value::Null,
                })
                .collect();
            out.set("orders", Value::Array(orders));
            out.put("fastpath", samuel_fastpath_general(&xs), samuel_json).map(|r| r.value)
        }
    } else {
        None
    };
    if !out.tags.contains(&"sop-order-product") && !out.tags.contains(&"domain-reduction-degree-product") {
        out.tags.push("samuel-multiplicity");
    }
    // the order product itself, reported even when its hypotheses fail
    if xs.len() == d {
        if let Some(prod) = xs
            .iter()
            .map(|x| x.order().finite().map(u64::from))
            .collect::<Option<Vec<u64>>>()
        {
            out.set(
                "order_product",
                valued(prod.iter().product::<u64>() * s.alg.multiplicity(), "order-product"),
            );
        }
    }
    if want_oracle && want_fast {
        out.check(both(&oracle, &fast));
    }
    Ok(())
}

fn mixed<F: Field>(
    s: &Session<F>,
    cmd: &Command,
    opts: &Opts,
    out: &mut Out,
    seed: u64,
    retries: usize,
    n_max: u32,
) -> Result<()> {
    out.tags.push("mixed-degree-product");
    let ideals: Vec<AlgIdeal<F>> = match arg(cmd, 0)? {
        Arg::Name(n) => vec![s.ideal(n)?],
        Arg::List(ns) => ns.iter().map(|n| s.ideal(n)).collect::<Result<_>>()?,
    };
    let (want_oracle, want_fast) = opts.mode()?;
    let grid = match (opts.range("grid0")?, opts.range("grid")?) {
        (None, None) => None,
        (g0, g) => {
            let g = g.or(g0).unwrap();
            let g0 = g0.unwrap_or(g);
            let mut ranges = vec![g0];
            ranges.extend(std::iter::repeat_n(g, ideals.len()));
            Some(Grid { ranges })
        }
    };
    let table = if want_oracle {
        out.put("oracle", bhattacharya_oracle(&ideals, grid), |t| {
            json!({
                "q": t.q,
                "method": "bhattacharya-fit",
                "entries": t.entries.iter().map(|(k, v)| json!({ "type": k, "value": v })).collect::<Vec<_>>(),
                "grid": t.grid.ranges,
                "fitted_points": t.fitted_points,
                "validated_points": t.validated_points,
            })
        })
    } else {
        None
    };
    if ideals.len() != 1 {
        if want_fast {
            out.set(
                "fastpath",
                error_json(&Error::Precondition("closed forms cover a single ideal".into())),
            );
        }
        return Ok(());
    }
    let i = &ideals[0];
    let data = if want_fast {
        out.put("equimultiple", equimultiple_data(i, seed, retries, n_max), equimultiple_json)
    } else {
        None
    };
    let d = s.alg.dim();
    let mut by_index = Vec::with_capacity(d);
    for k in 0..d {
        let o = table.as_ref().and_then(|t| t.single(k));
        let f = data.as_ref().and_then(|data| mixed_fastpath(data, k).ok());
        let vanishing = data.as_ref().is_some_and(|data| k >= data.height);
        if vanishing {
            out.tags.push("mixed-vanishing");
        }
        let mut entry = json!({ "i": k, "type": [d - 1 - k, k] });
        if want_oracle {
            entry["oracle"] = json!(o);
            entry["oracle_method"] = json!("bhattacharya-fit");
        }
        if want_fast {
            entry["fastpath"] = json!(f);
            entry["method"] = json!(if vanishing { "mixed-vanishing" } else { "mixed-degree-product" });
        }
        if want_oracle && want_fast {
            let agree = both(&o, &f);
            entry["agree"] = json!(agree);
            out.check(agree);
        }
        by_index.push(entry);
    }
    out.tags.dedup();
    out.set("by_index", Value::Array(by_index));
    Ok(())
}

/// Runs every command of a parsed script over `F`.
pub fn run_script<F: Field>(script: &SessionScript, seed: u64) -> (Value, Status) {
    let start = Instant::now();
    let mut report = json!({
        "schema": SCHEMA_VERSION,
        "field": F::descriptor(),
        "seed": seed,
        "ring": {
            "name": script.ring.name,
            "vars": script.ring.vars,
        },
    });
    let session = match Session::<F>::build(script, seed) {
        Ok(s) => s,
        Err(e) => {
            let status = Status::of_error(&e).max(Status::Error);
            report["error"] = error_json(&e);
            report["status"] = json!(status.tag());
            return (report, status);
        }
    };
    report["ring"]["relations"] = strings(session.alg.relations().gens());
    report["ring"]["dim"] = json!(session.alg.dim());
    report["ring"]["multiplicity"] = valued(session.alg.multiplicity(), "homogeneous-series");
    let mut worst = Status::Pass;
    let mut reports = Vec::with_capacity(script.commands.len());
    for cmd in &script.commands {
        let (r, st) = run_command(&session, cmd);
        worst = worst.max(st);
        reports.push(r);
    }
    let passed = reports.iter().filter(|r| r["status"] == "pass").count();
    report["reports"] = Value::Array(reports);
    report["summary"] = json!({
        "commands": script.commands.len(),
        "passed": passed,
        "status": worst.tag(),
        "exit_code": worst.exit_code(),
    });
    report["wall_time_ms"] = json!(start.elapsed().as_millis() as u64);
    (report, worst)
}

/// Drops every `wall_time_ms` entry, for comparisons across runs.
pub fn strip_timings(v: &mut Value) {
    match v {
        Value::Object(m) => {
            m.remove("wall_time_ms");
            for (_, x) in m.iter_mut() {
                strip_timings(x);
            }
        }
        Value::Array(a) => a.iter_mut().for_each(strip_timings),
        _ => {}
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::script::parse_script;
    use crate::Fp32003;

    fn run(text: &str) -> (Value, Status) {
        run_script::<Fp32003>(&parse_script(text).unwrap(), 0)
    }

    const PLANE: &str = "ring S vars [x, y] field fp(32003) relations [];\n";

    #[test]
    fn paths_index_objects_and_arrays() {
        let v = json!({ "a": { "b": [10, { "c": "z" }] } });
        assert_eq!(lookup_path(&v, "a.b.0"), Some(&json!(10)));
        assert_eq!(lookup_path(&v, "a.b.1.c"), Some(&json!("z")));
        assert_eq!(lookup_path(&v, "a.b.2"), None);
        assert!(matches_expectation(lookup_path(&v, "a.b.1.c"), "z"));
        assert!(matches_expectation(lookup_path(&v, "a.b"), "[10,{\"c\":\"z\"}]"));
        assert!(matches_expectation(None, "absent"));
    }

    #[test]
    fn agreement_is_false_before_unknown() {
        let mut out = Out::new();
        assert_eq!(out.agree(), None);
        out.check(Some(true));
        assert_eq!(out.agree(), Some(Value::Bool(true)));
        out.check(None);
        assert_eq!(out.agree(), Some(Value::Null));
        out.check(Some(false));
        assert_eq!(out.agree(), Some(Value::Bool(false)));
    }

    #[test]
    fn degree_sequence_of_a_non_homogeneous_ideal() {
        let (v, status) = run(&format!("{PLANE}ideal I = [x + y^2, y]; cmd degseq I;"));
        assert_eq!(v["reports"][0]["results"]["degree_sequence"], json!([1, 1]));
        assert_eq!(status, Status::Pass);
    }

    #[test]
    fn rees_multiplicity_of_the_square_of_the_maximal_ideal() {
        let (v, status) = run(&format!("{PLANE}ideal I = [x^2, x*y, y^2]; cmd rees_mult I mode=both;"));
        let r = &v["reports"][0]["results"];
        assert_eq!((&r["fastpath"]["value"], &r["oracle"]["value"]), (&json!(3), &json!(3)));
        assert_eq!(r["agree"], true);
        assert_eq!(status, Status::Pass);
    }

    #[test]
    fn failed_expectation_is_a_disagreement() {
        let (v, status) = run(&format!("{PLANE}ideal I = maximal; cmd spread I expect.analytic_spread=1;"));
        let e = &v["reports"][0]["expectations"][0];
        assert_eq!((&e["actual"], &e["pass"]), (&json!(2), &json!(false)));
        assert_eq!(status, Status::Disagree);
        assert_eq!(v["summary"]["exit_code"], 1);
    }

    #[test]
    fn unknown_commands_fail_to_parse() {
        let err = parse_script(&format!("{PLANE}cmd frobnicate;")).unwrap_err();
        assert_eq!(err.code(), "PARSE");
        assert!(err.to_string().contains("2:5"), "{err}");
    }

    #[test]
    fn search_exhaustion_is_inconclusive() {
        let (_, status) = run(&format!("{PLANE}ideal I = [x^2, x*y, y^3]; cmd min_reduction I retries=2;"));
        assert_eq!(status, Status::Inconclusive);
    }

    #[test]
    fn element_lists_reject_ideals() {
        let (v, _) = run(&format!("{PLANE}ideal I = maximal; elem f = x; cmd samuel [f, I];"));
        assert!(v["reports"][0]["results"]["message"].as_str().unwrap().contains("'I' is not an element"));
    }
}
