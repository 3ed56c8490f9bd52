use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use ncgap::codes::CodeSpec;
use ncgap::codingsim::{solve_and_verify, Throughput};
use ncgap::instance::{
    build_sampling_instance, build_tree_instance, dual_certificate, gap_lower_bound, measure_params, ConditionReport,
    GapInstance, GapParams, Status,
};
use ncgap::mvfamily::{brute_force_family, canonical_set, trivial_family};
use ncgap::packing::{
    dual_value, fractional_packing, generalized_sparsity, Mode, PackingError, PackingInstance, MAX_SPARSITY_VERTICES,
};
use ncgap::rational::{self, Exact, Rational};
use ncgap::rdldc::{build_rd_gap_instance, ldc_to_rdldc, rd_distance, HypergraphMatchingFamily, RdError};
use ncgap::steiner::SteinerError;
use serde::Serialize;
use serde_json::{json, Value};

use crate::{guard, usage, Alg, Backend, BoundArgs, BuildArgs, CodeArgs, RdldcArgs, VerifyArgs};

const MV_SEARCH_BUDGET: u64 = 10_000_000;

fn make_code(a: &CodeArgs) -> Result<CodeSpec> {
    let delta = rational::parse(&a.delta).map_err(|e| usage(e.to_string()))?;
    let code = match a.code {
        Backend::Hadamard => CodeSpec::hadamard(a.k, delta)?,
        Backend::Mock => {
            let n = a.n.ok_or_else(|| usage("--code mock needs --N"))?;
            let q = a.q.ok_or_else(|| usage("--code mock needs --q"))?;
            CodeSpec::mock_smooth(a.k, n, q, delta)?
        }
        Backend::Mv => {
            let family = match a.h {
                Some(h) => {
                    let s = if a.s.is_empty() { canonical_set(a.m)? } else { a.s.clone() };
                    brute_force_family(a.m, h, &s, a.k, MV_SEARCH_BUDGET)?
                }
                None => trivial_family(a.k, a.m)?,
            };
            CodeSpec::matching_vector(family, delta)?
        }
    };
    Ok(code)
}

/// Flattens the parsed arguments into the string map embedded in every output.
fn config_map(command: &str, args: &impl Serialize) -> BTreeMap<String, String> {
    let mut map = BTreeMap::new();
    map.insert("command".to_string(), command.to_string());
    if let Ok(Value::Object(obj)) = serde_json::to_value(args) {
        for (k, v) in obj {
            let s = match v {
                Value::Null => continue,
                Value::String(s) => s,
                Value::Array(items) => items.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(","),
                other => other.to_string(),
            };
            map.insert(k, s);
        }
    }
    map
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: PathBuf, text: &str) -> Result<String> {
    std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(path.display().to_string())
}

fn with_extension(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(format!(".{ext}"));
    PathBuf::from(s)
}

fn exact(q: &Rational) -> Value {
    serde_json::to_value(Exact(q.clone())).expect("rationals serialize")
}

fn status(s: Status) -> &'static str {
    match s {
        Status::Pass => "PASS",
        Status::Fail => "FAIL",
        Status::NotChecked => "NOT CHECKED",
    }
}

fn print_json(v: &Value) {
    use std::io::Write;
    let text = serde_json::to_string_pretty(v).expect("reports serialize");
    // A closed pipe (`ncgap bound x | head`) is not an error worth a panic.
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

/// Throughput `a` of the simulated linear solution, when one can be checked.
struct Coding {
    a: Option<Rational>,
    source: &'static str,
    failed: bool,
    report: Value,
}

fn coding(inst: &GapInstance, code: Option<&CodeSpec>, solve_limit: usize, exhaustive: u64) -> Coding {
    let skip = |source| Coding { a: None, source, failed: false, report: Value::Null };
    let Some(code) = code else {
        return skip("no_code");
    };
    if code.linear().is_err() {
        return skip("mock_code");
    }
    if inst.sink_count() == 0 {
        return skip("no_sinks");
    }
    if inst.vertex_count() > solve_limit {
        return skip("over_solve_limit");
    }
    match solve_and_verify(inst, code, exhaustive, inst.provenance.seed) {
        Ok((_, corr, cap, tp)) => {
            let a = match tp {
                Throughput::Finite(a) if corr.ok() && cap.ok => Some(a),
                _ => None,
            };
            Coding {
                failed: a.is_none(),
                source: if a.is_some() { "verified" } else { "failed" },
                a,
                report: json!({ "correctness": corr, "capacity": cap }),
            }
        }
        Err(e) => Coding { a: None, source: "failed", failed: true, report: json!({ "error": e.to_string() }) },
    }
}

/// Parameters with `a` taken from the coding solution, or 1 when none was checked.
fn bound_params(params: &GapParams, c: &Coding) -> (GapParams, &'static str) {
    match &c.a {
        Some(a) => (GapParams { a: a.clone(), ..params.clone() }, "verified"),
        None => (GapParams { a: rational::int(1), ..params.clone() }, "assumed"),
    }
}

fn param_line(p: &GapParams, bound: &Rational) -> String {
    format!(
        "a = {}, b = {}, f = {}, m = {}, r = {}, gap lower bound = {}",
        rational::display(&p.a),
        p.b,
        p.f,
        p.m,
        p.r,
        rational::display(bound)
    )
}

pub fn build(a: &BuildArgs) -> Result<bool> {
    let code = make_code(&a.code)?;
    let config = config_map("build", a);
    let (mut inst, build_report) = match a.alg {
        Alg::Sampling => {
            let (i, r) = build_sampling_instance(&code, a.seed)?;
            (i, serde_json::to_value(r)?)
        }
        Alg::Tree => {
            let (i, r) = build_tree_instance(&code, a.seed)?;
            (i, serde_json::to_value(r)?)
        }
        Alg::Rd => {
            let path = a.family.as_ref().ok_or_else(|| usage("--alg rd needs --family FILE"))?;
            let fam = HypergraphMatchingFamily::from_json(&read(path)?)?;
            let d = a.distance.unwrap_or_else(|| rd_distance(code.k, code.q));
            let delta = Rational::new((fam.min_size() as i64).into(), (fam.n.max(1) as i64).into());
            let (i, r) = build_rd_gap_instance(&code, &fam, &delta, d).map_err(|e| match e {
                RdError::Unvalidated(m) => usage(format!("family does not validate: {m}")),
                other => other.into(),
            })?;
            (i, serde_json::to_value(r)?)
        }
    };
    inst.provenance.seed = a.seed;
    inst.provenance.config = config.clone();

    let c = coding(&inst, Some(&code), a.solve_limit, 1 << 16);
    let (params, cond) = measure_params(&inst, c.a.clone());
    let (bp, a_source) = bound_params(&params, &c);
    let bound = gap_lower_bound(&bp)?;
    let files = vec![
        write(with_extension(&a.out, "json"), &inst.to_json())?,
        write(with_extension(&a.out, "dot"), &inst.to_dot())?,
    ];
    eprintln!("{}", param_line(&bp, &bound));
    print_json(&json!({
        "config": config,
        "build": build_report,
        "vertices": inst.vertex_count(),
        "edges": inst.edge_count(),
        "params": bp,
        "a_source": a_source,
        "coding": { "source": c.source, "report": c.report },
        "conditions": cond,
        "gap_lower_bound": exact(&bound),
        "files": files,
    }));
    Ok(cond.all_hold() && !c.failed)
}

fn load_gap(path: &Path) -> Result<GapInstance> {
    GapInstance::from_json(&read(path)?).map_err(|e| usage(format!("malformed instance {}: {e}", path.display())))
}

fn instance_code(inst: &GapInstance) -> Result<Option<CodeSpec>> {
    Ok(inst.provenance.code.as_ref().map(CodeSpec::from_descriptor).transpose()?)
}

fn print_conditions(cond: &ConditionReport) {
    for c in &cond.conditions {
        let detail = if c.detail.is_empty() { String::new() } else { format!(": {}", c.detail) };
        println!("condition {} ({}) {}{detail}", c.index, c.name, status(c.status));
    }
}

pub fn verify(a: &VerifyArgs) -> Result<bool> {
    let inst = load_gap(&a.instance)?;
    let code = instance_code(&inst)?;
    let c = coding(&inst, code.as_ref(), a.solve_limit, a.exhaustive_limit);
    let (params, cond) = measure_params(&inst, c.a.clone());
    print_conditions(&cond);
    let a_text = match &c.a {
        Some(a) => rational::display(a),
        None => "unverified (bounds assume 1)".to_string(),
    };
    println!(
        "params: a = {a_text}, b = {}, f = {}, m = {}, r = {}",
        params.b,
        params.f,
        params.m,
        params.r
    );
    let coding_line = match c.source {
        "verified" => "PASS".to_string(),
        "failed" => format!("FAIL {}", c.report),
        other => format!("NOT CHECKED ({})", other.replace('_', " ")),
    };
    println!("coding solution {coding_line}");
    Ok(cond.all_hold() && !c.failed)
}

fn exact_guidance(e: PackingError) -> anyhow::Error {
    match e {
        PackingError::TooLarge(m) => guard(format!("{m}; rerun with --approx")),
        PackingError::Steiner(SteinerError::TooManyTerminals(..)) => {
            guard(format!("{e}; sessions with this many terminals are out of reach of the exact tree oracle"))
        }
        other => other.into(),
    }
}

fn packing(inst: &PackingInstance, a: &BoundArgs) -> Result<ncgap::packing::PackingResult> {
    let mode = if a.approx { Mode::Approx { epsilon: a.epsilon } } else { Mode::Exact { tree_limit: a.tree_limit } };
    fractional_packing(inst, mode).map_err(exact_guidance)
}

fn sparsity(inst: &PackingInstance) -> Result<(Value, Option<Rational>)> {
    if inst.n > MAX_SPARSITY_VERTICES {
        return Ok((json!({ "skipped": format!("{} vertices exceed {MAX_SPARSITY_VERTICES}", inst.n) }), None));
    }
    match generalized_sparsity(inst) {
        Ok(s) => Ok((serde_json::to_value(&s)?, Some(s.psi))),
        Err(PackingError::NoCrossingCut) => Ok((json!({ "skipped": "no cut separates a session" }), None)),
        Err(e) => Err(e.into()),
    }
}

fn check(lhs: Option<&Rational>, rhs: Option<&Rational>) -> Value {
    match (lhs, rhs) {
        (Some(l), Some(r)) => Value::Bool(l <= r),
        _ => Value::Null,
    }
}

pub fn bound(a: &BoundArgs) -> Result<bool> {
    let text = read(&a.instance)?;
    let value: Value =
        serde_json::from_str(&text).map_err(|e| usage(format!("malformed JSON in {}: {e}", a.instance.display())))?;
    let config = config_map("bound", a);
    if value.get("vertices").is_none() {
        let inst = PackingInstance::from_json(&text).map_err(|e| usage(format!("malformed packing instance: {e}")))?;
        return bound_packing(&inst, a, config);
    }
    let inst = load_gap(&a.instance)?;
    let code = instance_code(&inst)?;
    let c = coding(&inst, code.as_ref(), a.solve_limit, 1 << 16);
    let (params, cond) = measure_params(&inst, c.a.clone());
    let (bp, a_source) = bound_params(&params, &c);
    let gap = gap_lower_bound(&bp)?;

    let pinst = PackingInstance::from_gap(&inst);
    let cert = dual_certificate(&inst, &bp).ok();
    let (cert_json, cert_value) = match &cert {
        Some(cert) => {
            let checked = match dual_value(&pinst, &cert.y, &cert.z) {
                Ok(rep) => json!({ "feasible": rep.feasible, "violations": rep.violations.len() }),
                Err(e) => json!({ "skipped": e.to_string() }),
            };
            (json!({ "objective": exact(&cert.objective), "check": checked }), Some(cert.objective.clone()))
        }
        None => (Value::Null, None),
    };
    let result = packing(&pinst, a)?;
    let (psi_json, psi) = sparsity(&pinst)?;
    let a_value = c.a.clone();
    let checks = json!({
        "tau_le_certificate": check(result.tau.lower(), cert_value.as_ref()),
        "tau_le_psi": check(result.tau.lower(), psi.as_ref()),
        "a_le_psi": check(a_value.as_ref(), psi.as_ref()),
    });
    print_json(&json!({
        "config": config,
        "params": bp,
        "a_source": a_source,
        "conditions_hold": cond.all_hold(),
        "gap_lower_bound": exact(&gap),
        "dual_certificate": cert_json,
        "tau": result.tau,
        "method": result.method,
        "psi": psi_json,
        "checks": checks,
    }));
    Ok(checks_hold(&checks))
}

fn checks_hold(checks: &Value) -> bool {
    checks.as_object().is_some_and(|m| m.values().all(|v| v.as_bool() != Some(false)))
}

fn bound_packing(inst: &PackingInstance, a: &BoundArgs, config: BTreeMap<String, String>) -> Result<bool> {
    let result = packing(inst, a)?;
    let (dual, dual_objective) = match &result.dual {
        Some(d) => {
            let rep = dual_value(inst, &d.y, &d.z)?;
            (json!({ "objective": exact(&rep.objective), "feasible": rep.feasible }), Some(rep.objective))
        }
        None => (Value::Null, None),
    };
    let (psi_json, psi) = sparsity(inst)?;
    let checks = json!({
        "tau_le_dual": check(result.tau.lower(), dual_objective.as_ref()),
        "tau_le_psi": check(result.tau.lower(), psi.as_ref()),
    });
    print_json(&json!({
        "config": config,
        "tau": result.tau,
        "method": result.method,
        "weights": result.weights,
        "dual": dual,
        "psi": psi_json,
        "checks": checks,
    }));
    Ok(checks_hold(&checks))
}

pub fn rdldc(a: &RdldcArgs) -> Result<bool> {
    let code = make_code(&a.code)?;
    let config = config_map("rdldc", a);
    match ldc_to_rdldc(&code, a.seed, a.retries) {
        Ok(out) => {
            let file = write(a.out.clone(), &out.family.to_json())?;
            let mut report = serde_json::to_value(&out)?;
            if let Some(obj) = report.as_object_mut() {
                obj.remove("family");
                obj.insert("family_file".into(), Value::String(file));
                obj.insert("hyperedges".into(), json!(out.family.hyperedge_count()));
                obj.insert("config".into(), json!(config));
            }
            print_json(&report);
            Ok(true)
        }
        Err(e @ RdError::RetriesExhausted { .. }) => {
            print_json(&json!({ "config": config, "error": e.to_string() }));
            Ok(false)
        }
        Err(e) => Err(e.into()),
    }
}
