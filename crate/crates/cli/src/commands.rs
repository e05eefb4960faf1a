use serde_json::{json, Value};
use stparam::hodge::{forward_extended, reconstruct_traced, NonCritical, PinBranch};
use stparam::io;
use stparam::HodgeParameter;

use crate::{Failure, Outcome};

fn set_json(s: &std::collections::BTreeSet<usize>) -> Value {
    json!(s.iter().collect::<Vec<_>>())
}

pub fn non_critical_json(nc: &NonCritical) -> Value {
    match nc {
        NonCritical::Ok => json!("pass"),
        NonCritical::FailureAt(u, k) => json!({"failure_at": {"u": io::perm_to_json(u), "k": k}}),
    }
}

pub fn branch_name(b: PinBranch) -> &'static str {
    match b {
        PinBranch::Iota => "iota",
        PinBranch::SubWindow => "sub_window",
        PinBranch::QuotWindow => "quot_window",
        PinBranch::Cryst => "cryst",
    }
}

fn pins_json(pins: &std::collections::BTreeMap<(usize, usize), PinBranch>) -> Value {
    Value::Array(pins.iter().map(|(&(a, b), &br)| json!({"a": a, "b": b, "branch": branch_name(br)})).collect())
}

fn load_param(text: &str) -> Result<HodgeParameter, Failure> {
    Ok(io::param_from_json(&io::parse_json(text)?)?)
}

fn require_non_critical(p: &HodgeParameter) -> Result<(), Failure> {
    match p.check_non_critical() {
        NonCritical::Ok => Ok(()),
        NonCritical::FailureAt(u, k) => Err(Failure::Input(format!("critical parameter: minor {k} vanishes at u = {u}"))),
    }
}

pub fn check(text: &str) -> Result<Outcome, Failure> {
    let p = load_param(text)?;
    let sh = p.shape();
    let nc = p.check_non_critical();
    let normalized = match p.normalize() {
        Ok(q) => io::param_to_json(&q),
        Err(e) => json!({"error": e.to_string()}),
    };
    let report = json!({
        "schema": io::SCHEMA,
        "command": "check",
        "shape": io::shape_to_json(sh),
        "n": sh.n(),
        "s": sh.s(),
        "lengths": sh.lengths(),
        "s0": set_json(&sh.s0()),
        "i0": set_json(&sh.i0()),
        "generic": sh.is_generic(),
        "crystalline": sh.is_crystalline(),
        "refinements": p.reps().len(),
        "non_critical": non_critical_json(&nc),
        "normalized": normalized,
    });
    Ok(Outcome { report, pass: true })
}

pub fn forward(text: &str) -> Result<Outcome, Failure> {
    let p = load_param(text)?;
    require_non_critical(&p)?;
    let ext = forward_extended(&p.normalize()?)?;
    Ok(Outcome { report: io::extended_to_json(&ext), pass: true })
}

pub fn reconstruct(text: &str) -> Result<Outcome, Failure> {
    let ext = io::extended_from_json(&io::parse_json(text)?)?;
    let rec = reconstruct_traced(&ext)?;
    let mut report = io::param_to_json(&rec.param);
    report["schema"] = json!(io::SCHEMA);
    report["pins"] = pins_json(&rec.pins);
    Ok(Outcome { report, pass: true })
}

pub fn roundtrip(text: &str) -> Result<Outcome, Failure> {
    let v = io::parse_json(text)?;
    if v.get("windows").is_some() {
        let ext = io::extended_from_json(&v)?;
        let rec = reconstruct_traced(&ext)?;
        let again = forward_extended(&rec.param)?;
        let mismatched: Vec<Value> = ext
            .windows
            .iter()
            .filter(|(k, b)| again.windows.get(k) != Some(*b))
            .map(|(&(a, b), _)| json!([a, b]))
            .collect();
        let same = mismatched.is_empty() && again.windows.len() == ext.windows.len();
        let report = json!({
            "schema": io::SCHEMA,
            "command": "roundtrip",
            "input": "bundle",
            "parameter": io::param_to_json(&rec.param),
            "pins": pins_json(&rec.pins),
            "mismatched_windows": mismatched,
            "consistent": same,
        });
        return Ok(Outcome { report, pass: same });
    }
    let p = io::param_from_json(&v)?;
    require_non_critical(&p)?;
    let ext = forward_extended(&p.normalize()?)?;
    let ext = io::extended_from_json(&io::parse_json(&io::render(&io::extended_to_json(&ext)))?)?;
    let rec = reconstruct_traced(&ext)?;
    let eq = rec.param.equivalent(&p)?;
    let report = json!({
        "schema": io::SCHEMA,
        "command": "roundtrip",
        "input": "parameter",
        "parameter": io::param_to_json(&p.normalize()?),
        "reconstructed": io::param_to_json(&rec.param),
        "pins": pins_json(&rec.pins),
        "equivalent": eq,
    });
    Ok(Outcome { report, pass: eq })
}
