use std::collections::{BTreeMap, BTreeSet};

use serde_json::{json, Value};
use stparam::dims::{cross_check, deformation_dims, rep_side_dims};
use stparam::extcomb::{self, ExtElement, LeviStructure, RootSet};
use stparam::hodge::jacobian_kernel_dim;
use stparam::shape::compositions;
use stparam::{io, liealg, rng, weyl, HodgeParameter, Perm, SemistableShape};

use crate::{Failure, Outcome, SweepKind};

const PRIME: u64 = 5;

/// Stream id for trial `trial` of the `idx`-th shape of a sweep.
fn stream(idx: usize, trial: u64) -> u64 {
    ((idx as u64) << 32) | trial
}

fn sample(seed: u64, idx: usize, trial: u64, sh: &SemistableShape) -> Result<HodgeParameter, Failure> {
    Ok(rng::random_param(&mut rng::trial_rng(seed, stream(idx, trial)), sh, rng::DEFAULT_BOX)?)
}

fn counterexample(kind: &str, seed: u64, idx: usize, trial: u64, p: &HodgeParameter, detail: String) -> Value {
    json!({
        "kind": kind,
        "seed": seed,
        "stream": stream(idx, trial),
        "parameter": io::param_to_json(p),
        "detail": detail,
    })
}

fn set_json(s: &BTreeSet<usize>) -> Value {
    json!(s.iter().collect::<Vec<_>>())
}

pub fn run(kind: SweepKind, seed: u64, trials: Option<u64>, max_n: Option<usize>) -> Result<Outcome, Failure> {
    let (name, trials, max_n) = match kind {
        SweepKind::Fern => ("fern", trials.unwrap_or(5), max_n.unwrap_or(4)),
        SweepKind::Dims => ("dims", trials.unwrap_or(2), max_n.unwrap_or(5)),
        SweepKind::Extcomb => ("extcomb", trials.unwrap_or(100), max_n.unwrap_or(5)),
        SweepKind::Jacobian => ("jacobian", trials.unwrap_or(10), max_n.unwrap_or(5)),
    };
    let limit = if matches!(kind, SweepKind::Extcomb) { 6 } else { 7 };
    if max_n == 0 || max_n > limit {
        return Err(Failure::Input(format!("--max-n must be in 1..={limit} for the {name} sweep")));
    }
    let (table, cex) = match kind {
        SweepKind::Fern => fern(seed, trials, max_n)?,
        SweepKind::Dims => dims(seed, trials, max_n)?,
        SweepKind::Extcomb => ext(seed, trials, max_n)?,
        SweepKind::Jacobian => jacobian(seed, trials, max_n)?,
    };
    let pass = cex.is_empty();
    let report = json!({
        "schema": io::SCHEMA,
        "command": "sweep",
        "kind": name,
        "seed": seed,
        "trials": trials,
        "max_n": max_n,
        "table": table,
        "counterexamples": cex,
        "pass": pass,
    });
    Ok(Outcome { report, pass })
}

fn all_compositions(max_n: usize) -> Vec<Vec<usize>> {
    (1..=max_n).flat_map(compositions).collect()
}

fn fern(seed: u64, trials: u64, max_n: usize) -> Result<(Value, Vec<Value>), Failure> {
    let mut rows = Vec::new();
    let mut cex = Vec::new();
    for (idx, lengths) in all_compositions(max_n).into_iter().enumerate() {
        let sh = SemistableShape::with_lengths(PRIME, &lengths)?;
        let mut passed = 0;
        let mut chains = BTreeSet::new();
        for trial in 0..trials {
            let p = sample(seed, idx, trial, &sh)?;
            let r = liealg::fern_report(&p)?;
            if r.fern_equal {
                passed += 1;
            } else {
                let d = format!("parabolic sum has dim {}, Ad_g(b) has dim {}", r.fern_dim, r.target_dim);
                cex.push(counterexample("fern", seed, idx, trial, &p, d));
            }
            match liealg::hom_fil_chain(&p) {
                Ok(h) => {
                    chains.insert((h.flat, h.sharp, h.diamond, h.fil));
                }
                Err(e) => cex.push(counterexample("hom_chain", seed, idx, trial, &p, e.to_string())),
            }
        }
        let chains: Vec<Value> = chains.into_iter().map(|(a, b, c, d)| json!([a, b, c, d])).collect();
        rows.push(json!({
            "lengths": lengths,
            "s0": set_json(&sh.s0()),
            "fern_pass": passed,
            "hom_chains": chains,
        }));
    }
    Ok((Value::Array(rows), cex))
}

fn links_of(s: usize) -> Vec<BTreeSet<usize>> {
    (0..1u64 << (s - 1)).map(|m| (1..s).filter(|&b| m >> (b - 1) & 1 == 1).collect()).collect()
}

fn dims(seed: u64, trials: u64, max_n: usize) -> Result<(Value, Vec<Value>), Failure> {
    let mut rows = Vec::new();
    let mut cex = Vec::new();
    for (idx, lengths) in all_compositions(max_n).into_iter().enumerate() {
        for links in links_of(lengths.len()) {
            let sh = SemistableShape::with_links(PRIME, &lengths, &links)?;
            let n = sh.n();
            let cc = cross_check(&sh, 0, seed)?;
            let mut borel = Vec::new();
            if links.is_empty() {
                let im_nu = deformation_dims(&sh, &Perm::identity(n)).get("im_nu").unwrap_or(0) as usize;
                let lhs = im_nu + sh.i0().difference(&sh.s0()).count();
                for trial in 0..trials {
                    let p = sample(seed, idx, trial, &sh)?;
                    let r = liealg::fern_report(&p)?;
                    if r.borel_sum_dim != lhs {
                        let d = format!("im_nu + |I0 \\ S0| = {lhs} but the Borel sum has dim {}", r.borel_sum_dim);
                        cex.push(counterexample("borel_sum", seed, idx, trial, &p, d));
                    }
                    borel.push(json!([lhs, r.borel_sum_dim]));
                }
            }
            let d = deformation_dims(&sh, &Perm::identity(n));
            let w0 = deformation_dims(&sh, &weyl::w0_s0(&lengths));
            let mut entries = serde_json::Map::new();
            for (k, e) in &d.entries {
                entries.insert(k.to_string(), json!(e.value));
            }
            entries.insert("hom_w0".into(), json!(w0.get("hom_u")));
            if let Ok(r) = rep_side_dims(&sh) {
                for (k, e) in &r.entries {
                    entries.insert(k.to_string(), json!(e.value));
                }
            }
            let mut violations = cc.violations.clone();
            if d.get("hom_u") != d.get("hom_1") {
                violations.push("hom at the identity differs from 2n - |I0|".into());
            }
            if w0.get("hom_u") != Some(2 * n as i64 - sh.s0().len() as i64) {
                violations.push("hom at w0(S0) differs from 2n - |S0|".into());
            }
            for v in violations {
                cex.push(json!({
                    "kind": "dims",
                    "seed": seed,
                    "shape": io::shape_to_json(&sh),
                    "detail": v,
                }));
            }
            rows.push(json!({
                "lengths": lengths,
                "s0": set_json(&sh.s0()),
                "i0": set_json(&sh.i0()),
                "reps": cc.reps,
                "multinomial": cc.multinomial.to_string(),
                "r_plus_id": cc.r_plus_id,
                "r_plus_w0": cc.r_plus_w0,
                "r_plus_range": [cc.r_plus_range.0, cc.r_plus_range.1],
                "borel_sums": borel,
                "dims": Value::Object(entries),
            }));
        }
    }
    Ok((Value::Array(rows), cex))
}

fn jacobian(seed: u64, trials: u64, max_n: usize) -> Result<(Value, Vec<Value>), Failure> {
    let mut rows = Vec::new();
    let mut cex = Vec::new();
    for (idx, lengths) in all_compositions(max_n).into_iter().enumerate() {
        let sh = SemistableShape::with_lengths(PRIME, &lengths)?;
        let expected = sh.s() - 1;
        let mut seen = BTreeSet::new();
        for trial in 0..trials {
            let p = sample(seed, idx, trial, &sh)?;
            let k = jacobian_kernel_dim(&p)?;
            seen.insert(k);
            if k != expected {
                cex.push(counterexample("jacobian", seed, idx, trial, &p, format!("kernel dim {k}, expected {expected}")));
            }
        }
        rows.push(json!({
            "lengths": lengths,
            "s0": set_json(&sh.s0()),
            "expected": expected,
            "kernel_dims": seen.into_iter().collect::<Vec<_>>(),
        }));
    }
    Ok((Value::Array(rows), cex))
}

/// Labeled compositions of `k` points counted from cut masks: singletons carry two labels.
pub fn brute_count(k: usize) -> u128 {
    if k == 0 {
        return 1;
    }
    let mut total = 0u128;
    for cuts in 0..1u64 << (k - 1) {
        let mut w = 1u128;
        let mut len = 1;
        for pos in 0..k {
            let end = pos == k - 1 || cuts >> pos & 1 == 1;
            if end {
                if len == 1 {
                    w *= 2;
                }
                len = 1;
            } else {
                len += 1;
            }
        }
        total += w;
    }
    total
}

fn subsets(of: &RootSet) -> Vec<RootSet> {
    let v: Vec<usize> = of.iter().copied().collect();
    (0..1u64 << v.len()).map(|m| v.iter().enumerate().filter(|(k, _)| m >> k & 1 == 1).map(|(_, &x)| x).collect()).collect()
}

fn runs(s: &RootSet) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::new();
    let mut prev = None;
    for &x in s {
        if prev.is_some_and(|p| p + 1 == x) {
            *out.last_mut().unwrap() += 1;
        } else {
            out.push(1);
        }
        prev = Some(x);
    }
    out
}

fn elem_json(x: &ExtElement) -> Value {
    Value::Array(x.to_triples().into_iter().map(|(a, b, l)| json!([a, b, l])).collect())
}

fn ext(seed: u64, trials: u64, d: usize) -> Result<(Value, Vec<Value>), Failure> {
    let mut cex = Vec::new();
    let delta: RootSet = (1..=d).collect();

    let f_rows: Vec<Value> = (1..=d)
        .map(|k| {
            let st = LeviStructure::full(k);
            let enumerated = extcomb::basis(&(1..=k).collect(), &RootSet::new(), &st).map(|b| b.len() as u128).unwrap_or(0);
            let (rec, brute) = (extcomb::f(k), brute_count(k));
            if rec != brute || enumerated != brute {
                cex.push(json!({"kind": "f", "k": k, "detail": format!("recurrence {rec}, enumeration {enumerated}, brute {brute}")}));
            }
            json!({"k": k, "f": rec.to_string(), "enumerated": enumerated.to_string(), "brute": brute.to_string()})
        })
        .collect();

    let mut mult_checked = 0u64;
    for j in subsets(&delta) {
        let st = LeviStructure::new(d, j.clone(), vec![0; d + 1])?;
        for i1 in subsets(&j) {
            for i2 in subsets(&i1) {
                let n = extcomb::basis(&i1, &i2, &st)?.len() as u128;
                let diff: RootSet = i1.difference(&i2).copied().collect();
                let product: u128 = runs(&diff).into_iter().map(brute_count).product();
                let formula = extcomb::dim_ext(&i1, &i2, &st)?;
                mult_checked += 1;
                if n != product || formula != product {
                    cex.push(json!({
                        "kind": "multiplicativity",
                        "j": set_json(&j), "i1": set_json(&i1), "i2": set_json(&i2),
                        "detail": format!("basis {n}, formula {formula}, product {product}"),
                    }));
                }
            }
        }
    }

    let dc = d.min(4);
    let mut cup_checked = 0u64;
    for j in subsets(&(1..=dc).collect()) {
        let st = LeviStructure::new(dc, j.clone(), vec![0; dc + 1])?;
        for i1 in subsets(&j) {
            for i2 in subsets(&i1) {
                for i3 in subsets(&i2) {
                    let target: BTreeSet<ExtElement> = extcomb::basis(&i1, &i3, &st)?.into_iter().collect();
                    let mut image = BTreeSet::new();
                    let xs = extcomb::basis(&i1, &i2, &st)?;
                    let ys = extcomb::basis(&i2, &i3, &st)?;
                    for x in &xs {
                        for y in &ys {
                            let c = extcomb::cup(x, y);
                            if !target.contains(&c) {
                                cex.push(json!({"kind": "cup", "x": elem_json(x), "y": elem_json(y), "detail": "product outside the basis"}));
                            }
                            image.insert(c);
                        }
                    }
                    cup_checked += 1;
                    if image.len() != xs.len() * ys.len() {
                        cex.push(json!({
                            "kind": "cup",
                            "i1": set_json(&i1), "i2": set_json(&i2), "i3": set_json(&i3),
                            "detail": format!("{} products but {} distinct", xs.len() * ys.len(), image.len()),
                        }));
                    }
                }
            }
        }
    }

    for trial in 0..trials {
        let mask = trial % ((1u64 << d) - 1) + 1;
        let j: RootSet = (1..=d).filter(|&x| mask >> (x - 1) & 1 == 1).collect();
        let st = LeviStructure::new(d, j.clone(), vec![0; d + 1])?;
        let roots = st.positive_roots();
        let vals = rng::random_torus(&mut rng::trial_rng(seed, trial), roots.len(), rng::DEFAULT_BOX);
        let ls: BTreeMap<(usize, usize), stparam::Scalar> = roots.into_iter().zip(vals).collect();
        let back = extcomb::hyperplane_from_ls(&ls, &st).and_then(|h| extcomb::ls_from_hyperplane(&h, &st));
        if back.as_ref() != Ok(&ls) {
            let coords: BTreeMap<String, String> =
                ls.iter().map(|(&(a, b), v)| (format!("{a},{b}"), stparam::linalg::fmt_scalar(v))).collect();
            cex.push(json!({"kind": "bs_round_trip", "seed": seed, "trial": trial, "j": set_json(&j), "ls": coords}));
        }
    }

    let mut codim_rows = Vec::new();
    for j in subsets(&(1..=dc).collect()) {
        let st = LeviStructure::new(dc, j.clone(), vec![0; dc + 1])?;
        for i1 in subsets(&j) {
            for i2 in subsets(&i1) {
                if i1.len() - i2.len() < 2 {
                    continue;
                }
                let r = extcomb::codim_e_less(&i1, &i2, &st)?;
                if !r.agree {
                    codim_rows.push(json!({
                        "j": set_json(&j), "i1": set_json(&i1), "i2": set_json(&i2),
                        "codim": r.codim.to_string(), "t": r.t,
                    }));
                }
            }
        }
    }

    let table = json!({
        "f": f_rows,
        "multiplicativity_checked": mult_checked,
        "cup_checked": cup_checked,
        "bs_round_trips": trials,
        "codim_disagreements": codim_rows,
    });
    Ok((table, cex))
}
