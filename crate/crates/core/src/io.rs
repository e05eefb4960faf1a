//! JSON records for shapes, parameters and forward bundles. Objects are key-sorted and
//! rationals are written as `"p/q"`.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::hodge::{CrystClass, ExtendedBundle, ForwardBundle, HodgeParameter, LeviClass, Side};
use crate::linalg::{fmt_scalar, parse_scalar, Matrix, Scalar};
use crate::shape::{Block, SemistableShape};
use crate::weyl::Perm;

pub const SCHEMA: &str = "v1";

fn perr(path: &str, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("{path}: {msg}"))
}

fn field<'a>(v: &'a Value, key: &str, path: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| perr(path, format!("missing field \"{key}\"")))
}

fn as_u64(v: &Value, path: &str) -> Result<u64> {
    v.as_u64().ok_or_else(|| perr(path, "expected a nonnegative integer"))
}

fn as_usize(v: &Value, path: &str) -> Result<usize> {
    as_u64(v, path).map(|x| x as usize)
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| perr(path, "expected an array"))
}

fn scalar(v: &Value, path: &str) -> Result<Scalar> {
    match v {
        Value::String(s) => parse_scalar(s).map_err(|e| perr(path, e)),
        Value::Number(n) if n.is_i64() => Ok(crate::linalg::q(n.as_i64().unwrap())),
        _ => Err(perr(path, "expected a rational literal \"p/q\"")),
    }
}

pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("line {} column {}: {e}", e.line(), e.column())))
}

/// Pretty JSON with a trailing newline.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

pub fn shape_to_json(sh: &SemistableShape) -> Value {
    let blocks: Vec<Value> =
        sh.blocks().iter().map(|b| json!({"alpha": fmt_scalar(&b.alpha), "length": b.length})).collect();
    json!({"prime": sh.prime(), "blocks": blocks, "weights": sh.weights()})
}

pub fn shape_from_json(v: &Value) -> Result<SemistableShape> {
    let prime = as_u64(field(v, "prime", "shape")?, "shape.prime")?;
    let mut blocks = Vec::new();
    for (k, b) in as_array(field(v, "blocks", "shape")?, "shape.blocks")?.iter().enumerate() {
        let path = format!("shape.blocks[{k}]");
        let alpha = scalar(field(b, "alpha", &path)?, &format!("{path}.alpha"))?;
        let length = as_usize(field(b, "length", &path)?, &format!("{path}.length"))?;
        blocks.push(Block { alpha, length });
    }
    let mut weights = Vec::new();
    for (k, w) in as_array(field(v, "weights", "shape")?, "shape.weights")?.iter().enumerate() {
        weights.push(w.as_i64().ok_or_else(|| perr(&format!("shape.weights[{k}]"), "expected an integer"))?);
    }
    SemistableShape::new(prime, blocks, weights)
}

/// Shape record plus `"matrix": {"i,j": "p/q"}` over the strictly-upper entries (1-based).
pub fn param_to_json(p: &HodgeParameter) -> Value {
    let mut v = shape_to_json(p.shape());
    let mut m = Map::new();
    let l = p.matrix();
    for i in 0..p.n() {
        for j in i + 1..p.n() {
            m.insert(format!("{},{}", i + 1, j + 1), Value::String(fmt_scalar(l.get(i, j))));
        }
    }
    v["matrix"] = Value::Object(m);
    v
}

pub fn param_from_json(v: &Value) -> Result<HodgeParameter> {
    let sh = shape_from_json(v)?;
    let n = sh.n();
    let mut l = Matrix::<Scalar>::identity(n);
    let m = field(v, "matrix", "parameter")?.as_object().ok_or_else(|| perr("matrix", "expected an object"))?;
    for (key, val) in m {
        let path = format!("matrix[\"{key}\"]");
        let (i, j) = key
            .split_once(',')
            .and_then(|(a, b)| Some((a.trim().parse::<usize>().ok()?, b.trim().parse::<usize>().ok()?)))
            .ok_or_else(|| perr(&path, "key must be \"i,j\""))?;
        if !(1 <= i && i < j && j <= n) {
            return Err(perr(&path, format!("need 1 <= i < j <= {n}")));
        }
        l.set(i - 1, j - 1, scalar(val, &path)?);
    }
    HodgeParameter::new(sh, l)
}

pub fn matrix_to_json(m: &Matrix<Scalar>) -> Value {
    let rows: Vec<Value> =
        (0..m.rows()).map(|i| Value::Array((0..m.cols()).map(|j| Value::String(fmt_scalar(m.get(i, j)))).collect())).collect();
    Value::Array(rows)
}

pub fn matrix_from_json(v: &Value, path: &str) -> Result<Matrix<Scalar>> {
    let rows = as_array(v, path)?;
    let mut out = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        let r = as_array(r, &format!("{path}[{i}]"))?;
        out.push(r.iter().enumerate().map(|(j, x)| scalar(x, &format!("{path}[{i}][{j}]"))).collect::<Result<Vec<_>>>()?);
    }
    if out.iter().any(|r| r.len() != out[0].len()) {
        return Err(perr(path, "ragged matrix"));
    }
    if out.is_empty() {
        return Ok(Matrix::zeros(0, 0));
    }
    Ok(Matrix::from_rows(out))
}

pub fn perm_to_json(u: &Perm) -> Value {
    json!(u.one_line())
}

pub fn perm_from_json(v: &Value, path: &str) -> Result<Perm> {
    let line = as_array(v, path)?.iter().map(|x| as_usize(x, path)).collect::<Result<Vec<_>>>()?;
    Perm::from_one_line(&line).ok_or_else(|| perr(path, "not a permutation"))
}

pub fn bundle_to_json(b: &ForwardBundle) -> Value {
    let levi: Vec<Value> = b
        .levi
        .iter()
        .map(|lc| json!({"u": perm_to_json(&lc.u), "blocks": lc.blocks.iter().map(matrix_to_json).collect::<Vec<_>>()}))
        .collect();
    let cst: Vec<Value> = b
        .cst
        .iter()
        .map(|(&(r, q, t, side), m)| json!({"r": r, "q": q, "t": t, "side": side.as_str(), "matrix": matrix_to_json(m)}))
        .collect();
    let iota: Vec<Value> = b
        .iota
        .iter()
        .map(|(&(r, q), (l, u))| json!({"r": r, "q": q, "l": matrix_to_json(l), "u": matrix_to_json(u)}))
        .collect();
    json!({
        "shape": shape_to_json(&b.shape),
        "levi": levi,
        "cryst": matrix_to_json(&b.cryst.c),
        "cst": cst,
        "iota": iota,
    })
}

pub fn bundle_from_json(v: &Value, path: &str) -> Result<ForwardBundle> {
    let shape = shape_from_json(field(v, "shape", path)?)?;
    let mut levi = Vec::new();
    for (k, lc) in as_array(field(v, "levi", path)?, path)?.iter().enumerate() {
        let p = format!("{path}.levi[{k}]");
        let u = perm_from_json(field(lc, "u", &p)?, &format!("{p}.u"))?;
        let blocks = as_array(field(lc, "blocks", &p)?, &p)?
            .iter()
            .enumerate()
            .map(|(i, m)| matrix_from_json(m, &format!("{p}.blocks[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        levi.push(LeviClass { u, blocks });
    }
    let cryst = CrystClass { c: matrix_from_json(field(v, "cryst", path)?, &format!("{path}.cryst"))? };
    let mut cst = BTreeMap::new();
    for (k, e) in as_array(field(v, "cst", path)?, path)?.iter().enumerate() {
        let p = format!("{path}.cst[{k}]");
        let r = as_usize(field(e, "r", &p)?, &p)?;
        let q = as_usize(field(e, "q", &p)?, &p)?;
        let t = as_usize(field(e, "t", &p)?, &p)?;
        let side = field(e, "side", &p)?.as_str().and_then(Side::parse).ok_or_else(|| perr(&p, "side must be sub or quot"))?;
        cst.insert((r, q, t, side), matrix_from_json(field(e, "matrix", &p)?, &format!("{p}.matrix"))?);
    }
    let mut iota = BTreeMap::new();
    for (k, e) in as_array(field(v, "iota", path)?, path)?.iter().enumerate() {
        let p = format!("{path}.iota[{k}]");
        let r = as_usize(field(e, "r", &p)?, &p)?;
        let q = as_usize(field(e, "q", &p)?, &p)?;
        let l = matrix_from_json(field(e, "l", &p)?, &format!("{p}.l"))?;
        let u = matrix_from_json(field(e, "u", &p)?, &format!("{p}.u"))?;
        iota.insert((r, q), (l, u));
    }
    Ok(ForwardBundle { shape, levi, cryst, cst, iota })
}

pub fn extended_to_json(e: &ExtendedBundle) -> Value {
    let windows: Vec<Value> =
        e.windows.iter().map(|(&(a, b), fb)| json!({"a": a, "b": b, "bundle": bundle_to_json(fb)})).collect();
    json!({"schema": SCHEMA, "shape": shape_to_json(&e.shape), "windows": windows})
}

pub fn extended_from_json(v: &Value) -> Result<ExtendedBundle> {
    if let Some(s) = v.get("schema") {
        if s.as_str() != Some(SCHEMA) {
            return Err(perr("schema", format!("unsupported schema {s}")));
        }
    }
    let shape = shape_from_json(field(v, "shape", "bundle")?)?;
    let mut windows = BTreeMap::new();
    for (k, w) in as_array(field(v, "windows", "bundle")?, "windows")?.iter().enumerate() {
        let p = format!("windows[{k}]");
        let a = as_usize(field(w, "a", &p)?, &p)?;
        let b = as_usize(field(w, "b", &p)?, &p)?;
        windows.insert((a, b), bundle_from_json(field(w, "bundle", &p)?, &format!("{p}.bundle"))?);
    }
    Ok(ExtendedBundle { shape, windows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hodge::forward_extended;
    use crate::linalg::{q, qr};

    fn sample() -> HodgeParameter {
        let sh = SemistableShape::with_lengths(5, &[2, 1]).unwrap();
        let l = Matrix::from_rows(vec![vec![q(1), q(3), qr(-2, 7)], vec![q(0), q(1), q(1)], vec![q(0), q(0), q(1)]]);
        HodgeParameter::new(sh, l).unwrap()
    }

    #[test]
    fn param_round_trip() {
        let p = sample();
        let v = param_to_json(&p);
        assert_eq!(v["matrix"]["1,3"], "-2/7");
        assert_eq!(param_from_json(&v).unwrap(), p);
    }

    #[test]
    fn bundle_round_trip_is_byte_stable() {
        let e = forward_extended(&sample()).unwrap();
        let text = render(&extended_to_json(&e));
        let back = extended_from_json(&parse_json(&text).unwrap()).unwrap();
        assert_eq!(back, e);
        assert_eq!(render(&extended_to_json(&back)), text);
    }

    #[test]
    fn bad_rational() {
        let mut v = param_to_json(&sample());
        v["matrix"]["1,2"] = json!("1/0");
        assert!(matches!(param_from_json(&v), Err(Error::Parse(_))));
        assert!(matches!(parse_json("{\"prime\": "), Err(Error::Parse(_))));
    }
}
