//! JSON encodings of fields, elements, matrices, polynomials and Jordan data.
//!
//! Field: `{"type":"Q"}`, `{"type":"cyclotomic","n":N}` or
//! `{"type":"gf","p":P,"k":K,"modulus":[...]}` (modulus constant term first,
//! optional). Elements: `"a/b"` over ℚ, an array of such strings over ℚ(ζ_n),
//! an array of integers over GF(p^k). Decoding also accepts a bare integer or
//! fraction string wherever an element is expected.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Map, Value};

use crate::cubic::{MultilinearCubic, MONOMIALS};
use crate::field::{FieldDescriptor, FieldElement, FieldKind};
use crate::matrix::{JordanData, Matrix};

/// A decoding failure with a JSON-path style location such as `$.entries[1][0]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JsonError {
    pub code: &'static str,
    pub message: String,
    pub location: String,
}

impl JsonError {
    pub fn new(code: &'static str, message: impl Into<String>, location: impl Into<String>) -> Self {
        JsonError { code, message: message.into(), location: location.into() }
    }

    pub fn to_value(&self) -> Value {
        json!({"error": {"code": self.code, "message": self.message, "location": self.location}})
    }
}

impl fmt::Display for JsonError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}: {}", self.code, self.location, self.message)
    }
}

impl std::error::Error for JsonError {}

type Result<T> = std::result::Result<T, JsonError>;

fn schema(message: impl Into<String>, loc: &str) -> JsonError {
    JsonError::new("schema", message, loc)
}

fn field_of(obj: &Map<String, Value>, key: &str, loc: &str) -> Result<Value> {
    obj.get(key).cloned().ok_or_else(|| schema(format!("missing key \"{key}\""), loc))
}

fn as_object<'a>(v: &'a Value, loc: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| schema("expected an object", loc))
}

fn as_array<'a>(v: &'a Value, loc: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| schema("expected an array", loc))
}

fn as_usize(v: &Value, loc: &str) -> Result<usize> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| schema("expected a non-negative integer", loc))
}

pub fn parse_rational(s: &str, loc: &str) -> Result<BigRational> {
    let bad = || JsonError::new("parse", format!("\"{s}\" is not a fraction a/b"), loc);
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let a: BigInt = a.trim().parse().map_err(|_| bad())?;
            let b: BigInt = b.trim().parse().map_err(|_| bad())?;
            if b == BigInt::from(0) {
                return Err(JsonError::new("parse", "zero denominator", loc));
            }
            Ok(BigRational::new(a, b))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

fn scalar_rational(v: &Value, loc: &str) -> Result<BigRational> {
    match v {
        Value::String(s) => parse_rational(s, loc),
        Value::Number(n) if n.is_i64() => Ok(BigRational::from_integer(n.as_i64().unwrap().into())),
        Value::Number(n) if n.is_u64() => Ok(BigRational::from_integer(n.as_u64().unwrap().into())),
        _ => Err(schema("expected a fraction string or integer", loc)),
    }
}

pub fn field_to_json(field: &FieldDescriptor) -> Value {
    match field.kind() {
        FieldKind::Rationals => json!({"type": "Q"}),
        FieldKind::Cyclotomic { order } => json!({"type": "cyclotomic", "n": order}),
        FieldKind::FiniteField { p, k, modulus } => json!({"type": "gf", "p": p, "k": k, "modulus": modulus}),
    }
}

pub fn field_from_json(v: &Value, loc: &str) -> Result<FieldDescriptor> {
    let obj = as_object(v, loc)?;
    let ty = field_of(obj, "type", loc)?;
    let ty = ty.as_str().ok_or_else(|| schema("\"type\" must be a string", &format!("{loc}.type")))?;
    let bad = |e: crate::field::FieldError| JsonError::new("field", e.to_string(), loc);
    match ty {
        "Q" => Ok(FieldDescriptor::rationals()),
        "cyclotomic" => {
            let n = as_usize(&field_of(obj, "n", loc)?, &format!("{loc}.n"))?;
            FieldDescriptor::cyclotomic(n).map_err(bad)
        }
        "gf" => {
            let p = as_usize(&field_of(obj, "p", loc)?, &format!("{loc}.p"))? as u64;
            let k = match obj.get("k") {
                Some(k) => as_usize(k, &format!("{loc}.k"))?,
                None => 1,
            };
            let modulus = match obj.get("modulus") {
                None | Some(Value::Null) => None,
                Some(m) => {
                    let mloc = format!("{loc}.modulus");
                    let coeffs = as_array(m, &mloc)?
                        .iter()
                        .enumerate()
                        .map(|(i, c)| c.as_u64().ok_or_else(|| schema("expected a non-negative integer", &format!("{mloc}[{i}]"))))
                        .collect::<Result<Vec<u64>>>()?;
                    Some(coeffs)
                }
            };
            FieldDescriptor::finite_field(p, k, modulus).map_err(bad)
        }
        other => Err(schema(format!("unknown field type \"{other}\""), &format!("{loc}.type"))),
    }
}

/// Parses the compact CLI spellings `Q`, `cyclotomic:N`, `gf:P`, `gf:P:K`,
/// or an inline JSON field object.
pub fn field_from_flag(s: &str) -> Result<FieldDescriptor> {
    let loc = "--field";
    let s = s.trim();
    if s.starts_with('{') {
        let v: Value = serde_json::from_str(s).map_err(|e| JsonError::new("parse", e.to_string(), loc))?;
        return field_from_json(&v, loc);
    }
    let parts: Vec<&str> = s.split(':').collect();
    let num = |t: &str| t.parse::<u64>().map_err(|_| JsonError::new("parse", format!("\"{t}\" is not an integer"), loc));
    let bad = |e: crate::field::FieldError| JsonError::new("field", e.to_string(), loc);
    match parts.as_slice() {
        ["Q"] | ["q"] => Ok(FieldDescriptor::rationals()),
        ["cyclotomic", n] => FieldDescriptor::cyclotomic(num(n)? as usize).map_err(bad),
        ["gf", p] => FieldDescriptor::finite_field(num(p)?, 1, None).map_err(bad),
        ["gf", p, k] => FieldDescriptor::finite_field(num(p)?, num(k)? as usize, None).map_err(bad),
        _ => Err(JsonError::new("parse", format!("unrecognised field \"{s}\""), loc)),
    }
}

pub fn element_to_json(e: &FieldElement) -> Value {
    match e.field().kind() {
        FieldKind::Rationals => Value::String(e.as_rational().expect("rational").to_string()),
        FieldKind::Cyclotomic { .. } => Value::Array(
            e.rational_coordinates().expect("cyclotomic").iter().map(|c| Value::String(c.to_string())).collect(),
        ),
        FieldKind::FiniteField { .. } => json!(e.finite_coordinates().expect("finite")),
    }
}

pub fn element_from_json(field: &FieldDescriptor, v: &Value, loc: &str) -> Result<FieldElement> {
    let rep = |e: crate::field::FieldError| JsonError::new("field", e.to_string(), loc);
    match (field.kind(), v) {
        (FieldKind::FiniteField { p, .. }, Value::Array(items)) => {
            let coeffs = items
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    let r = scalar_rational(c, &format!("{loc}[{i}]"))?;
                    reduce_mod_p(&r, *p).ok_or_else(|| JsonError::new("field", "denominator divisible by p", format!("{loc}[{i}]")))
                })
                .collect::<Result<Vec<u64>>>()?;
            field.from_coefficients_u64(&coeffs).map_err(rep)
        }
        (_, Value::Array(items)) => {
            let coeffs = items
                .iter()
                .enumerate()
                .map(|(i, c)| scalar_rational(c, &format!("{loc}[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            field.from_coefficients_rational(&coeffs).map_err(rep)
        }
        _ => field.from_rational(&scalar_rational(v, loc)?).map_err(rep),
    }
}

fn reduce_mod_p(r: &BigRational, p: u64) -> Option<u64> {
    let p_big = BigInt::from(p);
    let m = |x: &BigInt| -> u64 {
        let r = ((x % &p_big) + &p_big) % &p_big;
        r.try_into().expect("below p")
    };
    let (num, den) = (m(r.numer()), m(r.denom()));
    if den == 0 {
        return None;
    }
    let inv = BigInt::from(den).modpow(&BigInt::from(p - 2), &p_big);
    Some(m(&(BigInt::from(num) * inv)))
}

pub fn matrix_to_json(m: &Matrix) -> Value {
    let entries: Vec<Value> =
        (0..m.rows()).map(|i| Value::Array((0..m.cols()).map(|j| element_to_json(m.get(i, j))).collect())).collect();
    json!({"field": field_to_json(m.field()), "rows": m.rows(), "cols": m.cols(), "entries": entries})
}

/// Decodes a matrix document. The document's own "field" wins over
/// `default_field`; one of them must be present.
pub fn matrix_from_json(v: &Value, default_field: Option<&FieldDescriptor>, loc: &str) -> Result<Matrix> {
    let obj = as_object(v, loc)?;
    let field = match obj.get("field") {
        Some(f) => field_from_json(f, &format!("{loc}.field"))?,
        None => default_field.cloned().ok_or_else(|| schema("missing key \"field\"", loc))?,
    };
    let eloc = format!("{loc}.entries");
    let rows_v = as_array(&field_of(obj, "entries", loc)?, &eloc)?.clone();
    let rows = match obj.get("rows") {
        Some(r) => as_usize(r, &format!("{loc}.rows"))?,
        None => rows_v.len(),
    };
    if rows_v.len() != rows {
        return Err(schema(format!("expected {rows} rows, found {}", rows_v.len()), &eloc));
    }
    let cols = match obj.get("cols") {
        Some(c) => as_usize(c, &format!("{loc}.cols"))?,
        None => rows_v.first().and_then(Value::as_array).map_or(0, Vec::len),
    };
    let mut data = Vec::with_capacity(rows * cols);
    for (i, row) in rows_v.iter().enumerate() {
        let rloc = format!("{eloc}[{i}]");
        let row = as_array(row, &rloc)?;
        if row.len() != cols {
            return Err(schema(format!("expected {cols} columns, found {}", row.len()), &rloc));
        }
        for (j, e) in row.iter().enumerate() {
            data.push(element_from_json(&field, e, &format!("{rloc}[{j}]"))?);
        }
    }
    Ok(Matrix::from_vec(&field, rows, cols, data))
}

pub fn poly_to_json(f: &MultilinearCubic) -> Value {
    let mut obj = Map::new();
    obj.insert("field".into(), field_to_json(f.field()));
    for (name, c) in MONOMIALS.iter().zip(f.coeffs()) {
        obj.insert((*name).into(), element_to_json(c));
    }
    Value::Object(obj)
}

/// Decodes a polynomial; omitted monomials are zero. `field` overrides the
/// document's field when given, and the document's field must then embed
/// into it.
pub fn poly_from_json(v: &Value, field: Option<&FieldDescriptor>, loc: &str) -> Result<MultilinearCubic> {
    let obj = as_object(v, loc)?;
    let own = match obj.get("field") {
        Some(f) => Some(field_from_json(f, &format!("{loc}.field"))?),
        None => None,
    };
    let target = match (field, &own) {
        (Some(f), _) => f.clone(),
        (None, Some(f)) => f.clone(),
        (None, None) => return Err(schema("missing key \"field\"", loc)),
    };
    let mut source = own.unwrap_or_else(|| target.clone());
    // Rational coefficients are read directly in a finite target, reduced mod p.
    if matches!(source.kind(), FieldKind::Rationals) && target.is_finite() {
        source = target.clone();
    }
    if !source.same_as(&target) && !target.extends(&source) {
        return Err(JsonError::new("field", format!("polynomial field {source} does not embed into {target}"), format!("{loc}.field")));
    }
    for key in obj.keys() {
        if key != "field" && !MONOMIALS.contains(&key.as_str()) {
            return Err(schema(format!("unknown monomial \"{key}\""), &format!("{loc}.{key}")));
        }
    }
    let coeffs = MONOMIALS.map(|name| match obj.get(name) {
        None => Ok(source.zero()),
        Some(c) => element_from_json(&source, c, &format!("{loc}.{name}")),
    });
    let mut out = Vec::with_capacity(6);
    for c in coeffs {
        let c = c?;
        out.push(c.embed_into(&target).map_err(|e| JsonError::new("field", e.to_string(), loc))?);
    }
    let coeffs: [FieldElement; 6] = out.try_into().expect("six coefficients");
    MultilinearCubic::new(coeffs).map_err(|e| JsonError::new("field", e.to_string(), loc))
}

pub fn jordan_to_json(jd: &JordanData) -> Value {
    json!({
        "field": field_to_json(jd.field()),
        "d": jd.d.iter().map(element_to_json).collect::<Vec<_>>(),
        "nu": jd.nu.iter().map(element_to_json).collect::<Vec<_>>(),
        "P": jd.p.as_ref().map(matrix_to_json),
    })
}

pub fn jordan_from_json(v: &Value, default_field: Option<&FieldDescriptor>, loc: &str) -> Result<JordanData> {
    let obj = as_object(v, loc)?;
    let field = match obj.get("field") {
        Some(f) => field_from_json(f, &format!("{loc}.field"))?,
        None => default_field.cloned().ok_or_else(|| schema("missing key \"field\"", loc))?,
    };
    let vector = |key: &str| -> Result<Vec<FieldElement>> {
        let kloc = format!("{loc}.{key}");
        as_array(&field_of(obj, key, loc)?, &kloc)?
            .iter()
            .enumerate()
            .map(|(i, e)| element_from_json(&field, e, &format!("{kloc}[{i}]")))
            .collect()
    };
    let d = vector("d")?;
    let nu = match obj.get("nu") {
        Some(_) => vector("nu")?,
        None => vec![field.zero(); d.len()],
    };
    let p = match obj.get("P") {
        None | Some(Value::Null) => None,
        Some(m) => Some(matrix_from_json(m, Some(&field), &format!("{loc}.P"))?),
    };
    JordanData::new(d, nu, p).map_err(|e| schema(e.to_string(), loc))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_round_trips() {
        for f in [
            FieldDescriptor::rationals(),
            FieldDescriptor::cyclotomic(5).unwrap(),
            FieldDescriptor::finite_field(3, 2, None).unwrap(),
        ] {
            let back = field_from_json(&field_to_json(&f), "$").unwrap();
            assert!(back.same_as(&f));
        }
        assert!(field_from_flag("gf:5").unwrap().same_as(&FieldDescriptor::prime_field(5).unwrap()));
        assert!(field_from_flag("cyclotomic:3").unwrap().same_as(&FieldDescriptor::cyclotomic(3).unwrap()));
        assert!(field_from_flag(r#"{"type":"Q"}"#).unwrap().same_as(&FieldDescriptor::rationals()));
        assert_eq!(field_from_flag("gf:6").unwrap_err().code, "field");
    }

    #[test]
    fn elements() {
        let q = FieldDescriptor::rationals();
        let e = element_from_json(&q, &json!("-3/6"), "$").unwrap();
        assert_eq!(element_to_json(&e), json!("-1/2"));
        assert_eq!(element_from_json(&q, &json!(4), "$").unwrap(), q.from_i64(4));
        let gf = FieldDescriptor::prime_field(7).unwrap();
        assert_eq!(element_from_json(&gf, &json!("1/2"), "$").unwrap(), gf.from_i64(4));
        assert_eq!(element_to_json(&gf.from_i64(-1)), json!([6]));
        let k = FieldDescriptor::cyclotomic(4).unwrap();
        let i = element_from_json(&k, &json!(["0", "1"]), "$").unwrap();
        assert_eq!(&i * &i, -k.one());
        assert_eq!(element_from_json(&q, &json!("x"), "$.a").unwrap_err().location, "$.a");
    }

    #[test]
    fn matrix_and_errors() {
        let q = FieldDescriptor::rationals();
        let m = Matrix::from_i64(&q, &[&[1, 2], &[3, 4]]);
        assert_eq!(matrix_from_json(&matrix_to_json(&m), None, "$").unwrap(), m);
        let bad = json!({"field": {"type": "Q"}, "rows": 2, "cols": 2, "entries": [["1", "2"], ["3", "q"]]});
        let err = matrix_from_json(&bad, None, "$").unwrap_err();
        assert_eq!(err.location, "$.entries[1][1]");
        let short = json!({"field": {"type": "Q"}, "rows": 2, "cols": 2, "entries": [["1", "2"], ["3"]]});
        assert_eq!(matrix_from_json(&short, None, "$").unwrap_err().location, "$.entries[1]");
    }

    #[test]
    fn polynomials() {
        let q = FieldDescriptor::rationals();
        let f = poly_from_json(&json!({"field": {"type": "Q"}, "xyz": "1", "zyx": "-1"}), None, "$").unwrap();
        assert_eq!(f, MultilinearCubic::from_i64(&q, [1, 0, 0, -1, 0, 0]));
        assert_eq!(poly_from_json(&poly_to_json(&f), None, "$").unwrap(), f);
        let err = poly_from_json(&json!({"field": {"type": "Q"}, "xxy": "1"}), None, "$").unwrap_err();
        assert_eq!(err.location, "$.xxy");
        let k = FieldDescriptor::cyclotomic(3).unwrap();
        let g = poly_from_json(&json!({"xyz": "2"}), Some(&k), "$").unwrap();
        assert!(g.field().same_as(&k));
        let gf = FieldDescriptor::prime_field(5).unwrap();
        let h = poly_from_json(&json!({"field": {"type": "Q"}, "xyz": "1/2", "yxz": -1}), Some(&gf), "$").unwrap();
        assert_eq!(h, MultilinearCubic::from_i64(&gf, [3, 0, 0, 0, 0, 4]));
    }

    #[test]
    fn jordan_documents() {
        let q = FieldDescriptor::rationals();
        let jd = JordanData::new(vec![q.one(), q.one()], vec![q.one(), q.zero()], None).unwrap();
        let back = jordan_from_json(&jordan_to_json(&jd), None, "$").unwrap();
        assert_eq!(back.reconstruct(), jd.reconstruct());
    }
}
