//! JSON point and operator files, and canonical JSON output.
//!
//! Point file: `{"dims": [2, 3], "rows": [[[[re, im], ...], ...], ...]}`, one
//! list of `[re, im]` pairs per party per row. Operator file:
//! `{"dims": [2, 2], "matrix": [[[re, im], ...], ...]}`. Numbers may be JSON
//! numbers or strings such as `"-3/4"`; the exact reader keeps decimals exact.

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{Number, Value};

use crate::error::{Error, Result};
use crate::hilbert::{DimensionVector, HermitianOperator, PointMatrix, ProductVector};
use crate::matrix::Matrix;
use crate::scalar::{format_float, format_rational, parse_rational, Exact, Float, Scalar};

fn parse_real(v: &Value) -> Result<BigRational> {
    match v {
        Value::Number(n) => parse_rational(&n.to_string()),
        Value::String(s) => parse_rational(s),
        other => Err(Error::Parse(format!("expected a number, got {other}"))),
    }
}

fn parse_entry(v: &Value) -> Result<Exact> {
    match v.as_array().map(Vec::as_slice) {
        Some([re, im]) => Ok(Exact::new(parse_real(re)?, parse_real(im)?)),
        _ => Err(Error::Parse(format!("expected [re, im], got {v}"))),
    }
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| Error::Parse(format!("{what} must be an array")))
}

fn parse_dims(root: &Value) -> Result<DimensionVector> {
    let dims = root
        .get("dims")
        .ok_or_else(|| Error::Parse("missing \"dims\"".into()))?;
    let dims: Vec<usize> = serde_json::from_value(dims.clone())
        .map_err(|e| Error::Parse(format!("dims: {e}")))?;
    DimensionVector::new(dims)
}

/// Reads a point file in exact arithmetic.
pub fn parse_point(text: &str) -> Result<PointMatrix<Exact>> {
    let root: Value = serde_json::from_str(text)?;
    let dims = parse_dims(&root)?;
    let rows = root
        .get("rows")
        .ok_or_else(|| Error::Parse("missing \"rows\"".into()))?;
    let rows = array(rows, "rows")?
        .iter()
        .map(|row| {
            let comps = array(row, "row")?
                .iter()
                .map(|comp| array(comp, "party component")?.iter().map(parse_entry).collect())
                .collect::<Result<Vec<Vec<Exact>>>>()?;
            Ok(ProductVector::new(comps))
        })
        .collect::<Result<Vec<_>>>()?;
    PointMatrix::new(dims, rows)
}

pub fn parse_point_float(text: &str) -> Result<PointMatrix<Float>> {
    Ok(parse_point(text)?.map(to_float))
}

/// Reads an operator file in exact arithmetic.
pub fn parse_operator(text: &str) -> Result<HermitianOperator<Exact>> {
    let root: Value = serde_json::from_str(text)?;
    let dims = parse_dims(&root)?;
    let matrix = root
        .get("matrix")
        .ok_or_else(|| Error::Parse("missing \"matrix\"".into()))?;
    let rows = array(matrix, "matrix")?
        .iter()
        .map(|row| array(row, "matrix row")?.iter().map(parse_entry).collect())
        .collect::<Result<Vec<Vec<Exact>>>>()?;
    HermitianOperator::new(dims, Matrix::from_rows(rows)?)
}

fn to_float(x: &Exact) -> Float {
    Float::new(
        x.re.to_f64().unwrap_or(f64::NAN),
        x.im.to_f64().unwrap_or(f64::NAN),
    )
}

fn exact_entry(x: &Exact) -> Value {
    Value::Array(vec![
        Value::String(format_rational(&x.re)),
        Value::String(format_rational(&x.im)),
    ])
}

/// Writes a point in the file format, with rational strings.
pub fn point_to_json(z: &PointMatrix<Exact>) -> Value {
    let rows = z
        .rows()
        .iter()
        .map(|row| {
            Value::Array(
                row.components()
                    .iter()
                    .map(|comp| Value::Array(comp.iter().map(exact_entry).collect()))
                    .collect(),
            )
        })
        .collect();
    serde_json::json!({ "dims": z.dims().dims(), "rows": Value::Array(rows) })
}

pub fn operator_to_json<T>(rho: &HermitianOperator<T>) -> Value
where
    T: Scalar + EntryJson,
{
    let m = rho.matrix();
    let rows = (0..m.rows())
        .map(|i| Value::Array(m.row(i).iter().map(EntryJson::to_json).collect()))
        .collect();
    serde_json::json!({ "dims": rho.dims().dims(), "matrix": Value::Array(rows) })
}

pub trait EntryJson {
    fn to_json(&self) -> Value;
}

impl EntryJson for Exact {
    fn to_json(&self) -> Value {
        exact_entry(self)
    }
}

impl EntryJson for Float {
    fn to_json(&self) -> Value {
        Value::Array(vec![float_value(self.re), float_value(self.im)])
    }
}

fn float_value(x: f64) -> Value {
    if !x.is_finite() {
        return Value::String(x.to_string());
    }
    Value::Number(serde_json::from_str::<Number>(&format_float(x)).expect("formatted float is valid JSON"))
}

/// Rewrites every non-integer number into the fixed 17-digit form.
fn canonicalize(v: Value) -> Value {
    match v {
        Value::Number(n) if !n.is_i64() && !n.is_u64() => match n.as_f64() {
            Some(x) => float_value(x),
            None => Value::Number(n),
        },
        Value::Array(items) => Value::Array(items.into_iter().map(canonicalize).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, canonicalize(v))).collect()),
        other => other,
    }
}

/// Pretty JSON with sorted keys and canonical floats, ending in a newline.
pub fn to_canonical_json<T: Serialize>(value: &T) -> Result<String> {
    let v = canonicalize(serde_json::to_value(value)?);
    let mut out = serde_json::to_string_pretty(&v)?;
    out.push('\n');
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::gi;

    #[test]
    fn point_round_trip() {
        let text = r#"{"dims": [2, 2], "rows": [[[[1, 0], ["1/2", -3]], [[0, 0], [0.25, 0]]]]}"#;
        let z = parse_point(text).unwrap();
        assert_eq!(z.r(), 1);
        assert_eq!(*z.coord(0, 0, 1), Exact::new(BigRational::new(1.into(), 2.into()), BigRational::from_integer((-3).into())));
        assert_eq!(*z.coord(0, 1, 1), Exact::from_ratio(1, 4));
        let back = parse_point(&point_to_json(&z).to_string()).unwrap();
        assert_eq!(back, z);
        let f = parse_point_float(text).unwrap();
        assert_eq!(f.coord(0, 0, 1).re, 0.5);
    }

    #[test]
    fn point_errors() {
        assert!(parse_point(r#"{"rows": []}"#).is_err());
        assert!(parse_point(r#"{"dims": [2, 1], "rows": []}"#).is_err());
        assert!(parse_point(r#"{"dims": [2, 2], "rows": [[[[1, 0]], [[1, 0], [0, 0]]]]}"#).is_err());
        assert!(parse_point(r#"{"dims": [2, 2], "rows": [[[[1, "x"], [0, 0]], [[1, 0], [0, 0]]]]}"#).is_err());
    }

    #[test]
    fn operator_round_trip() {
        let rho = HermitianOperator::from_weighted_vectors(
            DimensionVector::new(vec![2, 2]).unwrap(),
            &[(Exact::one(), vec![gi(1, 0), gi(0, 1), gi(0, 0), gi(2, 0)])],
        )
        .unwrap();
        let back = parse_operator(&operator_to_json(&rho).to_string()).unwrap();
        assert_eq!(back, rho);
        let bad = r#"{"dims": [2, 2], "matrix": [[[0,0],[1,0],[0,0],[0,0]],[[0,0],[0,0],[0,0],[0,0]],[[0,0],[0,0],[0,0],[0,0]],[[0,0],[0,0],[0,0],[0,0]]]}"#;
        assert!(matches!(parse_operator(bad), Err(Error::NotHermitian)));
    }

    #[test]
    fn canonical_json_sorts_and_formats() {
        #[derive(Serialize)]
        struct S {
            zeta: f64,
            alpha: usize,
            mid: Vec<f64>,
        }
        let out = to_canonical_json(&S { zeta: 0.1, alpha: 3, mid: vec![1.0, 0.0] }).unwrap();
        assert_eq!(
            out,
            "{\n  \"alpha\": 3,\n  \"mid\": [\n    1.0000000000000000e+0,\n    0.0000000000000000e+0\n  ],\n  \"zeta\": 1.0000000000000001e-1\n}\n"
        );
    }

    use num_traits::One;
}
