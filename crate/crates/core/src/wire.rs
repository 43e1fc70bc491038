//! JSON encodings for specs, elements, polynomials and matrices.
//!
//! Integers are written as decimal strings. On input both JSON numbers and
//! decimal strings are accepted.

use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive};
use serde_json::{json, Value};
use thiserror::Error;

use crate::code::LinearCode;
use crate::poly::Poly;
use crate::ring::{ChainRing, ChainRingSpec, RingElem, RingError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WireError {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}

impl WireError {
    pub fn code(&self) -> &'static str {
        match self {
            WireError::Malformed(_) => "PARSE_ERROR",
            WireError::Ring(e) => e.code(),
        }
    }
}

fn bad(msg: impl Into<String>) -> WireError {
    WireError::Malformed(msg.into())
}

pub fn int_to_json(x: &BigInt) -> Value {
    Value::String(x.to_string())
}

pub fn uint_to_json(x: &BigUint) -> Value {
    Value::String(x.to_string())
}

pub fn usize_to_json(x: usize) -> Value {
    Value::String(x.to_string())
}

pub fn parse_int(v: &Value) -> Result<BigInt, WireError> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigInt::from(i))
            } else if let Some(u) = n.as_u64() {
                Ok(BigInt::from(u))
            } else {
                Err(bad(format!("{n} is not an integer")))
            }
        }
        Value::String(s) => s.trim().parse::<BigInt>().map_err(|_| bad(format!("{s:?} is not a decimal integer"))),
        other => Err(bad(format!("expected an integer, got {other}"))),
    }
}

pub fn parse_usize(v: &Value) -> Result<usize, WireError> {
    let i = parse_int(v)?;
    i.to_usize().ok_or_else(|| bad(format!("{i} is not a non-negative machine integer")))
}

fn field<'a>(obj: &'a Value, name: &str) -> Result<&'a Value, WireError> {
    obj.get(name).ok_or_else(|| bad(format!("missing field {name:?}")))
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>, WireError> {
    v.as_array().ok_or_else(|| bad(format!("{what} must be an array")))
}

/// `{"p", "n", "r", "h": [h_0..h_r], "g": [[..r..], ...], "t"}`.
pub fn parse_spec(v: &Value) -> Result<ChainRingSpec, WireError> {
    let p = parse_int(field(v, "p")?)?.to_u64().ok_or_else(|| bad("p must fit in 64 bits"))?;
    let n = parse_int(field(v, "n")?)?.to_u32().ok_or_else(|| bad("n must fit in 32 bits"))?;
    let r = parse_usize(field(v, "r")?)?;
    let t = parse_usize(field(v, "t")?)?;
    let h = array(field(v, "h")?, "h")?.iter().map(parse_int).collect::<Result<Vec<_>, _>>()?;
    let g = array(field(v, "g")?, "g")?
        .iter()
        .map(|c| array(c, "each coefficient of g")?.iter().map(parse_int).collect())
        .collect::<Result<Vec<Vec<_>>, _>>()?;
    Ok(ChainRingSpec { p, n, r, h, g, t })
}

pub fn spec_to_json(spec: &ChainRingSpec) -> Value {
    json!({
        "p": spec.p.to_string(),
        "n": spec.n.to_string(),
        "r": spec.r.to_string(),
        "h": spec.h.iter().map(int_to_json).collect::<Vec<_>>(),
        "g": spec.g.iter().map(|c| c.iter().map(int_to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "t": spec.t.to_string(),
    })
}

/// `e x r` nested arrays: row `k` holds the `Y`-coefficients of `X^k`.
pub fn parse_elem(ring: &Arc<ChainRing>, v: &Value) -> Result<RingElem, WireError> {
    let rows = array(v, "element")?;
    let (e, r) = (ring.e(), ring.r());
    if rows.len() != e {
        return Err(bad(format!("element needs {e} rows, got {}", rows.len())));
    }
    let mut coeffs = Vec::with_capacity(e * r);
    for row in rows {
        let row = array(row, "element row")?;
        if row.len() != r {
            return Err(bad(format!("element rows need {r} entries, got {}", row.len())));
        }
        for x in row {
            let i = parse_int(x)?;
            if i.is_negative() {
                return Err(RingError::NonCanonical(i.to_string()).into());
            }
            coeffs.push(i.to_biguint().expect("non-negative"));
        }
    }
    Ok(ring.element(coeffs)?)
}

/// `e x r` nested arrays of arbitrary integers, flattened row by row.
pub fn parse_int_coeffs(v: &Value, e: usize, r: usize) -> Result<Vec<BigInt>, WireError> {
    let rows = array(v, "element")?;
    if rows.len() != e {
        return Err(bad(format!("element needs {e} rows, got {}", rows.len())));
    }
    let mut coeffs = Vec::with_capacity(e * r);
    for row in rows {
        let row = array(row, "element row")?;
        if row.len() != r {
            return Err(bad(format!("element rows need {r} entries, got {}", row.len())));
        }
        for x in row {
            coeffs.push(parse_int(x)?);
        }
    }
    Ok(coeffs)
}

/// Same shape as [`parse_elem`], but entries are arbitrary integers reduced
/// into the ring.
pub fn parse_elem_lenient(ring: &Arc<ChainRing>, v: &Value) -> Result<RingElem, WireError> {
    let coeffs = parse_int_coeffs(v, ring.e(), ring.r())?;
    Ok(ring.from_integer_coeffs(&coeffs)?)
}

pub fn elem_to_json(x: &RingElem) -> Value {
    let r = x.ring().r();
    Value::Array(x.coeffs().chunks(r).map(|row| Value::Array(row.iter().map(uint_to_json).collect())).collect())
}

pub fn parse_vector(ring: &Arc<ChainRing>, v: &Value) -> Result<Vec<RingElem>, WireError> {
    array(v, "vector")?.iter().map(|x| parse_elem(ring, x)).collect()
}

pub fn vector_to_json(v: &[RingElem]) -> Value {
    Value::Array(v.iter().map(elem_to_json).collect())
}

pub fn parse_matrix(ring: &Arc<ChainRing>, v: &Value) -> Result<Vec<Vec<RingElem>>, WireError> {
    array(v, "matrix")?.iter().map(|row| parse_vector(ring, row)).collect()
}

pub fn matrix_to_json(rows: &[Vec<RingElem>]) -> Value {
    Value::Array(rows.iter().map(|r| vector_to_json(r)).collect())
}

/// Coefficient list, lowest degree first.
pub fn parse_poly(ring: &Arc<ChainRing>, v: &Value) -> Result<Poly, WireError> {
    Ok(Poly::new(ring, parse_vector(ring, v)?)?)
}

pub fn poly_to_json(p: &Poly) -> Value {
    vector_to_json(p.coeffs())
}

/// A code file: a bare matrix, or `{"length": m, "matrix": [...]}`.
///
/// Returns `(m, rows)`; `m` is required when the matrix has no rows.
pub fn parse_code(ring: &Arc<ChainRing>, v: &Value) -> Result<(usize, Vec<Vec<RingElem>>), WireError> {
    let (matrix, length) = match v {
        Value::Array(_) => (v, None),
        Value::Object(_) => (field(v, "matrix")?, v.get("length").map(parse_usize).transpose()?),
        _ => return Err(bad("code must be a matrix or an object with \"matrix\"")),
    };
    let rows = parse_matrix(ring, matrix)?;
    let m = match (length, rows.first()) {
        (Some(m), _) => m,
        (None, Some(row)) => row.len(),
        (None, None) => return Err(bad("an empty matrix needs an explicit \"length\"")),
    };
    Ok((m, rows))
}

/// Re-parsable description of a code in original coordinates.
pub fn code_to_json(code: &LinearCode) -> Value {
    let sf = code.standard_form();
    json!({
        "length": usize_to_json(code.length()),
        "matrix": matrix_to_json(&sf.rows_original()),
        "type": sf.code_type.0.iter().map(|&k| usize_to_json(k)).collect::<Vec<_>>(),
        "rank": usize_to_json(code.rank()),
        "cardinality": uint_to_json(&code.cardinality()),
    })
}
