//! Browser bindings for the chainlift demo page.
//!
//! Every export takes JSON text and returns JSON text; failures come back as
//! `{"error": {"code", "message"}}`.

use std::sync::Arc;

use chainlift::lattice::{construction_a, default_precision, with_auto_precision};
use chainlift::poly::{factor_xm_minus_1, lift_full_factorization};
use chainlift::wire;
use chainlift::{ChainRing, ChainRingSpec, LinearCode};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

pub struct Failure {
    code: &'static str,
    message: String,
}

macro_rules! failure_from {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Failure { code: e.code(), message: e.to_string() }
            }
        }
    )*};
}

failure_from!(
    wire::WireError,
    chainlift::RingError,
    chainlift::PolyError,
    chainlift::CodeError,
    chainlift::LatticeError
);

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure { code: "PARSE_ERROR", message: e.to_string() }
    }
}

fn finish(result: Result<Value, Failure>) -> String {
    let doc = result.unwrap_or_else(|f| json!({ "error": { "code": f.code, "message": f.message } }));
    doc.to_string()
}

fn ring_from(text: &str) -> Result<(ChainRingSpec, Arc<ChainRing>), Failure> {
    let spec = wire::parse_spec(&serde_json::from_str(text)?)?;
    let ring = ChainRing::new(spec.clone())?;
    Ok((spec, ring))
}

fn code_from(ring: &Arc<ChainRing>, text: &str) -> Result<LinearCode, Failure> {
    let (m, rows) = wire::parse_code(ring, &serde_json::from_str(text)?)?;
    Ok(LinearCode::from_generators(ring, m, rows)?)
}

fn show<T: ToString>(items: &[T]) -> Vec<String> {
    items.iter().map(T::to_string).collect()
}

/// Factors of `X^m - 1` over the residue field and their Hensel lifts.
pub fn factor_and_lift_doc(ring: &str, m: usize, seed: u64) -> Result<Value, Failure> {
    let (_, ring) = ring_from(ring)?;
    let base = factor_xm_minus_1(m, &ring.residue_field(), seed)?;
    let lifted = lift_full_factorization(m, &ring, ring.s(), seed)?;
    Ok(json!({
        "ring": { "s": ring.s(), "size": ring.size().to_string(), "residue_field": format!("F_{}", ring.residue_order()) },
        "base": show(&base),
        "lifted": show(&lifted),
    }))
}

/// Standard form, type, dual and structural predicates of a code.
pub fn code_summary_doc(ring: &str, code: &str) -> Result<Value, Failure> {
    let (_, ring) = ring_from(ring)?;
    let code = code_from(&ring, code)?;
    let dual = code.dual()?;
    let rows =
        |c: &LinearCode| -> Vec<Vec<String>> { c.standard_form().rows_original().iter().map(|r| show(r)).collect() };
    Ok(json!({
        "length": code.length(),
        "type": code.code_type().0,
        "cardinality": code.cardinality().to_string(),
        "standard_form": rows(&code),
        "dual": { "type": dual.code_type().0, "cardinality": dual.cardinality().to_string(), "rows": rows(&dual) },
        "free": code.is_free(),
        "self_orthogonal": code.is_self_orthogonal(),
        "self_dual": code.is_self_dual(),
        "cyclic": code.is_cyclic(),
    }))
}

/// Construction A Gram matrix under `Tr(alpha x y)` with its discriminant.
pub fn lattice_doc(ring: &str, code: &str, alpha: &str) -> Result<Value, Failure> {
    let (spec, ring) = ring_from(ring)?;
    let code = code_from(&ring, code)?;
    let coeffs = wire::parse_int_coeffs(&serde_json::from_str(alpha)?, spec.e(), spec.r)?;
    let start = default_precision(&spec, ring.s());
    let (lat, n) = with_auto_precision(&spec, start, |ok| {
        let a = ok.from_integers(&coeffs)?;
        construction_a(&code, &a, ok)
    })?;
    let gram: Option<Vec<Vec<String>>> = lat.gram().map(|g| g.iter().map(|r| show(r)).collect());
    Ok(json!({
        "dimension": lat.dimension(),
        "precision": n,
        "gram": gram,
        "disc_valuation": lat.disc_valuation(),
        "expected_disc_valuation": lat.expected_disc_valuation()?,
        "index_exponent": lat.index_exponent(),
        "integral": lat.is_integral(),
        "unimodular": lat.is_unimodular(),
        "cyclic": lat.is_cyclic_lattice(),
    }))
}

#[wasm_bindgen]
pub fn factor_and_lift(ring: &str, m: usize, seed: u32) -> String {
    finish(factor_and_lift_doc(ring, m, seed.into()))
}

#[wasm_bindgen]
pub fn code_summary(ring: &str, code: &str) -> String {
    finish(code_summary_doc(ring, code))
}

#[wasm_bindgen]
pub fn lattice_gram(ring: &str, code: &str, alpha: &str) -> String {
    finish(lattice_doc(ring, code, alpha))
}
