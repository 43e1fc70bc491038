use std::fmt::Display;
use std::path::Path;
use std::sync::Arc;

use chainlift::code::LinearCode;
use chainlift::lattice::{
    construction_a, default_precision, ideal_lattice, scaled_gram_self_orthogonal, with_auto_precision, LatticeError,
};
use chainlift::lifting::{lift_cyclic as lift_cyclic_code, PrecisionTower};
use chainlift::poly::{factor_xm_minus_1, lift_full_factorization};
use chainlift::wire::{self, WireError};
use chainlift::{ChainRing, ChainRingSpec, Poly, ZpScalar};
use serde_json::{json, Map, Value};

/// An error document plus the process exit status.
#[derive(Debug)]
pub struct Failure {
    code: String,
    message: String,
    status: u8,
}

impl Failure {
    fn new(code: &str, message: impl Display, status: u8) -> Failure {
        Failure { code: code.to_string(), message: message.to_string(), status }
    }

    pub fn io(path: &Path, e: std::io::Error) -> Failure {
        Failure::new("IO_ERROR", format!("{}: {e}", path.display()), 2)
    }

    fn usage(message: impl Display) -> Failure {
        Failure::new("USAGE", message, 2)
    }

    pub fn exit_status(&self) -> u8 {
        self.status
    }

    pub fn document(&self) -> Value {
        json!({ "error": { "code": self.code, "message": self.message } })
    }
}

impl From<WireError> for Failure {
    fn from(e: WireError) -> Self {
        let status = if matches!(e, WireError::Malformed(_)) { 2 } else { 1 };
        Failure::new(e.code(), &e, status)
    }
}

macro_rules! module_error {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Failure::new(e.code(), &e, 1)
            }
        }
    )*};
}

module_error!(
    chainlift::RingError,
    chainlift::PolyError,
    chainlift::CodeError,
    chainlift::LiftError,
    chainlift::LatticeError
);

type Outcome = Result<Value, Failure>;

fn s(x: impl Display) -> Value {
    Value::String(x.to_string())
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Failure::new("PARSE_ERROR", format!("{}: {e}", path.display()), 2))
}

fn load_ring(path: &Path) -> Result<(ChainRingSpec, Arc<ChainRing>), Failure> {
    let spec = wire::parse_spec(&read_json(path)?)?;
    let ring = ChainRing::new(spec.clone())?;
    Ok((spec, ring))
}

fn load_code(ring: &Arc<ChainRing>, path: &Path) -> Result<LinearCode, Failure> {
    let (m, rows) = wire::parse_code(ring, &read_json(path)?)?;
    Ok(LinearCode::from_generators(ring, m, rows)?)
}

fn field_name(ring: &ChainRing) -> String {
    format!("F_{}", ring.residue_order())
}

fn poly_docs(polys: &[Poly]) -> (Value, Value) {
    (Value::Array(polys.iter().map(wire::poly_to_json).collect()), Value::Array(polys.iter().map(s).collect()))
}

fn extend(mut doc: Value, extra: Value) -> Value {
    if let (Value::Object(a), Value::Object(b)) = (&mut doc, extra) {
        a.extend(b);
    }
    doc
}

pub fn ring_info(path: &Path) -> Outcome {
    let (_, ring) = load_ring(path)?;
    Ok(json!({
        "p": s(ring.p()),
        "n": s(ring.n()),
        "r": s(ring.r()),
        "e": s(ring.e()),
        "t": s(ring.t()),
        "s": s(ring.s()),
        "size": s(ring.size()),
        "characteristic": s(ring.characteristic()),
        "residue_field": field_name(&ring),
        "is_field": ring.is_field(),
        "spec": wire::spec_to_json(ring.spec()),
    }))
}

pub fn factor(path: &Path, m: usize, seed: u64) -> Outcome {
    let (_, ring) = load_ring(path)?;
    let field = ring.residue_field();
    let factors = factor_xm_minus_1(m, &field, seed)?;
    let (coeffs, display) = poly_docs(&factors);
    Ok(json!({
        "m": s(m),
        "field": field_name(&field),
        "seed": s(seed),
        "count": s(factors.len()),
        "factors": coeffs,
        "display": display,
    }))
}

pub fn hensel(path: &Path, m: usize, precision: Option<usize>, seed: u64) -> Outcome {
    let (_, ring) = load_ring(path)?;
    let precision = precision.unwrap_or(ring.s());
    if precision == 0 || precision > ring.s() {
        return Err(Failure::new("BAD_PRECISION", format!("precision must lie in 1..={}", ring.s()), 1));
    }
    let factors = lift_full_factorization(m, &ring, precision, seed)?;
    let product = factors.iter().fold(Poly::one(&ring), |acc, f| &acc * f);
    let diff = &product - &Poly::x_pow_minus_one(&ring, m);
    let verified = diff.coeffs().iter().all(|c| c.valuation() >= precision);
    let (coeffs, display) = poly_docs(&factors);
    Ok(json!({
        "m": s(m),
        "precision": s(precision),
        "seed": s(seed),
        "factors": coeffs,
        "display": display,
        "product_verified": verified,
    }))
}

pub fn code_std(ring_path: &Path, code_path: &Path) -> Outcome {
    let (_, ring) = load_ring(ring_path)?;
    let code = load_code(&ring, code_path)?;
    let sf = code.standard_form();
    Ok(extend(
        wire::code_to_json(&code),
        json!({
            "standard_form": wire::matrix_to_json(&sf.rows),
            "permutation": sf.perm.iter().map(s).collect::<Vec<_>>(),
            "pivots": sf.pivots.iter().map(s).collect::<Vec<_>>(),
            "free": code.is_free(),
        }),
    ))
}

pub fn code_dual(ring_path: &Path, code_path: &Path) -> Outcome {
    let (_, ring) = load_ring(ring_path)?;
    let code = load_code(&ring, code_path)?;
    Ok(wire::code_to_json(&code.dual()?))
}

#[derive(Debug, Clone, Copy)]
pub struct Checks {
    pub self_orthogonal: bool,
    pub self_dual: bool,
    pub cyclic: bool,
    pub free: bool,
}

pub fn code_check(ring_path: &Path, code_path: &Path, checks: Checks) -> Outcome {
    let (_, ring) = load_ring(ring_path)?;
    let code = load_code(&ring, code_path)?;
    let all = !(checks.self_orthogonal || checks.self_dual || checks.cyclic || checks.free);
    let mut doc = Map::new();
    if all || checks.self_orthogonal {
        doc.insert("self_orthogonal".into(), code.is_self_orthogonal().into());
    }
    if all || checks.self_dual {
        doc.insert("self_dual".into(), code.is_self_dual().into());
    }
    if all || checks.cyclic {
        doc.insert("cyclic".into(), code.is_cyclic().into());
    }
    if all || checks.free {
        doc.insert("free".into(), code.is_free().into());
    }
    Ok(Value::Object(doc))
}

pub fn lift(ring_path: &Path, code_path: &Path, from: Option<usize>, to: usize) -> Outcome {
    let (spec, ring) = load_ring(ring_path)?;
    let from = from.unwrap_or(ring.s());
    if from == 0 || to == 0 {
        return Err(Failure::new("BAD_PRECISION", "precision levels start at 1", 1));
    }
    let tower = PrecisionTower::new(spec, from.max(to))?;
    let lower = tower.level(from)?;
    let code = load_code(&lower, code_path)?;
    let (operation, out) =
        if to >= from { ("lift", tower.lift_code(&code, to)?) } else { ("project", tower.project_code(&code, to)?) };
    Ok(extend(
        wire::code_to_json(&out),
        json!({
            "operation": operation,
            "from_precision": s(from),
            "to_precision": s(to),
            "ring": wire::spec_to_json(out.ring().spec()),
        }),
    ))
}

pub fn lift_cyclic(ring_path: &Path, m: usize, gbar: &str, precision: Option<usize>) -> Outcome {
    let (_, ring) = load_ring(ring_path)?;
    let target = match precision {
        Some(i) if i != ring.s() => ring.at_precision(i)?,
        _ => ring,
    };
    let gbar_doc = match serde_json::from_str::<Value>(gbar) {
        Ok(v) => v,
        Err(_) => read_json(Path::new(gbar))?,
    };
    let field = target.residue_field();
    let gbar = wire::parse_poly(&field, &gbar_doc)?;
    let (g, code) = lift_cyclic_code(&gbar, m, &target)?;
    Ok(json!({
        "m": s(m),
        "precision": s(target.s()),
        "generator": wire::poly_to_json(&g),
        "display": s(&g),
        "code": wire::code_to_json(&code),
        "ring": wire::spec_to_json(target.spec()),
    }))
}

fn alpha_coeffs(spec: &ChainRingSpec, path: Option<&Path>) -> Result<Vec<num_bigint::BigInt>, Failure> {
    match path {
        Some(p) => Ok(wire::parse_int_coeffs(&read_json(p)?, spec.e(), spec.r)?),
        None => {
            let mut c = vec![num_bigint::BigInt::from(0); spec.e() * spec.r];
            c[0] = 1.into();
            Ok(c)
        }
    }
}

fn unit_doc(x: &ZpScalar) -> (Value, Value) {
    (s(x.unit_part()), s(x.precision().saturating_sub(x.valuation())))
}

pub fn lattice_build(
    ring_path: &Path,
    code_path: &Path,
    alpha: Option<&Path>,
    precision: Option<usize>,
    scaled: bool,
) -> Outcome {
    if scaled && alpha.is_some() {
        return Err(Failure::usage("--scaled uses alpha = 1; drop --alpha"));
    }
    let (spec, ring) = load_ring(ring_path)?;
    let code = load_code(&ring, code_path)?;
    let coeffs = alpha_coeffs(&spec, alpha)?;
    let start = precision.unwrap_or_else(|| default_precision(&spec, ring.s()));
    let (lat, n) = with_auto_precision(&spec, start, |ok| {
        if scaled {
            scaled_gram_self_orthogonal(&code, ok)
        } else {
            let alpha = ok.from_integers(&coeffs)?;
            construction_a(&code, &alpha, ok)
        }
    })?;
    let gram = match lat.gram() {
        Some(g) => Value::Array(g.iter().map(|row| Value::Array(row.iter().map(s).collect())).collect()),
        None => Value::Null,
    };
    let expected = lat.expected_disc_valuation()?;
    let (unit, unit_precision) = unit_doc(lat.det_raw());
    Ok(json!({
        "dimension": s(lat.dimension()),
        "length": s(lat.length()),
        "precision": s(n),
        "index_exponent": s(lat.index_exponent()),
        "scale_exponent": s(lat.form().scale_exp),
        "gram": gram,
        "disc_valuation": s(lat.disc_valuation()),
        "disc_unit_mod_pN": unit,
        "unit_precision": unit_precision,
        "expected_disc_valuation": s(expected),
        "symmetric": lat.is_symmetric(),
        "integral": lat.is_integral(),
        "unimodular": lat.is_unimodular(),
        "cyclic": lat.is_cyclic_lattice(),
    }))
}

pub fn lattice_ideal(ring_path: &Path, i: usize, alpha: Option<&Path>, precision: Option<usize>) -> Outcome {
    let (spec, ring) = load_ring(ring_path)?;
    let coeffs = alpha_coeffs(&spec, alpha)?;
    let start = precision.unwrap_or_else(|| default_precision(&spec, ring.s().max(i)));
    let ((lat, gram), n) = with_auto_precision(&spec, start, |ok| {
        let alpha = ok.from_integers(&coeffs)?;
        let lat = ideal_lattice(ok, i, &alpha)?;
        let gram = lat.gram_signed(ok);
        Ok::<_, LatticeError>((lat, gram))
    })?;
    let (unit, unit_precision) = unit_doc(&lat.det);
    Ok(json!({
        "i": s(i),
        "precision": s(n),
        "norm": { "p": s(ring.p()), "exponent": s(lat.norm_exp) },
        "gram": gram.iter().map(|row| row.iter().map(s).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "det_valuation": s(lat.det.valuation()),
        "det_unit_mod_pN": unit,
        "unit_precision": unit_precision,
    }))
}

pub fn disc_k(ring_path: &Path, precision: Option<usize>) -> Outcome {
    let (spec, _) = load_ring(ring_path)?;
    let start = precision.unwrap_or_else(|| default_precision(&spec, spec.e()));
    let (d, n) = with_auto_precision(&spec, start, |ok| ok.disc_k())?;
    let (unit, unit_precision) = unit_doc(&d);
    Ok(json!({
        "degree": s(spec.e() * spec.r),
        "precision": s(n),
        "valuation": s(d.valuation()),
        "unit_mod_pN": unit,
        "unit_precision": unit_precision,
    }))
}
