//! Projections and lifts along the precision tower `R_i = O_K / pi^i`.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use thiserror::Error;

use crate::code::{self, CodeError, LinearCode};
use crate::poly::{self, Poly, PolyError};
use crate::ring::{ChainRing, ChainRingSpec, RingElem, RingError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LiftError {
    #[error("cannot go from precision {from} to precision {to}")]
    BadPrecision { from: usize, to: usize },
    #[error("rings are not levels of the same tower")]
    NotInTower,
    #[error("supplied matrix does not project onto the lower code")]
    InvalidLift,
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

impl LiftError {
    pub fn code(&self) -> &'static str {
        match self {
            LiftError::BadPrecision { .. } => "BAD_PRECISION",
            LiftError::NotInTower => "NOT_IN_TOWER",
            LiftError::InvalidLift => "INVALID_LIFT",
            LiftError::Ring(e) => e.code(),
            LiftError::Code(e) => e.code(),
            LiftError::Poly(e) => e.code(),
        }
    }
}

/// `Psi`: keeps the first `target.s()` digits of `x`.
///
/// `target` must be a lower level of the tower through `x.ring()`.
pub fn project_to(x: &RingElem, target: &Arc<ChainRing>) -> Result<RingElem, RingError> {
    let src = x.ring();
    if Arc::ptr_eq(src, target) || **src == **target {
        return Ok(x.clone());
    }
    if target.s() > src.s() {
        return Err(RingError::BadPrecision { requested: target.s(), available: src.s() });
    }
    if !target.is_level_of(src) {
        return Err(RingError::RingMismatch);
    }
    let f = target.residue_field();
    let digits: Vec<RingElem> = src.digits(x)[..target.s()].iter().map(|d| rehome(d, &f)).collect();
    target.from_digits(&digits)
}

/// Canonical lift: the digits of `x` padded with zeros up to `target.s()`.
pub fn lift_to(x: &RingElem, target: &Arc<ChainRing>) -> Result<RingElem, RingError> {
    let src = x.ring();
    if Arc::ptr_eq(src, target) || **src == **target {
        return Ok(x.clone());
    }
    if target.s() < src.s() {
        return Err(RingError::BadPrecision { requested: target.s(), available: src.s() });
    }
    if !src.is_level_of(target) {
        return Err(RingError::RingMismatch);
    }
    let f = target.residue_field();
    let mut digits: Vec<RingElem> = src.digits(x).iter().map(|d| rehome(d, &f)).collect();
    digits.resize(target.s(), f.zero());
    target.from_digits(&digits)
}

/// The same residue-field element, attached to an equal copy of the field.
fn rehome(d: &RingElem, f: &Arc<ChainRing>) -> RingElem {
    f.element(d.coeffs().to_vec()).expect("equal residue fields")
}

fn map_rows(
    rows: &[Vec<RingElem>],
    f: impl Fn(&RingElem) -> Result<RingElem, RingError>,
) -> Result<Vec<Vec<RingElem>>, RingError> {
    rows.iter().map(|row| row.iter().map(&f).collect()).collect()
}

/// `Psi(C)`: projection of the standard form entrywise.
pub fn project_code_to(code: &LinearCode, target: &Arc<ChainRing>) -> Result<LinearCode, LiftError> {
    let rows = map_rows(&code.standard_form().rows_original(), |x| project_to(x, target))?;
    Ok(LinearCode::from_generators(target, code.length(), rows)?)
}

/// Canonical lift of a code: zero-padded digits of its standard form.
pub fn lift_code_to(code: &LinearCode, target: &Arc<ChainRing>) -> Result<LinearCode, LiftError> {
    let rows = map_rows(&code.standard_form().rows_original(), |x| lift_to(x, target))?;
    Ok(LinearCode::from_generators(target, code.length(), rows)?)
}

/// Accepts `rows` over a higher level as a lift of `lower` when their
/// projection generates `lower`.
pub fn validate_lift(
    lower: &LinearCode,
    target: &Arc<ChainRing>,
    rows: Vec<Vec<RingElem>>,
) -> Result<LinearCode, LiftError> {
    let higher = LinearCode::from_generators(target, lower.length(), rows)?;
    if project_code_to(&higher, lower.ring())? != *lower {
        return Err(LiftError::InvalidLift);
    }
    Ok(higher)
}

/// Cyclic code over `target` generated by the Hensel lift of `gbar`.
pub fn lift_cyclic(gbar: &Poly, m: usize, target: &Arc<ChainRing>) -> Result<(Poly, LinearCode), LiftError> {
    let field = target.residue_field();
    if **gbar.ring() != *field {
        return Err(RingError::RingMismatch.into());
    }
    poly::check_length(m, target.p())?;
    let gbar = gbar.make_monic()?;
    let xm_bar = Poly::x_pow_minus_one(&field, m);
    if gbar.is_zero() {
        return Err(CodeError::NotADivisor.into());
    }
    let (cofactor, rem) = xm_bar.divmod(&gbar)?;
    if !rem.is_zero() {
        return Err(CodeError::NotADivisor.into());
    }
    let g = if gbar.degree() == Some(0) {
        Poly::one(target)
    } else {
        let xm = Poly::x_pow_minus_one(target, m);
        poly::hensel_lift(target, &xm, &gbar, &cofactor, target.s())?.g
    };
    let code = code::cyclic_code(&g, m)?;
    Ok((g, code))
}

/// The rings `R_1, ..., R_max` sharing `(p, r, h, g)`, built on demand.
pub struct PrecisionTower {
    spec: ChainRingSpec,
    max: usize,
    levels: Mutex<BTreeMap<usize, Arc<ChainRing>>>,
}

impl PrecisionTower {
    /// Tower through `spec`, with levels up to `max` (which may exceed `spec.s()`).
    pub fn new(spec: ChainRingSpec, max: usize) -> Result<PrecisionTower, RingError> {
        let top = ChainRing::new(spec.at_precision(max)?)?;
        let mut levels = BTreeMap::new();
        levels.insert(max, top);
        Ok(PrecisionTower { spec, max, levels: Mutex::new(levels) })
    }

    /// Tower whose top level is `ring`.
    pub fn from_ring(ring: &Arc<ChainRing>) -> PrecisionTower {
        let mut levels = BTreeMap::new();
        levels.insert(ring.s(), Arc::clone(ring));
        PrecisionTower { spec: ring.spec().clone(), max: ring.s(), levels: Mutex::new(levels) }
    }

    pub fn max_level(&self) -> usize {
        self.max
    }

    pub fn level(&self, i: usize) -> Result<Arc<ChainRing>, LiftError> {
        if i == 0 || i > self.max {
            return Err(LiftError::BadPrecision { from: self.max, to: i });
        }
        let mut levels = self.levels.lock().expect("tower cache");
        if let Some(r) = levels.get(&i) {
            return Ok(Arc::clone(r));
        }
        let ring = if i == 1 { levels[&self.max].residue_field() } else { ChainRing::new(self.spec.at_precision(i)?)? };
        levels.insert(i, Arc::clone(&ring));
        Ok(ring)
    }

    fn locate(&self, ring: &ChainRing) -> Result<usize, LiftError> {
        let i = ring.s();
        if i > self.max || *self.level(i)? != *ring {
            return Err(LiftError::NotInTower);
        }
        Ok(i)
    }

    /// `Psi_i^j` applied to `x` in `R_j`.
    pub fn project(&self, x: &RingElem, i: usize) -> Result<RingElem, LiftError> {
        let j = self.locate(x.ring())?;
        if i > j {
            return Err(LiftError::BadPrecision { from: j, to: i });
        }
        Ok(project_to(x, &self.level(i)?)?)
    }

    /// Canonical lift of `x` in `R_i` to `R_j`.
    pub fn lift(&self, x: &RingElem, j: usize) -> Result<RingElem, LiftError> {
        let i = self.locate(x.ring())?;
        if j < i {
            return Err(LiftError::BadPrecision { from: i, to: j });
        }
        Ok(lift_to(x, &self.level(j)?)?)
    }

    pub fn project_code(&self, code: &LinearCode, i: usize) -> Result<LinearCode, LiftError> {
        let j = self.locate(code.ring())?;
        if i > j {
            return Err(LiftError::BadPrecision { from: j, to: i });
        }
        project_code_to(code, &self.level(i)?)
    }

    pub fn lift_code(&self, code: &LinearCode, j: usize) -> Result<LinearCode, LiftError> {
        let i = self.locate(code.ring())?;
        if j < i {
            return Err(LiftError::BadPrecision { from: i, to: j });
        }
        lift_code_to(code, &self.level(j)?)
    }
}
