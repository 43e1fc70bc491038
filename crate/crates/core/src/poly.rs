//! Dense polynomials over chain rings and their residue fields.
//!
//! Over a field (`s = 1`) this module factors `X^m - 1` by distinct-degree
//! and equal-degree splitting. Over a chain ring it lifts coprime
//! factorizations with quadratic Hensel steps.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigUint;
use num_integer::Integer;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::lifting;
use crate::ring::{ChainRing, RingElem, RingError};

/// Seed used when the caller does not supply one.
pub const DEFAULT_SEED: u64 = 0x6368_6169_6e6c_6966;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("divisor is not monic")]
    NonMonicDivisor,
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("operation needs a field, ring has nilpotency {0}")]
    NotAField(usize),
    #[error("length {m} is divisible by the residue characteristic {p}")]
    LengthDivisibleByP { m: usize, p: u64 },
    #[error("factors are not coprime modulo pi")]
    NotCoprime,
    #[error("f is not congruent to gbar * hbar modulo pi")]
    FactorizationMismatch,
    #[error("polynomial does not divide X^m - 1")]
    NotADivisor,
    #[error("length must be positive")]
    ZeroLength,
    #[error(transparent)]
    Ring(#[from] RingError),
}

impl PolyError {
    pub fn code(&self) -> &'static str {
        match self {
            PolyError::NonMonicDivisor => "NON_MONIC_DIVISOR",
            PolyError::NotMonic => "NOT_MONIC",
            PolyError::NotAField(_) => "NOT_A_FIELD",
            PolyError::LengthDivisibleByP { .. } => "LENGTH_DIVISIBLE_BY_P",
            PolyError::NotCoprime => "NOT_COPRIME",
            PolyError::FactorizationMismatch => "FACTORIZATION_MISMATCH",
            PolyError::NotADivisor => "NOT_A_DIVISOR",
            PolyError::ZeroLength => "ZERO_LENGTH",
            PolyError::Ring(e) => e.code(),
        }
    }
}

/// Polynomial with coefficients lowest degree first and no trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    ring: Arc<ChainRing>,
    coeffs: Vec<RingElem>,
}

impl Poly {
    pub fn new(ring: &Arc<ChainRing>, mut coeffs: Vec<RingElem>) -> Result<Poly, RingError> {
        for c in &coeffs {
            if **c.ring() != **ring {
                return Err(RingError::RingMismatch);
            }
        }
        while coeffs.last().is_some_and(RingElem::is_zero) {
            coeffs.pop();
        }
        Ok(Poly { ring: Arc::clone(ring), coeffs })
    }

    fn from_vec(ring: &Arc<ChainRing>, mut coeffs: Vec<RingElem>) -> Poly {
        while coeffs.last().is_some_and(RingElem::is_zero) {
            coeffs.pop();
        }
        Poly { ring: Arc::clone(ring), coeffs }
    }

    pub fn from_ints(ring: &Arc<ChainRing>, coeffs: &[i64]) -> Poly {
        Poly::from_vec(ring, coeffs.iter().map(|&c| ring.from_int(c)).collect())
    }

    pub fn zero(ring: &Arc<ChainRing>) -> Poly {
        Poly::from_vec(ring, vec![])
    }

    pub fn one(ring: &Arc<ChainRing>) -> Poly {
        Poly::from_vec(ring, vec![ring.one()])
    }

    /// `c * X^k`.
    pub fn monomial(c: RingElem, k: usize) -> Poly {
        let ring = Arc::clone(c.ring());
        let mut coeffs = vec![ring.zero(); k];
        coeffs.push(c);
        Poly::from_vec(&ring, coeffs)
    }

    /// `X^m - 1`.
    pub fn x_pow_minus_one(ring: &Arc<ChainRing>, m: usize) -> Poly {
        let mut coeffs = vec![ring.zero(); m + 1];
        coeffs[0] = -ring.one();
        coeffs[m] = &coeffs[m] + &ring.one();
        Poly::from_vec(ring, coeffs)
    }

    pub fn ring(&self) -> &Arc<ChainRing> {
        &self.ring
    }

    pub fn coeffs(&self) -> &[RingElem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> RingElem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.ring.zero())
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&RingElem> {
        self.coeffs.last()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_monic(&self) -> bool {
        self.lead().is_some_and(RingElem::is_one)
    }

    pub fn scale(&self, c: &RingElem) -> Poly {
        Poly::from_vec(&self.ring, self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Coefficient-wise image under `f` in `ring`.
    pub fn map(&self, ring: &Arc<ChainRing>, f: impl Fn(&RingElem) -> RingElem) -> Poly {
        Poly::from_vec(ring, self.coeffs.iter().map(f).collect())
    }

    /// Reduction modulo `pi`.
    pub fn residue(&self) -> Poly {
        self.map(&self.ring.residue_field(), |c| c.residue())
    }

    /// Value at `x`.
    pub fn eval(&self, x: &RingElem) -> RingElem {
        let mut acc = self.ring.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// Euclidean division by a monic divisor: `self = q * d + rem`, `deg rem < deg d`.
    pub fn divmod(&self, d: &Poly) -> Result<(Poly, Poly), PolyError> {
        if !d.is_monic() {
            return Err(PolyError::NonMonicDivisor);
        }
        if *self.ring != *d.ring {
            return Err(RingError::RingMismatch.into());
        }
        let dd = d.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(&self.ring), self.clone()));
        }
        let mut quot = vec![self.ring.zero(); rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let c = rem[k].clone();
            if c.is_zero() {
                continue;
            }
            for (i, di) in d.coeffs.iter().enumerate() {
                rem[k - dd + i] = &rem[k - dd + i] - &(&c * di);
            }
            quot[k - dd] = c;
        }
        rem.truncate(dd);
        Ok((Poly::from_vec(&self.ring, quot), Poly::from_vec(&self.ring, rem)))
    }

    pub fn rem(&self, d: &Poly) -> Result<Poly, PolyError> {
        Ok(self.divmod(d)?.1)
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Poly {
        let coeffs = self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * &self.ring.from_int(i as i64)).collect();
        Poly::from_vec(&self.ring, coeffs)
    }

    // ---- field operations ----

    fn require_field(&self) -> Result<(), PolyError> {
        if self.ring.is_field() {
            Ok(())
        } else {
            Err(PolyError::NotAField(self.ring.s()))
        }
    }

    /// Divides by the leading coefficient; the zero polynomial stays zero.
    pub fn make_monic(&self) -> Result<Poly, PolyError> {
        match self.lead() {
            None => Ok(self.clone()),
            Some(l) => Ok(self.scale(&l.inv()?)),
        }
    }

    /// `base^exp mod modulus` for a monic modulus.
    pub fn pow_mod(&self, exp: &BigUint, modulus: &Poly) -> Result<Poly, PolyError> {
        let base = self.rem(modulus)?;
        let mut acc = Poly::one(&self.ring).rem(modulus)?;
        for i in (0..exp.bits()).rev() {
            acc = (&acc * &acc).rem(modulus)?;
            if exp.bit(i) {
                acc = (&acc * &base).rem(modulus)?;
            }
        }
        Ok(acc)
    }

    fn cmp_canonical(&self, other: &Poly) -> Ordering {
        self.coeffs.len().cmp(&other.coeffs.len()).then_with(|| {
            for (a, b) in self.coeffs.iter().rev().zip(other.coeffs.iter().rev()) {
                let o = a.coeffs().cmp(b.coeffs());
                if o != Ordering::Equal {
                    return o;
                }
            }
            Ordering::Equal
        })
    }
}

/// Extended Euclid over a field: `(d, u, v)` with `u a + v b = d`, `d` monic.
///
/// For `b = 0` this is `(monic(a), lc(a)^-1, 0)`; two zero inputs give zeros.
pub fn xgcd_field(a: &Poly, b: &Poly) -> Result<(Poly, Poly, Poly), PolyError> {
    a.require_field()?;
    if *a.ring != *b.ring {
        return Err(RingError::RingMismatch.into());
    }
    let ring = &a.ring;
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut u0, mut u1) = (Poly::one(ring), Poly::zero(ring));
    let (mut v0, mut v1) = (Poly::zero(ring), Poly::one(ring));
    while !r1.is_zero() {
        let l = r1.lead().expect("nonzero").inv()?;
        let monic = r1.scale(&l);
        let (q, r) = r0.divmod(&monic)?;
        let q = q.scale(&l);
        let u2 = &u0 - &(&q * &u1);
        let v2 = &v0 - &(&q * &v1);
        (r0, r1) = (r1, r);
        (u0, u1) = (u1, u2);
        (v0, v1) = (v1, v2);
    }
    match r0.lead() {
        None => Ok((r0, u0, v0)),
        Some(l) => {
            let li = l.inv()?;
            Ok((r0.scale(&li), u0.scale(&li), v0.scale(&li)))
        }
    }
}

fn gcd_field(a: &Poly, b: &Poly) -> Result<Poly, PolyError> {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_zero() {
        let m = b.make_monic()?;
        let r = a.rem(&m)?;
        a = m;
        b = r;
    }
    a.make_monic()
}

fn random_poly_below(ring: &Arc<ChainRing>, deg: usize, rng: &mut ChaCha8Rng) -> Poly {
    Poly::from_vec(ring, (0..deg).map(|_| ring.random_element(rng)).collect())
}

/// Distinct-degree factorization of a squarefree monic polynomial.
fn distinct_degree(f: &Poly) -> Result<Vec<(Poly, usize)>, PolyError> {
    let ring = f.ring();
    let q = ring.residue_order();
    let x = Poly::monomial(ring.one(), 1);
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut xq = x.rem(&rest)?;
    let mut d = 1;
    while rest.degree().unwrap_or(0) >= 2 * d {
        xq = xq.pow_mod(&q, &rest)?;
        let g = gcd_field(&(&xq - &x), &rest)?;
        if g.degree() != Some(0) {
            rest = rest.divmod(&g)?.0;
            xq = xq.rem(&rest)?;
            out.push((g, d));
        }
        d += 1;
    }
    if rest.degree().unwrap_or(0) > 0 {
        let deg = rest.degree().unwrap_or(0);
        out.push((rest, deg));
    }
    Ok(out)
}

/// Cantor-Zassenhaus splitting of a product of distinct degree-`d` irreducibles.
fn equal_degree(f: &Poly, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<Poly>) -> Result<(), PolyError> {
    let deg = f.degree().unwrap_or(0);
    if deg == d {
        out.push(f.clone());
        return Ok(());
    }
    let ring = f.ring();
    let q = ring.residue_order();
    let p = ring.p();
    loop {
        let a = random_poly_below(ring, deg, rng);
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let b = if p == 2 {
            // trace from F_(q^d) down to F_2
            let k = (q.bits() - 1) as usize * d;
            let mut acc = a.rem(f)?;
            let mut sq = acc.clone();
            for _ in 1..k {
                sq = (&sq * &sq).rem(f)?;
                acc = &acc + &sq;
            }
            acc
        } else {
            let exp = (q.pow(d as u32) - 1u32) / 2u32;
            &a.pow_mod(&exp, f)? - &Poly::one(ring)
        };
        let g = gcd_field(&b, f)?;
        let gd = g.degree().unwrap_or(0);
        if gd > 0 && gd < deg {
            let (h, _) = f.divmod(&g)?;
            equal_degree(&g, d, rng, out)?;
            equal_degree(&h, d, rng, out)?;
            return Ok(());
        }
    }
}

/// Irreducible factors of a squarefree monic polynomial over a field, sorted by
/// degree and then by coefficients from the top down.
pub fn factor_squarefree(f: &Poly, seed: u64) -> Result<Vec<Poly>, PolyError> {
    f.require_field()?;
    if !f.is_monic() {
        return Err(PolyError::NotMonic);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (g, d) in distinct_degree(f)? {
        equal_degree(&g, d, &mut rng, &mut out)?;
    }
    out.sort_by(|a, b| a.cmp_canonical(b));
    Ok(out)
}

/// Monic irreducible factors of `X^m - 1` over the field `field`.
pub fn factor_xm_minus_1(m: usize, field: &Arc<ChainRing>, seed: u64) -> Result<Vec<Poly>, PolyError> {
    if !field.is_field() {
        return Err(PolyError::NotAField(field.s()));
    }
    check_length(m, field.p())?;
    factor_squarefree(&Poly::x_pow_minus_one(field, m), seed)
}

pub(crate) fn check_length(m: usize, p: u64) -> Result<(), PolyError> {
    if m == 0 {
        return Err(PolyError::ZeroLength);
    }
    if (m as u64).gcd(&p) != 1 {
        return Err(PolyError::LengthDivisibleByP { m, p });
    }
    Ok(())
}

/// Result of lifting `f = g h` from the residue field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HenselWitness {
    pub f: Poly,
    /// Monic, `deg g = deg gbar`.
    pub g: Poly,
    pub h: Poly,
    /// Bezout coefficients: `a g + b h = 1` modulo `pi^precision`.
    pub a: Poly,
    pub b: Poly,
    pub precision: usize,
}

fn teich_poly(p: &Poly, ring: &Arc<ChainRing>) -> Poly {
    p.map(ring, |c| ring.teichmuller(c))
}

fn project_poly(p: &Poly, ring: &Arc<ChainRing>) -> Result<Poly, RingError> {
    let coeffs = p.coeffs.iter().map(|c| lifting::project_to(c, ring)).collect::<Result<Vec<_>, _>>()?;
    Ok(Poly::from_vec(ring, coeffs))
}

fn lift_poly(p: &Poly, ring: &Arc<ChainRing>) -> Result<Poly, RingError> {
    let coeffs = p.coeffs.iter().map(|c| lifting::lift_to(c, ring)).collect::<Result<Vec<_>, _>>()?;
    Ok(Poly::from_vec(ring, coeffs))
}

/// Lifts `f = gbar hbar (mod pi)` to `f = g h (mod pi^precision)` in `target`.
///
/// The lift is computed in `R / pi^precision` with quadratic steps and then
/// embedded into `target` by zero-padding Teichmuller digits.
pub fn hensel_lift(
    target: &Arc<ChainRing>,
    f: &Poly,
    gbar: &Poly,
    hbar: &Poly,
    precision: usize,
) -> Result<HenselWitness, PolyError> {
    if precision == 0 || precision > target.s() {
        return Err(RingError::BadPrecision { requested: precision, available: target.s() }.into());
    }
    let field = target.residue_field();
    if **f.ring() != **target || **gbar.ring() != *field || **hbar.ring() != *field {
        return Err(RingError::RingMismatch.into());
    }
    if !f.is_monic() {
        return Err(PolyError::NotMonic);
    }
    let lc = gbar.lead().ok_or(PolyError::FactorizationMismatch)?.clone();
    let gbar = gbar.scale(&lc.inv()?);
    let hbar = hbar.scale(&lc);
    if f.residue() != &gbar * &hbar {
        return Err(PolyError::FactorizationMismatch);
    }
    let (d, u, v) = xgcd_field(&gbar, &hbar)?;
    if !d.is_monic() || d.degree() != Some(0) {
        return Err(PolyError::NotCoprime);
    }

    let work = target.at_precision(precision)?;
    let fw = project_poly(f, &work)?;
    let mut g = teich_poly(&gbar, &work);
    let mut h = teich_poly(&hbar, &work);
    let mut a = teich_poly(&u, &work);
    let mut b = teich_poly(&v, &work);
    let one = Poly::one(&work);
    let mut reached = 1;
    while reached < precision {
        let err = &fw - &(&g * &h);
        let (q, r) = (&b * &err).divmod(&g)?;
        let g_next = &g + &r;
        let h_next = &(&h + &(&a * &err)) + &(&q * &h);
        let bez = &(&(&a * &g_next) + &(&b * &h_next)) - &one;
        let (c, dd) = (&b * &bez).divmod(&g_next)?;
        b = &b - &dd;
        a = &(&a - &(&a * &bez)) - &(&c * &h_next);
        g = g_next;
        h = h_next;
        reached *= 2;
    }
    debug_assert!(fw == &g * &h);
    debug_assert!(&(&a * &g) + &(&b * &h) == one);
    Ok(HenselWitness {
        f: f.clone(),
        g: lift_poly(&g, target)?,
        h: lift_poly(&h, target)?,
        a: lift_poly(&a, target)?,
        b: lift_poly(&b, target)?,
        precision,
    })
}

/// Lifts the full irreducible factorization of `X^m - 1` to `target`
/// modulo `pi^precision`, factor by factor.
pub fn lift_full_factorization(
    m: usize,
    target: &Arc<ChainRing>,
    precision: usize,
    seed: u64,
) -> Result<Vec<Poly>, PolyError> {
    let field = target.residue_field();
    let base = factor_xm_minus_1(m, &field, seed)?;
    let mut rest = Poly::x_pow_minus_one(target, m);
    let mut out = Vec::with_capacity(base.len());
    for (i, fbar) in base.iter().enumerate() {
        if i + 1 == base.len() {
            // what remains is the lift of the last factor
            let w = target.at_precision(precision)?;
            out.push(lift_poly(&project_poly(&rest, &w)?, target)?);
            break;
        }
        let cofactor = base[i + 1..].iter().fold(Poly::one(&field), |acc, p| &acc * p);
        let wit = hensel_lift(target, &rest, fbar, &cofactor, precision)?;
        out.push(wit.g);
        rest = wit.h;
    }
    Ok(out)
}

macro_rules! poly_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<&Poly> for &Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                assert!(*self.ring == *rhs.ring, "ring mismatch");
                #[allow(clippy::redundant_closure_call)]
                $body(self, rhs)
            }
        }
    };
}

fn zip_with(a: &Poly, b: &Poly, f: impl Fn(&RingElem, &RingElem) -> RingElem) -> Poly {
    let n = a.coeffs.len().max(b.coeffs.len());
    let coeffs = (0..n).map(|i| f(&a.coeff(i), &b.coeff(i))).collect();
    Poly::from_vec(&a.ring, coeffs)
}

poly_binop!(Add, add, |a: &Poly, b: &Poly| zip_with(a, b, |x, y| x + y));
poly_binop!(Sub, sub, |a: &Poly, b: &Poly| zip_with(a, b, |x, y| x - y));
poly_binop!(Mul, mul, |a: &Poly, b: &Poly| {
    if a.is_zero() || b.is_zero() {
        return Poly::zero(&a.ring);
    }
    let mut out = vec![a.ring.zero(); a.coeffs.len() + b.coeffs.len() - 1];
    for (i, x) in a.coeffs.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.coeffs.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    Poly::from_vec(&a.ring, out)
});

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::from_vec(&self.ring, self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c.is_one()) {
                (0, _) => write!(f, "{c}")?,
                (1, true) => write!(f, "X")?,
                (1, false) => write!(f, "{c}X")?,
                (_, true) => write!(f, "X^{i}")?,
                (_, false) => write!(f, "{c}X^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}
