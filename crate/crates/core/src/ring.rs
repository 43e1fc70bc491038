//! Finite chain rings `GR(p^n, r)[X] / <g(X), p^(n-1) X^t>`.
//!
//! An element is stored as an `e x r` array of integers, the coefficient of
//! `X^k Y^j` at position `k * r + j`. Coefficients at positions `k < t` live in
//! `[0, p^n)`; those at `k >= t` live in `[0, p^(n-1))`. With that reduction the
//! representation is canonical and `|R| = (p^r)^s` with `s = (n-1) e + t`.
//!
//! The uniformizer `pi` is the class of `X`. The residue field `R / <pi>` is
//! itself represented as a chain ring with `n = e = t = 1`, so residue
//! elements, digits and polynomials over the field share the same types.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock};

use num_bigint::{BigInt, BigUint, RandBigInt, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use thiserror::Error;

use crate::fq::{self, ExtField};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("p = {0} is not prime")]
    NotPrime(u64),
    #[error("h is not basic irreducible: {0}")]
    NotBasicIrreducible(String),
    #[error("g is not Eisenstein: {0}")]
    NotEisenstein(String),
    #[error("t = {t} is outside [1, {e}]")]
    BadT { t: usize, e: usize },
    #[error("invalid ring spec: {0}")]
    InvalidSpec(String),
    #[error("operands belong to different rings")]
    RingMismatch,
    #[error("element is not a unit")]
    NotAUnit,
    #[error("expected {expected} entries, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("coefficient {0} is outside its canonical range")]
    NonCanonical(String),
    #[error("precision {requested} is not available (have {available})")]
    BadPrecision { requested: usize, available: usize },
}

impl RingError {
    pub fn code(&self) -> &'static str {
        match self {
            RingError::NotPrime(_) => "NOT_PRIME",
            RingError::NotBasicIrreducible(_) => "NOT_BASIC_IRREDUCIBLE",
            RingError::NotEisenstein(_) => "NOT_EISENSTEIN",
            RingError::BadT { .. } => "BAD_T",
            RingError::InvalidSpec(_) => "INVALID_SPEC",
            RingError::RingMismatch => "RING_MISMATCH",
            RingError::NotAUnit => "NOT_A_UNIT",
            RingError::WrongLength { .. } => "WRONG_LENGTH",
            RingError::NonCanonical(_) => "NON_CANONICAL",
            RingError::BadPrecision { .. } => "BAD_PRECISION",
        }
    }
}

/// The invariants `(p, n, r, e, t)` plus the defining polynomials.
///
/// `h` and `g` are integer polynomials. They describe `Z_(p^r) = Z_p[Y]/<h>` and
/// the Eisenstein extension `Z_(p^r)[X]/<g>` exactly; a chain ring only sees
/// them modulo `p^n`. Keeping the integers lets the same spec instantiate every
/// level of the precision tower, including `O_K` modulo `p^N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainRingSpec {
    pub p: u64,
    pub n: u32,
    pub r: usize,
    /// `h_0, ..., h_r`, monic.
    pub h: Vec<BigInt>,
    /// `g_0, ..., g_e`, each an `r`-vector over `Z[Y]/<h>`, monic.
    pub g: Vec<Vec<BigInt>>,
    pub t: usize,
}

impl ChainRingSpec {
    /// Eisenstein degree (ramification index).
    pub fn e(&self) -> usize {
        self.g.len().saturating_sub(1)
    }

    /// Nilpotency index `s = (n-1) e + t`.
    pub fn s(&self) -> usize {
        (self.n as usize).saturating_sub(1) * self.e() + self.t
    }

    /// The Galois ring `GR(p^n, r)`, i.e. `e = t = 1` with `g = X - p`.
    pub fn galois_ring(p: u64, n: u32, h: Vec<BigInt>) -> Self {
        let r = h.len().saturating_sub(1);
        let mut g0 = vec![BigInt::zero(); r];
        let mut g1 = vec![BigInt::zero(); r];
        if r > 0 {
            g0[0] = -BigInt::from(p);
            g1[0] = BigInt::one();
        }
        ChainRingSpec { p, n, r, h, g: vec![g0, g1], t: 1 }
    }

    /// The residue field `F_(p^r)` as a chain ring with `n = e = t = 1`.
    pub fn residue_field(&self) -> Self {
        let g0 = vec![BigInt::zero(); self.r];
        let mut g1 = vec![BigInt::zero(); self.r];
        if self.r > 0 {
            g1[0] = BigInt::one();
        }
        ChainRingSpec { p: self.p, n: 1, r: self.r, h: self.h.clone(), g: vec![g0, g1], t: 1 }
    }

    /// The level `O_K / pi^i` of the tower sharing `(p, r, h, g)`.
    ///
    /// `n' = ceil(i / e)` and `t' = i - (n'-1) e`; level 1 is the residue field.
    pub fn at_precision(&self, i: usize) -> Result<Self, RingError> {
        let e = self.e();
        if i == 0 || e == 0 {
            return Err(RingError::BadPrecision { requested: i, available: usize::MAX });
        }
        if i == 1 {
            return Ok(self.residue_field());
        }
        let n = i.div_ceil(e);
        let t = i - (n - 1) * e;
        let n = u32::try_from(n).map_err(|_| RingError::BadPrecision { requested: i, available: usize::MAX })?;
        Ok(ChainRingSpec { n, t, ..self.clone() })
    }
}

/// An immutable finite chain ring with precomputed reduction data.
pub struct ChainRing {
    spec: ChainRingSpec,
    e: usize,
    s: usize,
    /// p^n
    modulus: BigUint,
    /// p^(n-1)
    modulus_low: BigUint,
    /// -h_i mod p^n for i < r
    h_neg: Vec<BigUint>,
    /// -g_i mod p^n for i < e
    g_neg: Vec<Vec<BigUint>>,
    /// h and g reduced mod p^n, for equality
    h_red: Vec<BigUint>,
    g_red: Vec<Vec<BigUint>>,
    field: ExtField,
    /// Coefficients of `w * X^(e-1)` where `p = X^e * w` in R.
    pi_shift: Vec<BigUint>,
    residue_field: OnceLock<Arc<ChainRing>>,
}

impl fmt::Debug for ChainRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ChainRing(p={}, n={}, r={}, e={}, t={}, s={})",
            self.spec.p, self.spec.n, self.spec.r, self.e, self.spec.t, self.s
        )
    }
}

impl PartialEq for ChainRing {
    fn eq(&self, other: &Self) -> bool {
        self.spec.p == other.spec.p
            && self.spec.n == other.spec.n
            && self.spec.r == other.spec.r
            && self.spec.t == other.spec.t
            && self.h_red == other.h_red
            && self.g_red == other.g_red
    }
}

impl Eq for ChainRing {}

fn reduce_int(x: &BigInt, m: &BigUint) -> BigUint {
    let m = BigInt::from_biguint(Sign::Plus, m.clone());
    x.mod_floor(&m).to_biguint().expect("non-negative after mod_floor")
}

fn neg_mod(x: &BigUint, m: &BigUint) -> BigUint {
    if x.is_zero() {
        BigUint::zero()
    } else {
        m - (x % m)
    }
}

impl ChainRing {
    /// Validates `spec` and builds the arithmetic tables.
    pub fn new(spec: ChainRingSpec) -> Result<Arc<ChainRing>, RingError> {
        let p = spec.p;
        if !fq::is_prime(p) {
            return Err(RingError::NotPrime(p));
        }
        if spec.n == 0 {
            return Err(RingError::InvalidSpec("n must be positive".into()));
        }
        let r = spec.r;
        if r == 0 || spec.h.len() != r + 1 {
            return Err(RingError::InvalidSpec(format!("h must have r + 1 = {} coefficients", r + 1)));
        }
        let e = spec.e();
        if e == 0 {
            return Err(RingError::InvalidSpec("g must have degree at least 1".into()));
        }
        if spec.g.iter().any(|c| c.len() != r) {
            return Err(RingError::InvalidSpec("each coefficient of g must be an r-vector".into()));
        }
        if spec.t < 1 || spec.t > e {
            return Err(RingError::BadT { t: spec.t, e });
        }

        let pb = BigUint::from(p);
        let modulus = pb.pow(spec.n);
        let modulus_low = pb.pow(spec.n - 1);

        let h_red: Vec<BigUint> = spec.h.iter().map(|c| reduce_int(c, &modulus)).collect();
        if !h_red[r].is_one() {
            return Err(RingError::NotBasicIrreducible("h must be monic".into()));
        }
        let pmod = BigUint::from(p);
        let hbar: Vec<u64> = spec.h.iter().map(|c| reduce_int(c, &pmod).to_u64().expect("reduced mod p")).collect();
        let field = ExtField { p, hbar };
        if !field.is_irreducible() {
            return Err(RingError::NotBasicIrreducible("h is reducible modulo p".into()));
        }

        let g_red: Vec<Vec<BigUint>> =
            spec.g.iter().map(|c| c.iter().map(|x| reduce_int(x, &modulus)).collect()).collect();
        let mut lead = vec![BigUint::zero(); r];
        lead[0] = BigUint::one() % &modulus;
        if g_red[e] != lead {
            return Err(RingError::NotEisenstein("g must be monic".into()));
        }
        for (i, c) in spec.g[..e].iter().enumerate() {
            if c.iter().any(|x| !reduce_int(x, &pmod).is_zero()) {
                return Err(RingError::NotEisenstein(format!("coefficient of X^{i} is not divisible by p")));
            }
        }
        // Constant term must have p-valuation exactly 1; visible only when n >= 2.
        let p_int = BigInt::from(p);
        let g0_over_p: Vec<BigInt> = spec.g[0].iter().map(|x| x.div_floor(&p_int)).collect();
        let g0_unit = g0_over_p.iter().any(|x| !reduce_int(x, &pmod).is_zero());
        if spec.n >= 2 && !g0_unit {
            return Err(RingError::NotEisenstein("constant term has p-valuation above 1".into()));
        }
        if spec.s() == 1 && e > 1 {
            // every s = 1 ring is the residue field; keep one representation
            return ChainRing::new(spec.residue_field());
        }

        let h_neg = h_red[..r].iter().map(|c| neg_mod(c, &modulus)).collect();
        let g_neg = g_red[..e].iter().map(|v| v.iter().map(|c| neg_mod(c, &modulus)).collect()).collect();

        let mut ring = ChainRing {
            e,
            s: spec.s(),
            spec,
            modulus,
            modulus_low,
            h_neg,
            g_neg,
            h_red,
            g_red,
            field,
            pi_shift: vec![BigUint::zero(); e * r],
            residue_field: OnceLock::new(),
        };

        if ring.spec.n >= 2 {
            // p * (u0 + c1 X + ... + c_{e-1} X^{e-1}) = -X^e with u0 a unit,
            // so p = X^e * w for w = -(u0 + ...)^{-1}.
            let mut q = vec![BigUint::zero(); e * r];
            for (k, coeff) in ring.spec.g[..e].iter().enumerate() {
                for (j, x) in coeff.iter().enumerate() {
                    q[k * r + j] = reduce_int(&x.div_floor(&p_int), &ring.modulus);
                }
            }
            ring.canonicalize(&mut q);
            let inv = ring
                .raw_inv(&q)
                .ok_or_else(|| RingError::NotEisenstein("constant term is not p times a unit".into()))?;
            let w = ring.raw_neg(&inv);
            let x_pow = ring.raw_pi_pow(e - 1);
            ring.pi_shift = ring.raw_mul(&w, &x_pow);
        }
        Ok(Arc::new(ring))
    }

    /// True when `spec` describes this ring, comparing `h` and `g` modulo `p^n`.
    pub fn matches_spec(&self, spec: &ChainRingSpec) -> bool {
        spec.p == self.spec.p
            && spec.n == self.spec.n
            && spec.r == self.spec.r
            && spec.t == self.spec.t
            && spec.e() == self.e
            && spec.h.len() == self.h_red.len()
            && spec.h.iter().zip(&self.h_red).all(|(a, b)| reduce_int(a, &self.modulus) == *b)
            && spec
                .g
                .iter()
                .zip(&self.g_red)
                .all(|(a, b)| a.len() == b.len() && a.iter().zip(b).all(|(x, y)| reduce_int(x, &self.modulus) == *y))
    }

    /// True when this ring is level `self.s()` of the tower through `other`.
    pub fn is_level_of(&self, other: &ChainRing) -> bool {
        if self == other {
            return true;
        }
        if self.s > other.s || self.spec.p != other.spec.p || self.spec.r != other.spec.r {
            return false;
        }
        match other.spec.at_precision(self.s) {
            Ok(spec) => self.matches_spec(&spec),
            Err(_) => false,
        }
    }

    pub fn spec(&self) -> &ChainRingSpec {
        &self.spec
    }

    pub fn p(&self) -> u64 {
        self.spec.p
    }

    pub fn n(&self) -> u32 {
        self.spec.n
    }

    pub fn r(&self) -> usize {
        self.spec.r
    }

    pub fn e(&self) -> usize {
        self.e
    }

    pub fn t(&self) -> usize {
        self.spec.t
    }

    /// Nilpotency index.
    pub fn s(&self) -> usize {
        self.s
    }

    /// Number of stored coefficients, `e * r`.
    pub fn width(&self) -> usize {
        self.e * self.spec.r
    }

    pub fn is_field(&self) -> bool {
        self.s == 1
    }

    /// `p^n`, the characteristic.
    pub fn characteristic(&self) -> &BigUint {
        &self.modulus
    }

    /// Residue field size `p^r`.
    pub fn residue_order(&self) -> BigUint {
        self.field.order()
    }

    /// `|R| = (p^r)^s`.
    pub fn size(&self) -> BigUint {
        self.residue_order().pow(self.s as u32)
    }

    /// Exclusive upper bound of the coefficient at `pos`.
    pub fn coeff_bound(&self, pos: usize) -> &BigUint {
        if pos / self.spec.r >= self.spec.t {
            &self.modulus_low
        } else {
            &self.modulus
        }
    }

    pub fn residue_field(self: &Arc<Self>) -> Arc<ChainRing> {
        if self.is_field() && self.e == 1 {
            return Arc::clone(self);
        }
        self.residue_field
            .get_or_init(|| ChainRing::new(self.spec.residue_field()).expect("residue field of a valid ring"))
            .clone()
    }

    /// Level `i` of the precision tower through this ring.
    pub fn at_precision(self: &Arc<Self>, i: usize) -> Result<Arc<ChainRing>, RingError> {
        if i == self.s {
            return Ok(Arc::clone(self));
        }
        if i == 1 {
            return Ok(self.residue_field());
        }
        ChainRing::new(self.spec.at_precision(i)?)
    }

    // ---- raw coefficient arithmetic ----

    fn canonicalize(&self, c: &mut [BigUint]) {
        for (pos, x) in c.iter_mut().enumerate() {
            let m = self.coeff_bound(pos);
            if *x >= *m {
                *x %= m;
            }
        }
    }

    fn raw_add(&self, a: &[BigUint], b: &[BigUint]) -> Vec<BigUint> {
        let mut out: Vec<BigUint> = a.iter().zip(b).map(|(x, y)| x + y).collect();
        self.canonicalize(&mut out);
        out
    }

    fn raw_neg(&self, a: &[BigUint]) -> Vec<BigUint> {
        a.iter().enumerate().map(|(pos, x)| neg_mod(x, self.coeff_bound(pos))).collect()
    }

    fn raw_sub(&self, a: &[BigUint], b: &[BigUint]) -> Vec<BigUint> {
        let nb = self.raw_neg(b);
        self.raw_add(a, &nb)
    }

    fn gr_mul_acc(&self, acc: &mut [BigUint], a: &[BigUint], b: &[BigUint]) {
        // acc += a * b in Z[Y] (unreduced), acc has length 2r - 1
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    acc[i + j] += x * y;
                }
            }
        }
    }

    fn gr_reduce(&self, mut prod: Vec<BigUint>) -> Vec<BigUint> {
        let r = self.spec.r;
        for d in (r..prod.len()).rev() {
            let c = std::mem::take(&mut prod[d]) % &self.modulus;
            if c.is_zero() {
                continue;
            }
            for i in 0..r {
                prod[d - r + i] += &c * &self.h_neg[i];
            }
        }
        prod.truncate(r);
        for x in prod.iter_mut() {
            *x %= &self.modulus;
        }
        prod
    }

    fn raw_mul(&self, a: &[BigUint], b: &[BigUint]) -> Vec<BigUint> {
        let (e, r) = (self.e, self.spec.r);
        let mut acc: Vec<Vec<BigUint>> = vec![vec![BigUint::zero(); 2 * r - 1]; 2 * e - 1];
        for k1 in 0..e {
            let ak = &a[k1 * r..(k1 + 1) * r];
            if ak.iter().all(Zero::is_zero) {
                continue;
            }
            for k2 in 0..e {
                let bk = &b[k2 * r..(k2 + 1) * r];
                self.gr_mul_acc(&mut acc[k1 + k2], ak, bk);
            }
        }
        let mut reduced: Vec<Vec<BigUint>> = acc.into_iter().map(|v| self.gr_reduce(v)).collect();
        for d in (e..2 * e - 1).rev() {
            let c = std::mem::take(&mut reduced[d]);
            if c.iter().all(Zero::is_zero) {
                continue;
            }
            for i in 0..e {
                let mut tmp = vec![BigUint::zero(); 2 * r - 1];
                self.gr_mul_acc(&mut tmp, &c, &self.g_neg[i]);
                let tmp = self.gr_reduce(tmp);
                for (dst, x) in reduced[d - e + i].iter_mut().zip(tmp) {
                    *dst += x;
                    if *dst >= self.modulus {
                        *dst -= &self.modulus;
                    }
                }
            }
        }
        let mut out: Vec<BigUint> = reduced.into_iter().take(e).flatten().collect();
        self.canonicalize(&mut out);
        out
    }

    fn raw_one(&self) -> Vec<BigUint> {
        let mut c = vec![BigUint::zero(); self.width()];
        c[0] = BigUint::one() % &self.modulus;
        c
    }

    fn raw_pi_pow(&self, k: usize) -> Vec<BigUint> {
        let mut acc = self.raw_one();
        let mut x = vec![BigUint::zero(); self.width()];
        if self.e > 1 {
            x[self.spec.r] = BigUint::one() % self.coeff_bound(self.spec.r);
        } else {
            // e = 1: X = -g_0
            x[..self.spec.r].clone_from_slice(&self.g_neg[0]);
        }
        self.canonicalize(&mut x);
        for _ in 0..k {
            acc = self.raw_mul(&acc, &x);
        }
        acc
    }

    fn raw_pow(&self, a: &[BigUint], exp: &BigUint) -> Vec<BigUint> {
        let mut acc = self.raw_one();
        for i in (0..exp.bits()).rev() {
            acc = self.raw_mul(&acc, &acc);
            if exp.bit(i) {
                acc = self.raw_mul(&acc, a);
            }
        }
        acc
    }

    fn raw_residue(&self, a: &[BigUint]) -> Vec<u64> {
        let p = BigUint::from(self.spec.p);
        a[..self.spec.r].iter().map(|x| (x % &p).to_u64().expect("reduced mod p")).collect()
    }

    fn raw_from_residue(&self, v: &[u64]) -> Vec<BigUint> {
        let mut c = vec![BigUint::zero(); self.width()];
        for (j, &x) in v.iter().enumerate() {
            c[j] = BigUint::from(x) % &self.modulus;
        }
        c
    }

    /// Newton iteration `y <- y (2 - a y)` from a residue inverse.
    fn raw_inv(&self, a: &[BigUint]) -> Option<Vec<BigUint>> {
        let res = self.raw_residue(a);
        if res.iter().all(|&x| x == 0) {
            return None;
        }
        let mut y = self.raw_from_residue(&self.field.inv(&res));
        let two = {
            let mut c = vec![BigUint::zero(); self.width()];
            c[0] = BigUint::from(2u32) % &self.modulus;
            c
        };
        let mut prec = 1;
        while prec < self.s {
            let ay = self.raw_mul(a, &y);
            y = self.raw_mul(&y, &self.raw_sub(&two, &ay));
            prec *= 2;
        }
        debug_assert_eq!(self.raw_mul(a, &y), self.raw_one());
        Some(y)
    }

    /// `y` with `pi * y = a`; requires `a` to have zero residue.
    fn raw_div_pi(&self, a: &[BigUint]) -> Vec<BigUint> {
        let r = self.spec.r;
        let mut out = vec![BigUint::zero(); self.width()];
        out[..self.width() - r].clone_from_slice(&a[r..]);
        if self.spec.n >= 2 {
            let p = BigUint::from(self.spec.p);
            let mut d0 = vec![BigUint::zero(); self.width()];
            let mut nonzero = false;
            for j in 0..r {
                debug_assert!((&a[j] % &p).is_zero());
                d0[j] = &a[j] / &p;
                nonzero |= !d0[j].is_zero();
            }
            if nonzero {
                let extra = self.raw_mul(&self.pi_shift, &d0);
                return self.raw_add(&out, &extra);
            }
        }
        self.canonicalize(&mut out);
        out
    }

    fn wrap(self: &Arc<Self>, c: Vec<BigUint>) -> RingElem {
        RingElem { ring: Arc::clone(self), c }
    }

    // ---- element constructors ----

    pub fn zero(self: &Arc<Self>) -> RingElem {
        self.wrap(vec![BigUint::zero(); self.width()])
    }

    pub fn one(self: &Arc<Self>) -> RingElem {
        self.wrap(self.raw_one())
    }

    /// The uniformizer, the class of `X`.
    pub fn pi(self: &Arc<Self>) -> RingElem {
        self.wrap(self.raw_pi_pow(1))
    }

    pub fn pi_pow(self: &Arc<Self>, k: usize) -> RingElem {
        if k >= self.s {
            return self.zero();
        }
        self.wrap(self.raw_pi_pow(k))
    }

    /// Image of an integer.
    pub fn from_int(self: &Arc<Self>, x: i64) -> RingElem {
        let mut c = vec![BigUint::zero(); self.width()];
        c[0] = reduce_int(&BigInt::from(x), &self.modulus);
        self.wrap(c)
    }

    /// Element from a canonical coefficient array; rejects out-of-range values.
    pub fn element(self: &Arc<Self>, coeffs: Vec<BigUint>) -> Result<RingElem, RingError> {
        if coeffs.len() != self.width() {
            return Err(RingError::WrongLength { expected: self.width(), got: coeffs.len() });
        }
        for (pos, x) in coeffs.iter().enumerate() {
            if x >= self.coeff_bound(pos) {
                return Err(RingError::NonCanonical(x.to_string()));
            }
        }
        Ok(self.wrap(coeffs))
    }

    /// Image of the integer combination `sum c_(k,j) X^k Y^j`.
    pub fn from_integer_coeffs(self: &Arc<Self>, coeffs: &[BigInt]) -> Result<RingElem, RingError> {
        if coeffs.len() != self.width() {
            return Err(RingError::WrongLength { expected: self.width(), got: coeffs.len() });
        }
        let mut c: Vec<BigUint> = coeffs.iter().map(|x| reduce_int(x, &self.modulus)).collect();
        self.canonicalize(&mut c);
        Ok(self.wrap(c))
    }

    /// Element of the residue field given by `r` integers mod p, as a ring element
    /// of this ring's residue field.
    pub fn residue_elem(self: &Arc<Self>, v: &[u64]) -> Result<RingElem, RingError> {
        let f = self.residue_field();
        if v.len() != f.spec.r {
            return Err(RingError::WrongLength { expected: f.spec.r, got: v.len() });
        }
        f.element(v.iter().map(|&x| BigUint::from(x)).collect())
    }

    pub fn random_element<R: Rng + ?Sized>(self: &Arc<Self>, rng: &mut R) -> RingElem {
        let c = (0..self.width()).map(|pos| rng.gen_biguint_below(self.coeff_bound(pos))).collect();
        self.wrap(c)
    }

    /// Every element in mixed-radix order. Only sensible for small rings.
    pub fn elements(self: &Arc<Self>) -> impl Iterator<Item = RingElem> + '_ {
        let bounds: Vec<u64> = (0..self.width())
            .map(|pos| self.coeff_bound(pos).to_u64().expect("enumeration needs word-sized coefficients"))
            .collect();
        let mut counter = vec![0u64; bounds.len()];
        let mut done = bounds.contains(&0);
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            let elem = self.wrap(counter.iter().map(|&x| BigUint::from(x)).collect());
            done = true;
            for (digit, &b) in counter.iter_mut().zip(&bounds) {
                *digit += 1;
                if *digit < b {
                    done = false;
                    break;
                }
                *digit = 0;
            }
            Some(elem)
        })
    }

    // ---- structure ----

    fn check(&self, x: &RingElem) -> Result<(), RingError> {
        if std::ptr::eq(self, Arc::as_ptr(&x.ring)) || *self == *x.ring {
            Ok(())
        } else {
            Err(RingError::RingMismatch)
        }
    }

    /// Image in the residue field.
    pub fn residue(self: &Arc<Self>, x: &RingElem) -> RingElem {
        let f = self.residue_field();
        let c = f.raw_from_residue(&self.raw_residue(&x.c));
        f.wrap(c)
    }

    pub fn is_unit(&self, x: &RingElem) -> bool {
        self.raw_residue(&x.c).iter().any(|&v| v != 0)
    }

    /// Writes `x = pi^v * u` with `u` a unit; `None` when `x = 0`.
    ///
    /// `u` is determined modulo `pi^(s-v)`; the returned representative
    /// satisfies `pi^v * u = x` exactly.
    pub fn split_valuation(self: &Arc<Self>, x: &RingElem) -> (usize, Option<RingElem>) {
        let mut cur = x.c.clone();
        let mut v = 0;
        while v < self.s {
            if self.raw_residue(&cur).iter().any(|&d| d != 0) {
                return (v, Some(self.wrap(cur)));
            }
            v += 1;
            if v < self.s {
                cur = self.raw_div_pi(&cur);
            }
        }
        (self.s, None)
    }

    /// Largest `i` with `x` in `<pi^i>`; `s` for zero.
    pub fn valuation(self: &Arc<Self>, x: &RingElem) -> usize {
        self.split_valuation(x).0
    }

    /// Some `y` with `pi^k * y = x`, or `None` when `valuation(x) < k`.
    pub fn div_pi_pow(self: &Arc<Self>, x: &RingElem, k: usize) -> Option<RingElem> {
        let mut cur = x.c.clone();
        for _ in 0..k {
            if self.raw_residue(&cur).iter().any(|&d| d != 0) {
                return None;
            }
            cur = self.raw_div_pi(&cur);
        }
        Some(self.wrap(cur))
    }

    pub fn inv(self: &Arc<Self>, x: &RingElem) -> Result<RingElem, RingError> {
        self.check(x)?;
        self.raw_inv(&x.c).map(|c| self.wrap(c)).ok_or(RingError::NotAUnit)
    }

    pub fn pow(self: &Arc<Self>, x: &RingElem, exp: &BigUint) -> RingElem {
        self.wrap(self.raw_pow(&x.c, exp))
    }

    /// Teichmuller representative of a residue-field element: the unique lift
    /// fixed by `x -> x^(p^r)`.
    pub fn teichmuller(self: &Arc<Self>, a: &RingElem) -> RingElem {
        let res = a.ring.raw_residue(&a.c);
        let mut x = self.raw_from_residue(&res);
        if self.s == 1 {
            return self.wrap(x);
        }
        let q = self.residue_order();
        for _ in 0..=self.s {
            let next = self.raw_pow(&x, &q);
            if next == x {
                break;
            }
            x = next;
        }
        self.wrap(x)
    }

    /// Teichmuller digits `a_0, ..., a_(s-1)` with `x = sum teich(a_i) pi^i`.
    pub fn digits(self: &Arc<Self>, x: &RingElem) -> Vec<RingElem> {
        let f = self.residue_field();
        let mut out = Vec::with_capacity(self.s);
        let mut cur = x.c.clone();
        for i in 0..self.s {
            let d = f.wrap(f.raw_from_residue(&self.raw_residue(&cur)));
            if i + 1 < self.s {
                let t = self.teichmuller(&d);
                cur = self.raw_div_pi(&self.raw_sub(&cur, &t.c));
            }
            out.push(d);
        }
        out
    }

    /// Inverse of [`ChainRing::digits`].
    pub fn from_digits(self: &Arc<Self>, digits: &[RingElem]) -> Result<RingElem, RingError> {
        if digits.len() != self.s {
            return Err(RingError::WrongLength { expected: self.s, got: digits.len() });
        }
        let f = self.residue_field();
        let mut acc = self.zero();
        let pi = self.pi();
        for d in digits.iter().rev() {
            f.check(d)?;
            acc = &(&acc * &pi) + &self.teichmuller(d);
        }
        Ok(acc)
    }

    /// Base-p digits of an element of `Z/p^n` (r = e = 1 only): `x = sum a_i p^i`.
    pub fn integer_digits(&self, x: &RingElem) -> Option<Vec<u64>> {
        if self.e != 1 || self.spec.r != 1 {
            return None;
        }
        let p = BigUint::from(self.spec.p);
        let mut v = x.c[0].clone();
        let mut out = Vec::with_capacity(self.s);
        for _ in 0..self.s {
            let (q, rem) = v.div_rem(&p);
            out.push(rem.to_u64().expect("digit below p"));
            v = q;
        }
        Some(out)
    }
}

/// Element of a [`ChainRing`] in canonical coefficient form.
#[derive(Clone)]
pub struct RingElem {
    ring: Arc<ChainRing>,
    c: Vec<BigUint>,
}

/// Residue-field elements are elements of the residue field ring.
pub type ResidueElem = RingElem;

impl RingElem {
    pub fn ring(&self) -> &Arc<ChainRing> {
        &self.ring
    }

    /// Canonical coefficients, `X^k Y^j` at index `k * r + j`.
    pub fn coeffs(&self) -> &[BigUint] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.c == self.ring.raw_one()
    }

    pub fn is_unit(&self) -> bool {
        self.ring.is_unit(self)
    }

    pub fn valuation(&self) -> usize {
        self.ring.valuation(self)
    }

    pub fn inv(&self) -> Result<RingElem, RingError> {
        self.ring.inv(self)
    }

    pub fn pow(&self, exp: u64) -> RingElem {
        self.ring.pow(self, &BigUint::from(exp))
    }

    pub fn residue(&self) -> RingElem {
        self.ring.residue(self)
    }

    pub fn digits(&self) -> Vec<RingElem> {
        self.ring.digits(self)
    }

    pub fn try_add(&self, other: &RingElem) -> Result<RingElem, RingError> {
        self.ring.check(other)?;
        Ok(self.ring.wrap(self.ring.raw_add(&self.c, &other.c)))
    }

    pub fn try_sub(&self, other: &RingElem) -> Result<RingElem, RingError> {
        self.ring.check(other)?;
        Ok(self.ring.wrap(self.ring.raw_sub(&self.c, &other.c)))
    }

    pub fn try_mul(&self, other: &RingElem) -> Result<RingElem, RingError> {
        self.ring.check(other)?;
        Ok(self.ring.wrap(self.ring.raw_mul(&self.c, &other.c)))
    }
}

impl PartialEq for RingElem {
    fn eq(&self, other: &Self) -> bool {
        self.c == other.c && self.ring.check(other).is_ok()
    }
}

impl Eq for RingElem {}

impl std::hash::Hash for RingElem {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.c.hash(state);
    }
}

impl fmt::Debug for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.len() == 1 {
            return write!(f, "{}", self.c[0]);
        }
        let r = self.ring.spec.r;
        write!(f, "[")?;
        for (k, row) in self.c.chunks(r).enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl $trait<&RingElem> for &RingElem {
            type Output = RingElem;
            fn $method(self, rhs: &RingElem) -> RingElem {
                self.$try(rhs).expect("ring mismatch")
            }
        }

        impl $trait<RingElem> for RingElem {
            type Output = RingElem;
            fn $method(self, rhs: RingElem) -> RingElem {
                (&self).$try(&rhs).expect("ring mismatch")
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        self.ring.wrap(self.ring.raw_neg(&self.c))
    }
}

impl Neg for RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        -&self
    }
}

/// Integer polynomial helper for specs: `[c0, c1, ...]` as BigInts.
pub fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Common specs used throughout tests and examples.
pub mod specs {
    use super::*;

    /// `Z/p^n`.
    pub fn integers_mod(p: u64, n: u32) -> ChainRingSpec {
        ChainRingSpec::galois_ring(p, n, ints(&[0, 1]))
    }

    /// `GR(p^n, r)` with the given `h`.
    pub fn galois(p: u64, n: u32, h: &[i64]) -> ChainRingSpec {
        ChainRingSpec::galois_ring(p, n, ints(h))
    }

    /// `Z_(p^r)[X]/<g, p^(n-1) X^t>` for `r = 1` and integer Eisenstein `g`.
    pub fn ramified(p: u64, n: u32, g: &[i64], t: usize) -> ChainRingSpec {
        ChainRingSpec { p, n, r: 1, h: ints(&[0, 1]), g: g.iter().map(|&c| vec![BigInt::from(c)]).collect(), t }
    }
}
