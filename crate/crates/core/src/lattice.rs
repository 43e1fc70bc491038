//! Finite-precision models of `O_K` and Construction A lattices.
//!
//! `O_K` is modelled as the chain ring `O_K / p^N` sharing `(p, r, h, g)` with
//! the code's ring, so `Z_p` scalars live in `Z / p^N`. Traces and norms come
//! from multiplication matrices in the basis `X^k Y^j`; no embeddings are
//! constructed.

use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::code::{CodeError, LinearCode};
use crate::lifting;
use crate::ring::{specs, ChainRing, ChainRingSpec, RingElem, RingError};

/// Valuations are certified only below `N - GUARD`.
pub const GUARD: usize = 2;

/// Largest working precision tried by [`with_auto_precision`].
pub const MAX_PRECISION: usize = 1 << 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("working precision p^{precision} is too small for a certified answer")]
    PrecisionExhausted { precision: usize },
    #[error("alpha must be nonzero")]
    AlphaZero,
    #[error("the scaled form needs a totally ramified extension (r = 1)")]
    NotTotallyRamified,
    #[error("code is not self-orthogonal")]
    NotSelfOrthogonal,
    #[error("map is not an involutive automorphism of O_K: {0}")]
    BadAutomorphism(String),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Code(#[from] CodeError),
}

impl LatticeError {
    pub fn code(&self) -> &'static str {
        match self {
            LatticeError::PrecisionExhausted { .. } => "PRECISION_EXHAUSTED",
            LatticeError::AlphaZero => "ALPHA_ZERO",
            LatticeError::NotTotallyRamified => "NOT_TOTALLY_RAMIFIED",
            LatticeError::NotSelfOrthogonal => "NOT_SELF_ORTHOGONAL",
            LatticeError::BadAutomorphism(_) => "BAD_AUTOMORPHISM",
            LatticeError::Ring(e) => e.code(),
            LatticeError::Code(e) => e.code(),
        }
    }
}

/// Element of `Z / p^N` standing for a `p`-adic integer.
#[derive(Clone, PartialEq, Eq)]
pub struct ZpScalar {
    value: BigUint,
    p: u64,
    precision: usize,
}

impl ZpScalar {
    pub fn new(value: BigUint, p: u64, precision: usize) -> ZpScalar {
        let m = BigUint::from(p).pow(precision as u32);
        ZpScalar { value: value % m, p, precision }
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    /// `v_p`, capped at the precision.
    pub fn valuation(&self) -> usize {
        valuation(&self.value, self.p, self.precision)
    }

    /// The valuation is exact and clear of the guard band.
    pub fn is_certified(&self) -> bool {
        self.valuation() + GUARD < self.precision
    }

    /// `x / p^v` as a residue modulo `p^(N - v)`.
    pub fn unit_part(&self) -> BigUint {
        let v = self.valuation();
        &self.value / BigUint::from(self.p).pow(v as u32)
    }

    /// Representative in `(-p^N / 2, p^N / 2]`.
    pub fn signed(&self) -> BigInt {
        signed_rep(&self.value, &BigUint::from(self.p).pow(self.precision as u32))
    }
}

impl fmt::Debug for ZpScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {}^{})", self.signed(), self.p, self.precision)
    }
}

fn valuation(x: &BigUint, p: u64, cap: usize) -> usize {
    if x.is_zero() {
        return cap;
    }
    let p = BigUint::from(p);
    let mut v = 0;
    let mut cur = x.clone();
    while v < cap {
        let (q, r) = cur.div_rem(&p);
        if !r.is_zero() {
            break;
        }
        cur = q;
        v += 1;
    }
    v
}

fn signed_rep(x: &BigUint, modulus: &BigUint) -> BigInt {
    let x = x % modulus;
    if &x + &x > *modulus {
        BigInt::from_biguint(Sign::Plus, x) - BigInt::from_biguint(Sign::Plus, modulus.clone())
    } else {
        BigInt::from_biguint(Sign::Plus, x)
    }
}

/// Determinant over `Z / p^N` by elimination with minimal-valuation pivots.
pub fn det_mod(mut a: Vec<Vec<BigUint>>, p: u64, precision: usize) -> BigUint {
    let modulus = BigUint::from(p).pow(precision as u32);
    let pb = BigUint::from(p);
    let n = a.len();
    let mut det = BigUint::one() % &modulus;
    let mut negate = false;
    for k in 0..n {
        let mut best: Option<(usize, usize, usize)> = None;
        for i in k..n {
            for j in k..n {
                let v = valuation(&a[i][j], p, precision);
                if v < precision && best.is_none_or(|(bv, _, _)| v < bv) {
                    best = Some((v, i, j));
                }
            }
        }
        let Some((v, i, j)) = best else {
            return BigUint::zero();
        };
        if i != k {
            a.swap(i, k);
            negate = !negate;
        }
        if j != k {
            for row in a.iter_mut() {
                row.swap(j, k);
            }
            negate = !negate;
        }
        let pv = pb.pow(v as u32);
        let unit = &a[k][k] / &pv;
        let uinv = unit.modinv(&modulus).expect("pivot unit part is invertible");
        det = (det * &a[k][k]) % &modulus;
        let pivot = a[k].clone();
        for row in a.iter_mut().skip(k + 1) {
            if row[k].is_zero() {
                continue;
            }
            let f = (&row[k] / &pv * &uinv) % &modulus;
            for (x, y) in row.iter_mut().zip(&pivot).skip(k) {
                let sub = (&f * y) % &modulus;
                *x = (&*x + &modulus - sub) % &modulus;
            }
        }
    }
    if negate && !det.is_zero() {
        det = &modulus - det;
    }
    det
}

/// `O_K / p^N` with its `Z_p`-basis `X^k Y^j` and trace data.
#[derive(Clone)]
pub struct OKModel {
    spec: ChainRingSpec,
    precision: usize,
    ring: Arc<ChainRing>,
    modulus: BigUint,
    trace_basis: Vec<BigUint>,
}

impl fmt::Debug for OKModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OKModel(p={}, r={}, e={}, N={})", self.spec.p, self.spec.r, self.spec.e(), self.precision)
    }
}

impl OKModel {
    /// `O_K` for the field defined by `spec`'s `h` and `g`, modulo `p^precision`.
    pub fn new(spec: &ChainRingSpec, precision: usize) -> Result<OKModel, LatticeError> {
        if precision < 2 {
            return Err(LatticeError::PrecisionExhausted { precision });
        }
        let n = u32::try_from(precision).map_err(|_| LatticeError::PrecisionExhausted { precision })?;
        let ok_spec = ChainRingSpec { n, t: spec.e(), ..spec.clone() };
        let ring = ChainRing::new(ok_spec)?;
        let modulus = ring.characteristic().clone();
        let mut model = OKModel { spec: spec.clone(), precision, ring, modulus, trace_basis: vec![] };
        let d = model.degree();
        model.trace_basis = (0..d)
            .map(|l| {
                let b = model.basis_elem(l);
                (0..d).fold(BigUint::zero(), |acc, l2| acc + &(&b * &model.basis_elem(l2)).coeffs()[l2])
                    % &model.modulus
            })
            .collect();
        Ok(model)
    }

    pub fn spec(&self) -> &ChainRingSpec {
        &self.spec
    }

    pub fn ring(&self) -> &Arc<ChainRing> {
        &self.ring
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    pub fn p(&self) -> u64 {
        self.spec.p
    }

    /// `[K : Q_p] = e r`.
    pub fn degree(&self) -> usize {
        self.ring.width()
    }

    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }

    pub fn basis_elem(&self, l: usize) -> RingElem {
        let mut c = vec![BigUint::zero(); self.degree()];
        c[l] = BigUint::one();
        self.ring.element(c).expect("basis element")
    }

    pub fn basis(&self) -> Vec<RingElem> {
        (0..self.degree()).map(|l| self.basis_elem(l)).collect()
    }

    /// `Z_p` coordinates of `x` in the basis.
    pub fn coords<'a>(&self, x: &'a RingElem) -> &'a [BigUint] {
        x.coeffs()
    }

    pub fn from_coords(&self, c: &[BigUint]) -> RingElem {
        let c = c.iter().map(|x| x % &self.modulus).collect();
        self.ring.element(c).expect("coordinates reduced mod p^N")
    }

    pub fn from_integers(&self, c: &[BigInt]) -> Result<RingElem, LatticeError> {
        Ok(self.ring.from_integer_coeffs(c)?)
    }

    fn scalar(&self, v: BigUint) -> ZpScalar {
        ZpScalar::new(v, self.spec.p, self.precision)
    }

    /// Brings `x` into this model: identity on model elements, canonical lift
    /// from a lower level of the tower.
    pub fn embed(&self, x: &RingElem) -> Result<RingElem, LatticeError> {
        if **x.ring() == *self.ring {
            return Ok(x.clone());
        }
        if x.ring().s() > self.ring.s() {
            return Err(LatticeError::PrecisionExhausted { precision: self.precision });
        }
        Ok(lifting::lift_to(x, &self.ring)?)
    }

    /// The class of `Y`: a root of `h`.
    pub fn y_class(&self) -> Result<RingElem, LatticeError> {
        let r = self.spec.r;
        if r >= 2 {
            return Ok(self.basis_elem(1));
        }
        let mut c = vec![BigInt::zero(); self.degree()];
        c[0] = -self.spec.h[0].clone();
        self.from_integers(&c)
    }

    /// Row `l` holds the coordinates of `x * b_l`.
    pub fn mult_matrix(&self, x: &RingElem) -> Vec<Vec<BigUint>> {
        (0..self.degree()).map(|l| (x * &self.basis_elem(l)).coeffs().to_vec()).collect()
    }

    fn trace_raw(&self, x: &RingElem) -> BigUint {
        x.coeffs().iter().zip(&self.trace_basis).fold(BigUint::zero(), |acc, (a, b)| acc + a * b) % &self.modulus
    }

    pub fn trace(&self, x: &RingElem) -> ZpScalar {
        self.scalar(self.trace_raw(x))
    }

    /// Determinant of multiplication by `x`.
    pub fn norm(&self, x: &RingElem) -> ZpScalar {
        self.scalar(det_mod(self.mult_matrix(x), self.spec.p, self.precision))
    }

    /// `det(Tr(b_i b_j))`.
    pub fn disc_k(&self) -> Result<ZpScalar, LatticeError> {
        let b = self.basis();
        let gram = b.iter().map(|x| b.iter().map(|y| self.trace_raw(&(x * y))).collect()).collect();
        let d = self.scalar(det_mod(gram, self.spec.p, self.precision));
        if !d.is_certified() {
            return Err(LatticeError::PrecisionExhausted { precision: self.precision });
        }
        Ok(d)
    }
}

/// A ring automorphism of `O_K` of order at most 2, given by the images of
/// `X` and `Y`.
#[derive(Clone, Debug)]
pub struct Involution {
    images: Vec<RingElem>,
}

impl Involution {
    /// `y_image = None` fixes the unramified part.
    pub fn new(ok: &OKModel, x_image: &RingElem, y_image: Option<&RingElem>) -> Result<Involution, LatticeError> {
        let ring = ok.ring();
        let (r, e) = (ring.r(), ring.e());
        let xi = ok.embed(x_image)?;
        let yi = match y_image {
            Some(y) => ok.embed(y)?,
            None => ok.y_class()?,
        };
        let spec = ok.spec();
        let eval_y = |coeffs: &[BigInt]| -> Result<RingElem, LatticeError> {
            let mut acc = ring.zero();
            for c in coeffs.iter().rev() {
                let mut cv = vec![BigInt::zero(); ring.width()];
                cv[0] = c.clone();
                acc = &(&acc * &yi) + &ring.from_integer_coeffs(&cv)?;
            }
            Ok(acc)
        };
        if !eval_y(&spec.h)?.is_zero() {
            return Err(LatticeError::BadAutomorphism("h(sigma(Y)) != 0".into()));
        }
        let mut acc = ring.zero();
        for c in spec.g.iter().rev() {
            acc = &(&acc * &xi) + &eval_y(c)?;
        }
        if !acc.is_zero() {
            return Err(LatticeError::BadAutomorphism("g(sigma(X)) != 0".into()));
        }
        let mut images = Vec::with_capacity(e * r);
        for k in 0..e {
            for j in 0..r {
                images.push(&xi.pow(k as u64) * &yi.pow(j as u64));
            }
        }
        let inv = Involution { images };
        for l in 0..e * r {
            let b = ok.basis_elem(l);
            if inv.apply(&inv.apply(&b)) != b {
                return Err(LatticeError::BadAutomorphism("not an involution".into()));
            }
        }
        Ok(inv)
    }

    pub fn apply(&self, x: &RingElem) -> RingElem {
        let ring = x.ring();
        let mut acc = ring.zero();
        for (c, img) in x.coeffs().iter().zip(&self.images) {
            if !c.is_zero() {
                let mut cv = vec![BigUint::zero(); ring.width()];
                cv[0] = c.clone();
                acc = &acc + &(&ring.element(cv).expect("scalar") * img);
            }
        }
        acc
    }
}

/// `(x, y) -> p^(-scale_exp) sum_i Tr(alpha x_i sigma(y_i))`, with `sigma`
/// the identity when no twist is given.
#[derive(Clone, Debug)]
pub struct TraceForm {
    pub alpha: RingElem,
    pub scale_exp: usize,
    pub twist: Option<Involution>,
}

impl TraceForm {
    pub fn plain(alpha: RingElem) -> TraceForm {
        TraceForm { alpha, scale_exp: 0, twist: None }
    }

    fn raw(&self, ok: &OKModel, x: &RingElem, y: &RingElem) -> BigUint {
        let y = match &self.twist {
            Some(s) => s.apply(y),
            None => y.clone(),
        };
        ok.trace_raw(&(&(&self.alpha * x) * &y))
    }
}

/// `psi^(-1)(C)` in `O_K^m` with a trace form.
#[derive(Clone, Debug)]
pub struct LatticeModel {
    ok: OKModel,
    m: usize,
    code_s: usize,
    ok_gens: Vec<Vec<RingElem>>,
    basis: Vec<Vec<BigUint>>,
    index_exp: usize,
    image: LinearCode,
    form: TraceForm,
    gram: Vec<Vec<BigUint>>,
    det: ZpScalar,
}

fn flatten(ok: &OKModel, x: &[RingElem], ring: &Arc<ChainRing>) -> Vec<RingElem> {
    x.iter()
        .flat_map(|xi| {
            xi.coeffs()
                .iter()
                .map(|c| ring.element(vec![c % ring.characteristic()]).expect("reduced"))
                .collect::<Vec<_>>()
        })
        .take(ok.degree() * x.len())
        .collect()
}

impl LatticeModel {
    pub fn ok(&self) -> &OKModel {
        &self.ok
    }

    /// `Z_p`-rank `[K : Q_p] * m`.
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn length(&self) -> usize {
        self.m
    }

    /// `O_K`-generators: lifted standard-form rows and `pi^s e_i`.
    pub fn ok_generators(&self) -> &[Vec<RingElem>] {
        &self.ok_gens
    }

    /// Triangular `Z_p`-basis, coordinates `(i, l)` at index `i * n + l`.
    pub fn basis(&self) -> &[Vec<BigUint>] {
        &self.basis
    }

    /// `log_p [O_K^m : psi^(-1)(C)]`.
    pub fn index_exponent(&self) -> usize {
        self.index_exp
    }

    pub fn form(&self) -> &TraceForm {
        &self.form
    }

    /// Unscaled Gram entries `sum Tr(alpha x sigma(y))` modulo `p^N`.
    pub fn gram_raw(&self) -> &[Vec<BigUint>] {
        &self.gram
    }

    /// Gram entries as integers, divided by `p^scale_exp`; `None` when some
    /// entry is not integral.
    pub fn gram(&self) -> Option<Vec<Vec<BigInt>>> {
        if !self.is_integral() {
            return None;
        }
        let pk = BigInt::from(self.ok.p()).pow(self.form.scale_exp as u32);
        Some(self.gram.iter().map(|row| row.iter().map(|x| signed_rep(x, self.ok.modulus()) / &pk).collect()).collect())
    }

    pub fn is_symmetric(&self) -> bool {
        let d = self.gram.len();
        (0..d).all(|u| (0..u).all(|v| self.gram[u][v] == self.gram[v][u]))
    }

    /// Determinant of the unscaled Gram matrix.
    pub fn det_raw(&self) -> &ZpScalar {
        &self.det
    }

    /// `v_p(disc)` of the scaled form.
    pub fn disc_valuation(&self) -> i64 {
        self.det.valuation() as i64 - (self.dimension() * self.form.scale_exp) as i64
    }

    /// Unit part of the discriminant modulo `p^(N - v)`.
    pub fn disc_unit(&self) -> BigUint {
        self.det.unit_part()
    }

    /// Right side of the discriminant identity:
    /// `m v(N alpha) + m v(D_K) + 2 log_p(index) - dim * scale_exp`.
    pub fn expected_disc_valuation(&self) -> Result<i64, LatticeError> {
        let na = self.ok.norm(&self.form.alpha);
        if !na.is_certified() {
            return Err(LatticeError::PrecisionExhausted { precision: self.ok.precision });
        }
        let dk = self.ok.disc_k()?;
        let m = self.m as i64;
        Ok(m * na.valuation() as i64 + m * dk.valuation() as i64 + 2 * self.index_exp as i64
            - (self.dimension() * self.form.scale_exp) as i64)
    }

    pub fn is_integral(&self) -> bool {
        let k = self.form.scale_exp;
        self.gram.iter().flatten().all(|x| valuation(x, self.ok.p(), self.ok.precision) >= k)
    }

    pub fn is_unimodular(&self) -> bool {
        self.is_integral() && self.disc_valuation() == 0
    }

    /// Membership of `x` in `O_K^m` (elements of the model ring).
    pub fn contains(&self, x: &[RingElem]) -> bool {
        if x.len() != self.m {
            return false;
        }
        self.image.contains(&flatten(&self.ok, x, self.image.ring()))
    }

    /// Membership of a `Z_p`-coordinate vector.
    pub fn contains_coords(&self, v: &[BigUint]) -> bool {
        let ring = self.image.ring();
        if v.len() != self.dimension() {
            return false;
        }
        let y: Vec<RingElem> =
            v.iter().map(|c| ring.element(vec![c % ring.characteristic()]).expect("reduced")).collect();
        self.image.contains(&y)
    }

    /// Closed under the cyclic shift of coordinates in `O_K^m`.
    pub fn is_cyclic_lattice(&self) -> bool {
        self.ok_gens.iter().all(|g| self.contains(&crate::code::cyclic_shift(g)))
    }

    /// Nilpotency index of the code's ring.
    pub fn code_precision(&self) -> usize {
        self.code_s
    }
}

/// `Lambda_C = (psi^(-1)(C), sum Tr(alpha x_i y_i))`.
pub fn construction_a(code: &LinearCode, alpha: &RingElem, ok: &OKModel) -> Result<LatticeModel, LatticeError> {
    construction_a_with_form(code, TraceForm::plain(ok.embed(alpha)?), ok)
}

/// Construction A with an arbitrary [`TraceForm`].
pub fn construction_a_with_form(
    code: &LinearCode,
    form: TraceForm,
    ok: &OKModel,
) -> Result<LatticeModel, LatticeError> {
    let form = TraceForm { alpha: ok.embed(&form.alpha)?, ..form };
    if form.alpha.is_zero() {
        return Err(LatticeError::AlphaZero);
    }
    let r_ring = code.ring();
    let s = r_ring.s();
    let e = ok.ring().e();
    let n = ok.degree();
    let m = code.length();
    let c = s.div_ceil(e);
    if c + GUARD >= ok.precision() {
        return Err(LatticeError::PrecisionExhausted { precision: ok.precision() });
    }
    if !r_ring.is_level_of(ok.ring()) {
        return Err(RingError::RingMismatch.into());
    }

    let mut ok_gens = Vec::with_capacity(code.rank() + m);
    for row in code.standard_form().rows_original() {
        ok_gens.push(row.iter().map(|x| ok.embed(x)).collect::<Result<Vec<_>, _>>()?);
    }
    let pis = ok.ring().pi_pow(s);
    for i in 0..m {
        ok_gens.push((0..m).map(|j| if i == j { pis.clone() } else { ok.ring().zero() }).collect());
    }

    // psi^(-1)(C) contains p^c Z_p^(nm); it is the preimage of its image mod p^c
    let zpc = ChainRing::new(specs::integers_mod(ok.p(), c as u32))?;
    let basis_elems = ok.basis();
    let mut rows = Vec::with_capacity(ok_gens.len() * n);
    for g in &ok_gens {
        for b in &basis_elems {
            let v: Vec<RingElem> = g.iter().map(|x| x * b).collect();
            rows.push(flatten(ok, &v, &zpc));
        }
    }
    let image = LinearCode::from_generators(&zpc, n * m, rows)?;
    let sf = image.standard_form();
    let pc = BigUint::from(ok.p()).pow(c as u32);
    let mut basis: Vec<Vec<BigUint>> =
        sf.rows_original().iter().map(|row| row.iter().map(|x| x.coeffs()[0].clone()).collect()).collect();
    for &col in &sf.perm[sf.rows.len()..] {
        let mut v = vec![BigUint::zero(); n * m];
        v[col] = pc.clone();
        basis.push(v);
    }
    let index_exp = sf.pivots.iter().sum::<usize>() + c * (n * m - sf.rows.len());

    let vectors: Vec<Vec<RingElem>> =
        basis.iter().map(|v| (0..m).map(|i| ok.from_coords(&v[i * n..(i + 1) * n])).collect()).collect();
    let modulus = ok.modulus();
    let gram: Vec<Vec<BigUint>> = vectors
        .iter()
        .map(|x| {
            vectors
                .iter()
                .map(|y| x.iter().zip(y).fold(BigUint::zero(), |acc, (a, b)| acc + form.raw(ok, a, b)) % modulus)
                .collect()
        })
        .collect();
    let det = ok.scalar(det_mod(gram.clone(), ok.p(), ok.precision()));
    if !det.is_certified() {
        return Err(LatticeError::PrecisionExhausted { precision: ok.precision() });
    }
    Ok(LatticeModel { ok: ok.clone(), m, code_s: s, ok_gens, basis, index_exp, image, form, gram, det })
}

/// Construction A under `(x, y) -> sum Tr(x_i y_i / p)` for a self-orthogonal
/// code over a totally ramified extension.
pub fn scaled_gram_self_orthogonal(code: &LinearCode, ok: &OKModel) -> Result<LatticeModel, LatticeError> {
    scaled_gram_self_orthogonal_twisted(code, ok, None)
}

/// As [`scaled_gram_self_orthogonal`], pairing `x_i` with `sigma(y_i)`.
pub fn scaled_gram_self_orthogonal_twisted(
    code: &LinearCode,
    ok: &OKModel,
    twist: Option<Involution>,
) -> Result<LatticeModel, LatticeError> {
    if ok.spec().r != 1 {
        return Err(LatticeError::NotTotallyRamified);
    }
    if !code.is_self_orthogonal() {
        return Err(LatticeError::NotSelfOrthogonal);
    }
    let form = TraceForm { alpha: ok.ring().one(), scale_exp: 1, twist };
    construction_a_with_form(code, form, ok)
}

/// The ideal `<pi^i>` with the form `Tr(alpha x y)`.
#[derive(Clone, Debug)]
pub struct IdealLattice {
    pub i: usize,
    pub basis: Vec<RingElem>,
    pub gram: Vec<Vec<BigUint>>,
    pub det: ZpScalar,
    /// `N(I) = p^norm_exp`.
    pub norm_exp: usize,
}

impl IdealLattice {
    pub fn gram_signed(&self, ok: &OKModel) -> Vec<Vec<BigInt>> {
        self.gram.iter().map(|row| row.iter().map(|x| signed_rep(x, ok.modulus())).collect()).collect()
    }
}

pub fn ideal_lattice(ok: &OKModel, i: usize, alpha: &RingElem) -> Result<IdealLattice, LatticeError> {
    let alpha = ok.embed(alpha)?;
    if alpha.is_zero() {
        return Err(LatticeError::AlphaZero);
    }
    let pi_i = ok.ring().pi_pow(i);
    if pi_i.is_zero() {
        return Err(LatticeError::PrecisionExhausted { precision: ok.precision() });
    }
    let basis: Vec<RingElem> = ok.basis().iter().map(|b| &pi_i * b).collect();
    let gram: Vec<Vec<BigUint>> =
        basis.iter().map(|x| basis.iter().map(|y| ok.trace_raw(&(&(&alpha * x) * y))).collect()).collect();
    let det = ok.scalar(det_mod(gram.clone(), ok.p(), ok.precision()));
    if !det.is_certified() {
        return Err(LatticeError::PrecisionExhausted { precision: ok.precision() });
    }
    Ok(IdealLattice { i, basis, gram, det, norm_exp: ideal_norm(ok, i).1 })
}

/// `N(<pi^i>) = p^(r i)`, returned as `(p, r i)`.
pub fn ideal_norm(ok: &OKModel, i: usize) -> (u64, usize) {
    (ok.p(), ok.spec().r * i)
}

/// Starting precision for a code over `O_K / pi^s`.
pub fn default_precision(spec: &ChainRingSpec, s: usize) -> usize {
    let e = spec.e().max(1);
    let r = spec.r;
    let vpe = valuation(&BigUint::from(e), spec.p, usize::MAX);
    let dk_bound = r * (e - 1 + e * vpe);
    2 * (s.div_ceil(e) + dk_bound + 4)
}

/// Runs `f` at increasing precision until it stops reporting exhaustion.
pub fn with_auto_precision<T>(
    spec: &ChainRingSpec,
    start: usize,
    mut f: impl FnMut(&OKModel) -> Result<T, LatticeError>,
) -> Result<(T, usize), LatticeError> {
    let mut n = start.max(2);
    loop {
        let ok = OKModel::new(spec, n)?;
        match f(&ok) {
            Err(LatticeError::PrecisionExhausted { .. }) if n < MAX_PRECISION => n *= 2,
            other => return other.map(|t| (t, n)),
        }
    }
}
