//! Linear and cyclic codes over a chain ring.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use thiserror::Error;

use crate::poly::{self, Poly, PolyError};
use crate::ring::{ChainRing, RingElem, RingError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error("code length must be positive")]
    EmptyLength,
    #[error("row {row} has length {got}, expected {expected}")]
    RowLength { row: usize, expected: usize, got: usize },
    #[error("generator polynomial does not divide X^m - 1")]
    NotADivisor,
    #[error("computed dual failed verification: {0}")]
    DualCheckFailed(String),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

impl CodeError {
    pub fn code(&self) -> &'static str {
        match self {
            CodeError::EmptyLength => "EMPTY_LENGTH",
            CodeError::RowLength { .. } => "WRONG_LENGTH",
            CodeError::NotADivisor => "NOT_A_DIVISOR",
            CodeError::DualCheckFailed(_) => "DUAL_CHECK_FAILED",
            CodeError::Ring(e) => e.code(),
            CodeError::Poly(e) => e.code(),
        }
    }
}

/// The type vector `(k_0, ..., k_(s-1))`: `k_i` rows have pivot `pi^i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CodeType(pub Vec<usize>);

impl CodeType {
    pub fn rank(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn is_free(&self) -> bool {
        self.0.iter().skip(1).all(|&k| k == 0)
    }

    /// `sum (s - i) k_i`, the base-`p^r` logarithm of `|C|`.
    pub fn log_size(&self) -> usize {
        let s = self.0.len();
        self.0.iter().enumerate().map(|(i, k)| (s - i) * k).sum()
    }
}

impl fmt::Display for CodeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, k) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}")?;
        }
        write!(f, ")")
    }
}

/// Generator matrix in block standard form.
///
/// Columns are in permuted order: column `j` here is column `perm[j]` of the
/// original code. Row `k` is zero left of column `k`, has `pi^pivots[k]` at
/// column `k`, and every entry is divisible by that power. Entries above a
/// pivot `pi^v` only carry Teichmuller digits below `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StandardForm {
    pub rows: Vec<Vec<RingElem>>,
    pub perm: Vec<usize>,
    pub pivots: Vec<usize>,
    pub code_type: CodeType,
}

impl StandardForm {
    /// Rows with the column permutation undone.
    pub fn rows_original(&self) -> Vec<Vec<RingElem>> {
        self.rows.iter().map(|row| unpermute(row, &self.perm)).collect()
    }
}

fn unpermute(row: &[RingElem], perm: &[usize]) -> Vec<RingElem> {
    let mut out = row.to_vec();
    for (j, &orig) in perm.iter().enumerate() {
        out[orig] = row[j].clone();
    }
    out
}

fn permute(row: &[RingElem], perm: &[usize]) -> Vec<RingElem> {
    perm.iter().map(|&orig| row[orig].clone()).collect()
}

fn axpy(dst: &mut [RingElem], c: &RingElem, src: &[RingElem]) {
    if c.is_zero() {
        return;
    }
    for (d, x) in dst.iter_mut().zip(src) {
        if !x.is_zero() {
            *d = &*d - &(c * x);
        }
    }
}

/// Part of `x` with Teichmuller digits at positions `>= v`, divided by `pi^v`.
fn high_digits(ring: &Arc<ChainRing>, x: &RingElem, v: usize) -> RingElem {
    if v == 0 {
        return x.clone();
    }
    let digits = ring.digits(x);
    let pi = ring.pi();
    let mut acc = ring.zero();
    for d in digits[v..].iter().rev() {
        acc = &(&acc * &pi) + &ring.teichmuller(d);
    }
    acc
}

fn standard_form(ring: &Arc<ChainRing>, m: usize, gens: &[Vec<RingElem>]) -> StandardForm {
    let s = ring.s();
    let mut a: Vec<Vec<RingElem>> = gens.to_vec();
    let mut perm: Vec<usize> = (0..m).collect();
    let mut pivots = Vec::new();
    let mut val: Vec<Vec<usize>> = a.iter().map(|row| row.iter().map(RingElem::valuation).collect()).collect();
    let mut k = 0;
    while k < a.len() && k < m {
        let mut best: Option<(usize, usize, usize)> = None;
        for j in k..m {
            for (i, vrow) in val.iter().enumerate().skip(k) {
                let v = vrow[j];
                if v < s && best.is_none_or(|(bv, _, _)| v < bv) {
                    best = Some((v, j, i));
                }
            }
        }
        let Some((v, j, i)) = best else { break };
        if j != k {
            perm.swap(j, k);
            for (row, vrow) in a.iter_mut().zip(val.iter_mut()) {
                row.swap(j, k);
                vrow.swap(j, k);
            }
        }
        a.swap(i, k);
        val.swap(i, k);
        let (_, unit) = ring.split_valuation(&a[k][k]);
        let uinv = unit.expect("nonzero pivot").inv().expect("unit part");
        for x in a[k].iter_mut() {
            *x = &*x * &uinv;
        }
        let pivot_row = a[k].clone();
        for i in k + 1..a.len() {
            if a[i][k].is_zero() {
                continue;
            }
            let c = ring.div_pi_pow(&a[i][k], v).expect("pivot has minimal valuation");
            axpy(&mut a[i], &c, &pivot_row);
            val[i] = a[i].iter().map(RingElem::valuation).collect();
        }
        val[k] = a[k].iter().map(RingElem::valuation).collect();
        pivots.push(v);
        k += 1;
    }
    a.truncate(k);
    // reduce above each pivot
    for k in 0..a.len() {
        let v = pivots[k];
        let (upper, lower) = a.split_at_mut(k);
        let pivot_row = &lower[0];
        for row in upper.iter_mut() {
            let c = high_digits(ring, &row[k], v);
            axpy(row, &c, pivot_row);
        }
    }
    let mut counts = vec![0; s];
    for &v in &pivots {
        counts[v] += 1;
    }
    StandardForm { rows: a, perm, pivots, code_type: CodeType(counts) }
}

/// A linear code of length `m` over a chain ring with cached standard form.
#[derive(Clone)]
pub struct LinearCode {
    ring: Arc<ChainRing>,
    m: usize,
    gens: Vec<Vec<RingElem>>,
    sf: StandardForm,
}

impl fmt::Debug for LinearCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LinearCode")
            .field("m", &self.m)
            .field("type", &self.sf.code_type)
            .field("rows", &self.sf.rows_original())
            .finish()
    }
}

/// Same ring, same length, mutual containment.
impl PartialEq for LinearCode {
    fn eq(&self, other: &Self) -> bool {
        *self.ring == *other.ring
            && self.m == other.m
            && self.sf.code_type == other.sf.code_type
            && self.sf.rows_original().iter().all(|r| other.contains(r))
            && other.sf.rows_original().iter().all(|r| self.contains(r))
    }
}

impl Eq for LinearCode {}

pub fn inner_product(x: &[RingElem], y: &[RingElem]) -> RingElem {
    let ring = x.first().or(y.first()).map(|e| Arc::clone(e.ring()));
    let Some(ring) = ring else {
        panic!("inner product of empty vectors has no ring");
    };
    x.iter().zip(y).fold(ring.zero(), |acc, (a, b)| &acc + &(a * b))
}

impl LinearCode {
    /// Row space of `rows` in `R^m`; redundant rows are allowed.
    pub fn from_generators(ring: &Arc<ChainRing>, m: usize, rows: Vec<Vec<RingElem>>) -> Result<LinearCode, CodeError> {
        if m == 0 {
            return Err(CodeError::EmptyLength);
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != m {
                return Err(CodeError::RowLength { row: i, expected: m, got: row.len() });
            }
            for x in row {
                if **x.ring() != **ring {
                    return Err(RingError::RingMismatch.into());
                }
            }
        }
        let sf = standard_form(ring, m, &rows);
        Ok(LinearCode { ring: Arc::clone(ring), m, gens: rows, sf })
    }

    /// Convenience constructor for integer entries.
    pub fn from_int_rows(ring: &Arc<ChainRing>, m: usize, rows: &[&[i64]]) -> Result<LinearCode, CodeError> {
        let rows = rows.iter().map(|r| r.iter().map(|&x| ring.from_int(x)).collect()).collect();
        LinearCode::from_generators(ring, m, rows)
    }

    pub fn zero(ring: &Arc<ChainRing>, m: usize) -> Result<LinearCode, CodeError> {
        LinearCode::from_generators(ring, m, vec![])
    }

    pub fn full(ring: &Arc<ChainRing>, m: usize) -> Result<LinearCode, CodeError> {
        let rows = (0..m).map(|i| unit_vector(ring, m, i)).collect();
        LinearCode::from_generators(ring, m, rows)
    }

    pub fn ring(&self) -> &Arc<ChainRing> {
        &self.ring
    }

    pub fn length(&self) -> usize {
        self.m
    }

    /// The generator rows as supplied.
    pub fn generators(&self) -> &[Vec<RingElem>] {
        &self.gens
    }

    pub fn standard_form(&self) -> &StandardForm {
        &self.sf
    }

    pub fn code_type(&self) -> &CodeType {
        &self.sf.code_type
    }

    pub fn rank(&self) -> usize {
        self.sf.code_type.rank()
    }

    pub fn is_free(&self) -> bool {
        self.sf.code_type.is_free()
    }

    /// `|C| = (p^r)^(sum (s - i) k_i)`.
    pub fn cardinality(&self) -> BigUint {
        self.ring.residue_order().pow(self.sf.code_type.log_size() as u32)
    }

    /// Membership by reduction against the standard form.
    pub fn contains(&self, x: &[RingElem]) -> bool {
        if x.len() != self.m || x.iter().any(|e| **e.ring() != *self.ring) {
            return false;
        }
        let mut y = permute(x, &self.sf.perm);
        for (k, row) in self.sf.rows.iter().enumerate() {
            let Some(c) = self.ring.div_pi_pow(&y[k], self.sf.pivots[k]) else {
                return false;
            };
            axpy(&mut y, &c, row);
        }
        y.iter().all(RingElem::is_zero)
    }

    /// Subcode test.
    pub fn is_subcode_of(&self, other: &LinearCode) -> bool {
        self.sf.rows_original().iter().all(|r| other.contains(r))
    }

    /// The dual under `x . y = sum x_i y_i`, verified before it is returned.
    pub fn dual(&self) -> Result<LinearCode, CodeError> {
        let ring = &self.ring;
        let s = ring.s();
        let m = self.m;
        let k = self.sf.rows.len();
        // M = [[U, V], [0, I]] with row k of the standard form = pi^(v_k) * M[k]
        let mut mat: Vec<Vec<RingElem>> = Vec::with_capacity(m);
        for (i, (row, &v)) in self.sf.rows.iter().zip(&self.sf.pivots).enumerate() {
            let mut w: Vec<RingElem> =
                row.iter().map(|x| ring.div_pi_pow(x, v).expect("row divisible by its pivot")).collect();
            w[i] = ring.one();
            mat.push(w);
        }
        for i in k..m {
            mat.push(unit_vector(ring, m, i));
        }
        let inv = unitriangular_inverse(ring, &mat);
        let mut rows = Vec::with_capacity(m);
        for j in 0..m {
            let v = self.sf.pivots.get(j).copied().unwrap_or(s);
            let scale = ring.pi_pow(s - v);
            if scale.is_zero() {
                continue;
            }
            let col: Vec<RingElem> = (0..m).map(|i| &inv[i][j] * &scale).collect();
            rows.push(unpermute(&col, &self.sf.perm));
        }
        let dual = LinearCode::from_generators(ring, m, rows)?;
        for a in &self.sf.rows_original() {
            for b in &dual.sf.rows_original() {
                if !inner_product(a, b).is_zero() {
                    return Err(CodeError::DualCheckFailed("rows are not orthogonal".into()));
                }
            }
        }
        if self.cardinality() * dual.cardinality() != ring.size().pow(m as u32) {
            return Err(CodeError::DualCheckFailed("|C| |C^perp| != |R|^m".into()));
        }
        Ok(dual)
    }

    pub fn is_self_orthogonal(&self) -> bool {
        let rows = self.sf.rows_original();
        rows.iter().enumerate().all(|(i, a)| rows[i..].iter().all(|b| inner_product(a, b).is_zero()))
    }

    pub fn is_self_dual(&self) -> bool {
        self.is_self_orthogonal() && self.cardinality().pow(2) == self.ring.size().pow(self.m as u32)
    }

    /// Closed under `(c_0, ..., c_(m-1)) -> (c_(m-1), c_0, ..., c_(m-2))`.
    pub fn is_cyclic(&self) -> bool {
        self.sf.rows_original().iter().all(|r| self.contains(&cyclic_shift(r)))
    }
}

pub fn cyclic_shift(x: &[RingElem]) -> Vec<RingElem> {
    let mut out = x.to_vec();
    out.rotate_right(1);
    out
}

pub(crate) fn unit_vector(ring: &Arc<ChainRing>, m: usize, i: usize) -> Vec<RingElem> {
    (0..m).map(|j| if j == i { ring.one() } else { ring.zero() }).collect()
}

/// Inverse of an upper unitriangular matrix by back substitution.
fn unitriangular_inverse(ring: &Arc<ChainRing>, mat: &[Vec<RingElem>]) -> Vec<Vec<RingElem>> {
    let m = mat.len();
    let mut inv = vec![vec![ring.zero(); m]; m];
    for j in 0..m {
        inv[j][j] = ring.one();
        for i in (0..j).rev() {
            let mut acc = ring.zero();
            for l in i + 1..=j {
                acc = &acc + &(&mat[i][l] * &inv[l][j]);
            }
            inv[i][j] = -acc;
        }
    }
    inv
}

/// The cyclic code generated by `genpoly` in `R[X]/<X^m - 1>`.
///
/// `genpoly` must be monic and divide `X^m - 1`.
pub fn cyclic_code(genpoly: &Poly, m: usize) -> Result<LinearCode, CodeError> {
    if m == 0 {
        return Err(CodeError::EmptyLength);
    }
    let ring = genpoly.ring();
    let xm = Poly::x_pow_minus_one(ring, m);
    if !genpoly.is_monic() {
        return Err(PolyError::NotMonic.into());
    }
    if !xm.rem(genpoly)?.is_zero() {
        return Err(CodeError::NotADivisor);
    }
    let g = genpoly.rem(&xm)?;
    let base: Vec<RingElem> = (0..m).map(|i| g.coeff(i)).collect();
    let mut rows = Vec::with_capacity(m);
    let mut cur = base;
    for _ in 0..m {
        let next = cyclic_shift(&cur);
        rows.push(cur);
        cur = next;
    }
    LinearCode::from_generators(ring, m, rows)
}

/// Cyclic code of a monic divisor of `X^m - 1` given over the residue field.
pub fn cyclic_code_over_field(gbar: &Poly, m: usize) -> Result<LinearCode, CodeError> {
    poly::check_length(m, gbar.ring().p())?;
    cyclic_code(gbar, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::specs::*;

    fn z(p: u64, n: u32) -> Arc<ChainRing> {
        ChainRing::new(integers_mod(p, n)).unwrap()
    }

    fn ints(ring: &Arc<ChainRing>, v: &[i64]) -> Vec<RingElem> {
        v.iter().map(|&x| ring.from_int(x)).collect()
    }

    #[test]
    fn construction_examples() {
        let z4 = z(2, 2);
        let c = LinearCode::from_int_rows(&z4, 2, &[&[2, 2]]).unwrap();
        assert_eq!(c.code_type().0, vec![0, 1]);
        let c = LinearCode::from_int_rows(&z4, 2, &[&[1, 1], &[0, 2]]).unwrap();
        assert_eq!(c.code_type().0, vec![1, 1]);
        assert_eq!(c.cardinality(), BigUint::from(8u32));
        let c = LinearCode::zero(&z4, 3).unwrap();
        assert_eq!(c.cardinality(), BigUint::from(1u32));
        assert_eq!(LinearCode::zero(&z4, 0).unwrap_err(), CodeError::EmptyLength);
    }

    #[test]
    fn standard_form_examples() {
        let z4 = z(2, 2);
        let c = LinearCode::from_int_rows(&z4, 2, &[&[2, 2]]).unwrap();
        assert_eq!(c.standard_form().rows, vec![ints(&z4, &[2, 2])]);
        assert_eq!(c.standard_form().perm, vec![0, 1]);

        let c = LinearCode::from_int_rows(&z4, 2, &[&[1, 1], &[0, 2]]).unwrap();
        assert_eq!(c.standard_form().rows, vec![ints(&z4, &[1, 1]), ints(&z4, &[0, 2])]);
        assert_eq!(c.standard_form().perm, vec![0, 1]);

        let c = LinearCode::from_int_rows(&z4, 2, &[&[2, 1]]).unwrap();
        assert_eq!(c.standard_form().rows, vec![ints(&z4, &[1, 2])]);
        assert_eq!(c.standard_form().perm, vec![1, 0]);
        assert_eq!(c.code_type().0, vec![1, 0]);
    }

    #[test]
    fn cardinality_examples() {
        let gr = ChainRing::new(galois(3, 2, &[1, 0, 1])).unwrap();
        let c = LinearCode::from_generators(&gr, 2, vec![vec![gr.one(), gr.pi()]]).unwrap();
        assert_eq!(c.code_type().0, vec![1, 0]);
        assert_eq!(c.cardinality(), BigUint::from(81u32));
    }

    #[test]
    fn dual_examples() {
        let z4 = z(2, 2);
        let c = LinearCode::from_int_rows(&z4, 2, &[&[1, 1], &[0, 2]]).unwrap();
        let d = c.dual().unwrap();
        assert_eq!(d, LinearCode::from_int_rows(&z4, 2, &[&[2, 2]]).unwrap());
        let full = LinearCode::full(&z4, 3).unwrap();
        assert_eq!(full.dual().unwrap(), LinearCode::zero(&z4, 3).unwrap());
        assert_eq!(LinearCode::zero(&z4, 3).unwrap().dual().unwrap(), full);
    }

    #[test]
    fn self_orthogonality() {
        let z4 = z(2, 2);
        assert!(LinearCode::from_int_rows(&z4, 2, &[&[2, 2]]).unwrap().is_self_orthogonal());
        assert!(!LinearCode::from_int_rows(&z4, 2, &[&[1, 1]]).unwrap().is_self_orthogonal());
        let zero = LinearCode::zero(&z4, 2).unwrap();
        assert!(zero.is_self_orthogonal());
        assert!(!zero.is_self_dual());
        assert!(LinearCode::from_int_rows(&z4, 1, &[&[2]]).unwrap().is_self_dual());
    }

    #[test]
    fn membership() {
        let z4 = z(2, 2);
        let c = LinearCode::from_int_rows(&z4, 2, &[&[2, 2]]).unwrap();
        assert!(c.contains(&ints(&z4, &[2, 2])));
        assert!(!c.contains(&ints(&z4, &[1, 1])));
        assert!(c.contains(&ints(&z4, &[0, 0])));
        let full = LinearCode::full(&z4, 2).unwrap();
        assert!(full.contains(&ints(&z4, &[3, 1])));
    }

    #[test]
    fn cyclic_examples() {
        let z4 = z(2, 2);
        let c = cyclic_code(&Poly::from_ints(&z4, &[3, 1]), 3).unwrap();
        assert_eq!(c.cardinality(), BigUint::from(16u32));
        assert!(c.is_cyclic());
        let zero = cyclic_code(&Poly::x_pow_minus_one(&z4, 3), 3).unwrap();
        assert_eq!(zero.rank(), 0);
        let full = cyclic_code(&Poly::one(&z4), 3).unwrap();
        assert_eq!(full, LinearCode::full(&z4, 3).unwrap());
        assert_eq!(cyclic_code(&Poly::from_ints(&z4, &[1, 1]), 3).unwrap_err(), CodeError::NotADivisor);
        assert!(!LinearCode::from_int_rows(&z4, 2, &[&[1, 0]]).unwrap().is_cyclic());
    }

    #[test]
    fn standard_form_is_idempotent() {
        let r = ChainRing::new(ramified(2, 2, &[-2, 0, 1], 2)).unwrap();
        let u = r.pi();
        let rows = vec![vec![&u * &u, r.one(), &u + &r.one()], vec![u.clone(), u.clone(), r.zero()]];
        let c = LinearCode::from_generators(&r, 3, rows).unwrap();
        let again = LinearCode::from_generators(&r, 3, c.standard_form().rows.clone()).unwrap();
        assert_eq!(again.standard_form().rows, c.standard_form().rows);
        assert_eq!(again.standard_form().perm, vec![0, 1, 2]);
    }
}
