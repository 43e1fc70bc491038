//! Brute-force oracles over small chain rings.
//!
//! Everything here enumerates. Keep `|R|^m` small.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use chainlift::code::LinearCode;
use chainlift::ring::specs::{galois, integers_mod, ramified};
use chainlift::{ChainRing, ChainRingSpec, RingElem};
use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use rand::Rng;

/// Every chain ring used by the exhaustive suites, all with `|R| <= 81`.
pub fn small_specs() -> Vec<(&'static str, ChainRingSpec)> {
    vec![
        ("F_2", integers_mod(2, 1)),
        ("F_3", integers_mod(3, 1)),
        ("Z/4", integers_mod(2, 2)),
        ("Z/8", integers_mod(2, 3)),
        ("Z/9", integers_mod(3, 2)),
        ("Z/27", integers_mod(3, 3)),
        ("Z/16", integers_mod(2, 4)),
        ("Z/81", integers_mod(3, 4)),
        ("F_4", galois(2, 1, &[1, 1, 1])),
        ("F_8", galois(2, 1, &[1, 1, 0, 1])),
        ("F_9", galois(3, 1, &[2, 2, 1])),
        ("GR(4,2)", galois(2, 2, &[1, 1, 1])),
        ("GR(8,2)", galois(2, 3, &[1, 1, 1])),
        ("GR(9,2)", galois(3, 2, &[2, 2, 1])),
        ("F_2[u]/u^2", ramified(2, 1, &[-2, 0, 1], 2)),
        ("F_3[u]/u^2", ramified(3, 1, &[3, 3, 1], 2)),
        ("Z/4[X]/(X^2-2,2X)", ramified(2, 2, &[-2, 0, 1], 1)),
        ("Z/4[X]/(X^2-2)", ramified(2, 2, &[-2, 0, 1], 2)),
        ("Z/8[X]/(X^2-2,4X)", ramified(2, 3, &[-2, 0, 1], 1)),
        ("Z/9[X]/(X^2+3X+3)", ramified(3, 2, &[3, 3, 1], 2)),
        ("Z/4[X]/(X^3-2)", ramified(2, 2, &[-2, 0, 0, 1], 3)),
        ("GR(4,2)[X]/(X^2-2,2X)", ramified_gr(2, 2, &[1, 1, 1], &[-2, 0, 1], 1)),
    ]
}

/// `GR(p^n, r)[X]/<g, p^(n-1) X^t>` with `g` having integer coefficients.
pub fn ramified_gr(p: u64, n: u32, h: &[i64], g: &[i64], t: usize) -> ChainRingSpec {
    let r = h.len() - 1;
    ChainRingSpec {
        p,
        n,
        r,
        h: h.iter().map(|&c| BigInt::from(c)).collect(),
        g: g.iter()
            .map(|&c| {
                let mut v = vec![BigInt::from(0); r];
                v[0] = BigInt::from(c);
                v
            })
            .collect(),
        t,
    }
}

/// Addition and multiplication tables over an enumerated ring.
pub struct Table {
    pub ring: Arc<ChainRing>,
    pub elems: Vec<RingElem>,
    index: HashMap<Vec<BigUint>, usize>,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
}

impl Table {
    pub fn new(ring: &Arc<ChainRing>) -> Table {
        let elems: Vec<RingElem> = ring.elements().collect();
        let q = elems.len();
        assert!(q <= 256, "table oracle only for tiny rings");
        let index: HashMap<Vec<BigUint>, usize> =
            elems.iter().enumerate().map(|(i, x)| (x.coeffs().to_vec(), i)).collect();
        let mut add = vec![0u16; q * q];
        let mut mul = vec![0u16; q * q];
        for (i, x) in elems.iter().enumerate() {
            for (j, y) in elems.iter().enumerate() {
                add[i * q + j] = index[(x + y).coeffs()] as u16;
                mul[i * q + j] = index[(x * y).coeffs()] as u16;
            }
        }
        let neg = elems.iter().map(|x| index[(-x).coeffs()] as u16).collect();
        Table { ring: ring.clone(), elems, index, add, mul, neg }
    }

    pub fn size(&self) -> usize {
        self.elems.len()
    }

    pub fn idx(&self, x: &RingElem) -> usize {
        self.index[x.coeffs()]
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.size() + b] as usize
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.size() + b] as usize
    }

    pub fn neg(&self, a: usize) -> usize {
        self.neg[a] as usize
    }

    pub fn zero(&self) -> usize {
        self.idx(&self.ring.zero())
    }

    pub fn vec_idx(&self, v: &[RingElem]) -> Vec<u8> {
        v.iter().map(|x| self.idx(x) as u8).collect()
    }

    pub fn dot(&self, x: &[u8], y: &[u8]) -> usize {
        x.iter().zip(y).fold(self.zero(), |acc, (&a, &b)| self.add(acc, self.mul(a as usize, b as usize)))
    }

    /// The ideal generated by `x`, by enumeration.
    pub fn ideal(&self, x: &RingElem) -> BTreeSet<usize> {
        let xi = self.idx(x);
        (0..self.size()).map(|a| self.mul(a, xi)).collect()
    }

    /// Every vector of `R^m`, enumerated as index words.
    pub fn all_vectors(&self, m: usize) -> impl Iterator<Item = Vec<u8>> + '_ {
        let q = self.size();
        let total = q.checked_pow(m as u32).expect("R^m too large");
        (0..total).map(move |mut k| {
            let mut v = vec![0u8; m];
            for slot in v.iter_mut() {
                *slot = (k % q) as u8;
                k /= q;
            }
            v
        })
    }

    /// R-span of `rows`, by closure.
    pub fn span(&self, m: usize, rows: &[Vec<RingElem>]) -> BTreeSet<Vec<u8>> {
        let mut set: BTreeSet<Vec<u8>> = BTreeSet::new();
        set.insert(vec![self.zero() as u8; m]);
        for row in rows {
            let g = self.vec_idx(row);
            let multiples: Vec<Vec<u8>> =
                (0..self.size()).map(|c| g.iter().map(|&x| self.mul(c, x as usize) as u8).collect()).collect();
            let mut next = BTreeSet::new();
            for x in &set {
                for y in &multiples {
                    next.insert(x.iter().zip(y).map(|(&a, &b)| self.add(a as usize, b as usize) as u8).collect());
                }
            }
            set = next;
        }
        set
    }

    /// `{x : x . g = 0 for every generator g}`, by enumerating `R^m`.
    pub fn brute_dual(&self, m: usize, rows: &[Vec<RingElem>]) -> BTreeSet<Vec<u8>> {
        let gens: Vec<Vec<u8>> = rows.iter().map(|r| self.vec_idx(r)).collect();
        let z = self.zero();
        self.all_vectors(m).filter(|x| gens.iter().all(|g| self.dot(x, g) == z)).collect()
    }

    pub fn code_set(&self, code: &LinearCode) -> BTreeSet<Vec<u8>> {
        self.span(code.length(), code.generators())
    }
}

/// Number of `q`-cyclotomic cosets modulo `m`.
pub fn cyclotomic_coset_count(m: usize, q: u64) -> usize {
    let q = (q % m as u64) as usize;
    let mut seen = vec![false; m];
    let mut count = 0;
    for start in 0..m {
        if seen[start] {
            continue;
        }
        count += 1;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = x * q % m;
        }
    }
    count
}

/// Random element `u pi^a` with `u` a unit.
pub fn unit_times_pi_pow<R: Rng + ?Sized>(ring: &Arc<ChainRing>, a: usize, rng: &mut R) -> RingElem {
    let u = random_unit(ring, rng);
    &u * &ring.pi_pow(a)
}

pub fn random_unit<R: Rng + ?Sized>(ring: &Arc<ChainRing>, rng: &mut R) -> RingElem {
    loop {
        let u = ring.random_element(rng);
        if u.is_unit() {
            return u;
        }
    }
}

/// Random generator rows, biased toward non-free codes.
pub fn random_rows<R: Rng + ?Sized>(ring: &Arc<ChainRing>, m: usize, rng: &mut R) -> Vec<Vec<RingElem>> {
    let k = rng.gen_range(0..=m + 1);
    (0..k)
        .map(|_| {
            let shift = rng.gen_range(0..ring.s());
            (0..m).map(|_| &ring.random_element(rng) * &ring.pi_pow(shift)).collect()
        })
        .collect()
}

/// Random free code of rank `k`: `[I | A]`, then mixed by an invertible
/// row transform and a column permutation.
pub fn random_free_rows<R: Rng + ?Sized>(ring: &Arc<ChainRing>, m: usize, k: usize, rng: &mut R) -> Vec<Vec<RingElem>> {
    let mut rows: Vec<Vec<RingElem>> = (0..k)
        .map(|i| {
            (0..m)
                .map(|j| {
                    if j < k {
                        if i == j {
                            ring.one()
                        } else {
                            ring.zero()
                        }
                    } else {
                        ring.random_element(rng)
                    }
                })
                .collect()
        })
        .collect();
    for _ in 0..k * 2 {
        if k < 2 {
            break;
        }
        let a = rng.gen_range(0..k);
        let b = rng.gen_range(0..k);
        if a == b {
            continue;
        }
        let c = ring.random_element(rng);
        let add: Vec<RingElem> = rows[b].iter().map(|x| &c * x).collect();
        for (x, y) in rows[a].iter_mut().zip(add) {
            *x = &*x + &y;
        }
    }
    for row in rows.iter_mut() {
        let u = random_unit(ring, rng);
        for x in row.iter_mut() {
            *x = &*x * &u;
        }
    }
    let mut perm: Vec<usize> = (0..m).collect();
    for i in (1..m).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    rows.into_iter().map(|r| perm.iter().map(|&j| r[j].clone()).collect()).collect()
}

/// `(p^r)^{sum (s-i) k_i}`, as a machine integer.
pub fn type_cardinality(ring: &ChainRing, code_type: &[usize]) -> u128 {
    let q = ring.residue_order().to_u128().expect("small residue field");
    let s = ring.s();
    let exp: usize = code_type.iter().enumerate().map(|(i, k)| (s - i) * k).sum();
    q.pow(exp as u32)
}
