//! Word-sized helpers for the prime field F_p and its extension F_p[Y]/<h>.
//!
//! These back the residue-field computations the chain ring needs before any
//! `ChainRing` exists (irreducibility of `h`, residue inverses).

use num_bigint::BigUint;

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for sp in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % sp == 0 {
            return n == sp;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

/// Remainder of `a` modulo `b` in F_p[Y]; `b` must be nonzero.
fn poly_rem(mut a: Vec<u64>, b: &[u64], p: u64) -> Vec<u64> {
    trim(&mut a);
    let db = b.len() - 1;
    let lead_inv = inv_mod(b[db], p);
    while a.len() > db {
        let da = a.len() - 1;
        let c = mul_mod(a[da], lead_inv, p);
        for i in 0..=db {
            let sub = mul_mod(c, b[i], p);
            a[da - db + i] = (a[da - db + i] + p - sub) % p;
        }
        trim(&mut a);
    }
    a
}

/// Monic gcd in F_p[Y]. Inputs are coefficient vectors, lowest degree first.
pub(crate) fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = poly_rem(a, &b, p);
        a = b;
        b = r;
    }
    if let Some(&lead) = a.last() {
        let li = inv_mod(lead, p);
        for c in a.iter_mut() {
            *c = mul_mod(*c, li, p);
        }
    }
    a
}

/// Arithmetic in F_p[Y]/<hbar> with `hbar` monic of degree r.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct ExtField {
    pub p: u64,
    pub hbar: Vec<u64>,
}

impl ExtField {
    pub fn degree(&self) -> usize {
        self.hbar.len() - 1
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let r = self.degree();
        let p = self.p;
        let mut prod = vec![0u64; 2 * r - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + mul_mod(x, y, p)) % p;
            }
        }
        for d in (r..2 * r - 1).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for i in 0..r {
                let sub = mul_mod(c, self.hbar[i], p);
                prod[d - r + i] = (prod[d - r + i] + p - sub) % p;
            }
        }
        prod.truncate(r);
        prod
    }

    pub fn pow(&self, a: &[u64], exp: &BigUint) -> Vec<u64> {
        let r = self.degree();
        let mut acc = vec![0u64; r];
        acc[0] = 1 % self.p;
        for i in (0..exp.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if exp.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    /// Field size p^r.
    pub fn order(&self) -> BigUint {
        BigUint::from(self.p).pow(self.degree() as u32)
    }

    /// Inverse of a nonzero element, valid when `hbar` is irreducible.
    pub fn inv(&self, a: &[u64]) -> Vec<u64> {
        let exp = self.order() - 2u32;
        self.pow(a, &exp)
    }

    /// True iff `hbar` is irreducible over F_p.
    pub fn is_irreducible(&self) -> bool {
        let r = self.degree();
        if r == 0 {
            return false;
        }
        if r == 1 {
            return true;
        }
        let p = self.p;
        // y = Y mod hbar
        let mut y = vec![0u64; r];
        y[1] = 1;
        let mut frob = y.clone();
        let pe = BigUint::from(p);
        for _ in 1..=r / 2 {
            frob = self.pow(&frob, &pe);
            // gcd(Y^{p^k} - Y, hbar) must be 1
            let mut diff = frob.clone();
            diff[1] = (diff[1] + p - 1) % p;
            let g = poly_gcd(&diff, &self.hbar, p);
            if g.len() != 1 {
                return false;
            }
        }
        // hbar must also divide Y^{p^r} - Y
        for _ in (r / 2 + 1)..=r {
            frob = self.pow(&frob, &pe);
        }
        frob == y
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        let small: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(is_prime(18446744073709551557));
        assert!(!is_prime(3215031751));
    }

    #[test]
    fn irreducibility() {
        let f = |h: Vec<u64>, p| ExtField { p, hbar: h }.is_irreducible();
        assert!(f(vec![1, 1, 1], 2)); // Y^2+Y+1
        assert!(!f(vec![1, 0, 1], 2)); // (Y+1)^2
        assert!(f(vec![1, 0, 1], 3)); // Y^2+1 over F_3
        assert!(!f(vec![2, 0, 1], 3)); // Y^2-1
        assert!(f(vec![1, 1, 0, 1], 2)); // Y^3+Y+1
        assert!(f(vec![1, 1, 1, 1, 1], 2)); // 5th cyclotomic, ord_5(2) = 4
        assert!(!f(vec![1, 0, 0, 0, 1], 2)); // (Y+1)^4
        assert!(f(vec![1, 1, 0, 0, 1], 2)); // Y^4+Y+1
    }

    #[test]
    fn f9_inverse() {
        let k = ExtField { p: 3, hbar: vec![1, 0, 1] };
        for a in 0..3 {
            for b in 0..3 {
                if a == 0 && b == 0 {
                    continue;
                }
                let x = vec![a, b];
                assert_eq!(k.mul(&x, &k.inv(&x)), vec![1, 0]);
            }
        }
    }
}
