use std::sync::Arc;

use chainlift::lattice::{
    construction_a, construction_a_with_form, default_precision, scaled_gram_self_orthogonal, with_auto_precision,
    LatticeModel, TraceForm,
};
use chainlift::ring::specs::{galois, integers_mod, ramified};
use chainlift::{ChainRing, ChainRingSpec, LinearCode, OKModel, RingElem};
use chainlift_testkit::{random_rows, Table};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn log_p(mut x: u128, p: u64) -> usize {
    let mut k = 0;
    while x > 1 {
        assert_eq!(x % p as u128, 0);
        x /= p as u128;
        k += 1;
    }
    k
}

fn lattice(code: &LinearCode, alpha: &RingElem, spec: &ChainRingSpec) -> LatticeModel {
    let start = default_precision(spec, code.ring().s());
    with_auto_precision(spec, start, |ok| construction_a(code, alpha, ok)).unwrap().0
}

/// Every code generated by one row, plus random multi-row codes.
fn desk_codes(ring: &Arc<ChainRing>, m: usize, extra: usize) -> Vec<LinearCode> {
    let table = Table::new(ring);
    let mut out: Vec<LinearCode> = Vec::new();
    for v in table.all_vectors(m) {
        let row: Vec<RingElem> = v.iter().map(|&i| table.elems[i as usize].clone()).collect();
        let c = LinearCode::from_generators(ring, m, vec![row]).unwrap();
        if !out.contains(&c) {
            out.push(c);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(m as u64);
    for _ in 0..extra {
        let c = LinearCode::from_generators(ring, m, random_rows(ring, m, &mut rng)).unwrap();
        if !out.contains(&c) {
            out.push(c);
        }
    }
    out
}

struct Desk {
    spec: ChainRingSpec,
    m: usize,
    alphas: Vec<Vec<i64>>,
}

fn desks() -> Vec<Desk> {
    let mut v = Vec::new();
    for m in 1..=3 {
        v.push(Desk { spec: integers_mod(2, 2), m, alphas: vec![vec![1], vec![2], vec![3]] });
    }
    for m in 1..=2 {
        v.push(Desk { spec: ramified(2, 1, &[-2, 0, 1], 2), m, alphas: vec![vec![1, 0], vec![0, 1]] });
        v.push(Desk { spec: ramified(2, 2, &[-2, 0, 1], 1), m, alphas: vec![vec![1, 0]] });
    }
    v.push(Desk { spec: galois(3, 2, &[2, 2, 1]), m: 1, alphas: vec![vec![1, 0], vec![3, 0], vec![0, 1]] });
    v
}

#[test]
fn discriminant_identity_on_desk_lattices() {
    let mut checked = 0;
    for desk in desks() {
        let ring = ChainRing::new(desk.spec.clone()).unwrap();
        let table = Table::new(&ring);
        let r = ring.r();
        let total = ring.size().to_u128().unwrap().pow(desk.m as u32);
        for code in desk_codes(&ring, desk.m, 8) {
            let size = table.code_set(&code).len() as u128;
            let index = log_p(total / size, ring.p());
            for a in &desk.alphas {
                let ok = OKModel::new(&desk.spec, default_precision(&desk.spec, ring.s())).unwrap();
                let alpha = ok.from_integers(&a.iter().map(|&x| x.into()).collect::<Vec<_>>()).unwrap();
                let lat = lattice(&code, &alpha, &desk.spec);
                let ok = lat.ok();
                let dk = ok.disc_k().unwrap().valuation() as i64;
                let na = ok.norm(&ok.embed(&alpha).unwrap()).valuation() as i64;
                let m = desk.m as i64;
                assert!(lat.is_symmetric());
                assert_eq!(lat.index_exponent(), index, "{code:?}");
                assert_eq!(lat.disc_valuation(), m * dk + m * na + 2 * index as i64, "{code:?} alpha={a:?}");
                assert_eq!(lat.expected_disc_valuation().unwrap(), lat.disc_valuation());
                if code.is_free() {
                    let k = code.rank();
                    assert_eq!(index, r * ring.s() * (desk.m - k));
                }
                assert!(lat.is_integral());
                assert_eq!(lat.is_cyclic_lattice(), code.is_cyclic(), "{code:?}");
                checked += 1;
            }
        }
    }
    assert!(checked > 100);
}

#[test]
fn self_orthogonal_codes_give_integral_scaled_forms() {
    for desk in desks().into_iter().filter(|d| d.spec.r == 1) {
        let ring = ChainRing::new(desk.spec.clone()).unwrap();
        let start = default_precision(&desk.spec, ring.s());
        for code in desk_codes(&ring, desk.m, 8) {
            if code.is_self_orthogonal() {
                let (lat, _) =
                    with_auto_precision(&desk.spec, start, |ok| scaled_gram_self_orthogonal(&code, ok)).unwrap();
                assert!(lat.is_integral(), "{code:?}");
            } else {
                assert!(with_auto_precision(&desk.spec, start, |ok| scaled_gram_self_orthogonal(&code, ok)).is_err());
            }
        }
    }
}

#[test]
fn non_self_orthogonal_code_is_not_integral_when_scaled() {
    let spec = integers_mod(2, 2);
    let ring = ChainRing::new(spec.clone()).unwrap();
    let code = LinearCode::from_int_rows(&ring, 2, &[&[1, 0]]).unwrap();
    assert!(!code.is_self_orthogonal());
    let ok = OKModel::new(&spec, 16).unwrap();
    let form = TraceForm { alpha: ok.ring().one(), scale_exp: 1, twist: None };
    let lat = construction_a_with_form(&code, form, &ok).unwrap();
    assert!(!lat.is_integral());
    assert!(!lat.is_cyclic_lattice());
}

fn models() -> Vec<OKModel> {
    [
        integers_mod(3, 1),
        galois(2, 1, &[1, 1, 1]),
        galois(2, 1, &[1, 1, 0, 1]),
        ramified(2, 1, &[-2, 0, 1], 2),
        ramified(3, 1, &[3, 3, 1], 2),
        ramified(2, 1, &[-2, 0, 0, 1], 3),
        chainlift_testkit::ramified_gr(2, 1, &[1, 1, 1], &[-2, 0, 1], 2),
    ]
    .iter()
    .map(|s| OKModel::new(s, 12).unwrap())
    .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn trace_is_linear_and_norm_multiplicative(idx in 0usize..7, seed in any::<u64>(), a in any::<i32>(), b in any::<i32>()) {
        let ok = &models()[idx];
        let ring = ok.ring();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, y) = (ring.random_element(&mut rng), ring.random_element(&mut rng));
        let (ae, be) = (ring.from_int(a as i64), ring.from_int(b as i64));
        let lhs = ok.trace(&(&(&ae * &x) + &(&be * &y)));
        let modulus = BigInt::from(ok.modulus().clone());
        let rhs = (BigInt::from(a) * BigInt::from(ok.trace(&x).value().clone())
            + BigInt::from(b) * BigInt::from(ok.trace(&y).value().clone()))
        .mod_floor(&modulus);
        prop_assert_eq!(BigInt::from(lhs.value().clone()), rhs);
        let nxy = ok.norm(&(&x * &y));
        prop_assert_eq!(nxy.value(), &((ok.norm(&x).value() * ok.norm(&y).value()) % ok.modulus()));
    }
}
