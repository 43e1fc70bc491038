use chainlift::lattice::{self, Involution, OKModel};
use chainlift::ring::specs::ramified;
use chainlift::{ChainRing, LinearCode};

fn tetracode(ring: &std::sync::Arc<ChainRing>) -> LinearCode {
    LinearCode::from_int_rows(ring, 4, &[&[1, 0, 1, 1], &[0, 1, 1, 2]]).unwrap()
}

// zeta = 1 + pi, conjugation zeta -> zeta^2 sends pi to -pi - 3
fn conjugation(ok: &OKModel) -> Involution {
    let ring = ok.ring();
    let x_image = &(-ring.pi()) - &ring.from_int(3);
    Involution::new(ok, &x_image, None).unwrap()
}

#[test]
fn tetracode_over_q3_zeta3_is_unimodular_under_scaled_conjugate_form() {
    let spec = ramified(3, 1, &[3, 3, 1], 1);
    let field = ChainRing::new(spec.clone()).unwrap();
    assert!(field.is_field());
    let c = tetracode(&field);
    assert!(c.is_self_dual());
    let ok = OKModel::new(&spec, lattice::default_precision(&spec, 1)).unwrap();
    assert_eq!(ok.disc_k().unwrap().valuation(), 1);
    let lat = lattice::scaled_gram_self_orthogonal_twisted(&c, &ok, Some(conjugation(&ok))).unwrap();
    assert_eq!(lat.dimension(), 8);
    assert!(lat.is_symmetric());
    assert!(lat.is_integral());
    assert_eq!(lat.disc_valuation(), 0);
    assert!(lat.is_unimodular());
    // the plain scaled form gives the same valuations
    let plain = lattice::scaled_gram_self_orthogonal(&c, &ok).unwrap();
    assert!(plain.is_unimodular());
    let gram = lat.gram().unwrap();
    for (i, row) in gram.iter().enumerate() {
        assert!((&row[i] % 2u32) == 0u32.into(), "odd diagonal entry {}", row[i]);
    }
}

#[test]
fn unscaled_form_is_not_unimodular() {
    let spec = ramified(3, 1, &[3, 3, 1], 1);
    let field = ChainRing::new(spec.clone()).unwrap();
    let ok = OKModel::new(&spec, 16).unwrap();
    let lat = lattice::construction_a(&tetracode(&field), &ok.ring().one(), &ok).unwrap();
    assert_eq!(lat.disc_valuation(), 8);
    assert!(!lat.is_unimodular());
}

#[test]
fn self_dual_code_at_nilpotency_two_is_not_unimodular() {
    let spec = ramified(3, 1, &[3, 3, 1], 2);
    let ring = ChainRing::new(spec.clone()).unwrap();
    let m = 2;
    let rows = (0..m).map(|i| (0..m).map(|j| if i == j { ring.pi() } else { ring.zero() }).collect()).collect();
    let c = LinearCode::from_generators(&ring, m, rows).unwrap();
    assert!(c.is_self_dual());
    let ok = OKModel::new(&spec, lattice::default_precision(&spec, 2)).unwrap();
    let lat = lattice::scaled_gram_self_orthogonal_twisted(&c, &ok, Some(conjugation(&ok))).unwrap();
    assert!(lat.is_integral());
    assert_eq!(lat.disc_valuation(), m as i64);
    assert_eq!(lat.disc_valuation(), lat.expected_disc_valuation().unwrap());
    assert!(!lat.is_unimodular());
}
