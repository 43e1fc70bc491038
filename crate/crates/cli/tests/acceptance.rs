//! One pass/fail line per acceptance criterion.
//!
//! Set `CHAINLIFT_UPDATE_GOLDEN=1` to rewrite the golden files.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use chainlift::code::LinearCode;
use chainlift::lattice::{
    construction_a, default_precision, scaled_gram_self_orthogonal, with_auto_precision, LatticeModel,
};
use chainlift::lifting::PrecisionTower;
use chainlift::poly::{factor_xm_minus_1, lift_full_factorization, DEFAULT_SEED};
use chainlift::ring::specs::{galois, integers_mod, ramified};
use chainlift::{ChainRing, ChainRingSpec, OKModel, Poly, RingElem};
use chainlift_testkit::{ramified_gr, random_free_rows, random_rows, small_specs, type_cardinality, Table};
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check, Duration);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

// ---- 1: ring axioms and ideal chain ----

fn criterion_1() -> Check {
    let mut rings = 0;
    let mut triples = 0u64;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for (name, spec) in small_specs() {
        let ring = ChainRing::new(spec).map_err(|e| format!("{name}: {e}"))?;
        let size = ring.size().to_u64().unwrap();
        ensure!(size <= 81, "{name} too large");
        let elems: Vec<RingElem> = ring.elements().collect();
        ensure!(elems.len() as u64 == size, "{name}: enumeration size");
        let check = |x: &RingElem, y: &RingElem, z: &RingElem| {
            &(x * y) * z == x * &(y * z)
                && &(x + y) + z == x + &(y + z)
                && x * &(y + z) == &(x * y) + &(x * z)
                && x * y == y * x
                && x + y == y + x
        };
        if size <= 16 {
            for x in &elems {
                for y in &elems {
                    for z in &elems {
                        ensure!(check(x, y, z), "{name}: axiom fails at {x:?} {y:?} {z:?}");
                        triples += 1;
                    }
                }
            }
        } else {
            for _ in 0..10_000 {
                let (x, y, z) = (
                    &elems[rng.gen_range(0..elems.len())],
                    &elems[rng.gen_range(0..elems.len())],
                    &elems[rng.gen_range(0..elems.len())],
                );
                ensure!(check(x, y, z), "{name}: axiom fails at {x:?} {y:?} {z:?}");
                triples += 1;
            }
        }
        let table = Table::new(&ring);
        let q = ring.residue_order().to_u64().unwrap();
        for i in 0..=ring.s() {
            let ideal = table.ideal(&ring.pi_pow(i));
            ensure!(
                ideal.len() as u64 == q.pow((ring.s() - i) as u32),
                "{name}: |<pi^{i}>| = {} expected {}",
                ideal.len(),
                q.pow((ring.s() - i) as u32)
            );
        }
        rings += 1;
    }
    Ok(format!("{rings} rings, {triples} triples"))
}

// ---- 2: Hensel suite ----

/// Integer polynomial product modulo `modulus`, coefficients lowest first.
fn int_poly_mul(a: &[i64], b: &[i64], modulus: i64) -> Vec<i64> {
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y).rem_euclid(modulus);
        }
    }
    out
}

fn as_ints(p: &Poly) -> Vec<i64> {
    p.coeffs().iter().map(|c| c.coeffs()[0].to_i64().unwrap()).collect()
}

fn criterion_2() -> Check {
    let mut pairs = 0;
    for (name, spec) in small_specs() {
        let ring = ChainRing::new(spec).unwrap();
        if ring.s() > 4 {
            continue;
        }
        let p = ring.p() as usize;
        let field = ring.residue_field();
        for m in (1..=15usize).filter(|m| m.gcd(&p) == 1) {
            let lifted =
                lift_full_factorization(m, &ring, ring.s(), DEFAULT_SEED).map_err(|e| format!("{name} m={m}: {e}"))?;
            let product = lifted.iter().fold(Poly::one(&ring), |acc, f| &acc * f);
            ensure!(product == Poly::x_pow_minus_one(&ring, m), "{name} m={m}: product differs from X^m - 1");
            let base = factor_xm_minus_1(m, &field, DEFAULT_SEED).unwrap();
            let projected: Vec<Poly> = lifted.iter().map(Poly::residue).collect();
            ensure!(projected == base, "{name} m={m}: projection differs from base factors");
            pairs += 1;
        }
    }

    // known factorizations over Z/4, confirmed here by integer multiplication
    let oracle: [(usize, Vec<Vec<i64>>); 2] =
        [(3, vec![vec![3, 1], vec![1, 1, 1]]), (7, vec![vec![3, 1], vec![3, 1, 2, 1], vec![3, 2, 3, 1]])];
    let z4 = ChainRing::new(integers_mod(2, 2)).unwrap();
    for (m, factors) in &oracle {
        let product = factors.iter().skip(1).fold(factors[0].clone(), |acc, f| int_poly_mul(&acc, f, 4));
        let mut expect = vec![0i64; m + 1];
        expect[0] = 3;
        expect[*m] = 1;
        ensure!(product == expect, "oracle for m={m} is not a factorization");
        let mut got: Vec<Vec<i64>> =
            lift_full_factorization(*m, &z4, 2, DEFAULT_SEED).unwrap().iter().map(as_ints).collect();
        let mut want = factors.clone();
        got.sort();
        want.sort();
        ensure!(got == want, "Z/4 m={m}: got {got:?}, expected {want:?}");
    }
    Ok(format!("{pairs} (ring, m) pairs, Z/4 oracles for m = 3, 7"))
}

// ---- 3: code duality oracle ----

fn criterion_3() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let cases: Vec<(Table, usize)> = small_specs()
        .into_iter()
        .filter_map(|(_, spec)| {
            let ring = ChainRing::new(spec).unwrap();
            let q = ring.size().to_u64().unwrap();
            let m = (1..=4u32).rev().find(|&m| q.pow(m) <= 1 << 16)?;
            Some((Table::new(&ring), m as usize))
        })
        .collect();
    let mut codes = 0;
    while codes < 220 {
        let (table, m) = &cases[codes % cases.len()];
        let ring = &table.ring;
        let rows = random_rows(ring, *m, &mut rng);
        let code = LinearCode::from_generators(ring, *m, rows.clone()).map_err(|e| e.to_string())?;
        let members = table.span(*m, &rows);
        let name = format!("{ring:?} m={m} rows={rows:?}");
        ensure!(members == table.code_set(&code), "{name}: standard form changed the code");
        let dual = code.dual().map_err(|e| format!("{name}: {e}"))?;
        let brute = table.brute_dual(*m, &rows);
        ensure!(table.code_set(&dual) == brute, "{name}: dual differs from brute force");
        let total = ring.size().to_u128().unwrap().pow(*m as u32);
        ensure!(members.len() as u128 * brute.len() as u128 == total, "{name}: |C||C^perp| != |R|^m");
        ensure!(dual.dual().map_err(|e| e.to_string())? == code, "{name}: double dual");
        ensure!(type_cardinality(ring, &code.code_type().0) == members.len() as u128, "{name}: cardinality formula");
        codes += 1;
    }
    Ok(format!("{codes} random codes over {} rings", cases.len()))
}

// ---- 4: lift laws ----

fn criterion_4() -> Check {
    let specs = [
        integers_mod(2, 4),
        integers_mod(3, 4),
        galois(2, 4, &[1, 1, 1]),
        ramified(2, 2, &[-2, 0, 1], 2),
        ramified(3, 2, &[3, 3, 1], 2),
        ramified_gr(2, 2, &[1, 1, 1], &[-2, 0, 1], 2),
    ];
    let towers: Vec<PrecisionTower> = specs.into_iter().map(|s| PrecisionTower::new(s, 4).unwrap()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut free = 0;
    let mut any = 0;
    for round in 0..240 {
        let tower = &towers[round % towers.len()];
        let i = rng.gen_range(1..=3);
        let j = rng.gen_range(i + 1..=4);
        let m = rng.gen_range(1..=4);
        let ri = tower.level(i).unwrap();
        if round % 2 == 0 {
            let k = rng.gen_range(0..=m);
            let code = LinearCode::from_generators(&ri, m, random_free_rows(&ri, m, k, &mut rng)).unwrap();
            ensure!(code.is_free() && code.rank() == k, "free code generator broken");
            let lifted = tower.lift_code(&code, j).map_err(|e| e.to_string())?;
            ensure!(lifted.is_free() && lifted.rank() == k, "free lift lost freeness at {i}->{j}: {code:?}");
            ensure!(tower.project_code(&lifted, i).unwrap() == code, "project o lift != id at {i}->{j}");
            free += 1;
        } else {
            let code = LinearCode::from_generators(&ri, m, random_rows(&ri, m, &mut rng)).unwrap();
            let lifted = tower.lift_code(&code, j).map_err(|e| e.to_string())?;
            ensure!(tower.project_code(&lifted, i).unwrap() == code, "project o lift != id at {i}->{j}: {code:?}");
            any += 1;
        }
    }
    Ok(format!("{free} free codes, {any} general codes"))
}

// ---- 5 and 7: desk lattices ----

struct Desk {
    name: &'static str,
    spec: ChainRingSpec,
    m: usize,
    alphas: Vec<Vec<i64>>,
}

fn desks() -> Vec<Desk> {
    let mut v = Vec::new();
    for m in 1..=3 {
        v.push(Desk { name: "Z/4", spec: integers_mod(2, 2), m, alphas: vec![vec![1], vec![2]] });
    }
    for m in 1..=2 {
        v.push(Desk {
            name: "Q_2(sqrt 2), s=2",
            spec: ramified(2, 1, &[-2, 0, 1], 2),
            m,
            alphas: vec![vec![1, 0], vec![0, 1]],
        });
    }
    v.push(Desk { name: "GR(9,2)", spec: galois(3, 2, &[2, 2, 1]), m: 1, alphas: vec![vec![1, 0], vec![0, 1]] });
    v
}

/// All one-generator codes plus a few random ones, deduplicated.
fn desk_codes(ring: &Arc<ChainRing>, m: usize) -> Vec<LinearCode> {
    let table = Table::new(ring);
    let mut out: Vec<LinearCode> = Vec::new();
    let mut push = |c: LinearCode| {
        if !out.contains(&c) {
            out.push(c);
        }
    };
    for v in table.all_vectors(m) {
        let row: Vec<RingElem> = v.iter().map(|&i| table.elems[i as usize].clone()).collect();
        push(LinearCode::from_generators(ring, m, vec![row]).unwrap());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(m as u64 + 50);
    for _ in 0..10 {
        push(LinearCode::from_generators(ring, m, random_rows(ring, m, &mut rng)).unwrap());
    }
    out
}

fn build(code: &LinearCode, spec: &ChainRingSpec, alpha: &[i64]) -> Result<LatticeModel, String> {
    let start = default_precision(spec, code.ring().s());
    let alpha: Vec<num_bigint::BigInt> = alpha.iter().map(|&x| x.into()).collect();
    with_auto_precision(spec, start, |ok| {
        let a = ok.from_integers(&alpha)?;
        construction_a(code, &a, ok)
    })
    .map(|(l, _)| l)
    .map_err(|e| e.to_string())
}

fn log_p(mut x: u128, p: u64) -> usize {
    let mut k = 0;
    while x > 1 {
        x /= p as u128;
        k += 1;
    }
    k
}

fn criterion_5() -> Check {
    let mut lattices = 0;
    let mut free = 0;
    for desk in desks() {
        let ring = ChainRing::new(desk.spec.clone()).unwrap();
        let table = Table::new(&ring);
        let total = ring.size().to_u128().unwrap().pow(desk.m as u32);
        for code in desk_codes(&ring, desk.m) {
            // log_p [O_K^m : psi^-1(C)] = log_p |R^m / C|
            let index = log_p(total / table.code_set(&code).len() as u128, ring.p());
            for a in &desk.alphas {
                let lat = build(&code, &desk.spec, a)?;
                let ok = lat.ok();
                let dk = ok.disc_k().map_err(|e| e.to_string())?.valuation() as i64;
                let na = ok
                    .norm(&ok.from_integers(&a.iter().map(|&x| x.into()).collect::<Vec<_>>()).unwrap())
                    .valuation() as i64;
                let m = desk.m as i64;
                let expected = m * dk + m * na + 2 * index as i64;
                ensure!(
                    lat.disc_valuation() == expected,
                    "{} m={} alpha={a:?} {code:?}: v(det) = {} expected {expected}",
                    desk.name,
                    desk.m,
                    lat.disc_valuation()
                );
                if code.is_free() {
                    let k = code.rank() as i64;
                    let specialized = m * dk + m * na + 2 * (ring.r() * ring.s()) as i64 * (m - k);
                    ensure!(
                        lat.disc_valuation() == specialized,
                        "{}: free-code specialization fails for {code:?}",
                        desk.name
                    );
                    free += 1;
                }
                lattices += 1;
            }
        }
    }
    Ok(format!("{lattices} lattices ({free} from free codes)"))
}

fn criterion_6() -> Check {
    let cases: Vec<(&str, ChainRingSpec, usize)> = vec![
        ("Q_2", integers_mod(2, 1), 0),
        ("Q_3", integers_mod(3, 1), 0),
        ("unramified r=2 over Q_2", galois(2, 1, &[1, 1, 1]), 0),
        ("unramified r=3 over Q_2", galois(2, 1, &[1, 1, 0, 1]), 0),
        ("unramified r=2 over Q_3", galois(3, 1, &[2, 2, 1]), 0),
        ("unramified r=3 over Q_3", galois(3, 1, &[1, 2, 0, 1]), 0),
        ("Q_2(sqrt 2)", ramified(2, 1, &[-2, 0, 1], 2), 3),
        ("Q_3(zeta_3)", ramified(3, 1, &[3, 3, 1], 2), 1),
    ];
    let mut out = Vec::new();
    for (name, spec, want) in cases {
        let start = default_precision(&spec, spec.e());
        let (d, _) =
            with_auto_precision(&spec, start, |ok: &OKModel| ok.disc_k()).map_err(|e| format!("{name}: {e}"))?;
        ensure!(d.valuation() == want, "{name}: v(D_K) = {} expected {want}", d.valuation());
        out.push(format!("{name}={want}"));
    }
    Ok(out.join(", "))
}

fn criterion_7() -> Check {
    let mut self_orth = 0;
    let mut cyclic = 0;
    for desk in desks() {
        let ring = ChainRing::new(desk.spec.clone()).unwrap();
        for code in desk_codes(&ring, desk.m) {
            let lat = build(&code, &desk.spec, &desk.alphas[0])?;
            ensure!(lat.is_integral(), "{}: b_C not integral for {code:?}", desk.name);
            if code.is_self_orthogonal() && desk.spec.r == 1 {
                let start = default_precision(&desk.spec, ring.s());
                let (scaled, _) = with_auto_precision(&desk.spec, start, |ok| scaled_gram_self_orthogonal(&code, ok))
                    .map_err(|e| e.to_string())?;
                ensure!(scaled.is_integral(), "{}: scaled form not integral for {code:?}", desk.name);
                self_orth += 1;
            }
            if code.is_cyclic() {
                ensure!(lat.is_cyclic_lattice(), "{}: cyclic code gave a non-cyclic lattice {code:?}", desk.name);
                cyclic += 1;
            }
        }
    }

    // non-examples over Z/4
    let spec = integers_mod(2, 2);
    let z4 = ChainRing::new(spec.clone()).unwrap();
    let not_cyclic = LinearCode::from_int_rows(&z4, 2, &[&[1, 0]]).unwrap();
    ensure!(!not_cyclic.is_cyclic(), "<(1,0)> reported cyclic");
    ensure!(!build(&not_cyclic, &spec, &[1])?.is_cyclic_lattice(), "<(1,0)> gave a cyclic lattice");
    ensure!(!not_cyclic.is_self_orthogonal(), "<(1,0)> reported self-orthogonal");
    let ok = OKModel::new(&spec, 16).unwrap();
    let form = chainlift::lattice::TraceForm { alpha: ok.ring().one(), scale_exp: 1, twist: None };
    let lat = chainlift::lattice::construction_a_with_form(&not_cyclic, form, &ok).map_err(|e| e.to_string())?;
    ensure!(!lat.is_integral(), "<(1,0)> is integral under Tr(xy)/2");
    ensure!(scaled_gram_self_orthogonal(&not_cyclic, &ok).is_err(), "scaled form accepted a non-self-orthogonal code");
    Ok(format!("{self_orth} self-orthogonal and {cyclic} cyclic desk codes, 2 non-examples"))
}

// ---- 8: CLI golden files ----

fn tests_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests")
}

fn golden_runs() -> Vec<(&'static str, Vec<&'static str>)> {
    vec![
        ("ring-info", vec!["ring-info", "--ring", "fixtures/gr9.json"]),
        ("factor", vec!["factor", "--ring", "fixtures/z4.json", "--m", "7"]),
        ("hensel", vec!["hensel", "--ring", "fixtures/z8.json", "--m", "7"]),
        ("code-std", vec!["code", "std-form", "--ring", "fixtures/z4.json", "--code", "fixtures/z4_mixed.json"]),
        ("code-dual", vec!["code-dual", "--ring", "fixtures/z4.json", "--code", "fixtures/z4_mixed.json"]),
        ("code-check", vec!["code", "check", "--ring", "fixtures/z4.json", "--code", "fixtures/z4_cyclic.json"]),
        (
            "lift",
            vec![
                "lift",
                "--ring",
                "fixtures/z8.json",
                "--code",
                "fixtures/f2_code.json",
                "--from-precision",
                "1",
                "--to-precision",
                "3",
            ],
        ),
        (
            "lift-cyclic",
            vec!["lift-cyclic", "--ring", "fixtures/z4.json", "--m", "7", "--gbar", "[[[1]], [[1]], [[0]], [[1]]]"],
        ),
        (
            "lattice-build",
            vec!["lattice", "build", "--ring", "fixtures/z4.json", "--code", "fixtures/z4_self_orthogonal.json"],
        ),
        (
            "lattice-ideal",
            vec!["lattice-ideal", "--ring", "fixtures/q2_sqrt2.json", "--i", "1", "--alpha", "fixtures/alpha_pi.json"],
        ),
        ("disc-k", vec!["disc-k", "--ring", "fixtures/q3_zeta3.json"]),
    ]
}

fn run_cli(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_chainlift"))
        .args(args)
        .args(["--seed", "42"])
        .current_dir(tests_dir())
        .env_remove("CHAINLIFT_SEED")
        .output()
        .map_err(|e| e.to_string())?;
    ensure!(out.status.success(), "{args:?} exited with {}: {}", out.status, String::from_utf8_lossy(&out.stdout));
    Ok(out.stdout)
}

fn criterion_8() -> Check {
    let update = std::env::var_os("CHAINLIFT_UPDATE_GOLDEN").is_some();
    let runs = golden_runs();
    for (name, args) in &runs {
        let first = run_cli(args)?;
        let second = run_cli(args)?;
        ensure!(first == second, "{name}: two runs differ");
        let path = tests_dir().join("golden").join(format!("{name}.json"));
        if update {
            std::fs::write(&path, &first).map_err(|e| e.to_string())?;
        }
        let golden = std::fs::read(&path).map_err(|e| format!("{}: {e}", path.display()))?;
        ensure!(golden == first, "{name}: output differs from {}", path.display());
    }
    Ok(format!("{} subcommands byte-identical to golden files", runs.len()))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 8] = [
        ("ring axioms and ideal chain", criterion_1, Duration::from_secs(10)),
        ("Hensel suite", criterion_2, Duration::from_secs(10)),
        ("code duality oracle", criterion_3, Duration::from_secs(60)),
        ("lift laws", criterion_4, Duration::from_secs(30)),
        ("discriminant identity", criterion_5, Duration::from_secs(30)),
        ("D_K checkpoints", criterion_6, Duration::from_secs(5)),
        ("lemma and theorem certificates", criterion_7, Duration::from_secs(30)),
        ("CLI determinism", criterion_8, Duration::from_secs(5)),
    ];
    let mut failed = Vec::new();
    for (k, (name, f, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = f();
        let took = start.elapsed();
        let line = match &result {
            Ok(detail) if took <= *budget => format!("PASS  {detail}"),
            Ok(detail) => format!("FAIL  over budget ({:.1}s > {}s): {detail}", took.as_secs_f64(), budget.as_secs()),
            Err(why) => format!("FAIL  {why}"),
        };
        println!("criterion {}: {name}: {line} [{:.2}s]", k + 1, took.as_secs_f64());
        if !line.starts_with("PASS") {
            failed.push(k + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
