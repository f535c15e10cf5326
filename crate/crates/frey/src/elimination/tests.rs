use super::bounds::{bound_n_at, class_factors_direct, residue_classes};
use super::fixture::IrreducibilityCertificate;
use super::synthetic::{conjugate_embedding, extension_minpoly, plant, rebase, PlantSpec, PlantedFixture};
use super::*;
use crate::arith::primes_up_to;
use crate::cyclofield::CycloRealField;
use crate::frobenius::trace_set;
use crate::localdata::SerreLevel;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use std::sync::OnceLock;

fn bi(x: i64) -> BigInt {
    BigInt::from(x)
}

fn divides(a: &BigInt, b: &BigInt) -> bool {
    if a.is_zero() {
        b.is_zero()
    } else {
        (b % a).is_zero()
    }
}

fn cm5() -> Newform {
    validate(cm_fixture(5, &[3, 7, 11, 13]).unwrap()).unwrap()
}

pub(crate) fn planted_r7_spec() -> PlantSpec {
    PlantSpec {
        r: 7,
        e: 2,
        c: 11,
        level: SerreLevel { r: 7, e2: 2, er: 2, nd_primes: vec![] },
        q: 29,
        p: 13,
        class: (1, 2),
        seed: 7,
        spread: 3,
        require_unique: true,
        max_tries: 200,
    }
}

fn planted_r7() -> &'static PlantedFixture {
    static CELL: OnceLock<PlantedFixture> = OnceLock::new();
    CELL.get_or_init(|| plant(&planted_r7_spec(), &TraceStore::new()).unwrap())
}

#[test]
fn cm_fixture_round_trip_and_consistency() {
    let fx = cm_fixture(5, &[11, 3]).unwrap();
    let dir = std::env::temp_dir().join(format!("frey-cm-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("cm.json");
    save_fixtures(&path, std::slice::from_ref(&fx)).unwrap();
    let back = load_fixtures(&path).unwrap();
    assert_eq!(back[0].fixture, fx);
    assert!(matches!(back[0].irreducibility, IrreducibilityCertificate::DegreePatterns { .. }));
    // sigma(a_q) = a_{sigma q}
    let nf = &back[0];
    let k = &nf.k;
    let sp = k.split_prime(11).unwrap();
    let labels = sp.labels();
    let a0 = nf.eigenvalue(11, &labels[0].factor).unwrap().clone();
    for s in k.galois_group() {
        let t = k.label_image(s, &sp, 0).unwrap();
        let a0k = crate::numfield::NfElem { num: a0.num.clone(), den: a0.den.clone() };
        assert_eq!(&nf.embed(&k.galois_apply(s, &a0k)), nf.eigenvalue(11, &labels[t].factor).unwrap());
    }
}

#[test]
fn cm_obstruction() {
    let nf = cm5();
    for q in [3u64, 7, 11, 13] {
        let ts = trace_set(5, &bi(0), &bi(1), q).unwrap();
        assert!(bound_n(&nf, q, &GaloisSubset::Full, &ts).unwrap().is_zero());
    }
    let store = TraceStore::new();
    let rep = survivors(&[nf], &[3, 7], &BoundConfig::default(), &[2, 3, 5], &store).unwrap();
    assert_eq!(rep.fixtures[0].survivors, SurvivorSet::All);
    assert!(rep.fixtures[0].cm_obstruction);
}

#[test]
fn m_for_inert_cm() {
    let nf = cm5();
    let ts = trace_set(5, &bi(0), &bi(1), 3).unwrap();
    let t = ts.elements[0].as_integer().unwrap();
    let v = &t * &t - bi(100);
    assert_eq!(bound_m(&nf, 3, &GaloisSubset::Full).unwrap(), &v * &v);
}

#[test]
fn squared_variant_forced() {
    for q in [3u64, 7, 19, 23] {
        let q_norm = CycloRealField::new(5).unwrap().split_prime(q).unwrap().norm();
        if q_norm % 4 == 3 {
            assert_eq!(bounds::bound_variant(q_norm, 5, TwistMode::ChiR), BoundVariant::Squared);
            assert_eq!(bounds::bound_variant(q_norm, 5, TwistMode::Plain), BoundVariant::Squared);
        }
    }
}

#[test]
fn eisenstein_like_eigenvalue_kills_m() {
    let mut fx = cm_fixture(5, &[11]).unwrap();
    for e in fx.eigenvalues.iter_mut() {
        e.value = fixture::FieldElement { coeffs: vec![bi(12)], den: bi(1) };
    }
    let nf = validate(fx).unwrap();
    assert!(bound_m(&nf, 11, &GaloisSubset::Full).unwrap().is_zero());
}

#[test]
fn memoized_b_matches_direct_products() {
    let nf = cm5();
    let store = TraceStore::new();
    for q in [3u64, 7, 11] {
        let cfg = BoundConfig { class_filter: ClassFilter::NonTrivial, ..BoundConfig::default() };
        let qb = bound_b(&nf, q, &cfg, &store).unwrap();
        let direct = class_factors_direct(&nf, q, &cfg).unwrap();
        let upper: BigInt = residue_classes(5, q, ClassFilter::NonTrivial).iter().map(|c| direct[c].clone()).product();
        assert_eq!(qb.b, &qb.m * &upper);
        let all: BigInt = direct.values().product();
        let diag: BigInt = direct.iter().filter(|((x, y), _)| x == y).map(|(_, v)| v.clone()).product();
        assert_eq!(&upper * &upper, all * diag);
    }
}

#[test]
fn validation_errors_name_the_invariant() {
    let good = cm_fixture(5, &[11]).unwrap();
    let expect = |fx: NewformFixture, inv: &str| match validate(fx) {
        Err(FreyError::Certificate { invariant, .. }) => assert_eq!(invariant, inv),
        other => panic!("expected {inv}, got {other:?}"),
    };
    let mut fx = good.clone();
    fx.omega_embedding = fixture::FieldElement { coeffs: vec![bi(3)], den: bi(1) };
    expect(fx, "omega-embedding-root-of-h");
    let mut fx = good.clone();
    fx.field_minpoly = vec![bi(-2), bi(0), bi(0), bi(1)];
    fx.omega_embedding = fixture::FieldElement { coeffs: vec![bi(0), bi(1)], den: bi(1) };
    expect(fx, "degree-divisible-by-g");
    let mut fx = good.clone();
    fx.eigenvalues[0].label = vec![1, 1];
    expect(fx, "prime-label-canonical");
    let mut fx = good.clone();
    fx.field_minpoly = vec![bi(-1), bi(1), bi(2)];
    expect(fx, "minpoly-monic");
    let mut fx = good.clone();
    let dup = fx.eigenvalues[0].clone();
    fx.eigenvalues.push(dup);
    expect(fx, "eigenvalue-unique");
    assert!(matches!(
        parse_fixtures("{\"label\": 3}"),
        Err(FreyError::Certificate { invariant, .. }) if invariant == "fixture-schema"
    ));
}

#[test]
fn irreducibility_witness_detects_reducible() {
    let f = crate::poly::IntPoly::from_i64(&[-1, 0, 1]).mul(&crate::poly::IntPoly::from_i64(&[2, 0, 1]));
    assert!(fixture::irreducibility_witness(&f, 500).is_none());
    let x4 = crate::poly::IntPoly::from_i64(&[1, 0, 0, 0, 1]);
    // x^4 + 1 is irreducible but reducible mod every prime
    assert!(fixture::irreducibility_witness(&x4, 500).is_none());
    let k = CycloRealField::new(7).unwrap();
    assert!(fixture::irreducibility_witness(&extension_minpoly(&k, 2, 11), 500).is_some());
}

#[test]
fn planted_congruence_recovered() {
    let pf = planted_r7();
    let nf = validate(pf.fixture.clone()).unwrap();
    let store = TraceStore::new();
    let qb = bound_b(&nf, 29, &BoundConfig::default(), &store).unwrap();
    assert!(!qb.b.is_zero());
    assert!((&qb.b % 13u32).is_zero());
    let rep = refined_eliminate(&nf, 13, 29, &RefinedConfig::default(), &store).unwrap();
    assert_eq!(rep.accepted_pairs(), vec![(pf.planted_i, pf.planted_j)]);
    assert_eq!(rep.verdict, Verdict::Accept);
}

#[test]
fn hecke_conjugates_share_bounds() {
    let pf = planted_r7();
    let store = TraceStore::new();
    let base = validate(pf.fixture.clone()).unwrap();
    let reference = bound_b(&base, 29, &BoundConfig::default(), &store).unwrap().b;
    let variants = [
        rebase(&pf.fixture, -1, 0).unwrap(),
        rebase(&pf.fixture, 1, 1).unwrap(),
        conjugate_embedding(&pf.fixture, 2).unwrap(),
        conjugate_embedding(&pf.fixture, 3).unwrap(),
    ];
    for fx in variants {
        let nf = validate(fx).unwrap();
        assert_eq!(bound_b(&nf, 29, &BoundConfig::default(), &store).unwrap().b, reference);
        let ts = crate::frobenius::trace_set_class(&nf.k, 3, 5, 29).unwrap();
        assert_eq!(
            bound_n(&nf, 29, &GaloisSubset::Full, &ts).unwrap(),
            bound_n(&base, 29, &GaloisSubset::Full, &ts).unwrap()
        );
    }
}

#[test]
fn subset_monotonicity_and_aggregation() {
    let pf = planted_r7();
    let nf = validate(pf.fixture.clone()).unwrap();
    for (x, y) in [(1u64, 2u64), (2, 9), (4, 4)] {
        let ts = crate::frobenius::trace_set_class(&nf.k, x, y, 29).unwrap();
        let full = bound_n(&nf, 29, &GaloisSubset::Full, &ts).unwrap();
        for sub in [vec![1u64], vec![2], vec![1, 3]] {
            let part = bound_n(&nf, 29, &GaloisSubset::Indices(sub), &ts).unwrap();
            assert!(divides(&full, &part));
        }
        let mut agg = BigInt::zero();
        for base in 0..3 {
            agg = agg.gcd(&bound_n_at(&nf, 29, base, &GaloisSubset::Indices(vec![1]), &ts).unwrap());
        }
        assert!(divides(&full, &agg));
    }
}

#[test]
fn coarse_implies_refined() {
    let pf = planted_r7();
    let nf = validate(pf.fixture.clone()).unwrap();
    let store = TraceStore::new();
    for twist in [TwistMode::Plain, TwistMode::ChiR] {
        let cfg = BoundConfig { twist, ..BoundConfig::default() };
        let b = bound_b(&nf, 29, &cfg, &store).unwrap().b;
        let case_mode = if twist == TwistMode::Plain { CaseMode::Plain } else { CaseMode::ChiR };
        let mut probes = 0;
        for p in primes_up_to(1500).into_iter().filter(|&p| p > 7 && p != 29) {
            if refined::total_split_roots(&nf, p).is_err() {
                continue;
            }
            probes += 1;
            let rep = refined_eliminate(&nf, p, 29, &RefinedConfig { case_mode, ..RefinedConfig::default() }, &store).unwrap();
            if !b.is_zero() && !(&b % p).is_zero() {
                assert_eq!(rep.verdict, Verdict::Reject, "p = {p}");
            }
        }
        assert!(probes >= 5);
    }
}

#[test]
fn not_totally_split_is_unsupported() {
    let nf = validate(planted_r7().fixture.clone()).unwrap();
    let store = TraceStore::new();
    assert!(matches!(
        refined_eliminate(&nf, 11, 29, &RefinedConfig::default(), &store),
        Err(FreyError::Unsupported(_))
    ));
}
