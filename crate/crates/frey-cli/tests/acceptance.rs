//! Acceptance suite: one [PASS]/[FAIL] line per criterion, nonzero exit if
//! any criterion fails.

use frey::arith::{big_pow, primes_up_to};
use frey::curves::{closed_form_discriminant, frey_curve, validate_pair};
use frey::cyclofield::{CycloRealField, KElement};
use frey::elimination::bounds::{class_factors_direct, residue_classes};
use frey::elimination::fixture::{EigenvalueEntry, FieldElement, NewformFixture};
use frey::elimination::refined::total_split_roots;
use frey::elimination::synthetic::{conjugate_embedding, plant, rebase, PlantSpec};
use frey::elimination::{
    bound_b, bound_n, cm_fixture, refined_eliminate, save_fixtures, survivors, validate, BoundConfig, CaseMode,
    ClassFilter, GaloisSubset, RefinedConfig, SurvivorSet, TraceStore, TwistMode, Verdict,
};
use frey::error::FreyError;
use frey::freypoly::{chebyshev_coeffs, phi_r};
use frey::frobenius::{galois_closed, legendre_congruence, orbit_product, trace_set, weil_bound_holds};
use frey::localdata::{semistable_congruences, SerreLevel};
use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;

fn bi(x: i64) -> BigInt {
    BigInt::from(x)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(t: Instant, limit: Duration) -> Result<(), String> {
    let e = t.elapsed();
    ensure(e < limit, || format!("took {e:.1?}, limit {limit:?}"))
}

fn scratch_dir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("frey-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temp dir");
    dir
}

struct Run {
    status: i32,
    artifact: Value,
    stderr: String,
}

fn frey(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_frey")).args(args).output().expect("run frey");
    Run {
        status: out.status.code().unwrap_or(-1),
        artifact: serde_json::from_slice(&out.stdout).unwrap_or(Value::Null),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

fn identity_battery() -> Outcome {
    let t = Instant::now();
    let run = frey(&["verify", "--r-max", "31"]);
    within(t, Duration::from_secs(10))?;
    ensure(run.status == 0, || format!("exit status {}: {}", run.status, run.stderr))?;
    let reports = run.artifact["outputs"]["reports"].as_array().cloned().unwrap_or_default();
    ensure(reports.len() == 10, || format!("{} reports for r in 3..=31", reports.len()))?;
    for rep in &reports {
        let checks = rep["checks"].as_array().cloned().unwrap_or_default();
        ensure(checks.len() >= 6, || format!("r = {}: only {} identity checks", rep["r"], checks.len()))?;
        if let Some(bad) = checks.iter().find(|c| c["passed"] != Value::Bool(true)) {
            return Err(format!("r = {}: {} failed", rep["r"], bad["name"]));
        }
    }
    Ok(format!("10 primes r <= 31, {:.2?}", t.elapsed()))
}

fn discriminant_oracle() -> Outcome {
    let t = Instant::now();
    let literal = |r: u64, a: i64, b: i64, want: i64| -> Result<(), String> {
        let model = frey_curve(r, &bi(a), &bi(b)).map_err(|e| e.to_string())?;
        let (closed, direct) = (closed_form_discriminant(r, &bi(a), &bi(b)), model.discriminant());
        ensure(closed == bi(want) && direct == bi(want), || {
            format!("disc C_{r}({a},{b}): closed {closed}, resultant {direct}, expected {want}")
        })
    };
    literal(5, 0, 1, 800000)?;
    literal(3, 1, 1, -1728)?;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut n = 0;
    while n < 200 {
        let r = [3u64, 5, 7, 11][rng.gen_range(0..4)];
        let (a, b) = (bi(rng.gen_range(-60..=60)), bi(rng.gen_range(-60..=60)));
        if validate_pair(r, &a, &b).is_err() {
            continue;
        }
        let model = frey_curve(r, &a, &b).map_err(|e| e.to_string())?;
        let (closed, direct) = (closed_form_discriminant(r, &a, &b), model.discriminant());
        ensure(closed == direct, || format!("r={r} a={a} b={b}: closed {closed} != resultant {direct}"))?;
        n += 1;
    }
    within(t, Duration::from_secs(30))?;
    Ok(format!("2 literals + 200 random triples, {:.2?}", t.elapsed()))
}

fn chebyshev_lists() -> Outcome {
    let expected: [(u64, &[i64]); 4] =
        [(3, &[1, 3]), (5, &[1, 5, 5]), (7, &[1, 7, 14, 7]), (11, &[1, 11, 44, 77, 55, 11])];
    for (r, want) in expected {
        let got = chebyshev_coeffs(r).map_err(|e| e.to_string())?;
        let want: Vec<BigInt> = want.iter().map(|&c| bi(c)).collect();
        ensure(got == want, || format!("r = {r}: {got:?}"))?;
    }
    Ok("r = 3, 5, 7, 11".into())
}

fn congruence_battery() -> Outcome {
    let t = Instant::now();
    ensure(phi_r(5, &bi(2), &bi(3)) == bi(55), || format!("phi_5(2,3) = {}", phi_r(5, &bi(2), &bi(3))))?;
    ensure((55 - 80) % 25 == 0, || "55 != 80 mod 25".into())?;
    let worked = semistable_congruences(5, &bi(2), &bi(3)).map_err(|e| e.to_string())?;
    ensure(worked.all_passed(), || format!("(5, 2, 3): {:?}", worked.checks))?;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut total = 1;
    for r in [5u64, 7, 11] {
        let mut n = 0;
        while n < 20 {
            let a = bi(rng.gen_range(-500..=500));
            let b = bi(r as i64 * rng.gen_range(-100..=100)) - &a;
            if validate_pair(r, &a, &b).is_err() {
                continue;
            }
            let rep = semistable_congruences(r, &a, &b).map_err(|e| e.to_string())?;
            if let Some(bad) = rep.checks.iter().find(|c| !c.passed) {
                return Err(format!("r={r} a={a} b={b}: {} ({})", bad.name, bad.detail));
            }
            ensure(rep.checks.iter().any(|c| c.name == "middle-binomial"), || "binomial check missing".into())?;
            n += 1;
            total += 1;
        }
    }
    within(t, Duration::from_secs(5))?;
    Ok(format!("{total} triples incl. (5, 2, 3), {:.2?}", t.elapsed()))
}

fn trace_certification() -> Outcome {
    let t = Instant::now();
    let r = 5u64;
    let field = CycloRealField::new(r).map_err(|e| e.to_string())?;
    let k = field.field();
    let pairs = [(1i64, 2i64), (2, 1), (3, 1), (1, 4), (3, 7), (-2, 5), (4, 9), (6, 1), (-7, 3), (11, 2)];
    let mut tested = 0;
    for (a, b) in pairs {
        let (a, b) = (bi(a), bi(b));
        validate_pair(r, &a, &b).map_err(|e| e.to_string())?;
        let u = big_pow(&a, r) + big_pow(&b, r);
        for q in primes_up_to(50).into_iter().filter(|&q| q != 2 && q != r && !(&u % q).is_zero()) {
            let ts = trace_set(r, &a, &b, q).map_err(|e| format!("a={a} b={b} q={q}: {e}"))?;
            let charpoly = ts.l_polynomial.frobenius_charpoly();
            for el in &ts.elements {
                ensure(orbit_product(&field, el, ts.norm).as_ref() == Some(&charpoly), || {
                    format!("a={a} b={b} q={q}: orbit product differs from reverse(L)")
                })?;
            }
            ensure(galois_closed(&field, &ts), || format!("a={a} b={b} q={q}: not Galois closed"))?;
            ensure(weil_bound_holds(&field, &ts), || format!("a={a} b={b} q={q}: Weil bound violated"))?;
            let swapped = trace_set(r, &b, &a, q).map_err(|e| e.to_string())?;
            let mut lhs = swapped.elements.clone();
            let mut rhs: Vec<KElement> =
                ts.elements.iter().map(|x| if ts.norm % 4 == 1 { x.clone() } else { k.neg(x) }).collect();
            lhs.sort();
            rhs.sort();
            ensure(lhs == rhs, || format!("a={a} b={b} q={q}: interchange law fails"))?;
            tested += 1;
        }
    }
    within(t, Duration::from_secs(120))?;
    Ok(format!("{tested} (pair, q) cases, {:.2?}", t.elapsed()))
}

fn legendre_check() -> Outcome {
    let t = Instant::now();
    let sample = [(1i64, 2i64), (3, 1), (2, 5), (-3, 4), (5, 7)];
    let mut labels = 0;
    for r in [5u64, 7] {
        for (a, b) in sample {
            let (a, b) = (bi(a), bi(b));
            let mut good = 0;
            for q in primes_up_to(400) {
                if good == 10 {
                    break;
                }
                match legendre_congruence(r, &a, &b, q) {
                    Ok(checks) => {
                        if let Some(bad) = checks.iter().find(|c| !c.holds) {
                            return Err(format!("r={r} a={a} b={b} q={q}: {bad:?}"));
                        }
                        labels += checks.len();
                        good += 1;
                    }
                    Err(FreyError::BadReduction { .. }) | Err(FreyError::OutOfScopePrime { .. }) => {}
                    Err(e) => return Err(format!("r={r} a={a} b={b} q={q}: {e}")),
                }
            }
            ensure(good == 10, || format!("r={r} a={a} b={b}: only {good} good primes"))?;
        }
    }
    within(t, Duration::from_secs(120))?;
    Ok(format!("100 (pair, q) cases, {labels} prime labels, {:.2?}", t.elapsed()))
}

/// Primes where no class with ab != 0 shares the CM L-polynomial up to twist.
const CM_SEPARATED: [u64; 5] = [3, 7, 11, 23, 29];
/// Primes where some such class does, so B vanishes legitimately.
const CM_COINCIDENT: [u64; 4] = [13, 17, 19, 31];

fn cm_self_test() -> Outcome {
    let t = Instant::now();
    let qs: Vec<u64> = CM_SEPARATED.iter().chain(&CM_COINCIDENT).copied().collect();
    let nf = validate(cm_fixture(5, &qs).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let field = CycloRealField::new(5).map_err(|e| e.to_string())?;
    let store = TraceStore::new();
    let cfg = BoundConfig { class_filter: ClassFilter::NonTrivial, ..BoundConfig::default() };
    for &q in &qs {
        let cm = trace_set(5, &bi(0), &bi(1), q).map_err(|e| e.to_string())?;
        let n = bound_n(&nf, q, &GaloisSubset::Full, &cm).map_err(|e| e.to_string())?;
        ensure(n.is_zero(), || format!("q = {q}: bound_N = {n}"))?;
        let qb = bound_b(&nf, q, &cfg, &store).map_err(|e| e.to_string())?;
        let direct = class_factors_direct(&nf, q, &cfg).map_err(|e| e.to_string())?;
        let upper: BigInt =
            residue_classes(5, q, ClassFilter::NonTrivial).iter().map(|c| direct[c].clone()).product();
        ensure(qb.b == &qb.m * &upper, || format!("q = {q}: memoized B differs from direct products"))?;
        let all: BigInt = direct.values().product();
        let diag: BigInt = direct.iter().filter(|((x, y), _)| x == y).map(|(_, v)| v.clone()).product();
        ensure(&upper * &upper == all * diag, || format!("q = {q}: ordered and unordered products disagree"))?;
        if CM_SEPARATED.contains(&q) {
            ensure(!qb.b.is_zero(), || format!("q = {q}: bound_B = 0 over ab != 0 classes"))?;
        } else {
            ensure(!qb.zero_classes.is_empty(), || format!("q = {q}: expected a CM coincidence"))?;
            // every vanishing class must carry the CM L-polynomial up to quadratic twist
            let want = &cm.l_polynomial.coeffs;
            for &(x, y) in &qb.zero_classes {
                let ts = frey::frobenius::trace_set_class(&field, x, y, q).map_err(|e| e.to_string())?;
                let got = &ts.l_polynomial.coeffs;
                let twisted: Vec<BigInt> =
                    want.iter().enumerate().map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() }).collect();
                ensure(got == want || *got == twisted, || format!("q = {q}: class ({x}, {y}) vanishes spuriously"))?;
            }
        }
    }
    within(t, Duration::from_secs(300))?;
    Ok(format!(
        "N = 0 at q in {qs:?}; B nonzero at {CM_SEPARATED:?}; B = 0 at {CM_COINCIDENT:?} only through classes \
         sharing the CM L-polynomial; {:.2?}",
        t.elapsed()
    ))
}

fn planted_spec_r7() -> PlantSpec {
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

fn planted_recovery() -> Outcome {
    let t = Instant::now();
    let store = TraceStore::new();
    let spec = planted_spec_r7();
    let pf = plant(&spec, &store).map_err(|e| e.to_string())?;
    let nf = validate(pf.fixture.clone()).map_err(|e| e.to_string())?;
    let rep = survivors(std::slice::from_ref(&nf), &[29], &BoundConfig::default(), &[2, 3, 7], &store)
        .map_err(|e| e.to_string())?;
    match &rep.fixtures[0].survivors {
        SurvivorSet::Primes { primes, .. } if primes.contains(&bi(13)) => {}
        other => return Err(format!("13 not among survivors: {other:?}")),
    }
    let refined = refined_eliminate(&nf, 13, 29, &RefinedConfig::default(), &store).map_err(|e| e.to_string())?;
    ensure(refined.verdict == Verdict::Accept, || "p = 13 rejected".into())?;
    ensure(refined.accepted_pairs() == vec![(pf.planted_i, pf.planted_j)], || {
        format!("accepted {:?}, planted {:?}", refined.accepted_pairs(), (pf.planted_i, pf.planted_j))
    })?;

    let variants = [
        pf.fixture.clone(),
        rebase(&pf.fixture, -1, 0).map_err(|e| e.to_string())?,
        rebase(&pf.fixture, 1, 1).map_err(|e| e.to_string())?,
        conjugate_embedding(&pf.fixture, 2).map_err(|e| e.to_string())?,
        conjugate_embedding(&pf.fixture, 3).map_err(|e| e.to_string())?,
    ];
    let forms = variants.into_iter().map(validate).collect::<Result<Vec<_>, _>>().map_err(|e| e.to_string())?;
    let split: Vec<u64> = primes_up_to(3000)
        .into_iter()
        .filter(|&p| p > 7 && p != 29 && total_split_roots(&forms[0], p).is_ok())
        .collect();
    ensure(split.len() >= 10, || format!("only {} totally split primes", split.len()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut rejected = 0;
    for probe in 0..100 {
        let nf = &forms[rng.gen_range(0..forms.len())];
        let p = split[rng.gen_range(0..split.len())];
        let (twist, case_mode) =
            if rng.gen_bool(0.5) { (TwistMode::Plain, CaseMode::Plain) } else { (TwistMode::ChiR, CaseMode::ChiR) };
        let b = bound_b(nf, 29, &BoundConfig { twist, ..BoundConfig::default() }, &store)
            .map_err(|e| e.to_string())?
            .b;
        let rep = refined_eliminate(nf, p, 29, &RefinedConfig { case_mode, ..RefinedConfig::default() }, &store)
            .map_err(|e| e.to_string())?;
        if !b.is_zero() && !(&b % p).is_zero() {
            ensure(rep.verdict == Verdict::Reject, || format!("probe {probe}: p = {p} divides no B but accepted"))?;
            rejected += 1;
        }
    }
    Ok(format!("planted pair {:?}, 100 probes ({rejected} coarse rejections), {:.2?}",
        (pf.planted_i, pf.planted_j), t.elapsed()))
}

const DEGREE_SIXTY_P: u64 = 68670229;

fn degree_sixty_ingestion(dir: &Path) -> Outcome {
    let t = Instant::now();
    let spec = PlantSpec {
        r: 11,
        e: 12,
        c: 7,
        level: SerreLevel { r: 11, e2: 2, er: 1, nd_primes: vec![] },
        q: 23,
        p: DEGREE_SIXTY_P,
        class: (1, 2),
        seed: 11,
        spread: 3,
        require_unique: false,
        max_tries: 1,
    };
    let pf = plant(&spec, &TraceStore::new()).map_err(|e| e.to_string())?;
    let fx = &pf.fixture;
    ensure(fx.field_minpoly.len() == 61, || format!("degree {}", fx.field_minpoly.len() - 1))?;
    let labels: std::collections::BTreeSet<&Vec<u64>> =
        fx.eigenvalues.iter().filter(|e| e.q == 23).map(|e| &e.label).collect();
    ensure(labels.len() == 5, || format!("{} primes above 23", labels.len()))?;
    let path = dir.join("degree60.json");
    save_fixtures(&path, std::slice::from_ref(fx)).map_err(|e| e.to_string())?;
    let path = path.to_str().expect("utf-8 path");

    let elim = frey(&["eliminate", "--fixtures", path, "--q-list", "23"]);
    ensure(elim.status == 0, || format!("eliminate exit {}: {}", elim.status, elim.stderr))?;
    let fs = &elim.artifact["outputs"]["report"]["fixtures"][0];
    let survived = fs["survivors"]["primes"].as_array().is_some_and(|ps| {
        ps.iter().any(|p| p.as_str() == Some(&DEGREE_SIXTY_P.to_string()))
    }) || fs["survivors"]["unfactored"].as_array().is_some_and(|cs| {
        cs.iter().any(|c| {
            c.as_str()
                .and_then(|s| s.parse::<BigInt>().ok())
                .is_some_and(|c| (c % DEGREE_SIXTY_P).is_zero())
        })
    });
    ensure(survived, || format!("p = {DEGREE_SIXTY_P} not accounted for in the survivor report"))?;

    let p = DEGREE_SIXTY_P.to_string();
    let refined = frey(&["refined", "--fixtures", path, "--p", &p, "--q", "23"]);
    ensure(refined.status == 0, || format!("refined exit {}: {}", refined.status, refined.stderr))?;
    let rep = &refined.artifact["outputs"]["reports"][0];
    ensure(rep["verdict"] == "accept", || format!("verdict {}", rep["verdict"]))?;
    let accepted: Vec<(u64, u64)> = rep["pairs"]
        .as_array()
        .cloned()
        .unwrap_or_default()
        .iter()
        .filter(|pr| !pr["accepted"].is_null())
        .map(|pr| (pr["i"].as_u64().unwrap_or(u64::MAX), pr["j"].as_u64().unwrap_or(u64::MAX)))
        .collect();
    let planted = (pf.planted_i as u64, pf.planted_j as u64);
    ensure(accepted == vec![planted], || format!("accepted {accepted:?}, planted {planted:?}"))?;
    within(t, Duration::from_secs(600))?;
    Ok(format!("degree 60, 5 primes above 23, planted pair {planted:?}, {:.1?}", t.elapsed()))
}

fn malformed_cases() -> Vec<(&'static str, &'static str, String)> {
    let good = cm_fixture(5, &[11]).expect("cm fixture");
    let json = |fx: &NewformFixture| serde_json::to_string(fx).expect("json");
    let fe = |c: &[i64], d: i64| FieldElement { coeffs: c.iter().map(|&x| bi(x)).collect(), den: bi(d) };
    let with = |f: &dyn Fn(&mut NewformFixture)| {
        let mut fx = good.clone();
        f(&mut fx);
        json(&fx)
    };
    let mut cases: Vec<(&'static str, &'static str, String)> = vec![
        ("fixture-schema", "eliminate", "{\"label\": 3}".into()),
        ("level-r-valid", "eliminate", with(&|fx| fx.level.r = 9)),
        ("minpoly-monic", "eliminate", with(&|fx| fx.field_minpoly = vec![bi(-1), bi(1), bi(2)])),
        (
            "degree-divisible-by-g",
            "eliminate",
            with(&|fx| {
                fx.field_minpoly = vec![bi(-2), bi(0), bi(0), bi(1)];
                fx.omega_embedding = fe(&[0, 1], 1);
            }),
        ),
        (
            "minpoly-squarefree",
            "eliminate",
            with(&|fx| fx.field_minpoly = vec![bi(1), bi(2), bi(1)]),
        ),
        (
            "minpoly-irreducible",
            "eliminate",
            // (x^2 + x - 1)(x^2 + 1), with omega a root of the first factor
            with(&|fx| {
                fx.field_minpoly = vec![bi(-1), bi(1), bi(0), bi(1), bi(1)];
                fx.omega_embedding = fe(&[0, 1], 1);
                fx.eigenvalues.clear();
            }),
        ),
        ("nonzero-denominator", "eliminate", with(&|fx| fx.eigenvalues[0].value = fe(&[1], 0))),
        ("coordinate-length", "eliminate", with(&|fx| fx.eigenvalues[0].value = fe(&[1, 0, 2], 1))),
        ("omega-embedding-root-of-h", "eliminate", with(&|fx| fx.omega_embedding = fe(&[3], 1))),
        ("eigenvalue-prime", "eliminate", with(&|fx| fx.eigenvalues[0].q = 15)),
        ("prime-label-canonical", "eliminate", with(&|fx| fx.eigenvalues[0].label = vec![1, 1])),
        (
            "eigenvalue-unique",
            "eliminate",
            with(&|fx| {
                let dup: EigenvalueEntry = fx.eigenvalues[0].clone();
                fx.eigenvalues.push(dup);
            }),
        ),
    ];
    // eigenvalues at q = 11 only, so asking for q = 13 is a missing-eigenvalue failure
    cases.push(("eigenvalue-present", "eliminate-13", json(&good)));
    cases
}

fn subfield_cases() -> Vec<(&'static str, String)> {
    use frey::elimination::fixture::{SubfieldData, SubfieldEigenvalue};
    let good = cm_fixture(5, &[3, 11]).expect("cm fixture");
    let a3 = good.eigenvalues.iter().find(|e| e.q == 3).expect("inert eigenvalue").value.clone();
    let fe = |c: &[i64]| FieldElement { coeffs: c.iter().map(|&x| bi(x)).collect(), den: bi(1) };
    // E_g = Q, embedded as the rationals
    let sub = SubfieldData {
        minpoly: vec![bi(0), bi(1)],
        generator_image: fe(&[]),
        galois_stable: true,
        eigenvalues: vec![SubfieldEigenvalue { q: 3, value: a3.clone() }],
    };
    let with = |f: &dyn Fn(&mut SubfieldData)| {
        let mut fx = good.clone();
        let mut s = sub.clone();
        f(&mut s);
        fx.subfield_eg = Some(s);
        serde_json::to_string(&fx).expect("json")
    };
    vec![
        ("subfield-minpoly-monic", with(&|s| s.minpoly = vec![bi(0), bi(2)])),
        ("subfield-degree", with(&|s| s.minpoly = vec![bi(-2), bi(0), bi(1)])),
        ("subfield-embedding", with(&|s| s.generator_image = fe(&[1]))),
        ("subfield-inert-prime", with(&|s| s.eigenvalues[0].q = 11)),
        ("subfield-eigenvalue-consistency", with(&|s| s.eigenvalues[0].value = fe(&[1234]))),
    ]
}

fn certificate_enforcement(dir: &Path) -> Outcome {
    let mut cases: Vec<(&str, &str, String)> = malformed_cases();
    cases.extend(subfield_cases().into_iter().map(|(inv, j)| (inv, "eliminate", j)));
    for (i, (invariant, mode, body)) in cases.iter().enumerate() {
        let path = dir.join(format!("malformed-{i}.json"));
        std::fs::write(&path, body).map_err(|e| e.to_string())?;
        let path = path.to_str().expect("utf-8 path");
        let q = if *mode == "eliminate-13" { "13" } else { "11" };
        let run = frey(&["eliminate", "--fixtures", path, "--q-list", q]);
        ensure(run.status == 2, || format!("{invariant}: exit {} ({})", run.status, run.stderr.trim()))?;
        let named = run.artifact["outputs"]["invariant"].as_str() == Some(invariant);
        ensure(named, || format!("{invariant}: artifact names {}", run.artifact["outputs"]["invariant"]))?;
    }
    // the same rejections through the refined command
    let refined_path = dir.join("malformed-refined.json");
    std::fs::write(&refined_path, &cases.iter().find(|c| c.0 == "omega-embedding-root-of-h").expect("case").2)
        .map_err(|e| e.to_string())?;
    let run = frey(&["refined", "--fixtures", refined_path.to_str().unwrap(), "--p", "11", "--q", "19"]);
    ensure(run.status == 2 && run.stderr.contains("omega-embedding-root-of-h"), || {
        format!("refined: exit {} ({})", run.status, run.stderr.trim())
    })?;
    Ok(format!("{} malformed fixtures rejected with exit 2", cases.len() + 1))
}

fn guarded(f: impl FnOnce() -> Outcome) -> Outcome {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(r) => r,
        Err(p) => Err(p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into())),
    }
}

fn main() {
    let dir = scratch_dir();
    let criteria: Vec<(&str, Box<dyn FnOnce() -> Outcome + '_>)> = vec![
        ("identity battery", Box::new(identity_battery)),
        ("discriminant oracle", Box::new(discriminant_oracle)),
        ("chebyshev coefficient lists", Box::new(chebyshev_lists)),
        ("semistable congruence battery", Box::new(congruence_battery)),
        ("trace-set certification", Box::new(trace_certification)),
        ("legendre congruence", Box::new(legendre_check)),
        ("cm elimination self-test", Box::new(cm_self_test)),
        ("planted congruence recovery", Box::new(planted_recovery)),
        ("degree-60 fixture ingestion", Box::new(|| degree_sixty_ingestion(&dir))),
        ("fixture certificate enforcement", Box::new(|| certificate_enforcement(&dir))),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.into_iter().enumerate() {
        match guarded(run) {
            Ok(detail) => println!("[PASS] {:>2}. {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {:>2}. {name}: {why}", i + 1);
            }
        }
    }
    let _ = std::fs::remove_dir_all(&dir);
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all criteria passed");
}
