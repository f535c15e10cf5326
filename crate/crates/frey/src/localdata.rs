//! Local data of J_r(a,b): reduction types and conductor exponents per prime,
//! Serre levels, the shifted-model congruence battery at r, the finiteness
//! valuation test and the irreducibility criteria.

use crate::arith::{big_mod_u64, big_pow, binomial, factor_bounded, is_prime, order_mod_pm1, valuation};
use crate::curves::validate_pair;
use crate::cyclofield::{CycloRealField, KElement};
use crate::error::{FreyError, Result};
use crate::freypoly::{chebyshev_coeffs, phi_r};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReductionType {
    Good,
    Multiplicative,
    Additive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InertialType {
    Unramified,
    Steinberg,
    PrincipalSeries,
    Supercuspidal,
    TwistOfSteinberg,
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionReport {
    pub q: u64,
    #[serde(rename = "type")]
    pub reduction: ReductionType,
    pub conductor_exponent: u32,
    /// None when the inertia order is not determined by the classifier.
    pub inertia_order: Option<u64>,
    pub inertial_type: InertialType,
}

/// a even and b = 1 mod 4.
pub fn parity_holds(a: &BigInt, b: &BigInt) -> bool {
    a.is_even() && b.mod_floor(&BigInt::from(4)) == BigInt::one()
}

/// Residue degree of 2 in K.
pub fn f2(r: u64) -> u64 {
    order_mod_pm1(2, r)
}

pub fn classify_prime(r: u64, a: &BigInt, b: &BigInt, q: u64) -> Result<ReductionReport> {
    chebyshev_coeffs(r)?;
    validate_pair(r, a, b)?;
    if !is_prime(q) {
        return Err(FreyError::invalid(format!("q = {q} is not prime")));
    }
    let u = big_pow(a, r) + big_pow(b, r);
    let q_divides_u = (&u % q).is_zero();
    let report = |reduction, e, inertia, it| ReductionReport {
        q,
        reduction,
        conductor_exponent: e,
        inertia_order: inertia,
        inertial_type: it,
    };
    if q != 2 && q != r {
        return Ok(if q_divides_u {
            report(ReductionType::Multiplicative, 1, None, InertialType::Steinberg)
        } else {
            report(ReductionType::Good, 0, Some(1), InertialType::Unramified)
        });
    }
    if q == 2 {
        if !parity_holds(a, b) {
            return Err(FreyError::UnsupportedParity { a: a.to_string(), b: b.to_string() });
        }
        let f = f2(r);
        let principal = (BigInt::from(2).pow(f as u32) - 1u32) % r == BigInt::zero();
        return Ok(report(
            ReductionType::Additive,
            2,
            Some(r),
            if principal { InertialType::PrincipalSeries } else { InertialType::Supercuspidal },
        ));
    }
    // q = r
    if (a + b) % r == BigInt::zero() {
        Ok(report(ReductionType::Additive, 2, None, InertialType::TwistOfSteinberg))
    } else {
        Ok(report(
            ReductionType::Additive,
            2,
            Some(4),
            if r % 4 == 1 { InertialType::PrincipalSeries } else { InertialType::Supercuspidal },
        ))
    }
}

/// Level 2^{e2} q_r^{er} n_d with n_d the product of the primes above those
/// rational primes dividing d and coprime to 2r.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct SerreLevel {
    pub r: u64,
    pub e2: u32,
    pub er: u32,
    pub nd_primes: Vec<u64>,
}

impl std::fmt::Display for SerreLevel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "2^{} q_{}^{}", self.e2, self.r, self.er)?;
        for p in &self.nd_primes {
            write!(f, " n_{p}")?;
        }
        Ok(())
    }
}

pub fn serre_level(r: u64, d: &BigInt, r_divides_a_plus_b: bool) -> Result<SerreLevel> {
    chebyshev_coeffs(r)?;
    if !d.is_positive() {
        return Err(FreyError::invalid(format!("d = {d} must be positive")));
    }
    let fact = factor_bounded(d, 1 << 16);
    if !fact.is_complete() {
        return Err(FreyError::Unsupported(format!("could not factor d = {d}")));
    }
    if let Some((p, _)) = fact.primes.iter().find(|(_, &e)| e as u64 >= r) {
        return Err(FreyError::invalid(format!("d = {d} is divisible by {p}^{r}")));
    }
    let nd_primes = fact
        .primes
        .keys()
        .filter_map(|p| p.to_u64())
        .filter(|&p| p != 2 && p != r)
        .collect();
    Ok(SerreLevel { r, e2: 2, er: if r_divides_a_plus_b { 1 } else { 2 }, nd_primes })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CongruenceCheck {
    pub name: String,
    pub j: Option<u64>,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CongruenceReport {
    pub r: u64,
    #[serde(with = "crate::arith::decimal::vec")]
    pub shifted_coeffs: Vec<BigInt>,
    #[serde(with = "crate::arith::decimal::vec")]
    pub alpha: Vec<BigInt>,
    pub checks: Vec<CongruenceCheck>,
}

impl CongruenceReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// alpha_j = sum_k (-1)^k 2^{r-2k-j} binom(r-2k, j) c_k, the ab = -1 shadow of A_j.
pub fn alpha_coeffs(r: u64) -> Result<Vec<BigInt>> {
    let c = chebyshev_coeffs(r)?;
    Ok((0..=r)
        .map(|j| {
            let mut s = BigInt::zero();
            for (k, ck) in c.iter().enumerate() {
                let deg = r - 2 * k as u64;
                if j > deg {
                    continue;
                }
                let t = ck * binomial(deg, j) * big_pow(&BigInt::from(2), deg - j);
                if k % 2 == 0 {
                    s += t;
                } else {
                    s -= t;
                }
            }
            s
        })
        .collect())
}

/// Coefficients of H(x + (a - b)).
pub fn shifted_coeffs(r: u64, a: &BigInt, b: &BigInt) -> Result<Vec<BigInt>> {
    let c = chebyshev_coeffs(r)?;
    let ab = a * b;
    let s = a - b;
    Ok((0..=r)
        .into_par_iter()
        .map(|j| {
            let mut acc = BigInt::zero();
            for (k, ck) in c.iter().enumerate() {
                let deg = r - 2 * k as u64;
                if j > deg {
                    continue;
                }
                acc += ck * big_pow(&ab, k as u64) * binomial(deg, j) * big_pow(&s, deg - j);
            }
            acc
        })
        .collect())
}

pub fn semistable_congruences(r: u64, a: &BigInt, b: &BigInt) -> Result<CongruenceReport> {
    validate_pair(r, a, b)?;
    if !((a + b) % r).is_zero() {
        return Err(FreyError::Precondition(format!("{r} does not divide a + b = {}", a + b)));
    }
    let rb = BigInt::from(r);
    let r2 = &rb * &rb;
    let big_a = shifted_coeffs(r, a, b)?;
    let alpha = alpha_coeffs(r)?;
    let mid = (r + 1) / 2;
    let modr2 = |x: &BigInt| x.mod_floor(&r2);
    let mut checks = Vec::new();
    let mut push = |name: &str, j: Option<u64>, passed: bool, detail: String| {
        checks.push(CongruenceCheck { name: name.into(), j, passed, detail });
    };

    let a0 = big_pow(a, r) - big_pow(b, r);
    push("constant-term", Some(0), big_a[0] == a0, format!("A_0 = {}, a^r - b^r = {a0}", big_a[0]));

    let phi = phi_r(r, a, b);
    let lin_ok = big_a[1] == &rb * &phi;
    push("linear-term", Some(1), lin_ok, format!("A_1 = {}, r phi = {}", big_a[1], &rb * &phi));
    let target = &rb * big_pow(a, r - 1);
    push(
        "phi-congruence",
        Some(1),
        modr2(&phi) == modr2(&target),
        format!("phi = {phi} = {} mod r^2, r a^(r-1) = {} mod r^2", modr2(&phi), modr2(&target)),
    );

    let per_j: Vec<(u64, bool, bool)> = (1..r)
        .into_par_iter()
        .map(|j| {
            let want = big_pow(a, r - j) * &alpha[j as usize];
            let matches = modr2(&big_a[j as usize]) == modr2(&want);
            let vanish = if j > 1 && j < mid {
                (&alpha[j as usize] % &r2).is_zero()
            } else if j > mid {
                (&big_a[j as usize] % &rb).is_zero()
            } else {
                true
            };
            (j, matches, vanish)
        })
        .collect();
    for (j, matches, vanish) in per_j {
        push(
            "shifted-vs-chebyshev",
            Some(j),
            matches,
            format!("A_{j} = a^{} alpha_{j} mod r^2", r - j),
        );
        if j > 1 && j < mid {
            push("alpha-vanishes-mod-r2", Some(j), vanish, format!("alpha_{j} = {}", alpha[j as usize]));
        } else if j > mid {
            push("upper-divisible-by-r", Some(j), vanish, format!("A_{j} = {}", big_a[j as usize]));
        }
    }

    let central = binomial((3 * r - 1) / 2, mid);
    push(
        "middle-binomial",
        Some(mid),
        alpha[mid as usize] == central && modr2(&central) == BigInt::from(2 * r),
        format!("alpha_mid = {}, binom = {central} = {} mod r^2", alpha[mid as usize], modr2(&central)),
    );
    push("leading-term", Some(r), big_a[r as usize].is_one(), format!("A_r = {}", big_a[r as usize]));

    Ok(CongruenceReport { r, shifted_coeffs: big_a, alpha, checks })
}

/// v_q(a^r + b^r) = 0 mod p.
pub fn finiteness_check(r: u64, a: &BigInt, b: &BigInt, p: u64, q: u64) -> Result<bool> {
    validate_pair(r, a, b)?;
    if (2 * r) % q == 0 {
        return Err(FreyError::OutOfScopePrime { q, detail: format!("q divides 2r = {}", 2 * r) });
    }
    let u = big_pow(a, r) + big_pow(b, r);
    Ok(valuation(&u, q).expect("nonzero") as u64 % p == 0)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum IrredVerdict {
    IrreducibleAllOddP { criterion: String },
    Conditional,
    Inconclusive { reason: String },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IrredReport {
    pub verdict: IrredVerdict,
    pub f2: u64,
    /// (2^{f2} - 1)(r - 1)
    pub m: u64,
    pub candidate_primes: Vec<u64>,
    /// Composite parts of the unit-norm gcds that could not be factored.
    pub unfactored: Vec<String>,
    pub regulator: Option<f64>,
    pub unchecked_assumptions: Vec<String>,
}

fn verify_units(field: &CycloRealField, units: &[KElement]) -> Result<f64> {
    let g = field.g;
    if units.len() != g - 1 {
        return Err(FreyError::InvalidUnit(format!("expected {} units, got {}", g - 1, units.len())));
    }
    for (i, e) in units.iter().enumerate() {
        if e.num.len() != g {
            return Err(FreyError::InvalidUnit(format!("unit {i} has {} coordinates, need {g}", e.num.len())));
        }
        if !e.is_integral_coords() {
            return Err(FreyError::InvalidUnit(format!("unit {i} is not integral")));
        }
        let n = field.norm(e);
        if !(n.is_one() || (-n).is_one()) {
            return Err(FreyError::InvalidUnit(format!("unit {i} has norm {}", field.norm(e))));
        }
    }
    // regulator from the first g - 1 real embeddings
    let emb = field.omega_embeddings();
    let mut m: Vec<Vec<f64>> = units
        .iter()
        .map(|e| emb[..g - 1].iter().map(|&w| e.embed_f64(w).abs().ln()).collect())
        .collect();
    let mut det = 1.0;
    let n = g - 1;
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&x, &y| m[x][col].abs().total_cmp(&m[y][col].abs()))
            .unwrap();
        if m[piv][col].abs() < 1e-12 {
            det = 0.0;
            break;
        }
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        det *= m[col][col];
        for row in col + 1..n {
            let f = m[row][col] / m[col][col];
            for k in col..n {
                m[row][k] -= f * m[col][k];
            }
        }
    }
    let reg = det.abs();
    if reg < 1e-6 {
        return Err(FreyError::InvalidUnit(format!("units are dependent (regulator {reg:.3e})")));
    }
    Ok(reg)
}

pub fn irreducibility_report(r: u64, a: &BigInt, b: &BigInt, units: Option<&[KElement]>) -> Result<IrredReport> {
    validate_pair(r, a, b)?;
    let field = CycloRealField::new(r)?;
    let f2 = f2(r);
    let two_f = (1u64 << f2) - 1;
    let m = two_f * (r - 1);
    let parity = parity_holds(a, b);
    let mut rep = IrredReport {
        verdict: IrredVerdict::Conditional,
        f2,
        m,
        candidate_primes: Vec::new(),
        unfactored: Vec::new(),
        regulator: None,
        unchecked_assumptions: Vec::new(),
    };
    if parity && two_f % r != 0 {
        rep.verdict = IrredVerdict::IrreducibleAllOddP { criterion: "supercuspidal-at-2".into() };
        return Ok(rep);
    }
    let r_divides_sum = ((a + b) % r).is_zero();
    if r % 4 != 1 && !r_divides_sum {
        rep.verdict = IrredVerdict::IrreducibleAllOddP { criterion: "supercuspidal-at-r".into() };
        return Ok(rep);
    }
    let g = field.g as u64;
    let Some(units) = units else {
        rep.verdict = IrredVerdict::Inconclusive { reason: "no units supplied".into() };
        return Ok(rep);
    };
    if !is_prime(g) || g == 2 || !parity {
        rep.verdict = IrredVerdict::Inconclusive {
            reason: "unit-norm criterion needs g an odd prime and the parity condition".into(),
        };
        return Ok(rep);
    }
    rep.regulator = Some(verify_units(&field, units)?);
    let k = field.field();
    let mut cands = std::collections::BTreeSet::new();
    for s in 1..=g / 2 {
        let mut gcd = BigInt::zero();
        for e in units {
            let t = k.sub(&k.pow(e, 2 * m * s), &k.one());
            gcd = gcd.gcd(&k.norm_int(&t));
        }
        if gcd.is_zero() {
            continue;
        }
        let fact = factor_bounded(&gcd, 1 << 16);
        if !fact.is_complete() {
            rep.unfactored.push(fact.cofactor.to_string());
        }
        for p in fact.primes.keys() {
            let pm = big_mod_u64(p, r);
            if (pm == 1 || pm == r - 1) && p.to_u64().is_some() {
                cands.insert(p.to_u64().unwrap());
            }
        }
    }
    rep.candidate_primes = cands.into_iter().collect();
    rep.unchecked_assumptions = vec![
        "ray class number divisibility h_{2m} / h_m (not evaluated)".into(),
        "ray class conditions on the candidate primes (not evaluated)".into(),
    ];
    Ok(rep)
}
