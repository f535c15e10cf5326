//! Newform fixtures: eigenvalue data of a Hilbert newform over K, stored as
//! exact coordinates in a power basis of its coefficient field K_g.

use crate::arith::{decimal, is_prime, primes_up_to};
use crate::cyclofield::{CycloRealField, KElement};
use crate::error::{FreyError, Result};
use crate::localdata::SerreLevel;
use crate::numfield::{NfElem, NumberField};
use crate::poly::{gcd_z, IntPoly};
use crate::zmodp;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;

/// An element of a number field given by coordinates over its power basis
/// and a common denominator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldElement {
    #[serde(with = "decimal::vec")]
    pub coeffs: Vec<BigInt>,
    #[serde(with = "decimal")]
    pub den: BigInt,
}

impl FieldElement {
    pub fn from_nf(x: &NfElem) -> Self {
        let mut coeffs = x.num.clone();
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        FieldElement { coeffs, den: x.den.clone() }
    }

    fn to_nf(&self, field: &NumberField, what: &str) -> Result<NfElem> {
        if self.den.is_zero() {
            return Err(FreyError::certificate("nonzero-denominator", format!("{what} has denominator 0")));
        }
        if self.coeffs.len() > field.degree {
            return Err(FreyError::certificate(
                "coordinate-length",
                format!("{what} has {} coordinates, field degree is {}", self.coeffs.len(), field.degree),
            ));
        }
        Ok(field.from_poly_den(&IntPoly::new(self.coeffs.clone()), &self.den))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EigenvalueEntry {
    pub q: u64,
    /// monic factor of h mod q naming the prime of K
    pub label: Vec<u64>,
    pub value: FieldElement,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixtureFlags {
    pub cm: bool,
    #[serde(default)]
    pub base_change_subfield_degree: Option<u64>,
    /// accept field_minpoly as irreducible when no witness is found
    #[serde(default)]
    pub trust_irreducible: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubfieldEigenvalue {
    pub q: u64,
    pub value: FieldElement,
}

/// A subfield E_g of K_g with [E_g : Q] = [K_g : K], holding the eigenvalues
/// at inert primes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubfieldData {
    #[serde(with = "decimal::vec")]
    pub minpoly: Vec<BigInt>,
    /// image of the generator of E_g in K_g
    pub generator_image: FieldElement,
    /// the constituent is stable under Gal(K/Q)
    pub galois_stable: bool,
    pub eigenvalues: Vec<SubfieldEigenvalue>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NewformFixture {
    pub label: String,
    pub level: SerreLevel,
    #[serde(with = "decimal::vec")]
    pub field_minpoly: Vec<BigInt>,
    pub omega_embedding: FieldElement,
    pub eigenvalues: Vec<EigenvalueEntry>,
    pub flags: FixtureFlags,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subfield_eg: Option<SubfieldData>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "method")]
pub enum IrreducibilityCertificate {
    Linear,
    /// no nontrivial degree is compatible with the factorization patterns mod these primes
    DegreePatterns { primes: Vec<u64> },
    Trusted,
}

#[derive(Clone, Debug)]
pub struct ValidatedSubfield {
    pub field: NumberField,
    pub generator_image: NfElem,
    pub galois_stable: bool,
    pub values: BTreeMap<u64, NfElem>,
}

/// A fixture whose invariants have all been checked.
#[derive(Clone, Debug)]
pub struct Newform {
    pub fixture: NewformFixture,
    pub k: CycloRealField,
    pub kg: NumberField,
    pub omega: NfElem,
    omega_powers: Vec<NfElem>,
    eigen: BTreeMap<(u64, Vec<u64>), NfElem>,
    pub subfield: Option<ValidatedSubfield>,
    pub irreducibility: IrreducibilityCertificate,
}

impl Newform {
    pub fn r(&self) -> u64 {
        self.k.r
    }

    pub fn label(&self) -> &str {
        &self.fixture.label
    }

    /// Image of u in K_g under omega -> omega_embedding.
    pub fn embed(&self, u: &KElement) -> NfElem {
        let mut acc = self.kg.zero();
        for (c, w) in u.num.iter().zip(&self.omega_powers) {
            if !c.is_zero() {
                acc = self.kg.add(&acc, &self.kg.scale(w, &num_rational::BigRational::from_integer(c.clone())));
            }
        }
        let den = num_rational::BigRational::new(BigInt::one(), u.den.clone());
        self.kg.scale(&acc, &den)
    }

    pub fn eigenvalue(&self, q: u64, label: &[u64]) -> Result<&NfElem> {
        self.eigen
            .get(&(q, label.to_vec()))
            .ok_or_else(|| FreyError::MissingEigenvalue { q, label: format!("{label:?}") })
    }

    pub fn has_eigenvalues_at(&self, q: u64) -> bool {
        self.eigen.keys().any(|(qq, _)| *qq == q)
    }

    pub fn primes(&self) -> Vec<u64> {
        let mut qs: Vec<u64> = self.eigen.keys().map(|(q, _)| *q).collect();
        qs.dedup();
        qs
    }
}

fn monic_poly(coeffs: &[BigInt], invariant: &str, what: &str) -> Result<IntPoly> {
    let p = IntPoly::new(coeffs.to_vec());
    if p.degree() < 1 || !p.is_monic() {
        return Err(FreyError::certificate(invariant, format!("{what} must be monic of positive degree")));
    }
    Ok(p)
}

/// Possible degrees of a factor over Q given the factorization pattern mod p.
fn pattern_sums(f: &[u64], p: u64) -> Vec<bool> {
    let n = f.len() - 1;
    let mut reach = vec![false; n + 1];
    reach[0] = true;
    for (d, g) in zmodp::distinct_degree(f, p) {
        for _ in 0..(g.len() - 1) / d {
            for s in (d..=n).rev() {
                if reach[s - d] {
                    reach[s] = true;
                }
            }
        }
    }
    reach
}

/// Irreducibility over Q from factorization patterns modulo small primes: a
/// proper factor of degree d needs every pattern to contain a sub-multiset of
/// degree sum d.
pub fn irreducibility_witness(f: &IntPoly, prime_limit: u64) -> Option<Vec<u64>> {
    let n = f.degree() as usize;
    if n == 1 {
        return Some(Vec::new());
    }
    let mut possible = vec![true; n + 1];
    let mut used = Vec::new();
    for p in primes_up_to(prime_limit) {
        let fp = f.reduce_mod(p);
        if fp.len() != n + 1 || !zmodp::is_squarefree(&fp, p) {
            continue;
        }
        let sums = pattern_sums(&fp, p);
        let before = (1..n).filter(|&d| possible[d]).count();
        for d in 1..n {
            possible[d] &= sums[d];
        }
        if (1..n).filter(|&d| possible[d]).count() < before {
            used.push(p);
        }
        if (1..n).all(|d| !possible[d]) {
            return Some(used);
        }
    }
    None
}

const WITNESS_PRIME_LIMIT: u64 = 3000;

/// Check every invariant of a fixture.
pub fn validate(fixture: NewformFixture) -> Result<Newform> {
    let r = fixture.level.r;
    let k = CycloRealField::new(r).map_err(|e| FreyError::certificate("level-r-valid", e.to_string()))?;
    let g = k.g;
    let fpoly = monic_poly(&fixture.field_minpoly, "minpoly-monic", "field_minpoly")?;
    let n = fpoly.degree() as usize;
    if n % g != 0 {
        return Err(FreyError::certificate(
            "degree-divisible-by-g",
            format!("[K_g : Q] = {n} is not divisible by g = {g}"),
        ));
    }
    if gcd_z(&fpoly, &fpoly.derivative()).degree() > 0 {
        return Err(FreyError::certificate("minpoly-squarefree", "field_minpoly has a repeated factor"));
    }
    let irreducibility = match irreducibility_witness(&fpoly, WITNESS_PRIME_LIMIT) {
        Some(ps) if n == 1 => {
            let _ = ps;
            IrreducibilityCertificate::Linear
        }
        Some(primes) => IrreducibilityCertificate::DegreePatterns { primes },
        None if fixture.flags.trust_irreducible => IrreducibilityCertificate::Trusted,
        None => {
            return Err(FreyError::certificate(
                "minpoly-irreducible",
                format!("no irreducibility witness below {WITNESS_PRIME_LIMIT} and trust_irreducible is not set"),
            ))
        }
    };
    let kg = NumberField::new(fpoly);
    let omega = fixture.omega_embedding.to_nf(&kg, "omega_embedding")?;
    if !kg.eval_poly(k.h(), &omega).is_zero() {
        return Err(FreyError::certificate(
            "omega-embedding-root-of-h",
            "h(omega_embedding) is not 0 in K_g",
        ));
    }
    let mut omega_powers = vec![kg.one()];
    for _ in 1..g {
        let next = kg.mul(omega_powers.last().unwrap(), &omega);
        omega_powers.push(next);
    }

    let mut eigen = BTreeMap::new();
    for e in &fixture.eigenvalues {
        if !is_prime(e.q) || e.q == 2 || e.q == r {
            return Err(FreyError::certificate(
                "eigenvalue-prime",
                format!("eigenvalue key q = {} must be a prime not dividing 2r", e.q),
            ));
        }
        let sp = k.split_prime(e.q)?;
        if !sp.factors.contains(&e.label) {
            return Err(FreyError::certificate(
                "prime-label-canonical",
                format!("{:?} is not a monic irreducible factor of h mod {}", e.label, e.q),
            ));
        }
        let v = e.value.to_nf(&kg, &format!("eigenvalue at ({}, {:?})", e.q, e.label))?;
        if eigen.insert((e.q, e.label.clone()), v).is_some() {
            return Err(FreyError::certificate(
                "eigenvalue-unique",
                format!("two eigenvalues given for ({}, {:?})", e.q, e.label),
            ));
        }
    }

    let subfield = match &fixture.subfield_eg {
        None => None,
        Some(s) => {
            let ep = monic_poly(&s.minpoly, "subfield-minpoly-monic", "subfield minpoly")?;
            if ep.degree() as usize * g != n {
                return Err(FreyError::certificate(
                    "subfield-degree",
                    format!("[E_g : Q] = {} but [K_g : K] = {}", ep.degree(), n / g),
                ));
            }
            let ef = NumberField::new(ep.clone());
            let gen = s.generator_image.to_nf(&kg, "subfield generator image")?;
            if !kg.eval_poly(&ep, &gen).is_zero() {
                return Err(FreyError::certificate(
                    "subfield-embedding",
                    "the generator image is not a root of the subfield minpoly",
                ));
            }
            let mut values = BTreeMap::new();
            for sv in &s.eigenvalues {
                let sp = k.split_prime(sv.q)?;
                if sp.n_primes != 1 {
                    return Err(FreyError::certificate(
                        "subfield-inert-prime",
                        format!("subfield eigenvalue given at q = {} which is not inert in K", sv.q),
                    ));
                }
                let v = sv.value.to_nf(&ef, &format!("subfield eigenvalue at {}", sv.q))?;
                let image = kg.map_from(&v, &gen);
                match eigen.get(&(sv.q, sp.factors[0].clone())) {
                    Some(w) if *w == image => {}
                    _ => {
                        return Err(FreyError::certificate(
                            "subfield-eigenvalue-consistency",
                            format!("subfield eigenvalue at {} does not match the K_g eigenvalue", sv.q),
                        ))
                    }
                }
                values.insert(sv.q, v);
            }
            Some(ValidatedSubfield { field: ef, generator_image: gen, galois_stable: s.galois_stable, values })
        }
    };

    Ok(Newform { fixture, k, kg, omega, omega_powers, eigen, subfield, irreducibility })
}

/// Parse one fixture or an array of fixtures.
pub fn parse_fixtures(json: &str) -> Result<Vec<NewformFixture>> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum OneOrMany {
        Many(Vec<NewformFixture>),
        One(Box<NewformFixture>),
    }
    match serde_json::from_str::<OneOrMany>(json) {
        Ok(OneOrMany::Many(v)) => Ok(v),
        Ok(OneOrMany::One(f)) => Ok(vec![*f]),
        Err(_) => {
            // reparse as the single form for a precise message
            let err = serde_json::from_str::<NewformFixture>(json).err().map(|e| e.to_string()).unwrap_or_default();
            Err(FreyError::certificate("fixture-schema", err))
        }
    }
}

pub fn load_fixtures(path: &Path) -> Result<Vec<Newform>> {
    let text = std::fs::read_to_string(path).map_err(|e| FreyError::Io(format!("{}: {e}", path.display())))?;
    parse_fixtures(&text)?.into_iter().map(validate).collect()
}

pub fn save_fixtures(path: &Path, fixtures: &[NewformFixture]) -> Result<()> {
    let text = if fixtures.len() == 1 {
        serde_json::to_string_pretty(&fixtures[0])
    } else {
        serde_json::to_string_pretty(fixtures)
    }
    .map_err(|e| FreyError::Io(e.to_string()))?;
    std::fs::write(path, text + "\n").map_err(|e| FreyError::Io(format!("{}: {e}", path.display())))
}
