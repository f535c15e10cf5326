//! Synthetic newform fixtures with a planted trace congruence, and
//! re-coordinatized or Hecke-conjugated copies of a fixture.

use super::bounds::TraceStore;
use super::fixture::{validate, EigenvalueEntry, FieldElement, FixtureFlags, NewformFixture};
use super::refined::{refined_eliminate, Acceptance, RefinedConfig};
use crate::cyclofield::{dickson, CycloRealField, KElement};
use crate::error::{FreyError, Result};
use crate::frobenius::trace_set_class;
use crate::localdata::SerreLevel;
use crate::numfield::{NfElem, NumberField};
use crate::poly::IntPoly;
use crate::zmodp;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// F(theta) = h(theta^e + c), a field of degree e g containing K via
/// omega = theta^e + c.
pub fn extension_minpoly(k: &CycloRealField, e: u32, c: i64) -> IntPoly {
    let inner = IntPoly::monomial(BigInt::one(), e as usize).add(&IntPoly::constant(BigInt::from(c)));
    k.h().compose(&inner)
}

#[derive(Clone, Debug)]
pub struct PlantSpec {
    pub r: u64,
    pub e: u32,
    pub c: i64,
    pub level: SerreLevel,
    /// auxiliary prime carrying the eigenvalues
    pub q: u64,
    /// the prime whose residue congruence is planted
    pub p: u64,
    /// residue class whose trace is planted
    pub class: (u64, u64),
    pub seed: u64,
    /// range of the perturbation coefficients
    pub spread: i64,
    /// search until refined elimination accepts only the planted pair
    pub require_unique: bool,
    pub max_tries: usize,
}

#[derive(Clone, Debug)]
pub struct PlantedFixture {
    pub fixture: NewformFixture,
    /// root of the minimal polynomial mod p naming the planted prime
    pub planted_root: u64,
    /// index of that root among the sorted roots
    pub planted_j: usize,
    /// index of the matching root of h mod p
    pub planted_i: usize,
    pub trace: KElement,
    pub tries: usize,
}

/// Eigenvalues a_k = (trace at label k) + (theta - t) c_k: congruent to the
/// planted traces modulo the prime (p, theta - t) and to nothing in K.
pub fn plant(spec: &PlantSpec, store: &TraceStore) -> Result<PlantedFixture> {
    let k = CycloRealField::new(spec.r)?;
    let fpoly = extension_minpoly(&k, spec.e, spec.c);
    let kg = NumberField::new(fpoly.clone());
    let theta = kg.gen();
    let omega = kg.add(&kg.pow(&theta, spec.e as u64), &kg.from_int(BigInt::from(spec.c)));
    let p = spec.p;
    let rho = zmodp::roots(&fpoly.reduce_mod(p), p);
    if rho.len() != kg.degree {
        return Err(FreyError::Precondition(format!("p = {p} is not totally split in the planted field")));
    }
    let t1 = rho[0];
    let omega_roots = zmodp::roots(&k.h().reduce_mod(p), p);
    let w1 = kg.reduce_at_root(&omega, p, t1)?;
    let planted_i = omega_roots.iter().position(|&o| o == w1).expect("omega maps to a root of h");

    let ts = trace_set_class(&k, spec.class.0, spec.class.1, spec.q)?;
    let mut pow = vec![kg.one()];
    for _ in 1..k.g {
        let nx = kg.mul(pow.last().unwrap(), &omega);
        pow.push(nx);
    }
    let embed = |u: &KElement| -> NfElem {
        let mut acc = kg.zero();
        for (c, w) in u.num.iter().zip(&pow) {
            acc = kg.add(&acc, &kg.scale(w, &BigRational::from_integer(c.clone())));
        }
        kg.scale(&acc, &BigRational::new(BigInt::one(), u.den.clone()))
    };
    let shift = kg.sub(&theta, &kg.from_int(BigInt::from(t1)));
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let base = NewformFixture {
        label: format!("planted-r{}-e{}-q{}-p{}", spec.r, spec.e, spec.q, p),
        level: spec.level.clone(),
        field_minpoly: fpoly.coeffs.clone(),
        omega_embedding: FieldElement::from_nf(&omega),
        eigenvalues: Vec::new(),
        flags: FixtureFlags::default(),
        subfield_eg: None,
    };
    let refined_cfg = RefinedConfig::default();
    for attempt in 1..=spec.max_tries {
        let mut fx = base.clone();
        for lt in &ts.prime_assignment {
            let mut ck = 0i64;
            while ck == 0 {
                ck = rng.gen_range(-spec.spread..=spec.spread);
            }
            let a = kg.add(&embed(&lt.value), &kg.scale(&shift, &BigRational::from_integer(BigInt::from(ck))));
            fx.eigenvalues.push(EigenvalueEntry { q: spec.q, label: lt.label.factor.clone(), value: FieldElement::from_nf(&a) });
        }
        if !spec.require_unique {
            return Ok(PlantedFixture {
                fixture: fx,
                planted_root: t1,
                planted_j: 0,
                planted_i,
                trace: ts.prime_assignment[0].value.clone(),
                tries: attempt,
            });
        }
        let nf = validate(fx.clone())?;
        let rep = refined_eliminate(&nf, p, spec.q, &refined_cfg, store)?;
        let only_planted = rep.pairs.iter().all(|pr| match &pr.accepted {
            None => pr.j != 0,
            Some(Acceptance::Class { .. }) => pr.j == 0,
            Some(Acceptance::Multiplicative) => false,
        });
        if only_planted {
            return Ok(PlantedFixture {
                fixture: fx,
                planted_root: t1,
                planted_j: 0,
                planted_i,
                trace: ts.prime_assignment[0].value.clone(),
                tries: attempt,
            });
        }
    }
    Err(FreyError::Unsupported(format!("no planted fixture found in {} tries", spec.max_tries)))
}

/// Substitute a polynomial in a new generator for the old one.
fn recoordinatize(kg_new: &NumberField, x: &FieldElement, old_gen: &NfElem) -> FieldElement {
    let v = NfElem { num: x.coeffs.clone(), den: x.den.clone() };
    FieldElement::from_nf(&kg_new.map_from(&v, old_gen))
}

/// The same fixture over the generator theta' = s theta + t, s = +-1.
pub fn rebase(fx: &NewformFixture, s: i64, t: i64) -> Result<NewformFixture> {
    if s != 1 && s != -1 {
        return Err(FreyError::invalid("rebase needs s = 1 or -1"));
    }
    let f = IntPoly::new(fx.field_minpoly.clone());
    let n = f.degree() as usize;
    // theta = s (theta' - t)
    let sub = IntPoly::new(vec![BigInt::from(-s * t), BigInt::from(s)]);
    let mut fnew = f.compose(&sub);
    if s == -1 && n % 2 == 1 {
        fnew = fnew.neg();
    }
    let kg_new = NumberField::new(fnew.clone());
    let old_gen = kg_new.from_poly(&sub);
    let mut out = fx.clone();
    out.label = format!("{}-rebased({s},{t})", fx.label);
    out.field_minpoly = fnew.coeffs;
    out.omega_embedding = recoordinatize(&kg_new, &fx.omega_embedding, &old_gen);
    for e in out.eigenvalues.iter_mut() {
        e.value = recoordinatize(&kg_new, &e.value, &old_gen);
    }
    if out.subfield_eg.is_some() {
        return Err(FreyError::Unsupported("rebasing a fixture with subfield data".into()));
    }
    Ok(out)
}

/// A Hecke conjugate: identical eigenvalue coordinates, with K embedded
/// through sigma_j(omega) = D_j(omega_embedding).
pub fn conjugate_embedding(fx: &NewformFixture, j: u64) -> Result<NewformFixture> {
    let r = fx.level.r;
    let k = CycloRealField::new(r)?;
    let jn = crate::cyclofield::GaloisMap::new(j, r).j as usize;
    let kg = NumberField::new(IntPoly::new(fx.field_minpoly.clone()));
    let w = kg.from_poly_den(&IntPoly::new(fx.omega_embedding.coeffs.clone()), &fx.omega_embedding.den);
    let dj = kg.eval_poly(&dickson(jn), &w);
    if !kg.eval_poly(k.h(), &dj).is_zero() {
        return Err(FreyError::certificate("omega-embedding-root-of-h", "conjugated embedding is not a root of h"));
    }
    let mut out = fx.clone();
    out.label = format!("{}-conj{jn}", fx.label);
    out.omega_embedding = FieldElement::from_nf(&dj);
    Ok(out)
}
