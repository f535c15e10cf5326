//! The divisibility bounds N, M and B for a newform against the trace sets of
//! the Frey Jacobians, and the survivor exponents they leave.

use super::fixture::Newform;
use crate::arith::{factor_bounded, is_prime, pow_mod};
use crate::cyclofield::{CycloRealField, GaloisMap, KElement, PrimeSplitting};
use crate::error::{FreyError, Result};
use crate::frobenius::{trace_set_class, TraceSet};
use crate::numfield::{NfElem, NumberField};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, RwLock};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TwistMode {
    Plain,
    ChiR,
}

/// Which trace comparison enters the per-class factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundVariant {
    /// sigma(u) - a
    Plain,
    /// sigma(u)^2 - a^2
    Squared,
    /// sigma(u) + a
    SignFlipped,
}

pub fn bound_variant(q_norm: u64, r: u64, twist: TwistMode) -> BoundVariant {
    if q_norm % 4 == 3 {
        BoundVariant::Squared
    } else if twist == TwistMode::ChiR && q_norm % r == r - 1 {
        BoundVariant::SignFlipped
    } else {
        BoundVariant::Plain
    }
}

/// Residue classes entering B.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassFilter {
    All,
    /// only classes with xy nonzero mod q
    NonTrivial,
}

/// The subset S of Gal(K/Q), as indices j of sigma_j: omega -> D_j(omega).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GaloisSubset {
    Full,
    Indices(Vec<u64>),
}

impl GaloisSubset {
    pub fn resolve(&self, k: &CycloRealField) -> Result<Vec<GaloisMap>> {
        match self {
            GaloisSubset::Full => Ok(k.galois_group()),
            GaloisSubset::Indices(ix) => {
                let mut out: Vec<GaloisMap> = Vec::new();
                for &j in ix {
                    if j == 0 || j >= k.r {
                        return Err(FreyError::invalid(format!("Galois index {j} is not in 1..{}", k.r - 1)));
                    }
                    let m = GaloisMap::new(j, k.r);
                    if !out.contains(&m) {
                        out.push(m);
                    }
                }
                if out.is_empty() {
                    return Err(FreyError::invalid("the Galois subset is empty"));
                }
                Ok(out)
            }
        }
    }
}

impl std::str::FromStr for GaloisSubset {
    type Err = FreyError;
    fn from_str(s: &str) -> Result<Self> {
        if s == "full" {
            return Ok(GaloisSubset::Full);
        }
        s.split(',')
            .map(|t| t.trim().parse::<u64>().map_err(|_| FreyError::invalid(format!("bad Galois index '{t}'"))))
            .collect::<Result<Vec<_>>>()
            .map(GaloisSubset::Indices)
    }
}

pub fn residue_classes(r: u64, q: u64, filter: ClassFilter) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for x in 0..q {
        for y in x..q {
            if (x, y) == (0, 0) || (pow_mod(x, r, q) + pow_mod(y, r, q)) % q == 0 {
                continue;
            }
            if filter == ClassFilter::NonTrivial && (x == 0 || y == 0) {
                continue;
            }
            out.push((x, y));
        }
    }
    out
}

fn legendre_symbol(a: u64, q: u64) -> i8 {
    if pow_mod(a % q, (q - 1) / 2, q) == 1 {
        1
    } else {
        -1
    }
}

/// (x, y) = lambda (x0, y0) with (x0, y0) = (1, t) or (0, 1).
fn projective_rep(x: u64, y: u64, q: u64) -> ((u64, u64), u64) {
    if x % q != 0 {
        let t = crate::arith::mul_mod(y, crate::arith::inv_mod(x, q), q);
        ((1, t), x % q)
    } else {
        ((0, 1), y % q)
    }
}

/// Trace-set elements shared across fixtures and residue classes. C_r at
/// lambda (x, y) is the quadratic twist by lambda of C_r at (x, y), so one
/// computation per projective class suffices.
#[derive(Default)]
pub struct TraceStore {
    sets: RwLock<HashMap<(u64, u64, u64, u64), Arc<TraceSet>>>,
}

impl TraceStore {
    pub fn new() -> Self {
        Self::default()
    }

    fn base(&self, k: &CycloRealField, rep: (u64, u64), q: u64) -> Result<Arc<TraceSet>> {
        let key = (k.r, q, rep.0, rep.1);
        if let Some(ts) = self.sets.read().expect("trace store poisoned").get(&key) {
            return Ok(ts.clone());
        }
        let ts = Arc::new(trace_set_class(k, rep.0, rep.1, q)?);
        self.sets.write().expect("trace store poisoned").insert(key, ts.clone());
        Ok(ts)
    }

    /// The sign s with T_q(x, y) = s T_q(rep).
    fn sign(f: usize, lambda: u64, q: u64) -> i8 {
        if f % 2 == 0 {
            1
        } else {
            legendre_symbol(lambda, q)
        }
    }

    /// Elements of T_q(x, y).
    pub fn elements(&self, k: &CycloRealField, x: u64, y: u64, q: u64) -> Result<Vec<KElement>> {
        let (rep, lambda) = projective_rep(x, y, q);
        let ts = self.base(k, rep, q)?;
        Ok(if Self::sign(ts.f, lambda, q) == 1 {
            ts.elements.clone()
        } else {
            ts.elements.iter().map(|u| k.field().neg(u)).collect()
        })
    }

    pub fn len(&self) -> usize {
        self.sets.read().expect("trace store poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Where the norms are taken.
enum NormField<'a> {
    Full,
    /// inert q with a Galois-stable constituent that is not a base change
    Subfield { field: &'a NumberField, value: &'a NfElem },
}

fn norm_field<'a>(nf: &'a Newform, q: u64, sp: &PrimeSplitting) -> NormField<'a> {
    match &nf.subfield {
        Some(s) if sp.n_primes == 1 && s.galois_stable && nf.fixture.flags.base_change_subfield_degree.is_none() => {
            match s.values.get(&q) {
                Some(v) => NormField::Subfield { field: &s.field, value: v },
                None => NormField::Full,
            }
        }
        _ => NormField::Full,
    }
}

fn combine(field: &NumberField, s: &NfElem, a: &NfElem, variant: BoundVariant) -> NfElem {
    match variant {
        BoundVariant::Plain => field.sub(s, a),
        BoundVariant::SignFlipped => field.add(s, a),
        BoundVariant::Squared => field.sub(&field.mul(s, s), &field.mul(a, a)),
    }
}

fn abs_norm(field: &NumberField, x: &NfElem) -> BigInt {
    let n = field.norm(x);
    if !n.is_integer() {
        // eigenvalues with denominators: keep the numerator, which is what a
        // prime of good reduction can divide
        return n.numer().abs();
    }
    n.to_integer().abs()
}

/// Context for one (newform, q, S).
struct Setup<'a> {
    nf: &'a Newform,
    q: u64,
    sp: PrimeSplitting,
    subset: Vec<GaloisMap>,
    /// eigenvalue at sigma(q_0) for each sigma in S
    targets: Vec<&'a NfElem>,
}

impl<'a> Setup<'a> {
    fn new(nf: &'a Newform, q: u64, subset: &GaloisSubset) -> Result<Self> {
        Self::at(nf, q, 0, subset)
    }

    fn at(nf: &'a Newform, q: u64, base: usize, subset: &GaloisSubset) -> Result<Self> {
        if !is_prime(q) || q == 2 || q == nf.r() {
            return Err(FreyError::Precondition(format!("q = {q} must be a prime not dividing 2r")));
        }
        let sp = nf.k.split_prime(q)?;
        let subset = subset.resolve(&nf.k)?;
        let labels = sp.labels();
        if base >= labels.len() {
            return Err(FreyError::invalid(format!("no prime label {base} above {q}")));
        }
        let mut targets = Vec::with_capacity(subset.len());
        for &s in &subset {
            let t = nf.k.label_image(s, &sp, base)?;
            targets.push(nf.eigenvalue(q, &labels[t].factor)?);
        }
        Ok(Setup { nf, q, sp, subset, targets })
    }

    fn gcd_norms(&self, u: &KElement, variant: BoundVariant) -> BigInt {
        match norm_field(self.nf, self.q, &self.sp) {
            NormField::Subfield { field, value } => {
                let s = field.from_rational(&u.as_rational().expect("inert trace is rational"));
                abs_norm(field, &combine(field, &s, value, variant))
            }
            NormField::Full => {
                let kg = &self.nf.kg;
                let mut acc = BigInt::zero();
                for (s, a) in self.subset.iter().zip(&self.targets) {
                    let su = self.nf.embed(&self.nf.k.galois_apply(*s, u));
                    acc = acc.gcd(&abs_norm(kg, &combine(kg, &su, a, variant)));
                    if acc.is_one() {
                        break;
                    }
                }
                acc
            }
        }
    }

    fn class_factor(&self, elements: &[KElement], variant: BoundVariant) -> BigInt {
        let mut acc = BigInt::one();
        for u in elements {
            acc *= self.gcd_norms(u, variant);
            if acc.is_zero() {
                break;
            }
        }
        acc
    }

    fn m(&self) -> BigInt {
        let kg = &self.nf.kg;
        let q1 = kg.from_int(BigInt::from(self.sp.norm() + 1));
        let q1sq = kg.mul(&q1, &q1);
        self.targets
            .iter()
            .fold(BigInt::zero(), |acc, a| acc.gcd(&abs_norm(kg, &kg.sub(&kg.mul(a, a), &q1sq))))
    }
}

/// N_{q,S} = prod_{u in T} gcd_{sigma in S} |Norm(sigma(u) - a_{sigma q})|.
pub fn bound_n(nf: &Newform, q: u64, subset: &GaloisSubset, ts: &TraceSet) -> Result<BigInt> {
    let setup = Setup::new(nf, q, subset)?;
    if ts.q != q || ts.r != nf.r() {
        return Err(FreyError::Precondition("trace set does not belong to this r and q".into()));
    }
    Ok(setup.class_factor(&ts.elements, BoundVariant::Plain))
}

/// N with the prime labelled `base` in place of label 0.
pub fn bound_n_at(nf: &Newform, q: u64, base: usize, subset: &GaloisSubset, ts: &TraceSet) -> Result<BigInt> {
    let setup = Setup::at(nf, q, base, subset)?;
    if ts.q != q || ts.r != nf.r() {
        return Err(FreyError::Precondition("trace set does not belong to this r and q".into()));
    }
    Ok(setup.class_factor(&ts.elements, BoundVariant::Plain))
}

/// M_{q,S} = gcd_{sigma in S} |Norm(a_{sigma q}^2 - (Q+1)^2)|.
pub fn bound_m(nf: &Newform, q: u64, subset: &GaloisSubset) -> Result<BigInt> {
    Ok(Setup::new(nf, q, subset)?.m())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QBound {
    pub q: u64,
    pub f: usize,
    pub norm: u64,
    pub variant: BoundVariant,
    pub class_filter: ClassFilter,
    pub classes: usize,
    #[serde(with = "crate::arith::decimal")]
    pub m: BigInt,
    #[serde(with = "crate::arith::decimal")]
    pub b: BigInt,
    /// classes whose factor vanished
    pub zero_classes: Vec<(u64, u64)>,
    /// the distinct nonzero factors whose product (with multiplicity) is B
    #[serde(with = "crate::arith::decimal::vec")]
    pub factors: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundConfig {
    pub subset: GaloisSubset,
    pub twist: TwistMode,
    #[serde(with = "crate::arith::decimal")]
    pub d: BigInt,
    pub class_filter: ClassFilter,
}

impl Default for BoundConfig {
    fn default() -> Self {
        BoundConfig {
            subset: GaloisSubset::Full,
            twist: TwistMode::Plain,
            d: BigInt::one(),
            class_filter: ClassFilter::All,
        }
    }
}

fn check_q(nf: &Newform, q: u64, d: &BigInt) -> Result<()> {
    if !is_prime(q) || q == 2 || q == nf.r() || (d % q).is_zero() {
        return Err(FreyError::Precondition(format!("q = {q} must be a prime not dividing 2rd")));
    }
    Ok(())
}

/// B_{q,S} = M_{q,S} times the per-class factors over 0 <= x <= y < q with q not
/// dividing x^r + y^r.
pub fn bound_b(nf: &Newform, q: u64, cfg: &BoundConfig, store: &TraceStore) -> Result<QBound> {
    check_q(nf, q, &cfg.d)?;
    let setup = Setup::new(nf, q, &cfg.subset)?;
    let k = &nf.k;
    let variant = bound_variant(setup.sp.norm(), k.r, cfg.twist);
    let classes = residue_classes(k.r, q, cfg.class_filter);

    // one factor per projective class and sign
    let mut keys: BTreeSet<((u64, u64), i8)> = BTreeSet::new();
    let mut class_keys = Vec::with_capacity(classes.len());
    for &(x, y) in &classes {
        let (rep, lambda) = projective_rep(x, y, q);
        let s = if variant == BoundVariant::Squared { 1 } else { TraceStore::sign(setup.sp.f, lambda, q) };
        keys.insert((rep, s));
        class_keys.push((rep, s));
    }
    let keys: Vec<_> = keys.into_iter().collect();
    let factors: Vec<BigInt> = keys
        .par_iter()
        .map(|&(rep, s)| {
            let base = store.base(k, rep, q)?;
            let elems: Vec<KElement> = if s == 1 {
                base.elements.clone()
            } else {
                base.elements.iter().map(|u| k.field().neg(u)).collect()
            };
            Ok(setup.class_factor(&elems, variant))
        })
        .collect::<Result<_>>()?;
    let table: BTreeMap<_, _> = keys.into_iter().zip(factors).collect();

    let m = setup.m();
    let mut b = m.clone();
    let mut zero_classes = Vec::new();
    let mut distinct: BTreeSet<BigInt> = BTreeSet::new();
    if !m.is_zero() {
        distinct.insert(m.clone());
    }
    for (c, key) in classes.iter().zip(&class_keys) {
        let v = &table[key];
        if v.is_zero() {
            zero_classes.push(*c);
        } else {
            distinct.insert(v.clone());
        }
        b *= v;
    }
    Ok(QBound {
        q,
        f: setup.sp.f,
        norm: setup.sp.norm(),
        variant,
        class_filter: cfg.class_filter,
        classes: classes.len(),
        m,
        b,
        zero_classes,
        factors: distinct.into_iter().filter(|x| !x.is_one()).collect(),
    })
}

/// Per ordered pair (x, y) in [0, q)^2 the class factor, each trace set
/// counted from scratch. Independent of the store and of the interchange law.
pub fn class_factors_direct(
    nf: &Newform,
    q: u64,
    cfg: &BoundConfig,
) -> Result<BTreeMap<(u64, u64), BigInt>> {
    check_q(nf, q, &cfg.d)?;
    let setup = Setup::new(nf, q, &cfg.subset)?;
    let r = nf.r();
    let variant = bound_variant(setup.sp.norm(), r, cfg.twist);
    let mut pairs = Vec::new();
    for x in 0..q {
        for y in 0..q {
            if (x, y) == (0, 0) || (pow_mod(x, r, q) + pow_mod(y, r, q)) % q == 0 {
                continue;
            }
            if cfg.class_filter == ClassFilter::NonTrivial && (x == 0 || y == 0) {
                continue;
            }
            pairs.push((x, y));
        }
    }
    pairs
        .into_par_iter()
        .map(|(x, y)| {
            let ts = trace_set_class(&nf.k, x, y, q)?;
            Ok(((x, y), setup.class_factor(&ts.elements, variant)))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum SurvivorSet {
    /// every bound vanished
    All,
    Primes {
        #[serde(with = "crate::arith::decimal::vec")]
        primes: Vec<BigInt>,
        /// parts of the bound that resisted factorization and divide every bound
        #[serde(with = "crate::arith::decimal::vec")]
        unfactored: Vec<BigInt>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixtureSurvivors {
    pub label: String,
    pub bounds: Vec<QBound>,
    pub survivors: SurvivorSet,
    /// survivors outside the excluded set
    #[serde(with = "crate::arith::decimal::vec")]
    pub surviving: Vec<BigInt>,
    /// survivors ruled out only by results outside this computation
    #[serde(with = "crate::arith::decimal::vec")]
    pub excluded_by_external: Vec<BigInt>,
    pub cm_obstruction: bool,
    pub eliminated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub r: u64,
    pub q_list: Vec<u64>,
    pub config: BoundConfig,
    pub excluded_primes: Vec<u64>,
    pub fixtures: Vec<FixtureSurvivors>,
}

/// Default trial-division bound for factoring bound values.
pub const TRIAL_BOUND: u64 = 100_000;

/// Primes dividing B_q for every q with B_q nonzero.
pub fn survivor_set(bounds: &[QBound]) -> SurvivorSet {
    let nonzero: Vec<&QBound> = bounds.iter().filter(|b| !b.b.is_zero()).collect();
    let Some(first) = nonzero.first() else {
        return SurvivorSet::All;
    };
    let mut candidates: BTreeSet<BigInt> = BTreeSet::new();
    let mut cofactors: Vec<BigInt> = Vec::new();
    for fac in &first.factors {
        let pf = factor_bounded(fac, TRIAL_BOUND);
        candidates.extend(pf.primes.into_keys());
        if !pf.cofactor.is_one() {
            cofactors.push(pf.cofactor);
        }
    }
    let primes = candidates
        .into_iter()
        .filter(|p| nonzero.iter().all(|b| (&b.b % p).is_zero()))
        .collect();
    let unfactored = cofactors
        .into_iter()
        .map(|c| nonzero.iter().fold(c, |acc, b| acc.gcd(&b.b)))
        .filter(|c| !c.is_one())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    SurvivorSet::Primes { primes, unfactored }
}

pub fn survivors(
    fixtures: &[Newform],
    q_list: &[u64],
    cfg: &BoundConfig,
    excluded: &[u64],
    store: &TraceStore,
) -> Result<BoundReport> {
    let r = fixtures.first().map(|f| f.r()).unwrap_or(0);
    if fixtures.iter().any(|f| f.r() != r) {
        return Err(FreyError::invalid("all fixtures in one run must share r"));
    }
    let mut out = Vec::with_capacity(fixtures.len());
    for nf in fixtures {
        let bounds = q_list.iter().map(|&q| bound_b(nf, q, cfg, store)).collect::<Result<Vec<_>>>()?;
        let set = survivor_set(&bounds);
        let (surviving, external, eliminated) = match &set {
            SurvivorSet::All => (Vec::new(), Vec::new(), false),
            SurvivorSet::Primes { primes, unfactored } => {
                let (ext, surv): (Vec<BigInt>, Vec<BigInt>) =
                    primes.iter().cloned().partition(|p| excluded.iter().any(|e| BigInt::from(*e) == *p));
                let elim = surv.is_empty() && unfactored.is_empty();
                (surv, ext, elim)
            }
        };
        out.push(FixtureSurvivors {
            label: nf.label().to_string(),
            cm_obstruction: nf.fixture.flags.cm && set == SurvivorSet::All,
            bounds,
            survivors: set,
            surviving,
            excluded_by_external: external,
            eliminated,
        });
    }
    Ok(BoundReport {
        r,
        q_list: q_list.to_vec(),
        config: cfg.clone(),
        excluded_primes: excluded.to_vec(),
        fixtures: out,
    })
}
