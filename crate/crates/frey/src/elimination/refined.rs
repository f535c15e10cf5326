//! Refined elimination: for p totally split in K_g, test the trace congruence
//! residue map by residue map instead of through norms.

use super::bounds::{residue_classes, ClassFilter, TraceStore};
use super::fixture::Newform;
use crate::arith::{is_prime, mul_mod, sub_mod};
use crate::cyclofield::{KElement, PrimeLabel};
use crate::error::{FreyError, Result};
use crate::zmodp;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseMode {
    /// discard g only
    Plain,
    /// discard g and its twist by chi_r together
    BothTwists,
    /// discard the twist of g by chi_r
    ChiR,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Comparison {
    /// sigma(u) = a
    Exact,
    /// sigma(u)^2 = a^2
    Squares,
    /// sigma(u) = -a
    Negated,
}

pub fn comparison(case: CaseMode, q_norm: u64, r: u64) -> Comparison {
    let one_mod_4 = q_norm % 4 == 1;
    let one_mod_r = q_norm % r == 1;
    match case {
        CaseMode::Plain if one_mod_4 => Comparison::Exact,
        CaseMode::Plain => Comparison::Squares,
        CaseMode::BothTwists if one_mod_4 && one_mod_r => Comparison::Exact,
        CaseMode::BothTwists => Comparison::Squares,
        CaseMode::ChiR if one_mod_4 && one_mod_r => Comparison::Exact,
        CaseMode::ChiR if !one_mod_4 => Comparison::Squares,
        CaseMode::ChiR => Comparison::Negated,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Acceptance {
    /// the level-raising congruence holds at every prime above q, so
    /// multiplicative reduction at q is not excluded
    Multiplicative,
    /// the congruence holds for every sigma at this class and trace
    Class { x: u64, y: u64, trace: KElement },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Rejection {
    /// label above q where the level-raising congruence fails (screen only)
    pub multiplicative_witness: Option<PrimeLabel>,
    pub classes_checked: usize,
    /// first class tested with the sigma and label at which it failed
    pub sample: Option<(u64, u64, u64, PrimeLabel)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResiduePair {
    /// index of the root of h mod p
    pub i: usize,
    /// index of the root of the K_g minimal polynomial mod p
    pub j: usize,
    pub omega_residue: u64,
    pub generator_residue: u64,
    pub accepted: Option<Acceptance>,
    pub rejected: Option<Rejection>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// every residue pair is ruled out: p is eliminated for this newform
    Reject,
    Accept,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RefinedReport {
    pub label: String,
    pub p: u64,
    pub q: u64,
    pub q_norm: u64,
    pub case_mode: CaseMode,
    pub comparison: Comparison,
    pub multiplicative_screen: bool,
    pub pairs: Vec<ResiduePair>,
    pub verdict: Verdict,
}

impl RefinedReport {
    pub fn accepted_pairs(&self) -> Vec<(usize, usize)> {
        self.pairs.iter().filter(|p| p.accepted.is_some()).map(|p| (p.i, p.j)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefinedConfig {
    pub case_mode: CaseMode,
    pub multiplicative_screen: bool,
    #[serde(with = "crate::arith::decimal")]
    pub d: BigInt,
}

impl Default for RefinedConfig {
    fn default() -> Self {
        RefinedConfig { case_mode: CaseMode::Plain, multiplicative_screen: true, d: BigInt::one() }
    }
}

/// Roots of the minimal polynomial of K_g mod p when p is totally split.
pub fn total_split_roots(nf: &Newform, p: u64) -> Result<Vec<u64>> {
    let fp = nf.kg.minpoly.reduce_mod(p);
    let n = nf.kg.degree;
    let roots = if fp.len() == n + 1 && zmodp::is_squarefree(&fp, p) { zmodp::roots(&fp, p) } else { Vec::new() };
    if roots.len() != n {
        return Err(FreyError::Unsupported(format!("p = {p} is not totally split in K_g")));
    }
    Ok(roots)
}

pub fn refined_eliminate(
    nf: &Newform,
    p: u64,
    q: u64,
    cfg: &RefinedConfig,
    store: &TraceStore,
) -> Result<RefinedReport> {
    let k = &nf.k;
    let r = k.r;
    if !is_prime(p) || p == 2 || p == r || p == q || (&cfg.d % p).is_zero() {
        return Err(FreyError::Precondition(format!("p = {p} must be a prime not dividing 2rdq")));
    }
    if !is_prime(q) || q == 2 || q == r || (&cfg.d % q).is_zero() {
        return Err(FreyError::Precondition(format!("q = {q} must be a prime not dividing 2rd")));
    }
    let rho = total_split_roots(nf, p)?;
    let omega_roots = zmodp::roots(&k.h().reduce_mod(p), p);
    let pairing: Vec<(usize, u64)> = rho
        .iter()
        .enumerate()
        .map(|(_, &rj)| {
            let w = nf.kg.reduce_at_root(&nf.omega, p, rj)?;
            match omega_roots.iter().position(|&o| o == w) {
                Some(i) => Ok((i, w)),
                None => Err(FreyError::certificate(
                    "residue-pairing",
                    format!("omega_embedding at the root {rj} of the K_g minimal polynomial mod {p} is {w}, not a root of h"),
                )),
            }
        })
        .collect::<Result<_>>()?;

    let sp = k.split_prime(q)?;
    let labels = sp.labels();
    let q_norm = sp.norm();
    let cmp = comparison(cfg.case_mode, q_norm, r);
    let group = k.galois_group();
    // label of sigma(q_0) for each sigma
    let images: Vec<usize> = group.iter().map(|&s| k.label_image(s, &sp, 0)).collect::<Result<_>>()?;
    // eigenvalues at every label, reduced at every root
    let mut eig = vec![vec![0u64; labels.len()]; rho.len()];
    for (li, l) in labels.iter().enumerate() {
        let a = nf.eigenvalue(q, &l.factor)?;
        for (j, &rj) in rho.iter().enumerate() {
            eig[j][li] = nf.kg.reduce_at_root(a, p, rj)?;
        }
    }

    // residues of sigma(u) at each omega root, per class
    let classes = residue_classes(r, q, ClassFilter::All);
    let mut class_data: Vec<(u64, u64, Vec<(KElement, Vec<Vec<u64>>)>)> = Vec::with_capacity(classes.len());
    for &(x, y) in &classes {
        let elems = store.elements(k, x, y, q)?;
        let mut per_u = Vec::with_capacity(elems.len());
        for u in elems {
            let conj: Vec<KElement> = group.iter().map(|&s| k.galois_apply(s, &u)).collect();
            let res: Vec<Vec<u64>> = omega_roots
                .iter()
                .map(|&o| conj.iter().map(|c| k.field().reduce_at_root(c, p, o)).collect::<Result<Vec<_>>>())
                .collect::<Result<_>>()?;
            per_u.push((u, res));
        }
        class_data.push((x, y, per_u));
    }

    let q1 = (q_norm + 1) % p;
    let q1sq = mul_mod(q1, q1, p);
    let matches = |t: u64, a: u64| match cmp {
        Comparison::Exact => t == a,
        Comparison::Squares => mul_mod(t, t, p) == mul_mod(a, a, p),
        Comparison::Negated => t == sub_mod(0, a, p),
    };

    let mut pairs = Vec::with_capacity(rho.len());
    for (j, &(i, w)) in pairing.iter().enumerate() {
        let mut pair = ResiduePair {
            i,
            j,
            omega_residue: w,
            generator_residue: rho[j],
            accepted: None,
            rejected: None,
        };
        let mut mult_witness = None;
        if cfg.multiplicative_screen {
            match (0..labels.len()).find(|&l| mul_mod(eig[j][l], eig[j][l], p) != q1sq) {
                None => {
                    pair.accepted = Some(Acceptance::Multiplicative);
                    pairs.push(pair);
                    continue;
                }
                Some(l) => mult_witness = Some(labels[l].clone()),
            }
        }
        let mut sample = None;
        'classes: for (x, y, per_u) in &class_data {
            for (u, res) in per_u {
                let fail = (0..group.len()).find(|&s| !matches(res[i][s], eig[j][images[s]]));
                match fail {
                    None => {
                        pair.accepted = Some(Acceptance::Class { x: *x, y: *y, trace: u.clone() });
                        break 'classes;
                    }
                    Some(s) if sample.is_none() => {
                        sample = Some((*x, *y, group[s].j, labels[images[s]].clone()));
                    }
                    Some(_) => {}
                }
            }
        }
        if pair.accepted.is_none() {
            pair.rejected = Some(Rejection {
                multiplicative_witness: mult_witness,
                classes_checked: class_data.len(),
                sample,
            });
        }
        pairs.push(pair);
    }
    let verdict = if pairs.iter().all(|p| p.rejected.is_some()) { Verdict::Reject } else { Verdict::Accept };
    Ok(RefinedReport {
        label: nf.label().to_string(),
        p,
        q,
        q_norm,
        case_mode: cfg.case_mode,
        comparison: cmp,
        multiplicative_screen: cfg.multiplicative_screen,
        pairs,
        verdict,
    })
}
