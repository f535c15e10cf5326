//! The real cyclotomic field K = Q(zeta_r)^+ in the power basis of
//! omega = zeta + zeta^{-1}: Galois action, splitting of rational primes,
//! norms, traces and residue maps.

use crate::arith::{is_prime, order_mod_pm1};
use crate::error::{FreyError, Result};
use crate::numfield::{NfElem, NumberField};
use crate::poly::IntPoly;
use crate::zmodp;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

/// An element of K in the basis 1, omega, ..., omega^{g-1}.
pub type KElement = NfElem;

/// sigma_j, the class of j in (Z/rZ)^*/{±1}, normalized to 1 <= j <= g.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GaloisMap {
    pub j: u64,
}

impl GaloisMap {
    pub fn new(j: u64, r: u64) -> Self {
        let j = j % r;
        assert!(j != 0, "sigma_0 is not an automorphism");
        GaloisMap { j: j.min(r - j) }
    }

    pub fn identity() -> Self {
        GaloisMap { j: 1 }
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &GaloisMap, r: u64) -> GaloisMap {
        GaloisMap::new(self.j * other.j, r)
    }
}

/// A prime of K above q, named by a monic irreducible factor of h mod q.
/// For q = r the factor is x - 2.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PrimeLabel {
    pub q: u64,
    pub factor: Vec<u64>,
}

impl PrimeLabel {
    pub fn residue_degree(&self) -> usize {
        self.factor.len() - 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeSplitting {
    pub q: u64,
    pub f: usize,
    pub n_primes: usize,
    pub factors: Vec<Vec<u64>>,
    pub ramified: bool,
}

impl PrimeSplitting {
    pub fn labels(&self) -> Vec<PrimeLabel> {
        self.factors
            .iter()
            .map(|f| PrimeLabel { q: self.q, factor: f.clone() })
            .collect()
    }

    /// Residue field size q^f.
    pub fn norm(&self) -> u64 {
        self.q.pow(self.f as u32)
    }
}

/// h(x) = prod_j (x - (zeta^j + zeta^{-j})), expanded in Z[zeta].
pub fn minimal_poly(r: u64) -> Result<Vec<BigInt>> {
    if r < 3 || !is_prime(r) {
        return Err(FreyError::invalid(format!("r = {r} is not an odd prime")));
    }
    let n = r as usize;
    let g = (n - 1) / 2;
    // coefficients of the running product, each an element of Z[x]/(x^r - 1)
    let mut prod: Vec<Vec<i128>> = vec![vec![0; n]];
    prod[0][0] = 1;
    for j in 1..=g {
        let mut root = vec![0i128; n];
        root[j] += 1;
        root[n - j] += 1;
        // multiply by (X - root)
        let mut next = vec![vec![0i128; n]; prod.len() + 1];
        for (k, c) in prod.iter().enumerate() {
            for t in 0..n {
                next[k + 1][t] += c[t];
            }
            for (a, &ca) in c.iter().enumerate() {
                if ca == 0 {
                    continue;
                }
                for (b, &rb) in root.iter().enumerate() {
                    if rb != 0 {
                        next[k][(a + b) % n] -= ca * rb;
                    }
                }
            }
        }
        prod = next;
    }
    prod.into_iter()
        .map(|v| {
            // v represents an integer iff entries 1..r-1 agree (1 + zeta + ... = 0)
            if v[1..].iter().any(|&c| c != v[1]) {
                return Err(FreyError::certificate(
                    "minimal-poly-rational",
                    "coefficient of h is not rational in Z[zeta]",
                ));
            }
            Ok(BigInt::from(v[0] - v[1]))
        })
        .collect()
}

/// Dickson polynomials D_0 = 2, D_1 = x, D_{n+1} = x D_n - D_{n-1}, so that
/// D_j(zeta + zeta^{-1}) = zeta^j + zeta^{-j}.
pub fn dickson(j: usize) -> IntPoly {
    let mut a = IntPoly::from_i64(&[2]);
    let mut b = IntPoly::x();
    if j == 0 {
        return a;
    }
    for _ in 1..j {
        let c = IntPoly::x().mul(&b).sub(&a);
        a = b;
        b = c;
    }
    b
}

#[derive(Clone, Debug)]
pub struct CycloRealField {
    pub r: u64,
    pub g: usize,
    pub h_coeffs: Vec<BigInt>,
    nf: NumberField,
    /// sigma_j(omega) for j = 1..=g
    sigma_omega: Vec<KElement>,
}

impl CycloRealField {
    pub fn new(r: u64) -> Result<Self> {
        let h_coeffs = minimal_poly(r)?;
        let g = ((r - 1) / 2) as usize;
        let nf = NumberField::new(IntPoly::new(h_coeffs.clone()));
        let sigma_omega = (1..=g).map(|j| nf.from_poly(&dickson(j))).collect();
        Ok(CycloRealField { r, g, h_coeffs, nf, sigma_omega })
    }

    pub fn h(&self) -> &IntPoly {
        &self.nf.minpoly
    }

    pub fn field(&self) -> &NumberField {
        &self.nf
    }

    pub fn omega(&self) -> KElement {
        self.nf.gen()
    }

    pub fn element(&self, coords: &[i64]) -> KElement {
        NfElem::from_ints(coords, self.g)
    }

    pub fn galois_group(&self) -> Vec<GaloisMap> {
        (1..=self.g as u64).map(|j| GaloisMap { j }).collect()
    }

    pub fn galois_apply(&self, map: GaloisMap, u: &KElement) -> KElement {
        assert!(map.j >= 1 && map.j as usize <= self.g, "sigma index out of range");
        if map.j == 1 {
            return u.clone();
        }
        self.nf.map_from(u, &self.sigma_omega[map.j as usize - 1])
    }

    pub fn norm_and_trace(&self, u: &KElement) -> (BigRational, BigRational) {
        (self.nf.norm(u), self.nf.trace(u))
    }

    pub fn norm(&self, u: &KElement) -> BigRational {
        self.nf.norm(u)
    }

    /// Real embeddings omega -> 2 cos(2 pi j / r), j = 1..=g. Embedding j
    /// applied to u equals embedding 1 applied to sigma_j(u).
    pub fn omega_embeddings(&self) -> Vec<f64> {
        (1..=self.g)
            .map(|j| 2.0 * (2.0 * std::f64::consts::PI * j as f64 / self.r as f64).cos())
            .collect()
    }

    pub fn split_prime(&self, q: u64) -> Result<PrimeSplitting> {
        if !is_prime(q) {
            return Err(FreyError::invalid(format!("q = {q} is not prime")));
        }
        if q == self.r {
            return Ok(PrimeSplitting {
                q,
                f: 1,
                n_primes: 1,
                factors: vec![vec![q - 2, 1]],
                ramified: true,
            });
        }
        let f = order_mod_pm1(q, self.r) as usize;
        let hq = self.h().reduce_mod(q);
        let factors = zmodp::factor_squarefree(&hq, q);
        if factors.iter().any(|fac| fac.len() - 1 != f) || factors.len() * f != self.g {
            return Err(FreyError::certificate(
                "splitting-degree",
                format!("factor degrees of h mod {q} disagree with f = {f}"),
            ));
        }
        Ok(PrimeSplitting { q, f, n_primes: factors.len(), factors, ramified: false })
    }

    /// Image of u in F_q[x]/(label.factor).
    pub fn reduce_mod_prime(&self, u: &KElement, label: &PrimeLabel) -> Result<Vec<u64>> {
        self.nf.reduce(u, label.q, &label.factor)
    }

    /// Index of sigma(q_i) among the labels of `sp`: the factor phi_k with
    /// phi_k | phi_i(D_j(x)) mod q.
    pub fn label_image(&self, map: GaloisMap, sp: &PrimeSplitting, i: usize) -> Result<usize> {
        if sp.ramified || map.j == 1 {
            return Ok(i);
        }
        let q = sp.q;
        let dj = self.sigma_omega[map.j as usize - 1].numerator_poly().reduce_mod(q);
        let phi = &sp.factors[i];
        let mut comp: Vec<u64> = Vec::new();
        for &c in phi.iter().rev() {
            comp = zmodp::add(&zmodp::mul(&comp, &dj, q), &[c], q);
        }
        let hits: Vec<usize> = sp
            .factors
            .iter()
            .enumerate()
            .filter(|(_, fk)| zmodp::rem(&comp, fk, q).is_empty())
            .map(|(k, _)| k)
            .collect();
        match hits.as_slice() {
            [k] => Ok(*k),
            _ => Err(FreyError::certificate(
                "label-permutation",
                format!("sigma_{} does not map label {i} above {q} to a unique label", map.j),
            )),
        }
    }

    /// True when u has integral coordinates (so u lies in O_K = Z[omega]).
    pub fn is_integral(&self, u: &KElement) -> bool {
        u.is_integral_coords()
    }

    pub fn zero(&self) -> KElement {
        self.nf.zero()
    }

    pub fn is_rational_integer(&self, u: &KElement) -> bool {
        u.as_integer().is_some() && u.num[1..].iter().all(|c| c.is_zero())
    }
}
