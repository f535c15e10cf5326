//! Extension fields F_{p^k} with fixed-width coordinates and point counting on
//! y^2 = f(x) by a full sweep with a quadratic-character table.
//!
//! Elements are `[u32; K]` in the basis 1, t, ..., t^{K-1} of F_p[t]/(m);
//! reduction uses Barrett division and a precomputed table of t^{K+i} mod m.

use crate::curves::HyperellipticModel;
use crate::error::{FreyError, Result};
use crate::poly::resultant_mod_p;
use crate::zmodp;
use rayon::prelude::*;
use serde::Serialize;
use std::sync::{Arc, Mutex, OnceLock};

/// Largest field this module will sweep.
pub const MAX_FIELD_SIZE: u64 = 1 << 27;
const MAX_DEGREE: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FiniteFieldSpec {
    pub p: u64,
    pub k: usize,
    pub modulus: Vec<u64>,
}

impl FiniteFieldSpec {
    /// F_{p^k} with the canonical modulus.
    pub fn new(p: u64, k: usize) -> Result<Self> {
        if !crate::arith::is_prime(p) || k == 0 {
            return Err(FreyError::invalid(format!("no field of order {p}^{k}")));
        }
        Ok(FiniteFieldSpec { p, k, modulus: zmodp::canonical_irreducible(p, k) })
    }

    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<Self> {
        if !crate::arith::is_prime(p) || modulus.len() < 2 || modulus.last() != Some(&1) || !zmodp::is_irreducible(&modulus, p) {
            return Err(FreyError::invalid("modulus must be monic irreducible"));
        }
        Ok(FiniteFieldSpec { p, k: modulus.len() - 1, modulus })
    }

    pub fn size(&self) -> u64 {
        self.p.pow(self.k as u32)
    }
}

#[derive(Clone)]
struct Ctx<const K: usize> {
    p: u64,
    barrett: u64,
    /// t^{K+i} mod m, i = 0..K-1
    red: [[u64; K]; K],
}

impl<const K: usize> Ctx<K> {
    fn new(spec: &FiniteFieldSpec) -> Self {
        let p = spec.p;
        let mut red = [[0u64; K]; K];
        let mut cur: Vec<u64> = vec![0; K + 1];
        cur[K] = 1;
        let mut cur = zmodp::rem(&cur, &spec.modulus, p);
        for row in red.iter_mut() {
            for (j, c) in row.iter_mut().enumerate() {
                *c = *cur.get(j).unwrap_or(&0);
            }
            cur = zmodp::rem(&zmodp::mul(&cur, &[0, 1], p), &spec.modulus, p);
        }
        Ctx { p, barrett: u64::MAX / p, red }
    }

    #[inline(always)]
    fn reduce(&self, x: u64) -> u64 {
        let q = ((x as u128 * self.barrett as u128) >> 64) as u64;
        let mut r = x - q * self.p;
        while r >= self.p {
            r -= self.p;
        }
        r
    }

    #[inline(always)]
    fn mul(&self, a: &[u32; K], b: &[u32; K]) -> [u32; K] {
        let mut t = [0u64; 2 * MAX_DEGREE];
        for i in 0..K {
            let ai = a[i] as u64;
            if ai == 0 {
                continue;
            }
            for j in 0..K {
                t[i + j] += ai * b[j] as u64;
            }
        }
        for i in K..2 * K - 1 {
            let hi = self.reduce(t[i]);
            if hi == 0 {
                continue;
            }
            let row = &self.red[i - K];
            for j in 0..K {
                t[j] += hi * row[j];
            }
        }
        let mut out = [0u32; K];
        for j in 0..K {
            out[j] = self.reduce(t[j]) as u32;
        }
        out
    }

    #[inline(always)]
    fn add_const(&self, a: &mut [u32; K], c: u32) {
        let s = a[0] as u64 + c as u64;
        a[0] = if s >= self.p { (s - self.p) as u32 } else { s as u32 };
    }

    #[inline(always)]
    fn index(&self, a: &[u32; K]) -> usize {
        let mut idx = 0u64;
        for j in (0..K).rev() {
            idx = idx * self.p + a[j] as u64;
        }
        idx as usize
    }

    /// Advance an odometer over the first `digits` coordinates; false on wrap.
    #[inline(always)]
    fn step(&self, a: &mut [u32; K], digits: usize) -> bool {
        for d in a.iter_mut().take(digits) {
            *d += 1;
            if (*d as u64) < self.p {
                return true;
            }
            *d = 0;
        }
        false
    }
}

type TableKey = (u64, Vec<u64>);

fn table_cache() -> &'static Mutex<Vec<(TableKey, Arc<Vec<i8>>)>> {
    static CACHE: OnceLock<Mutex<Vec<(TableKey, Arc<Vec<i8>>)>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(Vec::new()))
}

/// chi(y) for every element, indexed by base-p digits.
fn character_table<const K: usize>(ctx: &Ctx<K>, spec: &FiniteFieldSpec) -> Arc<Vec<i8>> {
    let key = (spec.p, spec.modulus.clone());
    if let Some((_, t)) = table_cache().lock().unwrap().iter().find(|(k, _)| *k == key) {
        return t.clone();
    }
    let q = spec.size() as usize;
    let mut table = vec![-1i8; q];
    let mut x = [0u32; K];
    loop {
        let sq = ctx.mul(&x, &x);
        table[ctx.index(&sq)] = 1;
        if !ctx.step(&mut x, K) {
            break;
        }
    }
    table[0] = 0;
    let t = Arc::new(table);
    let mut cache = table_cache().lock().unwrap();
    cache.push((key, t.clone()));
    // keep the most recent few; large tables are tens of megabytes
    while cache.len() > 4 {
        cache.remove(0);
    }
    t
}

/// Sum of chi(f(x)) over the whole field.
fn character_sum<const K: usize>(f: &[u64], spec: &FiniteFieldSpec) -> i64 {
    let ctx = Ctx::<K>::new(spec);
    let table = character_table(&ctx, spec);
    let coeffs: Vec<u32> = f.iter().map(|&c| c as u32).collect();
    let n = coeffs.len() - 1;
    // odd shape f = x G(x^2) + c0 halves the Horner work
    let odd = n % 2 == 1 && (2..n).step_by(2).all(|i| coeffs[i] == 0);
    let g_coeffs: Vec<u32> = if odd { (1..=n).step_by(2).map(|i| coeffs[i]).collect() } else { Vec::new() };
    let c0 = coeffs[0];
    let eval = |x: &[u32; K]| -> i64 {
        let mut acc = [0u32; K];
        if odd {
            let y = ctx.mul(x, x);
            for &c in g_coeffs.iter().rev() {
                acc = ctx.mul(&acc, &y);
                ctx.add_const(&mut acc, c);
            }
            acc = ctx.mul(&acc, x);
            ctx.add_const(&mut acc, c0);
        } else {
            for &c in coeffs.iter().rev() {
                acc = ctx.mul(&acc, x);
                ctx.add_const(&mut acc, c);
            }
        }
        table[ctx.index(&acc)] as i64
    };
    let p = spec.p as u32;
    if K == 1 {
        let chunk = 1 << 14;
        let q = spec.p as u32;
        (0..q.div_ceil(chunk))
            .into_par_iter()
            .map(|c| {
                let mut s = 0i64;
                let mut x = [0u32; K];
                for v in c * chunk..((c + 1) * chunk).min(q) {
                    x[0] = v;
                    s += eval(&x);
                }
                s
            })
            .sum()
    } else {
        (0..p)
            .into_par_iter()
            .map(|top| {
                let mut x = [0u32; K];
                x[K - 1] = top;
                let mut s = 0i64;
                loop {
                    s += eval(&x);
                    if !ctx.step(&mut x, K - 1) {
                        break;
                    }
                }
                s
            })
            .sum()
    }
}

/// True when y^2 = f(x) has good reduction at p (odd p, f squarefree mod p,
/// leading coefficient a unit).
pub fn has_good_reduction(f: &[u64], p: u64) -> bool {
    if p == 2 || f.is_empty() || *f.last().unwrap() == 0 {
        return false;
    }
    resultant_mod_p(f, &zmodp::derivative(f, p), p) != 0
}

macro_rules! dispatch {
    ($k:expr, $f:expr, $spec:expr; $($n:literal)*) => {
        match $k {
            $($n => character_sum::<$n>($f, $spec),)*
            _ => unreachable!(),
        }
    };
}

/// #C(F_{p^k}) = 1 + sum_x (1 + chi(f(x))) for the odd-degree model.
pub fn count_points(model: &HyperellipticModel, field: &FiniteFieldSpec) -> Result<u64> {
    let p = field.p;
    let f = model.f.reduce_mod(p);
    if f.len() != model.f.coeffs.len() || !has_good_reduction(&f, p) {
        return Err(FreyError::BadReduction { q: p, detail: "model is singular mod p".into() });
    }
    count_points_reduced(&f, field)
}

/// Count on y^2 = f(x) for f already reduced mod p (and checked squarefree).
pub fn count_points_reduced(f: &[u64], field: &FiniteFieldSpec) -> Result<u64> {
    let q = field.size();
    if field.k > MAX_DEGREE || q > MAX_FIELD_SIZE || field.p >= 1 << 16 {
        return Err(FreyError::Unsupported(format!("field of size {}^{} is too large to sweep", field.p, field.k)));
    }
    let s = dispatch!(field.k, f, field; 1 2 3 4 5 6 7 8 9 10 11 12 13 14 15 16);
    Ok((1 + q as i64 + s) as u64)
}

/// Reference count using generic polynomial arithmetic and Euler's criterion.
pub fn count_points_naive(f: &[u64], field: &FiniteFieldSpec) -> u64 {
    let p = field.p;
    let q = field.size();
    let m = &field.modulus;
    let e = (q as u128 - 1) / 2;
    let mut total = 1u64;
    let mut x = vec![0u64; field.k];
    for _ in 0..q {
        let xv = zmodp::normalize(x.clone());
        let mut acc: Vec<u64> = Vec::new();
        for &c in f.iter().rev() {
            acc = zmodp::add(&zmodp::mulmod(&acc, &xv, m, p), &[c], p);
        }
        total += if acc.is_empty() {
            1
        } else if zmodp::powmod(&acc, e, m, p) == vec![1] {
            2
        } else {
            0
        };
        for d in x.iter_mut() {
            *d += 1;
            if *d < p {
                break;
            }
            *d = 0;
        }
    }
    total
}
