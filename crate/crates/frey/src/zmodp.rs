//! Polynomials over F_p (p < 2^63) as ascending `Vec<u64>`: Euclid, powering,
//! Rabin's irreducibility test, distinct- and equal-degree factorization.

use crate::arith::{add_mod, inv_mod, mul_mod, pow_mod, sub_mod};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Fp = Vec<u64>;

pub fn normalize(mut v: Fp) -> Fp {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

pub fn add(a: &[u64], b: &[u64], p: u64) -> Fp {
    let n = a.len().max(b.len());
    normalize(
        (0..n)
            .map(|i| add_mod(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0), p))
            .collect(),
    )
}

pub fn sub(a: &[u64], b: &[u64], p: u64) -> Fp {
    let n = a.len().max(b.len());
    normalize(
        (0..n)
            .map(|i| sub_mod(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0), p))
            .collect(),
    )
}

pub fn scale(a: &[u64], k: u64, p: u64) -> Fp {
    normalize(a.iter().map(|&c| mul_mod(c, k, p)).collect())
}

pub fn mul(a: &[u64], b: &[u64], p: u64) -> Fp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u128; a.len() + b.len() - 1];
    let pp = p as u128;
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u128 * y as u128) % pp;
        }
    }
    normalize(out.into_iter().map(|c| c as u64).collect())
}

/// Quotient and remainder; `b` must be nonzero.
pub fn divrem(a: &[u64], b: &[u64], p: u64) -> (Fp, Fp) {
    let b = normalize(b.to_vec());
    assert!(!b.is_empty(), "division by zero polynomial");
    let mut r = normalize(a.to_vec());
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let db = b.len() - 1;
    let inv = inv_mod(b[db], p);
    let mut q = vec![0u64; r.len() - db];
    for i in (0..q.len()).rev() {
        let c = mul_mod(r[i + db], inv, p);
        if c == 0 {
            continue;
        }
        q[i] = c;
        for (j, &bj) in b.iter().enumerate() {
            r[i + j] = sub_mod(r[i + j], mul_mod(c, bj, p), p);
        }
    }
    r.truncate(db);
    (normalize(q), normalize(r))
}

pub fn rem(a: &[u64], b: &[u64], p: u64) -> Fp {
    divrem(a, b, p).1
}

pub fn monic(a: &[u64], p: u64) -> Fp {
    let a = normalize(a.to_vec());
    match a.last() {
        None => a,
        Some(&lc) => scale(&a, inv_mod(lc, p), p),
    }
}

pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Fp {
    let mut a = normalize(a.to_vec());
    let mut b = normalize(b.to_vec());
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    monic(&a, p)
}

pub fn derivative(a: &[u64], p: u64) -> Fp {
    normalize(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mul_mod(c, i as u64 % p, p))
            .collect(),
    )
}

pub fn eval(a: &[u64], x: u64, p: u64) -> u64 {
    a.iter().rev().fold(0, |acc, &c| add_mod(mul_mod(acc, x, p), c, p))
}

pub fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Fp {
    rem(&mul(a, b, p), m, p)
}

/// `base^e mod m`. A u128 exponent covers q^k for every field built here.
pub fn powmod(base: &[u64], mut e: u128, m: &[u64], p: u64) -> Fp {
    let mut acc = rem(&[1], m, p);
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(&acc, &b, m, p);
        }
        b = mulmod(&b, &b, m, p);
        e >>= 1;
    }
    acc
}

/// `x^(p^k) mod m` by repeated p-th powering.
fn frobenius_power(m: &[u64], k: usize, p: u64) -> Fp {
    let mut x = rem(&[0, 1], m, p);
    for _ in 0..k {
        x = powmod(&x, p as u128, m, p);
    }
    x
}

pub fn is_squarefree(f: &[u64], p: u64) -> bool {
    let d = derivative(f, p);
    if d.is_empty() {
        return false;
    }
    gcd(f, &d, p).len() == 1
}

/// Rabin's test for a polynomial of degree >= 1.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let f = monic(f, p);
    let n = f.len() - 1;
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let x = vec![0, 1];
    // x^(p^n) == x mod f
    if sub(&frobenius_power(&f, n, p), &x, p) != Vec::<u64>::new() {
        return false;
    }
    for q in crate::arith::prime_divisors_u64(n as u64) {
        let t = sub(&frobenius_power(&f, n / q as usize, p), &x, p);
        if gcd(&f, &t, p).len() != 1 {
            return false;
        }
    }
    true
}

/// Distinct-degree factorization of a monic squarefree polynomial:
/// returns `(d, product of all degree-d irreducible factors)`.
pub fn distinct_degree(f: &[u64], p: u64) -> Vec<(usize, Fp)> {
    let mut f = monic(f, p);
    let mut out = Vec::new();
    let mut xp = rem(&[0, 1], &f, p);
    let mut d = 0;
    while f.len() > 1 {
        d += 1;
        if 2 * d > f.len() - 1 {
            out.push((f.len() - 1, f.clone()));
            break;
        }
        xp = powmod(&xp, p as u128, &f, p);
        let g = gcd(&f, &sub(&xp, &[0, 1], p), p);
        if g.len() > 1 {
            f = divrem(&f, &g, p).0;
            xp = rem(&xp, &f, p);
            out.push((d, g));
        }
    }
    out
}

/// Cantor–Zassenhaus splitting of a monic squarefree product of degree-`d`
/// irreducibles. Deterministic for a given seed.
pub fn equal_degree(f: &[u64], d: usize, p: u64, seed: u64) -> Vec<Fp> {
    let f = monic(f, p);
    let n = f.len() - 1;
    if n == d {
        return vec![f];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ p.rotate_left(17) ^ (n as u64));
    loop {
        let a: Fp = normalize((0..n).map(|_| rng.gen_range(0..p)).collect());
        if a.len() < 2 {
            continue;
        }
        let b = if p == 2 {
            // trace map a + a^2 + ... + a^(2^(d-1))
            let mut t = a.clone();
            let mut acc = a.clone();
            for _ in 1..d {
                t = mulmod(&t, &t, &f, p);
                acc = add(&acc, &t, p);
            }
            acc
        } else {
            let e = ((p as u128).pow(d as u32) - 1) / 2;
            sub(&powmod(&a, e, &f, p), &[1], p)
        };
        let g = gcd(&f, &b, p);
        if g.len() > 1 && g.len() < f.len() {
            let h = divrem(&f, &g, p).0;
            let mut out = equal_degree(&g, d, p, seed.wrapping_add(1));
            out.extend(equal_degree(&h, d, p, seed.wrapping_add(2)));
            return out;
        }
    }
}

/// Monic irreducible factors of a squarefree polynomial, sorted by degree and
/// then lexicographically by ascending coefficient vector.
pub fn factor_squarefree(f: &[u64], p: u64) -> Vec<Fp> {
    let mut out = Vec::new();
    for (d, g) in distinct_degree(f, p) {
        out.extend(equal_degree(&g, d, p, 0x5eed));
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// Distinct roots in F_p of a nonzero polynomial, ascending.
pub fn roots(f: &[u64], p: u64) -> Vec<u64> {
    let f = monic(f, p);
    if f.len() <= 1 {
        return Vec::new();
    }
    // restrict to the product of linear factors: gcd(f, x^p - x)
    let xp = powmod(&[0, 1], p as u128, &f, p);
    let g = gcd(&f, &sub(&xp, &[0, 1], p), p);
    if g.len() <= 1 {
        return Vec::new();
    }
    let mut r: Vec<u64> = equal_degree(&g, 1, p, 0x0123)
        .into_iter()
        .map(|l| sub_mod(0, l[0], p))
        .collect();
    r.sort_unstable();
    r
}

/// First monic irreducible of degree `k` in a fixed search order (lower
/// coefficients vary fastest, sparse shapes first).
pub fn canonical_irreducible(p: u64, k: usize) -> Fp {
    if k == 1 {
        return vec![0, 1];
    }
    // sparse candidates x^k + a x + b
    for a in 0..p {
        for b in 1..p {
            let mut f = vec![0u64; k + 1];
            f[0] = b;
            f[1] = a;
            f[k] = 1;
            if is_irreducible(&f, p) {
                return f;
            }
        }
    }
    // general search
    let mut lower = vec![0u64; k];
    loop {
        let mut i = 0;
        while i < k {
            lower[i] += 1;
            if lower[i] < p {
                break;
            }
            lower[i] = 0;
            i += 1;
        }
        assert!(i < k, "no irreducible of degree {k} over F_{p}");
        let mut f = lower.clone();
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
    }
}

/// Powering in F_p (re-export for callers that only import this module).
pub fn fp_pow(x: u64, e: u64, p: u64) -> u64 {
    pow_mod(x, e, p)
}
