//! Dense integer polynomials, resultants and discriminants.
//!
//! Resultants are computed multimodularly: Euclid over many 62-bit primes,
//! recombined by CRT up to the Hadamard bound. A Bareiss determinant of the
//! Sylvester matrix is kept alongside as an independent check.

use crate::arith::{inv_mod, is_prime, mul_mod, pow_mod, sub_mod, symmetric_lift};
use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::OnceLock;

/// Integer polynomial with ascending coefficients and no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct IntPoly {
    #[serde(with = "crate::arith::decimal::vec")]
    pub coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    pub fn x() -> Self {
        Self::from_i64(&[0, 1])
    }

    /// `c * x^n`
    pub fn monomial(c: BigInt, n: usize) -> Self {
        let mut v = vec![BigInt::zero(); n + 1];
        v[n] = c;
        Self::new(v)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with -1 for the zero polynomial.
    pub fn degree(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn add(&self, o: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> IntPoly {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn mul(&self, o: &IntPoly) -> IntPoly {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, e: u32) -> IntPoly {
        let mut acc = Self::constant(BigInt::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiply by `x^n`.
    pub fn shift(&self, n: usize) -> IntPoly {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![BigInt::zero(); n];
        v.extend(self.coeffs.iter().cloned());
        Self::new(v)
    }

    pub fn derivative(&self) -> IntPoly {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    /// `self(inner(x))`
    pub fn compose(&self, inner: &IntPoly) -> IntPoly {
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(inner).add(&Self::constant(c.clone()));
        }
        acc
    }

    /// Remainder modulo a monic polynomial.
    pub fn rem_monic(&self, m: &IntPoly) -> IntPoly {
        assert!(m.is_monic(), "rem_monic needs a monic modulus");
        let d = m.coeffs.len() - 1;
        let mut r = self.coeffs.clone();
        while r.len() > d {
            let lc = r.pop().unwrap();
            if lc.is_zero() {
                continue;
            }
            let off = r.len() - d;
            for (j, mc) in m.coeffs[..d].iter().enumerate() {
                r[off + j] -= &lc * mc;
            }
        }
        Self::new(r)
    }

    /// Exact division by a monic polynomial; `None` if the remainder is nonzero.
    pub fn div_exact_monic(&self, m: &IntPoly) -> Option<IntPoly> {
        assert!(m.is_monic());
        let d = m.coeffs.len() - 1;
        if self.coeffs.len() <= d {
            return self.is_zero().then(Self::zero);
        }
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); r.len() - d];
        for i in (0..q.len()).rev() {
            let lc = r[i + d].clone();
            if lc.is_zero() {
                continue;
            }
            for (j, mc) in m.coeffs.iter().enumerate() {
                r[i + j] -= &lc * mc;
            }
            q[i] = lc;
        }
        r.iter().all(|c| c.is_zero()).then(|| Self::new(q))
    }

    /// Content (gcd of coefficients), nonnegative.
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Reverse of the coefficient list with respect to degree `n`.
    pub fn reverse(&self, n: usize) -> IntPoly {
        let mut v: Vec<BigInt> = (0..=n).map(|i| self.coeff(i)).collect();
        v.reverse();
        Self::new(v)
    }

    pub fn reduce_mod(&self, p: u64) -> Vec<u64> {
        crate::zmodp::normalize(
            self.coeffs
                .iter()
                .map(|c| crate::arith::big_mod_u64(c, p))
                .collect(),
        )
    }

    pub fn l2_norm_bits(&self) -> u64 {
        let s: BigInt = self.coeffs.iter().map(|c| c * c).sum();
        (s.bits() + 1) / 2 + 1
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = !a.is_one() || i == 0;
            if show_coeff {
                write!(f, "{a}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "{}x", if show_coeff { "*" } else { "" })?,
                _ => write!(f, "{}x^{i}", if show_coeff { "*" } else { "" })?,
            }
        }
        Ok(())
    }
}

/// Resultant over F_p by the Euclidean algorithm. Inputs are reduced vectors.
pub fn resultant_mod_p(a: &[u64], b: &[u64], p: u64) -> u64 {
    use crate::zmodp::{normalize, rem};
    let mut a = normalize(a.to_vec());
    let mut b = normalize(b.to_vec());
    if a.is_empty() || b.is_empty() {
        return 0;
    }
    let mut acc = 1u64;
    loop {
        let da = a.len() - 1;
        let db = b.len() - 1;
        if db == 0 {
            return mul_mod(acc, pow_mod(b[0], da as u64, p), p);
        }
        if da == 0 {
            return mul_mod(acc, pow_mod(a[0], db as u64, p), p);
        }
        let r = rem(&a, &b, p);
        if r.is_empty() {
            return 0;
        }
        let dr = r.len() - 1;
        // Res(A,B) = (-1)^{da db} lc(B)^{da - dr} Res(B, R)
        if (da * db) % 2 == 1 {
            acc = sub_mod(0, acc, p);
        }
        acc = mul_mod(acc, pow_mod(*b.last().unwrap(), (da - dr) as u64, p), p);
        a = b;
        b = r;
    }
}

fn crt_primes() -> &'static Vec<u64> {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let mut v = Vec::new();
        let mut n = (1u64 << 62) - 1;
        while v.len() < 4096 {
            if is_prime(n) {
                v.push(n);
            }
            n -= 2;
        }
        v
    })
}

/// Exact integer resultant Res(f, g), multimodular.
pub fn resultant(f: &IntPoly, g: &IntPoly) -> BigInt {
    if f.is_zero() || g.is_zero() {
        return BigInt::zero();
    }
    let m = f.degree() as u64;
    let n = g.degree() as u64;
    if m == 0 && n == 0 {
        return BigInt::one();
    }
    // Hadamard: |Res| <= |f|_2^n |g|_2^m
    let bound_bits = f.l2_norm_bits() * n + g.l2_norm_bits() * m + 2;
    let mut modulus = BigUint::one();
    let mut value = BigUint::zero();
    let lf = f.leading();
    let lg = g.leading();
    for &p in crt_primes() {
        if (&lf % p).is_zero() || (&lg % p).is_zero() {
            continue;
        }
        let r = resultant_mod_p(&f.reduce_mod(p), &g.reduce_mod(p), p);
        // Garner step: value += modulus * ((r - value) / modulus mod p)
        let vmod = (&value % p).to_u64().unwrap();
        let mmod = (&modulus % p).to_u64().unwrap();
        let t = mul_mod(sub_mod(r, vmod, p), inv_mod(mmod, p), p);
        value += &modulus * BigUint::from(t);
        modulus *= BigUint::from(p);
        if modulus.bits() > bound_bits + 1 {
            return symmetric_lift(&value, &modulus);
        }
    }
    panic!("resultant bound exceeded the prime table");
}

/// Determinant of an integer matrix by fraction-free Bareiss elimination.
pub fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Res(f, g) as the determinant of the Sylvester matrix.
pub fn resultant_sylvester(f: &IntPoly, g: &IntPoly) -> BigInt {
    if f.is_zero() || g.is_zero() {
        return BigInt::zero();
    }
    let m = f.degree() as usize;
    let n = g.degree() as usize;
    let size = m + n;
    if size == 0 {
        return BigInt::one();
    }
    let mut rows = vec![vec![BigInt::zero(); size]; size];
    for i in 0..n {
        for (j, c) in f.coeffs.iter().rev().enumerate() {
            rows[i][i + j] = c.clone();
        }
    }
    for i in 0..m {
        for (j, c) in g.coeffs.iter().rev().enumerate() {
            rows[n + i][i + j] = c.clone();
        }
    }
    bareiss_det(rows)
}

/// disc(f) = (-1)^{n(n-1)/2} Res(f, f') / lc(f).
pub fn discriminant(f: &IntPoly) -> BigInt {
    let n = f.degree();
    assert!(n >= 1, "discriminant of a constant");
    let res = resultant(f, &f.derivative());
    let (q, r) = res.div_rem(&f.leading());
    assert!(r.is_zero(), "lc does not divide Res(f, f')");
    if (n * (n - 1) / 2) % 2 == 1 {
        -q
    } else {
        q
    }
}

/// Discriminant of a polynomial with rational coefficients.
pub fn discriminant_rational(f: &[BigRational]) -> BigRational {
    let den = f
        .iter()
        .fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let ints = IntPoly::new(f.iter().map(|c| (c * &den).to_integer()).collect());
    let n = ints.degree() as u32;
    let d = discriminant(&ints);
    BigRational::new(d, num_traits::pow::Pow::pow(&den, 2 * n - 2))
}

/// Pseudo-remainder lc(b)^{deg a - deg b + 1} a mod b.
pub fn pseudo_rem(a: &IntPoly, b: &IntPoly) -> IntPoly {
    assert!(!b.is_zero());
    let db = b.degree();
    let lb = b.leading();
    let mut r = a.clone();
    while !r.is_zero() && r.degree() >= db {
        let shift = (r.degree() - db) as usize;
        let lr = r.leading();
        r = r.scale(&lb).sub(&b.scale(&lr).shift(shift));
    }
    r
}

fn primitive(p: &IntPoly) -> IntPoly {
    if p.is_zero() {
        return p.clone();
    }
    let mut c = p.content();
    if p.leading().is_negative() {
        c = -c;
    }
    IntPoly::new(p.coeffs.iter().map(|x| x / &c).collect())
}

/// Primitive gcd over Z[x] with positive leading coefficient.
pub fn gcd_z(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let mut a = primitive(a);
    let mut b = primitive(b);
    if a.degree() < b.degree() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_zero() {
        let r = primitive(&pseudo_rem(&a, &b));
        a = b;
        b = r;
    }
    primitive(&a)
}

/// Squarefree part of a monic integer polynomial (monic again).
pub fn squarefree_part(p: &IntPoly) -> IntPoly {
    assert!(p.is_monic());
    let g = gcd_z(p, &p.derivative());
    if g.degree() <= 0 {
        return p.clone();
    }
    p.div_exact_monic(&g).expect("gcd of monic polynomials divides exactly")
}

/// Integer square root test; returns the root if `n` is a perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let s = n.sqrt();
    (&s * &s == *n).then_some(s)
}

pub fn from_biguint(n: BigUint) -> BigInt {
    BigInt::from_biguint(Sign::Plus, n)
}
