//! Small integer helpers shared by every layer: modular u64 arithmetic,
//! primality, valuations, binomials, bounded factorization.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

#[inline]
pub fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        p - (b - a)
    }
}

pub fn pow_mod(mut base: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        e >>= 1;
    }
    acc
}

/// Inverse of `a` modulo a prime `p`. Panics on zero.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    let a = a % p;
    assert!(a != 0, "inverse of zero mod {p}");
    pow_mod(a, p - 2, p)
}

pub fn is_prime(n: u64) -> bool {
    num_prime::nt_funcs::is_prime64(n)
}

/// Primes in `[2, bound]`.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(k, &b)| b.then_some(k as u64))
        .collect()
}

/// `n mod p` in `[0, p)` for a signed big integer.
pub fn big_mod_u64(n: &BigInt, p: u64) -> u64 {
    let r = n.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue fits in u64")
}

/// Symmetric lift of a residue to `(-p/2, p/2]`.
pub fn symmetric_lift(x: &BigUint, m: &BigUint) -> BigInt {
    let half: BigUint = m >> 1;
    if x > &half {
        BigInt::from_biguint(Sign::Plus, x.clone()) - BigInt::from_biguint(Sign::Plus, m.clone())
    } else {
        BigInt::from_biguint(Sign::Plus, x.clone())
    }
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

pub fn big_pow(base: &BigInt, e: u64) -> BigInt {
    num_traits::pow::Pow::pow(base, e as u32)
}

/// q-adic valuation of a nonzero integer. Returns `None` for zero.
pub fn valuation(n: &BigInt, q: u64) -> Option<u32> {
    if n.is_zero() {
        return None;
    }
    let qq = BigInt::from(q);
    let mut m = n.abs();
    let mut v = 0;
    loop {
        let (d, r) = m.div_rem(&qq);
        if !r.is_zero() {
            return Some(v);
        }
        m = d;
        v += 1;
    }
}

/// Multiplicative order of `q` in `(Z/rZ)^* / {±1}`.
pub fn order_mod_pm1(q: u64, r: u64) -> u64 {
    let q = q % r;
    assert!(q != 0, "{q} is not a unit mod {r}");
    let mut x = q;
    let mut f = 1;
    while x != 1 && x != r - 1 {
        x = mul_mod(x, q, r);
        f += 1;
    }
    f
}

/// Distinct prime divisors of `n`, found by trial division (used for small inputs).
pub fn prime_divisors_u64(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Result of a best-effort factorization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialFactorization {
    pub primes: BTreeMap<BigInt, u32>,
    /// Composite part left unfactored (1 when complete).
    pub cofactor: BigInt,
}

impl PartialFactorization {
    pub fn is_complete(&self) -> bool {
        self.cofactor.is_one()
    }
}

/// Cofactors above this size are not primality tested.
pub const PRIMALITY_MAX_BITS: u64 = 4096;
/// Composite cofactors above this size are not fed to rho.
pub const RHO_MAX_BITS: u64 = 192;

/// Factor `|n|` by trial division up to `trial_bound`, then hand the rest to
/// Pollard rho with a bounded number of trials when it is small enough.
/// Whatever resists stays in the cofactor.
pub fn factor_bounded(n: &BigInt, trial_bound: u64) -> PartialFactorization {
    assert!(!n.is_zero(), "cannot factor zero");
    let mut m = n.abs();
    let mut primes = BTreeMap::new();
    for p in primes_up_to(trial_bound) {
        let pb = BigInt::from(p);
        if m.is_one() {
            break;
        }
        let mut e = 0;
        loop {
            let (d, r) = m.div_rem(&pb);
            if !r.is_zero() {
                break;
            }
            m = d;
            e += 1;
        }
        if e > 0 {
            primes.insert(pb, e);
        }
    }
    let mut cofactor = BigInt::one();
    if !m.is_one() {
        let mu = m.to_biguint().expect("positive");
        if mu.bits() > PRIMALITY_MAX_BITS {
            cofactor = m;
        } else if num_prime::nt_funcs::is_prime(&mu, None).probably() {
            *primes.entry(m.clone()).or_insert(0) += 1;
        } else if mu.bits() > RHO_MAX_BITS {
            cofactor = m;
        } else {
            let mut cfg = num_prime::FactorizationConfig::default();
            cfg.td_limit = Some(0);
            cfg.rho_trials = 40;
            let (found, rest) = num_prime::nt_funcs::factors(mu, Some(cfg));
            for (p, e) in found {
                *primes.entry(BigInt::from(p)).or_insert(0) += e as u32;
            }
            if let Some(rest) = rest {
                for c in rest {
                    cofactor *= BigInt::from(c);
                }
            }
        }
    }
    PartialFactorization { primes, cofactor }
}

/// Numeric value of a big integer as f64 (saturating on overflow).
pub fn big_to_f64(n: &BigInt) -> f64 {
    n.to_f64().unwrap_or(if n.is_negative() {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    })
}

/// Serde adapters writing big integers as decimal strings.
pub mod decimal {
    use num_bigint::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&n.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.trim().parse().map_err(|_| D::Error::custom(format!("not a decimal integer: {s:?}")))
    }

    pub mod vec {
        use num_bigint::BigInt;
        use serde::{de::Error, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for n in v {
                seq.serialize_element(&n.to_string())?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
            let v = Vec::<String>::deserialize(d)?;
            v.iter()
                .map(|s| {
                    s.trim()
                        .parse()
                        .map_err(|_| D::Error::custom(format!("not a decimal integer: {s:?}")))
                })
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_examples() {
        assert_eq!(order_mod_pm1(23, 11), 1);
        assert_eq!(order_mod_pm1(2, 11), 5);
        assert_eq!(order_mod_pm1(3, 5), 2);
        assert_eq!(order_mod_pm1(2, 7), 3);
    }

    #[test]
    fn valuation_and_binomial() {
        assert_eq!(valuation(&BigInt::from(33), 3), Some(1));
        assert_eq!(valuation(&BigInt::from(-81), 3), Some(4));
        assert_eq!(valuation(&BigInt::from(0), 3), None);
        assert_eq!(binomial(7, 3), BigInt::from(35));
        assert_eq!(binomial(16, 15), BigInt::from(16));
    }

    #[test]
    fn bounded_factorization_recovers_small_and_large() {
        let n = BigInt::from(2049u64) * BigInt::from(1_000_000_007u64);
        let f = factor_bounded(&n, 100);
        assert!(f.is_complete());
        assert_eq!(f.primes.get(&BigInt::from(3)), Some(&1));
        assert_eq!(f.primes.get(&BigInt::from(683)), Some(&1));
        assert_eq!(f.primes.get(&BigInt::from(1_000_000_007u64)), Some(&1));
    }
}
