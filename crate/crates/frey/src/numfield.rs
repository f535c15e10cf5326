//! Simple algebraic number fields Q[x]/(m(x)) with m monic integral, and their
//! elements in the power basis over a common denominator.

use crate::arith::big_mod_u64;
use crate::error::{FreyError, Result};
use crate::poly::{resultant, IntPoly};
use crate::zmodp;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Element `(num_0 + num_1 x + ... ) / den` with `den > 0` and the fraction reduced.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NfElem {
    #[serde(with = "crate::arith::decimal::vec")]
    pub num: Vec<BigInt>,
    #[serde(with = "crate::arith::decimal")]
    pub den: BigInt,
}

impl NfElem {
    pub fn from_ints(v: &[i64], n: usize) -> Self {
        let mut num: Vec<BigInt> = v.iter().map(|&c| BigInt::from(c)).collect();
        num.resize(n, BigInt::zero());
        NfElem { num, den: BigInt::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|c| c.is_zero())
    }

    pub fn is_integral_coords(&self) -> bool {
        self.den.is_one()
    }

    /// Rational value when the element lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        self.num[1..]
            .iter()
            .all(|c| c.is_zero())
            .then(|| BigRational::new(self.num[0].clone(), self.den.clone()))
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational().filter(|q| q.is_integer()).map(|q| q.to_integer())
    }

    pub fn numerator_poly(&self) -> IntPoly {
        IntPoly::new(self.num.clone())
    }

    fn reduced(mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        if den.is_negative() {
            den = -den;
            for c in num.iter_mut() {
                *c = -&*c;
            }
        }
        let g = num.iter().fold(den.clone(), |g, c| g.gcd(c));
        if !g.is_one() && !g.is_zero() {
            for c in num.iter_mut() {
                *c = &*c / &g;
            }
            den /= g;
        }
        NfElem { num, den }
    }

    /// Numeric value under the embedding x -> `root`.
    pub fn embed_f64(&self, root: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.num.iter().rev() {
            acc = acc * root + c.to_f64().unwrap_or(f64::NAN);
        }
        acc / self.den.to_f64().unwrap_or(f64::NAN)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumberField {
    pub minpoly: IntPoly,
    pub degree: usize,
    power_sums: Vec<BigInt>,
}

impl NumberField {
    pub fn new(minpoly: IntPoly) -> Self {
        assert!(minpoly.is_monic() && minpoly.degree() >= 1, "minimal polynomial must be monic");
        let n = minpoly.degree() as usize;
        // Newton identities for the power sums p_0..p_{n-1}
        let m = &minpoly.coeffs;
        let mut ps = vec![BigInt::from(n)];
        for k in 1..n {
            let mut s = BigInt::from(k) * &m[n - k];
            for i in 1..k {
                s += &m[n - i] * &ps[k - i];
            }
            ps.push(-s);
        }
        NumberField { minpoly, degree: n, power_sums: ps }
    }

    pub fn zero(&self) -> NfElem {
        NfElem::from_ints(&[], self.degree)
    }

    pub fn one(&self) -> NfElem {
        self.from_int(BigInt::one())
    }

    pub fn from_int(&self, c: BigInt) -> NfElem {
        let mut num = vec![BigInt::zero(); self.degree];
        num[0] = c;
        NfElem { num, den: BigInt::one() }
    }

    pub fn from_rational(&self, c: &BigRational) -> NfElem {
        let mut num = vec![BigInt::zero(); self.degree];
        num[0] = c.numer().clone();
        NfElem::reduced(num, c.denom().clone())
    }

    /// The generator x.
    pub fn gen(&self) -> NfElem {
        self.from_poly(&IntPoly::x())
    }

    /// Reduce an integer polynomial in the generator.
    pub fn from_poly(&self, p: &IntPoly) -> NfElem {
        let r = p.rem_monic(&self.minpoly);
        let mut num = r.coeffs;
        num.resize(self.degree, BigInt::zero());
        NfElem { num, den: BigInt::one() }
    }

    pub fn from_poly_den(&self, p: &IntPoly, den: &BigInt) -> NfElem {
        let e = self.from_poly(p);
        NfElem::reduced(e.num, den.clone())
    }

    pub fn add(&self, a: &NfElem, b: &NfElem) -> NfElem {
        let den = &a.den * &b.den;
        let num = (0..self.degree)
            .map(|i| &a.num[i] * &b.den + &b.num[i] * &a.den)
            .collect();
        NfElem::reduced(num, den)
    }

    pub fn neg(&self, a: &NfElem) -> NfElem {
        NfElem {
            num: a.num.iter().map(|c| -c).collect(),
            den: a.den.clone(),
        }
    }

    pub fn sub(&self, a: &NfElem, b: &NfElem) -> NfElem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &NfElem, b: &NfElem) -> NfElem {
        let p = a.numerator_poly().mul(&b.numerator_poly()).rem_monic(&self.minpoly);
        let mut num = p.coeffs;
        num.resize(self.degree, BigInt::zero());
        NfElem::reduced(num, &a.den * &b.den)
    }

    pub fn scale(&self, a: &NfElem, k: &BigRational) -> NfElem {
        NfElem::reduced(
            a.num.iter().map(|c| c * k.numer()).collect(),
            &a.den * k.denom(),
        )
    }

    pub fn pow(&self, a: &NfElem, mut e: u64) -> NfElem {
        let mut acc = self.one();
        let mut b = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            e >>= 1;
            if e > 0 {
                b = self.mul(&b, &b);
            }
        }
        acc
    }

    /// Evaluate an integer polynomial at an element (Horner).
    pub fn eval_poly(&self, p: &IntPoly, at: &NfElem) -> NfElem {
        let mut acc = self.zero();
        for c in p.coeffs.iter().rev() {
            acc = self.add(&self.mul(&acc, at), &self.from_int(c.clone()));
        }
        acc
    }

    /// Image of an element of another field whose generator maps to `image`.
    pub fn map_from(&self, u: &NfElem, image: &NfElem) -> NfElem {
        let mut acc = self.zero();
        for c in u.num.iter().rev() {
            acc = self.add(&self.mul(&acc, image), &self.from_int(c.clone()));
        }
        NfElem::reduced(acc.num, &acc.den * &u.den)
    }

    /// Absolute norm as an exact rational.
    pub fn norm(&self, a: &NfElem) -> BigRational {
        if a.is_zero() {
            return BigRational::zero();
        }
        let res = resultant(&self.minpoly, &a.numerator_poly());
        BigRational::new(res, num_traits::pow::Pow::pow(&a.den, self.degree as u32))
    }

    /// Norm of an element with integral coordinates.
    pub fn norm_int(&self, a: &NfElem) -> BigInt {
        let n = self.norm(a);
        assert!(n.is_integer(), "norm of a non-integral element");
        n.to_integer()
    }

    pub fn trace(&self, a: &NfElem) -> BigRational {
        let s: BigInt = a
            .num
            .iter()
            .zip(&self.power_sums)
            .map(|(c, p)| c * p)
            .sum();
        BigRational::new(s, a.den.clone())
    }

    /// Image in F_p[x]/(factor) where `factor` is a monic divisor of the
    /// minimal polynomial mod p.
    pub fn reduce(&self, a: &NfElem, p: u64, factor: &[u64]) -> Result<Vec<u64>> {
        let d = big_mod_u64(&a.den, p);
        if d == 0 {
            return Err(FreyError::NonIntegral {
                q: p,
                den: a.den.to_string(),
            });
        }
        let num = zmodp::rem(&a.numerator_poly().reduce_mod(p), factor, p);
        Ok(zmodp::scale(&num, crate::arith::inv_mod(d, p), p))
    }

    /// Image under the residue map x -> `root` in F_p.
    pub fn reduce_at_root(&self, a: &NfElem, p: u64, root: u64) -> Result<u64> {
        let v = self.reduce(a, p, &[crate::arith::sub_mod(0, root % p, p), 1])?;
        Ok(v.first().copied().unwrap_or(0))
    }
}
