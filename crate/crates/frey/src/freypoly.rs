//! Chebyshev-coefficient polynomials behind the Frey curves and a battery of
//! exact identities they satisfy.

use crate::arith::{big_pow, binomial, is_prime};
use crate::cyclofield::{CycloRealField, KElement};
use crate::error::{FreyError, Result};
use crate::numfield::NumberField;
use crate::poly::IntPoly;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

fn check_r(r: u64) -> Result<()> {
    if r < 3 || !is_prime(r) {
        return Err(FreyError::invalid(format!("r = {r} is not an odd prime")));
    }
    Ok(())
}

/// c_k = r/(r-k) * binom(r-k, k) for k = 0..=(r-1)/2.
pub fn chebyshev_coeffs(r: u64) -> Result<Vec<BigInt>> {
    check_r(r)?;
    Ok((0..=(r - 1) / 2)
        .map(|k| {
            let num = BigInt::from(r) * binomial(r - k, k);
            let (q, rem) = num.div_rem(&BigInt::from(r - k));
            debug_assert!(rem.is_zero());
            q
        })
        .collect())
}

/// H(x) = sum_k c_k (ab)^k x^{r-2k}.
pub fn big_h(r: u64, a: &BigInt, b: &BigInt) -> Result<IntPoly> {
    let c = chebyshev_coeffs(r)?;
    let ab = a * b;
    let mut coeffs = vec![BigInt::zero(); r as usize + 1];
    let mut abk = BigInt::one();
    for (k, ck) in c.iter().enumerate() {
        coeffs[r as usize - 2 * k] = ck * &abk;
        abk *= &ab;
    }
    Ok(IntPoly::new(coeffs))
}

/// (a^r + b^r) / (a + b); requires a + b != 0.
pub fn phi_r(r: u64, a: &BigInt, b: &BigInt) -> BigInt {
    let s = big_pow(a, r) + big_pow(b, r);
    let d = a + b;
    assert!(!d.is_zero(), "phi_r needs a + b != 0");
    let (q, rem) = s.div_rem(&d);
    debug_assert!(rem.is_zero());
    q
}

/// x * h(x^2 + 2), computed from h directly.
pub fn x_h_shifted(h: &IntPoly) -> IntPoly {
    h.compose(&IntPoly::from_i64(&[2, 0, 1])).shift(1)
}

/// Coefficients of f^-(x) = x h(x^2 + 2) + s as rationals.
pub fn f_minus(r: u64, s: &BigRational) -> Result<Vec<BigRational>> {
    let c = chebyshev_coeffs(r)?;
    let mut v = vec![BigRational::zero(); r as usize + 1];
    for (k, ck) in c.iter().enumerate() {
        v[r as usize - 2 * k] = BigRational::from_integer(ck.clone());
    }
    v[0] += s;
    Ok(v)
}

/// Closed form (-1)^g r^r (s^2 + 4)^g of disc(f^-), with s left symbolic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiscClosedForm {
    pub sign: i8,
    #[serde(with = "crate::arith::decimal")]
    pub r_pow_r: BigInt,
    /// exponent of (s^2 + 4)
    pub exponent: u64,
}

pub fn disc_fminus_symbolic(r: u64) -> Result<DiscClosedForm> {
    check_r(r)?;
    let g = (r - 1) / 2;
    Ok(DiscClosedForm {
        sign: if g % 2 == 0 { 1 } else { -1 },
        r_pow_r: big_pow(&BigInt::from(r), r),
        exponent: g,
    })
}

pub fn disc_fminus(r: u64, s: &BigRational) -> Result<BigRational> {
    let c = disc_fminus_symbolic(r)?;
    let base = s * s + BigRational::from_integer(4.into());
    let v = BigRational::from_integer(c.r_pow_r) * num_traits::pow::Pow::pow(&base, c.exponent as u32);
    Ok(if c.sign < 0 { -v } else { v })
}

/// a + bi over Z.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussInt {
    pub re: BigInt,
    pub im: BigInt,
}

impl GaussInt {
    fn zero() -> Self {
        GaussInt { re: BigInt::zero(), im: BigInt::zero() }
    }
    fn add(&self, o: &Self) -> Self {
        GaussInt { re: &self.re + &o.re, im: &self.im + &o.im }
    }
    fn mul(&self, o: &Self) -> Self {
        GaussInt {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
    /// i^k
    fn i_pow(k: usize) -> Self {
        let one = BigInt::one();
        match k % 4 {
            0 => GaussInt { re: one, im: BigInt::zero() },
            1 => GaussInt { re: BigInt::zero(), im: one },
            2 => GaussInt { re: -one, im: BigInt::zero() },
            _ => GaussInt { re: BigInt::zero(), im: -one },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussIntPolynomial {
    pub coeffs: Vec<GaussInt>,
}

impl GaussIntPolynomial {
    pub fn from_int(p: &IntPoly) -> Self {
        GaussIntPolynomial {
            coeffs: p
                .coeffs
                .iter()
                .map(|c| GaussInt { re: c.clone(), im: BigInt::zero() })
                .collect(),
        }
    }

    /// p(unit * x) where unit = i^e.
    pub fn scale_var(&self, e: usize) -> Self {
        GaussIntPolynomial {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c.mul(&GaussInt::i_pow(e * k)))
                .collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = vec![GaussInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        GaussIntPolynomial { coeffs: out }
    }

    fn trimmed(&self) -> Vec<GaussInt> {
        let mut v = self.coeffs.clone();
        while v.last().is_some_and(|c| c.re.is_zero() && c.im.is_zero()) {
            v.pop();
        }
        v
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub passed: bool,
    pub first_failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub r: u64,
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn compare_polys(name: &str, lhs: &IntPoly, rhs: &IntPoly) -> IdentityCheck {
    let n = lhs.coeffs.len().max(rhs.coeffs.len());
    let bad = (0..n).find(|&i| lhs.coeff(i) != rhs.coeff(i));
    IdentityCheck {
        name: name.to_string(),
        passed: bad.is_none(),
        first_failure: bad.map(|i| {
            format!("coefficient of x^{i}: {} != {}", lhs.coeff(i), rhs.coeff(i))
        }),
    }
}

fn bool_check(name: &str, failure: Option<String>) -> IdentityCheck {
    IdentityCheck { name: name.to_string(), passed: failure.is_none(), first_failure: failure }
}

/// Element of K(i) = K[y]/(y^2 + 1) as (re, im).
type KiElem = (KElement, KElement);

fn ki_mul(k: &NumberField, a: &KiElem, b: &KiElem) -> KiElem {
    (
        k.sub(&k.mul(&a.0, &b.0), &k.mul(&a.1, &b.1)),
        k.add(&k.mul(&a.0, &b.1), &k.mul(&a.1, &b.0)),
    )
}

fn ki_eval(k: &NumberField, p: &IntPoly, at: &KiElem) -> KiElem {
    let mut acc = (k.zero(), k.zero());
    for c in p.coeffs.iter().rev() {
        acc = ki_mul(k, &acc, at);
        acc.0 = k.add(&acc.0, &k.from_int(c.clone()));
    }
    acc
}

/// Run every identity for a given r. Failures are reported, not raised.
pub fn identity_suite(r: u64) -> Result<IdentityReport> {
    let field = CycloRealField::new(r)?;
    let h = field.h().clone();
    let g = field.g;
    let c = chebyshev_coeffs(r)?;
    let rb = BigInt::from(r);
    let mut checks = Vec::new();

    // x h(x^2+2) against the Chebyshev closed form
    let xh = x_h_shifted(&h);
    let h1 = big_h(r, &BigInt::one(), &BigInt::one())?;
    checks.push(compare_polys("chebyshev-expansion", &xh, &h1));

    // (a) d/dx [x h(x^2+2)] = (-1)^g r h(-(x^2+2))
    let sign = if g % 2 == 0 { BigInt::one() } else { -BigInt::one() };
    let rhs_a = h.compose(&IntPoly::from_i64(&[-2, 0, -1])).scale(&(&sign * &rb));
    checks.push(compare_polys("derivative-integral", &xh.derivative(), &rhs_a));

    // (b) d/dx H(x,1) = r h(ix) h(-ix) over Z[i]
    let hg = GaussIntPolynomial::from_int(&h);
    let prod = hg.scale_var(1).mul(&hg.scale_var(3));
    let lhs_b = GaussIntPolynomial::from_int(&h1.derivative());
    let rhs_b: Vec<GaussInt> = prod
        .coeffs
        .iter()
        .map(|z| GaussInt { re: &z.re * &rb, im: &z.im * &rb })
        .collect();
    let rhs_b = GaussIntPolynomial { coeffs: rhs_b }.trimmed();
    let lhs_b = lhs_b.trimmed();
    let fail_b = if lhs_b == rhs_b {
        None
    } else {
        let i = (0..lhs_b.len().max(rhs_b.len()))
            .find(|&i| lhs_b.get(i) != rhs_b.get(i))
            .unwrap_or(0);
        Some(format!("Gaussian coefficient of x^{i} differs"))
    };
    checks.push(bool_check("derivative-gaussian", fail_b));

    // (c) X^{r-1}(X^{2r} - 1) = (X^{r+1} - X^{r-1}) * X^{r-1} h(X^2 + X^{-2})
    let x4p1 = IntPoly::from_i64(&[1, 0, 0, 0, 1]);
    let mut cleared = IntPoly::zero();
    for (k, hk) in h.coeffs.iter().enumerate() {
        cleared = cleared.add(&x4p1.pow(k as u32).scale(hk).shift(r as usize - 1 - 2 * k));
    }
    let lhs_c = IntPoly::monomial(BigInt::one(), 2 * r as usize)
        .sub(&IntPoly::from_i64(&[1]))
        .shift(r as usize - 1);
    let factor = IntPoly::monomial(BigInt::one(), r as usize + 1)
        .sub(&IntPoly::monomial(BigInt::one(), r as usize - 1));
    checks.push(compare_polys("cyclotomic-relation", &lhs_c, &factor.mul(&cleared)));

    // (d) X^r [ (X - 1/X) h((X - 1/X)^2 + 2) + s ] = X^{2r} + s X^r - 1,
    // tracked as (s^0 part, s^1 part) after expanding sum_j F_j (X^2 - 1)^j X^{r-j}
    let x2m1 = IntPoly::from_i64(&[-1, 0, 1]);
    let mut s0 = IntPoly::zero();
    for (j, fj) in xh.coeffs.iter().enumerate() {
        s0 = s0.add(&x2m1.pow(j as u32).scale(fj).shift(r as usize - j));
    }
    let s1 = IntPoly::monomial(BigInt::one(), r as usize);
    let want0 = IntPoly::monomial(BigInt::one(), 2 * r as usize).sub(&IntPoly::from_i64(&[1]));
    let want1 = IntPoly::monomial(BigInt::one(), r as usize);
    let mut d = compare_polys("quotient-map", &s0, &want0);
    if d.passed {
        d = compare_polys("quotient-map", &s1, &want1);
    }
    checks.push(d);

    // (e) H(i w_j, 1) = 2 i^r and H(-i w_j, 1) = -2 i^r in K(i)
    let k = field.field();
    let two_ir = {
        let t = GaussInt::i_pow(r as usize);
        (k.from_int(&t.re * 2), k.from_int(&t.im * 2))
    };
    let mut fail_e = None;
    for s in field.galois_group() {
        let wj = field.galois_apply(s, &field.omega());
        for (sgn, want) in [(1i64, two_ir.clone()), (-1, (k.neg(&two_ir.0), k.neg(&two_ir.1)))] {
            let at = (k.zero(), k.scale(&wj, &BigRational::from_integer(sgn.into())));
            if ki_eval(k, &h1, &at) != want {
                let m = if sgn < 0 { "-" } else { "" };
                fail_e = Some(format!("H({m}i w_{}) != {m}2 i^r", s.j));
                break;
            }
        }
        if fail_e.is_some() {
            break;
        }
    }
    checks.push(bool_check("evaluation", fail_e));

    // (f) Eisenstein shape of the Chebyshev coefficients
    let fail_f = if !c[0].is_one() {
        Some(format!("c_0 = {}", c[0]))
    } else if let Some(kk) = (1..c.len()).find(|&kk| !(&c[kk] % &rb).is_zero()) {
        Some(format!("r does not divide c_{kk} = {}", c[kk]))
    } else if c[g] != rb {
        Some(format!("c_g = {} != r", c[g]))
    } else {
        None
    };
    checks.push(bool_check("eisenstein", fail_f));

    Ok(IdentityReport { r, checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{discriminant, discriminant_rational};
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn chebyshev_lists() {
        assert_eq!(chebyshev_coeffs(3).unwrap(), ints(&[1, 3]));
        assert_eq!(chebyshev_coeffs(5).unwrap(), ints(&[1, 5, 5]));
        assert_eq!(chebyshev_coeffs(7).unwrap(), ints(&[1, 7, 14, 7]));
        assert_eq!(chebyshev_coeffs(11).unwrap(), ints(&[1, 11, 44, 77, 55, 11]));
    }

    #[test]
    fn big_h_examples() {
        let one = BigInt::one();
        assert_eq!(big_h(5, &BigInt::zero(), &one).unwrap(), IntPoly::from_i64(&[0, 0, 0, 0, 0, 1]));
        assert_eq!(big_h(5, &one, &one).unwrap(), IntPoly::from_i64(&[0, 5, 0, 5, 0, 1]));
        let h = big_h(5, &BigInt::from(2), &one).unwrap();
        assert_eq!(h.eval(&one), BigInt::from(31));
    }

    #[test]
    fn r3_derivative_by_hand() {
        // 3x^2 + 3 both sides
        let rep = identity_suite(3).unwrap();
        assert!(rep.all_passed(), "{rep:?}");
    }

    #[test]
    fn suite_passes_through_31() {
        for r in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
            let rep = identity_suite(r).unwrap();
            assert_eq!(rep.checks.len(), 7);
            assert!(rep.all_passed(), "r = {r}: {rep:?}");
        }
    }

    #[test]
    fn fminus_discriminant_against_resultant() {
        assert_eq!(disc_fminus(5, &BigRational::zero()).unwrap(), BigRational::from_integer(50000.into()));
        assert_eq!(disc_fminus(3, &BigRational::one()).unwrap(), BigRational::from_integer((-135).into()));
        for r in [3u64, 5, 7, 11] {
            for s in [-3i64, 0, 1, 2, 7] {
                let s = BigRational::from_integer(s.into());
                let f = f_minus(r, &s).unwrap();
                assert_eq!(discriminant_rational(&f), disc_fminus(r, &s).unwrap(), "r={r} s={s}");
            }
            let s = BigRational::new(3.into(), 7.into());
            assert_eq!(discriminant_rational(&f_minus(r, &s).unwrap()), disc_fminus(r, &s).unwrap());
        }
        assert_eq!(disc_fminus_symbolic(5).unwrap().sign, 1);
        assert_eq!(disc_fminus_symbolic(7).unwrap().sign, -1);
        let _ = discriminant(&IntPoly::from_i64(&[0, 3, 0, 1]));
    }

    proptest! {
        #[test]
        fn h_at_a_minus_b(a in -60i64..60, b in -60i64..60, r in prop::sample::select(vec![3u64, 5, 7, 11, 13])) {
            let (a, b) = (BigInt::from(a), BigInt::from(b));
            let h = big_h(r, &a, &b).unwrap();
            prop_assert_eq!(h.eval(&(&a - &b)), big_pow(&a, r) - big_pow(&b, r));
        }

        #[test]
        fn phi_congruence_when_r_divides_sum(m in -40i64..40, a in 1i64..80, r in prop::sample::select(vec![3u64, 5, 7, 11])) {
            let b = r as i64 * m - a;
            prop_assume!(a % r as i64 != 0 && a + b != 0);
            let (ab, bb) = (BigInt::from(a), BigInt::from(b));
            let r2 = BigInt::from(r * r);
            let lhs = phi_r(r, &ab, &bb).mod_floor(&r2);
            let rhs = (BigInt::from(r) * big_pow(&ab, r - 1)).mod_floor(&r2);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn fminus_disc_at_square_ab(x in 1i64..12, y in 1i64..12, r in prop::sample::select(vec![3u64, 5, 7])) {
            // a = x^2, b = y^2 makes s0 = (a^r - b^r)/(ab)^{r/2} rational
            prop_assume!(num_integer::gcd(x, y) == 1);
            let (a, b) = (BigInt::from(x * x), BigInt::from(y * y));
            let s0 = BigRational::new(big_pow(&a, r) - big_pow(&b, r), big_pow(&BigInt::from(x * y), r));
            let f = f_minus(r, &s0).unwrap();
            prop_assert_eq!(discriminant_rational(&f), disc_fminus(r, &s0).unwrap());
        }
    }
}
