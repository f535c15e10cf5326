//! The Frey hyperelliptic curve C_r(a,b): y^2 = H(x) + b^r - a^r, together with
//! its discriminant, the twisted family C'_r(t), the Legendre companion and the
//! (a,b) <-> (b,a) twist.

use crate::arith::big_pow;
use crate::error::{FreyError, Result};
use crate::freypoly::{big_h, chebyshev_coeffs};
use crate::poly::{discriminant, discriminant_rational, IntPoly};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BaseTag {
    RationalIntegers,
    KIntegers,
    FiniteField { p: u64, modulus: Vec<u64> },
}

/// y^2 = f(x) with f monic of odd degree 2g + 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HyperellipticModel {
    pub f: IntPoly,
    pub genus: usize,
    pub base: BaseTag,
}

impl HyperellipticModel {
    pub fn new(f: IntPoly) -> Result<Self> {
        let d = f.degree();
        if d < 3 || d % 2 == 0 || !f.is_monic() {
            return Err(FreyError::invalid(format!(
                "model must be monic of odd degree >= 3, got degree {d}"
            )));
        }
        Ok(HyperellipticModel { f, genus: (d as usize - 1) / 2, base: BaseTag::RationalIntegers })
    }

    /// 2^{4g} disc(f), the discriminant of the model y^2 = f(x).
    pub fn discriminant(&self) -> BigInt {
        discriminant(&self.f) * big_pow(&BigInt::from(2), 4 * self.genus as u64)
    }
}

/// Checks gcd(a, b) = 1 and a^r + b^r != 0.
pub fn validate_pair(r: u64, a: &BigInt, b: &BigInt) -> Result<()> {
    if !a.gcd(b).is_one() {
        return Err(FreyError::InvalidSolution { a: a.to_string(), b: b.to_string() });
    }
    if (big_pow(a, r) + big_pow(b, r)).is_zero() {
        return Err(FreyError::SingularCurve { r, a: a.to_string(), b: b.to_string() });
    }
    Ok(())
}

pub fn frey_curve(r: u64, a: &BigInt, b: &BigInt) -> Result<HyperellipticModel> {
    chebyshev_coeffs(r)?;
    validate_pair(r, a, b)?;
    let f = big_h(r, a, b)?.add(&IntPoly::constant(big_pow(b, r) - big_pow(a, r)));
    HyperellipticModel::new(f)
}

/// (-1)^g 2^{2(r-1)} r^r (a^r + b^r)^{r-1}
pub fn closed_form_discriminant(r: u64, a: &BigInt, b: &BigInt) -> BigInt {
    let g = (r - 1) / 2;
    let u = big_pow(a, r) + big_pow(b, r);
    let v = big_pow(&BigInt::from(2), 2 * (r - 1)) * big_pow(&BigInt::from(r), r) * big_pow(&u, r - 1);
    if g % 2 == 1 {
        -v
    } else {
        v
    }
}

/// Closed-form discriminant, cross-checked against the model's resultant
/// discriminant.
pub fn curve_discriminant(r: u64, a: &BigInt, b: &BigInt) -> Result<BigInt> {
    let model = frey_curve(r, a, b)?;
    let closed = closed_form_discriminant(r, a, b);
    let direct = model.discriminant();
    if closed != direct {
        return Err(FreyError::certificate(
            "curve-discriminant",
            format!("closed form {closed} != model discriminant {direct}"),
        ));
    }
    Ok(closed)
}

/// Rational data attached to a pair (a, b).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreySpecialization {
    pub r: u64,
    pub a: BigInt,
    pub b: BigInt,
    /// a^r / (a^r + b^r)
    pub t0: BigRational,
    /// (a^r - b^r)^2 / (ab)^r, undefined when ab = 0
    pub s0_squared: Option<BigRational>,
    /// t0 - t0^2 = (ab)^r / (a^r + b^r)^2
    pub alpha_squared: BigRational,
    /// 2 t0 - 1, equal to alpha * s0
    pub alpha_s0: BigRational,
}

impl FreySpecialization {
    /// alpha^2 s0^2 = (2 t0 - 1)^2, the squared form of alpha s0 = 2 t0 - 1.
    pub fn alpha_relation_holds(&self) -> bool {
        match &self.s0_squared {
            Some(s2) => &self.alpha_squared * s2 == &self.alpha_s0 * &self.alpha_s0,
            None => self.alpha_squared.is_zero(),
        }
    }
}

pub fn specialization(r: u64, a: &BigInt, b: &BigInt) -> Result<FreySpecialization> {
    validate_pair(r, a, b)?;
    let ar = big_pow(a, r);
    let br = big_pow(b, r);
    let u = &ar + &br;
    let t0 = BigRational::new(ar.clone(), u.clone());
    let abr = big_pow(&(a * b), r);
    let s0_squared = (!abr.is_zero()).then(|| {
        let d = &ar - &br;
        BigRational::new(&d * &d, abr.clone())
    });
    let one = BigRational::one();
    Ok(FreySpecialization {
        r,
        a: a.clone(),
        b: b.clone(),
        alpha_squared: &t0 * (&one - &t0),
        alpha_s0: &t0 * BigRational::from_integer(2.into()) - &one,
        t0,
        s0_squared,
    })
}

/// C'_r(t): sum_k c_k (t - t^2)^k x^{r-2k} + (t - t^2)^g (2t - 1).
pub fn twisted_model(r: u64, t: &BigRational) -> Result<Vec<BigRational>> {
    let c = chebyshev_coeffs(r)?;
    let a2 = t - t * t;
    let mut v = vec![BigRational::zero(); r as usize + 1];
    let mut pw = BigRational::one();
    for (k, ck) in c.iter().enumerate() {
        v[r as usize - 2 * k] = BigRational::from_integer(ck.clone()) * &pw;
        if k + 1 < c.len() {
            pw *= &a2;
        }
    }
    // pw is now (t - t^2)^g
    v[0] += pw * (t * BigRational::from_integer(2.into()) - BigRational::one());
    Ok(v)
}

/// (-1)^g 2^{2(r-1)} r^r (t(1-t))^{2g^2}, the discriminant of C'_r(t).
pub fn twisted_discriminant(r: u64, t: &BigRational) -> BigRational {
    let g = (r - 1) / 2;
    let base = t * (BigRational::one() - t);
    let v = BigRational::from_integer(
        big_pow(&BigInt::from(2), 2 * (r - 1)) * big_pow(&BigInt::from(r), r),
    ) * num_traits::pow::Pow::pow(&base, (2 * g * g) as u32);
    if g % 2 == 1 {
        -v
    } else {
        v
    }
}

/// Model discriminant 2^{4g} disc(f) of a rational odd-degree model.
pub fn rational_model_discriminant(f: &[BigRational]) -> BigRational {
    let g = (f.len() - 2) / 2;
    discriminant_rational(f) * BigRational::from_integer(big_pow(&BigInt::from(2), 4 * g as u64))
}

/// The quadratic-twist model f^delta(x) = delta^n f(x / delta).
pub fn scaled_twist(f: &IntPoly, delta: &BigRational) -> Vec<BigRational> {
    let n = f.degree() as usize;
    (0..=n)
        .map(|i| BigRational::from_integer(f.coeff(i)) * num_traits::pow::Pow::pow(delta, (n - i) as u32))
        .collect()
}

/// delta = -(ab)^g / (a^r + b^r): C'_r(t0) is the twist of C_r(a,b) by it.
pub fn twist_parameter(r: u64, a: &BigInt, b: &BigInt) -> BigRational {
    let g = (r - 1) / 2;
    -BigRational::new(big_pow(&(a * b), g), big_pow(a, r) + big_pow(b, r))
}

/// Legendre curve y^2 = x(x-1)(x-t0) and its integral model
/// Y^2 = X(X - u^2)(X - u a^r), u = a^r + b^r.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LegendreCurve {
    pub t0: BigRational,
    pub u: BigInt,
    pub integral_model: HyperellipticModel,
    pub j_invariant: BigRational,
}

pub fn legendre_companion(r: u64, a: &BigInt, b: &BigInt) -> Result<LegendreCurve> {
    validate_pair(r, a, b)?;
    if (a * b).is_zero() {
        return Err(FreyError::DegenerateLegendre);
    }
    let ar = big_pow(a, r);
    let u = &ar + big_pow(b, r);
    let t0 = BigRational::new(ar.clone(), u.clone());
    let e2 = &u * &u;
    let e3 = &u * &ar;
    // X^3 - (e2 + e3) X^2 + e2 e3 X
    let cubic = IntPoly::new(vec![BigInt::zero(), &e2 * &e3, -(&e2 + &e3), BigInt::one()]);
    let abr = big_pow(&(a * b), r);
    let num = big_pow(&(&u * &u - &abr), 3) * BigInt::from(256);
    let den = &abr * &abr * &u * &u;
    Ok(LegendreCurve {
        t0,
        u,
        integral_model: HyperellipticModel::new(cubic)?,
        j_invariant: BigRational::new(num, den),
    })
}

/// j = c4^3 / Delta of y^2 = x^3 + a2 x^2 + a4 x + a6.
pub fn j_from_cubic(cubic: &IntPoly) -> BigRational {
    let (a2, a4, a6) = (cubic.coeff(2), cubic.coeff(1), cubic.coeff(0));
    let b2 = &a2 * 4;
    let b4 = &a4 * 2;
    let b6 = &a6 * 4;
    let b8 = &a2 * &a6 * 4 - &a4 * &a4;
    let c4 = &b2 * &b2 - &b4 * 24;
    let delta = -&b2 * &b2 * &b8 - &b4 * &b4 * &b4 * 8 - &b6 * &b6 * 27 + &b2 * &b4 * &b6 * 9;
    BigRational::new(&c4 * &c4 * &c4, delta)
}

/// Sign relating traces of C_r(b,a) to those of C_r(a,b) at a prime of norm N.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InterchangeTwist {
    pub r: u64,
    #[serde(with = "crate::arith::decimal")]
    pub a: BigInt,
    #[serde(with = "crate::arith::decimal")]
    pub b: BigInt,
}

impl InterchangeTwist {
    /// +1 when N = 1 mod 4, -1 when N = 3 mod 4 (twist by -1).
    pub fn sign(&self, norm: u64) -> i8 {
        assert!(norm % 2 == 1, "interchange sign needs an odd norm");
        if norm % 4 == 1 {
            1
        } else {
            -1
        }
    }

    pub fn swapped(&self) -> InterchangeTwist {
        InterchangeTwist { r: self.r, a: self.b.clone(), b: self.a.clone() }
    }
}

pub fn twist_class(r: u64, a: &BigInt, b: &BigInt) -> Result<InterchangeTwist> {
    validate_pair(r, a, b)?;
    Ok(InterchangeTwist { r, a: a.clone(), b: b.clone() })
}

/// True when |x| is a perfect square (used to pick exact s0 samples).
pub fn is_square(x: &BigInt) -> bool {
    !x.is_negative() && crate::poly::exact_sqrt(x).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freypoly::disc_fminus;
    use proptest::prelude::*;

    fn bi(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn literal_discriminants() {
        assert_eq!(curve_discriminant(5, &bi(0), &bi(1)).unwrap(), bi(800000));
        assert_eq!(curve_discriminant(3, &bi(1), &bi(1)).unwrap(), bi(-1728));
        let m = frey_curve(3, &bi(1), &bi(1)).unwrap();
        assert_eq!(m.f, IntPoly::from_i64(&[0, 3, 0, 1]));
        assert_eq!(m.discriminant(), bi(-1728));
        assert_eq!(frey_curve(5, &bi(0), &bi(1)).unwrap().f, IntPoly::from_i64(&[1, 0, 0, 0, 0, 1]));
    }

    #[test]
    fn r11_model() {
        let m = frey_curve(11, &bi(2), &bi(1)).unwrap();
        // coefficients ascending: x^0 .. x^11
        let asc = [1 - 2048, 11 * 32, 0, 55 * 16, 0, 77 * 8, 0, 44 * 4, 0, 11 * 2, 0, 1];
        assert_eq!(m.f, IntPoly::from_i64(&asc));
        assert!(curve_discriminant(7, &bi(3), &bi(2)).unwrap().is_negative());
    }

    #[test]
    fn excluded_inputs() {
        assert!(matches!(frey_curve(5, &bi(1), &bi(-1)), Err(FreyError::SingularCurve { .. })));
        assert!(matches!(frey_curve(5, &bi(2), &bi(4)), Err(FreyError::InvalidSolution { .. })));
        assert!(matches!(legendre_companion(5, &bi(0), &bi(1)), Err(FreyError::DegenerateLegendre)));
    }

    #[test]
    fn legendre_examples() {
        let l = legendre_companion(5, &bi(1), &bi(1)).unwrap();
        assert_eq!(l.t0, BigRational::new(1.into(), 2.into()));
        let l = legendre_companion(5, &bi(2), &bi(1)).unwrap();
        assert_eq!(l.t0, BigRational::new(32.into(), 33.into()));
        assert_eq!(l.j_invariant, j_from_cubic(&l.integral_model.f));
        // j of the Legendre form in t
        let t = &l.t0;
        let one = BigRational::one();
        let num = (t * t - t + &one).pow(3) * BigRational::from_integer(256.into());
        let den = (t * t) * ((&one - t) * (&one - t));
        assert_eq!(l.j_invariant, num / den);
    }

    #[test]
    fn interchange_sign() {
        let tw = twist_class(5, &bi(2), &bi(1)).unwrap();
        assert_eq!(tw.sign(13), 1);
        assert_eq!(tw.sign(7), -1);
        assert_eq!(tw.swapped().swapped(), tw);
    }

    proptest! {
        #[test]
        fn closed_form_matches_model(r in prop::sample::select(vec![3u64, 5, 7, 11]), a in -30i64..30, b in -30i64..30) {
            let (a, b) = (bi(a), bi(b));
            prop_assume!(validate_pair(r, &a, &b).is_ok());
            prop_assert!(curve_discriminant(r, &a, &b).is_ok());
        }

        #[test]
        fn t0_identity(r in prop::sample::select(vec![3u64, 5, 7, 11]), a in -40i64..40, b in -40i64..40) {
            let (a, b) = (bi(a), bi(b));
            prop_assume!(validate_pair(r, &a, &b).is_ok());
            let s = specialization(r, &a, &b).unwrap();
            let u = big_pow(&a, r) + big_pow(&b, r);
            let lhs = &s.t0 * (BigRational::one() - &s.t0) * BigRational::from_integer(&u * &u);
            prop_assert_eq!(lhs, BigRational::from_integer(big_pow(&(&a * &b), r)));
            prop_assert!(s.alpha_relation_holds());
        }

        #[test]
        fn model_discriminant_shape(r in prop::sample::select(vec![3u64, 5, 7]), a in 1i64..40, b in 1i64..40, p in prop::sample::select(vec![2u64, 3, 5])) {
            let (a, b) = (bi(a), bi(b));
            prop_assume!(validate_pair(r, &a, &b).is_ok());
            // write a^r + b^r = d c^p with c maximal
            let u = big_pow(&a, r) + big_pow(&b, r);
            let fact = crate::arith::factor_bounded(&u, 1000);
            prop_assume!(fact.is_complete());
            let mut c = BigInt::one();
            for (l, e) in &fact.primes {
                c *= big_pow(l, (*e as u64) / p);
            }
            let d = &u / big_pow(&c, p);
            let g = (r - 1) / 2;
            let want = big_pow(&bi(2), 2 * (r - 1)) * big_pow(&bi(r as i64), r)
                * big_pow(&d, r - 1) * big_pow(&c, p * (r - 1));
            prop_assert_eq!(curve_discriminant(r, &a, &b).unwrap(), if g % 2 == 1 { -want } else { want });
        }

        #[test]
        fn twisted_family_is_twist_of_model(r in prop::sample::select(vec![3u64, 5, 7]), a in 1i64..20, b in 1i64..20) {
            let (a, b) = (bi(a), bi(b));
            prop_assume!(validate_pair(r, &a, &b).is_ok());
            let s = specialization(r, &a, &b).unwrap();
            let twisted = twisted_model(r, &s.t0).unwrap();
            let model = frey_curve(r, &a, &b).unwrap();
            let delta = twist_parameter(r, &a, &b);
            prop_assert_eq!(&twisted, &scaled_twist(&model.f, &delta));
            // discriminants: closed form of the family, scaling law, and direct computation agree
            let g = (r - 1) / 2;
            let d_twisted = rational_model_discriminant(&twisted);
            prop_assert_eq!(&d_twisted, &twisted_discriminant(r, &s.t0));
            let scaled = BigRational::from_integer(closed_form_discriminant(r, &a, &b))
                * num_traits::pow::Pow::pow(&delta, (2 * g * (2 * g + 1)) as u32);
            prop_assert_eq!(d_twisted, scaled);
        }

        #[test]
        fn fminus_disc_matches_f_at_s0(r in prop::sample::select(vec![3u64, 5]), x in 1i64..6, y in 1i64..6) {
            prop_assume!(num_integer::gcd(x, y) == 1);
            let (a, b) = (bi(x * x), bi(y * y));
            let s0 = BigRational::new(big_pow(&a, r) - big_pow(&b, r), big_pow(&bi(x * y), r));
            prop_assert_eq!(
                s0.clone() * s0.clone(),
                specialization(r, &a, &b).unwrap().s0_squared.unwrap()
            );
            prop_assert!(disc_fminus(r, &s0).unwrap().is_positive() == (r % 4 == 1));
        }
    }
}
