//! L-polynomials of the Frey Jacobians over residue fields and the trace sets
//! T_q of Frobenius traces at the primes of K above q.
//!
//! Traces are never read off a factorization over K. Instead the real Weil
//! polynomial P(Y), whose roots are the conjugates of a_q, is computed over Z;
//! its real roots are located numerically and matched against the real
//! embeddings of K; every candidate is then certified exactly.

use crate::arith::{big_mod_u64, binomial, mul_mod, pow_mod};
use crate::curves::{frey_curve, HyperellipticModel};
use crate::cyclofield::{CycloRealField, GaloisMap, KElement, PrimeLabel, PrimeSplitting};
use crate::error::{FreyError, Result};
use crate::ffield::{count_points_reduced, has_good_reduction, FiniteFieldSpec};
use crate::freypoly::chebyshev_coeffs;
use crate::numfield::NfElem;
use crate::poly::{gcd_z, IntPoly};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

/// Above this value of Q^g only the counts forced by real multiplication are taken.
pub const FULL_L_LIMIT: f64 = 1.0e7;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LPolynomial {
    #[serde(with = "crate::arith::decimal::vec")]
    pub coeffs: Vec<BigInt>,
    pub q_norm: u64,
    pub genus: usize,
}

impl LPolynomial {
    /// Characteristic polynomial of Frobenius, X^{2g} L(1/X).
    pub fn frobenius_charpoly(&self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().rev().cloned().collect())
    }

    pub fn satisfies_functional_equation(&self) -> bool {
        let g = self.genus;
        let q = BigInt::from(self.q_norm);
        self.coeffs.len() == 2 * g + 1
            && self.coeffs[0].is_one()
            && (0..g).all(|i| self.coeffs[2 * g - i] == num_traits::pow::Pow::pow(&q, (g - i) as u32) * &self.coeffs[i])
    }

    /// Power sums S_1..S_m of the inverse roots.
    pub fn power_sums(&self, m: usize) -> Vec<BigInt> {
        let a = |k: usize| self.coeffs.get(k).cloned().unwrap_or_else(BigInt::zero);
        let mut s: Vec<BigInt> = Vec::with_capacity(m);
        for k in 1..=m {
            // k a_k + sum_{i=1}^{k} S_i a_{k-i} = 0
            let mut acc = BigInt::from(k) * a(k);
            for i in 1..k {
                acc += &s[i - 1] * a(k - i);
            }
            s.push(-acc);
        }
        s
    }

    /// #C(F_{Q^m}) predicted by this L-polynomial.
    pub fn predicted_count(&self, m: usize) -> BigInt {
        let s = self.power_sums(m);
        num_traits::pow::Pow::pow(&BigInt::from(self.q_norm), m as u32) + 1 - &s[m - 1]
    }
}

/// L(X) from N_1..N_g via k a_k = -sum S_i a_{k-i}, completed by the
/// functional equation.
pub fn l_polynomial_from_counts(counts: &[u64], q_norm: u64, genus: usize) -> Result<LPolynomial> {
    if counts.len() < genus {
        return Err(FreyError::invalid(format!("need {genus} counts, got {}", counts.len())));
    }
    let qb = BigInt::from(q_norm);
    let s: Vec<BigInt> = (1..=genus)
        .map(|m| num_traits::pow::Pow::pow(&qb, m as u32) + 1 - BigInt::from(counts[m - 1]))
        .collect();
    l_polynomial_from_power_sums(&s, q_norm, genus)
}

fn l_polynomial_from_power_sums(s: &[BigInt], q_norm: u64, genus: usize) -> Result<LPolynomial> {
    let qb = BigInt::from(q_norm);
    let mut a = vec![BigInt::one()];
    for k in 1..=genus {
        let mut acc = BigInt::zero();
        for i in 1..=k {
            acc += &s[i - 1] * &a[k - i];
        }
        let (quo, rem) = (-acc).div_rem(&BigInt::from(k));
        if !rem.is_zero() {
            return Err(FreyError::InconsistentLPoly(format!("coefficient a_{k} is not integral")));
        }
        a.push(quo);
    }
    for i in (0..genus).rev() {
        let v = num_traits::pow::Pow::pow(&qb, (genus - i) as u32) * &a[i];
        a.push(v);
    }
    Ok(LPolynomial { coeffs: a, q_norm, genus })
}

/// Counts of y^2 = f(x) over F_{q^{f m}} for m = 1..=upto.
fn counts_over(f: &[u64], q: u64, f_deg: usize, upto: usize) -> Result<Vec<u64>> {
    (1..=upto)
        .map(|m| count_points_reduced(f, &FiniteFieldSpec::new(q, f_deg * m)?))
        .collect()
}

/// L-polynomial of y^2 = f(x) over F_{q^f}; with `cross_check` the count over
/// F_{Q^{g+1}} is compared against the prediction when that field is small.
pub fn l_polynomial_checked(model: &HyperellipticModel, q: u64, f: usize, cross_check: bool) -> Result<LPolynomial> {
    let g = model.genus;
    let fm = model.f.reduce_mod(q);
    if fm.len() != model.f.coeffs.len() || !has_good_reduction(&fm, q) {
        return Err(FreyError::BadReduction { q, detail: "model is singular mod q".into() });
    }
    let counts = counts_over(&fm, q, f, g)?;
    let qn = q.pow(f as u32);
    let lp = l_polynomial_from_counts(&counts, qn, g)?;
    if cross_check && (qn as f64).powi(g as i32 + 1) <= FULL_L_LIMIT {
        let n = count_points_reduced(&fm, &FiniteFieldSpec::new(q, f * (g + 1))?)?;
        if BigInt::from(n) != lp.predicted_count(g + 1) {
            return Err(FreyError::InconsistentLPoly(format!(
                "count over F_(Q^{}) is {n}, L-polynomial predicts {}",
                g + 1,
                lp.predicted_count(g + 1)
            )));
        }
    }
    Ok(lp)
}

pub fn l_polynomial(model: &HyperellipticModel, q: u64, f: usize, g: usize) -> Result<LPolynomial> {
    if g != model.genus {
        return Err(FreyError::invalid(format!("genus {g} does not match the model ({})", model.genus)));
    }
    l_polynomial_checked(model, q, f, true)
}

/// P(Y) of degree g with X^g P(X + Q/X) = X^{2g} L(1/X).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RealWeilPolynomial {
    #[serde(with = "crate::arith::decimal::vec")]
    pub coeffs: Vec<BigInt>,
}

impl RealWeilPolynomial {
    pub fn as_poly(&self) -> IntPoly {
        IntPoly::new(self.coeffs.clone())
    }
}

/// X^g P(X + Q/X) as an ordinary polynomial of degree 2g.
pub fn expand_real_weil(p: &IntPoly, q_norm: u64, g: usize) -> IntPoly {
    let qb = BigInt::from(q_norm);
    let mut out = vec![BigInt::zero(); 2 * g + 1];
    for (k, pk) in p.coeffs.iter().enumerate() {
        for j in 0..=k {
            out[g + k - 2 * j] += pk * binomial(k as u64, j as u64) * num_traits::pow::Pow::pow(&qb, j as u32);
        }
    }
    IntPoly::new(out)
}

pub fn real_weil(lp: &LPolynomial) -> Result<RealWeilPolynomial> {
    let g = lp.genus;
    let c = lp.frobenius_charpoly();
    let qb = BigInt::from(lp.q_norm);
    let mut p = vec![BigInt::zero(); g + 1];
    for k in (0..=g).rev() {
        let mut v = c.coeff(g + k);
        let mut kk = k + 2;
        while kk <= g {
            let j = (kk - k) / 2;
            v -= &p[kk] * binomial(kk as u64, j as u64) * num_traits::pow::Pow::pow(&qb, j as u32);
            kk += 2;
        }
        p[k] = v;
    }
    let pp = IntPoly::new(p);
    if expand_real_weil(&pp, lp.q_norm, g) != c {
        return Err(FreyError::InconsistentLPoly("no real Weil polynomial reproduces the L-polynomial".into()));
    }
    Ok(RealWeilPolynomial { coeffs: pp.coeffs })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountingMode {
    /// counts over F_{Q^m}, m = 1..g, full L-polynomial
    FullLPolynomial,
    /// counts over F_{Q^m}, m = 1..g/f, L = L_0^f by real multiplication
    ReducedCounts,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LabelledTrace {
    pub label: PrimeLabel,
    pub value: KElement,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceSet {
    pub r: u64,
    pub q: u64,
    pub f: usize,
    pub norm: u64,
    /// distinct traces, in label order
    pub elements: Vec<KElement>,
    pub prime_assignment: Vec<LabelledTrace>,
    pub real_weil: RealWeilPolynomial,
    pub l_polynomial: LPolynomial,
    pub mode: CountingMode,
}

impl TraceSet {
    pub fn value_at(&self, label_index: usize) -> &KElement {
        &self.prime_assignment[label_index].value
    }
}

/// Yun's squarefree decomposition of a monic polynomial: factors A_i with
/// P = prod A_i^i, returned with their multiplicity.
pub fn squarefree_decomposition(p: &IntPoly) -> Vec<(usize, IntPoly)> {
    let mut out = Vec::new();
    let dp = p.derivative();
    let a0 = gcd_z(p, &dp);
    let mut b = p.div_exact_monic(&a0).expect("exact");
    let mut c = dp.div_exact_monic(&a0).expect("exact");
    let mut d = c.sub(&b.derivative());
    let mut i = 1;
    while b.degree() > 0 {
        let a = gcd_z(&b, &d);
        let a = if a.leading().is_negative() { a.neg() } else { a };
        b = b.div_exact_monic(&a).expect("exact");
        c = d.div_exact_monic(&a).expect("exact");
        d = c.sub(&b.derivative());
        if a.degree() > 0 {
            out.push((i, a));
        }
        i += 1;
    }
    out
}

fn eval_f64(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &k| acc * x + k)
}

/// Real roots of a squarefree polynomial whose roots are all real, via the
/// interlacing with the roots of its derivative.
pub fn real_roots_all_real(c: &[f64]) -> Vec<f64> {
    let d = c.len() - 1;
    if d == 0 {
        return Vec::new();
    }
    if d == 1 {
        return vec![-c[0] / c[1]];
    }
    let deriv: Vec<f64> = c.iter().enumerate().skip(1).map(|(i, &k)| k * i as f64).collect();
    let crit = real_roots_all_real(&deriv);
    let bound = 1.0 + c[..d].iter().map(|k| (k / c[d]).abs()).fold(0.0, f64::max);
    let mut ends = vec![-bound];
    ends.extend(crit);
    ends.push(bound);
    let mut roots = Vec::with_capacity(d);
    for w in ends.windows(2) {
        let (mut lo, mut hi) = (w[0], w[1]);
        let (mut flo, fhi) = (eval_f64(c, lo), eval_f64(c, hi));
        if flo == 0.0 {
            roots.push(lo);
            continue;
        }
        if flo.signum() == fhi.signum() {
            roots.push(if flo.abs() < fhi.abs() { lo } else { hi });
            continue;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let fm = eval_f64(c, mid);
            if fm == 0.0 {
                lo = mid;
                hi = mid;
                break;
            }
            if fm.signum() == flo.signum() {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        roots.push(0.5 * (lo + hi));
    }
    roots
}

fn invert(mut m: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let n = m.len();
    let mut inv: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs())).unwrap();
        m.swap(col, piv);
        inv.swap(col, piv);
        let d = m[col][col];
        for j in 0..n {
            m[col][j] /= d;
            inv[col][j] /= d;
        }
        for row in 0..n {
            if row != col {
                let f = m[row][col];
                if f != 0.0 {
                    for j in 0..n {
                        m[row][j] -= f * m[col][j];
                        inv[row][j] -= f * inv[col][j];
                    }
                }
            }
        }
    }
    inv
}

/// prod_sigma (X^2 - sigma(u) X + Q) as an integer polynomial, if it is one.
pub fn orbit_product(field: &CycloRealField, u: &KElement, q_norm: u64) -> Option<IntPoly> {
    let k = field.field();
    let mut acc: Vec<KElement> = vec![k.one()];
    let qe = k.from_int(BigInt::from(q_norm));
    for s in field.galois_group() {
        let su = k.neg(&field.galois_apply(s, u));
        let mut next = vec![k.zero(); acc.len() + 2];
        for (i, c) in acc.iter().enumerate() {
            next[i] = k.add(&next[i], &k.mul(c, &qe));
            next[i + 1] = k.add(&next[i + 1], &k.mul(c, &su));
            next[i + 2] = k.add(&next[i + 2], c);
        }
        acc = next;
    }
    acc.iter().map(|c| c.as_integer()).collect::<Option<Vec<_>>>().map(IntPoly::new)
}

/// Find u in O_K whose conjugates are the roots of `p`, invariant under the
/// decomposition group of label 0, and certify the orbit product.
fn recognize(
    field: &CycloRealField,
    p: &IntPoly,
    charpoly: &IntPoly,
    q_norm: u64,
    sp: &PrimeSplitting,
) -> Result<KElement> {
    let g = field.g;
    let mut roots: Vec<(f64, usize)> = Vec::new();
    for (mult, a) in squarefree_decomposition(p) {
        let c: Vec<f64> = a.coeffs.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect();
        for rt in real_roots_all_real(&c) {
            roots.push((rt, mult));
        }
    }
    let emb = field.omega_embeddings();
    let vinv = invert(emb.iter().map(|&w| (0..g).map(|i| w.powi(i as i32)).collect()).collect());
    let decomposition: Vec<GaloisMap> = field
        .galois_group()
        .into_iter()
        .filter(|&s| field.label_image(s, sp, 0).map(|t| t == 0).unwrap_or(false))
        .collect();
    let k = field.field();
    let mut used = vec![0usize; roots.len()];
    let mut choice = vec![0usize; g];
    let mut found = None;

    fn search(
        j: usize,
        g: usize,
        roots: &[(f64, usize)],
        used: &mut [usize],
        choice: &mut [usize],
        test: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if j == g {
            return test(choice);
        }
        for i in 0..roots.len() {
            if used[i] < roots[i].1 {
                used[i] += 1;
                choice[j] = i;
                if search(j + 1, g, roots, used, choice, test) {
                    return true;
                }
                used[i] -= 1;
            }
        }
        false
    }

    let mut test = |choice: &[usize]| -> bool {
        let y: Vec<f64> = choice.iter().map(|&i| roots[i].0).collect();
        let mut coords = Vec::with_capacity(g);
        for row in &vinv {
            let v: f64 = row.iter().zip(&y).map(|(a, b)| a * b).sum();
            let rv = v.round();
            if (v - rv).abs() > 1e-4 * (1.0 + rv.abs()).max(1.0) || !rv.is_finite() {
                return false;
            }
            coords.push(BigInt::from(rv as i64));
        }
        let u = NfElem { num: coords, den: BigInt::one() };
        if decomposition.iter().any(|&s| field.galois_apply(s, &u) != u) {
            return false;
        }
        if !k.eval_poly(p, &u).is_zero() {
            return false;
        }
        if orbit_product(field, &u, q_norm).as_ref() != Some(charpoly) {
            return false;
        }
        found = Some(u);
        true
    };
    search(0, g, &roots, &mut used, &mut choice, &mut test);
    found.ok_or_else(|| FreyError::Recognition(format!("no element of O_K has real Weil polynomial {p}")))
}

/// Reduction of C_r(x, y) mod q from residues x, y.
pub fn reduced_model(r: u64, x: u64, y: u64, q: u64) -> Result<Vec<u64>> {
    let c = chebyshev_coeffs(r)?;
    let xy = mul_mod(x % q, y % q, q);
    let mut f = vec![0u64; r as usize + 1];
    let mut pw = 1u64;
    for (k, ck) in c.iter().enumerate() {
        f[r as usize - 2 * k] = mul_mod(big_mod_u64(ck, q), pw, q);
        pw = mul_mod(pw, xy, q);
    }
    let yr = pow_mod(y % q, r, q);
    let xr = pow_mod(x % q, r, q);
    f[0] = (f[0] + yr + q - xr) % q;
    Ok(f)
}

/// Trace set of C_r(x, y) at q for residues x, y (no coprimality needed).
pub fn trace_set_class(field: &CycloRealField, x: u64, y: u64, q: u64) -> Result<TraceSet> {
    let r = field.r;
    if q == 2 || q == r {
        return Err(FreyError::BadReduction { q, detail: "q divides 2r".into() });
    }
    if (pow_mod(x, r, q) + pow_mod(y, r, q)) % q == 0 {
        return Err(FreyError::BadReduction { q, detail: format!("q divides x^r + y^r for ({x}, {y})") });
    }
    let fq = reduced_model(r, x, y, q)?;
    trace_set_from_reduction(field, &fq, q)
}

pub fn trace_set_from_reduction(field: &CycloRealField, fq: &[u64], q: u64) -> Result<TraceSet> {
    let g = field.g;
    if !has_good_reduction(fq, q) {
        return Err(FreyError::BadReduction { q, detail: "reduction is singular".into() });
    }
    let sp = field.split_prime(q)?;
    let f = sp.f;
    let n = sp.n_primes;
    let q_norm = sp.norm();
    let full = (q_norm as f64).powi(g as i32) <= FULL_L_LIMIT;
    let (lp, p, mode) = if full || f == 1 {
        let counts = counts_over(fq, q, f, g)?;
        let lp = l_polynomial_from_counts(&counts, q_norm, g)?;
        let p = real_weil(&lp)?.as_poly();
        (lp, p, CountingMode::FullLPolynomial)
    } else {
        let counts = counts_over(fq, q, f, n)?;
        let qb = BigInt::from(q_norm);
        let fb = BigInt::from(f);
        let mut s0 = Vec::with_capacity(n);
        for (m, &cnt) in counts.iter().enumerate() {
            let s: BigInt = num_traits::pow::Pow::pow(&qb, m as u32 + 1) + 1 - BigInt::from(cnt);
            let (quo, rem) = s.div_rem(&fb);
            if !rem.is_zero() {
                return Err(FreyError::InconsistentLPoly(format!("S_{} = {s} is not divisible by f = {f}", m + 1)));
            }
            s0.push(quo);
        }
        let l0 = l_polynomial_from_power_sums(&s0, q_norm, n)?;
        let p0 = real_weil(&l0)?.as_poly();
        let l0p = IntPoly::new(l0.coeffs.clone());
        let lp = LPolynomial { coeffs: l0p.pow(f as u32).coeffs, q_norm, genus: g };
        (lp, p0.pow(f as u32), CountingMode::ReducedCounts)
    };
    if !lp.satisfies_functional_equation() {
        return Err(FreyError::InconsistentLPoly("functional equation fails".into()));
    }
    let charpoly = lp.frobenius_charpoly();
    let u = recognize(field, &p, &charpoly, q_norm, &sp)?;

    // canonical representative: the lexicographically smallest conjugate sits at label 0
    let group = field.galois_group();
    let u0 = group.iter().map(|&s| field.galois_apply(s, &u)).min().expect("nonempty group");
    let labels = sp.labels();
    let mut values: Vec<Option<KElement>> = vec![None; labels.len()];
    for &s in &group {
        let t = field.label_image(s, &sp, 0)?;
        let v = field.galois_apply(s, &u0);
        match &values[t] {
            None => values[t] = Some(v),
            Some(w) if *w == v => {}
            Some(_) => {
                return Err(FreyError::certificate(
                    "galois-label-consistency",
                    format!("two automorphisms send label 0 above {q} to label {t} with different traces"),
                ))
            }
        }
    }
    let prime_assignment: Vec<LabelledTrace> = labels
        .into_iter()
        .zip(values)
        .map(|(label, v)| LabelledTrace { label, value: v.expect("transitive action") })
        .collect();
    let mut elements: Vec<KElement> = Vec::new();
    for lt in &prime_assignment {
        if !elements.contains(&lt.value) {
            elements.push(lt.value.clone());
        }
    }
    Ok(TraceSet {
        r: field.r,
        q,
        f,
        norm: q_norm,
        elements,
        prime_assignment,
        real_weil: RealWeilPolynomial { coeffs: p.coeffs },
        l_polynomial: lp,
        mode,
    })
}

pub fn trace_set(r: u64, a: &BigInt, b: &BigInt, q: u64) -> Result<TraceSet> {
    let model = frey_curve(r, a, b)?;
    let field = CycloRealField::new(r)?;
    let u = crate::arith::big_pow(a, r) + crate::arith::big_pow(b, r);
    if q == 2 || q == r || (&u % q).is_zero() {
        return Err(FreyError::BadReduction { q, detail: "q divides 2r(a^r + b^r)".into() });
    }
    trace_set_from_reduction(&field, &model.f.reduce_mod(q), q)
}

/// Every conjugate of every element lies within the Weil bound 2 sqrt(Q).
pub fn weil_bound_holds(field: &CycloRealField, ts: &TraceSet) -> bool {
    let bound = 2.0 * (ts.norm as f64).sqrt() + 2f64.powi(-20);
    ts.elements
        .iter()
        .all(|u| field.omega_embeddings().iter().all(|&w| u.embed_f64(w).abs() <= bound))
}

/// The trace set is stable under the Galois group.
pub fn galois_closed(field: &CycloRealField, ts: &TraceSet) -> bool {
    ts.elements.iter().all(|u| {
        field
            .galois_group()
            .into_iter()
            .all(|s| ts.elements.contains(&field.galois_apply(s, u)))
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LegendreCheck {
    pub label: PrimeLabel,
    /// a_q mod the prime above r
    pub trace_residue: u64,
    pub elliptic_trace: i64,
    pub holds: bool,
}

/// For each prime above q, compare a_q(J_r)^2 mod the ramified prime above r
/// with a_Q(L)^2 mod r, L the Legendre companion over F_Q.
pub fn legendre_congruence(r: u64, a: &BigInt, b: &BigInt, q: u64) -> Result<Vec<LegendreCheck>> {
    let leg = crate::curves::legendre_companion(r, a, b)?;
    let ab = a * b;
    if (&leg.u % q).is_zero() || (&ab % q).is_zero() {
        return Err(FreyError::BadReduction { q, detail: "Legendre companion has bad reduction".into() });
    }
    let ts = trace_set(r, a, b, q)?;
    let field = CycloRealField::new(r)?;
    let et = elliptic_trace(&leg.integral_model.f, q, ts.f)?;
    let ramified = PrimeLabel { q: r, factor: vec![r - 2, 1] };
    let e = (et.rem_euclid(r as i64)) as u64;
    let e2 = e * e % r;
    ts.prime_assignment
        .iter()
        .map(|lt| {
            let t = field.reduce_mod_prime(&lt.value, &ramified)?.first().copied().unwrap_or(0) % r;
            Ok(LegendreCheck { label: lt.label.clone(), trace_residue: t, elliptic_trace: et, holds: t * t % r == e2 })
        })
        .collect()
}

/// Trace of Frobenius of an elliptic curve y^2 = cubic over F_{q^f}.
pub fn elliptic_trace(cubic: &IntPoly, q: u64, f: usize) -> Result<i64> {
    let fq = cubic.reduce_mod(q);
    if fq.len() != 4 || !has_good_reduction(&fq, q) {
        return Err(FreyError::BadReduction { q, detail: "elliptic curve is singular mod q".into() });
    }
    let spec = FiniteFieldSpec::new(q, f)?;
    let n = count_points_reduced(&fq, &spec)?;
    Ok(spec.size() as i64 + 1 - n as i64)
}
