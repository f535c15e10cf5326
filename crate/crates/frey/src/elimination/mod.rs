//! Newform elimination: fixture ingestion, the bounds N, M, B and their
//! survivor exponents, refined elimination mod p, and self-generated fixtures.

pub mod bounds;
pub mod fixture;
pub mod refined;
pub mod synthetic;

pub use bounds::{
    bound_b, bound_m, bound_n, survivors, BoundConfig, BoundReport, BoundVariant, ClassFilter, GaloisSubset, QBound,
    SurvivorSet, TraceStore, TwistMode,
};
pub use fixture::{load_fixtures, parse_fixtures, save_fixtures, validate, NewformFixture, Newform};
pub use refined::{refined_eliminate, CaseMode, RefinedConfig, RefinedReport, Verdict};

use crate::cyclofield::CycloRealField;
use crate::error::{FreyError, Result};
use crate::frobenius::trace_set;
use crate::localdata::serre_level;
use fixture::{EigenvalueEntry, FieldElement, FixtureFlags};
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// The CM form attached to J_r(0, 1): K_g = K and a_q = the Frobenius traces
/// of y^2 = x^r + 1.
pub fn cm_fixture(r: u64, q_list: &[u64]) -> Result<NewformFixture> {
    let k = CycloRealField::new(r)?;
    let mut eigenvalues = Vec::new();
    for &q in q_list {
        if q == 2 || q == r {
            return Err(FreyError::Precondition(format!("q = {q} divides 2r")));
        }
        let ts = trace_set(r, &BigInt::zero(), &BigInt::one(), q)?;
        for lt in ts.prime_assignment {
            eigenvalues.push(EigenvalueEntry { q, label: lt.label.factor, value: FieldElement::from_nf(&lt.value) });
        }
    }
    Ok(NewformFixture {
        label: format!("cm-r{r}"),
        level: serre_level(r, &BigInt::one(), false)?,
        field_minpoly: k.h().coeffs.clone(),
        omega_embedding: FieldElement::from_nf(&k.omega()),
        eigenvalues,
        flags: FixtureFlags { cm: true, base_change_subfield_degree: None, trust_irreducible: false },
        subfield_eg: None,
    })
}

#[cfg(test)]
mod tests;
