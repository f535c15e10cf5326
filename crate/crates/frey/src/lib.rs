//! Frey hyperelliptic curves for x^r + y^r = d z^p and the modular-method
//! elimination machinery built on them.
//!
//! Layers, bottom up: exact arithmetic (`poly`, `zmodp`, `numfield`), the real
//! cyclotomic field (`cyclofield`), polynomial identities (`freypoly`), curve
//! models (`curves`), local data (`localdata`), point counting and trace sets
//! (`ffield`, `frobenius`), and newform elimination (`elimination`).

pub mod arith;
pub mod curves;
pub mod cyclofield;
pub mod elimination;
pub mod error;
pub mod ffield;
pub mod freypoly;
pub mod frobenius;
pub mod localdata;
pub mod numfield;
pub mod poly;
pub mod zmodp;

pub use error::{FreyError, Result};
