//! Exact computational kernel for centres of universal enveloping algebras of
//! reductive Lie algebras in positive characteristic, at desk scale over
//! finite fields.

pub mod center;
pub mod chevalley;
pub mod error;
pub mod field;
pub mod liealg;
pub mod linalg;
pub mod pbw;
pub mod poly;
mod rat;
pub mod report;
pub mod suite;
pub mod upoly;
pub mod zvariety;

pub use error::{Error, Result};
