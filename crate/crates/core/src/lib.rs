//! Computational tools for the Hecke pair (GL2(Q)+, SL2(Z)): exact coset
//! arithmetic, the Hecke algebra and its actions, partition functions, KMS
//! measures on finite-level quotients, and numerical checks of the
//! ergodicity statements for those measures.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod action;
pub mod algebra;
pub mod arith;
pub mod coset;
pub mod error;
pub mod exact;
pub mod kms;
pub mod lab;
pub mod zeta;

pub use error::{HeckeError, Result};
