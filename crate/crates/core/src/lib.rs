//! Exact Soergel-bimodule idempotents and the Hecke algebra bases they
//! decategorify to, for extra-large Coxeter systems.
//!
//! Layers, bottom up: [`field`] and [`poly`] give exact arithmetic,
//! [`coxeter`] and [`polyring`] the group and its polynomial representation,
//! [`hecke`] the Hecke algebra, [`cores`] the interval combinatorics of
//! reduced words, [`bsmod`] Bott–Samelson bimodules and their morphisms, and
//! [`catbases`] assembles everything into the bases `e_w` and `d_w`.

#![allow(clippy::needless_range_loop)]

pub mod bsmod;
pub mod catbases;
pub mod cores;
pub mod coxeter;
pub mod error;
mod expr;
pub mod field;
pub mod hecke;
pub mod linalg;
pub mod poly;
pub mod polyring;

pub use coxeter::{CoxeterSystem, GroupElement, Word};
pub use error::{Error, Result};
pub use field::{Fe, NumberField};
pub use hecke::{HeckeElement, LaurentPoly};
pub use poly::Poly;
pub use polyring::Ring;
