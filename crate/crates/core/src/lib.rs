//! Numerical laboratory for bounded analytic functions on the unit disc.
//!
//! Functions are represented by their boundary samples on a uniform circle
//! grid ([`circle_grid`]) or by truncated Taylor series ([`hardy`]). On top of
//! the transform engine sit outer synthesis and inner-outer factorization
//! ([`factorization`]), essential zero sets ([`zero_sets`]), truncated
//! Toeplitz operators and Szegő distances ([`toeplitz`]), and constructions
//! of bounded approximate units for closed ideals ([`mideal`]).

// `!(x > 0.0)` is used on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod circle_grid;
pub mod error;
pub mod factorization;
pub mod hardy;
pub mod mideal;
pub mod registry;
pub mod toeplitz;
pub mod zero_sets;

pub use error::{LabError, Result};
