//! Exact q-expansion arithmetic, Hida ordinary projection and the triple-product
//! p-adic measure at level one, with independent classical cross-checks.

pub mod arith;
pub mod error;
pub mod hida;
pub mod identity;
pub mod lfunc;
pub mod measures;
pub mod modforms;
pub mod qexp;

pub use error::{Error, Result};
