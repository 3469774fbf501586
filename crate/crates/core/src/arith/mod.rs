//! Exact scalar arithmetic.

pub mod karatsuba;
pub mod linalg;
pub mod ntt;
pub mod numfield;
pub mod padic;
pub mod poly;
pub mod ring;

pub use numfield::{NfElem, NumberField};
pub use padic::{hensel_unit_root, hensel_unit_root_padic, PadicInt, PadicNum, UnitRoot};
pub use ring::{CoeffRing, Field, IntRing, PadicRing, RatField, ZmodRing};

/// Arbitrary-precision rational number in lowest terms with positive denominator.
pub type Rat = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}
