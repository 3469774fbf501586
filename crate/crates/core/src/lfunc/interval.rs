//! Fixed-point intervals [lo, hi]·2^{−bits} with outward rounding.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::Rat;
use crate::error::{Error, Result};

pub const DEFAULT_BITS: u32 = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: BigInt,
    pub hi: BigInt,
    pub bits: u32,
}

fn floor_shift(x: &BigInt, s: u32) -> BigInt {
    // BigInt >> rounds toward −∞
    x >> s
}

fn ceil_shift(x: &BigInt, s: u32) -> BigInt {
    -((-x) >> s)
}

impl Interval {
    pub fn exact_int(v: &BigInt, bits: u32) -> Self {
        let x = v << bits;
        Interval { lo: x.clone(), hi: x, bits }
    }

    pub fn from_i64(v: i64, bits: u32) -> Self {
        Self::exact_int(&BigInt::from(v), bits)
    }

    /// Tightest enclosure of a rational.
    pub fn from_rat(r: &Rat, bits: u32) -> Self {
        let n = r.numer() << bits;
        let d = r.denom();
        Interval { lo: n.div_floor(d), hi: n.div_ceil(d), bits }
    }

    /// Enclosure of n^{1/d} for an integer n ≥ 0.
    pub fn int_root(n: &BigInt, d: u32, bits: u32) -> Result<Self> {
        if n.is_negative() || d == 0 {
            return Err(Error::InvalidInput("root of a negative number".into()));
        }
        let scaled = n << (bits as usize * d as usize);
        let lo = scaled.nth_root(d);
        let hi = if lo.pow(d) == scaled { lo.clone() } else { &lo + 1 };
        Ok(Interval { lo, hi, bits })
    }

    fn at_bits(&self, bits: u32) -> Self {
        if bits >= self.bits {
            let s = bits - self.bits;
            Interval { lo: &self.lo << s, hi: &self.hi << s, bits }
        } else {
            let s = self.bits - bits;
            Interval { lo: floor_shift(&self.lo, s), hi: ceil_shift(&self.hi, s), bits }
        }
    }

    fn aligned(a: &Self, b: &Self) -> (Self, Self) {
        let bits = a.bits.max(b.bits);
        (a.at_bits(bits), b.at_bits(bits))
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn contains_rat(&self, r: &Rat) -> bool {
        let scale = BigInt::one() << self.bits;
        let lo = Rat::new(self.lo.clone(), scale.clone());
        let hi = Rat::new(self.hi.clone(), scale);
        &lo <= r && r <= &hi
    }

    pub fn width(&self) -> BigInt {
        &self.hi - &self.lo
    }

    /// Division by a positive integer, rounded outward.
    pub fn div_int(&self, d: &BigInt) -> Self {
        Interval { lo: self.lo.div_floor(d), hi: self.hi.div_ceil(d), bits: self.bits }
    }

    pub fn recip(&self) -> Result<Self> {
        if self.contains_zero() {
            return Err(Error::InvalidInput("reciprocal of an interval containing 0".into()));
        }
        let num = BigInt::one() << (2 * self.bits);
        Ok(Interval { lo: num.div_floor(&self.hi), hi: num.div_ceil(&self.lo), bits: self.bits })
    }

    pub fn to_f64(&self) -> f64 {
        let mid: BigInt = (&self.lo + &self.hi) >> 1;
        let scale = 2f64.powi(self.bits as i32);
        mid.to_string().parse::<f64>().unwrap_or(f64::NAN) / scale
    }

    fn decimal(x: &BigInt, bits: u32, digits: u32, up: bool) -> String {
        let num = x * BigInt::from(10).pow(digits);
        let den = BigInt::one() << bits;
        let v = if up { num.div_ceil(&den) } else { num.div_floor(&den) };
        let neg = v.is_negative();
        let s = v.abs().to_string();
        let s = format!("{:0>width$}", s, width = digits as usize + 1);
        let (i, f) = s.split_at(s.len() - digits as usize);
        format!("{}{}.{}", if neg { "-" } else { "" }, i, f)
    }

    /// Lower endpoint rounded down to `digits` decimals.
    pub fn lo_decimal(&self, digits: u32) -> String {
        Self::decimal(&self.lo, self.bits, digits, false)
    }

    /// Upper endpoint rounded up to `digits` decimals.
    pub fn hi_decimal(&self, digits: u32) -> String {
        Self::decimal(&self.hi, self.bits, digits, true)
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, o: Interval) -> Interval {
        let (a, b) = Interval::aligned(&self, &o);
        Interval { lo: a.lo + b.lo, hi: a.hi + b.hi, bits: a.bits }
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval { lo: -self.hi, hi: -self.lo, bits: self.bits }
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, o: Interval) -> Interval {
        self + (-o)
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, o: Interval) -> Interval {
        let (a, b) = Interval::aligned(&self, &o);
        let ps = [&a.lo * &b.lo, &a.lo * &b.hi, &a.hi * &b.lo, &a.hi * &b.hi];
        let lo = ps.iter().min().unwrap();
        let hi = ps.iter().max().unwrap();
        Interval { lo: floor_shift(lo, a.bits), hi: ceil_shift(hi, a.bits), bits: a.bits }
    }
}

impl Zero for Interval {
    fn zero() -> Self {
        Interval::from_i64(0, DEFAULT_BITS)
    }
    fn is_zero(&self) -> bool {
        self.lo.is_zero() && self.hi.is_zero()
    }
}

impl One for Interval {
    fn one() -> Self {
        Interval::from_i64(1, DEFAULT_BITS)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo_decimal(20), self.hi_decimal(20))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use proptest::prelude::*;

    #[test]
    fn sqrt_two() {
        let s = Interval::int_root(&BigInt::from(2), 2, 64).unwrap();
        assert!(s.width() <= BigInt::one());
        assert!((s.to_f64() - 2f64.sqrt()).abs() < 1e-15);
        let sq = s.clone() * s;
        assert!(sq.contains_rat(&rat(2, 1)));
        assert_eq!(Interval::int_root(&BigInt::from(9), 2, 10).unwrap(), Interval::from_i64(3, 10));
    }

    #[test]
    fn decimals() {
        let t = Interval::from_rat(&rat(-1, 3), 64);
        assert_eq!(t.lo_decimal(5), "-0.33334");
        assert_eq!(t.hi_decimal(5), "-0.33333");
        assert!(Interval::from_i64(0, 64).recip().is_err());
    }

    proptest! {
        #[test]
        fn operations_enclose_exact_values(a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000, d in 1i64..1000) {
            let (x, y) = (rat(a, b), rat(c, d));
            let (ix, iy) = (Interval::from_rat(&x, 40), Interval::from_rat(&y, 64));
            prop_assert!((ix.clone() + iy.clone()).contains_rat(&(&x + &y)));
            prop_assert!((ix.clone() - iy.clone()).contains_rat(&(&x - &y)));
            prop_assert!((ix.clone() * iy.clone()).contains_rat(&(&x * &y)));
            if !x.is_zero() {
                prop_assert!(ix.recip().unwrap().contains_rat(&(Rat::one() / &x)));
            }
        }
    }
}
