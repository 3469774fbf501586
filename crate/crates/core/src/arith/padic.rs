//! Truncated p-adic integers, p-adic numbers with precision tracking, and Hensel lifting.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::Rat;
use crate::error::{Error, Result};

fn pow_u(p: u64, e: u32) -> BigUint {
    BigUint::from(p).pow(e)
}

/// p-adic valuation of a non-zero integer.
pub fn valuation_int(v: &BigInt, p: u64) -> Option<u32> {
    if v.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut x = v.clone();
    let mut e = 0;
    loop {
        let (q, r) = x.div_rem(&p);
        if !r.is_zero() {
            return Some(e);
        }
        x = q;
        e += 1;
    }
}

/// Valuation of a non-zero rational.
pub fn valuation_rat(v: &Rat, p: u64) -> Option<i64> {
    let n = valuation_int(v.numer(), p)? as i64;
    let d = valuation_int(v.denom(), p).unwrap_or(0) as i64;
    Some(n - d)
}

/// An element of Z/p^M.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PadicInt {
    p: u64,
    m: u32,
    residue: BigUint,
}

impl fmt::Debug for PadicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {}^{})", self.residue, self.p, self.m)
    }
}

impl fmt::Display for PadicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.residue)
    }
}

impl PadicInt {
    pub fn new(p: u64, m: u32, value: &BigInt) -> Self {
        let modulus = BigInt::from(pow_u(p, m));
        let residue = value.mod_floor(&modulus).to_biguint().unwrap();
        PadicInt { p, m, residue }
    }

    pub fn from_residue(p: u64, m: u32, residue: BigUint) -> Self {
        let residue = residue % pow_u(p, m);
        PadicInt { p, m, residue }
    }

    pub fn from_i64(p: u64, m: u32, v: i64) -> Self {
        Self::new(p, m, &BigInt::from(v))
    }

    pub fn zero(p: u64, m: u32) -> Self {
        PadicInt { p, m, residue: BigUint::zero() }
    }

    pub fn one(p: u64, m: u32) -> Self {
        Self::from_i64(p, m, 1)
    }

    /// Image of a rational whose denominator is prime to p.
    pub fn from_rat(p: u64, m: u32, v: &Rat) -> Result<Self> {
        let d = Self::new(p, m, v.denom());
        let n = Self::new(p, m, v.numer());
        Ok(n.mul(&d.inv()?))
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn precision(&self) -> u32 {
        self.m
    }
    pub fn residue(&self) -> &BigUint {
        &self.residue
    }
    pub fn modulus(&self) -> BigUint {
        pow_u(self.p, self.m)
    }

    fn check(&self, o: &Self) {
        assert!(self.p == o.p && self.m == o.m, "mixing Z/{}^{} with Z/{}^{}", self.p, self.m, o.p, o.m);
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check(o);
        Self::from_residue(self.p, self.m, &self.residue + &o.residue)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.check(o);
        let n = self.modulus();
        Self::from_residue(self.p, self.m, &self.residue + &n - &o.residue)
    }

    pub fn neg(&self) -> Self {
        Self::zero(self.p, self.m).sub(self)
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.check(o);
        Self::from_residue(self.p, self.m, &self.residue * &o.residue)
    }

    pub fn pow(&self, e: u64) -> Self {
        PadicInt { p: self.p, m: self.m, residue: self.residue.modpow(&BigUint::from(e), &self.modulus()) }
    }

    pub fn is_zero(&self) -> bool {
        self.residue.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        !(&self.residue % self.p).is_zero()
    }

    pub fn inv(&self) -> Result<Self> {
        let r = self
            .residue
            .modinv(&self.modulus())
            .ok_or_else(|| Error::DivisionByNonUnit(format!("{self:?}")))?;
        Ok(PadicInt { p: self.p, m: self.m, residue: r })
    }

    /// (min(v_p(residue), M), exact) where `exact` is false for the zero residue.
    pub fn valuation(&self) -> (u32, bool) {
        match valuation_int(&BigInt::from(self.residue.clone()), self.p) {
            Some(v) => (v.min(self.m), true),
            None => (self.m, false),
        }
    }

    /// Reduce to a lower precision.
    pub fn reduce(&self, m: u32) -> Self {
        assert!(m <= self.m);
        Self::from_residue(self.p, m, self.residue.clone())
    }

    /// Representative in (-p^M/2, p^M/2].
    pub fn signed_lift(&self) -> BigInt {
        super::ring::symmetric_lift(&self.residue, &self.modulus())
    }

    pub fn to_bigint(&self) -> BigInt {
        BigInt::from(self.residue.clone())
    }
}

/// A p-adic number p^val * unit known modulo p^(val + rel).
///
/// The zero of absolute precision `a` is stored with `rel = 0` and `val = a`.
#[derive(Clone, PartialEq, Eq)]
pub struct PadicNum {
    p: u64,
    val: i64,
    rel: u32,
    unit: BigUint,
}

impl fmt::Debug for PadicNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rel == 0 {
            write!(f, "O({}^{})", self.p, self.val)
        } else {
            write!(f, "{}*{}^{} + O({}^{})", self.unit, self.p, self.val, self.p, self.abs_prec())
        }
    }
}

/// JSON view of a [`PadicNum`].
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct PadicNumDoc {
    pub valuation: String,
    pub unit: String,
    pub abs_precision: String,
    /// Residue mod p^abs_precision when the value is integral.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residue: Option<String>,
}

impl PadicNum {
    pub fn zero(p: u64, abs_prec: i64) -> Self {
        PadicNum { p, val: abs_prec, rel: 0, unit: BigUint::zero() }
    }

    fn normalize(p: u64, val: i64, rel: u32, x: BigUint) -> Self {
        if rel == 0 {
            return Self::zero(p, val);
        }
        let x = x % pow_u(p, rel);
        match valuation_int(&BigInt::from(x.clone()), p) {
            None => Self::zero(p, val + rel as i64),
            Some(t) => {
                let unit = x / pow_u(p, t);
                PadicNum { p, val: val + t as i64, rel: rel - t, unit }
            }
        }
    }

    /// An integer known to relative precision `rel`.
    pub fn from_bigint(p: u64, v: &BigInt, rel: u32) -> Self {
        match valuation_int(v, p) {
            None => Self::zero(p, i64::MAX / 4),
            Some(t) => {
                let n = BigInt::from(pow_u(p, rel));
                let u = (v / BigInt::from(pow_u(p, t))).mod_floor(&n).to_biguint().unwrap();
                PadicNum { p, val: t as i64, rel, unit: u }
            }
        }
    }

    pub fn from_rat(p: u64, v: &Rat, rel: u32) -> Self {
        if v.is_zero() {
            return Self::zero(p, i64::MAX / 4);
        }
        let num = Self::from_bigint(p, v.numer(), rel);
        let den = Self::from_bigint(p, v.denom(), rel);
        num.div(&den).expect("non-zero denominator")
    }

    pub fn from_padic_int(x: &PadicInt) -> Self {
        Self::normalize(x.p, 0, x.m, x.residue.clone())
    }

    /// Exact power p^e carried at relative precision `rel`.
    pub fn p_power(p: u64, e: i64, rel: u32) -> Self {
        PadicNum { p, val: e, rel, unit: BigUint::one() % pow_u(p, rel.max(1)) }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.rel == 0
    }

    /// Valuation, or None for a zero known only to its absolute precision.
    pub fn valuation(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.val)
        }
    }

    pub fn abs_prec(&self) -> i64 {
        self.val + self.rel as i64
    }

    pub fn rel_prec(&self) -> u32 {
        self.rel
    }

    pub fn unit(&self) -> &BigUint {
        &self.unit
    }

    /// Drop precision to at most `abs` digits.
    pub fn truncate(&self, abs: i64) -> Self {
        if abs >= self.abs_prec() {
            return self.clone();
        }
        if self.is_zero() || abs <= self.val {
            return Self::zero(self.p, abs.min(self.abs_prec()));
        }
        let rel = (abs - self.val) as u32;
        Self::normalize(self.p, self.val, rel, self.unit.clone())
    }

    pub fn neg(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let n = pow_u(self.p, self.rel);
        PadicNum { p: self.p, val: self.val, rel: self.rel, unit: (&n - &self.unit) % &n }
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.p, o.p);
        let abs = self.abs_prec().min(o.abs_prec());
        if self.is_zero() {
            return o.truncate(abs);
        }
        if o.is_zero() {
            return self.truncate(abs);
        }
        let v = self.val.min(o.val);
        if abs <= v {
            return Self::zero(self.p, abs);
        }
        let rel = (abs - v) as u32;
        let shift = |x: &PadicNum| &x.unit * pow_u(x.p, (x.val - v) as u32);
        Self::normalize(self.p, v, rel, shift(self) + shift(o))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.p, o.p);
        if self.is_zero() || o.is_zero() {
            let a = match (self.valuation(), o.valuation()) {
                (None, None) => self.val + o.val,
                (None, Some(v)) => self.val + v,
                (Some(v), None) => o.val + v,
                _ => unreachable!(),
            };
            return Self::zero(self.p, a);
        }
        let rel = self.rel.min(o.rel);
        Self::normalize(self.p, self.val + o.val, rel, &self.unit * &o.unit)
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        assert_eq!(self.p, o.p);
        if o.is_zero() {
            return Err(Error::DivisionByNonUnit(format!("division by {o:?}")));
        }
        if self.is_zero() {
            return Ok(Self::zero(self.p, self.val - o.val));
        }
        let rel = self.rel.min(o.rel);
        let n = pow_u(self.p, rel);
        let inv = (&o.unit % &n).modinv(&n).expect("unit");
        Ok(Self::normalize(self.p, self.val - o.val, rel, (&self.unit % &n) * inv))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        if e < 0 {
            let one = Self::p_power(self.p, 0, self.rel.max(1));
            return one.div(&self.pow(-e)?);
        }
        let mut acc = Self::p_power(self.p, 0, self.rel.max(1));
        for _ in 0..e {
            acc = acc.mul(self);
        }
        Ok(acc)
    }

    pub fn mul_int(&self, v: &BigInt) -> Self {
        self.mul(&Self::from_bigint(self.p, v, self.rel.max(1) + 64))
    }

    /// Integral value reduced mod p^abs_prec.
    pub fn to_padic_int(&self) -> Result<PadicInt> {
        let abs = self.abs_prec();
        if abs <= 0 {
            return Err(Error::PrecisionExhausted(format!("{self:?} has no integral digits")));
        }
        let abs = abs.min(u32::MAX as i64) as u32;
        if self.is_zero() {
            return Ok(PadicInt::zero(self.p, abs));
        }
        if self.val < 0 {
            return Err(Error::DivisionByNonUnit(format!("{self:?} is not integral")));
        }
        Ok(PadicInt::from_residue(self.p, abs, &self.unit * pow_u(self.p, self.val as u32)))
    }

    /// Valuation of self - other, or None when they agree to the joint precision.
    pub fn mismatch_valuation(&self, o: &Self) -> Option<i64> {
        self.sub(o).valuation()
    }

    pub fn doc(&self) -> PadicNumDoc {
        let residue = self.to_padic_int().ok().map(|r| r.residue().to_string());
        PadicNumDoc {
            valuation: if self.is_zero() { "inf".into() } else { self.val.to_string() },
            unit: self.unit.to_string(),
            abs_precision: self.abs_prec().to_string(),
            residue,
        }
    }
}

/// Unit root data of X^2 - a_p X + p^{k-1}.
#[derive(Clone, Debug)]
pub struct UnitRoot {
    pub alpha1: PadicInt,
    /// alpha_2 = p^{k-1} alpha_1^{-1}, valuation k-1, relative precision M.
    pub alpha2: PadicNum,
}

/// Hensel-lift the p-adic unit root of X^2 - a_p X + p^{k-1} to precision M.
pub fn hensel_unit_root(a_p: &BigInt, p: u64, k: u32, m: u32) -> Result<UnitRoot> {
    hensel_unit_root_padic(&PadicInt::new(p, m, a_p), k)
}

/// As [`hensel_unit_root`] with a_p already reduced mod p^M.
pub fn hensel_unit_root_padic(a_p: &PadicInt, k: u32) -> Result<UnitRoot> {
    if k < 2 {
        return Err(Error::InvalidInput(format!("weight {k} < 2")));
    }
    let (p, m) = (a_p.p(), a_p.precision());
    if !a_p.is_unit() {
        return Err(Error::NotOrdinary(format!("v_{p}(a_p) > 0 (a_p = {a_p:?})")));
    }
    let pk = PadicInt::new(p, m, &BigInt::from(pow_u(p, k - 1)));
    let f = |x: &PadicInt| x.mul(x).sub(&a_p.mul(x)).add(&pk);
    let mut x = a_p.clone();
    for _ in 0..(2 * m + 4) {
        let fx = f(&x);
        if fx.is_zero() {
            break;
        }
        let d = x.add(&x).sub(a_p);
        x = x.sub(&fx.mul(&d.inv()?));
    }
    debug_assert!(f(&x).is_zero());
    let alpha2 = PadicNum::p_power(p, (k - 1) as i64, m).div(&PadicNum::from_padic_int(&x))?;
    Ok(UnitRoot { alpha1: x, alpha2 })
}

/// Simple roots of an integer polynomial modulo p, lifted to p^M by Newton iteration.
/// Returns None for a root that is not simple mod p.
pub fn padic_roots(poly: &[BigInt], p: u64, m: u32) -> Result<Vec<PadicInt>> {
    if p > 2_000_000 {
        return Err(Error::InvalidInput(format!("root search mod {p} is too large")));
    }
    let eval = |x: &PadicInt, c: &[BigInt]| -> PadicInt {
        let mut acc = PadicInt::zero(x.p(), x.precision());
        for a in c.iter().rev() {
            acc = acc.mul(x).add(&PadicInt::new(x.p(), x.precision(), a));
        }
        acc
    };
    let deriv: Vec<BigInt> = poly.iter().enumerate().skip(1).map(|(i, a)| a * BigInt::from(i)).collect();
    let pb = BigInt::from(p);
    let small: Vec<i64> = poly.iter().map(|a| a.mod_floor(&pb).to_i64().unwrap()).collect();
    let mut roots = Vec::new();
    for r in 0..p as i64 {
        let mut acc: i128 = 0;
        for a in small.iter().rev() {
            acc = (acc * r as i128 + *a as i128).rem_euclid(p as i128);
        }
        if acc != 0 {
            continue;
        }
        let x1 = PadicInt::from_i64(p, 1, r);
        if eval(&x1, &deriv).is_zero() {
            return Err(Error::NonSplitField(format!("repeated root {r} mod {p}")));
        }
        let mut x = PadicInt::from_i64(p, m, r);
        for _ in 0..(2 * m + 4) {
            let fx = eval(&x, poly);
            if fx.is_zero() {
                break;
            }
            x = x.sub(&fx.mul(&eval(&x, &deriv).inv()?));
        }
        roots.push(x);
    }
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn unit_root_examples() {
        let r = hensel_unit_root(&BigInt::from(534612), 11, 12, 1).unwrap();
        assert_eq!(r.alpha1.residue(), &BigUint::from(1u32));
        let r = hensel_unit_root(&BigInt::from(1), 5, 2, 3).unwrap();
        let a = &r.alpha1;
        assert!(a.mul(a).sub(a).add(&PadicInt::from_i64(5, 3, 5)).is_zero());
        assert_eq!((a.residue() % 5u32), BigUint::from(1u32));
        assert!(matches!(hensel_unit_root(&BigInt::from(-24), 2, 12, 5), Err(Error::NotOrdinary(_))));
    }

    #[test]
    fn unit_root_relations() {
        let (p, k, m) = (13u64, 24u32, 6u32);
        let ap = BigInt::from(-37_000_000_003i64);
        let r = hensel_unit_root(&ap, p, k, m).unwrap();
        let a1 = PadicNum::from_padic_int(&r.alpha1);
        let prod = a1.mul(&r.alpha2);
        let want = PadicNum::p_power(p, (k - 1) as i64, m);
        assert!(prod.sub(&want).abs_prec() >= m as i64 + k as i64 - 1);
        assert_eq!(prod.sub(&want).valuation(), None);
        let sum = a1.add(&r.alpha2);
        assert_eq!(sum.sub(&PadicNum::from_bigint(p, &ap, m)).valuation(), None);
    }

    #[test]
    fn padic_num_arithmetic() {
        let p = 7;
        let a = PadicNum::from_rat(p, &Rat::new(BigInt::from(3), BigInt::from(49)), 10);
        assert_eq!(a.valuation(), Some(-2));
        let b = a.mul(&PadicNum::from_bigint(p, &BigInt::from(49), 10));
        assert_eq!(b.to_padic_int().unwrap().residue(), &BigUint::from(3u32));
        let c = a.sub(&a);
        assert!(c.is_zero());
        assert_eq!(c.abs_prec(), 8);
    }

    #[test]
    fn roots_of_quadratic_split_mod_13() {
        // x^2 - 1080x - 20468736 has discriminant 576*144169, and 144169 = -1 mod 13.
        let poly = vec![BigInt::from(-20468736i64), BigInt::from(-1080), BigInt::from(1)];
        let roots = padic_roots(&poly, 13, 5).unwrap();
        assert_eq!(roots.len(), 2);
        for r in roots {
            let v = r.mul(&r).sub(&r.mul(&PadicInt::from_i64(13, 5, 1080))).sub(&PadicInt::from_i64(13, 5, 20468736));
            assert!(v.is_zero());
        }
    }

    proptest! {
        #[test]
        fn padic_matches_rat(an in -10_000i64..10_000, ad in 1i64..500, bn in -10_000i64..10_000, bd in 1i64..500) {
            let p = 11u64;
            prop_assume!(ad % 11 != 0 && bd % 11 != 0);
            let a = Rat::new(BigInt::from(an), BigInt::from(ad));
            let b = Rat::new(BigInt::from(bn), BigInt::from(bd));
            let m = 5;
            let pa = PadicInt::from_rat(p, m, &a).unwrap();
            let pb = PadicInt::from_rat(p, m, &b).unwrap();
            prop_assert_eq!(pa.add(&pb), PadicInt::from_rat(p, m, &(&a + &b)).unwrap());
            prop_assert_eq!(pa.mul(&pb), PadicInt::from_rat(p, m, &(&a * &b)).unwrap());
            prop_assert_eq!(pa.sub(&pb), PadicInt::from_rat(p, m, &(&a - &b)).unwrap());
        }

        #[test]
        fn padic_num_add_mul_match_rat(an in -5000i64..5000, ad in 1i64..300, bn in -5000i64..5000, bd in 1i64..300) {
            let p = 5u64;
            prop_assume!(an != 0 && bn != 0);
            let a = Rat::new(BigInt::from(an), BigInt::from(ad));
            let b = Rat::new(BigInt::from(bn), BigInt::from(bd));
            let rel = 12;
            let x = PadicNum::from_rat(p, &a, rel).mul(&PadicNum::from_rat(p, &b, rel));
            let y = PadicNum::from_rat(p, &(&a * &b), rel);
            prop_assert!(x.sub(&y).valuation().is_none());
            let s = PadicNum::from_rat(p, &a, rel).add(&PadicNum::from_rat(p, &b, rel));
            let sum = &a + &b;
            if !sum.is_zero() {
                prop_assert!(s.sub(&PadicNum::from_rat(p, &sum, rel)).valuation().is_none());
            }
        }
    }
}
