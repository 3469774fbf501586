//! Coefficient rings for q-expansions and matrices.
//!
//! A ring value carries its parameters (modulus, minimal polynomial); elements are
//! plain data interpreted relative to it.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::padic::PadicInt;
use super::Rat;
use crate::error::{Error, Result};

/// Serializable description of a ring, used in JSON documents.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingDescriptor {
    pub ring: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<String>,
    #[serde(rename = "M", skip_serializing_if = "Option::is_none")]
    pub m: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub minpoly: Option<Vec<String>>,
}

pub trait CoeffRing: Clone + Send + Sync + fmt::Debug + PartialEq {
    type Elem: Clone + Send + Sync + fmt::Debug + PartialEq;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn from_bigint(&self, v: &BigInt) -> Self::Elem;
    /// Image of a rational number; fails when the denominator is not invertible.
    fn from_rat(&self, v: &Rat) -> Result<Self::Elem>;
    fn descriptor(&self) -> RingDescriptor;
    fn elem_to_json(&self, a: &Self::Elem) -> Value;
    fn elem_from_json(&self, v: &Value) -> Result<Self::Elem>;

    fn from_i64(&self, v: i64) -> Self::Elem {
        self.from_bigint(&BigInt::from(v))
    }

    fn from_i128(&self, v: i128) -> Self::Elem {
        self.from_bigint(&BigInt::from(v))
    }

    fn mul_add_assign(&self, acc: &mut Self::Elem, a: &Self::Elem, b: &Self::Elem) {
        let t = self.mul(a, b);
        *acc = self.add(acc, &t);
    }

    /// First `len` coefficients of the Cauchy product of `a` and `b`.
    fn convolve(&self, a: &[Self::Elem], b: &[Self::Elem], len: usize) -> Vec<Self::Elem> {
        super::karatsuba::convolve(self, a, b, len)
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }
}

pub trait Field: CoeffRing {
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;
}

fn str_of(v: &Value) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        _ => Err(Error::InvalidInput(format!("expected a decimal string, got {v}"))),
    }
}

pub(crate) fn parse_bigint(s: &str) -> Result<BigInt> {
    s.trim()
        .parse::<BigInt>()
        .map_err(|_| Error::InvalidInput(format!("not an integer: {s}")))
}

pub(crate) fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let d = parse_bigint(d)?;
            if d.is_zero() {
                return Err(Error::InvalidInput(format!("zero denominator: {s}")));
            }
            Ok(Rat::new(parse_bigint(n)?, d))
        }
        None => Ok(Rat::from_integer(parse_bigint(s)?)),
    }
}

/// Exact integers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct IntRing;

impl CoeffRing for IntRing {
    type Elem = BigInt;
    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn mul_add_assign(&self, acc: &mut BigInt, a: &BigInt, b: &BigInt) {
        *acc += a * b;
    }
    fn from_bigint(&self, v: &BigInt) -> BigInt {
        v.clone()
    }
    fn from_rat(&self, v: &Rat) -> Result<BigInt> {
        if v.is_integer() {
            Ok(v.to_integer())
        } else {
            Err(Error::RingMismatch(format!("{v} is not an integer")))
        }
    }
    fn descriptor(&self) -> RingDescriptor {
        RingDescriptor { ring: "Z".into(), p: None, m: None, minpoly: None }
    }
    fn elem_to_json(&self, a: &BigInt) -> Value {
        Value::String(a.to_string())
    }
    fn elem_from_json(&self, v: &Value) -> Result<BigInt> {
        parse_bigint(&str_of(v)?)
    }
}

/// The rational numbers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RatField;

impl CoeffRing for RatField {
    type Elem = Rat;
    fn zero(&self) -> Rat {
        Rat::zero()
    }
    fn one(&self) -> Rat {
        Rat::one()
    }
    fn is_zero(&self, a: &Rat) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Rat, b: &Rat) -> Rat {
        a + b
    }
    fn sub(&self, a: &Rat, b: &Rat) -> Rat {
        a - b
    }
    fn neg(&self, a: &Rat) -> Rat {
        -a
    }
    fn mul(&self, a: &Rat, b: &Rat) -> Rat {
        a * b
    }
    fn from_bigint(&self, v: &BigInt) -> Rat {
        Rat::from_integer(v.clone())
    }
    fn from_rat(&self, v: &Rat) -> Result<Rat> {
        Ok(v.clone())
    }
    fn descriptor(&self) -> RingDescriptor {
        RingDescriptor { ring: "Q".into(), p: None, m: None, minpoly: None }
    }
    fn elem_to_json(&self, a: &Rat) -> Value {
        Value::String(a.to_string())
    }
    fn elem_from_json(&self, v: &Value) -> Result<Rat> {
        parse_rat(&str_of(v)?)
    }
}

impl Field for RatField {
    fn inv(&self, a: &Rat) -> Result<Rat> {
        if a.is_zero() {
            Err(Error::SingularSystem("inverse of zero".into()))
        } else {
            Ok(a.recip())
        }
    }
}

/// Z/p^M with a machine-word modulus (p^M < 2^63); the fast path for long series.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ZmodRing {
    p: u64,
    m: u32,
    modulus: u64,
}

impl ZmodRing {
    pub fn new(p: u64, m: u32) -> Result<Self> {
        if p < 2 || m == 0 {
            return Err(Error::InvalidInput(format!("bad modulus {p}^{m}")));
        }
        let mut modulus: u64 = 1;
        for _ in 0..m {
            modulus = modulus
                .checked_mul(p)
                .filter(|v| *v < (1u64 << 63))
                .ok_or_else(|| Error::InvalidInput(format!("{p}^{m} does not fit in 63 bits")))?;
        }
        Ok(ZmodRing { p, m, modulus })
    }

    /// Whether `p^m` fits the machine-word representation.
    pub fn fits(p: u64, m: u32) -> bool {
        Self::new(p, m).is_ok()
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn precision(&self) -> u32 {
        self.m
    }
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn inv_elem(&self, a: u64) -> Result<u64> {
        let a = BigInt::from(a);
        let n = BigInt::from(self.modulus);
        let g = a.extended_gcd(&n);
        if !g.gcd.is_one() {
            return Err(Error::DivisionByNonUnit(format!("{a} mod {n}")));
        }
        Ok(g.x.mod_floor(&n).to_u64().unwrap())
    }
}

impl CoeffRing for ZmodRing {
    type Elem = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.modulus
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.modulus - b
        }
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.modulus - a
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.modulus as u128) as u64
    }
    fn from_bigint(&self, v: &BigInt) -> u64 {
        v.mod_floor(&BigInt::from(self.modulus)).to_u64().unwrap()
    }
    fn from_i64(&self, v: i64) -> u64 {
        (v as i128).rem_euclid(self.modulus as i128) as u64
    }
    fn from_i128(&self, v: i128) -> u64 {
        v.rem_euclid(self.modulus as i128) as u64
    }
    fn from_rat(&self, v: &Rat) -> Result<u64> {
        let n = self.from_bigint(v.numer());
        let d = self.from_bigint(v.denom());
        Ok(self.mul(&n, &self.inv_elem(d)?))
    }
    fn descriptor(&self) -> RingDescriptor {
        RingDescriptor {
            ring: "Zmod".into(),
            p: Some(self.p.to_string()),
            m: Some(self.m.to_string()),
            minpoly: None,
        }
    }
    fn elem_to_json(&self, a: &u64) -> Value {
        Value::String(a.to_string())
    }
    fn elem_from_json(&self, v: &Value) -> Result<u64> {
        Ok(self.from_bigint(&parse_bigint(&str_of(v)?)?))
    }
    fn convolve(&self, a: &[u64], b: &[u64], len: usize) -> Vec<u64> {
        super::ntt::convolve_mod_u64(a, b, len, self.modulus)
    }
}

/// Z/p^M with an unbounded modulus; used when p^M exceeds a machine word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicRing {
    p: u64,
    m: u32,
    modulus: BigUint,
}

impl PadicRing {
    pub fn new(p: u64, m: u32) -> Result<Self> {
        if p < 2 || m == 0 {
            return Err(Error::InvalidInput(format!("bad modulus {p}^{m}")));
        }
        Ok(PadicRing { p, m, modulus: BigUint::from(p).pow(m) })
    }
    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn precision(&self) -> u32 {
        self.m
    }
    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }
    pub fn inv_elem(&self, a: &BigUint) -> Result<BigUint> {
        a.modinv(&self.modulus)
            .ok_or_else(|| Error::DivisionByNonUnit(format!("{a} mod {}^{}", self.p, self.m)))
    }
}

impl CoeffRing for PadicRing {
    type Elem = BigUint;
    fn zero(&self) -> BigUint {
        BigUint::zero()
    }
    fn one(&self) -> BigUint {
        BigUint::one() % &self.modulus
    }
    fn is_zero(&self, a: &BigUint) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigUint, b: &BigUint) -> BigUint {
        let s = a + b;
        if s >= self.modulus {
            s - &self.modulus
        } else {
            s
        }
    }
    fn sub(&self, a: &BigUint, b: &BigUint) -> BigUint {
        if a >= b {
            a - b
        } else {
            a + &self.modulus - b
        }
    }
    fn neg(&self, a: &BigUint) -> BigUint {
        if a.is_zero() {
            BigUint::zero()
        } else {
            &self.modulus - a
        }
    }
    fn mul(&self, a: &BigUint, b: &BigUint) -> BigUint {
        (a * b) % &self.modulus
    }
    fn from_bigint(&self, v: &BigInt) -> BigUint {
        let n = BigInt::from_biguint(Sign::Plus, self.modulus.clone());
        v.mod_floor(&n).to_biguint().unwrap()
    }
    fn from_rat(&self, v: &Rat) -> Result<BigUint> {
        let n = self.from_bigint(v.numer());
        let d = self.from_bigint(v.denom());
        Ok(self.mul(&n, &self.inv_elem(&d)?))
    }
    fn descriptor(&self) -> RingDescriptor {
        RingDescriptor {
            ring: "Zmod".into(),
            p: Some(self.p.to_string()),
            m: Some(self.m.to_string()),
            minpoly: None,
        }
    }
    fn elem_to_json(&self, a: &BigUint) -> Value {
        Value::String(a.to_string())
    }
    fn elem_from_json(&self, v: &Value) -> Result<BigUint> {
        Ok(self.from_bigint(&parse_bigint(&str_of(v)?)?))
    }
    fn convolve(&self, a: &[BigUint], b: &[BigUint], len: usize) -> Vec<BigUint> {
        super::ntt::convolve_mod_big(a, b, len, &self.modulus)
    }
}

/// Symmetric lift of a residue into (-n/2, n/2].
pub fn symmetric_lift(a: &BigUint, modulus: &BigUint) -> BigInt {
    let half = modulus >> 1u32;
    if a > &half {
        BigInt::from(a.clone()) - BigInt::from(modulus.clone())
    } else {
        BigInt::from(a.clone())
    }
}

/// A series ring Z/p^M whose elements convert to and from [`PadicInt`].
pub trait PadicCoeffRing: CoeffRing {
    fn prime(&self) -> u64;
    fn prec(&self) -> u32;
    fn to_padic(&self, a: &Self::Elem) -> PadicInt;
    /// Image of a p-adic integer known to at least this ring's precision.
    fn from_padic(&self, a: &PadicInt) -> Self::Elem;
}

impl PadicCoeffRing for ZmodRing {
    fn prime(&self) -> u64 {
        self.p
    }
    fn prec(&self) -> u32 {
        self.m
    }
    fn to_padic(&self, a: &u64) -> PadicInt {
        PadicInt::from_residue(self.p, self.m, BigUint::from(*a))
    }
    fn from_padic(&self, a: &PadicInt) -> u64 {
        assert!(a.precision() >= self.m && a.p() == self.p);
        (a.residue() % self.modulus).to_u64().unwrap()
    }
}

impl PadicCoeffRing for PadicRing {
    fn prime(&self) -> u64 {
        self.p
    }
    fn prec(&self) -> u32 {
        self.m
    }
    fn to_padic(&self, a: &BigUint) -> PadicInt {
        PadicInt::from_residue(self.p, self.m, a.clone())
    }
    fn from_padic(&self, a: &PadicInt) -> BigUint {
        assert!(a.precision() >= self.m && a.p() == self.p);
        a.residue() % &self.modulus
    }
}
