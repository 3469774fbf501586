//! Number fields Q[x]/(m(x)) of degree at most 4.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::Value;

use super::linalg::{solve, Matrix};
use super::padic::{PadicInt, PadicNum};
use super::ring::{parse_rat, CoeffRing, Field, RatField, RingDescriptor};
use super::Rat;
use crate::error::{Error, Result};

pub const MAX_DEGREE: usize = 4;

/// A number field presented by a monic irreducible integer polynomial.
/// Irreducibility is the caller's responsibility; a zero divisor met during
/// inversion raises `NotAField`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NumberField {
    minpoly: Vec<BigInt>,
}

/// Element of a [`NumberField`]: coordinates on the power basis 1, θ, …, θ^{d-1}.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NfElem {
    pub coords: Vec<Rat>,
}

impl NumberField {
    pub fn new(minpoly: Vec<BigInt>) -> Result<Self> {
        let d = minpoly.len().saturating_sub(1);
        if d == 0 || !minpoly[d].is_one() {
            return Err(Error::InvalidInput(format!("minimal polynomial {minpoly:?} is not monic of positive degree")));
        }
        if d > MAX_DEGREE {
            return Err(Error::IrreducibleDegreeTooHigh(d));
        }
        Ok(NumberField { minpoly })
    }

    /// Q presented as Q[x]/(x - r).
    pub fn rational(r: &BigInt) -> Self {
        NumberField { minpoly: vec![-r.clone(), BigInt::one()] }
    }

    pub fn degree(&self) -> usize {
        self.minpoly.len() - 1
    }

    pub fn minpoly(&self) -> &[BigInt] {
        &self.minpoly
    }

    /// The class of x.
    pub fn generator(&self) -> NfElem {
        let mut e = self.zero();
        if self.degree() == 1 {
            e.coords[0] = Rat::from_integer(-self.minpoly[0].clone());
        } else {
            e.coords[1] = Rat::one();
        }
        e
    }

    pub fn from_coords(&self, coords: Vec<Rat>) -> Result<NfElem> {
        if coords.len() != self.degree() {
            return Err(Error::InvalidInput(format!("expected {} coordinates", self.degree())));
        }
        Ok(NfElem { coords })
    }

    /// Rational value of an element lying in Q.
    pub fn as_rational(&self, a: &NfElem) -> Option<Rat> {
        if a.coords.iter().skip(1).all(|c| c.is_zero()) {
            Some(a.coords[0].clone())
        } else {
            None
        }
    }

    fn reduce(&self, mut prod: Vec<Rat>) -> NfElem {
        let d = self.degree();
        for i in (d..prod.len()).rev() {
            let c = std::mem::take(&mut prod[i]);
            if c.is_zero() {
                continue;
            }
            for j in 0..d {
                prod[i - d + j] -= &c * Rat::from_integer(self.minpoly[j].clone());
            }
        }
        prod.truncate(d);
        prod.resize(d, Rat::zero());
        NfElem { coords: prod }
    }

    /// Matrix of multiplication by `a` on the power basis (columns = a·θ^j).
    fn mult_matrix(&self, a: &NfElem) -> Matrix<Rat> {
        let d = self.degree();
        let mut cols = Vec::with_capacity(d);
        let mut x = self.one();
        let theta = self.generator();
        for _ in 0..d {
            cols.push(self.mul(a, &x).coords);
            x = self.mul(&x, &theta);
        }
        (0..d).map(|i| (0..d).map(|j| cols[j][i].clone()).collect()).collect()
    }

    /// Image under θ ↦ root in Q_p, tracking precision; p-adic denominators are allowed.
    pub fn embed_padic(&self, a: &NfElem, root: &PadicInt) -> PadicNum {
        let p = root.p();
        let m = root.precision();
        let r = PadicNum::from_padic_int(root);
        let mut acc = PadicNum::zero(p, i64::MAX / 4);
        let mut pw = PadicNum::p_power(p, 0, m);
        for (i, c) in a.coords.iter().enumerate() {
            if i > 0 {
                pw = pw.mul(&r);
            }
            if !c.is_zero() {
                acc = acc.add(&PadicNum::from_rat(p, c, m).mul(&pw));
            }
        }
        acc
    }

    /// Integral image under θ ↦ root mod p^M.
    pub fn embed_padic_int(&self, a: &NfElem, root: &PadicInt) -> Result<PadicInt> {
        let mut acc = PadicInt::zero(root.p(), root.precision());
        let mut pw = PadicInt::one(root.p(), root.precision());
        for (i, c) in a.coords.iter().enumerate() {
            if i > 0 {
                pw = pw.mul(root);
            }
            if !c.is_zero() {
                acc = acc.add(&PadicInt::from_rat(root.p(), root.precision(), c)?.mul(&pw));
            }
        }
        Ok(acc)
    }

    /// Roots of the minimal polynomial in Z/p^M; errors unless it splits into simple roots.
    pub fn padic_roots(&self, p: u64, m: u32) -> Result<Vec<PadicInt>> {
        let roots = super::padic::padic_roots(&self.minpoly, p, m)?;
        if roots.len() < self.degree() {
            return Err(Error::NonSplitField(format!(
                "{:?} has {} of {} roots mod {p}",
                self.minpoly,
                roots.len(),
                self.degree()
            )));
        }
        Ok(roots)
    }
}

impl CoeffRing for NumberField {
    type Elem = NfElem;
    fn zero(&self) -> NfElem {
        NfElem { coords: vec![Rat::zero(); self.degree()] }
    }
    fn one(&self) -> NfElem {
        let mut e = self.zero();
        e.coords[0] = Rat::one();
        e
    }
    fn is_zero(&self, a: &NfElem) -> bool {
        a.coords.iter().all(|c| c.is_zero())
    }
    fn add(&self, a: &NfElem, b: &NfElem) -> NfElem {
        NfElem { coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect() }
    }
    fn sub(&self, a: &NfElem, b: &NfElem) -> NfElem {
        NfElem { coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x - y).collect() }
    }
    fn neg(&self, a: &NfElem) -> NfElem {
        NfElem { coords: a.coords.iter().map(|x| -x).collect() }
    }
    fn mul(&self, a: &NfElem, b: &NfElem) -> NfElem {
        let d = self.degree();
        let mut prod = vec![Rat::zero(); 2 * d - 1];
        for (i, x) in a.coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coords.iter().enumerate() {
                prod[i + j] += x * y;
            }
        }
        self.reduce(prod)
    }
    fn from_bigint(&self, v: &BigInt) -> NfElem {
        let mut e = self.zero();
        e.coords[0] = Rat::from_integer(v.clone());
        e
    }
    fn from_rat(&self, v: &Rat) -> Result<NfElem> {
        let mut e = self.zero();
        e.coords[0] = v.clone();
        Ok(e)
    }
    fn descriptor(&self) -> RingDescriptor {
        RingDescriptor {
            ring: "NF".into(),
            p: None,
            m: None,
            minpoly: Some(self.minpoly.iter().map(|c| c.to_string()).collect()),
        }
    }
    fn elem_to_json(&self, a: &NfElem) -> Value {
        Value::Array(a.coords.iter().map(|c| Value::String(c.to_string())).collect())
    }
    fn elem_from_json(&self, v: &Value) -> Result<NfElem> {
        let arr = v.as_array().ok_or_else(|| Error::InvalidInput("expected coordinate array".into()))?;
        let coords = arr
            .iter()
            .map(|x| x.as_str().map(parse_rat).unwrap_or_else(|| Err(Error::InvalidInput("coordinate".into()))))
            .collect::<Result<Vec<_>>>()?;
        self.from_coords(coords)
    }
}

impl Field for NumberField {
    fn inv(&self, a: &NfElem) -> Result<NfElem> {
        if self.is_zero(a) {
            return Err(Error::SingularSystem("inverse of zero".into()));
        }
        let m = self.mult_matrix(a);
        let e0 = self.one().coords;
        let x = solve(&RatField, &m, &e0).map_err(|_| Error::NotAField(format!("{:?} is a zero divisor", a.coords)))?;
        Ok(NfElem { coords: x })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn field() -> NumberField {
        // x^2 - 1080x - 20468736: a_2 field of the weight-24 eigenforms
        NumberField::new(vec![BigInt::from(-20468736i64), BigInt::from(-1080), BigInt::one()]).unwrap()
    }

    fn el(a: i64, b: i64) -> NfElem {
        NfElem { coords: vec![Rat::from_integer(a.into()), Rat::from_integer(b.into())] }
    }

    #[test]
    fn generator_satisfies_minpoly() {
        let k = field();
        let t = k.generator();
        let v = k.sub(&k.sub(&k.mul(&t, &t), &k.mul(&k.from_i64(1080), &t)), &k.from_i64(20468736));
        assert!(k.is_zero(&v));
    }

    #[test]
    fn inverse_roundtrip() {
        let k = field();
        let a = el(3, -7);
        assert_eq!(k.mul(&a, &k.inv(&a).unwrap()), k.one());
    }

    #[test]
    fn zero_divisor_is_reported() {
        let k = NumberField::new(vec![BigInt::from(-1), BigInt::zero(), BigInt::one()]).unwrap();
        assert!(matches!(k.inv(&el(1, 1)), Err(Error::NotAField(_))));
    }

    proptest! {
        // Brute-force oracle: multiply as integer polynomials, then take the remainder by long division.
        #[test]
        fn mul_matches_remainder_oracle(a in -50i64..50, b in -50i64..50, c in -50i64..50, d in -50i64..50) {
            let k = NumberField::new(vec![BigInt::from(3), BigInt::from(-2), BigInt::from(5), BigInt::one()]).unwrap();
            let x = NfElem { coords: vec![Rat::from_integer(a.into()), Rat::from_integer(b.into()), Rat::zero()] };
            let y = NfElem { coords: vec![Rat::from_integer(c.into()), Rat::zero(), Rat::from_integer(d.into())] };
            let got = k.mul(&x, &y);
            // product (a + b t)(c + d t^2) = ac + bc t + ad t^2 + bd t^3, t^3 = -5t^2 + 2t - 3
            let mut want = vec![a * c, b * c, a * d];
            let bd = b * d;
            want[2] += -5 * bd;
            want[1] += 2 * bd;
            want[0] += -3 * bd;
            let want: Vec<Rat> = want.into_iter().map(|v| Rat::from_integer(v.into())).collect();
            prop_assert_eq!(got.coords, want);
        }
    }
}
