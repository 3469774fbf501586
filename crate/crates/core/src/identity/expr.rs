//! Laurent polynomials in u (u² = p), α_1, α_2, b, c modulo α_1α_2 = p^{k−1}.
//!
//! A monomial stores one signed α exponent: e > 0 is α_1^e, e < 0 is α_2^{−e}.
//! Products reduce α_1α_2 to u^{2(k−1)}, so equal elements have equal maps.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::PadicNum;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mono {
    pub u: i64,
    pub alpha: i64,
    pub b: u32,
    pub c: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingExpr {
    /// Weight of f, fixing the relation α_1α_2 = p^{k−1}.
    pub k: u32,
    pub terms: BTreeMap<Mono, BigInt>,
}

impl PairingExpr {
    pub fn zero(k: u32) -> Self {
        PairingExpr { k, terms: BTreeMap::new() }
    }

    fn mono(k: u32, m: Mono, c: BigInt) -> Self {
        let mut e = Self::zero(k);
        if !c.is_zero() {
            e.terms.insert(m, c);
        }
        e
    }

    pub fn constant(k: u32, c: i64) -> Self {
        Self::mono(k, Mono { u: 0, alpha: 0, b: 0, c: 0 }, BigInt::from(c))
    }

    /// p^e = u^{2e}.
    pub fn p_pow(k: u32, e: i64) -> Self {
        Self::mono(k, Mono { u: 2 * e, alpha: 0, b: 0, c: 0 }, BigInt::one())
    }

    pub fn alpha1(k: u32) -> Self {
        Self::mono(k, Mono { u: 0, alpha: 1, b: 0, c: 0 }, BigInt::one())
    }

    pub fn alpha2(k: u32) -> Self {
        Self::mono(k, Mono { u: 0, alpha: -1, b: 0, c: 0 }, BigInt::one())
    }

    /// 1/α_1 = α_2 p^{1−k}.
    pub fn alpha1_inv(k: u32) -> Self {
        Self::alpha2(k).mul(&Self::p_pow(k, 1 - k as i64))
    }

    /// a_p = α_1 + α_2.
    pub fn a_p(k: u32) -> Self {
        Self::alpha1(k).add(&Self::alpha2(k))
    }

    pub fn b(k: u32) -> Self {
        Self::mono(k, Mono { u: 0, alpha: 0, b: 1, c: 0 }, BigInt::one())
    }

    pub fn c(k: u32) -> Self {
        Self::mono(k, Mono { u: 0, alpha: 0, b: 0, c: 1 }, BigInt::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn accumulate(&mut self, m: Mono, c: BigInt) {
        let e = self.terms.entry(m).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.k, o.k);
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.accumulate(*m, c.clone());
        }
        r
    }

    pub fn neg(&self) -> Self {
        PairingExpr { k: self.k, terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, s: i64) -> Self {
        let mut r = Self::zero(self.k);
        for (m, c) in &self.terms {
            r.accumulate(*m, c * s);
        }
        r
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.k, o.k);
        let mut r = Self::zero(self.k);
        let kk = self.k as i64 - 1;
        for (x, cx) in &self.terms {
            for (y, cy) in &o.terms {
                // α_1^i α_2^j with i, j > 0 collapses min(i, j) pairs to p^{k−1}
                let pairs = if x.alpha.signum() * y.alpha.signum() < 0 { x.alpha.abs().min(y.alpha.abs()) } else { 0 };
                let m = Mono { u: x.u + y.u + 2 * kk * pairs, alpha: x.alpha + y.alpha, b: x.b + y.b, c: x.c + y.c };
                r.accumulate(m, cx * cy);
            }
        }
        r
    }

    pub fn sum(k: u32, items: &[Self]) -> Self {
        items.iter().fold(Self::zero(k), |a, b| a.add(b))
    }

    /// Whether every u exponent is even (the expression lives in Z[1/p][α, b, c]).
    pub fn u_even(&self) -> bool {
        self.terms.keys().all(|m| m.u % 2 == 0)
    }

    /// Lower bound for the valuation with α_1 a unit, v(α_2) = k − 1 and b, c integral.
    pub fn valuation_lower_bound(&self) -> Option<i64> {
        self.terms
            .keys()
            .map(|m| {
                let a = if m.alpha < 0 { -m.alpha * (self.k as i64 - 1) } else { 0 };
                m.u.div_euclid(2) + a
            })
            .min()
    }

    /// Evaluate at α_1 (α_2 = p^{k−1}/α_1) and b, c.
    pub fn eval(&self, p: u64, alpha1: &PadicNum, b: &PadicNum, c: &PadicNum) -> Result<PadicNum> {
        if !self.u_even() {
            return Err(Error::InvalidInput("odd power of u = sqrt(p)".into()));
        }
        let rel = alpha1.rel_prec();
        let alpha2 = PadicNum::p_power(p, self.k as i64 - 1, rel).div(alpha1)?;
        let mut acc = PadicNum::zero(p, i64::MAX / 4);
        for (m, coef) in &self.terms {
            let mut t = PadicNum::from_bigint(p, coef, rel).mul(&PadicNum::p_power(p, m.u / 2, rel));
            let a = if m.alpha >= 0 { alpha1.pow(m.alpha)? } else { alpha2.pow(-m.alpha)? };
            t = t.mul(&a).mul(&b.pow(m.b as i64)?).mul(&c.pow(m.c as i64)?);
            acc = acc.add(&t);
        }
        Ok(acc)
    }
}

impl fmt::Display for PairingExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        // largest p-power first reads most naturally
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let mut factors = Vec::new();
            let a = c.abs();
            if !a.is_one() {
                factors.push(a.to_string());
            }
            if m.u != 0 {
                if m.u % 2 == 0 {
                    factors.push(format!("p^{}", m.u / 2));
                } else {
                    factors.push(format!("u^{}", m.u));
                }
            }
            match m.alpha {
                0 => {}
                1 => factors.push("a1".into()),
                -1 => factors.push("a2".into()),
                e if e > 0 => factors.push(format!("a1^{e}")),
                e => factors.push(format!("a2^{}", -e)),
            }
            for (name, e) in [("b", m.b), ("c", m.c)] {
                match e {
                    0 => {}
                    1 => factors.push(name.into()),
                    e => factors.push(format!("{name}^{e}")),
                }
            }
            if factors.is_empty() {
                write!(f, "1")?;
            } else {
                write!(f, "{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::arith::Rat;
    use proptest::prelude::*;

    #[test]
    fn relation_is_applied() {
        let k = 12;
        let prod = PairingExpr::alpha1(k).mul(&PairingExpr::alpha2(k));
        assert_eq!(prod, PairingExpr::p_pow(k, 11));
        let one = PairingExpr::alpha1(k).mul(&PairingExpr::alpha1_inv(k));
        assert_eq!(one, PairingExpr::constant(k, 1));
        assert_eq!(PairingExpr::a_p(k).sub(&PairingExpr::alpha1(k)).to_string(), "a2");
    }

    fn rand_expr(k: u32, v: &[(i8, i8, u8, u8, i8)]) -> PairingExpr {
        let mut e = PairingExpr::zero(k);
        for &(u, a, b, c, coef) in v {
            let m = Mono { u: 2 * u as i64, alpha: a as i64, b: b as u32, c: c as u32 };
            e = e.add(&PairingExpr::mono(k, m, BigInt::from(coef)));
        }
        e
    }

    fn eval_rat(e: &PairingExpr, p: i64, a1: &Rat, b: &Rat, c: &Rat) -> Rat {
        let pp = Rat::from_integer(p.into());
        let a2 = Rat::from_integer(BigInt::from(p).pow(e.k - 1)) / a1;
        e.terms
            .iter()
            .map(|(m, coef)| {
                let a = if m.alpha >= 0 { a1.pow(m.alpha as i32) } else { a2.pow(-m.alpha as i32) };
                Rat::from_integer(coef.clone()) * pp.pow((m.u / 2) as i32) * a * b.pow(m.b as i32) * c.pow(m.c as i32)
            })
            .sum()
    }

    proptest! {
        #[test]
        fn mul_matches_rational_evaluation(
            x in prop::collection::vec((-3i8..3, -3i8..3, 0u8..3, 0u8..3, -5i8..5), 1..5),
            y in prop::collection::vec((-3i8..3, -3i8..3, 0u8..3, 0u8..3, -5i8..5), 1..5),
        ) {
            let k = 6;
            let (a1, b, c) = (rat(7, 2), rat(-3, 5), rat(4, 1));
            let ex = rand_expr(k, &x);
            let ey = rand_expr(k, &y);
            let lhs = eval_rat(&ex.mul(&ey), 3, &a1, &b, &c);
            let rhs = eval_rat(&ex, 3, &a1, &b, &c) * eval_rat(&ey, 3, &a1, &b, &c);
            prop_assert_eq!(lhs, rhs);
        }
    }
}
