//! The Euler factor E_p(f_P, g, h) and the correction factors S(P), K(P).

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::arith::{PadicInt, PadicNum};
use crate::error::{Error, Result};

/// Sign of the α_2·a_p·p^{−k} term inside E_p. `Minus` is the default.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum EpSign {
    #[default]
    Minus,
    Plus,
}

impl EpSign {
    pub fn flipped(self) -> Self {
        match self {
            EpSign::Minus => EpSign::Plus,
            EpSign::Plus => EpSign::Minus,
        }
    }
}

impl std::str::FromStr for EpSign {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "minus" | "-" => Ok(EpSign::Minus),
            "plus" | "+" => Ok(EpSign::Plus),
            _ => Err(Error::InvalidInput(format!("E_p sign {s:?} (expected minus or plus)"))),
        }
    }
}

/// p-th data of (f, g, h) with f of weight k ordinary at p.
#[derive(Clone, Debug)]
pub struct EulerData {
    pub p: u64,
    pub k: u32,
    pub l: u32,
    pub m: u32,
    pub alpha1: PadicNum,
    pub alpha2: PadicNum,
    pub a_p: PadicNum,
    pub b_p: BigInt,
    pub c_p: BigInt,
}

impl EulerData {
    /// From the unit root α_1 mod p^W; α_2 = p^{k−1}/α_1 keeps relative precision W.
    pub fn new(p: u64, (k, l, m): (u32, u32, u32), alpha1: &PadicInt, b_p: BigInt, c_p: BigInt) -> Result<Self> {
        if k % 2 == 1 || l % 2 == 1 || m % 2 == 1 || k < l + m {
            return Err(Error::InvalidInput(format!("weights ({k}, {l}, {m}) need k >= l + m, all even")));
        }
        if !alpha1.is_unit() {
            return Err(Error::NotOrdinary(format!("alpha_1 = {alpha1:?} is not a unit")));
        }
        let w = alpha1.precision();
        let a1 = PadicNum::from_padic_int(alpha1);
        let alpha2 = PadicNum::p_power(p, k as i64 - 1, w).div(&a1)?;
        let a_p = a1.add(&alpha2);
        Ok(EulerData { p, k, l, m, alpha1: a1, alpha2, a_p, b_p, c_p })
    }

    fn pw(&self, e: i64) -> PadicNum {
        PadicNum::p_power(self.p, e, self.alpha1.rel_prec())
    }

    fn int(&self, v: &BigInt) -> PadicNum {
        PadicNum::from_bigint(self.p, v, self.alpha1.rel_prec())
    }
}

/// E_p = p^{−k}(p²α_1² ∓ α_2 a_p) − p^{2−(k+ℓ+m)/2} α_1 b c + p^{1−(k+ℓ−m)/2} b²
///       + p^{1−m} c² − α_2 p^{1−(k+m)/2} c − 1.
pub fn euler_factor(d: &EulerData, sign: EpSign) -> PadicNum {
    let (k, l, m) = (d.k as i64, d.l as i64, d.m as i64);
    let b = d.int(&d.b_p);
    let c = d.int(&d.c_p);
    let a1sq = d.alpha1.mul(&d.alpha1);
    let a2ap = d.alpha2.mul(&d.a_p);
    let inner = match sign {
        EpSign::Minus => d.pw(2).mul(&a1sq).sub(&a2ap),
        EpSign::Plus => d.pw(2).mul(&a1sq).add(&a2ap),
    };
    let t1 = d.pw(-k).mul(&inner);
    let t2 = d.pw(2 - (k + l + m) / 2).mul(&d.alpha1).mul(&b).mul(&c);
    let t3 = d.pw(1 - (k + l - m) / 2).mul(&b).mul(&b);
    let t4 = d.pw(1 - m).mul(&c).mul(&c);
    let t5 = d.alpha2.mul(&d.pw(1 - (k + m) / 2)).mul(&c);
    t1.sub(&t2).add(&t3).add(&t4).sub(&t5).sub(&d.pw(0))
}

/// S(P) = (1 − α_2/α_1)(1 − α_2/(pα_1)) and K(P) = α_1^{−2} p^{k−2} E_p / S(P).
pub fn correction_factors(d: &EulerData, ep: &PadicNum) -> Result<(PadicNum, PadicNum)> {
    let one = d.pw(0);
    let ratio = d.alpha2.div(&d.alpha1)?;
    let s = one.sub(&ratio).mul(&one.sub(&ratio.div(&d.pw(1))?));
    let k = d.pw(d.k as i64 - 2).mul(ep).div(&d.alpha1.mul(&d.alpha1))?.div(&s)?;
    Ok((s, k))
}

/// Valuation of α_1^{−2} p^{k−2}, reported with K.
pub fn k_prefactor_valuation(d: &EulerData) -> i64 {
    d.k as i64 - 2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::padic::hensel_unit_root;
    use crate::arith::rat;
    use crate::arith::Rat;

    fn data(a_p: i64, p: u64, k: u32, l: u32, m: u32, b: i64, c: i64, w: u32) -> EulerData {
        let ur = hensel_unit_root(&BigInt::from(a_p), p, k, w).unwrap();
        EulerData::new(p, (k, l, m), &ur.alpha1, BigInt::from(b), BigInt::from(c)).unwrap()
    }

    #[test]
    fn relations_hold() {
        let d = data(534612, 11, 12, 0, 0, 0, 0, 6);
        let prod = d.alpha1.mul(&d.alpha2);
        assert_eq!(prod.valuation(), Some(11));
        assert!(d.a_p.sub(&PadicNum::from_bigint(11, &BigInt::from(534612), 6)).is_zero());
    }

    #[test]
    fn s_is_a_one_unit() {
        let d = data(534612, 11, 12, 0, 0, 0, 0, 8);
        let ep = euler_factor(&d, EpSign::Minus);
        let (s, _) = correction_factors(&d, &ep).unwrap();
        let one = PadicNum::from_bigint(11, &BigInt::from(1), 8);
        assert!(s.sub(&one).valuation().unwrap_or(i64::MAX) >= 10);
        // exact expansion 1 − α_2/α_1 − α_2/(pα_1) + α_2²/(pα_1²)
        let r = d.alpha2.div(&d.alpha1).unwrap();
        let p = PadicNum::p_power(11, 1, 8);
        let alt = one.sub(&r).sub(&r.div(&p).unwrap()).add(&r.mul(&r).div(&p).unwrap());
        assert!(alt.sub(&s).is_zero());
    }

    #[test]
    fn echo_24_12_12_against_rational_oracle() {
        // exact rational evaluation with a fake α_1 and α_2 = p^{23}/α_1
        let p = 13u64;
        let a1 = rat(7, 3);
        let a2 = Rat::from_integer(BigInt::from(p).pow(23)) / &a1;
        let ap = &a1 + &a2;
        let (b, c) = (rat(-24, 1), rat(5, 1));
        let pw = |e: i64| {
            if e >= 0 {
                Rat::from_integer(BigInt::from(p).pow(e as u32))
            } else {
                Rat::new(BigInt::from(1), BigInt::from(p).pow((-e) as u32))
            }
        };
        let direct = pw(-24) * (pw(2) * &a1 * &a1 - &a2 * &ap) - pw(-22) * &a1 * &b * &c + pw(-11) * &b * &b
            + pw(-11) * &c * &c
            - &a2 * pw(-17) * &c
            - pw(0);
        let w = 40;
        let alpha1 = PadicInt::from_rat(p, w, &a1).unwrap();
        let d = EulerData::new(p, (24, 12, 12), &alpha1, BigInt::from(-24), BigInt::from(5)).unwrap();
        let ep = euler_factor(&d, EpSign::Minus);
        let oracle = PadicNum::from_rat(p, &direct, w);
        let diff = ep.sub(&oracle);
        assert!(diff.is_zero() || diff.valuation().unwrap() >= ep.abs_prec().min(oracle.abs_prec()));
    }

    #[test]
    fn alpha2_zero_limit_is_term_deletion() {
        // with b = c = 0 only p^{2−k}α_1² ∓ p^{−k}α_2 a_p − 1 survive
        let d = data(1, 5, 4, 2, 2, 0, 0, 10);
        let minus = euler_factor(&d, EpSign::Minus);
        let plus = euler_factor(&d, EpSign::Plus);
        let diff = plus.sub(&minus);
        let expect = d.pw(-4).mul(&d.alpha2).mul(&d.a_p).mul(&d.pw(0).add(&d.pw(0)));
        assert!(diff.sub(&expect).is_zero());
        assert_eq!("plus".parse::<EpSign>().unwrap(), EpSign::Plus);
        assert_eq!(EpSign::default().flipped(), EpSign::Plus);
    }
}
