//! Checks that pair two independent routes through different modules.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use proptest::prelude::*;
use trisqrt::arith::{hensel_unit_root, PadicInt, PadicNum, Rat};
use trisqrt::hida::OrdinarySpace;
use trisqrt::identity::{reference_ep, sum_t_terms};
use trisqrt::lfunc::{local_triple_factor, partial_l, real_form, triple_factor_brute, triple_factor_resultant, SatakePair};
use trisqrt::measures::{euler_factor, EpSign, EulerData};
use trisqrt::modforms::eigen::rational_eigenform;

fn coeff(w: u32, p: u64) -> BigInt {
    rational_eigenform(w, p as usize).unwrap().coeff(p as usize).clone()
}

/// Symbolic E_p and T-sum, evaluated at the unit root, against the numeric E_p.
#[test]
fn symbolic_and_numeric_euler_factors_agree() {
    for (p, k, l, m, form) in [(13u64, 24u32, 12u32, 12u32, 0usize), (31, 24, 12, 12, 1), (19, 30, 16, 12, 0), (17, 28, 12, 16, 0)] {
        let s = OrdinarySpace::new(k, p, 6).unwrap();
        let f = &s.forms[form];
        let (b, c) = (coeff(l, p), coeff(m, p));
        let ed = EulerData::new(p, (k, l, m), &f.alpha1, b.clone(), c.clone()).unwrap();
        let a1 = PadicNum::from_padic_int(&f.alpha1);
        let (bn, cn) = (PadicNum::from_bigint(p, &b, 40), PadicNum::from_bigint(p, &c, 40));
        for (sign, plus) in [(EpSign::Minus, false), (EpSign::Plus, true)] {
            let numeric = euler_factor(&ed, sign);
            let symbolic = reference_ep(k, l, m, plus).eval(p, &a1, &bn, &cn).unwrap();
            let d = numeric.mismatch_valuation(&symbolic);
            assert!(d.is_none(), "({p},{k},{l},{m}) {sign:?}: differ at valuation {d:?}");
        }
        // the T-sum is E_p with the flipped sign
        let t = sum_t_terms(k, l, m).eval(p, &a1, &bn, &cn).unwrap();
        assert!(t.mismatch_valuation(&euler_factor(&ed, EpSign::Plus)).is_none());
    }
}

/// The sign gap 2 α_2 a_p p^{−k} sits at valuation −1, below the precision a real α_1 mod p^8
/// supplies, so this uses a synthetic unit α_1 known to p^60.
#[test]
fn sign_gap_has_valuation_minus_one() {
    let (p, k, l, m) = (13u64, 24u32, 12u32, 12u32);
    let alpha1 = PadicInt::from_rat(p, 60, &Rat::new(7.into(), 3.into())).unwrap();
    let ed = EulerData::new(p, (k, l, m), &alpha1, coeff(l, p), coeff(m, p)).unwrap();
    let a1 = PadicNum::from_padic_int(&alpha1);
    let (bn, cn) = (PadicNum::from_bigint(p, &coeff(l, p), 60), PadicNum::from_bigint(p, &coeff(m, p), 60));
    let t = sum_t_terms(k, l, m).eval(p, &a1, &bn, &cn).unwrap();
    let minus = euler_factor(&ed, EpSign::Minus);
    assert!(t.mismatch_valuation(&euler_factor(&ed, EpSign::Plus)).is_none());
    let gap = t.sub(&minus);
    assert!(gap.abs_prec() > 0);
    assert_eq!(gap.valuation(), Some(-1));
    let two_a2_ap = ed.alpha2.mul(&ed.a_p).mul(&PadicNum::p_power(p, -(k as i64), 60)).mul(&PadicNum::from_bigint(p, &2.into(), 60));
    assert!(gap.mismatch_valuation(&two_a2_ap).is_none());
}

#[test]
fn hensel_root_matches_embedded_unit_root() {
    for (k, p) in [(12u32, 11u64), (22, 11), (24, 13)] {
        let s = OrdinarySpace::new(k, p, 5).unwrap();
        let f = &s.forms[0];
        if k != 24 {
            let u = hensel_unit_root(&coeff(k, p), p, k, s.work).unwrap();
            assert_eq!(u.alpha1, f.alpha1, "k = {k}");
        }
        // α_1 solves X² − a_p X + p^{k−1} in every case
        let a = &f.alpha1;
        let pk = PadicInt::new(p, s.work, &BigInt::from(p).pow(k - 1));
        assert!(a.mul(a).sub(&f.base.a_p.mul(a)).add(&pk).is_zero());
    }
}

/// For rational forms and integer s the partial product is an exact rational; the interval
/// route must enclose it.
#[test]
fn interval_product_encloses_exact_value() {
    let d = real_form(12, 0, 0, 60, 64).unwrap();
    let e = real_form(16, 0, 0, 60, 64).unwrap();
    let s = 30i64;
    let pp = partial_l([&e, &d, &d], &Rat::from_integer(s.into()), &[60], 64).unwrap();
    let mut exact = Rat::one();
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59] {
        let (poly, _) = local_triple_factor(&SatakePair::new(q, 16, coeff(16, q)), &SatakePair::new(q, 12, coeff(12, q)), &SatakePair::new(q, 12, coeff(12, q))).unwrap();
        let x = Rat::new(BigInt::one(), BigInt::from(q).pow(s as u32));
        let val: Rat = poly.iter().rev().fold(Rat::from_integer(0.into()), |acc, c| acc * &x + Rat::from_integer(c.clone()));
        exact /= val;
    }
    let lo: f64 = pp.lo.parse().unwrap();
    let hi: f64 = pp.hi.parse().unwrap();
    let ex = exact.to_f64().unwrap();
    assert!(lo <= ex + 1e-18 && ex - 1e-18 <= hi, "{lo} {ex} {hi}");
    assert!(hi - lo < 1e-15);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn triple_factor_structure(qi in 0usize..8, wi in prop::sample::subsequence(vec![12u32, 16, 18, 20, 22, 26], 3)) {
        let q = [2u64, 3, 5, 7, 11, 13, 17, 19][qi];
        let sp: Vec<SatakePair> = wi.iter().map(|&w| SatakePair::new(q, w, coeff(w, q))).collect();
        let res = triple_factor_resultant(&sp[0], &sp[1], &sp[2]).unwrap();
        let brute = triple_factor_brute(&sp[0], &sp[1], &sp[2]).unwrap();
        prop_assert_eq!(&res, &brute);
        let abc = &sp[0].trace * &sp[1].trace * &sp[2].trace;
        prop_assert_eq!(&res[1], &-abc);
        let w: u32 = wi.iter().sum::<u32>() - 3;
        prop_assert_eq!(&res[8], &BigInt::from(q).pow(4 * w));
        prop_assert_eq!(&res[0], &BigInt::one());
    }
}
