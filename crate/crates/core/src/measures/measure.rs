//! Measures on Z_p^× valued in q-expansions: dμ_g and h·dμ_g.

use num_bigint::BigInt;

use crate::arith::ring::{CoeffRing, PadicCoeffRing};
use crate::error::{Error, Result};
use crate::qexp::QExp;

/// A locally constant function times a power of the inclusion ν:
/// φ(x) = x^power · Σ scalar·1[x ≡ residue mod p^t].
#[derive(Clone, Debug, PartialEq)]
pub struct TestFunction {
    pub indicators: Vec<(u64, u32, BigInt)>,
    pub power: u32,
}

impl TestFunction {
    /// The constant 1 on Z_p^×.
    pub fn one() -> Self {
        TestFunction { indicators: vec![(0, 0, BigInt::from(1))], power: 0 }
    }

    pub fn indicator(residue: u64, t: u32) -> Self {
        TestFunction { indicators: vec![(residue, t, BigInt::from(1))], power: 0 }
    }

    /// ν^r.
    pub fn nu(r: u32) -> Self {
        TestFunction { power: r, ..Self::one() }
    }

    /// φ(n) for a positive integer n prime to p.
    pub fn value(&self, n: u64, p: u64) -> BigInt {
        let mut s = BigInt::from(0);
        for (a, t, c) in &self.indicators {
            let m = p.pow(*t);
            if n % m == a % m {
                s += c;
            }
        }
        s * BigInt::from(n).pow(self.power)
    }
}

/// dμ_g (h = None) or h·dμ_g on Z_p^×.
#[derive(Clone, Debug)]
pub struct ArithMeasure<R: CoeffRing> {
    pub g: QExp<R>,
    pub h: Option<QExp<R>>,
    pub p: u64,
}

impl<R: CoeffRing> ArithMeasure<R> {
    pub fn new(g: QExp<R>, h: Option<QExp<R>>, p: u64) -> Result<Self> {
        if g.weight().is_none() || h.as_ref().is_some_and(|h| h.weight().is_none()) {
            return Err(Error::InvalidInput("measure inputs need weight tags".into()));
        }
        Ok(ArithMeasure { g, h, p })
    }

    /// The character weight κ: weight of g (plus that of h when present).
    pub fn kappa(&self) -> i64 {
        self.g.weight().unwrap() + self.h.as_ref().map_or(0, |h| h.weight().unwrap())
    }

    fn multiply(&self, f: QExp<R>) -> Result<QExp<R>> {
        match &self.h {
            None => Ok(f),
            Some(h) => h.mul(&f),
        }
    }

    /// ∫ φ dμ = h·Σ_{(n,p)=1} φ(n) a(n, g) q^n.
    pub fn eval(&self, phi: &TestFunction) -> Result<QExp<R>> {
        let ring = self.g.ring().clone();
        let p = self.p;
        let coeffs = (0..=self.g.n_max())
            .map(|n| {
                if n == 0 || n as u64 % p == 0 {
                    ring.zero()
                } else {
                    ring.mul(&ring.from_bigint(&phi.value(n as u64, p)), self.g.coeff(n))
                }
            })
            .collect();
        let w = self.g.weight().map(|w| w + 2 * phi.power as i64);
        let level = self.g.level().map(|l| l * p * p);
        self.multiply(QExp::new(ring, coeffs, w).with_level(level))
    }

    /// ∫ x^r dμ = h·d^r(g_p), weight κ + 2r.
    pub fn moment(&self, r: u32) -> Result<QExp<R>> {
        self.multiply(self.g.p_deplete(self.p).theta(r))
    }
}

impl<R: CoeffRing> ArithMeasure<R> {
    /// Coefficients of moment(r) at the given indices only.
    pub fn moment_at(&self, r: u32, indices: &[usize]) -> Result<Vec<R::Elem>> {
        let m = self.g.p_deplete(self.p).theta(r);
        match &self.h {
            None => indices.iter().map(|&i| {
                if i > m.n_max() {
                    Err(Error::InsufficientPrecision { needed: i, have: m.n_max() })
                } else {
                    Ok(m.coeff(i).clone())
                }
            }).collect(),
            Some(h) => h.mul_at(&m, indices),
        }
    }
}

impl<R: PadicCoeffRing> ArithMeasure<R> {
    /// Teichmüller character ω mod p^W: ω(x) = x^{p^{W−1}}.
    fn teichmuller(ring: &R, x: u64) -> R::Elem {
        let p = ring.prime();
        ring.pow(&ring.from_i64(x as i64), p.pow(ring.prec() - 1))
    }

    /// Check that ∫ 1[x ≡ a mod p] dμ = (1/(p−1)) Σ_j ω(a)^{−j} (g ⊗ ω^j) (times h), i.e. a
    /// combination of Dirichlet-character twists of g.
    pub fn twist_decomposition_holds(&self, a: u64) -> Result<bool> {
        let ring = self.g.ring().clone();
        let p = self.p;
        if a % p == 0 {
            return Err(Error::InvalidInput(format!("{a} is not a unit mod {p}")));
        }
        let inv_pm1 = ring.from_rat(&crate::arith::rat(1, p as i64 - 1))?;
        let wa_inv = {
            let w = Self::teichmuller(&ring, a);
            ring.pow(&w, p - 2)
        };
        let omega: Vec<R::Elem> = (0..p).map(|x| if x == 0 { ring.zero() } else { Self::teichmuller(&ring, x) }).collect();
        let n_max = self.g.n_max();
        let mut acc = QExp::zero(ring.clone(), n_max).with_weight(self.g.weight());
        for j in 0..(p - 1) {
            let twisted = QExp::from_fn(ring.clone(), n_max, self.g.weight(), |n| {
                if n as u64 % p == 0 {
                    return ring.zero();
                }
                let chi = ring.pow(&omega[n % p as usize], j);
                ring.mul(&chi, self.g.coeff(n))
            });
            let c = ring.mul(&ring.pow(&wa_inv, j), &inv_pm1);
            acc = acc.add(&twisted.scale(&c))?;
        }
        let lhs = self.eval(&TestFunction::indicator(a, 1))?;
        Ok(self.multiply(acc)?.coeffs() == lhs.coeffs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{IntRing, ZmodRing};
    use crate::modforms::series::delta;

    #[test]
    fn moments_match_nu_powers() {
        let d = delta(&IntRing, 200);
        for h in [None, Some(d.clone())] {
            let mu = ArithMeasure::new(d.clone(), h, 11).unwrap();
            for r in 0..=3 {
                let a = mu.moment(r).unwrap();
                let b = mu.eval(&TestFunction::nu(r)).unwrap();
                assert_eq!(a.coeffs(), b.coeffs(), "r={r}");
                assert_eq!(a.weight(), b.weight());
            }
        }
    }

    #[test]
    fn moment_at_matches_moment() {
        let d = delta(&IntRing, 300);
        let mu = ArithMeasure::new(d.clone(), Some(d.clone()), 11).unwrap();
        let full = mu.moment(1).unwrap();
        let idx = [0, 5, 121, 242, 300];
        let part = mu.moment_at(1, &idx).unwrap();
        for (i, v) in idx.iter().zip(&part) {
            assert_eq!(full.coeff(*i), v);
        }
        assert!(mu.moment_at(1, &[301]).is_err());
    }

    #[test]
    fn evaluations() {
        let d = delta(&IntRing, 200);
        let mu = ArithMeasure::new(d.clone(), None, 11).unwrap();
        assert_eq!(mu.eval(&TestFunction::one()).unwrap(), d.p_deplete(11));
        let e = mu.eval(&TestFunction::indicator(1, 1)).unwrap();
        for n in 0..=200 {
            if n % 11 != 1 {
                assert_eq!(e.coeff(n), &BigInt::from(0));
            } else {
                assert_eq!(e.coeff(n), d.coeff(n));
            }
        }
        assert_eq!(mu.eval(&TestFunction::nu(1)).unwrap().coeffs(), d.p_deplete(11).theta(1).coeffs());
        assert_eq!(mu.kappa(), 12);
    }

    #[test]
    fn indicator_is_a_twist_combination() {
        let ring = ZmodRing::new(11, 4).unwrap();
        let d = delta(&ring, 200);
        let mu = ArithMeasure::new(d.clone(), Some(d), 11).unwrap();
        for a in [1, 2, 10] {
            assert!(mu.twist_decomposition_holds(a).unwrap());
        }
    }
}
