//! Truncated q-expansions and the coefficient-wise operators T_q, U_p, V_p, d, p-depletion.

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::arith::ring::{CoeffRing, RingDescriptor};
use crate::error::{Error, Result};

/// A q-expansion a_0 + a_1 q + … + a_{n_max} q^{n_max}, valid to its stated length.
#[derive(Clone, Debug, PartialEq)]
pub struct QExp<R: CoeffRing> {
    ring: R,
    coeffs: Vec<R::Elem>,
    weight: Option<i64>,
    level: Option<u64>,
}

fn pow_u64(b: u64, e: u32) -> BigInt {
    BigInt::from(b).pow(e)
}

impl<R: CoeffRing> QExp<R> {
    pub fn new(ring: R, coeffs: Vec<R::Elem>, weight: Option<i64>) -> Self {
        assert!(!coeffs.is_empty(), "a q-expansion needs at least a_0");
        QExp { ring, coeffs, weight, level: Some(1) }
    }

    pub fn zero(ring: R, n_max: usize) -> Self {
        let z = ring.zero();
        Self::new(ring, vec![z; n_max + 1], None)
    }

    pub fn from_fn(ring: R, n_max: usize, weight: Option<i64>, f: impl Fn(usize) -> R::Elem) -> Self {
        let coeffs = (0..=n_max).map(f).collect();
        Self::new(ring, coeffs, weight)
    }

    pub fn from_ints(ring: R, values: &[i64], weight: Option<i64>) -> Self {
        let coeffs = values.iter().map(|v| ring.from_i64(*v)).collect();
        Self::new(ring, coeffs, weight)
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }
    pub fn n_max(&self) -> usize {
        self.coeffs.len() - 1
    }
    pub fn coeffs(&self) -> &[R::Elem] {
        &self.coeffs
    }
    pub fn into_coeffs(self) -> Vec<R::Elem> {
        self.coeffs
    }
    pub fn coeff(&self, n: usize) -> &R::Elem {
        &self.coeffs[n]
    }
    pub fn weight(&self) -> Option<i64> {
        self.weight
    }
    pub fn level(&self) -> Option<u64> {
        self.level
    }

    pub fn with_weight(mut self, w: Option<i64>) -> Self {
        self.weight = w;
        self
    }

    pub fn with_level(mut self, l: Option<u64>) -> Self {
        self.level = l;
        self
    }

    pub fn truncate(&self, n_max: usize) -> Self {
        let mut out = self.clone();
        out.coeffs.truncate(n_max.min(self.n_max()) + 1);
        out
    }

    pub fn is_cusp(&self) -> bool {
        self.ring.is_zero(&self.coeffs[0])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| self.ring.is_zero(c))
    }

    fn same_ring(&self, o: &Self) -> Result<()> {
        if self.ring != o.ring {
            return Err(Error::RingMismatch(format!("{:?} vs {:?}", self.ring, o.ring)));
        }
        Ok(())
    }

    fn zip_with(&self, o: &Self, f: impl Fn(&R::Elem, &R::Elem) -> R::Elem) -> Result<Self> {
        self.same_ring(o)?;
        let n = self.n_max().min(o.n_max());
        let coeffs = (0..=n).map(|i| f(&self.coeffs[i], &o.coeffs[i])).collect();
        let weight = if self.weight == o.weight { self.weight } else { None };
        Ok(QExp { ring: self.ring.clone(), coeffs, weight, level: lcm_level(self.level, o.level) })
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.zip_with(o, |a, b| self.ring.add(a, b))
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.zip_with(o, |a, b| self.ring.sub(a, b))
    }

    pub fn neg(&self) -> Self {
        self.map(|c| self.ring.neg(c))
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        self.map(|x| self.ring.mul(c, x))
    }

    fn map(&self, f: impl Fn(&R::Elem) -> R::Elem) -> Self {
        QExp { ring: self.ring.clone(), coeffs: self.coeffs.iter().map(f).collect(), weight: self.weight, level: self.level }
    }

    /// Coefficient-wise change of ring.
    pub fn map_ring<S: CoeffRing>(&self, ring: S, f: impl Fn(&R::Elem) -> S::Elem) -> QExp<S> {
        QExp { ring, coeffs: self.coeffs.iter().map(f).collect(), weight: self.weight, level: self.level }
    }

    /// Cauchy product truncated to the shorter operand; weights add.
    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.same_ring(o)?;
        let len = self.n_max().min(o.n_max()) + 1;
        let coeffs = self.ring.convolve(&self.coeffs, &o.coeffs, len);
        let weight = match (self.weight, o.weight) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
        Ok(QExp { ring: self.ring.clone(), coeffs, weight, level: lcm_level(self.level, o.level) })
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut acc: Option<Self> = None;
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base)?,
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc.unwrap_or_else(|| {
            let mut one = Self::zero(self.ring.clone(), self.n_max());
            one.coeffs[0] = self.ring.one();
            one.weight = Some(0);
            one
        }))
    }

    fn require_weight(&self) -> Result<i64> {
        self.weight.ok_or_else(|| Error::InvalidInput("operation needs a weight tag".into()))
    }

    /// Level-one Hecke operator T_q for a prime q, truncated to ⌊n_max/q⌋.
    pub fn hecke_t(&self, q: u64) -> Result<Self> {
        self.hecke_t_to(q, self.n_max() / q as usize)
    }

    pub fn hecke_t_to(&self, q: u64, out_n: usize) -> Result<Self> {
        self.hecke_tn_to(q, out_n)
    }

    /// T_m for any m ≥ 1 via a(n, f|T_m) = Σ_{d | (m,n)} d^{k-1} a(mn/d²).
    pub fn hecke_tn(&self, m: u64) -> Result<Self> {
        self.hecke_tn_to(m, self.n_max() / m as usize)
    }

    pub fn hecke_tn_to(&self, m: u64, out_n: usize) -> Result<Self> {
        let k = self.require_weight()?;
        if k < 1 {
            return Err(Error::InvalidInput(format!("weight {k} for a Hecke operator")));
        }
        let avail = self.n_max() / m as usize;
        if out_n > avail {
            return Err(Error::InsufficientPrecision { needed: out_n * m as usize, have: self.n_max() });
        }
        let divisors: Vec<u64> = (1..=m).filter(|d| m % d == 0).collect();
        let powers: Vec<R::Elem> =
            divisors.iter().map(|&d| self.ring.from_bigint(&pow_u64(d, (k - 1) as u32))).collect();
        let coeffs = (0..=out_n)
            .map(|n| {
                let mut acc = self.ring.zero();
                for (i, &d) in divisors.iter().enumerate() {
                    if n as u64 % d != 0 {
                        continue;
                    }
                    let idx = (m / d) as usize * (n / d as usize);
                    self.ring.mul_add_assign(&mut acc, &powers[i], &self.coeffs[idx]);
                }
                acc
            })
            .collect();
        Ok(QExp { ring: self.ring.clone(), coeffs, weight: self.weight, level: self.level })
    }

    /// a(n) ↦ a(np), truncated to ⌊n_max/p⌋.
    pub fn u_p(&self, p: u64) -> Self {
        let out_n = self.n_max() / p as usize;
        let coeffs = (0..=out_n).map(|n| self.coeffs[n * p as usize].clone()).collect();
        QExp { ring: self.ring.clone(), coeffs, weight: self.weight, level: self.level }
    }

    pub fn u_p_to(&self, p: u64, out_n: usize) -> Result<Self> {
        if out_n * p as usize > self.n_max() {
            return Err(Error::InsufficientPrecision { needed: out_n * p as usize, have: self.n_max() });
        }
        Ok(self.u_p(p).truncate(out_n))
    }

    /// The operator [p]: a(n) ↦ a(n/p), same length, level multiplied by p.
    pub fn v_p(&self, p: u64) -> Self {
        let n = self.n_max();
        let mut coeffs = vec![self.ring.zero(); n + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            let j = i * p as usize;
            if j > n {
                break;
            }
            coeffs[j] = c.clone();
        }
        QExp { ring: self.ring.clone(), coeffs, weight: self.weight, level: self.level.map(|l| l * p) }
    }

    /// d^r with d = q d/dq: a(n) ↦ n^r a(n). The weight tag moves by 2r.
    pub fn theta(&self, r: u32) -> Self {
        if r == 0 {
            return self.clone();
        }
        let coeffs: Vec<R::Elem> = self
            .coeffs
            .par_iter()
            .enumerate()
            .with_min_len(2048)
            .map(|(n, c)| self.ring.mul(&self.ring.from_bigint(&pow_u64(n as u64, r)), c))
            .collect();
        QExp { ring: self.ring.clone(), coeffs, weight: self.weight.map(|w| w + 2 * r as i64), level: self.level }
    }

    /// g_p = Σ_{(n,p)=1} a(n) q^n.
    pub fn p_deplete(&self, p: u64) -> Self {
        let coeffs: Vec<R::Elem> = self
            .coeffs
            .par_iter()
            .enumerate()
            .with_min_len(2048)
            .map(|(n, c)| if n as u64 % p == 0 { self.ring.zero() } else { c.clone() })
            .collect();
        QExp { ring: self.ring.clone(), coeffs, weight: self.weight, level: self.level.map(|l| l * p * p) }
    }

    /// Depletion through the operator identity g|(1 - T_p[p] + p^{ℓ-1}[p²]) at level one.
    pub fn p_deplete_via_hecke(&self, p: u64) -> Result<Self> {
        let k = self.require_weight()?;
        let n = self.n_max();
        let tp = self.hecke_t(p)?;
        // [p] of a stream valid to n/p is valid to n
        let vt = extend_v(&tp, p, n);
        let vv = self.v_p(p).v_p(p);
        let c = self.ring.from_bigint(&pow_u64(p, (k - 1) as u32));
        let out = self.sub(&vt)?.add(&vv.scale(&c))?;
        Ok(out.with_level(self.level.map(|l| l * p * p)))
    }

    /// Coefficients a(n, self·other) at the given indices only.
    pub fn mul_at(&self, o: &Self, indices: &[usize]) -> Result<Vec<R::Elem>> {
        self.same_ring(o)?;
        let lim = self.n_max().min(o.n_max());
        if let Some(&bad) = indices.iter().find(|&&i| i > lim) {
            return Err(Error::InsufficientPrecision { needed: bad, have: lim });
        }
        Ok(indices
            .par_iter()
            .map(|&n| {
                let mut acc = self.ring.zero();
                for i in 0..=n {
                    if self.ring.is_zero(&self.coeffs[i]) {
                        continue;
                    }
                    self.ring.mul_add_assign(&mut acc, &self.coeffs[i], &o.coeffs[n - i]);
                }
                acc
            })
            .collect())
    }

    pub fn to_doc(&self) -> QExpDoc {
        QExpDoc {
            schema: 1,
            ring: self.ring.descriptor(),
            n_max: self.n_max().to_string(),
            weight: self.weight.map(|w| w.to_string()),
            level: self.level.map(|l| l.to_string()),
            coeffs: self.coeffs.iter().map(|c| self.ring.elem_to_json(c)).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("serializable")
    }

    /// Parse a document produced by [`QExp::to_doc`] over the given ring.
    pub fn from_doc(ring: R, doc: &QExpDoc) -> Result<Self> {
        if doc.ring.ring != ring.descriptor().ring {
            return Err(Error::RingMismatch(format!("document ring {} vs {}", doc.ring.ring, ring.descriptor().ring)));
        }
        let coeffs = doc.coeffs.iter().map(|v| ring.elem_from_json(v)).collect::<Result<Vec<_>>>()?;
        if coeffs.is_empty() {
            return Err(Error::InvalidInput("empty coefficient list".into()));
        }
        let weight = doc.weight.as_deref().map(str::parse).transpose().map_err(|_| Error::InvalidInput("weight".into()))?;
        let level = doc.level.as_deref().map(str::parse).transpose().map_err(|_| Error::InvalidInput("level".into()))?;
        Ok(QExp { ring, coeffs, weight, level })
    }
}

fn extend_v<R: CoeffRing>(f: &QExp<R>, p: u64, n: usize) -> QExp<R> {
    let mut coeffs = vec![f.ring.zero(); n + 1];
    for (i, c) in f.coeffs.iter().enumerate() {
        let j = i * p as usize;
        if j > n {
            break;
        }
        coeffs[j] = c.clone();
    }
    QExp { ring: f.ring.clone(), coeffs, weight: f.weight, level: f.level.map(|l| l * p) }
}

fn lcm_level(a: Option<u64>, b: Option<u64>) -> Option<u64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(num_integer::lcm(x, y)),
        _ => None,
    }
}

/// JSON form of a q-expansion; all numbers are decimal strings.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct QExpDoc {
    pub schema: u32,
    #[serde(flatten)]
    pub ring: RingDescriptor,
    pub n_max: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level: Option<String>,
    pub coeffs: Vec<Value>,
}

/// Outcome of the diamond-operator identity check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiamondCheck {
    pub holds: bool,
    pub first_failure: Option<usize>,
    pub checked_terms: usize,
}

/// Check T(λ)² − T(λ²) = λ^{ℓ−1} on every basis vector, to the common valid length.
pub fn diamond_check<R: CoeffRing>(weight: i64, lambda: u64, basis: &[QExp<R>]) -> Result<DiamondCheck> {
    let mut checked = usize::MAX;
    for (i, b) in basis.iter().enumerate() {
        let b = b.clone().with_weight(Some(weight));
        let out_n = b.n_max() / (lambda * lambda) as usize;
        let tt = b.hecke_t(lambda)?.hecke_t_to(lambda, out_n)?;
        let t2 = b.hecke_tn_to(lambda * lambda, out_n)?;
        let lhs = tt.sub(&t2)?;
        let c = b.ring().from_bigint(&pow_u64(lambda, (weight - 1) as u32));
        let rhs = b.truncate(out_n).scale(&c);
        checked = checked.min(out_n + 1);
        if lhs.coeffs() != rhs.coeffs() {
            return Ok(DiamondCheck { holds: false, first_failure: Some(i), checked_terms: out_n + 1 });
        }
    }
    Ok(DiamondCheck { holds: true, first_failure: None, checked_terms: if basis.is_empty() { 0 } else { checked } })
}

/// Convenience: an integer q-expansion `Σ c_i q^i` from small integers.
pub fn int_series(values: &[i64]) -> QExp<crate::arith::IntRing> {
    QExp::from_ints(crate::arith::IntRing, values, None)
}
