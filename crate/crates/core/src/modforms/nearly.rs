//! Nearly holomorphic forms Σ g_t Y^t with Y = −1/(4πy), the Maass raising
//! operator in that model, and exact holomorphic projection of cusp forms.

use num_bigint::BigInt;
use num_traits::One;

use crate::arith::ring::CoeffRing;
use crate::arith::Rat;
use crate::error::{Error, Result};
use crate::qexp::QExp;

/// Σ_t comps[t]·Y^t of weight `weight`.
#[derive(Clone, Debug, PartialEq)]
pub struct NHForm<R: CoeffRing> {
    pub weight: i64,
    pub comps: Vec<QExp<R>>,
}

impl<R: CoeffRing> NHForm<R> {
    pub fn holomorphic(g: QExp<R>) -> Result<Self> {
        let weight = g.weight().ok_or_else(|| Error::InvalidInput("nearly holomorphic form needs a weight".into()))?;
        Ok(NHForm { weight, comps: vec![g] })
    }

    pub fn y_degree(&self) -> usize {
        self.comps.len() - 1
    }

    pub fn n_max(&self) -> usize {
        self.comps.iter().map(|c| c.n_max()).min().unwrap_or(0)
    }

    fn ring(&self) -> &R {
        self.comps[0].ring()
    }

    fn tagged(&self, g: QExp<R>) -> QExp<R> {
        g.with_weight(Some(self.weight))
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        if self.weight != o.weight {
            return Err(Error::InvalidInput(format!("weights {} and {} differ", self.weight, o.weight)));
        }
        let n = self.n_max().min(o.n_max());
        let deg = self.comps.len().max(o.comps.len());
        let zero = QExp::zero(self.ring().clone(), n);
        let comps = (0..deg)
            .map(|t| {
                let a = self.comps.get(t).map_or(zero.clone(), |c| c.truncate(n));
                let b = o.comps.get(t).map_or(zero.clone(), |c| c.truncate(n));
                a.add(&b).map(|s| self.tagged(s))
            })
            .collect::<Result<_>>()?;
        Ok(NHForm { weight: self.weight, comps })
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        NHForm { weight: self.weight, comps: self.comps.iter().map(|g| g.scale(c)).collect() }
    }

    /// Product: weights and Y-degrees add.
    pub fn mul(&self, o: &Self) -> Result<Self> {
        let weight = self.weight + o.weight;
        let n = self.n_max().min(o.n_max());
        let mut comps: Vec<QExp<R>> =
            vec![QExp::zero(self.ring().clone(), n).with_weight(Some(weight)); self.comps.len() + o.comps.len() - 1];
        for (t, a) in self.comps.iter().enumerate() {
            for (s, b) in o.comps.iter().enumerate() {
                let prod = a.truncate(n).mul(&b.truncate(n))?;
                comps[t + s] = comps[t + s].add(&prod)?.with_weight(Some(weight));
            }
        }
        Ok(NHForm { weight, comps })
    }

    /// One raising step at the current weight w:
    /// Σ g_t Y^t ↦ Σ [ (d g_t) Y^t + (w − t) g_t Y^{t+1} ].
    fn delta_step(&self) -> Self {
        let ring = self.ring().clone();
        let w = self.weight;
        let n = self.n_max();
        let mut comps: Vec<QExp<R>> = vec![QExp::zero(ring.clone(), n); self.comps.len() + 1];
        for (t, g) in self.comps.iter().enumerate() {
            let g = g.truncate(n);
            comps[t] = comps[t].add(&g.theta(1).with_weight(None)).expect("same ring");
            let c = ring.from_i64(w - t as i64);
            comps[t + 1] = comps[t + 1].add(&g.scale(&c).with_weight(None)).expect("same ring");
        }
        while comps.len() > 1 && comps.last().unwrap().is_zero() {
            comps.pop();
        }
        let weight = w + 2;
        NHForm { weight, comps: comps.into_iter().map(|c| c.with_weight(Some(weight))).collect() }
    }

    /// δ^r = δ_{w+2r−2} ∘ … ∘ δ_w.
    pub fn delta_op(&self, r: u32) -> Self {
        let mut f = self.clone();
        for _ in 0..r {
            f = f.delta_step();
        }
        f
    }

    /// Holomorphic projection of a cuspidal form of weight k:
    /// a(n, H(G)) = Σ_t (−1)^t n^t (k−2−t)!/(k−2)! · a(n, g_t).
    pub fn holomorphic_projection(&self) -> Result<QExp<R>> {
        let k = self.weight;
        let s = self.y_degree() as i64;
        if k <= 2 + 2 * s {
            return Err(Error::WeightTooSmall(format!("weight {k} with Y-degree {s}")));
        }
        let ring = self.ring().clone();
        if !ring.is_zero(self.comps[0].coeff(0)) {
            return Err(Error::InvalidInput("holomorphic projection needs a cuspidal input".into()));
        }
        // (k−2−t)!/(k−2)! = 1 / ((k−2)(k−3)…(k−1−t))
        let mut factors = Vec::with_capacity(self.comps.len());
        let mut denom = BigInt::one();
        for t in 0..self.comps.len() as i64 {
            if t > 0 {
                denom *= k - 1 - t;
            }
            let sign = if t % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            factors.push(ring.from_rat(&Rat::new(sign, denom.clone()))?);
        }
        let n_max = self.n_max();
        let mut coeffs = vec![ring.zero(); n_max + 1];
        for (n, c) in coeffs.iter_mut().enumerate().skip(1) {
            let nn = ring.from_i64(n as i64);
            let mut npow = ring.one();
            for (t, g) in self.comps.iter().enumerate() {
                if t > 0 {
                    npow = ring.mul(&npow, &nn);
                }
                let term = ring.mul(&ring.mul(&factors[t], &npow), g.coeff(n));
                *c = ring.add(c, &term);
            }
        }
        Ok(QExp::new(ring, coeffs, Some(k)))
    }
}

/// Convenience: h·δ^r(g) for holomorphic g, h.
pub fn h_delta_g<R: CoeffRing>(h: &QExp<R>, g: &QExp<R>, r: u32) -> Result<NHForm<R>> {
    NHForm::holomorphic(h.clone())?.mul(&NHForm::holomorphic(g.clone())?.delta_op(r))
}
