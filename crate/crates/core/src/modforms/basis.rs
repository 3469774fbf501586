//! Victor–Miller echelon bases of M_k and S_k at level one, and Hecke matrices.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;

use super::series::{delta, eisenstein_monomial, weight_split};
use crate::arith::ring::{CoeffRing, IntRing};
use crate::error::{Error, Result};
use crate::qexp::QExp;

/// dim M_k(SL_2(Z)) for even k ≥ 0.
pub fn dim_modular(k: u32) -> usize {
    if k % 2 == 1 {
        return 0;
    }
    let base = (k / 12) as usize;
    if k % 12 == 2 {
        base
    } else {
        base + 1
    }
}

/// dim S_k(SL_2(Z)).
pub fn dim_cusp(k: u32) -> usize {
    if k < 12 || k % 2 == 1 {
        0
    } else {
        dim_modular(k) - 1
    }
}

/// Sturm bound ⌈k(p+1)/12⌉ for Γ_0(p); p = 1 gives the level-one bound.
pub fn sturm_bound(k: u32, p: u64) -> usize {
    (k as u64 * (p + 1)).div_ceil(12) as usize
}

/// Echelon basis of a level-one space.
#[derive(Clone, Debug, PartialEq)]
pub struct SpaceBasis<R: CoeffRing> {
    pub weight: u32,
    pub cusp: bool,
    pub basis: Vec<QExp<R>>,
}

impl<R: CoeffRing> SpaceBasis<R> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Index of the first q-exponent pinned by the echelon form.
    pub fn offset(&self) -> usize {
        usize::from(self.cusp)
    }

    pub fn n_max(&self) -> usize {
        self.basis.first().map_or(usize::MAX, |b| b.n_max())
    }

    /// Coordinates of a form in this basis, read off the echelon positions.
    pub fn coordinates(&self, f: &QExp<R>) -> Vec<R::Elem> {
        (0..self.dim()).map(|i| f.coeff(i + self.offset()).clone()).collect()
    }

    /// Σ c_i b_i.
    pub fn combine(&self, c: &[R::Elem]) -> QExp<R> {
        let ring = self.basis[0].ring().clone();
        let mut acc = QExp::zero(ring.clone(), self.n_max()).with_weight(Some(self.weight as i64));
        for (ci, b) in c.iter().zip(&self.basis) {
            acc = acc.add(&b.scale(ci)).unwrap();
        }
        acc.with_weight(Some(self.weight as i64))
    }
}

/// Victor–Miller basis: b_i has a(j, b_i) = δ_ij on the pinned exponents.
pub fn victor_miller_basis<R: CoeffRing>(ring: &R, k: u32, n_max: usize, cusp: bool) -> Result<SpaceBasis<R>> {
    if k % 2 == 1 || (!cusp && k < 4 && k != 0) || (cusp && k < 12 && dim_cusp(k) > 0) {
        return Err(Error::InvalidInput(format!("weight {k} is outside the supported range")));
    }
    let (first, dim) = if cusp { (1usize, dim_cusp(k)) } else { (0usize, dim_modular(k)) };
    if dim > 0 && n_max < first + dim - 1 {
        return Err(Error::InsufficientPrecision { needed: first + dim - 1, have: n_max });
    }
    let d = delta(ring, n_max);
    let mut gens: Vec<QExp<R>> = Vec::with_capacity(dim);
    let mut dpow = QExp::from_fn(ring.clone(), n_max, Some(0), |n| if n == 0 { ring.one() } else { ring.zero() });
    for _ in 0..first {
        dpow = dpow.mul(&d)?;
    }
    for j in first..first + dim {
        let w = k - 12 * j as u32;
        let (a, b) = weight_split(w).ok_or_else(|| Error::InvalidInput(format!("no Eisenstein monomial of weight {w}")))?;
        let g = dpow.mul(&eisenstein_monomial(ring, n_max, a, b))?;
        gens.push(g.with_weight(Some(k as i64)));
        dpow = dpow.mul(&d)?;
    }
    // generators are unitriangular on the pinned exponents; clear above the diagonal
    for i in (0..dim).rev() {
        for j in i + 1..dim {
            let c = gens[i].coeff(first + j).clone();
            if !ring.is_zero(&c) {
                let t = gens[j].scale(&c);
                gens[i] = gens[i].sub(&t)?;
            }
        }
    }
    Ok(SpaceBasis { weight: k, cusp, basis: gens })
}

type CacheKey = (u32, usize, bool);

fn cache() -> &'static RwLock<HashMap<CacheKey, Arc<SpaceBasis<IntRing>>>> {
    static CACHE: OnceLock<RwLock<HashMap<CacheKey, Arc<SpaceBasis<IntRing>>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Integer Victor–Miller basis, memoized by (k, n_max, cusp). Safe for concurrent readers.
pub fn integral_basis(k: u32, n_max: usize, cusp: bool) -> Result<Arc<SpaceBasis<IntRing>>> {
    let key = (k, n_max, cusp);
    if let Some(b) = cache().read().unwrap().get(&key) {
        return Ok(b.clone());
    }
    // a longer cached basis truncates to the requested one
    let longer = cache()
        .read()
        .unwrap()
        .iter()
        .filter(|((kk, n, c), _)| *kk == k && *c == cusp && *n > n_max)
        .map(|(_, b)| b.clone())
        .next();
    let b = match longer {
        Some(l) => SpaceBasis { weight: k, cusp, basis: l.basis.iter().map(|f| f.truncate(n_max)).collect() },
        None => victor_miller_basis(&IntRing, k, n_max, cusp)?,
    };
    let b = Arc::new(b);
    cache().write().unwrap().insert(key, b.clone());
    Ok(b)
}

/// Matrix of T_q on the echelon basis of S_k: entry (i, j) = a(i, T_q b_j).
pub fn hecke_matrix(k: u32, q: u64) -> Result<Vec<Vec<BigInt>>> {
    let dim = dim_cusp(k);
    let basis = integral_basis(k, q as usize * dim.max(1) + 1, true)?;
    hecke_matrix_on(&basis, q)
}

/// Hecke matrix on a given basis; needs length ≥ q·D.
pub fn hecke_matrix_on(basis: &SpaceBasis<IntRing>, q: u64) -> Result<Vec<Vec<BigInt>>> {
    let dim = basis.dim();
    let off = basis.offset();
    let imgs = basis
        .basis
        .iter()
        .map(|b| b.hecke_t_to(q, off + dim - 1))
        .collect::<Result<Vec<_>>>()?;
    Ok((0..dim).map(|i| (0..dim).map(|j| imgs[j].coeff(i + off).clone()).collect()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions() {
        assert_eq!(dim_cusp(12), 1);
        assert_eq!(dim_cusp(24), 2);
        assert_eq!(dim_cusp(26), 1);
        assert_eq!(dim_cusp(14), 0);
        assert_eq!(dim_modular(4), 1);
        assert_eq!(dim_modular(12), 2);
        assert_eq!(sturm_bound(26, 11), 26);
        assert_eq!(sturm_bound(24, 13), 28);
    }

    #[test]
    fn weight_24_echelon() {
        let b = victor_miller_basis(&IntRing, 24, 10, true).unwrap();
        assert_eq!(b.dim(), 2);
        assert_eq!(b.basis[0].coeff(1), &BigInt::from(1));
        assert_eq!(b.basis[0].coeff(2), &BigInt::from(0));
        assert_eq!(b.basis[1].coeff(1), &BigInt::from(0));
        assert_eq!(b.basis[1].coeff(2), &BigInt::from(1));
    }

    #[test]
    fn hecke_matrices() {
        assert_eq!(hecke_matrix(12, 2).unwrap(), vec![vec![BigInt::from(-24)]]);
        assert_eq!(hecke_matrix(26, 2).unwrap(), vec![vec![BigInt::from(-48)]]);
        let m = hecke_matrix(24, 2).unwrap();
        assert_eq!(&m[0][0] + &m[1][1], BigInt::from(1080));
        let det = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
        assert_eq!(det, BigInt::from(540 * 540 - 144 * 144169i64));
    }

    #[test]
    fn cache_is_consistent() {
        let a = integral_basis(28, 40, true).unwrap();
        let b = integral_basis(28, 20, true).unwrap();
        assert_eq!(b.basis[1].coeffs(), &a.basis[1].coeffs()[..21]);
    }
}
