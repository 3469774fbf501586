//! p-adic embeddings of level-one eigenforms and their unit-root p-stabilizations.

use num_bigint::BigInt;

use crate::arith::padic::hensel_unit_root_padic;
use crate::arith::ring::PadicCoeffRing;
use crate::arith::PadicInt;
use crate::error::{Error, Result};
use crate::modforms::basis::{integral_basis, victor_miller_basis};
use crate::modforms::eigen::{EigenSystem, Eigenform};
use crate::qexp::QExp;

/// One conjugate of an eigen-orbit, embedded in Z/p^W through a root of its minimal polynomial.
#[derive(Clone, Debug)]
pub struct EmbeddedEigenform {
    pub weight: u32,
    /// Index of the Galois orbit in the eigen-system.
    pub orbit: usize,
    /// Image of θ (the T_2 eigenvalue).
    pub root: PadicInt,
    /// a(1..D) of the form, i.e. its coordinates on the echelon basis.
    pub vector: Vec<PadicInt>,
    pub a_p: PadicInt,
}

impl EmbeddedEigenform {
    pub fn is_ordinary(&self) -> bool {
        self.a_p.is_unit()
    }

    /// q-expansion over a series ring of the same p.
    pub fn stream<R: PadicCoeffRing>(&self, ring: &R, n_max: usize) -> Result<QExp<R>> {
        let basis = victor_miller_basis(ring, self.weight, n_max.max(self.vector.len()), true)?;
        let c: Vec<R::Elem> = self.vector.iter().map(|v| ring.from_padic(v)).collect();
        Ok(basis.combine(&c).truncate(n_max))
    }
}

/// Embed one eigenform conjugate: `root` must be a root of the orbit's minimal polynomial.
pub fn embed(f: &Eigenform, orbit: usize, root: &PadicInt, p: u64) -> Result<EmbeddedEigenform> {
    let dim = f.vector.len();
    let vector = f
        .vector
        .iter()
        .map(|v| f.field.embed_padic_int(v, root))
        .collect::<Result<Vec<_>>>()
        .map_err(|e| Error::NonSplitField(format!("eigenvector is not p-integral: {e}")))?;
    let basis = integral_basis(f.weight, (p as usize).max(dim), true)?;
    let mut a_p = PadicInt::zero(root.p(), root.precision());
    for (v, b) in vector.iter().zip(&basis.basis) {
        a_p = a_p.add(&v.mul(&PadicInt::new(root.p(), root.precision(), b.coeff(p as usize))));
    }
    Ok(EmbeddedEigenform { weight: f.weight, orbit, root: root.clone(), vector, a_p })
}

/// Every conjugate of every orbit of S_k, embedded mod p^W; the fields must split.
pub fn embed_all(sys: &EigenSystem, p: u64, w: u32) -> Result<Vec<EmbeddedEigenform>> {
    let mut out = Vec::new();
    for (i, f) in sys.forms.iter().enumerate() {
        for root in f.field.padic_roots(p, w)? {
            out.push(embed(f, i, &root, p)?);
        }
    }
    Ok(out)
}

/// f_P = f − α_2·f|[p], the U_p-eigenform with unit eigenvalue α_1.
#[derive(Clone, Debug)]
pub struct StabilizedEigenform {
    pub base: EmbeddedEigenform,
    pub p: u64,
    pub alpha1: PadicInt,
    /// α_2 = a_p − α_1 = p^{k−1}/α_1, valuation k − 1.
    pub alpha2: PadicInt,
}

impl StabilizedEigenform {
    pub fn weight(&self) -> u32 {
        self.base.weight
    }

    /// Coordinates on the old basis {b_i} ∪ {b_i|[p]}: (v, −α_2 v).
    pub fn old_coords(&self) -> Vec<PadicInt> {
        let mut c = self.base.vector.clone();
        c.extend(self.base.vector.iter().map(|v| v.mul(&self.alpha2).neg()));
        c
    }

    /// f − α_2 f|[p] as a series.
    pub fn stream<R: PadicCoeffRing>(&self, ring: &R, n_max: usize) -> Result<QExp<R>> {
        let f = self.base.stream(ring, n_max)?;
        let a2 = ring.from_padic(&self.alpha2);
        Ok(f.sub(&f.v_p(self.p).scale(&a2))?.with_level(Some(self.p)))
    }

    /// The other stabilization f − α_1 f|[p], with U_p-eigenvalue α_2.
    pub fn non_unit_stream<R: PadicCoeffRing>(&self, ring: &R, n_max: usize) -> Result<QExp<R>> {
        let f = self.base.stream(ring, n_max)?;
        let a1 = ring.from_padic(&self.alpha1);
        Ok(f.sub(&f.v_p(self.p).scale(&a1))?.with_level(Some(self.p)))
    }
}

/// Unit-root stabilization; NotOrdinary when a_p is not a unit.
pub fn stabilize_embedded(f: &EmbeddedEigenform, p: u64) -> Result<StabilizedEigenform> {
    let ur = hensel_unit_root_padic(&f.a_p, f.weight)?;
    let alpha2 = f.a_p.sub(&ur.alpha1);
    Ok(StabilizedEigenform { base: f.clone(), p, alpha1: ur.alpha1, alpha2 })
}

/// Stabilize conjugate `conjugate` of an eigen-orbit mod p^M and verify the U_p-eigenvalue
/// on the first ⌊n_max/p⌋ coefficients.
pub fn stabilize(f: &Eigenform, conjugate: usize, p: u64, m: u32, n_max: usize) -> Result<StabilizedEigenform> {
    let roots = f.field.padic_roots(p, m)?;
    let root = roots
        .get(conjugate)
        .ok_or_else(|| Error::InvalidInput(format!("conjugate {conjugate} of {}", roots.len())))?;
    let s = stabilize_embedded(&embed(f, 0, root, p)?, p)?;
    if n_max >= p as usize {
        let ring = crate::arith::PadicRing::new(p, m)?;
        let st = s.stream(&ring, n_max)?;
        let lhs = st.u_p(p);
        let rhs = st.truncate(lhs.n_max()).scale(&ring.from_padic(&s.alpha1));
        if lhs.coeffs() != rhs.coeffs() {
            return Err(Error::ClosureViolation(format!("U_{p} eigenvalue check failed in weight {}", f.weight)));
        }
    }
    Ok(s)
}

/// Integer form of a p-adic residue, for reports.
pub fn lift(x: &PadicInt) -> BigInt {
    x.to_bigint()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ring::CoeffRing;
    use crate::arith::ZmodRing;
    use crate::modforms::eigen::eigenbasis;
    use crate::modforms::series::delta;
    use num_bigint::BigUint;

    #[test]
    fn delta_at_11() {
        let sys = eigenbasis(12).unwrap();
        let s = stabilize(&sys.forms[0], 0, 11, 1, 40).unwrap();
        assert_eq!(s.alpha1.residue(), &BigUint::from(1u32));
        let s4 = stabilize(&sys.forms[0], 0, 11, 4, 300).unwrap();
        let ring = ZmodRing::new(11, 4).unwrap();
        let st = s4.stream(&ring, 300).unwrap();
        let d = delta(&ring, 300);
        // unchanged away from p, a(11) = α_1, a(np^r) = α_1^r a(n)
        assert_eq!(st.coeff(2), d.coeff(2));
        assert_eq!(st.coeff(11), &ring.from_padic(&s4.alpha1));
        let a1 = ring.from_padic(&s4.alpha1);
        assert_eq!(st.coeff(242), &ring.mul(&ring.mul(&a1, &a1), d.coeff(2)));
        // α_1 + α_2 = τ(11), α_1 α_2 = 11^11
        let tau11 = PadicInt::new(11, 4, &BigInt::from(534612));
        assert_eq!(s4.alpha1.add(&s4.alpha2), tau11);
        assert!(s4.alpha1.mul(&s4.alpha2).is_zero());
    }

    #[test]
    fn weight_24_not_ordinary_at_11() {
        let sys = eigenbasis(24).unwrap();
        let emb = embed_all(&sys, 11, 4);
        // the field Q(√144169) may or may not split at 11; either way nothing is ordinary
        if let Ok(v) = emb {
            assert!(v.iter().all(|f| !f.is_ordinary()));
        }
        assert!(matches!(stabilize(&eigenbasis(26).unwrap().forms[0], 0, 11, 4, 0), Err(Error::NotOrdinary(_))));
    }

    #[test]
    fn weight_24_at_13() {
        let sys = eigenbasis(24).unwrap();
        let emb = embed_all(&sys, 13, 4).unwrap();
        assert_eq!(emb.len(), 2);
        assert_eq!(emb.iter().filter(|f| f.is_ordinary()).count(), 1);
        let f = emb.iter().find(|f| f.is_ordinary()).unwrap();
        let s = stabilize_embedded(f, 13).unwrap();
        let ring = ZmodRing::new(13, 4).unwrap();
        let st = s.stream(&ring, 400).unwrap();
        assert_eq!(st.u_p(13).coeffs(), st.truncate(30).scale(&ring.from_padic(&s.alpha1)).coeffs());
        let ns = s.non_unit_stream(&ring, 400).unwrap();
        assert_eq!(ns.u_p(13).coeffs(), ns.truncate(30).scale(&ring.from_padic(&s.alpha2)).coeffs());
    }
}
