//! Hecke eigenforms at level one over their coefficient fields, and eigen-expansion.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::basis::{dim_cusp, hecke_matrix_on, integral_basis, SpaceBasis};
use crate::arith::linalg::nullspace;
use crate::arith::poly::{charpoly, derivative, factor_small};
use crate::arith::ring::{CoeffRing, Field, IntRing};
use crate::arith::{NfElem, NumberField, Rat};
use crate::error::{Error, Result};
use crate::qexp::QExp;

/// One Galois orbit of normalized eigenforms: a form over Q(θ), θ = its T_2 eigenvalue.
#[derive(Clone, Debug)]
pub struct Eigenform {
    pub weight: u32,
    pub field: NumberField,
    /// Coordinates on the echelon basis; the first is a(1) = 1.
    pub vector: Vec<NfElem>,
}

impl Eigenform {
    /// Number of conjugate eigenforms in this orbit.
    pub fn conjugates(&self) -> usize {
        self.field.degree()
    }

    /// q-expansion over the coefficient field to n_max terms.
    pub fn qexp(&self, n_max: usize) -> Result<QExp<NumberField>> {
        let basis = integral_basis(self.weight, n_max.max(dim_cusp(self.weight)), true)?;
        let k = &self.field;
        let mut coeffs = vec![k.zero(); n_max + 1];
        for (v, b) in self.vector.iter().zip(&basis.basis) {
            for (n, c) in coeffs.iter_mut().enumerate() {
                let bn = b.coeff(n);
                if !bn.is_zero() {
                    *c = k.add(c, &k.mul(v, &k.from_bigint(bn)));
                }
            }
        }
        Ok(QExp::new(k.clone(), coeffs, Some(self.weight as i64)))
    }

    /// Rational q-expansion when the orbit has a single member.
    pub fn rational_qexp(&self, n_max: usize) -> Result<QExp<IntRing>> {
        if self.field.degree() != 1 {
            return Err(Error::InvalidInput(format!("weight-{} orbit has degree {}", self.weight, self.field.degree())));
        }
        let f = self.qexp(n_max)?;
        let coeffs = f
            .coeffs()
            .iter()
            .map(|c| {
                let r = &c.coords[0];
                if r.is_integer() {
                    Ok(r.to_integer())
                } else {
                    Err(Error::InvalidInput("non-integral eigenform coefficient".into()))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(QExp::new(IntRing, coeffs, Some(self.weight as i64)))
    }
}

/// All eigenform orbits of S_k together with the T_2 data that defines them.
#[derive(Clone, Debug)]
pub struct EigenSystem {
    pub weight: u32,
    pub t2: Vec<Vec<BigInt>>,
    pub charpoly: Vec<BigInt>,
    pub forms: Vec<Eigenform>,
}

/// Serializable summary of an eigen-orbit.
#[derive(Clone, Debug, Serialize)]
pub struct EigenformDoc {
    pub weight: String,
    pub minpoly: Vec<String>,
    pub coeffs: Vec<Vec<String>>,
}

impl EigenformDoc {
    pub fn new(f: &Eigenform, n_max: usize) -> Result<Self> {
        let q = f.qexp(n_max)?;
        Ok(EigenformDoc {
            weight: f.weight.to_string(),
            minpoly: f.field.minpoly().iter().map(|c| c.to_string()).collect(),
            coeffs: q.coeffs().iter().map(|c| c.coords.iter().map(|x| x.to_string()).collect()).collect(),
        })
    }
}

/// Eigenbasis of S_k, one entry per Galois orbit (conjugates share the entry).
pub fn eigenbasis(k: u32) -> Result<EigenSystem> {
    let dim = dim_cusp(k);
    if dim == 0 {
        return Ok(EigenSystem { weight: k, t2: vec![], charpoly: vec![BigInt::one()], forms: vec![] });
    }
    if dim > crate::arith::numfield::MAX_DEGREE {
        return Err(Error::IrreducibleDegreeTooHigh(dim));
    }
    let basis = integral_basis(k, 2 * dim + 1, true)?;
    let t2 = hecke_matrix_on(&basis, 2)?;
    let chi = charpoly(&t2);
    let factors = factor_small(&chi)?;
    let mut forms = Vec::new();
    for m in factors {
        let field = NumberField::new(m)?;
        let theta = field.generator();
        let a: Vec<Vec<NfElem>> = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| {
                        let mut e = field.from_bigint(&t2[i][j]);
                        if i == j {
                            e = field.sub(&e, &theta);
                        }
                        e
                    })
                    .collect()
            })
            .collect();
        let ns = nullspace(&field, &a)?;
        if ns.len() != 1 {
            return Err(Error::SingularSystem(format!("T_2 eigenspace of dimension {} in weight {k}", ns.len())));
        }
        let v = &ns[0];
        let inv = field.inv(&v[0])?;
        let vector = v.iter().map(|x| field.mul(x, &inv)).collect();
        forms.push(Eigenform { weight: k, field, vector });
    }
    Ok(EigenSystem { weight: k, t2, charpoly: chi, forms })
}

impl EigenSystem {
    /// Coefficient of the eigenform `idx` in the eigen-expansion of a cusp form F
    /// given by its coordinates w on the echelon basis:
    /// c = first coordinate of Q(T_2) w with Q(x) = χ(x) / ((x − θ) χ'(θ)).
    pub fn eigen_coefficient(&self, idx: usize, w: &[Rat]) -> Result<NfElem> {
        let f = &self.forms[idx];
        let k = &f.field;
        let theta = k.generator();
        let dim = w.len();
        // synthetic division of χ by (x − θ)
        let n = self.charpoly.len() - 1;
        let mut quot = vec![k.zero(); n];
        let mut carry = k.zero();
        for i in (1..=n).rev() {
            carry = k.add(&k.from_bigint(&self.charpoly[i]), &k.mul(&carry, &theta));
            quot[i - 1] = carry.clone();
        }
        let dchi = derivative(&self.charpoly);
        let mut dval = k.zero();
        for c in dchi.iter().rev() {
            dval = k.add(&k.mul(&dval, &theta), &k.from_bigint(c));
        }
        let dinv = k.inv(&dval)?;
        // Σ_j quot_j (T^j w)_1, with T^j w over Q
        let mut tw: Vec<Rat> = w.to_vec();
        let mut acc = k.zero();
        for (j, qj) in quot.iter().enumerate() {
            if j > 0 {
                tw = (0..dim)
                    .map(|i| (0..dim).map(|l| Rat::from_integer(self.t2[i][l].clone()) * &tw[l]).sum())
                    .collect();
            }
            acc = k.add(&acc, &k.mul(qj, &k.from_rat(&tw[0])?));
        }
        Ok(k.mul(&acc, &dinv))
    }

    /// Eigen-coefficients of a rational cusp form of this weight (needs a(1..D)).
    pub fn expand(&self, f: &QExp<crate::arith::RatField>) -> Result<Vec<NfElem>> {
        let dim = self.t2.len();
        if f.n_max() < dim {
            return Err(Error::InsufficientPrecision { needed: dim, have: f.n_max() });
        }
        let w: Vec<Rat> = (1..=dim).map(|i| f.coeff(i).clone()).collect();
        (0..self.forms.len()).map(|i| self.eigen_coefficient(i, &w)).collect()
    }

    /// Σ over orbits of Tr(c_θ f_θ), which must reproduce the expanded form.
    pub fn recombine(&self, coeffs: &[NfElem], n_max: usize) -> Result<Vec<Rat>> {
        let mut out = vec![Rat::zero(); n_max + 1];
        for (f, c) in self.forms.iter().zip(coeffs) {
            let q = f.qexp(n_max)?;
            for (n, a) in q.coeffs().iter().enumerate() {
                out[n] += trace(&f.field, &f.field.mul(c, a));
            }
        }
        Ok(out)
    }
}

/// Trace from Q(θ) to Q.
pub fn trace(k: &NumberField, a: &NfElem) -> Rat {
    let d = k.degree();
    let theta = k.generator();
    let mut x = k.one();
    let mut t = Rat::zero();
    for j in 0..d {
        if j > 0 {
            x = k.mul(&x, &theta);
        }
        t += k.mul(a, &x).coords[j].clone();
    }
    t
}

/// Rational basis as used by [`EigenSystem::expand`].
pub fn rational_basis(k: u32, n_max: usize) -> Result<SpaceBasis<crate::arith::RatField>> {
    let b = integral_basis(k, n_max, true)?;
    Ok(SpaceBasis {
        weight: k,
        cusp: true,
        basis: b.basis.iter().map(|f| f.map_ring(crate::arith::RatField, |c| Rat::from_integer(c.clone()))).collect(),
    })
}

/// The unique normalized eigenform of a one-dimensional S_k, as integers.
pub fn rational_eigenform(k: u32, n_max: usize) -> Result<QExp<IntRing>> {
    if dim_cusp(k) != 1 {
        return Err(Error::InvalidInput(format!("S_{k} has dimension {}, not 1", dim_cusp(k))));
    }
    Ok(integral_basis(k, n_max, true)?.basis[0].clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::RatField;

    #[test]
    fn weight_24_field() {
        let sys = eigenbasis(24).unwrap();
        assert_eq!(sys.forms.len(), 1);
        let f = &sys.forms[0];
        assert_eq!(f.conjugates(), 2);
        // θ² − 1080θ − 20468736: discriminant 1080² + 4·20468736 = 576·144169
        let disc = &sys.charpoly[1] * &sys.charpoly[1] - BigInt::from(4) * &sys.charpoly[0];
        assert_eq!(disc, BigInt::from(576) * BigInt::from(144169));
        let q = f.qexp(10).unwrap();
        assert_eq!(q.coeff(1), &f.field.one());
        assert_eq!(q.coeff(2), &f.field.generator());
    }

    #[test]
    fn weight_16_a2() {
        let sys = eigenbasis(16).unwrap();
        let q = sys.forms[0].rational_qexp(5).unwrap();
        assert_eq!(q.coeff(2), &BigInt::from(216));
    }

    #[test]
    fn multiplicativity_weight_24() {
        let sys = eigenbasis(24).unwrap();
        let f = &sys.forms[0];
        let k = &f.field;
        let q = f.qexp(60).unwrap();
        let a = |n: usize| q.coeff(n).clone();
        assert_eq!(a(6), k.mul(&a(2), &a(3)));
        assert_eq!(a(35), k.mul(&a(5), &a(7)));
        let p23 = k.from_bigint(&BigInt::from(2).pow(23));
        assert_eq!(a(8), k.sub(&k.mul(&a(2), &a(4)), &k.mul(&p23, &a(2))));
    }

    #[test]
    fn expansion_recombines() {
        let sys = eigenbasis(24).unwrap();
        let b = rational_basis(24, 30).unwrap();
        let f = b.basis[0].add(&b.basis[1].scale(&Rat::new(3.into(), 7.into()))).unwrap();
        let c = sys.expand(&f).unwrap();
        let back = sys.recombine(&c, 30).unwrap();
        assert_eq!(back.as_slice(), f.coeffs());
        let _ = RatField;
    }
}
