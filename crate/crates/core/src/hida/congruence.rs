//! Congruence exponent of an ordinary eigenform and the Hecke pairing matrix.

use num_bigint::BigInt;
use serde::Serialize;

use super::space::OrdinarySpace;
use crate::arith::linalg::{smith_padic, Matrix};
use crate::arith::ring::PadicCoeffRing;
use crate::arith::{PadicInt, PadicRing};
use crate::error::{Error, Result};

/// Smallest s with p^s·c_idx(F) integral for every integral F in the column span.
///
/// With P A Q = diag(p^{v_i}), c = Q diag(p^{−v}) P F, so
/// s = max_i (v_i − v_p(Q[idx][i])) over the entries that carry a denominator.
pub fn congruence_exponent(columns: &Matrix<PadicInt>, idx: usize) -> Result<u32> {
    let first = &columns[0][0];
    let (p, m) = (first.p(), first.precision());
    let cols = columns[0].len();
    let sm = smith_padic(columns, p, m)?;
    if sm.vals.len() < cols {
        return Err(Error::SingularSystem(format!("ordinary basis has rank {} < {cols} mod {p}^{m}", sm.vals.len())));
    }
    let mut s = 0u32;
    for (i, &v) in sm.vals.iter().enumerate() {
        let (qv, exact) = sm.q_mat[idx][i].valuation();
        let qv = if exact { qv } else { m };
        s = s.max(v.saturating_sub(qv));
    }
    if s >= m {
        return Err(Error::PrecisionExhausted(format!("congruence exponent {s} >= M = {m}")));
    }
    Ok(s)
}

/// Rows 0..=Sturm of the stabilized eigenforms, one column each.
fn sturm_columns(space: &OrdinarySpace) -> Result<Matrix<PadicInt>> {
    let ring = PadicRing::new(space.p, space.work)?;
    let streams = space
        .forms
        .iter()
        .map(|f| f.stream(&ring, space.sturm))
        .collect::<Result<Vec<_>>>()?;
    Ok((0..=space.sturm).map(|n| streams.iter().map(|s| ring.to_padic(s.coeff(n))).collect()).collect())
}

/// Congruence exponent of ordinary form `target`, computed mod p^M.
pub fn congruence_p_part(space: &OrdinarySpace, target: usize) -> Result<u32> {
    if target >= space.rank {
        return Err(Error::InvalidInput(format!("ordinary index {target} of rank {}", space.rank)));
    }
    let cols: Matrix<PadicInt> =
        sturm_columns(space)?.into_iter().map(|r| r.into_iter().map(|x| x.reduce(space.m)).collect()).collect();
    congruence_exponent(&cols, target)
}

/// ⟨f̂_i, T_j⟩ = a(1, f̂_i|T_j) = a(j, f̂_i) for j = 1..rank.
#[derive(Clone, Debug, Serialize)]
pub struct PairingCheck {
    pub k: String,
    pub p: String,
    pub rank: String,
    pub matrix: Vec<Vec<String>>,
    pub det_mod_p: String,
    pub unimodular: bool,
    pub vacuous: bool,
}

pub fn pairing_matrix(space: &OrdinarySpace) -> Result<PairingCheck> {
    let r = space.rank;
    let ring = PadicRing::new(space.p, space.work)?;
    let mut m: Matrix<PadicInt> = Vec::with_capacity(r);
    for f in &space.forms {
        let s = f.stream(&ring, r.max(1))?;
        m.push((1..=r).map(|j| ring.to_padic(s.coeff(j)).reduce(1)).collect());
    }
    let det = det_mod(&m, space.p);
    Ok(PairingCheck {
        k: space.k.to_string(),
        p: space.p.to_string(),
        rank: r.to_string(),
        matrix: m.iter().map(|row| row.iter().map(|x| x.to_string()).collect()).collect(),
        det_mod_p: det.to_string(),
        unimodular: det % space.p != 0,
        vacuous: r == 0,
    })
}

/// Determinant mod p by elimination (the empty determinant is 1).
fn det_mod(m: &Matrix<PadicInt>, p: u64) -> u64 {
    let n = m.len();
    let pb = BigInt::from(p);
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|r| r.iter().map(|x| (x.to_bigint() % &pb).try_into().unwrap()).collect())
        .collect();
    let p = p as i128;
    let mut det: i128 = 1;
    for c in 0..n {
        let Some(piv) = (c..n).find(|&r| a[r][c] % p != 0) else { return 0 };
        if piv != c {
            a.swap(piv, c);
            det = -det;
        }
        det = det * a[c][c] % p;
        let inv = modinv(a[c][c].rem_euclid(p), p);
        for r in c + 1..n {
            let f = a[r][c] * inv % p;
            for j in c..n {
                a[r][j] = (a[r][j] - f * a[c][j]).rem_euclid(p);
            }
        }
    }
    det.rem_euclid(p) as u64
}

fn modinv(a: i128, p: i128) -> i128 {
    let (mut e, mut b, mut acc) = (p - 2, a, 1i128);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn col(v: &[&[i64]], p: u64, m: u32) -> Matrix<PadicInt> {
        v.iter().map(|r| r.iter().map(|x| PadicInt::from_i64(p, m, *x)).collect()).collect()
    }

    #[test]
    fn artificial_congruence() {
        // b = (1, 0, 2), b' = (0, 1, 5); columns b and b + 7 b'
        let a = col(&[&[1, 1], &[0, 7], &[2, 2 + 35]], 7, 4);
        assert_eq!(congruence_exponent(&a, 0).unwrap(), 1);
        assert_eq!(congruence_exponent(&a, 1).unwrap(), 1);
        let id = col(&[&[1, 0], &[0, 1], &[3, 4]], 7, 4);
        assert_eq!(congruence_exponent(&id, 0).unwrap(), 0);
    }

    #[test]
    fn delta_has_no_congruence() {
        let s = OrdinarySpace::new(12, 11, 4).unwrap();
        assert_eq!(congruence_p_part(&s, 0).unwrap(), 0);
        let pc = pairing_matrix(&s).unwrap();
        assert!(pc.unimodular && !pc.vacuous);
    }

    #[test]
    fn vacuous_pairing_at_rank_zero() {
        let s = OrdinarySpace::new(26, 11, 4).unwrap();
        let pc = pairing_matrix(&s).unwrap();
        assert!(pc.vacuous && pc.unimodular);
    }
}
