//! Dense linear algebra over exact fields and over Z/p^M.

use num_bigint::BigUint;
use num_traits::Zero;

use super::padic::PadicInt;
use super::ring::{CoeffRing, Field};
use crate::error::{Error, Result};

pub type Matrix<E> = Vec<Vec<E>>;

pub fn mat_vec<R: CoeffRing>(ring: &R, a: &Matrix<R::Elem>, v: &[R::Elem]) -> Vec<R::Elem> {
    a.iter()
        .map(|row| {
            let mut acc = ring.zero();
            for (x, y) in row.iter().zip(v) {
                ring.mul_add_assign(&mut acc, x, y);
            }
            acc
        })
        .collect()
}

pub fn mat_mul<R: CoeffRing>(ring: &R, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> Matrix<R::Elem> {
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = ring.zero();
                    for (x, brow) in row.iter().zip(b) {
                        ring.mul_add_assign(&mut acc, x, &brow[j]);
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref<F: Field>(field: &F, a: &mut Matrix<F::Elem>) -> Result<Vec<usize>> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| !field.is_zero(&a[i][c])) else {
            continue;
        };
        a.swap(r, piv);
        let inv = field.inv(&a[r][c])?;
        for j in c..cols {
            a[r][j] = field.mul(&a[r][j], &inv);
        }
        for i in 0..rows {
            if i != r && !field.is_zero(&a[i][c]) {
                let f = a[i][c].clone();
                for j in c..cols {
                    let t = field.mul(&f, &a[r][j]);
                    a[i][j] = field.sub(&a[i][j], &t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    Ok(pivots)
}

/// Solve A x = b for square invertible A.
pub fn solve<F: Field>(field: &F, a: &Matrix<F::Elem>, b: &[F::Elem]) -> Result<Vec<F::Elem>> {
    let n = a.len();
    let mut aug: Matrix<F::Elem> = a
        .iter()
        .zip(b)
        .map(|(row, x)| {
            let mut r = row.clone();
            r.push(x.clone());
            r
        })
        .collect();
    let piv = rref(field, &mut aug)?;
    if piv.len() < n || piv.iter().any(|&c| c >= n) {
        return Err(Error::SingularSystem(format!("{n}x{n} system is singular")));
    }
    Ok(aug.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

/// Basis of the right kernel of A.
pub fn nullspace<F: Field>(field: &F, a: &Matrix<F::Elem>) -> Result<Vec<Vec<F::Elem>>> {
    let cols = a.first().map_or(0, |r| r.len());
    let mut m = a.clone();
    let piv = rref(field, &mut m)?;
    let free: Vec<usize> = (0..cols).filter(|c| !piv.contains(c)).collect();
    Ok(free
        .iter()
        .map(|&f| {
            let mut v = vec![field.zero(); cols];
            v[f] = field.one();
            for (r, &pc) in piv.iter().enumerate() {
                v[pc] = field.neg(&m[r][f]);
            }
            v
        })
        .collect())
}

/// Smith form over Z/p^M: `p_mat * a * q_mat = diag(p^vals[i])` (then zeros).
#[derive(Clone, Debug)]
pub struct PadicSmith {
    pub p_mat: Matrix<PadicInt>,
    pub q_mat: Matrix<PadicInt>,
    /// Valuations of the diagonal entries, one per pivot found.
    pub vals: Vec<u32>,
}

fn split_unit(x: &PadicInt, v: u32) -> PadicInt {
    PadicInt::from_residue(x.p(), x.precision(), x.residue() / BigUint::from(x.p()).pow(v))
}

fn identity(p: u64, m: u32, n: usize) -> Matrix<PadicInt> {
    (0..n)
        .map(|i| (0..n).map(|j| PadicInt::from_i64(p, m, (i == j) as i64)).collect())
        .collect()
}

/// Smith normal form by minimal-valuation pivoting. Entries that vanish mod p^M
/// end the elimination, so `vals.len()` is the rank mod p^M.
pub fn smith_padic(a: &Matrix<PadicInt>, p: u64, m: u32) -> Result<PadicSmith> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut a = a.to_vec();
    let mut pm = identity(p, m, rows);
    let mut qm = identity(p, m, cols);
    let mut vals = Vec::new();
    for s in 0..rows.min(cols) {
        let mut best: Option<(u32, usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(s) {
            for (j, x) in row.iter().enumerate().skip(s) {
                let (v, exact) = x.valuation();
                if exact && best.map_or(true, |(bv, _, _)| v < bv) {
                    best = Some((v, i, j));
                }
            }
        }
        let Some((v, pi, pj)) = best else { break };
        a.swap(s, pi);
        pm.swap(s, pi);
        for row in a.iter_mut() {
            row.swap(s, pj);
        }
        for row in qm.iter_mut() {
            row.swap(s, pj);
        }
        let uinv = split_unit(&a[s][s], v).inv()?;
        for j in 0..cols {
            a[s][j] = a[s][j].mul(&uinv);
        }
        for j in 0..rows {
            pm[s][j] = pm[s][j].mul(&uinv);
        }
        for i in s + 1..rows {
            if a[i][s].is_zero() {
                continue;
            }
            let f = split_unit(&a[i][s], v);
            for j in 0..cols {
                let t = f.mul(&a[s][j]);
                a[i][j] = a[i][j].sub(&t);
            }
            for j in 0..rows {
                let t = f.mul(&pm[s][j]);
                pm[i][j] = pm[i][j].sub(&t);
            }
        }
        for j in s + 1..cols {
            if a[s][j].is_zero() {
                continue;
            }
            let f = split_unit(&a[s][j], v);
            for row in a.iter_mut() {
                let t = f.mul(&row[s]);
                row[j] = row[j].sub(&t);
            }
            for row in qm.iter_mut() {
                let t = f.mul(&row[s]);
                row[j] = row[j].sub(&t);
            }
        }
        vals.push(v);
    }
    Ok(PadicSmith { p_mat: pm, q_mat: qm, vals })
}

/// Result of solving a linear system over Z/p^M.
#[derive(Clone, Debug)]
pub struct PadicSolution {
    pub x: Vec<PadicInt>,
    /// Digits lost to non-unit pivots; x is reliable mod p^(M - slack).
    pub slack: u32,
    /// Indices of transformed equations that fail to vanish mod p^(M - slack).
    pub residual_rows: Vec<usize>,
}

/// Solve the (possibly overdetermined) system A x = b over Z/p^M via the Smith form.
pub fn solve_padic(a: &Matrix<PadicInt>, b: &[PadicInt]) -> Result<PadicSolution> {
    let cols = a.first().map_or(0, |r| r.len());
    let (p, m) = (b[0].p(), b[0].precision());
    let sm = smith_padic(a, p, m)?;
    if sm.vals.len() < cols {
        return Err(Error::SingularSystem(format!("rank {} < {cols} mod {p}^{m}", sm.vals.len())));
    }
    let slack = sm.vals.iter().copied().max().unwrap_or(0);
    if slack >= m {
        return Err(Error::PrecisionExhausted(format!("pivot valuation {slack} >= M = {m}")));
    }
    let keep = m - slack;
    let pb = mat_vec_padic(&sm.p_mat, b);
    let mut residual_rows = Vec::new();
    let mut y = Vec::with_capacity(cols);
    for (i, &v) in sm.vals.iter().enumerate() {
        let (rv, exact) = pb[i].valuation();
        if exact && rv < v && rv < keep {
            residual_rows.push(i);
        }
        let q = if exact && rv >= v { pb[i].residue() / BigUint::from(p).pow(v) } else { BigUint::zero() };
        y.push(PadicInt::from_residue(p, m, q));
    }
    for (i, r) in pb.iter().enumerate().skip(cols) {
        if !r.reduce(keep).is_zero() {
            residual_rows.push(i);
        }
    }
    let x = mat_vec_padic(&sm.q_mat, &y);
    Ok(PadicSolution { x: x.into_iter().map(|v| v.reduce(keep)).collect(), slack, residual_rows })
}

pub fn mat_vec_padic(a: &Matrix<PadicInt>, v: &[PadicInt]) -> Vec<PadicInt> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(PadicInt::zero(v[0].p(), v[0].precision()), |acc, (x, y)| acc.add(&x.mul(y)))
        })
        .collect()
}

pub fn mat_mul_padic(a: &Matrix<PadicInt>, b: &Matrix<PadicInt>) -> Matrix<PadicInt> {
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .fold(PadicInt::zero(row[0].p(), row[0].precision()), |acc, (x, br)| acc.add(&x.mul(&br[j])))
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ring::RatField;
    use crate::arith::Rat;
    use num_bigint::BigInt;

    fn r(v: i64) -> Rat {
        Rat::from_integer(BigInt::from(v))
    }

    #[test]
    fn solve_rational() {
        let a = vec![vec![r(2), r(1)], vec![r(1), r(3)]];
        let x = solve(&RatField, &a, &[r(5), r(10)]).unwrap();
        assert_eq!(x, vec![r(1), r(3)]);
    }

    #[test]
    fn nullspace_rank_one() {
        let a = vec![vec![r(1), r(2)], vec![r(2), r(4)]];
        let ns = nullspace(&RatField, &a).unwrap();
        assert_eq!(ns, vec![vec![r(-2), r(1)]]);
    }

    #[test]
    fn padic_solve_with_slack() {
        let (p, m) = (5u64, 6u32);
        let e = |v: i64| PadicInt::from_i64(p, m, v);
        // [[1, 0], [0, 5]] x = [3, 10] -> x = (3, 2), slack 1
        let a = vec![vec![e(1), e(0)], vec![e(0), e(5)], vec![e(1), e(5)]];
        let s = solve_padic(&a, &[e(3), e(10), e(13)]).unwrap();
        assert_eq!(s.slack, 1);
        assert!(s.residual_rows.is_empty());
        assert_eq!(s.x[0], PadicInt::from_i64(p, 5, 3));
        assert_eq!(s.x[1], PadicInt::from_i64(p, 5, 2));
        let bad = solve_padic(&a, &[e(3), e(10), e(14)]).unwrap();
        assert_eq!(bad.residual_rows, vec![2]);
    }
}
