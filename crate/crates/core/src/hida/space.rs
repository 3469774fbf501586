//! The ordinary projector on S_k(Γ_0(p)) ⊗ Z/p^M and ordinary coordinates.
//!
//! F|U_p^N lies, up to p^(M+2), in the p-old space spanned by {b_i, b_i|[p]}.
//! On that space U_p acts by A = [[T_p, I], [−p^{k−1} I, 0]] and e = A^L for an
//! exponent L divisible by the exponent of the unit group, so e is computed exactly.

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use super::stabilize::{embed_all, stabilize_embedded, StabilizedEigenform};
use crate::arith::linalg::{mat_mul_padic, mat_vec_padic, solve_padic, Matrix};
use crate::arith::ring::PadicCoeffRing;
use crate::arith::PadicInt;
use crate::error::{Error, Result};
use crate::modforms::basis::{dim_cusp, hecke_matrix, integral_basis, sturm_bound};
use crate::modforms::eigen::eigenbasis;
use crate::qexp::QExp;

/// Extra p-adic digits carried beyond the target precision.
pub const WORK_EXTRA: u32 = 2;

/// Number of U_p iterations applied before solving on the old space.
pub fn u_iterations(k: u32, m: u32) -> u32 {
    let slope = k / 2 - 1;
    2.max(1 + (m + WORK_EXTRA).div_ceil(slope.max(1)))
}

/// ∏_{f ≤ n} (p^f − 1) · p^{M+n+2}: a multiple of the order of every unit in M_n(Z/p^W).
fn idempotent_exponent(p: u64, n: u32, m: u32) -> BigUint {
    let pb = BigUint::from(p);
    let mut l = pb.pow(m + n + 2);
    for f in 1..=n {
        l *= pb.pow(f) - BigUint::one();
    }
    l
}

fn identity(p: u64, w: u32, n: usize) -> Matrix<PadicInt> {
    (0..n).map(|i| (0..n).map(|j| PadicInt::from_i64(p, w, (i == j) as i64)).collect()).collect()
}

fn mat_pow(a: &Matrix<PadicInt>, e: &BigUint, p: u64, w: u32) -> Matrix<PadicInt> {
    let mut acc = identity(p, w, a.len());
    for i in (0..e.bits()).rev() {
        acc = mat_mul_padic(&acc, &acc);
        if e.bit(i) {
            acc = mat_mul_padic(&acc, a);
        }
    }
    acc
}

/// Ordinary part of S_k(Γ_0(p)) mod p^M.
#[derive(Clone, Debug)]
pub struct OrdinarySpace {
    pub k: u32,
    pub p: u64,
    pub m: u32,
    /// Working precision M + WORK_EXTRA.
    pub work: u32,
    pub dim: usize,
    /// U_p on the old space, 2D × 2D.
    pub u_matrix: Matrix<PadicInt>,
    pub idempotent: Matrix<PadicInt>,
    pub rank: usize,
    /// Unit-root stabilizations of the ordinary eigenforms; empty when the rank is 0.
    pub forms: Vec<StabilizedEigenform>,
    pub sturm: usize,
    pub n_iter: u32,
}

impl OrdinarySpace {
    /// Build the projector; embeds eigenforms only when the ordinary rank is positive.
    pub fn new(k: u32, p: u64, m: u32) -> Result<Self> {
        let mut s = Self::projector_only(k, p, m)?;
        if s.rank > 0 {
            let sys = eigenbasis(k)?;
            let emb = embed_all(&sys, p, s.work)?;
            for f in emb.iter().filter(|f| f.is_ordinary()) {
                s.forms.push(stabilize_embedded(f, p)?);
            }
            if s.forms.len() != s.rank {
                return Err(Error::ClosureViolation(format!(
                    "trace(e) = {} but {} ordinary eigenforms in weight {k}",
                    s.rank,
                    s.forms.len()
                )));
            }
        }
        Ok(s)
    }

    /// The idempotent and its rank, without eigenform data.
    pub fn projector_only(k: u32, p: u64, m: u32) -> Result<Self> {
        if k < 4 || k % 2 == 1 {
            return Err(Error::InvalidInput(format!("weight {k}")));
        }
        if m == 0 {
            return Err(Error::InvalidInput("precision M = 0".into()));
        }
        let work = m + WORK_EXTRA;
        let dim = dim_cusp(k);
        let n = 2 * dim;
        let mut a: Matrix<PadicInt> = vec![vec![PadicInt::zero(p, work); n]; n];
        if dim > 0 {
            let t = hecke_matrix(k, p)?;
            let pk = PadicInt::new(p, work, &num_bigint::BigInt::from(p).pow(k - 1)).neg();
            for i in 0..dim {
                for j in 0..dim {
                    a[i][j] = PadicInt::new(p, work, &t[i][j]);
                }
                a[i][dim + i] = PadicInt::one(p, work);
                a[dim + i][i] = pk.clone();
            }
        }
        let e = mat_pow(&a, &idempotent_exponent(p, n as u32, work), p, work);
        let trace = (0..n).fold(PadicInt::zero(p, work), |acc, i| acc.add(&e[i][i]));
        let rank = usize::try_from(trace.signed_lift()).map_err(|_| Error::ClosureViolation(format!("trace(e) = {trace:?}")))?;
        if rank > n || mat_mul_padic(&e, &e) != e {
            return Err(Error::ClosureViolation(format!("e is not idempotent in weight {k}")));
        }
        Ok(OrdinarySpace {
            k,
            p,
            m,
            work,
            dim,
            u_matrix: a,
            idempotent: e,
            rank,
            forms: Vec::new(),
            sturm: sturm_bound(k, p),
            n_iter: u_iterations(k, m),
        })
    }

    /// Series length F needs before U_p^N: (rows − 1)·p^N with rows = 2·(Sturm + 1).
    pub fn required_length(&self) -> usize {
        (self.check_rows() - 1) * (self.p as usize).pow(self.n_iter)
    }

    /// Rows of F|U_p^N used: the Sturm rows for the solve, the rest for the closure check.
    pub fn check_rows(&self) -> usize {
        2 * (self.sturm + 1)
    }

    /// Indices n·p^N whose coefficients determine the projection.
    pub fn needed_indices(&self) -> Vec<usize> {
        let pn = (self.p as usize).pow(self.n_iter);
        (0..self.check_rows()).map(|n| n * pn).collect()
    }

    /// Old-space coordinates (x, y) of F|U_p^N given by its first rows.
    fn old_coordinates(&self, fu: &[PadicInt]) -> Result<(Vec<PadicInt>, u32, usize)> {
        let (p, w) = (self.p, self.work);
        let rows = fu.len();
        let basis = integral_basis(self.k, rows.max(self.dim + 1), true)?;
        let col = |j: usize, n: usize| -> PadicInt {
            if j < self.dim {
                PadicInt::new(p, w, basis.basis[j].coeff(n))
            } else if n % p as usize == 0 {
                PadicInt::new(p, w, basis.basis[j - self.dim].coeff(n / p as usize))
            } else {
                PadicInt::zero(p, w)
            }
        };
        let mut use_rows = (self.sturm + 1).min(rows);
        loop {
            let a: Matrix<PadicInt> = (0..use_rows).map(|n| (0..2 * self.dim).map(|j| col(j, n)).collect()).collect();
            match solve_padic(&a, &fu[..use_rows]) {
                Ok(sol) if sol.slack == 0 || use_rows == rows => {
                    let keep = self.m.saturating_sub(sol.slack);
                    if keep == 0 {
                        return Err(Error::PrecisionExhausted(format!("slack {} at M = {}", sol.slack, self.m)));
                    }
                    // closure: every available row must agree mod p^(M − slack)
                    let x: Vec<PadicInt> = sol.x.iter().map(|v| PadicInt::from_residue(p, w, v.residue().clone())).collect();
                    let mut bad = 0;
                    for (n, target) in fu.iter().enumerate() {
                        let approx = (0..2 * self.dim).fold(PadicInt::zero(p, w), |acc, j| acc.add(&col(j, n).mul(&x[j])));
                        if !approx.sub(target).reduce(keep).is_zero() {
                            bad += 1;
                        }
                    }
                    if bad > 0 {
                        return Err(Error::ClosureViolation(format!(
                            "{bad} of {rows} rows of F|U_p^{} leave the p-old space mod {p}^{keep}",
                            self.n_iter
                        )));
                    }
                    return Ok((x, sol.slack, rows));
                }
                Ok(_) | Err(Error::SingularSystem(_)) if use_rows < rows => use_rows = (2 * use_rows).min(rows),
                Ok(_) => unreachable!(),
                Err(e) => return Err(e),
            }
        }
    }

    /// Coordinates of e(F) on the stabilized eigenbasis, given the coefficients
    /// a(n·p^N, F) for n < check_rows().
    pub fn project_from_u_rows(&self, fu: &[PadicInt]) -> Result<Projection> {
        if fu.len() < self.check_rows() {
            return Err(Error::InsufficientPrecision { needed: self.check_rows(), have: fu.len() });
        }
        let (xy, slack1, rows) = self.old_coordinates(fu)?;
        let (p, w) = (self.p, self.work);
        let z = if self.dim == 0 { Vec::new() } else { mat_vec_padic(&self.idempotent, &xy) };
        if self.rank == 0 {
            return Ok(Projection {
                coords: Vec::new(),
                slack: slack1,
                precision: self.m - slack1,
                n_iter: self.n_iter,
                rows_checked: rows,
                ordinary_residual_zero: z.iter().all(|v| v.reduce(self.m - slack1).is_zero()),
            });
        }
        let cols: Matrix<PadicInt> =
            (0..2 * self.dim).map(|i| self.forms.iter().map(|f| f.old_coords()[i].clone()).collect()).collect();
        let sol = solve_padic(&cols, &z)?;
        let slack = slack1 + sol.slack;
        if slack >= self.m {
            return Err(Error::PrecisionExhausted(format!("slack {slack} at M = {}", self.m)));
        }
        if !sol.residual_rows.is_empty() {
            return Err(Error::ClosureViolation("e(F) is not in the span of the stabilized eigenforms".into()));
        }
        let precision = self.m - slack;
        let coords = sol
            .x
            .iter()
            .zip(&self.forms)
            .map(|(c, f)| {
                let c = PadicInt::from_residue(p, w, c.residue().clone());
                Ok(c.mul(&f.alpha1.pow(self.n_iter as u64).inv()?).reduce(precision))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Projection {
            coords,
            slack,
            precision,
            n_iter: self.n_iter,
            rows_checked: rows,
            ordinary_residual_zero: true,
        })
    }

    /// e(F) for a level-p² cusp form F known to at least required_length() terms.
    pub fn ordinary_project<R: PadicCoeffRing>(&self, f: &QExp<R>) -> Result<Projection> {
        if f.n_max() < self.required_length() {
            return Err(Error::InsufficientPrecision { needed: self.required_length(), have: f.n_max() });
        }
        let ring = f.ring();
        if ring.prime() != self.p || ring.prec() < self.work {
            return Err(Error::RingMismatch(format!("need Z/{}^{} coefficients", self.p, self.work)));
        }
        let fu: Vec<PadicInt> =
            self.needed_indices().iter().map(|&i| ring.to_padic(f.coeff(i)).reduce(self.work)).collect();
        self.project_from_u_rows(&fu)
    }
}

/// Coordinates of e(F) on the stabilized eigenbasis.
#[derive(Clone, Debug)]
pub struct Projection {
    /// One coordinate per ordinary eigenform, mod p^precision.
    pub coords: Vec<PadicInt>,
    pub slack: u32,
    pub precision: u32,
    pub n_iter: u32,
    pub rows_checked: usize,
    /// Whether e(F) vanished (always true when the rank is positive and the solve succeeded).
    pub ordinary_residual_zero: bool,
}

/// H(P)·(coordinate of the target), with H(P) = p^s.
pub fn contract(proj: &Projection, target: usize, h_exponent: u32) -> Result<PadicInt> {
    let c = proj
        .coords
        .get(target)
        .ok_or_else(|| Error::InvalidInput(format!("no ordinary form with index {target}")))?;
    let p = c.p();
    Ok(c.mul(&PadicInt::new(p, c.precision(), &num_bigint::BigInt::from(p).pow(h_exponent))))
}

/// One row of the control-rank table.
#[derive(Clone, Debug, Serialize)]
pub struct RankRow {
    pub k: String,
    pub branch: String,
    pub rank: String,
}

/// Ranks of the ordinary spaces, with the weight class k mod (p − 1).
pub fn control_rank_scan(p: u64, ks: &[u32], m: u32) -> Result<Vec<RankRow>> {
    use rayon::prelude::*;
    ks.par_iter()
        .map(|&k| {
            let s = OrdinarySpace::projector_only(k, p, m)?;
            Ok(RankRow { k: k.to_string(), branch: (k as u64 % (p - 1)).to_string(), rank: s.rank.to_string() })
        })
        .collect()
}

/// Whether ranks agree within each weight class mod p − 1.
pub fn ranks_constant(rows: &[RankRow]) -> bool {
    rows.iter().all(|a| rows.iter().filter(|b| b.branch == a.branch).all(|b| b.rank == a.rank))
}
