//! Level-one building blocks: E_4, E_6 and Δ as truncated q-expansions over any ring.

use crate::arith::ring::CoeffRing;
use crate::qexp::QExp;

/// σ_r(n) for 0 ≤ n ≤ n_max (σ_r(0) unused and set to 0).
pub fn divisor_sums(r: u32, n_max: usize) -> Vec<u128> {
    let mut s = vec![0u128; n_max + 1];
    for d in 1..=n_max {
        let dr = (d as u128).pow(r);
        let mut m = d;
        while m <= n_max {
            s[m] += dr;
            m += d;
        }
    }
    s
}

fn eisenstein<R: CoeffRing>(ring: &R, n_max: usize, r: u32, c: i128, weight: i64) -> QExp<R> {
    let s = divisor_sums(r, n_max);
    QExp::from_fn(ring.clone(), n_max, Some(weight), |n| {
        if n == 0 {
            ring.one()
        } else {
            // c·σ_r(n) stays below 2^127 for every n_max used here (n ≤ 10^6)
            ring.mul(&ring.from_i128(c), &ring.from_i128(s[n] as i128))
        }
    })
}

/// E_4 = 1 + 240 Σ σ_3(n) q^n.
pub fn e4<R: CoeffRing>(ring: &R, n_max: usize) -> QExp<R> {
    eisenstein(ring, n_max, 3, 240, 4)
}

/// E_6 = 1 − 504 Σ σ_5(n) q^n.
pub fn e6<R: CoeffRing>(ring: &R, n_max: usize) -> QExp<R> {
    eisenstein(ring, n_max, 5, -504, 6)
}

/// Π(1 − q^n)^3 = Σ_{j≥0} (−1)^j (2j+1) q^{j(j+1)/2} (Jacobi).
fn euler_cubed<R: CoeffRing>(ring: &R, n_max: usize) -> QExp<R> {
    let mut c = vec![ring.zero(); n_max + 1];
    let mut j = 0usize;
    while j * (j + 1) / 2 <= n_max {
        let v = (2 * j + 1) as i64 * if j % 2 == 0 { 1 } else { -1 };
        c[j * (j + 1) / 2] = ring.from_i64(v);
        j += 1;
    }
    QExp::new(ring.clone(), c, Some(0))
}

/// Δ = q Π(1 − q^n)^24 to n_max terms.
pub fn delta<R: CoeffRing>(ring: &R, n_max: usize) -> QExp<R> {
    if n_max == 0 {
        return QExp::new(ring.clone(), vec![ring.zero()], Some(12));
    }
    let e3 = euler_cubed(ring, n_max - 1);
    let e6 = e3.mul(&e3).unwrap();
    let e12 = e6.mul(&e6).unwrap();
    let e24 = e12.mul(&e12).unwrap();
    let mut c = Vec::with_capacity(n_max + 1);
    c.push(ring.zero());
    c.extend(e24.into_coeffs());
    QExp::new(ring.clone(), c, Some(12))
}

/// E_4^a E_6^b, the weight 4a + 6b Eisenstein monomial.
pub fn eisenstein_monomial<R: CoeffRing>(ring: &R, n_max: usize, a: u32, b: u32) -> QExp<R> {
    let x = e4(ring, n_max).pow(a).unwrap();
    let y = e6(ring, n_max).pow(b).unwrap();
    x.mul(&y).unwrap().with_weight(Some(4 * a as i64 + 6 * b as i64))
}

/// Some (a, b) with 4a + 6b = w, preferring the largest power of E_4.
pub fn weight_split(w: u32) -> Option<(u32, u32)> {
    if w % 2 == 1 || w == 2 {
        return None;
    }
    (0..=w / 6).map(|b| (w.saturating_sub(6 * b), b)).find(|(r, _)| r % 4 == 0).map(|(r, b)| (r / 4, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::IntRing;
    use num_bigint::BigInt;

    fn ints(q: &QExp<IntRing>) -> Vec<BigInt> {
        q.coeffs().to_vec()
    }

    #[test]
    fn delta_first_terms() {
        let d = delta(&IntRing, 12);
        let want: Vec<BigInt> = [0, 1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920, 534612, -370944]
            .iter()
            .map(|v| BigInt::from(*v))
            .collect();
        assert_eq!(ints(&d), want);
    }

    #[test]
    fn delta_is_eisenstein_combination() {
        // 1728 Δ = E_4^3 − E_6^2: an independent route to Δ
        let n = 60;
        let lhs = delta(&IntRing, n).scale(&BigInt::from(1728));
        let rhs = e4(&IntRing, n).pow(3).unwrap().sub(&e6(&IntRing, n).pow(2).unwrap()).unwrap();
        assert_eq!(lhs.coeffs(), rhs.coeffs());
    }

    #[test]
    fn weight_splits() {
        assert_eq!(weight_split(0), Some((0, 0)));
        assert_eq!(weight_split(2), None);
        assert_eq!(weight_split(10), Some((1, 1)));
        assert_eq!(weight_split(12), Some((3, 0)));
    }
}
