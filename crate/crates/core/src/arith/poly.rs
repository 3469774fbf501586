//! Integer polynomial utilities: characteristic polynomials, squareness, and
//! irreducibility certificates for small degrees. Coefficients run low to high.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Rat;
use crate::error::{Error, Result};

/// Monic characteristic polynomial det(xI - A) by Faddeev–LeVerrier (exact divisions).
pub fn charpoly(a: &[Vec<BigInt>]) -> Vec<BigInt> {
    let n = a.len();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    let mut mk: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = mat_mul(a, &mk);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &coeffs[n - k + 1];
        }
        mk = next;
        let am = mat_mul(a, &mk);
        let tr: BigInt = (0..n).map(|i| am[i][i].clone()).sum();
        let kk = BigInt::from(k);
        debug_assert!((&tr % &kk).is_zero());
        coeffs[n - k] = -(tr / kk);
    }
    coeffs
}

fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    let m = b.first().map_or(0, |r| r.len());
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| a[i].iter().zip(b.iter()).map(|(x, row)| x * &row[j]).sum())
                .collect()
        })
        .collect()
}

pub fn eval_rat(poly: &[BigInt], x: &Rat) -> Rat {
    let mut acc = Rat::zero();
    for c in poly.iter().rev() {
        acc = acc * x + Rat::from_integer(c.clone());
    }
    acc
}

pub fn derivative(poly: &[BigInt]) -> Vec<BigInt> {
    poly.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect()
}

/// Exact square root of a perfect square.
pub fn exact_sqrt(v: &BigInt) -> Option<BigInt> {
    if v.is_negative() {
        return None;
    }
    let r = v.sqrt();
    if &r * &r == *v {
        Some(r)
    } else {
        None
    }
}

pub fn discriminant_quadratic(poly: &[BigInt]) -> BigInt {
    assert_eq!(poly.len(), 3);
    &poly[1] * &poly[1] - BigInt::from(4) * &poly[0] * &poly[2]
}

// Arithmetic in F_l[x] for the irreducibility certificate.

fn trim(v: &mut Vec<u64>) {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
}

fn inv_mod(a: u64, l: u64) -> u64 {
    let (mut e, mut b, mut acc) = (l - 2, a % l, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % l;
        }
        b = b * b % l;
        e >>= 1;
    }
    acc
}

fn polmod(a: &[u64], f: &[u64], l: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    trim(&mut r);
    let df = f.len() - 1;
    let lc_inv = inv_mod(f[df], l);
    while r.len() > df && !(r.len() == 1 && r[0] == 0) {
        let shift = r.len() - 1 - df;
        let c = r[r.len() - 1] * lc_inv % l;
        for (i, fi) in f.iter().enumerate() {
            r[shift + i] = (r[shift + i] + l - c * fi % l) % l;
        }
        trim(&mut r);
        if r.len() - 1 < df {
            break;
        }
    }
    r
}

fn polmulmod(a: &[u64], b: &[u64], f: &[u64], l: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % l;
        }
    }
    polmod(&out, f, l)
}

fn polgcd(a: &[u64], b: &[u64], l: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !(b.len() == 1 && b[0] == 0) {
        let r = polmod(&a, &b, l);
        a = b;
        b = r;
    }
    a
}

/// x^(l^e) mod f by repeated l-th powering.
fn frobenius_power(e: u32, f: &[u64], l: u64) -> Vec<u64> {
    let mut x = polmod(&[0, 1], f, l);
    for _ in 0..e {
        // x <- x^l
        let mut acc = vec![1u64];
        let mut base = x.clone();
        let mut k = l;
        while k > 0 {
            if k & 1 == 1 {
                acc = polmulmod(&acc, &base, f, l);
            }
            base = polmulmod(&base, &base, f, l);
            k >>= 1;
        }
        x = acc;
    }
    x
}

/// Rabin's test for irreducibility of a monic polynomial over F_l.
pub fn irreducible_mod(poly: &[BigInt], l: u64) -> bool {
    let lb = BigInt::from(l);
    let f: Vec<u64> = poly.iter().map(|c| c.mod_floor(&lb).to_u64().unwrap()).collect();
    let n = f.len() - 1;
    if f[n] == 0 {
        return false;
    }
    let sub_x = |mut v: Vec<u64>| {
        if v.len() < 2 {
            v.resize(2, 0);
        }
        v[1] = (v[1] + l - 1) % l;
        trim(&mut v);
        v
    };
    if sub_x(frobenius_power(n as u32, &f, l)) != vec![0] {
        return false;
    }
    for q in (2..=n).filter(|q| n % q == 0 && (2..*q).all(|d| q % d != 0)) {
        let g = polgcd(&f, &sub_x(frobenius_power((n / q) as u32, &f, l)), l);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

fn small_primes(bound: u64) -> impl Iterator<Item = u64> {
    (2..bound).filter(|n| (2..).take_while(|d| d * d <= *n).all(|d| n % d != 0))
}

/// Monic irreducible factors over Q of a monic integer polynomial of degree at most 4.
pub fn factor_small(poly: &[BigInt]) -> Result<Vec<Vec<BigInt>>> {
    let n = poly.len() - 1;
    if !poly[n].is_one() {
        return Err(Error::InvalidInput("polynomial is not monic".into()));
    }
    match n {
        0 => Ok(vec![]),
        1 => Ok(vec![poly.to_vec()]),
        2 => {
            let disc = discriminant_quadratic(poly);
            match exact_sqrt(&disc) {
                Some(s) if (&poly[1] + &s).is_even() => {
                    // roots (-b +- s)/2
                    let r1: BigInt = (-&poly[1] + &s) / 2;
                    let r2: BigInt = (-&poly[1] - &s) / 2;
                    Ok(vec![vec![-r1, BigInt::one()], vec![-r2, BigInt::one()]])
                }
                _ => Ok(vec![poly.to_vec()]),
            }
        }
        3 | 4 => {
            for l in small_primes(2000) {
                if irreducible_mod(poly, l) {
                    return Ok(vec![poly.to_vec()]);
                }
            }
            Err(Error::UncertifiedFactorization(format!("{poly:?}")))
        }
        d => Err(Error::IrreducibleDegreeTooHigh(d)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|x| BigInt::from(*x)).collect()
    }

    #[test]
    fn charpoly_2x2() {
        let a = vec![ints(&[1, 2]), ints(&[3, 4])];
        assert_eq!(charpoly(&a), ints(&[-2, -5, 1]));
    }

    #[test]
    fn charpoly_3x3_matches_cayley_hamilton() {
        let a = vec![ints(&[2, -1, 0]), ints(&[5, 3, 7]), ints(&[1, 0, -4])];
        let c = charpoly(&a);
        // trace, det checks
        assert_eq!(c[2], BigInt::from(-1));
        let det = 2 * (3 * -4 - 0) - (-1) * (5 * -4 - 7) + 0;
        assert_eq!(c[0], BigInt::from(-det));
    }

    #[test]
    fn factor_quadratics() {
        assert_eq!(factor_small(&ints(&[6, -5, 1])).unwrap().len(), 2);
        assert_eq!(factor_small(&ints(&[-20468736, -1080, 1])).unwrap().len(), 1);
    }

    #[test]
    fn rabin_test() {
        assert!(irreducible_mod(&ints(&[1, 1, 0, 1]), 2)); // x^3 + x + 1
        assert!(!irreducible_mod(&ints(&[1, 0, 1]), 2)); // (x+1)^2
        assert!(factor_small(&ints(&[-2, 0, 0, 1])).is_ok());
        assert!(matches!(factor_small(&ints(&[-1, 0, 0, 1])), Err(Error::UncertifiedFactorization(_))));
    }
}
