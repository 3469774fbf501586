//! Convolution modulo an arbitrary integer via three NTT-friendly primes and CRT.
//!
//! Coefficients are split into limbs small enough that every limb-pair
//! convolution is recovered exactly as an integer below the product of the
//! primes; the limbs are then recombined modulo the target modulus.

use num_bigint::BigUint;
use num_traits::Zero;
use rayon::prelude::*;

/// (prime, primitive root); all three admit transforms of length 2^23.
const PRIMES: [(u64, u64); 3] = [(998_244_353, 3), (167_772_161, 3), (469_762_049, 3)];
const MAX_LOG_LEN: u32 = 23;

/// Below this many terms in the shorter operand a direct product is cheaper.
pub const NTT_THRESHOLD: usize = 48;

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn ntt(a: &mut [u64], invert: bool, p: u64, g: u64) {
    let n = a.len();
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j ^= bit;
        if i < j {
            a.swap(i, j);
        }
    }
    let mut len = 2;
    let mut ws: Vec<u64> = Vec::with_capacity(n / 2);
    while len <= n {
        let mut w = pow_mod(g, (p - 1) / len as u64, p);
        if invert {
            w = pow_mod(w, p - 2, p);
        }
        let half = len / 2;
        ws.clear();
        let mut x = 1u64;
        for _ in 0..half {
            ws.push(x);
            x = x * w % p;
        }
        for chunk in a.chunks_mut(len) {
            let (lo, hi) = chunk.split_at_mut(half);
            for k in 0..half {
                let u = lo[k];
                let v = hi[k] * ws[k] % p;
                lo[k] = if u + v >= p { u + v - p } else { u + v };
                hi[k] = if u >= v { u - v } else { u + p - v };
            }
        }
        len <<= 1;
    }
    if invert {
        let ninv = pow_mod(n as u64, p - 2, p);
        for x in a.iter_mut() {
            *x = *x * ninv % p;
        }
    }
}

fn log2_ceil(x: usize) -> u32 {
    if x <= 1 {
        0
    } else {
        usize::BITS - (x - 1).leading_zeros()
    }
}

/// Limb layout for operands of `bits` bits and inner length `n`.
/// Returns (limb bits, limb count, number of primes needed).
fn plan(bits: u32, n: usize) -> (u32, usize, usize) {
    let bits = bits.max(1);
    for t in 1..=16usize {
        let b = bits.div_ceil(t as u32);
        let need = 2 * b + log2_ceil(t) + log2_ceil(n) + 1;
        if need <= 85 {
            let primes = if need <= 27 { 1 } else if need <= 54 { 2 } else { 3 };
            return (b, t, primes);
        }
    }
    panic!("modulus too large for limb plan");
}

fn crt(res: &[u64], primes: usize) -> u128 {
    let (p0, _) = PRIMES[0];
    let (p1, _) = PRIMES[1];
    let (p2, _) = PRIMES[2];
    let r0 = res[0] as u128;
    if primes == 1 {
        return r0;
    }
    let inv_p0_p1 = pow_mod(p0 % p1, p1 - 2, p1) as u128;
    let r1 = res[1] as u128;
    let t1 = ((r1 + p1 as u128 - r0 % p1 as u128) % p1 as u128) * inv_p0_p1 % p1 as u128;
    let x01 = r0 + p0 as u128 * t1;
    if primes == 2 {
        return x01;
    }
    let p01 = p0 as u128 * p1 as u128;
    let inv_p01_p2 = pow_mod((p01 % p2 as u128) as u64, p2 - 2, p2) as u128;
    let r2 = res[2] as u128;
    let t2 = ((r2 + p2 as u128 - x01 % p2 as u128) % p2 as u128) * inv_p01_p2 % p2 as u128;
    x01 + p01 * t2
}

/// Exact integer convolutions of limb vectors: out[l][k] = sum_{i+j=l} (a_i * b_j)[k].
fn limb_convolution(
    a: &[Vec<u64>],
    b: &[Vec<u64>],
    len: usize,
    primes: usize,
    square: bool,
) -> Vec<Vec<u128>> {
    let na = a[0].len();
    let nb = b[0].len();
    let t = a.len();
    let size = (na + nb - 1).next_power_of_two();
    assert!(size.trailing_zeros() <= MAX_LOG_LEN, "transform length exceeds 2^23");
    let per_prime: Vec<Vec<Vec<u64>>> = PRIMES[..primes]
        .par_iter()
        .map(|&(p, g)| {
            let fwd = |v: &Vec<u64>| {
                let mut x = vec![0u64; size];
                for (d, s) in x.iter_mut().zip(v) {
                    *d = s % p;
                }
                ntt(&mut x, false, p, g);
                x
            };
            let fa: Vec<Vec<u64>> = a.iter().map(fwd).collect();
            let fb: Vec<Vec<u64>> = if square { fa.clone() } else { b.iter().map(fwd).collect() };
            (0..2 * t - 1)
                .map(|l| {
                    let mut acc = vec![0u64; size];
                    for i in 0..t {
                        if l < i || l - i >= t {
                            continue;
                        }
                        let (x, y) = (&fa[i], &fb[l - i]);
                        for k in 0..size {
                            acc[k] = (acc[k] + x[k] * y[k]) % p;
                        }
                    }
                    ntt(&mut acc, true, p, g);
                    acc.truncate(len);
                    acc
                })
                .collect()
        })
        .collect();
    let out_len = len.min(na + nb - 1);
    (0..2 * t - 1)
        .map(|l| {
            (0..out_len)
                .into_par_iter()
                .with_min_len(4096)
                .map(|k| {
                    let res: Vec<u64> = (0..primes).map(|q| per_prime[q][l][k]).collect();
                    crt(&res, primes)
                })
                .collect()
        })
        .collect()
}

fn schoolbook_u64(a: &[u64], b: &[u64], len: usize, m: u64) -> Vec<u64> {
    let mut out = vec![0u128; len];
    let m128 = m as u128;
    for (i, &x) in a.iter().enumerate().take(len) {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(len - i) {
            out[i + j] = (out[i + j] + x as u128 * y as u128) % m128;
        }
    }
    out.into_iter().map(|v| v as u64).collect()
}

/// First `len` coefficients of a*b mod `m` (m < 2^63).
pub fn convolve_mod_u64(a: &[u64], b: &[u64], len: usize, m: u64) -> Vec<u64> {
    let a = &a[..a.len().min(len)];
    let b = &b[..b.len().min(len)];
    let mut out = if a.is_empty() || b.is_empty() {
        Vec::new()
    } else if a.len().min(b.len()) < NTT_THRESHOLD {
        schoolbook_u64(a, b, len, m)
    } else {
        let bits = 64 - (m - 1).max(1).leading_zeros();
        let (lb, t, primes) = plan(bits, a.len().min(b.len()));
        let mask = (1u64 << lb) - 1;
        let split = |v: &[u64]| -> Vec<Vec<u64>> {
            (0..t).map(|l| v.iter().map(|x| (x >> (lb as usize * l)) & mask).collect()).collect()
        };
        let square = std::ptr::eq(a.as_ptr(), b.as_ptr()) && a.len() == b.len();
        let la = split(a);
        let lbv = if square { la.clone() } else { split(b) };
        let conv = limb_convolution(&la, &lbv, len, primes, square);
        let m128 = m as u128;
        let shifts: Vec<u128> = (0..conv.len())
            .map(|l| {
                let mut s = 1u128;
                for _ in 0..l {
                    s = (s << lb) % m128;
                }
                s
            })
            .collect();
        let n = conv[0].len();
        (0..n)
            .into_par_iter()
            .with_min_len(4096)
            .map(|k| {
                let mut acc = 0u128;
                for (l, c) in conv.iter().enumerate() {
                    acc = (acc + (c[k] % m128) * shifts[l]) % m128;
                }
                acc as u64
            })
            .collect()
    };
    out.resize(len, 0);
    out
}

fn limbs_of(x: &BigUint, lb: u32, t: usize) -> Vec<u64> {
    let digits = x.to_u64_digits();
    (0..t)
        .map(|l| {
            let start = lb as usize * l;
            let (w, o) = (start / 64, start % 64);
            let lo = digits.get(w).copied().unwrap_or(0) >> o;
            let hi = if o > 0 && o + lb as usize > 64 {
                digits.get(w + 1).copied().unwrap_or(0) << (64 - o)
            } else {
                0
            };
            (lo | hi) & ((1u64 << lb) - 1)
        })
        .collect()
}

/// First `len` coefficients of a*b mod `m` for an arbitrary modulus.
pub fn convolve_mod_big(a: &[BigUint], b: &[BigUint], len: usize, m: &BigUint) -> Vec<BigUint> {
    let a = &a[..a.len().min(len)];
    let b = &b[..b.len().min(len)];
    if a.is_empty() || b.is_empty() {
        return vec![BigUint::zero(); len];
    }
    if a.len().min(b.len()) < NTT_THRESHOLD {
        let mut out = vec![BigUint::zero(); len];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate().take(len - i) {
                out[i + j] += x * y;
            }
        }
        return out.into_iter().map(|v| v % m).collect();
    }
    let bits = m.bits() as u32;
    let (lb, t, primes) = plan(bits, a.len().min(b.len()));
    let split = |v: &[BigUint]| -> Vec<Vec<u64>> {
        let per: Vec<Vec<u64>> = v.par_iter().map(|x| limbs_of(x, lb, t)).collect();
        (0..t).map(|l| per.iter().map(|x| x[l]).collect()).collect()
    };
    let square = std::ptr::eq(a.as_ptr(), b.as_ptr()) && a.len() == b.len();
    let la = split(a);
    let lbv = if square { la.clone() } else { split(b) };
    let conv = limb_convolution(&la, &lbv, len, primes, square);
    let n = conv[0].len();
    let mut out: Vec<BigUint> = (0..n)
        .into_par_iter()
        .with_min_len(1024)
        .map(|k| {
            let mut acc = BigUint::zero();
            for l in (0..conv.len()).rev() {
                acc <<= lb as usize;
                acc += BigUint::from(conv[l][k]);
            }
            acc % m
        })
        .collect();
    out.resize(len, BigUint::zero());
    out
}

/// Largest exact integer the CRT reconstruction can represent, as a sanity bound.
pub fn crt_capacity_bits() -> f64 {
    PRIMES.iter().map(|(p, _)| (*p as f64).log2()).sum()
}
