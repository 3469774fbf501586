//! Generic sub-quadratic polynomial multiplication for rings without an NTT path.

use super::ring::CoeffRing;

const SCHOOLBOOK_BELOW: usize = 32;

pub fn convolve<R: CoeffRing>(ring: &R, a: &[R::Elem], b: &[R::Elem], len: usize) -> Vec<R::Elem> {
    let a = &a[..a.len().min(len)];
    let b = &b[..b.len().min(len)];
    let mut out = if a.is_empty() || b.is_empty() {
        Vec::new()
    } else {
        product(ring, a, b)
    };
    out.resize(len, ring.zero());
    out
}

pub fn schoolbook<R: CoeffRing>(ring: &R, a: &[R::Elem], b: &[R::Elem], len: usize) -> Vec<R::Elem> {
    let mut out = vec![ring.zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if ring.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            ring.mul_add_assign(&mut out[i + j], x, y);
        }
    }
    out
}

/// Full product of two non-empty coefficient slices.
fn product<R: CoeffRing>(ring: &R, a: &[R::Elem], b: &[R::Elem]) -> Vec<R::Elem> {
    let (a, b) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let out_len = a.len() + b.len() - 1;
    if b.len() < SCHOOLBOOK_BELOW {
        return schoolbook(ring, a, b, out_len);
    }
    if a.len() > b.len() {
        // Unbalanced: slice the longer operand into blocks of the shorter length.
        let mut out = vec![ring.zero(); out_len];
        for (blk, chunk) in a.chunks(b.len()).enumerate() {
            let part = product(ring, chunk, b);
            let off = blk * b.len();
            for (i, v) in part.into_iter().enumerate() {
                out[off + i] = ring.add(&out[off + i], &v);
            }
        }
        return out;
    }
    let n = a.len();
    let h = n / 2;
    let (a0, a1) = a.split_at(h);
    let (b0, b1) = b.split_at(h);
    let z0 = product(ring, a0, b0);
    let z2 = product(ring, a1, b1);
    let sa = add_slices(ring, a0, a1);
    let sb = add_slices(ring, b0, b1);
    let z1 = product(ring, &sa, &sb);
    let mut out = vec![ring.zero(); out_len];
    for (i, v) in z0.iter().enumerate() {
        out[i] = ring.add(&out[i], v);
    }
    for (i, v) in z2.iter().enumerate() {
        out[i + 2 * h] = ring.add(&out[i + 2 * h], v);
    }
    for (i, v) in z1.iter().enumerate() {
        let mut mid = v.clone();
        if i < z0.len() {
            mid = ring.sub(&mid, &z0[i]);
        }
        if i < z2.len() {
            mid = ring.sub(&mid, &z2[i]);
        }
        out[i + h] = ring.add(&out[i + h], &mid);
    }
    out
}

fn add_slices<R: CoeffRing>(ring: &R, x: &[R::Elem], y: &[R::Elem]) -> Vec<R::Elem> {
    let n = x.len().max(y.len());
    (0..n)
        .map(|i| match (x.get(i), y.get(i)) {
            (Some(u), Some(v)) => ring.add(u, v),
            (Some(u), None) => u.clone(),
            (None, Some(v)) => v.clone(),
            (None, None) => unreachable!(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ring::IntRing;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn karatsuba_matches_schoolbook(a in prop::collection::vec(-1000i64..1000, 1..200),
                                        b in prop::collection::vec(-1000i64..1000, 1..200)) {
            let a: Vec<BigInt> = a.into_iter().map(BigInt::from).collect();
            let b: Vec<BigInt> = b.into_iter().map(BigInt::from).collect();
            let len = a.len() + b.len();
            prop_assert_eq!(convolve(&IntRing, &a, &b, len), schoolbook(&IntRing, &a, &b, len));
        }
    }
}
