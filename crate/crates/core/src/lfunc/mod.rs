//! Local Euler factors of the standard and triple-product L-functions at level one, and partial
//! Euler products with interval enclosures.

pub mod interval;

use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

pub use interval::{Interval, DEFAULT_BITS};

use crate::arith::poly::exact_sqrt;
use crate::arith::Rat;
use crate::error::{Error, Result};
use crate::modforms::eigen::eigenbasis;

/// Roots of X² − tX + N at a prime q, kept as (trace, norm).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SatakePair {
    pub q: u64,
    #[serde(serialize_with = "ser_big")]
    pub trace: BigInt,
    #[serde(serialize_with = "ser_big")]
    pub norm: BigInt,
}

fn ser_big<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

impl SatakePair {
    /// Data of a weight-k eigenform with a_q = `a`.
    pub fn new(q: u64, k: u32, a: BigInt) -> Self {
        SatakePair { q, trace: a, norm: BigInt::from(q).pow(k - 1) }
    }

    /// Degenerate data (q^{k−1}, 1), as for the weight-k Eisenstein series.
    pub fn eisenstein(q: u64, k: u32) -> Self {
        let n = BigInt::from(q).pow(k - 1);
        SatakePair { q, trace: &n + 1, norm: n }
    }

    /// Both roots when they are rational integers.
    pub fn rational_roots(&self) -> Option<(BigInt, BigInt)> {
        let disc = &self.trace * &self.trace - BigInt::from(4) * &self.norm;
        let s = exact_sqrt(&disc)?;
        let two = BigInt::from(2);
        let r1 = (&self.trace + &s).div_floor(&two);
        let r2 = &self.trace - &r1;
        (&r1 * &r2 == self.norm).then_some((r1, r2))
    }
}

/// Inverse standard factor 1 − a T + q^{k−1} T², as coefficients in T = q^{−s}.
pub fn local_standard_factor(s: &SatakePair) -> Vec<BigInt> {
    vec![BigInt::one(), -s.trace.clone(), s.norm.clone()]
}

// --- resultant route -----------------------------------------------------------------------

/// Polynomials in Y, low degree first.
type PolyY = Vec<BigInt>;

fn det_rat(mut a: Vec<Vec<Rat>>) -> Rat {
    let n = a.len();
    let mut det = Rat::one();
    for c in 0..n {
        let Some(piv) = (c..n).find(|&r| !a[r][c].is_zero()) else { return Rat::zero() };
        if piv != c {
            a.swap(piv, c);
            det = -det;
        }
        det *= a[c][c].clone();
        for r in c + 1..n {
            if !a[r][c].is_zero() {
                let f = &a[r][c] / &a[c][c];
                for j in c..n {
                    let t = &f * &a[c][j];
                    a[r][j] -= t;
                }
            }
        }
    }
    det
}

/// Sylvester resultant of two integer polynomials (low degree first).
fn resultant_int(f: &[BigInt], g: &[BigInt]) -> Rat {
    let (m, n) = (f.len() - 1, g.len() - 1);
    let size = m + n;
    let mut s = vec![vec![Rat::zero(); size]; size];
    for i in 0..n {
        for (j, c) in f.iter().rev().enumerate() {
            s[i][i + j] = Rat::from_integer(c.clone());
        }
    }
    for i in 0..m {
        for (j, c) in g.iter().rev().enumerate() {
            s[n + i][i + j] = Rat::from_integer(c.clone());
        }
    }
    det_rat(s)
}

/// Lagrange interpolation through (x_i, y_i) with integer x_i; the result must be integral.
fn interpolate(xs: &[BigInt], ys: &[Rat]) -> Result<Vec<BigInt>> {
    let n = xs.len();
    let mut out = vec![Rat::zero(); n];
    for i in 0..n {
        // basis polynomial ∏_{j≠i} (Y − x_j)/(x_i − x_j)
        let mut basis = vec![Rat::one()];
        let mut denom = Rat::one();
        for j in 0..n {
            if j == i {
                continue;
            }
            let mut next = vec![Rat::zero(); basis.len() + 1];
            for (d, c) in basis.iter().enumerate() {
                next[d + 1] += c.clone();
                next[d] -= c * Rat::from_integer(xs[j].clone());
            }
            basis = next;
            denom *= Rat::from_integer(&xs[i] - &xs[j]);
        }
        let w = &ys[i] / denom;
        for (o, b) in out.iter_mut().zip(&basis) {
            *o += &w * b;
        }
    }
    out.into_iter()
        .map(|c| if c.is_integer() { Ok(c.to_integer()) } else { Err(Error::InvalidInput("non-integral interpolant".into())) })
        .collect()
}

/// Monic polynomial in Y whose roots are the products uv, u a root of `f`, v of X² − tX + N.
/// Computed as Res_X(f(X), Y² − tYX + NX²) by evaluation at deg+1 integer points.
fn product_roots(f: &[BigInt], s: &SatakePair) -> Result<PolyY> {
    let deg = 2 * (f.len() - 1);
    let xs: Vec<BigInt> = (0..=deg as i64).map(BigInt::from).collect();
    let ys: Vec<Rat> = xs
        .iter()
        .map(|y| {
            let g = vec![y * y, -(&s.trace * y), s.norm.clone()];
            resultant_int(f, &g)
        })
        .collect();
    interpolate(&xs, &ys)
}

/// Inverse triple factor ∏ (1 − α_i β_j γ_l T) by resultant elimination; degree 8 in T.
pub fn triple_factor_resultant(f: &SatakePair, g: &SatakePair, h: &SatakePair) -> Result<Vec<BigInt>> {
    let pf = vec![f.norm.clone(), -f.trace.clone(), BigInt::one()];
    let fg = product_roots(&pf, g)?;
    let fgh = product_roots(&fg, h)?;
    // T^8 M(1/T) for the monic M of degree 8
    Ok(fgh.into_iter().rev().collect())
}

// --- root-algebra route --------------------------------------------------------------------

/// Element of R[x, y, z]/(x² − a x + A, y² − b y + B, z² − c z + C) on the basis x^i y^j z^l.
#[derive(Clone, Debug)]
struct RootAlg<S> {
    c: [S; 8],
}

/// Scalars the brute expansion runs over.
pub trait Scalar: Clone + Zero + One + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> {}
impl<T: Clone + Zero + One + Add<Output = T> + Sub<Output = T> + Mul<Output = T>> Scalar for T {}

struct Relations<S> {
    tr: [S; 3],
    nm: [S; 3],
}

impl<S: Scalar> RootAlg<S> {
    fn zero() -> Self {
        RootAlg { c: std::array::from_fn(|_| S::zero()) }
    }

    fn scalar(v: S) -> Self {
        let mut r = Self::zero();
        r.c[0] = v;
        r
    }

    fn gen(var: usize) -> Self {
        let mut r = Self::zero();
        r.c[1 << var] = S::one();
        r
    }

    fn add(&self, o: &Self) -> Self {
        RootAlg { c: std::array::from_fn(|i| self.c[i].clone() + o.c[i].clone()) }
    }

    fn sub(&self, o: &Self) -> Self {
        RootAlg { c: std::array::from_fn(|i| self.c[i].clone() - o.c[i].clone()) }
    }

    fn mul(&self, o: &Self, rel: &Relations<S>) -> Self {
        // expand with exponents up to 2 per variable (base-3 index), then reduce
        let mut full: Vec<S> = vec![S::zero(); 27];
        for i in 0..8 {
            for j in 0..8 {
                let idx = (0..3).map(|v| (((i >> v) & 1) + ((j >> v) & 1)) * 3usize.pow(v as u32)).sum::<usize>();
                full[idx] = full[idx].clone() + self.c[i].clone() * o.c[j].clone();
            }
        }
        for v in 0..3 {
            let w = 3usize.pow(v as u32);
            for idx in 0..27 {
                if (idx / w) % 3 == 2 {
                    let t = std::mem::replace(&mut full[idx], S::zero());
                    // x² = tr·x − nm
                    full[idx - w] = full[idx - w].clone() + rel.tr[v].clone() * t.clone();
                    full[idx - 2 * w] = full[idx - 2 * w].clone() - rel.nm[v].clone() * t;
                }
            }
        }
        RootAlg {
            c: std::array::from_fn(|i| {
                let idx = (0..3).map(|v| ((i >> v) & 1) * 3usize.pow(v as u32)).sum::<usize>();
                full[idx].clone()
            }),
        }
    }
}

/// ∏ (1 − α_i β_j γ_l T) expanded in the root algebra over any scalar ring. Returns the scalar
/// parts and the non-scalar residue (zero in exact arithmetic by symmetry).
pub fn triple_factor_generic<S: Scalar>(tr: [S; 3], nm: [S; 3]) -> (Vec<S>, Vec<S>) {
    let rel = Relations { tr: tr.clone(), nm };
    let roots = |v: usize| {
        let x = RootAlg::gen(v);
        let conj = RootAlg::scalar(tr[v].clone()).sub(&x);
        [x, conj]
    };
    let (ra, rb, rc) = (roots(0), roots(1), roots(2));
    // polynomial in T with algebra coefficients
    let mut poly: Vec<RootAlg<S>> = vec![RootAlg::scalar(S::one())];
    for a in &ra {
        for b in &rb {
            for c in &rc {
                let prod = a.mul(b, &rel).mul(c, &rel);
                let mut next = vec![RootAlg::zero(); poly.len() + 1];
                for (d, coef) in poly.iter().enumerate() {
                    next[d] = next[d].add(coef);
                    next[d + 1] = next[d + 1].sub(&coef.mul(&prod, &rel));
                }
                poly = next;
            }
        }
    }
    let residue = poly.iter().flat_map(|e| e.c[1..].iter().cloned()).collect();
    (poly.into_iter().map(|e| e.c[0].clone()).collect(), residue)
}

/// Inverse triple factor by brute expansion over the integers.
pub fn triple_factor_brute(f: &SatakePair, g: &SatakePair, h: &SatakePair) -> Result<Vec<BigInt>> {
    let (coeffs, residue) = triple_factor_generic(
        [f.trace.clone(), g.trace.clone(), h.trace.clone()],
        [f.norm.clone(), g.norm.clone(), h.norm.clone()],
    );
    if residue.iter().any(|r| !r.is_zero()) {
        return Err(Error::InvalidInput("triple factor is not Galois-stable".into()));
    }
    Ok(coeffs)
}

/// Local triple factor with both routes cross-checked.
#[derive(Clone, Debug, Serialize)]
pub struct TripleFactor {
    pub q: String,
    pub traces: [String; 3],
    /// Coefficients of ∏ (1 − α_i β_j γ_l q^{−s}) in powers of q^{−s}.
    pub coefficients: Vec<String>,
    /// The q-th Dirichlet coefficient of the triple L-series.
    pub dirichlet_coefficient: String,
    pub routes_agree: bool,
}

pub fn local_triple_factor(f: &SatakePair, g: &SatakePair, h: &SatakePair) -> Result<(Vec<BigInt>, TripleFactor)> {
    if f.q != g.q || f.q != h.q {
        return Err(Error::InvalidInput("Satake data at different primes".into()));
    }
    let res = triple_factor_resultant(f, g, h)?;
    let brute = triple_factor_brute(f, g, h)?;
    let doc = TripleFactor {
        q: f.q.to_string(),
        traces: [f.trace.to_string(), g.trace.to_string(), h.trace.to_string()],
        coefficients: res.iter().map(|c| c.to_string()).collect(),
        dirichlet_coefficient: (-&res[1]).to_string(),
        routes_agree: res == brute,
    };
    if !doc.routes_agree {
        return Err(Error::InvalidInput(format!("resultant and brute expansions differ at q = {}", f.q)));
    }
    Ok((res, doc))
}

// --- partial products ----------------------------------------------------------------------

fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let mut sieve = vec![true; n as usize + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n as usize {
        if sieve[i] {
            for j in (i * i..=n as usize).step_by(i) {
                sieve[j] = false;
            }
        }
        i += 1;
    }
    (2..=n).filter(|&q| sieve[q as usize]).collect()
}

/// A real embedding of one level-one eigenform: its weight and a_q enclosures at primes.
#[derive(Clone, Debug)]
pub struct RealForm {
    pub weight: u32,
    pub label: String,
    pub a_q: Vec<(u64, Interval)>,
}

/// The eigenform of weight k in Galois orbit `orbit`, under the real embedding sending θ to its
/// `root`-th real root in increasing order. Coefficient fields of degree ≤ 2 only.
pub fn real_form(k: u32, orbit: usize, root: usize, q_max: u64, bits: u32) -> Result<RealForm> {
    let sys = eigenbasis(k)?;
    let f = sys.forms.get(orbit).ok_or_else(|| Error::InvalidInput(format!("weight {k} has no orbit {orbit}")))?;
    let mp = f.field.minpoly();
    let theta = match f.field.degree() {
        1 => Interval::exact_int(&-mp[0].clone(), bits),
        2 => {
            if root > 1 {
                return Err(Error::InvalidInput("quadratic fields have two real roots".into()));
            }
            let disc = &mp[1] * &mp[1] - BigInt::from(4) * &mp[0];
            if disc.is_negative() {
                return Err(Error::InvalidInput("coefficient field is not real".into()));
            }
            let s = Interval::int_root(&disc, 2, bits + 1)?;
            let s = if root == 0 { -s } else { s };
            // (−c_1 ± √disc)/2, exact halving at one more bit
            let num = Interval::exact_int(&-mp[1].clone(), bits + 1) + s;
            Interval { lo: num.lo, hi: num.hi, bits: bits + 2 }
        }
        d => return Err(Error::IrreducibleDegreeTooHigh(d)),
    };
    let qe = f.qexp(q_max as usize)?;
    let a_q = primes_up_to(q_max)
        .into_iter()
        .map(|q| {
            let c = &qe.coeff(q as usize).coords;
            let mut acc = Interval::from_i64(0, bits);
            let mut pw = Interval::from_i64(1, bits);
            for coord in c {
                acc = acc + Interval::from_rat(coord, bits + 8) * pw.clone();
                pw = pw * theta.clone();
            }
            (q, acc)
        })
        .collect();
    Ok(RealForm { weight: k, label: format!("{k}.{orbit}.{root}"), a_q })
}

/// Enclosure of Σ c_j q^{−js}. Each q^{−js} splits as q^{−⌊js⌋}·q^{−{js}}; the integral part is
/// applied by exact scaling, so large coefficients against tiny powers keep their precision.
fn eval_at_q_power(coeffs: &[Interval], q: u64, s: &Rat, bits: u32) -> Result<Interval> {
    let d = s.denom().to_u32().filter(|&d| d <= 64).ok_or_else(|| Error::InvalidInput("s must have denominator ≤ 64".into()))?;
    let n = s.numer();
    let qb = BigInt::from(q);
    let mut acc = Interval::from_i64(0, bits);
    for (j, c) in coeffs.iter().enumerate() {
        let (whole, frac) = (n * BigInt::from(j)).div_mod_floor(&BigInt::from(d));
        let whole = whole.to_i64().ok_or_else(|| Error::InvalidInput("|s| too large".into()))?;
        let frac = frac.to_u32().unwrap();
        let mut t = c.clone();
        if frac != 0 {
            // q^{−frac/d} = 1/(q^frac)^{1/d}
            t = t * Interval::int_root(&qb.pow(frac), d, bits + 8)?.recip()?;
        }
        t = if whole >= 0 { t.div_int(&qb.pow(whole as u32)) } else { t * Interval::exact_int(&qb.pow((-whole) as u32), bits) };
        acc = acc + t;
    }
    Ok(acc)
}

/// One row of the stabilization table.
#[derive(Clone, Debug, Serialize)]
pub struct PartialRow {
    pub q_max: String,
    pub primes: String,
    pub lo: String,
    pub hi: String,
    /// Decimal digits shared with the previous row's enclosure.
    pub agreeing_digits: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct PartialProduct {
    pub forms: [String; 3],
    pub weights: [String; 3],
    pub s: String,
    pub central_point: String,
    pub absolutely_convergent: bool,
    pub label: String,
    pub bits: String,
    pub lo: String,
    pub hi: String,
    pub rows: Vec<PartialRow>,
}

fn agreeing_digits(a: &Interval, b: &Interval) -> u32 {
    let diff = (a.to_f64() - b.to_f64()).abs();
    let scale = a.to_f64().abs().max(f64::MIN_POSITIVE);
    if diff == 0.0 {
        return 19;
    }
    (-(diff / scale).log10()).floor().clamp(0.0, 19.0) as u32
}

/// ∏_{q ≤ Q} (inverse local triple factor at q^{−s})^{−1} for three real forms, reported at
/// each cutoff in `cutoffs` (the largest is Q). Q < 2 gives the empty product 1.
pub fn partial_l(forms: [&RealForm; 3], s: &Rat, cutoffs: &[u64], bits: u32) -> Result<PartialProduct> {
    let q_max = cutoffs.iter().copied().max().unwrap_or(0);
    let primes = primes_up_to(q_max);
    for f in forms {
        if f.a_q.iter().map(|x| x.0).take_while(|&q| q <= q_max).count() < primes.len() {
            return Err(Error::InsufficientPrecision { needed: q_max as usize, have: f.a_q.last().map_or(0, |x| x.0 as usize) });
        }
    }
    let w = forms.iter().map(|f| f.weight).sum::<u32>() - 3;
    let locals: Vec<Interval> = primes
        .par_iter()
        .enumerate()
        .map(|(i, &q)| {
            let tr = forms.map(|f| f.a_q[i].1.clone());
            let nm = forms.map(|f| Interval::exact_int(&BigInt::from(q).pow(f.weight - 1), bits));
            let (coeffs, _) = triple_factor_generic(tr, nm);
            eval_at_q_power(&coeffs, q, s, bits)?.recip()
        })
        .collect::<Result<_>>()?;
    let mut acc = Interval::from_i64(1, bits);
    let mut rows = Vec::new();
    let mut prev: Option<Interval> = None;
    let mut sorted = cutoffs.to_vec();
    sorted.sort_unstable();
    let mut idx = 0;
    for cut in sorted {
        while idx < primes.len() && primes[idx] <= cut {
            acc = acc * locals[idx].clone();
            idx += 1;
        }
        rows.push(PartialRow {
            q_max: cut.to_string(),
            primes: idx.to_string(),
            lo: acc.lo_decimal(20),
            hi: acc.hi_decimal(20),
            agreeing_digits: prev.as_ref().map_or("-".into(), |p| agreeing_digits(p, &acc).to_string()),
        });
        prev = Some(acc.clone());
    }
    // 2s > w + 2 is the half-plane of absolute convergence under Ramanujan
    let convergent = Rat::from_integer(BigInt::from(2)) * s > Rat::from_integer(BigInt::from(w + 2));
    Ok(PartialProduct {
        forms: forms.map(|f| f.label.clone()),
        weights: forms.map(|f| f.weight.to_string()),
        s: s.to_string(),
        central_point: Rat::new(BigInt::from(w + 1), BigInt::from(2)).to_string(),
        absolutely_convergent: convergent,
        label: if convergent { "partial Euler product (absolutely convergent region)" } else { "formal partial product (outside the region of absolute convergence)" }.into(),
        bits: bits.to_string(),
        lo: acc.lo_decimal(20),
        hi: acc.hi_decimal(20),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn delta_at_two() {
        let d = SatakePair::new(2, 12, big(-24));
        let (p, doc) = local_triple_factor(&d, &d, &d).unwrap();
        assert!(doc.routes_agree);
        assert_eq!(p.len(), 9);
        assert_eq!(p[0], big(1));
        assert_eq!(p[1], big(24 * 24 * 24));
        assert_eq!(doc.dirichlet_coefficient, (-13824).to_string());
        assert_eq!(p[8], BigInt::from(2).pow(4 * 33));
    }

    #[test]
    fn brute_against_numeric_roots() {
        // α, β, γ of Δ at q = 2 are complex; check the polynomial against floating products
        use num_complex::Complex64;
        let roots = |a: f64, n: f64| {
            let d = Complex64::new(a * a - 4.0 * n, 0.0).sqrt();
            [(a + d) / 2.0, (a - d) / 2.0]
        };
        let r = roots(-24.0, 2048.0);
        let mut poly = vec![Complex64::new(1.0, 0.0)];
        for x in r {
            for y in r {
                for z in r {
                    let t = x * y * z;
                    let mut next = vec![Complex64::new(0.0, 0.0); poly.len() + 1];
                    for (i, c) in poly.iter().enumerate() {
                        next[i] += c;
                        next[i + 1] -= c * t;
                    }
                    poly = next;
                }
            }
        }
        let d = SatakePair::new(2, 12, big(-24));
        let exact = triple_factor_resultant(&d, &d, &d).unwrap();
        for (e, c) in exact.iter().zip(&poly) {
            let ef: f64 = e.to_string().parse().unwrap();
            assert!((ef - c.re).abs() <= 1e-9 * ef.abs().max(1.0), "{ef} vs {c}");
            assert!(c.im.abs() <= 1e-9 * ef.abs().max(1.0));
        }
    }

    #[test]
    fn eisenstein_degenerates() {
        let q = 3;
        let f = SatakePair::new(q, 12, big(252));
        let g = SatakePair::eisenstein(q, 4);
        let h = SatakePair::eisenstein(q, 6);
        let (p, _) = local_triple_factor(&f, &g, &h).unwrap();
        // ∏ over β ∈ {q^3, 1}, γ ∈ {q^5, 1} of 1 − a βγT + q^11 (βγ)^2 T^2
        let mut expect = vec![big(1)];
        for shift in [0u32, 3, 5, 8] {
            let s = BigInt::from(q).pow(shift);
            let std = local_standard_factor(&f);
            let factor: Vec<BigInt> = std.iter().enumerate().map(|(i, c)| c * s.pow(i as u32)).collect();
            let mut next = vec![big(0); expect.len() + 2];
            for (i, a) in expect.iter().enumerate() {
                for (j, b) in factor.iter().enumerate() {
                    next[i + j] += a * b;
                }
            }
            expect = next;
        }
        assert_eq!(p, expect);
        assert_eq!(SatakePair::eisenstein(5, 4).rational_roots(), Some((big(125), big(1))));
        assert_eq!(SatakePair::new(2, 12, big(-24)).rational_roots(), None);
    }

    #[test]
    fn empty_and_convergent_products() {
        let d = real_form(12, 0, 0, 200, 64).unwrap();
        let one = partial_l([&d, &d, &d], &rat(40, 1), &[1], 64).unwrap();
        assert_eq!(one.lo, "1.00000000000000000000");
        assert_eq!(one.hi, "1.00000000000000000000");
        let s = rat(35, 1);
        let t = partial_l([&d, &d, &d], &s, &[10, 50, 100, 200], 64).unwrap();
        assert!(t.absolutely_convergent);
        // successive enclosures agree in more and more digits
        let digits: Vec<u32> = t.rows[1..].iter().map(|r| r.agreeing_digits.parse().unwrap()).collect();
        assert!(digits.windows(2).all(|w| w[0] <= w[1]), "{digits:?}");
        assert!(digits[0] >= 8);
    }

    #[test]
    fn weight_24_embeddings() {
        let f0 = real_form(24, 0, 0, 30, 64).unwrap();
        let f1 = real_form(24, 0, 1, 30, 64).unwrap();
        // the two embeddings of a_2 are 540 ∓ 12√144169
        let (a, b) = (f0.a_q[0].1.to_f64(), f1.a_q[0].1.to_f64());
        assert!((a + b - 1080.0).abs() < 1e-6);
        assert!((a * b + 20468736.0).abs() < 1e-3);
        let d = real_form(12, 0, 0, 30, 64).unwrap();
        let c = partial_l([&f0, &d, &d], &rat(23, 1), &[30], 64).unwrap();
        assert!(!c.absolutely_convergent);
        assert_eq!(c.central_point, "23");
    }
}
