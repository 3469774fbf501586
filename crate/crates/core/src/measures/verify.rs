//! D_H(f, g, h)(P) by the p-adic route and H(P)·K(P)·ρ by the classical route.

use num_bigint::BigInt;
use serde::Serialize;

use super::euler::{correction_factors, euler_factor, k_prefactor_valuation, EpSign, EulerData};
use super::measure::ArithMeasure;
use crate::arith::padic::PadicNumDoc;
use crate::arith::ring::PadicCoeffRing;
use crate::arith::{PadicInt, PadicNum, PadicRing, Rat, RatField, ZmodRing};
use crate::error::{Error, Result};
use crate::hida::{congruence_p_part, contract, OrdinarySpace, Projection};
use crate::modforms::basis::{dim_cusp, victor_miller_basis};
use crate::modforms::eigen::{eigenbasis, rational_eigenform};
use crate::modforms::nearly::h_delta_g;
use crate::qexp::QExp;

/// One evaluation point: f of weight k (an ordinary eigenform at p, by index), g and h the
/// eigenforms of the one-dimensional spaces S_l and S_m.
#[derive(Clone, Debug, PartialEq)]
pub struct VerifyConfig {
    pub p: u64,
    pub precision: u32,
    pub k: u32,
    pub l: u32,
    pub m: u32,
    pub form: usize,
    pub ep_sign: EpSign,
    /// Optional longer series than the projector needs.
    pub n_max: Option<usize>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { p: 11, precision: 4, k: 24, l: 12, m: 12, form: 0, ep_sign: EpSign::Minus, n_max: None }
    }
}

impl VerifyConfig {
    pub fn r(&self) -> u32 {
        (self.k - self.l - self.m) / 2
    }

    pub fn validate(&self) -> Result<()> {
        let (k, l, m) = (self.k, self.l, self.m);
        if k % 2 == 1 || l % 2 == 1 || m % 2 == 1 {
            return Err(Error::InvalidInput(format!("weights ({k}, {l}, {m}) must be even")));
        }
        if k < l + m {
            return Err(Error::InvalidInput(format!("k = {k} < l + m = {}", l + m)));
        }
        for w in [l, m] {
            if dim_cusp(w) != 1 {
                return Err(Error::InvalidInput(format!("S_{w} has dimension {}, g and h need dimension 1", dim_cusp(w))));
            }
        }
        if self.p < 5 || !(2..self.p).take_while(|d| d * d <= self.p).all(|d| self.p % d != 0) {
            return Err(Error::InvalidInput(format!("p = {} must be a prime >= 5", self.p)));
        }
        if self.precision == 0 {
            return Err(Error::InvalidInput("M must be positive".into()));
        }
        Ok(())
    }

    /// M ≤ k − 3: the two E_p signs agree to the working precision.
    pub fn regime(&self) -> &'static str {
        if self.precision as i64 <= self.k as i64 - 3 {
            "sign-insensitive"
        } else {
            "sign-sensitive"
        }
    }
}

/// A failure tagged with the pipeline stage it came from.
#[derive(Debug)]
pub struct StagedError {
    pub stage: &'static str,
    pub error: Error,
}

impl std::fmt::Display for StagedError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.stage, self.error)
    }
}

impl std::error::Error for StagedError {}

fn at<T>(stage: &'static str, r: Result<T>) -> std::result::Result<T, StagedError> {
    r.map_err(|error| StagedError { stage, error })
}

/// p-adic side: D = H(P)·(coordinate of f̂ in e(h·d^r g_p)).
#[derive(Clone, Debug)]
pub struct DValue {
    pub d: PadicInt,
    pub projection: Projection,
    pub h_exponent: u32,
    pub series_length: usize,
}

fn moment_rows<R: PadicCoeffRing>(ring: &R, cfg: &VerifyConfig, space: &OrdinarySpace) -> Result<(Vec<PadicInt>, usize)> {
    let len = space.required_length().max(cfg.n_max.unwrap_or(0));
    let g = victor_miller_basis(ring, cfg.l, len, true)?.basis.remove(0);
    let h = victor_miller_basis(ring, cfg.m, len, true)?.basis.remove(0);
    let mu = ArithMeasure::new(g, Some(h), cfg.p)?;
    let rows = mu.moment_at(cfg.r(), &space.needed_indices())?;
    Ok((rows.iter().map(|x| ring.to_padic(x).reduce(space.work)).collect(), len))
}

/// Longest series the escalation loop will build.
pub const MAX_SERIES_LEN: usize = 1 << 22;

fn evaluate_d_once(cfg: &VerifyConfig, space: &OrdinarySpace, h_exponent: u32) -> Result<DValue> {
    let (rows, series_length) = if ZmodRing::fits(cfg.p, space.work) {
        moment_rows(&ZmodRing::new(cfg.p, space.work)?, cfg, space)?
    } else {
        moment_rows(&PadicRing::new(cfg.p, space.work)?, cfg, space)?
    };
    let projection = space.project_from_u_rows(&rows)?;
    let d = contract(&projection, cfg.form, h_exponent)?;
    Ok(DValue { d, projection, h_exponent, series_length })
}

/// For r > 0 the moment d^r g_p · h is p-adic but not classical, so the slope bound behind the
/// default iteration count does not apply. On a closure failure, N grows until the rows close
/// or the series would exceed `MAX_SERIES_LEN`.
pub fn evaluate_d(cfg: &VerifyConfig, space: &OrdinarySpace) -> Result<DValue> {
    let h_exponent = congruence_p_part(space, cfg.form)?;
    let mut s = space.clone();
    loop {
        match evaluate_d_once(cfg, &s, h_exponent) {
            Err(Error::ClosureViolation(msg)) if cfg.r() > 0 => {
                s.n_iter += 1;
                if s.required_length() > MAX_SERIES_LEN {
                    return Err(Error::ClosureViolation(format!("{msg}; no closure before series length {MAX_SERIES_LEN}")));
                }
            }
            other => return other,
        }
    }
}

/// Ordinary space at the config's weight, with the requested ordinary form present.
pub fn ordinary_space(cfg: &VerifyConfig) -> Result<OrdinarySpace> {
    let space = OrdinarySpace::new(cfg.k, cfg.p, cfg.precision)?;
    if space.rank == 0 {
        return Err(Error::NotOrdinary(format!("no eigenform of weight {} is ordinary at p = {}", cfg.k, cfg.p)));
    }
    if cfg.form >= space.rank {
        return Err(Error::NotOrdinary(format!(
            "ordinary form index {} but only {} ordinary eigenform(s) in weight {} at p = {}",
            cfg.form, space.rank, cfg.k, cfg.p
        )));
    }
    Ok(space)
}

/// Classical side: H(h·δ^r g) and its eigen-coefficient on f, embedded p-adically.
#[derive(Clone, Debug)]
pub struct ClassicalSide {
    pub projection: QExp<RatField>,
    pub rho: PadicNum,
}

pub fn classical_ratio(cfg: &VerifyConfig, space: &OrdinarySpace) -> Result<ClassicalSide> {
    let dim = dim_cusp(cfg.k);
    let n = 2 * dim + 10;
    let to_rat = |f: QExp<crate::arith::IntRing>| f.map_ring(RatField, |c| Rat::from_integer(c.clone()));
    let g = to_rat(rational_eigenform(cfg.l, n)?).with_weight(Some(cfg.l as i64));
    let h = to_rat(rational_eigenform(cfg.m, n)?).with_weight(Some(cfg.m as i64));
    let big_g = h_delta_g(&h, &g, cfg.r())?.holomorphic_projection()?;
    let sys = eigenbasis(cfg.k)?;
    let coeffs = sys.expand(&big_g)?;
    if sys.recombine(&coeffs, n)?.as_slice() != big_g.coeffs() {
        return Err(Error::ClosureViolation(format!("H(h·δ^r g) is not in S_{} to {n} terms", cfg.k)));
    }
    let f = &space.forms[cfg.form].base;
    let field = &sys.forms[f.orbit].field;
    let rho = field.embed_padic(&coeffs[f.orbit], &f.root);
    Ok(ClassicalSide { projection: big_g, rho })
}

/// Everything that enters D = H(P)·K(P)·ρ.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub schema: u32,
    pub p: String,
    #[serde(rename = "M")]
    pub m_prec: String,
    pub k: String,
    pub l: String,
    pub m: String,
    pub r: String,
    pub branch: String,
    pub ordinary_rank: String,
    pub form_index: String,
    pub theta_embedding: String,
    pub a_p: String,
    pub alpha1: String,
    pub alpha2: PadicNumDoc,
    pub b_p: String,
    pub c_p: String,
    pub ep_sign: EpSign,
    pub regime: String,
    pub e_p: PadicNumDoc,
    pub s: PadicNumDoc,
    pub k_factor: PadicNumDoc,
    pub k_prefactor_valuation: String,
    pub h_exponent: String,
    pub d: String,
    pub rho: PadicNumDoc,
    pub rhs: PadicNumDoc,
    pub slack: String,
    pub precision: String,
    pub u_iterations: String,
    pub series_length: String,
    pub rows_checked: String,
    pub holomorphic_projection: Vec<String>,
    pub verdict: bool,
    pub mismatch_valuation: Option<String>,
    pub interpolation_note: String,
}

fn coeff_p(w: u32, p: u64) -> Result<BigInt> {
    Ok(rational_eigenform(w, p as usize)?.coeff(p as usize).clone())
}

pub fn verify(cfg: &VerifyConfig) -> std::result::Result<VerifyReport, StagedError> {
    at("validate", cfg.validate())?;
    let space = at("hida", ordinary_space(cfg))?;
    let dv = at("measure", evaluate_d(cfg, &space))?;
    let cl = at("classical", classical_ratio(cfg, &space))?;
    let f = &space.forms[cfg.form];
    let (b_p, c_p) = at("euler", coeff_p(cfg.l, cfg.p).and_then(|b| Ok((b, coeff_p(cfg.m, cfg.p)?))))?;
    let ed = at("euler", EulerData::new(cfg.p, (cfg.k, cfg.l, cfg.m), &f.alpha1, b_p.clone(), c_p.clone()))?;
    let ep = euler_factor(&ed, cfg.ep_sign);
    let (s, kf) = at("euler", correction_factors(&ed, &ep))?;
    let precision = dv.projection.precision;
    let hp = PadicNum::p_power(cfg.p, dv.h_exponent as i64, space.work);
    let rhs = hp.mul(&kf).mul(&cl.rho);
    let d = PadicNum::from_padic_int(&dv.d);
    let diff = rhs.sub(&d);
    let verdict = rhs.abs_prec() >= precision as i64 && diff.valuation().is_none_or(|v| v >= precision as i64);
    Ok(VerifyReport {
        schema: 1,
        p: cfg.p.to_string(),
        m_prec: cfg.precision.to_string(),
        k: cfg.k.to_string(),
        l: cfg.l.to_string(),
        m: cfg.m.to_string(),
        r: cfg.r().to_string(),
        branch: (cfg.k as u64 % (cfg.p - 1)).to_string(),
        ordinary_rank: space.rank.to_string(),
        form_index: cfg.form.to_string(),
        theta_embedding: f.base.root.to_string(),
        a_p: f.base.a_p.to_string(),
        alpha1: f.alpha1.to_string(),
        alpha2: ed.alpha2.doc(),
        b_p: b_p.to_string(),
        c_p: c_p.to_string(),
        ep_sign: cfg.ep_sign,
        regime: cfg.regime().into(),
        e_p: ep.doc(),
        s: s.doc(),
        k_factor: kf.doc(),
        k_prefactor_valuation: k_prefactor_valuation(&ed).to_string(),
        h_exponent: dv.h_exponent.to_string(),
        d: dv.d.to_string(),
        rho: cl.rho.doc(),
        rhs: rhs.doc(),
        slack: dv.projection.slack.to_string(),
        precision: precision.to_string(),
        u_iterations: dv.projection.n_iter.to_string(),
        series_length: dv.series_length.to_string(),
        rows_checked: dv.projection.rows_checked.to_string(),
        holomorphic_projection: cl.projection.coeffs().iter().take(dim_cusp(cfg.k) + 1).map(|c| c.to_string()).collect(),
        verdict,
        mismatch_valuation: if verdict { None } else { diff.valuation().map(|v| v.to_string()) },
        interpolation_note: "(D / (H(P) K(P)))^2 interpolates the central triple-product value up to the archimedean and Petersson factors; only the algebraic identity D = H(P) K(P) rho is checked".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(p: u64, m: u32, k: u32, l: u32, wm: u32) -> VerifyConfig {
        VerifyConfig { p, precision: m, k, l, m: wm, ..Default::default() }
    }

    #[test]
    fn validation() {
        assert!(cfg(13, 4, 22, 12, 12).validate().is_err());
        assert!(cfg(13, 4, 24, 12, 14).validate().is_err());
        assert!(cfg(15, 4, 24, 12, 12).validate().is_err());
        assert_eq!(cfg(13, 4, 24, 12, 12).regime(), "sign-insensitive");
        assert_eq!(cfg(13, 22, 24, 12, 12).regime(), "sign-sensitive");
    }

    #[test]
    fn default_config_is_not_ordinary() {
        let e = verify(&VerifyConfig::default()).unwrap_err();
        assert_eq!(e.stage, "hida");
        assert!(matches!(e.error, Error::NotOrdinary(_)));
    }

    #[test]
    fn weight_24_at_13() {
        let rep = verify(&cfg(13, 4, 24, 12, 12)).unwrap();
        assert!(rep.verdict, "{rep:#?}");
        assert_eq!(rep.slack, "0");
        let flipped = verify(&VerifyConfig { ep_sign: EpSign::Plus, ..cfg(13, 4, 24, 12, 12) }).unwrap();
        assert!(flipped.verdict);
    }
}
