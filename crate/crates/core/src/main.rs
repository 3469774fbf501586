//! `trisqrt` command-line interface. Every subcommand prints one JSON document with
//! `"schema": 1`; exact numbers are decimal strings.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Value};

use trisqrt::arith::{IntRing, Rat};
use trisqrt::hida::{congruence_p_part, control_rank_scan, pairing_matrix, ranks_constant, OrdinarySpace};
use trisqrt::identity::{compare_grid, compare_with_ep, sum_t_terms, verify_step2};
use trisqrt::lfunc::{local_standard_factor, local_triple_factor, partial_l, real_form, SatakePair, DEFAULT_BITS};
use trisqrt::measures::{evaluate_d, ordinary_space, verify, EpSign, StagedError, VerifyConfig};
use trisqrt::modforms::basis::{dim_cusp, dim_modular, hecke_matrix, sturm_bound, victor_miller_basis};
use trisqrt::modforms::eigen::{eigenbasis, rational_eigenform, EigenformDoc};
use trisqrt::modforms::{e4, e6, h_delta_g};
use trisqrt::qexp::QExp;
use trisqrt::{arith::poly::charpoly, Error};

#[derive(Parser)]
#[command(name = "trisqrt", version, about = "Triple-product p-adic measures at level one")]
struct Cli {
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<String>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Point {
    #[arg(long, default_value_t = 11)]
    p: u64,
    #[arg(long = "M", default_value_t = 4)]
    precision: u32,
    #[arg(long, default_value_t = 24)]
    k: u32,
    #[arg(long, default_value_t = 12)]
    l: u32,
    #[arg(long, default_value_t = 12)]
    m: u32,
    /// Index of f among the ordinary eigenforms of weight k.
    #[arg(long, default_value_t = 0)]
    form: usize,
    #[arg(long)]
    nmax: Option<usize>,
    /// Sign of the α_2 a_p p^{−k} term in E_p: minus (default) or plus.
    #[arg(long = "ep-sign", default_value = "minus")]
    ep_sign: String,
}

impl Point {
    fn config(&self) -> Result<VerifyConfig, Error> {
        Ok(VerifyConfig {
            p: self.p,
            precision: self.precision,
            k: self.k,
            l: self.l,
            m: self.m,
            form: self.form,
            ep_sign: self.ep_sign.parse::<EpSign>()?,
            n_max: self.nmax,
        })
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// q-expansions of level-one forms and the operators on them.
    Qexp {
        /// delta, e4, e6, eigen (the eigenform of a one-dimensional S_k) or basis.
        #[arg(long, default_value = "delta")]
        series: String,
        #[arg(long, default_value_t = 12)]
        k: u32,
        /// Index into the Victor–Miller basis for --series basis.
        #[arg(long, default_value_t = 0)]
        index: usize,
        #[arg(long, default_value_t = 20)]
        nmax: usize,
        /// Apply an operator: up, vp, deplete (all need --p) or theta (needs --r).
        #[arg(long)]
        op: Option<String>,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long, default_value_t = 1)]
        r: u32,
    },
    /// Dimensions, Hecke data and eigenforms of S_k; optionally H(h·δ^r g).
    Modforms {
        #[arg(long, default_value_t = 24)]
        k: u32,
        #[arg(long, default_value_t = 10)]
        nmax: usize,
        /// Also project h·δ^r g with r = (k − l − m)/2.
        #[arg(long)]
        l: Option<u32>,
        #[arg(long)]
        m: Option<u32>,
    },
    /// Ordinary space at (k, p): rank, unit roots, congruence exponents, pairing.
    Hida {
        #[arg(long, default_value_t = 11)]
        p: u64,
        #[arg(long = "M", default_value_t = 4)]
        precision: u32,
        #[arg(long, default_value_t = 24)]
        k: u32,
        /// Comma-separated weights for a control-rank scan instead.
        #[arg(long, value_delimiter = ',')]
        scan: Option<Vec<u32>>,
    },
    /// The p-adic side only: D = H(P)·ℓ_f(e(h·d^r g_p)).
    Measure(Point),
    /// Exact checks of the T-sum against E_p and of the S(P) factorization.
    Identity {
        #[arg(long, default_value_t = 24)]
        k: u32,
        #[arg(long, default_value_t = 12)]
        l: u32,
        #[arg(long, default_value_t = 12)]
        m: u32,
        /// Compare over all even weights up to this bound.
        #[arg(long)]
        kmax: Option<u32>,
    },
    /// Local triple factors and partial Euler products.
    Lfunc {
        #[command(subcommand)]
        cmd: LCmd,
    },
    /// Both sides of D = H(P)·K(P)·ρ; exit 0 iff the verdict holds.
    Verify(Point),
}

#[derive(Subcommand)]
enum LCmd {
    /// Exact inverse local factor at q.
    Local {
        #[arg(long, default_value_t = 2)]
        q: u64,
        #[arg(long, default_value_t = 12)]
        k: u32,
        #[arg(long, default_value_t = 12)]
        l: u32,
        #[arg(long, default_value_t = 12)]
        m: u32,
        /// Override a_q, b_q, c_q instead of reading the rational eigenforms.
        #[arg(long, allow_hyphen_values = true)]
        a: Option<BigInt>,
        #[arg(long, allow_hyphen_values = true)]
        b: Option<BigInt>,
        #[arg(long, allow_hyphen_values = true)]
        c: Option<BigInt>,
    },
    /// ∏_{q ≤ Q} of inverse local factors at s, as an interval.
    Partial {
        #[arg(long = "Q", default_value_t = 100)]
        q_max: u64,
        /// Rational s, e.g. 23, 47/2 or 23.5; defaults to the central point.
        #[arg(long)]
        s: Option<String>,
        #[arg(long, default_value_t = 24)]
        k: u32,
        #[arg(long, default_value_t = 12)]
        l: u32,
        #[arg(long, default_value_t = 12)]
        m: u32,
        /// Real embedding of f when its coefficient field is quadratic.
        #[arg(long, default_value_t = 0)]
        root: usize,
        #[arg(long, default_value_t = DEFAULT_BITS)]
        bits: u32,
    },
}

fn strs(v: &[BigInt]) -> Vec<String> {
    v.iter().map(|c| c.to_string()).collect()
}

fn parse_rat(s: &str) -> Result<Rat, Error> {
    let bad = || Error::InvalidInput(format!("cannot read {s} as a rational"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rat::new(n, d));
    }
    if let Some((i, f)) = s.split_once('.') {
        let digits: BigInt = format!("{i}{f}").parse().map_err(|_| bad())?;
        return Ok(Rat::new(digits, BigInt::from(10).pow(f.len() as u32)));
    }
    Ok(Rat::from_integer(s.parse().map_err(|_| bad())?))
}

fn qexp_cmd(series: &str, k: u32, index: usize, nmax: usize, op: Option<&str>, p: Option<u64>, r: u32) -> Result<Value, Error> {
    let ring = IntRing;
    let f: QExp<IntRing> = match series {
        "delta" => trisqrt::modforms::delta(&ring, nmax).with_weight(Some(12)),
        "e4" => e4(&ring, nmax),
        "e6" => e6(&ring, nmax),
        "eigen" => rational_eigenform(k, nmax)?.with_weight(Some(k as i64)),
        "basis" => {
            let b = victor_miller_basis(&ring, k, nmax, true)?;
            b.basis.get(index).cloned().ok_or_else(|| Error::InvalidInput(format!("S_{k} has dimension {}", b.dim())))?
        }
        s => return Err(Error::InvalidInput(format!("unknown series {s}"))),
    };
    let need_p = || p.ok_or_else(|| Error::InvalidInput("this operator needs --p".into()));
    let g = match op {
        None => f,
        Some("up") => f.u_p(need_p()?),
        Some("vp") => f.v_p(need_p()?),
        Some("deplete") => f.p_deplete(need_p()?),
        Some("theta") => f.theta(r),
        Some(o) => return Err(Error::InvalidInput(format!("unknown operator {o}"))),
    };
    Ok(serde_json::to_value(g.to_doc()).unwrap())
}

fn modforms_cmd(k: u32, nmax: usize, l: Option<u32>, m: Option<u32>) -> Result<Value, Error> {
    let dim = dim_cusp(k);
    let mut out = json!({
        "schema": 1,
        "k": k.to_string(),
        "dim_modular": dim_modular(k).to_string(),
        "dim_cusp": dim.to_string(),
        "sturm_bound": sturm_bound(k, 1).to_string(),
    });
    if dim > 0 {
        let t2 = hecke_matrix(k, 2)?;
        let sys = eigenbasis(k)?;
        out["hecke_t2"] = json!(t2.iter().map(|r| strs(r)).collect::<Vec<_>>());
        out["charpoly_t2"] = json!(strs(&charpoly(&t2)));
        out["eigenforms"] = json!(sys.forms.iter().map(|f| EigenformDoc::new(f, nmax)).collect::<Result<Vec<_>, _>>()?);
    }
    if let (Some(l), Some(m)) = (l, m) {
        if k < l + m || (k - l - m) % 2 == 1 {
            return Err(Error::InvalidInput(format!("need k ≥ l + m with k − l − m even, got ({k}, {l}, {m})")));
        }
        let r = (k - l - m) / 2;
        let n = nmax.max(sturm_bound(k, 1) + 2);
        let to_rat = |f: QExp<IntRing>| f.map_ring(trisqrt::arith::RatField, |c| Rat::from_integer(c.clone()));
        let g = to_rat(rational_eigenform(l, n)?).with_weight(Some(l as i64));
        let h = to_rat(rational_eigenform(m, n)?).with_weight(Some(m as i64));
        let big = h_delta_g(&h, &g, r)?.holomorphic_projection()?;
        let sys = eigenbasis(k)?;
        let coeffs = sys.expand(&big)?;
        out["holomorphic_projection"] = json!({
            "r": r.to_string(),
            "coeffs": big.coeffs().iter().take(nmax + 1).map(|c| c.to_string()).collect::<Vec<_>>(),
            "eigen_coefficients": coeffs.iter().map(|c| c.coords.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        });
    }
    Ok(out)
}

fn hida_cmd(p: u64, precision: u32, k: u32, scan: Option<Vec<u32>>) -> Result<Value, Error> {
    if let Some(ks) = scan {
        let rows = control_rank_scan(p, &ks, precision)?;
        return Ok(json!({
            "schema": 1,
            "p": p.to_string(),
            "M": precision.to_string(),
            "rows": rows,
            "constant_on_branches": ranks_constant(&rows),
        }));
    }
    let space = OrdinarySpace::new(k, p, precision)?;
    let forms = space
        .forms
        .iter()
        .enumerate()
        .map(|(i, f)| {
            Ok(json!({
                "orbit": f.base.orbit.to_string(),
                "theta_embedding": f.base.root.to_string(),
                "a_p": f.base.a_p.to_string(),
                "alpha1": f.alpha1.to_string(),
                "congruence_exponent": congruence_p_part(&space, i)?.to_string(),
            }))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(json!({
        "schema": 1,
        "p": p.to_string(),
        "M": precision.to_string(),
        "k": k.to_string(),
        "dim_cusp_level_one": space.dim.to_string(),
        "ordinary_rank": space.rank.to_string(),
        "u_iterations": space.n_iter.to_string(),
        "forms": forms,
        "pairing": pairing_matrix(&space)?,
    }))
}

fn measure_cmd(pt: &Point) -> Result<Value, StagedError> {
    let at = |stage: &'static str| move |error: Error| StagedError { stage, error };
    let cfg = pt.config().map_err(at("validate"))?;
    cfg.validate().map_err(at("validate"))?;
    let space = ordinary_space(&cfg).map_err(at("hida"))?;
    let dv = evaluate_d(&cfg, &space).map_err(at("measure"))?;
    Ok(json!({
        "schema": 1,
        "p": cfg.p.to_string(),
        "M": cfg.precision.to_string(),
        "k": cfg.k.to_string(),
        "l": cfg.l.to_string(),
        "m": cfg.m.to_string(),
        "r": cfg.r().to_string(),
        "form_index": cfg.form.to_string(),
        "h_exponent": dv.h_exponent.to_string(),
        "d": dv.d.to_string(),
        "coordinates": dv.projection.coords.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "slack": dv.projection.slack.to_string(),
        "precision": dv.projection.precision.to_string(),
        "u_iterations": dv.projection.n_iter.to_string(),
        "rows_checked": dv.projection.rows_checked.to_string(),
        "series_length": dv.series_length.to_string(),
    }))
}

fn identity_cmd(k: u32, l: u32, m: u32, kmax: Option<u32>) -> Result<Value, Error> {
    if k < l + m || k % 2 == 1 || l % 2 == 1 || m % 2 == 1 {
        return Err(Error::InvalidInput(format!("need even weights with k ≥ l + m, got ({k}, {l}, {m})")));
    }
    let mut out = json!({
        "schema": 1,
        "t_sum": sum_t_terms(k, l, m).to_string(),
        "comparison": compare_with_ep(k, l, m),
        "step2": verify_step2(k),
    });
    if let Some(kmax) = kmax {
        out["grid"] = serde_json::to_value(compare_grid(kmax)).unwrap();
    }
    Ok(out)
}

fn satake(q: u64, w: u32, over: Option<BigInt>) -> Result<SatakePair, Error> {
    let a = match over {
        Some(a) => a,
        None => rational_eigenform(w, q as usize)
            .map_err(|_| Error::InvalidInput(format!("no rational eigenform of weight {w}; pass the trace explicitly")))?
            .coeff(q as usize)
            .clone(),
    };
    Ok(SatakePair::new(q, w, a))
}

fn lfunc_cmd(cmd: LCmd) -> Result<Value, Error> {
    match cmd {
        LCmd::Local { q, k, l, m, a, b, c } => {
            if q < 2 || !(2..q).take_while(|d| d * d <= q).all(|d| q % d != 0) {
                return Err(Error::InvalidInput(format!("{q} is not prime")));
            }
            let (f, g, h) = (satake(q, k, a)?, satake(q, l, b)?, satake(q, m, c)?);
            let (_, doc) = local_triple_factor(&f, &g, &h)?;
            Ok(json!({
                "schema": 1,
                "weights": [k.to_string(), l.to_string(), m.to_string()],
                "triple": doc,
                "standard": [strs(&local_standard_factor(&f)), strs(&local_standard_factor(&g)), strs(&local_standard_factor(&h))],
            }))
        }
        LCmd::Partial { q_max, s, k, l, m, root, bits } => {
            let f = real_form(k, 0, root, q_max.max(2), bits)?;
            let g = real_form(l, 0, 0, q_max.max(2), bits)?;
            let h = real_form(m, 0, 0, q_max.max(2), bits)?;
            let s = match s {
                Some(s) => parse_rat(&s)?,
                None => Rat::new(BigInt::from(k + l + m - 2), BigInt::from(2)),
            };
            let mut cuts: Vec<u64> = std::iter::successors(Some(10u64), |c| Some(c * 10)).take_while(|&c| c < q_max).collect();
            cuts.push(q_max);
            let mut v = serde_json::to_value(partial_l([&f, &g, &h], &s, &cuts, bits)?).unwrap();
            v["schema"] = json!(1);
            Ok(v)
        }
    }
}

fn error_doc(stage: &str, e: &Error) -> Value {
    json!({ "schema": 1, "status": "error", "stage": stage, "error": e.kind(), "message": e.to_string() })
}

fn emit(out: &Option<String>, v: &Value) -> std::io::Result<()> {
    let text = serde_json::to_string_pretty(v).unwrap() + "\n";
    match out {
        Some(path) => std::fs::write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    if let Some(n) = std::env::var("TRISQRT_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let cli = Cli::parse();
    let (doc, code) = match cli.cmd {
        Cmd::Verify(pt) => match pt.config().map_err(|error| StagedError { stage: "validate", error }).and_then(|c| verify(&c)) {
            Ok(rep) => {
                let code = if rep.verdict { 0 } else { 1 };
                (serde_json::to_value(rep).unwrap(), code)
            }
            Err(e) => (error_doc(e.stage, &e.error), 2),
        },
        Cmd::Measure(pt) => match measure_cmd(&pt) {
            Ok(v) => (v, 0),
            Err(e) => (error_doc(e.stage, &e.error), 2),
        },
        other => {
            let (stage, res) = match other {
                Cmd::Qexp { series, k, index, nmax, op, p, r } => ("qexp", qexp_cmd(&series, k, index, nmax, op.as_deref(), p, r)),
                Cmd::Modforms { k, nmax, l, m } => ("modforms", modforms_cmd(k, nmax, l, m)),
                Cmd::Hida { p, precision, k, scan } => ("hida", hida_cmd(p, precision, k, scan)),
                Cmd::Identity { k, l, m, kmax } => ("identity", identity_cmd(k, l, m, kmax)),
                Cmd::Lfunc { cmd } => ("lfunc", lfunc_cmd(cmd)),
                Cmd::Verify(_) | Cmd::Measure(_) => unreachable!(),
            };
            match res {
                Ok(v) => (v, 0),
                Err(e) => (error_doc(stage, &e), 2),
            }
        }
    };
    if let Err(e) = emit(&cli.out, &doc) {
        eprintln!("cannot write report: {e}");
        return ExitCode::from(3);
    }
    ExitCode::from(code)
}
