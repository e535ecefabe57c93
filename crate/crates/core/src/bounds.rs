//! Shape values of the counting bounds, with implied constants set to 1.
//!
//! Nothing here asserts an inequality against empirical counts; reports only record ratios.
//! Logarithms are natural.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::curve::DiagonalPencil;
use crate::error::{Error, Result};
use crate::kernel::{factor_u64, ln_bigint, primes_in};
use crate::points::{enumerate_with, EnumerateOptions};

fn check_b(b: f64) -> Result<f64> {
    if !(b >= 3.0) || !b.is_finite() {
        return Err(Error::Domain(format!("bounds need finite B >= 3, got {b}")));
    }
    Ok(b.ln())
}

fn check_h(h: f64) -> Result<f64> {
    if !(h >= 1.0) || !h.is_finite() {
        return Err(Error::Domain(format!("height must be finite and >= 1, got {h}")));
    }
    Ok(h)
}

fn check_positive(name: &str, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("{name} must be positive, got {x}")));
    }
    Ok(x)
}

fn check_rank(r: f64) -> Result<f64> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::Domain(format!("rank must be non-negative, got {r}")));
    }
    Ok(r)
}

/// `m^r (B^(1/(2m²)) + m²) log B`.
pub fn thm11(b: f64, r: f64, m: u32) -> Result<f64> {
    let lb = check_b(b)?;
    let r = check_rank(r)?;
    if m == 0 {
        return Err(Error::Domain("m must be at least 1".into()));
    }
    let m = m as f64;
    Ok(m.powf(r) * (b.powf(1.0 / (2.0 * m * m)) + m * m) * lb)
}

/// `1 + ⌊√(log B)⌋`, the choice of `m` that turns [`thm11`] into [`cor12`].
pub fn cor12_m(b: f64) -> Result<u32> {
    Ok(1 + check_b(b)?.sqrt().floor() as u32)
}

/// `(log B)^(2 + r/2)`.
pub fn cor12(b: f64, r: f64) -> Result<f64> {
    let lb = check_b(b)?;
    Ok(lb.powf(2.0 + check_rank(r)? / 2.0))
}

/// `B^(1/2+ε) / H^(1/8) + log B + 1`.
pub fn thm31(b: f64, h: f64, eps: f64) -> Result<f64> {
    let lb = check_b(b)?;
    let h = check_h(h)?;
    let eps = check_positive("epsilon", eps)?;
    Ok(b.powf(0.5 + eps) / h.powf(0.125) + lb + 1.0)
}

/// `2^r B^(1/8) log B`.
pub fn eq13(b: f64, r: f64) -> Result<f64> {
    let lb = check_b(b)?;
    Ok(2f64.powf(check_rank(r)?) * b.powf(0.125) * lb)
}

/// `H^(6+ε) B^(1/8) log B`.
pub fn eq14(b: f64, h: f64, eps: f64) -> Result<f64> {
    let lb = check_b(b)?;
    let h = check_h(h)?;
    let eps = check_positive("epsilon", eps)?;
    Ok(h.powf(6.0 + eps) * b.powf(0.125) * lb)
}

/// `3/392`, the strict upper limit for `δ`.
pub fn delta_limit() -> BigRational {
    BigRational::new(3.into(), 392.into())
}

/// `B^(1/2-δ)` for `0 < δ < 3/392`, with `δ` exact so the endpoint itself is rejected.
pub fn thm13(b: f64, delta: &BigRational) -> Result<f64> {
    check_b(b)?;
    if !delta.is_positive() || delta >= &delta_limit() {
        return Err(Error::Domain(format!("delta must satisfy 0 < delta < 3/392, got {delta}")));
    }
    let d = delta.to_f64().expect("delta in (0, 3/392)");
    Ok(b.powf(0.5 - d))
}

/// Exponent of `B` in `B^(1/2) / H*^(1/8)` with `H* = B^(3/49)`.
pub fn crossing_exponent() -> BigRational {
    let half = BigRational::new(1.into(), 2.into());
    half - BigRational::new(3.into(), 49.into()) * BigRational::new(1.into(), 8.into())
}

/// Whether `1/2 - (3/49)(1/8) = 193/392 = 1/2 - 3/392` holds exactly.
pub fn exponent_identity_holds() -> bool {
    let e = crossing_exponent();
    let half = BigRational::new(1.into(), 2.into());
    e == BigRational::new(193.into(), 392.into()) && e == half - delta_limit()
}

/// `H* = B^(3/49)`, where `H^6 B^(1/8)` meets `B^(1/2) / H^(1/8)`.
pub fn dichotomy_crossing(b: f64) -> Result<f64> {
    if !(b > 1.0) || !b.is_finite() {
        return Err(Error::Domain(format!("crossing needs finite B > 1, got {b}")));
    }
    Ok(b.powf(3.0 / 49.0))
}

/// The same crossing located numerically by bisection on `log H`, with `ε = 0` and no log factors.
pub fn crossing_by_bisection(b: f64) -> Result<f64> {
    if !(b > 1.0) || !b.is_finite() {
        return Err(Error::Domain(format!("crossing needs finite B > 1, got {b}")));
    }
    let lb = b.ln();
    // log eq14 - log thm31 main term, increasing in h = log H
    let gap = |h: f64| (6.0 * h + lb / 8.0) - (lb / 2.0 - h / 8.0);
    let (mut lo, mut hi) = (0.0f64, lb);
    while hi - lo > f64::EPSILON * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if gap(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((0.5 * (lo + hi)).exp())
}

/// Both sides of `Σ_{p | Π} (log p)/p <= log log Π + 2`, rounded outward.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MertensCheck {
    /// An upper bound for the left side.
    pub lhs_upper: f64,
    /// A lower bound for the right side.
    pub rhs_lower: f64,
}

impl MertensCheck {
    pub fn holds(&self) -> bool {
        self.lhs_upper <= self.rhs_lower
    }
}

const TRIAL_LIMIT: u64 = 1 << 16;

// ln and division are faithfully rounded, so two ulps per operation covers the error.
fn up(x: f64) -> f64 {
    x.next_up().next_up()
}

fn down(x: f64) -> f64 {
    x.next_down().next_down()
}

fn term_upper(p: u64) -> f64 {
    up(up((p as f64).ln()) / down(p as f64))
}

/// Certified comparison for the prime sum of `Π`.
///
/// Factors `Π` exactly when it fits in 64 bits. Otherwise primes up to `2^16` are removed by
/// trial division; a remaining cofactor `C` too large to factor has fewer than
/// `log C / log L` prime factors, each above `L = 2^16`, and `(log p)/p` is decreasing there,
/// so it contributes at most `log C / L`.
pub fn mertens_sides(pi: &BigInt) -> Result<MertensCheck> {
    if pi <= &BigInt::one() {
        return Err(Error::Domain(format!("Π must be at least 2, got {pi}")));
    }
    let mut lhs = 0.0f64;
    let mut rest = pi.clone();
    if rest.to_u64().is_none() {
        for p in primes_in(1, TRIAL_LIMIT) {
            let pb = BigInt::from(p);
            if (&rest % &pb).is_zero() {
                lhs = up(lhs + term_upper(p));
                while (&rest % &pb).is_zero() {
                    rest /= &pb;
                }
            }
        }
    }
    match rest.to_u64() {
        Some(n) => {
            for (p, _) in factor_u64(n) {
                lhs = up(lhs + term_upper(p));
            }
        }
        None => lhs = up(lhs + up(up(ln_bigint(&rest) * (1.0 + 1e-12)) / TRIAL_LIMIT as f64)),
    }
    // ln_bigint of a huge value loses a little more than an ulp, hence the relative margin
    let ln_pi = ln_bigint(pi) * (1.0 - 1e-12);
    let rhs_lower = down(down(down(ln_pi).ln()) + 2.0);
    Ok(MertensCheck { lhs_upper: lhs, rhs_lower })
}

pub fn mertens_check(pi: &BigInt) -> Result<bool> {
    mertens_sides(pi).map(|m| m.holds())
}

/// Where a report's rank value came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankSource {
    User,
    Estimate,
}

impl RankSource {
    pub fn as_str(self) -> &'static str {
        match self {
            RankSource::User => "user",
            RankSource::Estimate => "estimate",
        }
    }
}

#[derive(Debug, Clone)]
pub struct BoundParams {
    pub m: u32,
    pub eps: f64,
    pub delta: BigRational,
    /// Rank estimate constants, used when `rank` is `None`.
    pub c: f64,
    pub c0: f64,
    pub rank: Option<f64>,
    /// Enumeration settings; `None` skips `N(B)`.
    pub enumerate: Option<EnumerateOptions>,
}

impl Default for BoundParams {
    fn default() -> Self {
        BoundParams {
            m: 2,
            eps: 0.01,
            delta: BigRational::new(3.into(), 400.into()),
            c: 0.722,
            c0: 0.0,
            rank: None,
            enumerate: Some(EnumerateOptions::default()),
        }
    }
}

/// The evaluated bounds at one `B`; each is `None` when `B < 3`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BoundValues {
    pub thm11: Option<f64>,
    pub cor12: Option<f64>,
    pub eq13: Option<f64>,
    pub eq14: Option<f64>,
    pub thm31: Option<f64>,
    pub thm13: Option<f64>,
}

impl BoundValues {
    /// Name and value in report column order.
    pub fn named(&self) -> [(&'static str, Option<f64>); 6] {
        [
            ("thm11", self.thm11),
            ("cor12", self.cor12),
            ("eq13", self.eq13),
            ("eq14", self.eq14),
            ("thm31", self.thm31),
            ("thm13", self.thm13),
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub curve: String,
    pub b: u64,
    pub height: BigInt,
    pub abs_disc: BigRational,
    pub rank_source: RankSource,
    pub rank: f64,
    pub rank_c: Option<f64>,
    pub rank_c0: Option<f64>,
    pub m: u32,
    pub eps: f64,
    pub delta: BigRational,
    pub bounds: BoundValues,
    pub nb: Option<u64>,
    /// `N(B) / bound` in report column order, when both exist.
    pub ratios: Vec<(&'static str, Option<f64>)>,
}

fn evaluate(b: u64, h: f64, rank: f64, p: &BoundParams) -> Result<BoundValues> {
    if b < 3 {
        return Ok(BoundValues::default());
    }
    let bf = b as f64;
    Ok(BoundValues {
        thm11: Some(thm11(bf, rank, p.m)?),
        cor12: Some(cor12(bf, rank)?),
        eq13: Some(eq13(bf, rank)?),
        eq14: Some(eq14(bf, h, p.eps)?),
        thm31: Some(thm31(bf, h, p.eps)?),
        thm13: Some(thm13(bf, &p.delta)?),
    })
}

/// One report per entry of `bs`, in the given order.
pub fn bound_table(c: &DiagonalPencil, bs: &[u64], params: &BoundParams) -> Result<Vec<BoundReport>> {
    c.require_nonsingular()?;
    if let Some(r) = params.rank {
        check_rank(r)?;
    }
    check_positive("epsilon", params.eps)?;
    thm13(3.0, &params.delta)?;
    let height = c.height();
    let h = height.to_f64().unwrap_or(f64::INFINITY);
    let abs_disc = c.discriminant()?.abs();
    let (rank_source, rank, rank_c, rank_c0) = match params.rank {
        Some(r) => (RankSource::User, r, None, None),
        None => {
            let est = c.rank_estimate(params.c, params.c0)?;
            (RankSource::Estimate, est.value.max(0.0), Some(est.c), Some(est.c0))
        }
    };
    bs.par_iter()
        .map(|&b| {
            let bounds = evaluate(b, h, rank, params)?;
            let nb = match &params.enumerate {
                Some(opts) => Some(enumerate_with(c, &BigInt::from(b), opts)?.len() as u64),
                None => None,
            };
            let ratios = bounds
                .named()
                .iter()
                .map(|&(name, v)| (name, nb.zip(v).map(|(n, v)| n as f64 / v)))
                .collect();
            Ok(BoundReport {
                curve: c.id(),
                b,
                height: height.clone(),
                abs_disc: abs_disc.clone(),
                rank_source,
                rank,
                rank_c,
                rank_c0,
                m: params.m,
                eps: params.eps,
                delta: params.delta.clone(),
                bounds,
                nb,
                ratios,
            })
        })
        .collect()
}
