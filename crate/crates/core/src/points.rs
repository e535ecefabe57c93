//! Rational points of bounded height, reduction modulo primes, and point counts over F_p.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::curve::{complement, DiagonalPencil, MINOR_PAIRS};
use crate::error::{Error, Result};
use crate::kernel::gcd_vec;

/// A rational point of P³ as a primitive integer quadruple, first nonzero coordinate positive.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjectivePoint {
    coords: [BigInt; 4],
    height: BigInt,
}

impl ProjectivePoint {
    /// Normalises any nonzero integer quadruple.
    pub fn new(coords: [BigInt; 4]) -> Result<Self> {
        let g = gcd_vec(&coords)?;
        if g.is_zero() {
            return Err(Error::Argument("the zero vector is not a projective point".into()));
        }
        let neg = coords.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
        let coords = coords.map(|x| if neg { -x / &g } else { x / &g });
        let height = coords.iter().map(|x| x.abs()).max().expect("four coordinates");
        Ok(ProjectivePoint { coords, height })
    }

    pub fn from_i64(coords: [i64; 4]) -> Result<Self> {
        Self::new(coords.map(BigInt::from))
    }

    pub fn coords(&self) -> &[BigInt; 4] {
        &self.coords
    }

    /// `max |x_i|`.
    pub fn height(&self) -> &BigInt {
        &self.height
    }
}

impl fmt::Debug for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = &self.coords;
        write!(f, "({a}, {b}, {c}, {d})")
    }
}

/// A point of P³(F_p) with first nonzero coordinate equal to 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FpPoint {
    pub p: u64,
    pub coords: [u64; 4],
}

/// Rational points grouped by their reduction modulo `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassPartition {
    pub p: u64,
    pub classes: BTreeMap<FpPoint, Vec<ProjectivePoint>>,
}

impl ClassPartition {
    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn num_points(&self) -> usize {
        self.classes.values().map(Vec::len).sum()
    }
}

/// Worker count and memory cap for [`enumerate_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerateOptions {
    /// Threads for a fresh pool; ignored when already running on a rayon worker.
    pub workers: usize,
    /// Bytes the returned point list may occupy.
    pub memory_budget: usize,
}

pub const DEFAULT_MEMORY_BUDGET: usize = 1 << 30;

/// Rough heap footprint of one stored point.
const POINT_BYTES: usize = std::mem::size_of::<ProjectivePoint>() + 5 * 16;

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions {
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            memory_budget: DEFAULT_MEMORY_BUDGET,
        }
    }
}

/// All points of `C(Q)` with height at most `bound`, sorted lexicographically.
pub fn enumerate(c: &DiagonalPencil, bound: &BigInt) -> Result<Vec<ProjectivePoint>> {
    enumerate_with(c, bound, &EnumerateOptions::default())
}

/// `N(B)`.
pub fn count_nb(c: &DiagonalPencil, bound: &BigInt) -> Result<usize> {
    enumerate(c, bound).map(|v| v.len())
}

/// Enumeration over non-negative sign orbits.
///
/// With all minors nonzero the two equations can be solved for `x2², x3²`:
/// `d23 x2² = -d03 x0² - d13 x1²` and `d23 x3² = d02 x0² + d12 x1²`, so only the pair
/// `(x0, x1) ∈ [0, B]²` is looped over. Rows of `x0` are split across workers and the
/// per-row results are concatenated in order, so the output does not depend on scheduling.
pub fn enumerate_with(
    c: &DiagonalPencil,
    bound: &BigInt,
    opts: &EnumerateOptions,
) -> Result<Vec<ProjectivePoint>> {
    c.require_nonsingular()?;
    if bound < &BigInt::one() {
        return Err(Error::Argument(format!("height bound must be positive, got {bound}")));
    }
    let b = bound.to_u64().filter(|&b| b <= u32::MAX as u64).ok_or_else(|| Error::Resource {
        bound: bound.clone(),
        detail: "height bound too large to scan".into(),
    })?;
    let d = c.plucker().d;
    let used = AtomicUsize::new(0);
    let charge = |n: usize| -> Result<()> {
        let total = used.fetch_add(n * POINT_BYTES, Ordering::Relaxed) + n * POINT_BYTES;
        if total > opts.memory_budget {
            Err(Error::Resource {
                bound: bound.clone(),
                detail: format!(
                    "point list needs more than the memory budget of {} bytes",
                    opts.memory_budget
                ),
            })
        } else {
            Ok(())
        }
    };
    let fits_i128 = d.iter().map(|x| x.bits()).max().unwrap_or(0) + 2 * (64 - b.leading_zeros() as u64) + 3 < 126;
    let row = |x0: u64| -> Result<Vec<[BigInt; 4]>> {
        let reps = if fits_i128 { orbit_row_i128(&d, b, x0) } else { orbit_row_big(&d, b, x0) };
        let mut pts = Vec::new();
        for rep in reps {
            expand_signs(&rep, &mut pts);
        }
        charge(pts.len())?;
        Ok(pts)
    };
    let scan = || (0..=b).into_par_iter().map(row).collect::<Result<Vec<_>>>();
    // Inside a pool already (as in a curve search) the caller's pool is reused: blocking on a
    // second pool from a worker lets that worker steal more outer jobs and nest without bound.
    let rows = if rayon::current_thread_index().is_some() {
        scan()?
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(opts.workers.max(1))
            .build()
            .map_err(|e| Error::Resource { bound: bound.clone(), detail: e.to_string() })?
            .install(scan)?
    };
    let mut out: Vec<ProjectivePoint> = rows
        .into_iter()
        .flatten()
        .map(|x| ProjectivePoint::new(x).expect("orbit representatives are nonzero"))
        .collect();
    out.sort();
    Ok(out)
}

fn orbit_row_i128(d: &[BigInt; 6], b: u64, x0: u64) -> Vec<[u64; 4]> {
    let d: [i128; 6] = d.clone().map(|x| x.to_i128().expect("bounded minors"));
    let [_, d02, d03, d12, d13, d23] = d;
    let bsq = (b as i128) * (b as i128);
    let sq0 = (x0 as i128) * (x0 as i128);
    let solve = |num: i128| -> Option<u64> {
        if num % d23 != 0 {
            return None;
        }
        let v = num / d23;
        if v < 0 || v > bsq {
            return None;
        }
        let r = (v as u64).isqrt();
        (r as i128 * r as i128 == v).then_some(r)
    };
    let mut out = Vec::new();
    for x1 in 0..=b {
        let sq1 = (x1 as i128) * (x1 as i128);
        let Some(x2) = solve(-d03 * sq0 - d13 * sq1) else { continue };
        let Some(x3) = solve(d02 * sq0 + d12 * sq1) else { continue };
        let rep = [x0, x1, x2, x3];
        if rep.iter().fold(0u64, |g, &v| num_integer::gcd(g, v)) == 1 {
            out.push(rep);
        }
    }
    out
}

fn orbit_row_big(d: &[BigInt; 6], b: u64, x0: u64) -> Vec<[u64; 4]> {
    let [_, d02, d03, d12, d13, d23] = d;
    let bsq = BigInt::from(b) * BigInt::from(b);
    let sq0 = BigInt::from(x0) * BigInt::from(x0);
    let solve = |num: BigInt| -> Option<u64> {
        let (v, rem) = num.div_rem(d23);
        if !rem.is_zero() || v.is_negative() || v > bsq {
            return None;
        }
        let r = v.sqrt();
        (&r * &r == v).then(|| r.to_u64().expect("at most B"))
    };
    let mut out = Vec::new();
    for x1 in 0..=b {
        let sq1 = BigInt::from(x1) * BigInt::from(x1);
        let Some(x2) = solve(-(d03 * &sq0) - d13 * &sq1) else { continue };
        let Some(x3) = solve(d02 * &sq0 + d12 * &sq1) else { continue };
        let rep = [x0, x1, x2, x3];
        if rep.iter().fold(0u64, |g, &v| num_integer::gcd(g, v)) == 1 {
            out.push(rep);
        }
    }
    out
}

/// All sign patterns of a non-negative representative, first nonzero coordinate kept positive.
fn expand_signs(rep: &[u64; 4], out: &mut Vec<[BigInt; 4]>) {
    let nz: Vec<usize> = (0..4).filter(|&i| rep[i] != 0).collect();
    let free = &nz[1..];
    for mask in 0u32..(1 << free.len()) {
        let mut x = rep.map(BigInt::from);
        for (bit, &i) in free.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                x[i] = -&x[i];
            }
        }
        out.push(x);
    }
}

fn residue(x: &BigInt, p: u64) -> u64 {
    x.mod_floor(&BigInt::from(p)).to_u64().expect("residue below p")
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = ((r as u128 * b as u128) % p as u128) as u64;
        }
        b = ((b as u128 * b as u128) % p as u128) as u64;
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

/// Quadratic character table: `chi[v]` in `{-1, 0, 1}`.
fn character_table(p: u64) -> Vec<i8> {
    let mut chi = vec![-1i8; p as usize];
    chi[0] = 0;
    for y in 1..p {
        chi[mul(y, y, p) as usize] = 1;
    }
    chi
}

fn require_good(c: &DiagonalPencil, p: u64) -> Result<()> {
    if c.is_good_prime(p) {
        Ok(())
    } else {
        Err(Error::BadPrime { p })
    }
}

/// Reduction of a rational point modulo a good prime, scaled so the first nonzero entry is 1.
pub fn reduce_mod_p(c: &DiagonalPencil, pt: &ProjectivePoint, p: u64) -> Result<FpPoint> {
    require_good(c, p)?;
    Ok(reduce_unchecked(pt, p)?)
}

fn reduce_unchecked(pt: &ProjectivePoint, p: u64) -> Result<FpPoint> {
    let mut coords = pt.coords().clone().map(|x| residue(&x, p));
    let lead = *coords.iter().find(|&&v| v != 0).ok_or_else(|| {
        Error::TheoremViolation(format!("primitive point {pt:?} vanishes mod {p}"))
    })?;
    let inv = inv_mod(lead, p);
    for v in coords.iter_mut() {
        *v = mul(*v, inv, p);
    }
    Ok(FpPoint { p, coords })
}

/// Number of points of `C(F_p)` for a good prime `p`.
///
/// Works with the primitive model. Since `d23` is a unit, each `(x0, x1)` determines
/// `x2², x3²`, and the charts `x0 = 1` and `(x0, x1) = (0, 1)` cover every point.
pub fn count_fp(c: &DiagonalPencil, p: u64) -> Result<u64> {
    require_good(c, p)?;
    let d = c.primitive_reduce().plucker().d.map(|x| residue(&x, p));
    let [_, d02, d03, d12, d13, d23] = d;
    let inv23 = inv_mod(d23, p);
    let chi = character_table(p);
    let neg = |v: u64| (p - v) % p;
    let count_at = |sq0: u64, sq1: u64| -> u64 {
        let s2 = mul(neg((mul(d03, sq0, p) + mul(d13, sq1, p)) % p), inv23, p);
        let s3 = mul((mul(d02, sq0, p) + mul(d12, sq1, p)) % p, inv23, p);
        ((1 + chi[s2 as usize] as i64) * (1 + chi[s3 as usize] as i64)) as u64
    };
    let affine: u64 = (0..p).map(|x1| count_at(1, mul(x1, x1, p))).sum();
    Ok(affine + count_at(0, 1))
}

/// Points on the short model `y² = x³ - 27 I x - 27 J` of the Jacobian over F_p, including
/// the point at infinity.
///
/// That model has bad reduction at 3 (its discriminant carries 3^9), so at `p = 3` the count
/// is taken on the quartic model `y² = ∏(λ a_i + μ b_i)` instead, which has the same Jacobian.
/// Both use the primitive model: another basis of the pencil scales `I`, `J` by powers of the
/// content, which would make the model singular at primes dividing it.
pub fn count_jacobian_fp(c: &DiagonalPencil, p: u64) -> Result<u64> {
    require_good(c, p)?;
    if p == 3 {
        return count_quartic_fp(c, p);
    }
    let w = c.primitive_reduce().weierstrass()?;
    let (a, b) = (residue(&w.a, p), residue(&w.b, p));
    let chi = character_table(p);
    let affine: i64 = (0..p)
        .map(|x| {
            let rhs = (mul(mul(x, x, p), x, p) + mul(a, x, p) + b) % p;
            1 + chi[rhs as usize] as i64
        })
        .sum();
    Ok((affine + 1) as u64)
}

/// Points on `y² = g(λ, μ)` over F_p, `g` the binary quartic of the pencil, counted over
/// `(λ : μ) ∈ P¹(F_p)` as `1 + χ(g)`.
pub fn count_quartic_fp(c: &DiagonalPencil, p: u64) -> Result<u64> {
    require_good(c, p)?;
    let q = c.primitive_reduce().weierstrass()?.quartic.map(|x| residue(&x, p));
    let chi = character_table(p);
    let g = |l: u64, m: u64| -> u64 {
        // q[t] multiplies λ^(4-t) μ^t
        (0..5).fold(0, |acc, t| (acc + mul(q[t], mul(pow_mod(l, 4 - t as u64, p), pow_mod(m, t as u64, p), p), p)) % p)
    };
    let total: i64 = (0..p).map(|m| 1 + chi[g(1, m) as usize] as i64).sum::<i64>() + 1 + chi[g(0, 1) as usize] as i64;
    Ok(total as u64)
}

/// Sharp Hasse window `(n - p - 1)² <= 4p`, in integers.
pub fn hasse_check(n: u64, p: u64) -> bool {
    let t = n as i128 - p as i128 - 1;
    t * t <= 4 * p as i128
}

pub fn partition_classes(c: &DiagonalPencil, points: &[ProjectivePoint], p: u64) -> Result<ClassPartition> {
    require_good(c, p)?;
    let mut classes: BTreeMap<FpPoint, Vec<ProjectivePoint>> = BTreeMap::new();
    for pt in points {
        classes.entry(reduce_unchecked(pt, p)?).or_default().push(pt.clone());
    }
    Ok(ClassPartition { p, classes })
}

/// The integer `λ` with `|x_k² y_l² - x_l² y_k²| = λ |d_ij|` for every complementary split
/// `{i, j, k, l} = {0, 1, 2, 3}`.
pub fn grassmann_check(c: &DiagonalPencil, x: &ProjectivePoint, y: &ProjectivePoint) -> Result<BigInt> {
    if !c.is_primitive() {
        return Err(Error::Argument("pencil is not primitive".into()));
    }
    for pt in [x, y] {
        if !c.contains(pt.coords()) {
            return Err(Error::Argument(format!("{pt:?} is not on the curve")));
        }
    }
    let d = c.plucker().d;
    let sq = |p: &ProjectivePoint| p.coords().clone().map(|v| &v * &v);
    let (xs, ys) = (sq(x), sq(y));
    let splits: Vec<(BigInt, BigInt)> = MINOR_PAIRS
        .iter()
        .enumerate()
        .map(|(t, &(i, j))| {
            let (k, l) = complement(i, j);
            ((&xs[k] * &ys[l] - &xs[l] * &ys[k]).abs(), d[t].abs())
        })
        .collect();
    let (lhs, coef) = splits
        .iter()
        .find(|(_, coef)| !coef.is_zero())
        .expect("validated pencil has a nonzero minor");
    let (lambda, rem) = lhs.div_rem(coef);
    let violation = || {
        Error::TheoremViolation(format!(
            "no single λ relates the square minors of {x:?}, {y:?} to the Plücker sixtuple"
        ))
    };
    if !rem.is_zero() {
        return Err(violation());
    }
    if splits.iter().all(|(l, c)| *l == &lambda * c) {
        Ok(lambda)
    } else {
        Err(violation())
    }
}
