//! The determinant method on `C`: evaluation matrices of degree-`2k` monomials at rational
//! points, the two divisibility statements for their determinants (by `p` on a residue class,
//! by the curve height), the prime choice that forces vanishing, and the auxiliary form.

mod basis;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::curve::DiagonalPencil;
use crate::error::{Error, Result};
use crate::kernel::{is_prime, pow, valuation, valuation_base, IntMatrix, Valuation};
use crate::points::{count_fp, partition_classes, FpPoint, ProjectivePoint};

pub use basis::{basis_s2k, dim_sk, monomials, verify_basis_independence, verify_independence, MonomialBasis};

/// `M_2k = (f_j(P_i))`: rows are points, columns basis monomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalMatrix {
    pub k: usize,
    pub basis: MonomialBasis,
    pub points: Vec<ProjectivePoint>,
    pub entries: IntMatrix,
}

impl EvalMatrix {
    /// Index pairs of repeated points. Repeats are allowed; they only force a zero determinant.
    pub fn duplicate_rows(&self) -> Vec<(usize, usize)> {
        (0..self.points.len())
            .tuple_combinations()
            .filter(|&(i, j)| self.points[i] == self.points[j])
            .collect()
    }
}

pub fn eval_matrix(c: &DiagonalPencil, points: &[ProjectivePoint], k: usize) -> Result<EvalMatrix> {
    let basis = basis_s2k(c, k)?;
    eval_matrix_in(c, points, basis)
}

/// Like [`eval_matrix`] with an explicitly chosen basis.
pub fn eval_matrix_in(c: &DiagonalPencil, points: &[ProjectivePoint], basis: MonomialBasis) -> Result<EvalMatrix> {
    if points.is_empty() {
        return Err(Error::Argument("evaluation matrix needs at least one point".into()));
    }
    if let Some(p) = points.iter().find(|p| !c.contains(p.coords())) {
        return Err(Error::Argument(format!("{p:?} is not on the curve")));
    }
    let rows = points.iter().map(|p| basis.eval_row(p.coords())).collect();
    let dups = points.iter().tuple_combinations().filter(|(a, b)| a == b).count();
    if dups > 0 {
        log::info!("evaluation matrix has {dups} repeated point pair(s); its determinant is 0");
    }
    Ok(EvalMatrix { k: basis.k(), entries: IntMatrix::from_rows(rows)?, basis, points: points.to_vec() })
}

/// Hadamard's bound `(8k)^(4k) B^(16k²)` for an `8k x 8k` matrix at points of height `<= B`.
pub fn hadamard_bound(k: usize, bound: &BigInt) -> BigInt {
    let k = k as u64;
    pow(&BigInt::from(8 * k), 4 * k) * pow(bound, 16 * k * k)
}

pub fn hadamard_certificate(m: &EvalMatrix, bound: &BigInt) -> Result<bool> {
    if let Some(p) = m.points.iter().find(|p| p.height() > bound) {
        return Err(Error::Argument(format!("{p:?} has height above {bound}")));
    }
    let det = m.entries.det()?;
    Ok(det.abs() <= hadamard_bound(m.k, bound))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertificateKind {
    /// Powers of a good prime from points sharing a residue class.
    ClassPrime,
    /// Powers of the curve height `H(C)`.
    Height,
}

impl CertificateKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CertificateKind::ClassPrime => "class_prime",
            CertificateKind::Height => "height",
        }
    }
}

/// Evidence that `base^required` divides a determinant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisibilityCertificate {
    pub kind: CertificateKind,
    pub base: BigInt,
    pub required: u64,
    /// Smallest valuation seen over the checked minors (`Infinite` when all vanish).
    pub observed: Valuation,
    /// The minor attaining `observed`.
    pub determinant: BigInt,
    pub minors_checked: usize,
}

impl DivisibilityCertificate {
    pub fn verified(&self) -> bool {
        self.observed.at_least(self.required)
    }
}

/// Valuation at `p` of every maximal square minor of rows that share one residue class.
///
/// For `E` rows and `s = min(E, 8k)` the required exponent is `s(s-1)/2`: after row operations
/// over `Z_p` the `i`-th row becomes divisible by `p^(i-1)`. When `E = 8k` this is `4k(8k-1)`.
pub fn class_divisibility(c: &DiagonalPencil, m: &EvalMatrix, p: u64) -> Result<DivisibilityCertificate> {
    let part = partition_classes(c, &m.points, p)?;
    if part.num_classes() != 1 {
        let keys: Vec<&FpPoint> = part.classes.keys().collect();
        return Err(Error::Argument(format!("rows reduce to {} different classes mod {p}: {keys:?}", keys.len())));
    }
    let e = m.entries.rows();
    let s = e.min(m.entries.cols());
    let required = (s * (s - 1) / 2) as u64;
    let mut best: Option<(Valuation, BigInt)> = None;
    let mut checked = 0;
    for rows in (0..e).combinations(s) {
        for cols in (0..m.entries.cols()).combinations(s) {
            let det = m.entries.select(&rows, &cols)?.det()?;
            let v = valuation(&det, p);
            checked += 1;
            if best.as_ref().is_none_or(|(bv, _)| v < *bv) {
                best = Some((v, det));
            }
        }
    }
    let (observed, determinant) = best.expect("at least one minor");
    Ok(DivisibilityCertificate {
        kind: CertificateKind::ClassPrime,
        base: BigInt::from(p),
        required,
        observed,
        determinant,
        minors_checked: checked,
    })
}

/// `4k² - 4k + 1`, the power of `H(C)` dividing `det M_2k`.
pub fn height_exponent(k: usize) -> u64 {
    let k = k as u64;
    4 * k * k - 4 * k + 1
}

/// Whether `H(C)^(4k²-4k+1)` divides `det M_2k` for exactly `8k` points of `C`.
///
/// `H(C)` need not be prime, so `observed` is the largest `e` with `H^e | det`, found by
/// repeated exact division.
pub fn height_divisibility(c: &DiagonalPencil, points: &[ProjectivePoint], k: usize) -> Result<DivisibilityCertificate> {
    c.require_nonsingular()?;
    if points.len() != 8 * k {
        return Err(Error::Argument(format!("need exactly {} points, got {}", 8 * k, points.len())));
    }
    let m = eval_matrix(c, points, k)?;
    let det = m.entries.det()?;
    let height = c.height();
    Ok(DivisibilityCertificate {
        kind: CertificateKind::Height,
        observed: valuation_base(&det, &height),
        base: height,
        required: height_exponent(k),
        determinant: det,
        minors_checked: 1,
    })
}

/// `∏_{i<j} (α_i β_j - α_j β_i)`.
pub fn vandermonde(alpha: &[BigInt], beta: &[BigInt]) -> Result<BigInt> {
    if alpha.len() != beta.len() || alpha.is_empty() {
        return Err(Error::Argument(format!(
            "vandermonde needs equal non-empty lengths, got {} and {}",
            alpha.len(),
            beta.len()
        )));
    }
    Ok((0..alpha.len())
        .tuple_combinations()
        .map(|(i, j)| &alpha[i] * &beta[j] - &alpha[j] * &beta[i])
        .product())
}

/// Rows `(α_i^n, α_i^(n-1) β_i, ..., β_i^n)` with `n = len - 1`.
pub fn power_matrix(alpha: &[BigInt], beta: &[BigInt]) -> Result<IntMatrix> {
    if alpha.len() != beta.len() {
        return Err(Error::Argument("alpha and beta differ in length".into()));
    }
    let n = alpha.len().saturating_sub(1);
    IntMatrix::from_rows(
        alpha
            .iter()
            .zip(beta)
            .map(|(a, b)| (0..=n).map(|t| pow(a, (n - t) as u64) * pow(b, t as u64)).collect())
            .collect(),
    )
}

/// Whether `p > 2 B^(4k/(8k-1)) / H^((4k²-4k+1)/(4k(8k-1)))`, decided exactly as
/// `p^(4k(8k-1)) H^(4k²-4k+1) > 2^(4k(8k-1)) B^(16k²)`.
pub fn exceeds_threshold(p: u64, k: usize, bound: &BigInt, height: &BigInt) -> bool {
    let k = k as u64;
    let e1 = 4 * k * (8 * k - 1);
    let lhs = pow(&BigInt::from(p), e1) * pow(height, height_exponent(k as usize));
    let rhs = pow(&BigInt::from(2), e1) * pow(bound, 16 * k * k);
    lhs > rhs
}

/// Floating-point value of the threshold, for display only.
pub fn threshold_estimate(k: usize, bound: &BigInt, height: &BigInt) -> f64 {
    let k = k as f64;
    let lb = crate::kernel::ln_bigint(bound);
    let lh = crate::kernel::ln_bigint(height);
    (std::f64::consts::LN_2 + 4.0 * k / (8.0 * k - 1.0) * lb
        - (4.0 * k * k - 4.0 * k + 1.0) / (4.0 * k * (8.0 * k - 1.0)) * lh)
        .exp()
}

/// Smallest good prime strictly above the threshold computed with the given height.
pub fn smallest_good_prime_above(c: &DiagonalPencil, k: usize, bound: &BigInt, height: &BigInt) -> Result<u64> {
    c.require_nonsingular()?;
    if k == 0 || bound < &BigInt::from(1) || height < &BigInt::from(1) {
        return Err(Error::Argument("choose_prime needs k, B, H >= 1".into()));
    }
    let est = threshold_estimate(k, bound, height);
    let mut n = est.floor().min(u64::MAX as f64 / 2.0).max(2.0) as u64;
    // step down until n no longer exceeds the exact threshold
    while n > 2 && exceeds_threshold(n, k, bound, height) {
        n -= 1 + n / 1024;
    }
    let good = c.good_prime_test();
    loop {
        n += 1;
        if is_prime(n) && exceeds_threshold(n, k, bound, height) && good(n) {
            return Ok(n);
        }
    }
}

/// The prime used by the determinant method: smallest good `p` above the threshold at `H(C)`.
pub fn choose_prime(c: &DiagonalPencil, k: usize, bound: &BigInt) -> Result<u64> {
    smallest_good_prime_above(c, k, bound, &c.height())
}

/// A form `G = Σ c_j f_j` in the basis monomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuxiliaryForm {
    pub basis: MonomialBasis,
    pub coefficients: Vec<BigInt>,
}

impl AuxiliaryForm {
    pub fn eval(&self, x: &[BigInt; 4]) -> BigInt {
        self.basis.eval_row(x).iter().zip(&self.coefficients).map(|(f, c)| f * c).sum()
    }

    pub fn vanishes_at(&self, p: &ProjectivePoint) -> bool {
        self.eval(p.coords()).is_zero()
    }
}

/// A primitive form vanishing at every given point, or `None` when `M_2k` has full column rank.
///
/// The basis is independent modulo `(q, r)`, so a nonzero `G` never vanishes on all of `C`.
pub fn auxiliary_form(c: &DiagonalPencil, points: &[ProjectivePoint], k: usize) -> Result<Option<AuxiliaryForm>> {
    let m = eval_matrix(c, points, k)?;
    Ok(m.entries.kernel_vector().map(|coefficients| AuxiliaryForm { basis: m.basis, coefficients }))
}

/// Bézout: a form of degree `2k` not containing the quartic `C` meets it in at most `8k` points.
pub fn bezout_class_bound(k: usize) -> u64 {
    8 * k as u64
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DmUpperBound {
    pub p: u64,
    pub n_p: u64,
    pub per_class: u64,
    pub bound: u64,
}

/// `N(B) <= n_p · 8k` with `p = choose_prime(c, k, B)`.
pub fn dm_upper_bound(c: &DiagonalPencil, bound: &BigInt, k: usize) -> Result<DmUpperBound> {
    let p = choose_prime(c, k, bound)?;
    let n_p = count_fp(c, p)?;
    let per_class = bezout_class_bound(k);
    Ok(DmUpperBound { p, n_p, per_class, bound: n_p * per_class })
}

/// `s = 4(m²a + b)`, valid when `1/a + m²/b < 4`.
pub fn s_formula(a: u64, b: u64, m: u64) -> Result<u64> {
    if a == 0 || b == 0 || m == 0 {
        return Err(Error::Domain("a, b and m must be positive".into()));
    }
    let (a, b, m) = (a as u128, b as u128, m as u128);
    // 1/a + m²/b < 4  <=>  b + m² a < 4ab
    if b + m * m * a >= 4 * a * b {
        return Err(Error::Domain(format!("1/a + m²/b < 4 fails for a = {a}, b = {b}, m = {m}")));
    }
    (4 * (m * m * a + b))
        .to_u64()
        .ok_or_else(|| Error::Domain("s does not fit in 64 bits".into()))
}

/// Ratio used by tests and reports: how many times `H^required` fits, as an exact quotient.
pub fn cofactor(cert: &DivisibilityCertificate) -> Option<BigInt> {
    if cert.base.abs() <= BigInt::from(1) || !cert.verified() {
        return None;
    }
    let (q, r) = cert.determinant.div_rem(&pow(&cert.base, cert.required));
    r.is_zero().then_some(q)
}
