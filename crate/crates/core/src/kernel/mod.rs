//! Exact integer and rational arithmetic shared by every other module.

mod matrix;
mod primes;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use matrix::{canonical_primitive, row_hnf, IntMatrix};
pub use primes::{factor_u64, is_prime, primes_in};

/// gcd of the absolute values; the gcd of an all-zero list is 0.
pub fn gcd_vec(values: &[BigInt]) -> Result<BigInt> {
    if values.is_empty() {
        return Err(Error::Argument("gcd of an empty list".into()));
    }
    Ok(values.iter().fold(BigInt::zero(), |g, v| g.gcd(v)))
}

/// A p-adic valuation; `Infinite` is the valuation of zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(u64),
    Infinite,
}

impl Valuation {
    pub fn at_least(self, e: u64) -> bool {
        match self {
            Valuation::Finite(v) => v >= e,
            Valuation::Infinite => true,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

/// Largest `e` with `p^e | n`.
///
/// # Panics
/// If `p < 2`.
pub fn valuation(n: &BigInt, p: u64) -> Valuation {
    valuation_base(n, &BigInt::from(p))
}

/// Largest `e` with `base^e | n` for any integer `|base| >= 2` (not necessarily prime).
///
/// A base of absolute value 1 divides everything, so it reports `Infinite`, as does `n = 0`.
pub fn valuation_base(n: &BigInt, base: &BigInt) -> Valuation {
    let base = base.abs();
    assert!(!base.is_zero(), "valuation base must be nonzero");
    if n.is_zero() || base.is_one() {
        return Valuation::Infinite;
    }
    let mut m = n.abs();
    let mut e = 0;
    loop {
        let (q, r) = m.div_rem(&base);
        if !r.is_zero() {
            return Valuation::Finite(e);
        }
        m = q;
        e += 1;
    }
}

/// Binomial coefficient over u64, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Natural logarithm of a positive big integer, to about double precision.
pub fn ln_bigint(n: &BigInt) -> f64 {
    assert!(n.is_positive(), "logarithm of non-positive integer");
    if let Some(f) = n.to_f64().filter(|f| f.is_finite()) {
        return f.ln();
    }
    // keep the top 64 bits
    let shift = n.bits() - 64;
    let top = (n >> shift).to_f64().expect("64-bit value");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `ln |x|` for a nonzero rational.
pub fn ln_abs_rational(x: &BigRational) -> f64 {
    ln_bigint(&x.numer().abs()) - ln_bigint(x.denom())
}

/// `base^e` as a big integer.
pub fn pow(base: &BigInt, e: u64) -> BigInt {
    num_traits::pow(base.clone(), usize::try_from(e).expect("exponent fits usize"))
}

/// A Z-basis, in row Hermite normal form, of `(Q r1 + Q r2) ∩ Z^4`.
///
/// The saturation is the integer kernel of the integer kernel of the two rows; both
/// kernels come from unimodular transforms so no factorisation of the index is needed.
pub fn hnf_rank2(r1: &[BigInt; 4], r2: &[BigInt; 4]) -> Result<[[BigInt; 4]; 2]> {
    let rows = IntMatrix::from_rows(vec![r1.to_vec(), r2.to_vec()])?;
    if rows.rank() < 2 {
        return Err(Error::DegeneratePencil);
    }
    let orth = IntMatrix::from_rows(rows.integer_kernel_basis())?;
    let sat = orth.integer_kernel_basis();
    let h = row_hnf(&sat);
    if h.len() != 2 {
        return Err(Error::TheoremViolation(format!(
            "saturation of a rank-2 lattice has rank {}",
            h.len()
        )));
    }
    let quad = |v: &Vec<BigInt>| -> [BigInt; 4] { [v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone()] };
    Ok([quad(&h[0]), quad(&h[1])])
}
