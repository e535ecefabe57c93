//! The degree-2k monomial basis of the coordinate ring slice `S_2k`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::One;

use crate::curve::DiagonalPencil;
use crate::error::{Error, Result};
use crate::kernel::{binomial, IntMatrix};

/// `8k` monomials of degree `2k`, written in a relabelled coordinate frame.
///
/// `exponents[j][t]` is the power of coordinate `frame[t]`. In the frame the maximal minor
/// sits at `(2, 3)`, so every exponent quadruple has `e2 <= 1` and `e3 <= 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialBasis {
    k: usize,
    exponents: Vec<[u32; 4]>,
    frame: [usize; 4],
}

impl MonomialBasis {
    /// The eight groups, in order, with sizes `k+1, k, k, k, k, k, k, k-1`.
    pub fn new(k: usize, frame: [usize; 4]) -> Result<Self> {
        if k == 0 {
            return Err(Error::Argument("basis degree parameter k must be positive".into()));
        }
        let mut seen = [false; 4];
        for &t in &frame {
            if t > 3 || std::mem::replace(&mut seen[t], true) {
                return Err(Error::Argument(format!("{frame:?} is not a permutation of 0..4")));
            }
        }
        let k32 = k as u32;
        let mut exponents = Vec::with_capacity(8 * k);
        // x0^(2k-2t) x1^(2t)
        exponents.extend((0..=k32).map(|t| [2 * k32 - 2 * t, 2 * t, 0, 0]));
        // x0^(2k-1-2t) x1^(2t+1)
        exponents.extend((0..k32).map(|t| [2 * k32 - 1 - 2 * t, 2 * t + 1, 0, 0]));
        // (x0^(2k-1-2t) x1^(2t), x0^(2k-2-2t) x1^(2t+1)) times x2, then times x3
        for tail in [[1, 0], [0, 1]] {
            exponents.extend((0..k32).map(|t| [2 * k32 - 1 - 2 * t, 2 * t, tail[0], tail[1]]));
            exponents.extend((0..k32).map(|t| [2 * k32 - 2 - 2 * t, 2 * t + 1, tail[0], tail[1]]));
        }
        // x0^(2k-2-2t) x1^(2t) x2 x3
        exponents.extend((0..k32).map(|t| [2 * k32 - 2 - 2 * t, 2 * t, 1, 1]));
        // x0^(2k-3-2t) x1^(2t+1) x2 x3
        exponents.extend((0..k32.saturating_sub(1)).map(|t| [2 * k32 - 3 - 2 * t, 2 * t + 1, 1, 1]));
        debug_assert_eq!(exponents.len(), 8 * k);
        Ok(MonomialBasis { k, exponents, frame })
    }

    pub fn group_sizes(k: usize) -> [usize; 8] {
        [k + 1, k, k, k, k, k, k, k - 1]
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    /// Exponents in the relabelled frame.
    pub fn exponents(&self) -> &[[u32; 4]] {
        &self.exponents
    }

    pub fn frame(&self) -> [usize; 4] {
        self.frame
    }

    /// Exponents indexed by the original coordinates.
    pub fn original_exponents(&self) -> Vec<[u32; 4]> {
        self.exponents
            .iter()
            .map(|e| {
                let mut o = [0; 4];
                for t in 0..4 {
                    o[self.frame[t]] = e[t];
                }
                o
            })
            .collect()
    }

    /// Values of all basis monomials at an integer point given in original coordinates.
    pub fn eval_row(&self, x: &[BigInt; 4]) -> Vec<BigInt> {
        self.original_exponents().iter().map(|e| eval_monomial(e, x)).collect()
    }
}

pub(crate) fn eval_monomial(e: &[u32; 4], x: &[BigInt; 4]) -> BigInt {
    e.iter().zip(x).fold(BigInt::one(), |acc, (&p, v)| acc * num_traits::pow(v.clone(), p as usize))
}

/// The basis attached to a nonsingular pencil, in its maximal-minor frame.
pub fn basis_s2k(c: &DiagonalPencil, k: usize) -> Result<MonomialBasis> {
    c.require_nonsingular()?;
    MonomialBasis::new(k, c.max_minor_frame())
}

/// `dim S_k` from the Koszul resolution of `(q, r)`: `C(k+3,3) - 2 C(k+1,3) + C(k-1,3)`.
pub fn dim_sk(k: u64) -> u64 {
    binomial(k + 3, 3) + binomial(k.saturating_sub(1), 3) - 2 * binomial(k + 1, 3)
}

/// All exponent quadruples of total degree `deg`, lexicographically descending.
pub fn monomials(deg: u32) -> Vec<[u32; 4]> {
    let mut out = Vec::new();
    for e0 in (0..=deg).rev() {
        for e1 in (0..=deg - e0).rev() {
            for e2 in (0..=deg - e0 - e1).rev() {
                out.push([e0, e1, e2, deg - e0 - e1 - e2]);
            }
        }
    }
    out
}

pub fn verify_basis_independence(c: &DiagonalPencil, k: usize) -> bool {
    basis_s2k(c, k).is_ok_and(|b| verify_independence(c, &b))
}

/// Whether the basis monomials are independent modulo the degree-`2k` part of `(q, r)`.
///
/// That slice is spanned by `m·q, m·r` over monomials `m` of degree `2k - 2`; the test is
/// `rank[ideal; basis] - rank[ideal] == 8k`.
pub fn verify_independence(c: &DiagonalPencil, basis: &MonomialBasis) -> bool {
    let deg = 2 * basis.k() as u32;
    let cols = monomials(deg);
    let index: HashMap<[u32; 4], usize> = cols.iter().enumerate().map(|(i, e)| (*e, i)).collect();
    let mut ideal: Vec<Vec<BigInt>> = Vec::new();
    for m in monomials(deg - 2) {
        for coeffs in [c.a(), c.b()] {
            let mut row = vec![BigInt::from(0); cols.len()];
            for t in 0..4 {
                let mut e = m;
                e[t] += 2;
                row[index[&e]] += &coeffs[t];
            }
            ideal.push(row);
        }
    }
    let mut all = ideal.clone();
    for e in basis.original_exponents() {
        let mut row = vec![BigInt::from(0); cols.len()];
        row[index[&e]] = BigInt::one();
        all.push(row);
    }
    let rank = |rows: Vec<Vec<BigInt>>| IntMatrix::from_rows(rows).map_or(0, |m| m.rank());
    rank(all) - rank(ideal) == basis.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn worked() -> DiagonalPencil {
        DiagonalPencil::from_i64([1, -1, -1, 1], [1, 2, -3, 0]).unwrap()
    }

    #[test]
    fn koszul_dimensions() {
        assert_eq!(dim_sk(1), 4);
        assert_eq!(dim_sk(2), 8);
        assert_eq!(dim_sk(5), 20);
    }

    #[test]
    fn k1_basis_matches_display() {
        let b = MonomialBasis::new(1, [0, 1, 2, 3]).unwrap();
        let want = [
            [2, 0, 0, 0],
            [0, 2, 0, 0],
            [1, 1, 0, 0],
            [1, 0, 1, 0],
            [0, 1, 1, 0],
            [1, 0, 0, 1],
            [0, 1, 0, 1],
            [0, 0, 1, 1],
        ];
        assert_eq!(b.exponents(), &want);
        assert_eq!(MonomialBasis::group_sizes(1), [2, 1, 1, 1, 1, 1, 1, 0]);
    }

    #[test]
    fn k2_basis_shape() {
        let b = MonomialBasis::new(2, [0, 1, 2, 3]).unwrap();
        assert_eq!(b.len(), 16);
        assert_eq!(MonomialBasis::group_sizes(2), [3, 2, 2, 2, 2, 2, 2, 1]);
        assert_eq!(b.exponents()[..3], [[4, 0, 0, 0], [2, 2, 0, 0], [0, 4, 0, 0]]);
        assert_eq!(b.exponents()[15], [1, 1, 1, 1]);
        for k in 1..8 {
            let b = MonomialBasis::new(k, [3, 2, 1, 0]).unwrap();
            assert_eq!(b.len(), 8 * k);
            for e in b.exponents() {
                assert_eq!(e.iter().sum::<u32>(), 2 * k as u32);
                assert!(e[2] <= 1 && e[3] <= 1);
            }
            let mut sorted = b.exponents().to_vec();
            sorted.sort();
            sorted.dedup();
            assert_eq!(sorted.len(), 8 * k, "duplicate monomial at k = {k}");
        }
    }

    #[test]
    fn frame_relabels_coordinates() {
        let b = basis_s2k(&worked(), 1).unwrap();
        assert_eq!(b.frame(), [0, 3, 1, 2]);
        // x1^2 of the frame is the original x3^2
        assert_eq!(b.original_exponents()[1], [0, 0, 0, 2]);
        assert!(MonomialBasis::new(1, [0, 0, 1, 2]).is_err());
    }

    #[test]
    fn independence_on_worked_curve() {
        assert!(verify_basis_independence(&worked(), 1));
        assert!(verify_basis_independence(&worked(), 2));
    }

    #[test]
    fn independence_fails_when_frame_minor_vanishes() {
        // d01 = 0, and the frame sends (0, 1) to (2, 3)
        let c = DiagonalPencil::from_i64([1, 1, 1, 2], [1, 1, 2, 1]).unwrap();
        let b = MonomialBasis::new(1, [2, 3, 0, 1]).unwrap();
        assert!(!verify_independence(&c, &b));
    }

    #[test]
    fn monomial_count() {
        assert_eq!(monomials(2).len(), 10);
        assert_eq!(monomials(4).len(), 35);
    }
}
