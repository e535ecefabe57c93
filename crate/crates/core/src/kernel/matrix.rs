//! Dense integer matrices with exact, fraction-free elimination.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

use super::gcd_vec;

/// Row-major rectangular matrix of big integers, both dimensions positive.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Argument(format!(
                "matrix dimensions must be positive, got {rows}x{cols}"
            )));
        }
        Ok(IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] })
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if n == 0 || m == 0 {
            return Err(Error::Argument("matrix must have at least one row and column".into()));
        }
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::Argument("matrix rows have differing lengths".into()));
        }
        Ok(IntMatrix { rows: n, cols: m, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect())
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n, n)?;
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// The submatrix on the given row and column indices, in the order given.
    pub fn select(&self, row_idx: &[usize], col_idx: &[usize]) -> Result<Self> {
        let rows = row_idx
            .iter()
            .map(|&i| col_idx.iter().map(|&j| self.get(i, j).clone()).collect())
            .collect();
        Self::from_rows(rows)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.cols {
            return Err(Error::Argument(format!(
                "vector of length {} does not match {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Exact determinant by Bareiss fraction-free elimination.
    pub fn det(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::Argument(format!(
                "determinant of non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut a = self.to_rows();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            let Some(piv) = (k..n).find(|&i| !a[i][k].is_zero()) else {
                return Ok(BigInt::zero());
            };
            if piv != k {
                a.swap(piv, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                    a[i][j] = exact_div(num, &prev);
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        Ok(sign * &a[n - 1][n - 1])
    }

    /// Rank over Q, by fraction-free row echelon reduction.
    pub fn rank(&self) -> usize {
        let mut a = self.to_rows();
        let (m, n) = (self.rows, self.cols);
        let mut prev = BigInt::one();
        let mut r = 0;
        for c in 0..n {
            if r == m {
                break;
            }
            let Some(piv) = (r..m).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(piv, r);
            for i in r + 1..m {
                for j in c + 1..n {
                    let num = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                    a[i][j] = exact_div(num, &prev);
                }
                a[i][c] = BigInt::zero();
            }
            prev = a[r][c].clone();
            r += 1;
        }
        r
    }

    /// A primitive integer vector `v != 0` with `M v = 0`, or `None` at full column rank.
    ///
    /// The first free column of the reduced row echelon form is used, and the result is
    /// canonicalised: content 1, first nonzero entry positive.
    pub fn kernel_vector(&self) -> Option<Vec<BigInt>> {
        let (rref, pivots) = self.rref();
        let free = (0..self.cols).find(|c| !pivots.contains(c))?;
        let mut v = vec![BigRational::zero(); self.cols];
        v[free] = BigRational::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -rref[r][free].clone();
        }
        let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
        Some(canonical_primitive(ints))
    }

    /// Reduced row echelon form over Q together with the pivot columns.
    fn rref(&self) -> (Vec<Vec<BigRational>>, Vec<usize>) {
        let mut a: Vec<Vec<BigRational>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| BigRational::from_integer(x.clone())).collect())
            .collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(piv) = (r..self.rows).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(piv, r);
            let inv = a[r][c].recip();
            for x in a[r].iter_mut() {
                *x *= &inv;
            }
            for i in 0..self.rows {
                if i != r && !a[i][c].is_zero() {
                    let f = a[i][c].clone();
                    for j in c..self.cols {
                        let t = &f * &a[r][j];
                        a[i][j] -= t;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    /// A Z-basis of the integer right kernel `{v in Z^n : M v = 0}`.
    ///
    /// Computed by unimodular column operations `M U = [H | 0]`; the trailing columns of
    /// `U` span the kernel lattice, which is therefore saturated in Z^n.
    pub fn integer_kernel_basis(&self) -> Vec<Vec<BigInt>> {
        let n = self.cols;
        let mut a = self.to_rows();
        let mut u: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
        let mut r = 0;
        for row in 0..self.rows {
            if r == n {
                break;
            }
            for j in r + 1..n {
                if a[row][j].is_zero() {
                    continue;
                }
                let x = a[row][r].clone();
                let y = a[row][j].clone();
                let e = x.extended_gcd(&y);
                let (xg, yg) = (&x / &e.gcd, &y / &e.gcd);
                // columns (r, j) <- (s*c_r + t*c_j, xg*c_j - yg*c_r); determinant 1
                for mat in [&mut a, &mut u] {
                    for line in mat.iter_mut() {
                        let cr = line[r].clone();
                        let cj = line[j].clone();
                        line[r] = &e.x * &cr + &e.y * &cj;
                        line[j] = &xg * &cj - &yg * &cr;
                    }
                }
            }
            if !a[row][r].is_zero() {
                r += 1;
            }
        }
        (r..n).map(|c| u.iter().map(|line| line[c].clone()).collect()).collect()
    }
}

/// Row Hermite normal form of an integer row list (zero rows dropped).
///
/// Pivots are positive and entries above each pivot are reduced into `[0, pivot)`.
pub fn row_hnf(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    let Some(ncols) = a.first().map(Vec::len) else {
        return a;
    };
    let mut r = 0;
    for c in 0..ncols {
        if r == a.len() {
            break;
        }
        for i in r + 1..a.len() {
            if a[i][c].is_zero() {
                continue;
            }
            let x = a[r][c].clone();
            let y = a[i][c].clone();
            let e = x.extended_gcd(&y);
            let (xg, yg) = (&x / &e.gcd, &y / &e.gcd);
            let (top, bot) = (a[r].clone(), a[i].clone());
            for j in 0..ncols {
                a[r][j] = &e.x * &top[j] + &e.y * &bot[j];
                a[i][j] = &xg * &bot[j] - &yg * &top[j];
            }
        }
        if a[r][c].is_zero() {
            continue;
        }
        if a[r][c].is_negative() {
            for x in a[r].iter_mut() {
                *x = -x.clone();
            }
        }
        for i in 0..r {
            let q = a[i][c].div_floor(&a[r][c]);
            if !q.is_zero() {
                let pivot_row = a[r].clone();
                for (x, p) in a[i].iter_mut().zip(&pivot_row) {
                    *x -= &q * p;
                }
            }
        }
        r += 1;
    }
    a.truncate(r);
    a
}

/// Divides by content and makes the first nonzero entry positive. Zero vectors pass through.
pub fn canonical_primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = gcd_vec(&v).unwrap_or_else(|_| BigInt::zero());
    if g.is_zero() {
        return v;
    }
    let flip = v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    for x in v.iter_mut() {
        *x = &*x / &g;
        if flip {
            *x = -&*x;
        }
    }
    v
}

fn exact_div(num: BigInt, den: &BigInt) -> BigInt {
    let (q, rem) = num.div_rem(den);
    debug_assert!(rem.is_zero(), "fraction-free step left a remainder");
    q
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries((0..self.rows).map(|i| self.row(i))).finish()
    }
}
