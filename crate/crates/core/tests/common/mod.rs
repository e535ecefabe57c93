//! Independent oracles shared by the integration tests. Nothing here calls the routine it
//! is used to check.

#![allow(dead_code)]

use std::collections::BTreeSet;

use num_bigint::BigInt;
use quadpencil::DiagonalPencil;
use rand::Rng;

pub fn worked() -> DiagonalPencil {
    DiagonalPencil::from_i64([1, -1, -1, 1], [1, 2, -3, 0]).unwrap()
}

pub fn definite() -> DiagonalPencil {
    DiagonalPencil::from_i64([1, 1, 1, 1], [0, 1, 2, 3]).unwrap()
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 { a.abs() } else { gcd(b, a % b) }
}

pub fn i64_minors(a: &[i64; 4], b: &[i64; 4]) -> [i64; 6] {
    let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    pairs.map(|(i, j)| a[i] * b[j] - a[j] * b[i])
}

/// A uniformly random pencil with entries in `[-r, r]`, redrawn until `accept` holds.
pub fn random_pencil<R: Rng>(rng: &mut R, r: i64, accept: impl Fn(&DiagonalPencil) -> bool) -> DiagonalPencil {
    loop {
        let a: [i64; 4] = std::array::from_fn(|_| rng.gen_range(-r..=r));
        let b: [i64; 4] = std::array::from_fn(|_| rng.gen_range(-r..=r));
        if i64_minors(&a, &b).iter().all(|&d| d == 0) {
            continue;
        }
        let c = DiagonalPencil::from_i64(a, b).unwrap();
        if accept(&c) {
            return c;
        }
    }
}

pub fn nonsingular(c: &DiagonalPencil) -> bool {
    c.is_nonsingular()
}

pub fn primitive_nonsingular(c: &DiagonalPencil) -> bool {
    c.is_nonsingular() && c.is_primitive()
}

fn small(c: &DiagonalPencil) -> ([i128; 4], [i128; 4]) {
    let conv = |v: &[BigInt; 4]| v.clone().map(|x| i128::try_from(x).expect("small coefficients"));
    (conv(c.a()), conv(c.b()))
}

/// Every primitive solution in `[-B, B]^4` whose first nonzero coordinate is positive.
pub fn naive_points(c: &DiagonalPencil, bound: i64) -> BTreeSet<[i64; 4]> {
    let (a, b) = small(c);
    let mut out = BTreeSet::new();
    let r = -bound..=bound;
    for x0 in r.clone() {
        for x1 in r.clone() {
            for x2 in r.clone() {
                for x3 in r.clone() {
                    let x = [x0, x1, x2, x3];
                    let lead = x.iter().find(|&&v| v != 0);
                    if lead.is_none_or(|&v| v < 0) {
                        continue;
                    }
                    if x.iter().fold(0, |g, &v| gcd(g, v)) != 1 {
                        continue;
                    }
                    let sq = x.map(|v| (v as i128) * (v as i128));
                    let q: i128 = (0..4).map(|t| a[t] * sq[t]).sum();
                    let rr: i128 = (0..4).map(|t| b[t] * sq[t]).sum();
                    if q == 0 && rr == 0 {
                        out.insert(x);
                    }
                }
            }
        }
    }
    out
}

fn modp(x: &BigInt, p: u64) -> u64 {
    let pb = BigInt::from(p);
    u64::try_from(((x % &pb) + &pb) % &pb).unwrap()
}

/// `#C(F_p)` by testing every point of `P³(F_p)`.
pub fn brute_fp_count(c: &DiagonalPencil, p: u64) -> u64 {
    let a = c.a().clone().map(|x| modp(&x, p));
    let b = c.b().clone().map(|x| modp(&x, p));
    let mut n = 0;
    for_each_projective(p, |x| {
        let sq = x.map(|v| v * v % p);
        let q = (0..4).map(|t| a[t] * sq[t] % p).sum::<u64>() % p;
        let r = (0..4).map(|t| b[t] * sq[t] % p).sum::<u64>() % p;
        if q == 0 && r == 0 {
            n += 1;
        }
    });
    n
}

/// Calls `f` once per point of `P³(F_p)`, normalised with leading coordinate 1.
pub fn for_each_projective(p: u64, mut f: impl FnMut([u64; 4])) {
    for lead in 0..4 {
        let free = 3 - lead;
        let total = p.pow(free as u32);
        for idx in 0..total {
            let mut x = [0u64; 4];
            x[lead] = 1;
            let mut k = idx;
            for t in lead + 1..4 {
                x[t] = k % p;
                k /= p;
            }
            f(x);
        }
    }
}

/// Arithmetic in `F_p[s]/(s² - n)` with `n` a non-residue.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Fp2 {
    pub u: u64,
    pub v: u64,
}

pub struct Fp2Field {
    pub p: u64,
    pub n: u64,
}

impl Fp2Field {
    pub fn new(p: u64) -> Self {
        let n = (2..p).find(|&n| (1..p).all(|x| x * x % p != n)).expect("odd prime has a non-residue");
        Fp2Field { p, n }
    }

    pub fn elements(&self) -> Vec<Fp2> {
        (0..self.p).flat_map(|u| (0..self.p).map(move |v| Fp2 { u, v })).collect()
    }

    pub fn add(&self, x: Fp2, y: Fp2) -> Fp2 {
        Fp2 { u: (x.u + y.u) % self.p, v: (x.v + y.v) % self.p }
    }

    pub fn mul(&self, x: Fp2, y: Fp2) -> Fp2 {
        let p = self.p;
        Fp2 { u: (x.u * y.u + self.n * (x.v * y.v % p)) % p, v: (x.u * y.v + x.v * y.u) % p }
    }

    pub fn scalar(&self, k: u64) -> Fp2 {
        Fp2 { u: k % self.p, v: 0 }
    }

    pub fn is_zero(&self, x: Fp2) -> bool {
        x.u == 0 && x.v == 0
    }
}

/// Whether the reduction of `C` mod an odd prime `p` has a singular point over `F_{p²}`:
/// a point of `C` where the gradients `(a_i x_i)` and `(b_i x_i)` are proportional.
///
/// Singularity forces `d_ij x_i x_j = 0` for all `i < j`. Whenever a singular point exists,
/// one exists with at most two nonzero coordinates (set a third to zero on the conic that
/// remains), and that needs at most one square root, so searching `F_{p²}` suffices.
pub fn has_singular_point_fp2(c: &DiagonalPencil, p: u64) -> bool {
    let a = c.a().clone().map(|x| modp(&x, p));
    let b = c.b().clone().map(|x| modp(&x, p));
    let f = Fp2Field::new(p);
    let elems = f.elements();
    let zero = f.scalar(0);
    let one = f.scalar(1);
    let check = |x: [Fp2; 4]| -> bool {
        let sq = x.map(|v| f.mul(v, v));
        let form = |co: &[u64; 4]| (0..4).fold(zero, |acc, t| f.add(acc, f.mul(f.scalar(co[t]), sq[t])));
        if !f.is_zero(form(&a)) || !f.is_zero(form(&b)) {
            return false;
        }
        // d_ij x_i x_j = 0 for all i < j
        (0..4).all(|i| {
            (i + 1..4).all(|j| {
                let d = (a[i] * b[j] % p + p * p - a[j] * b[i] % p) % p;
                f.is_zero(f.mul(f.scalar(d), f.mul(x[i], x[j])))
            })
        })
    };
    // support of size one or two, leading coordinate 1
    for i in 0..4 {
        let mut x = [zero; 4];
        x[i] = one;
        if check(x) {
            return true;
        }
        for j in i + 1..4 {
            for &e in &elems {
                if f.is_zero(e) {
                    continue;
                }
                let mut x = [zero; 4];
                x[i] = one;
                x[j] = e;
                if check(x) {
                    return true;
                }
            }
        }
    }
    false
}

/// Whether some point of `C(F_p)` has proportional gradient rows.
pub fn has_singular_point_fp(c: &DiagonalPencil, p: u64) -> bool {
    let a = c.a().clone().map(|x| modp(&x, p));
    let b = c.b().clone().map(|x| modp(&x, p));
    let mut found = false;
    for_each_projective(p, |x| {
        if found {
            return;
        }
        let sq = x.map(|v| v * v % p);
        let q = (0..4).map(|t| a[t] * sq[t] % p).sum::<u64>() % p;
        let r = (0..4).map(|t| b[t] * sq[t] % p).sum::<u64>() % p;
        if q != 0 || r != 0 {
            return;
        }
        let ga = (0..4).map(|t| a[t] * x[t] % p).collect::<Vec<_>>();
        let gb = (0..4).map(|t| b[t] * x[t] % p).collect::<Vec<_>>();
        found = (0..4).all(|i| (0..4).all(|j| (ga[i] * gb[j] + p * p - ga[j] * gb[i]) % p == 0));
    });
    found
}

/// Determinant by cofactor expansion along the first row.
pub fn cofactor_det(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 1 {
        return m[0][0];
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i64>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &v)| v).collect())
                .collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] * cofactor_det(&minor)
        })
        .sum()
}

/// Determinant over Q by plain Gaussian elimination on rationals.
pub fn rational_det(m: &[Vec<BigInt>]) -> BigInt {
    use num_rational::BigRational;
    use num_traits::{One, Zero};
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> =
        m.iter().map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return BigInt::zero();
        };
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        det *= a[col][col].clone();
        for r in col + 1..n {
            let f = &a[r][col] / &a[col][col];
            for c in col..n {
                let t = &f * &a[col][c];
                a[r][c] -= t;
            }
        }
    }
    assert!(det.is_integer());
    det.to_integer()
}

/// Elliptic-curve style count on `y² = x³ + A x + B` by squaring every `y`.
pub fn brute_weierstrass_count(a: &BigInt, b: &BigInt, p: u64) -> u64 {
    let (a, b) = (modp(a, p), modp(b, p));
    let mut squares = vec![0u64; p as usize];
    for y in 0..p {
        squares[(y * y % p) as usize] += 1;
    }
    1 + (0..p).map(|x| squares[((x * x % p * x + a * x + b) % p) as usize]).sum::<u64>()
}
