//! The pencil `q = r = 0` of two diagonal quadrics in P³.
//!
//! A pencil is stored as its two coefficient rows `a` and `b`. Everything here depends only
//! on the Plücker sixtuple `d_ij = a_i b_j - a_j b_i` of the plane they span, except for the
//! finite-field data, which is always taken from the primitive (saturated) model.
//!
//! Reduction type: a prime is treated as good iff it is odd and divides none of the minors
//! of the primitive model. Primes dividing 6·D but no minor (only 3 can occur) are therefore
//! good here; the finite-field counts stay correct at 3 because the curve really is smooth
//! there, but the short Weierstrass model of the Jacobian is not, see
//! [`crate::points::count_jacobian_fp`].

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::kernel::{gcd_vec, hnf_rank2, ln_abs_rational, primes_in};

/// Index pairs of the sixtuple, in storage order.
pub const MINOR_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Position of `(i, j)` (in either order) within [`MINOR_PAIRS`].
pub fn minor_index(i: usize, j: usize) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    MINOR_PAIRS.iter().position(|&p| p == (i, j)).expect("distinct indices below 4")
}

/// The two indices of `{0,1,2,3}` not in `{i, j}`, ascending.
pub fn complement(i: usize, j: usize) -> (usize, usize) {
    let mut rest = (0..4).filter(|&t| t != i && t != j);
    (rest.next().unwrap(), rest.next().unwrap())
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DiagonalPencil {
    a: [BigInt; 4],
    b: [BigInt; 4],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PluckerSixtuple {
    pub d: [BigInt; 6],
    pub content: BigInt,
    pub height: BigInt,
}

impl PluckerSixtuple {
    pub fn get(&self, i: usize, j: usize) -> BigInt {
        let v = &self.d[minor_index(i, j)];
        if i < j {
            v.clone()
        } else {
            -v
        }
    }

    pub fn product(&self) -> BigInt {
        self.d.iter().product()
    }

    /// Sixtuple divided by its content with the first nonzero entry made positive.
    pub fn normalized(&self) -> [BigInt; 6] {
        let sign = if self.d.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        self.d.clone().map(|x| x / &self.content * &sign)
    }
}

/// Jacobian data of the pencil: the binary quartic `∏ (λ a_i + μ b_i)`, its invariants,
/// and the short model `y² = x³ + A x + B` with `A = -27 I`, `B = -27 J`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeierstrassModel {
    /// `(e4, e3, e2, e1, e0)`, coefficient of `λ^t μ^(4-t)` listed from `t = 4` down.
    pub quartic: [BigInt; 5],
    pub inv_i: BigInt,
    pub inv_j: BigInt,
    pub a: BigInt,
    pub b: BigInt,
    pub disc: BigRational,
}

/// Heuristic rank estimate `c·log|D| + c0`; not the rank.
#[derive(Debug, Clone, PartialEq)]
pub struct RankEstimate {
    pub value: f64,
    pub c: f64,
    pub c0: f64,
    /// Set when `c <= 1/(2 log 2)`, outside the range where the estimate is claimed.
    pub warning: Option<String>,
}

pub fn rank_estimate_threshold() -> f64 {
    1.0 / (2.0 * std::f64::consts::LN_2)
}

/// `c·log|D| + c0`, or just `c0` when `|D| <= 1`.
pub fn rank_estimate(disc: &BigRational, c: f64, c0: f64) -> RankEstimate {
    let warning = (c <= rank_estimate_threshold()).then(|| {
        let msg = format!(
            "rank-estimate constant c = {c} does not exceed 1/(2 log 2) ≈ {:.6}",
            rank_estimate_threshold()
        );
        log::warn!("{msg}");
        msg
    });
    let abs = disc.abs();
    let value = if abs <= BigRational::one() { c0 } else { c * ln_abs_rational(&abs) + c0 };
    RankEstimate { value, c, c0, warning }
}

impl DiagonalPencil {
    /// Fails with [`Error::DegeneratePencil`] when the rows are proportional.
    pub fn new(a: [BigInt; 4], b: [BigInt; 4]) -> Result<Self> {
        let p = DiagonalPencil { a, b };
        if p.minors().iter().all(Zero::is_zero) {
            return Err(Error::DegeneratePencil);
        }
        Ok(p)
    }

    pub fn from_i64(a: [i64; 4], b: [i64; 4]) -> Result<Self> {
        Self::new(a.map(BigInt::from), b.map(BigInt::from))
    }

    pub fn a(&self) -> &[BigInt; 4] {
        &self.a
    }

    pub fn b(&self) -> &[BigInt; 4] {
        &self.b
    }

    fn minors(&self) -> [BigInt; 6] {
        MINOR_PAIRS.map(|(i, j)| &self.a[i] * &self.b[j] - &self.a[j] * &self.b[i])
    }

    pub fn plucker(&self) -> PluckerSixtuple {
        let d = self.minors();
        let content = gcd_vec(&d).expect("six entries");
        let max = d.iter().map(|x| x.abs()).max().expect("six entries");
        let height = max / &content;
        PluckerSixtuple { d, content, height }
    }

    /// `H(C) = max |d_ij| / gcd(d_ij)`.
    pub fn height(&self) -> BigInt {
        self.plucker().height
    }

    pub fn is_primitive(&self) -> bool {
        self.plucker().content.is_one()
    }

    /// A primitive pencil spanning the same plane of forms, in Hermite normal form.
    pub fn primitive_reduce(&self) -> DiagonalPencil {
        let [a, b] = hnf_rank2(&self.a, &self.b).expect("validated pencil has rank 2");
        DiagonalPencil { a, b }
    }

    pub fn is_nonsingular(&self) -> bool {
        self.minors().iter().all(|x| !x.is_zero())
    }

    pub(crate) fn require_nonsingular(&self) -> Result<()> {
        if self.is_nonsingular() {
            Ok(())
        } else {
            Err(Error::SingularCurve)
        }
    }

    pub fn q(&self, x: &[BigInt; 4]) -> BigInt {
        self.a.iter().zip(x).map(|(c, v)| c * v * v).sum()
    }

    pub fn r(&self, x: &[BigInt; 4]) -> BigInt {
        self.b.iter().zip(x).map(|(c, v)| c * v * v).sum()
    }

    pub fn contains(&self, x: &[BigInt; 4]) -> bool {
        self.q(x).is_zero() && self.r(x).is_zero()
    }

    pub fn weierstrass(&self) -> Result<WeierstrassModel> {
        self.require_nonsingular()?;
        // multiply out the linear factors λ a_i + μ b_i; poly[t] is the coefficient of λ^(4-t) μ^t
        let mut poly = vec![BigInt::one()];
        for i in 0..4 {
            let mut next = vec![BigInt::zero(); poly.len() + 1];
            for (t, c) in poly.iter().enumerate() {
                next[t] += c * &self.a[i];
                next[t + 1] += c * &self.b[i];
            }
            poly = next;
        }
        let [e4, e3, e2, e1, e0]: [BigInt; 5] = poly.try_into().expect("degree four");
        let inv_i = BigInt::from(12) * &e4 * &e0 - BigInt::from(3) * &e3 * &e1 + &e2 * &e2;
        let inv_j = BigInt::from(72) * &e4 * &e2 * &e0 + BigInt::from(9) * &e3 * &e2 * &e1
            - BigInt::from(27) * &e4 * &e1 * &e1
            - BigInt::from(27) * &e3 * &e3 * &e0
            - BigInt::from(2) * &e2 * &e2 * &e2;
        let prod = self.plucker().product();
        let lhs = BigInt::from(4) * &inv_i * &inv_i * &inv_i - &inv_j * &inv_j;
        if lhs != BigInt::from(27) * &prod * &prod {
            return Err(Error::TheoremViolation(
                "4I^3 - J^2 differs from 27 (prod d_ij)^2".into(),
            ));
        }
        Ok(WeierstrassModel {
            a: BigInt::from(-27) * &inv_i,
            b: BigInt::from(-27) * &inv_j,
            quartic: [e4, e3, e2, e1, e0],
            inv_i,
            inv_j,
            disc: self.discriminant()?,
        })
    }

    /// `D = 2^-8 ∏_{i≠j} d_ij = (∏_{i<j} d_ij)² / 256`.
    pub fn discriminant(&self) -> Result<BigRational> {
        self.require_nonsingular()?;
        let prod = self.plucker().product();
        Ok(BigRational::new(&prod * &prod, BigInt::from(256)))
    }

    /// Odd primes dividing no minor of the primitive model.
    pub fn is_good_prime(&self, p: u64) -> bool {
        self.good_prime_test()(p)
    }

    /// The good-reduction predicate with the primitive model computed once.
    pub fn good_prime_test(&self) -> impl Fn(u64) -> bool {
        let prim = self.primitive_reduce().minors();
        move |p| {
            if p == 2 || !crate::kernel::is_prime(p) {
                return false;
            }
            let pb = BigInt::from(p);
            prim.iter().all(|d| !(d % &pb).is_zero())
        }
    }

    /// Ascending good primes `<= limit`.
    pub fn good_primes(&self, limit: u64) -> Vec<u64> {
        let good = self.good_prime_test();
        primes_in(2, limit).into_iter().filter(|&p| good(p)).collect()
    }

    /// Bad primes of a nonsingular pencil: 2 and the primes dividing the primitive minors.
    pub fn bad_primes(&self) -> Result<Vec<BigInt>> {
        self.require_nonsingular()?;
        let mut out = vec![BigInt::from(2)];
        for d in self.primitive_reduce().minors() {
            let n = d.abs();
            let Some(n) = n.to_u64() else {
                return Err(Error::Domain(format!("cannot factor minor {n} beyond 64 bits")));
            };
            for (p, _) in crate::kernel::factor_u64(n) {
                out.push(BigInt::from(p));
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }

    /// Coordinate relabelling putting the first (lexicographic) maximal minor at `(2, 3)`.
    ///
    /// `frame[t]` is the original index of the coordinate used in position `t`; positions 0
    /// and 1 get the two remaining indices in ascending order.
    pub fn max_minor_frame(&self) -> [usize; 4] {
        let d = self.minors();
        let best = (0..6).fold(0, |best, t| if d[t].abs() > d[best].abs() { t } else { best });
        let (i, j) = MINOR_PAIRS[best];
        let (k, l) = complement(i, j);
        [k, l, i, j]
    }

    pub fn rank_estimate(&self, c: f64, c0: f64) -> Result<RankEstimate> {
        Ok(rank_estimate(&self.discriminant()?, c, c0))
    }

    /// A compact identifier `a0,a1,a2,a3;b0,b1,b2,b3`.
    pub fn id(&self) -> String {
        let join = |v: &[BigInt; 4]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
        format!("{};{}", join(&self.a), join(&self.b))
    }
}

impl fmt::Debug for DiagonalPencil {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DiagonalPencil({})", self.id())
    }
}
