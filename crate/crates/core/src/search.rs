//! Scans for small diagonal pencils that carry many rational points of small height.
//!
//! A diagonal pencil passes through `x` exactly when both coefficient rows are orthogonal to
//! `(x0², x1², x2², x3²)`. Two such square vectors therefore cut out a plane of forms; its
//! integer points form a saturated rank-2 lattice whose reduced basis is a primitive pencil.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::curve::DiagonalPencil;
use crate::error::{Error, Result};
use crate::kernel::IntMatrix;
use crate::points::{enumerate_with, EnumerateOptions, ProjectivePoint};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    /// Coefficients of both forms must lie in `[-coeff_box, coeff_box]`.
    pub coeff_box: i64,
    /// Seed points have coordinates in `[0, coord_limit]`.
    pub coord_limit: u32,
    /// Height bound for counting points on each candidate.
    pub height_bound: u64,
    pub min_points: usize,
    /// Keep at most this many candidates, best first.
    pub max_curves: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { coeff_box: 10, coord_limit: 3, height_bound: 20, min_points: 8, max_curves: 50 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub pencil: DiagonalPencil,
    pub points: Vec<ProjectivePoint>,
}

type Vec4 = [i128; 4];

fn dot(u: &Vec4, v: &Vec4) -> i128 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

/// Gauss-Lagrange reduction of a rank-2 lattice basis.
fn lagrange(mut u: Vec4, mut v: Vec4) -> (Vec4, Vec4) {
    if dot(&u, &u) > dot(&v, &v) {
        std::mem::swap(&mut u, &mut v);
    }
    loop {
        let nu = dot(&u, &u);
        let m = Integer::div_floor(&(2 * dot(&u, &v) + nu), &(2 * nu));
        for t in 0..4 {
            v[t] -= m * u[t];
        }
        if dot(&v, &v) >= nu {
            return (u, v);
        }
        std::mem::swap(&mut u, &mut v);
    }
}

fn square_vectors(limit: u32) -> Vec<Vec4> {
    let l = limit as i128;
    (0..4)
        .map(|_| 0..=l)
        .multi_cartesian_product()
        .filter(|x| x.iter().fold(0i128, |g, &v| g.gcd(&v)) == 1)
        .map(|x| [x[0] * x[0], x[1] * x[1], x[2] * x[2], x[3] * x[3]])
        .collect()
}

/// The reduced primitive pencil through two square vectors, if it fits the box.
fn pencil_through(x: &Vec4, y: &Vec4, coeff_box: i64) -> Option<DiagonalPencil> {
    let rows = [x, y].map(|v| v.iter().map(|&t| BigInt::from(t)).collect::<Vec<_>>());
    let m = IntMatrix::from_rows(rows.to_vec()).ok()?;
    let ker = m.integer_kernel_basis();
    if ker.len() != 2 {
        return None;
    }
    let conv = |v: &Vec<BigInt>| -> Option<Vec4> {
        Some([v[0].to_i128()?, v[1].to_i128()?, v[2].to_i128()?, v[3].to_i128()?])
    };
    let (u, v) = lagrange(conv(&ker[0])?, conv(&ker[1])?);
    let fits = |w: &Vec4| w.iter().all(|&t| t.abs() <= coeff_box as i128);
    if !fits(&u) || !fits(&v) {
        return None;
    }
    let c = DiagonalPencil::new(u.map(BigInt::from), v.map(BigInt::from)).ok()?;
    c.is_nonsingular().then_some(c)
}

/// The least normalized sixtuple over all 24 coordinate permutations: pencils that differ only
/// by relabelling coordinates share a key.
fn orbit_key(c: &DiagonalPencil) -> [BigInt; 6] {
    (0..4)
        .permutations(4)
        .map(|perm| {
            let a = std::array::from_fn(|i| c.a()[perm[i]].clone());
            let b = std::array::from_fn(|i| c.b()[perm[i]].clone());
            DiagonalPencil::new(a, b).expect("permutation keeps rank").plucker().normalized()
        })
        .min()
        .expect("24 permutations")
}

/// Candidates sorted by point count (descending), then by identifier.
///
/// One pencil is kept per coordinate-permutation orbit. The output does not depend on the
/// number of worker threads.
pub fn search_curves(cfg: &SearchConfig, opts: &EnumerateOptions) -> Result<Vec<Candidate>> {
    if cfg.coeff_box < 1 || cfg.coord_limit < 1 || cfg.height_bound < 1 {
        return Err(Error::Argument("search box, coordinate limit and height bound must be positive".into()));
    }
    let seeds = square_vectors(cfg.coord_limit);
    let pairs: Vec<(usize, usize)> = (0..seeds.len()).tuple_combinations().collect();
    let pencils: BTreeMap<_, DiagonalPencil> = pairs
        .par_iter()
        .filter_map(|&(i, j)| pencil_through(&seeds[i], &seeds[j], cfg.coeff_box))
        .map(|c| (orbit_key(&c), c))
        .collect::<Vec<_>>()
        .into_iter()
        // keep the smallest representative per orbit so the choice is order independent
        .sorted_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.id().cmp(&b.1.id())))
        .dedup_by(|a, b| a.0 == b.0)
        .collect();
    log::info!("search: {} seed pairs gave {} distinct pencils", pairs.len(), pencils.len());
    let bound = BigInt::from(cfg.height_bound);
    let mut found: Vec<Candidate> = pencils
        .into_values()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|pencil| {
            let points = enumerate_with(&pencil, &bound, opts)?;
            Ok(Candidate { pencil, points })
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|c| c.points.len() >= cfg.min_points)
        .collect();
    found.sort_by(|a, b| b.points.len().cmp(&a.points.len()).then_with(|| a.pencil.id().cmp(&b.pencil.id())));
    found.truncate(cfg.max_curves);
    Ok(found)
}
