//! Command-line driver for `quadpencil`. [`run`] does the work; the binary only maps its
//! result to stdout, stderr and an exit code.

pub mod args;
pub mod input;
pub mod report;

use std::fmt;

use num_bigint::BigInt;
use quadpencil::bounds::{bound_table, BoundParams};
use quadpencil::detmethod::{
    auxiliary_form, bezout_class_bound, class_divisibility, dm_upper_bound, eval_matrix, hadamard_certificate,
    height_divisibility, DivisibilityCertificate,
};
use quadpencil::kernel::primes_in;
use quadpencil::points::{
    count_fp, count_jacobian_fp, enumerate_with, hasse_check, partition_classes, EnumerateOptions,
    DEFAULT_MEMORY_BUDGET,
};
use quadpencil::search::{search_curves, SearchConfig};
use quadpencil::{DiagonalPencil, Error};

use args::{Cli, Command, Format, RunArgs};
use input::{parse_bound, parse_curve, parse_rational};
use report::*;

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or unreadable input.
    Usage(String),
    Io(String),
    Core(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Io(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl CliError {
    /// 1 degenerate or bad input, 2 singular, 3 bad prime, 4 resource, 5 internal inconsistency.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Core(e) => match e {
                Error::DegeneratePencil | Error::Argument(_) | Error::Domain(_) => 1,
                Error::SingularCurve => 2,
                Error::BadPrime { .. } => 3,
                Error::Resource { .. } => 4,
                Error::TheoremViolation(_) => 5,
            },
        }
    }
}

fn options(run: &RunArgs) -> EnumerateOptions {
    let default = EnumerateOptions::default();
    EnumerateOptions {
        workers: run.workers.unwrap_or(default.workers).max(1),
        memory_budget: run.memory_budget.unwrap_or(DEFAULT_MEMORY_BUDGET),
    }
}

fn strings<const N: usize>(v: &[BigInt; N]) -> [String; N] {
    std::array::from_fn(|i| v[i].to_string())
}

fn curve_json(c: &DiagonalPencil) -> CurveJson {
    CurveJson { a: strings(c.a()), b: strings(c.b()) }
}

fn certificate_json(c: &DivisibilityCertificate) -> CertificateJson {
    CertificateJson {
        kind: c.kind.as_str().into(),
        base: c.base.to_string(),
        required: c.required,
        observed: c.observed.to_string(),
        verified: c.verified(),
        determinant: c.determinant.to_string(),
        minors_checked: c.minors_checked,
    }
}

fn render<R: Render>(r: &R, format: Format) -> Result<String, CliError> {
    match format {
        Format::Text => Ok(r.text()),
        Format::Json => r.json(),
        Format::Csv => r.csv(),
    }
}

/// Runs one command and returns what it prints on success.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    let format = cli.command.run_args().format;
    let opts = options(cli.command.run_args());
    match &cli.command {
        Command::Analyze { curve, c, c0, .. } => render(&analyze(&parse_curve(curve)?, *c, *c0)?, format),
        Command::Enumerate { curve, bound, .. } => {
            let c = parse_curve(curve)?;
            let b = parse_bound(bound)?;
            let pts = enumerate_with(&c, &b, &opts)?;
            let r = EnumerateReport {
                curve: curve_json(&c),
                bound: b.to_string(),
                count: pts.len() as u64,
                points: pts.iter().map(|p| strings(p.coords())).collect(),
            };
            render(&r, format)
        }
        Command::Fpcount { curve, p_limit, .. } => {
            let c = parse_curve(curve)?;
            if !c.is_nonsingular() {
                return Err(Error::SingularCurve.into());
            }
            let good = c.good_prime_test();
            let (mut rows, mut skipped) = (Vec::new(), Vec::new());
            for p in primes_in(1, *p_limit) {
                if !good(p) {
                    skipped.push(p);
                    continue;
                }
                let n = count_fp(&c, p)?;
                rows.push(FpRow { p, n_p: n, jacobian: count_jacobian_fp(&c, p)?, hasse: hasse_check(n, p) });
            }
            render(&FpCountReport { curve: curve_json(&c), p_limit: *p_limit, skipped_bad_primes: skipped, rows }, format)
        }
        Command::Detverify { curve, k, bound, p, .. } => {
            render(&detverify(&parse_curve(curve)?, *k, &parse_bound(bound)?, *p, &opts)?, format)
        }
        Command::Auxform { curve, k, bound, points, .. } => {
            let c = parse_curve(curve)?;
            let b = parse_bound(bound)?;
            if *k == 0 {
                return Err(CliError::Usage("k must be at least 1".into()));
            }
            let pts = enumerate_with(&c, &b, &opts)?;
            let want = points.unwrap_or(8 * k - 1);
            let used = &pts[..want.min(pts.len())];
            let (form, vanishing) = if used.is_empty() {
                (None, None)
            } else {
                match auxiliary_form(&c, used, *k)? {
                    Some(g) => {
                        let count = pts.iter().filter(|p| g.vanishes_at(p)).count();
                        let f = FormJson {
                            monomials: g.basis.original_exponents(),
                            coefficients: g.coefficients.iter().map(ToString::to_string).collect(),
                        };
                        (Some(f), Some(count))
                    }
                    None => (None, None),
                }
            };
            let r = AuxFormReport {
                curve: curve_json(&c),
                k: *k,
                bound: b.to_string(),
                points_used: used.len(),
                form,
                enumerated: pts.len(),
                vanishing,
                bezout_bound: bezout_class_bound(*k),
            };
            render(&r, format)
        }
        Command::Bounds { curve, bounds, m, eps, delta, c, c0, rank, no_count, .. } => {
            let curve = parse_curve(curve)?;
            let params = BoundParams {
                m: *m,
                eps: *eps,
                delta: parse_rational(delta)?,
                c: *c,
                c0: *c0,
                rank: *rank,
                enumerate: (!no_count).then_some(opts),
            };
            let table = bound_table(&curve, bounds, &params)?;
            let rows = table
                .into_iter()
                .map(|r| {
                    let ratio = |name: &str| r.ratios.iter().find(|(n, _)| *n == name).and_then(|(_, v)| *v);
                    BoundRow {
                        curve: r.curve.clone(),
                        b: r.b,
                        h: r.height.to_string(),
                        abs_d: r.abs_disc.to_string(),
                        rank_source: r.rank_source.as_str().into(),
                        rank: r.rank,
                        rank_c: r.rank_c,
                        rank_c0: r.rank_c0,
                        m: r.m,
                        eps: r.eps,
                        delta: r.delta.to_string(),
                        thm11: r.bounds.thm11,
                        cor12: r.bounds.cor12,
                        eq13: r.bounds.eq13,
                        eq14: r.bounds.eq14,
                        thm31: r.bounds.thm31,
                        thm13: r.bounds.thm13,
                        nb: r.nb,
                        ratios: RatiosJson {
                            thm11: ratio("thm11"),
                            cor12: ratio("cor12"),
                            eq13: ratio("eq13"),
                            eq14: ratio("eq14"),
                            thm31: ratio("thm31"),
                            thm13: ratio("thm13"),
                        },
                    }
                })
                .collect();
            let note = "shape values with implied constants 1; bounds are empty below B = 3".to_string();
            render(&BoundsReport { note, rows }, format)
        }
        Command::Search { coeff_box, coord_limit, bound, min_points, max_curves, .. } => {
            let cfg = SearchConfig {
                coeff_box: *coeff_box,
                coord_limit: *coord_limit,
                height_bound: *bound,
                min_points: *min_points,
                max_curves: *max_curves,
            };
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(opts.workers)
                .build()
                .map_err(|e| CliError::Io(e.to_string()))?;
            let found = pool.install(|| search_curves(&cfg, &opts))?;
            let candidates = found
                .iter()
                .map(|cand| CandidateJson {
                    curve: curve_json(&cand.pencil),
                    height: cand.pencil.height().to_string(),
                    count: cand.points.len(),
                    good_small_primes: [3, 5, 7].into_iter().filter(|&p| cand.pencil.is_good_prime(p)).collect(),
                })
                .collect();
            let r = SearchReport {
                coeff_box: cfg.coeff_box,
                coord_limit: cfg.coord_limit,
                bound: cfg.height_bound,
                min_points: cfg.min_points,
                candidates,
            };
            render(&r, format)
        }
    }
}

fn analyze(c: &DiagonalPencil, rc: f64, rc0: f64) -> Result<AnalyzeReport, CliError> {
    let pl = c.plucker();
    let nonsingular = c.is_nonsingular();
    let w = if nonsingular { Some(c.weierstrass()?) } else { None };
    let bad_primes = match c.bad_primes() {
        Ok(v) => Some(v.iter().map(ToString::to_string).collect()),
        Err(Error::Domain(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let rank_estimate = if nonsingular {
        let r = c.rank_estimate(rc, rc0)?;
        Some(RankJson { value: r.value, c: r.c, c0: r.c0, warning: r.warning })
    } else {
        None
    };
    Ok(AnalyzeReport {
        curve: curve_json(c),
        plucker: strings(&pl.d),
        content: pl.content.to_string(),
        height: pl.height.to_string(),
        primitive: c.is_primitive(),
        nonsingular,
        primitive_model: curve_json(&c.primitive_reduce()),
        weierstrass: w.as_ref().map(|w| WeierstrassJson {
            quartic: strings(&w.quartic),
            i: w.inv_i.to_string(),
            j: w.inv_j.to_string(),
            a: w.a.to_string(),
            b: w.b.to_string(),
        }),
        discriminant: w.as_ref().map(|w| w.disc.to_string()),
        bad_primes,
        max_minor_frame: c.max_minor_frame(),
        rank_estimate,
    })
}

fn detverify(
    c: &DiagonalPencil,
    k: usize,
    bound: &BigInt,
    p: Option<u64>,
    opts: &EnumerateOptions,
) -> Result<DetVerifyReport, CliError> {
    if k == 0 {
        return Err(CliError::Usage("k must be at least 1".into()));
    }
    let pts = enumerate_with(c, bound, opts)?;
    let (height, hadamard) = if pts.len() >= 8 * k {
        let used = &pts[..8 * k];
        let cert = height_divisibility(c, used, k)?;
        let m = eval_matrix(c, used, k)?;
        (Some(certificate_json(&cert)), Some(hadamard_certificate(&m, bound)?))
    } else {
        (None, None)
    };
    let class_prime = match p {
        Some(p) => p,
        None => {
            let good = c.good_prime_test();
            (3..).find(|&q| good(q)).expect("finitely many bad primes")
        }
    };
    let part = partition_classes(c, &pts, class_prime)?;
    let mut classes = Vec::new();
    for (residue, members) in part.classes.iter().filter(|(_, v)| v.len() >= 2) {
        // all maximal minors of up to 8k + 1 rows
        let rows = &members[..members.len().min(8 * k + 1)];
        let m = eval_matrix(c, rows, k)?;
        let cert = class_divisibility(c, &m, class_prime)?;
        classes.push(ClassJson { residue: residue.coords, rows: rows.len(), certificate: certificate_json(&cert) });
    }
    let dm = dm_upper_bound(c, bound, k)?;
    let verified = height.as_ref().is_none_or(|h| h.verified) && classes.iter().all(|c| c.certificate.verified);
    if (pts.len() as u64) > dm.bound {
        return Err(Error::TheoremViolation(format!("N(B) = {} exceeds n_p * 8k = {}", pts.len(), dm.bound)).into());
    }
    Ok(DetVerifyReport {
        curve: curve_json(c),
        k,
        bound: bound.to_string(),
        points_available: pts.len(),
        height,
        hadamard,
        class_prime,
        classes,
        dm_upper_bound: DmJson { p: dm.p, n_p: dm.n_p, per_class: dm.per_class, bound: dm.bound },
        verified,
    })
}
