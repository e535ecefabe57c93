//! Serializable reports. Big integers and rationals are strings so no precision is lost.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveJson {
    pub a: [String; 4],
    pub b: [String; 4],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeierstrassJson {
    /// Coefficients of `λ^4, λ^3 μ, ..., μ^4`.
    pub quartic: [String; 5],
    pub i: String,
    pub j: String,
    pub a: String,
    pub b: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankJson {
    pub value: f64,
    pub c: f64,
    pub c0: f64,
    pub warning: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyzeReport {
    pub curve: CurveJson,
    /// `d01, d02, d03, d12, d13, d23`.
    pub plucker: [String; 6],
    pub content: String,
    pub height: String,
    pub primitive: bool,
    pub nonsingular: bool,
    pub primitive_model: CurveJson,
    pub weierstrass: Option<WeierstrassJson>,
    pub discriminant: Option<String>,
    pub bad_primes: Option<Vec<String>>,
    pub max_minor_frame: [usize; 4],
    pub rank_estimate: Option<RankJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnumerateReport {
    pub curve: CurveJson,
    pub bound: String,
    pub count: u64,
    pub points: Vec<[String; 4]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FpRow {
    pub p: u64,
    pub n_p: u64,
    pub jacobian: u64,
    pub hasse: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FpCountReport {
    pub curve: CurveJson,
    pub p_limit: u64,
    pub skipped_bad_primes: Vec<u64>,
    pub rows: Vec<FpRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub kind: String,
    pub base: String,
    pub required: u64,
    /// Decimal exponent, or `inf` when every minor vanishes.
    pub observed: String,
    pub verified: bool,
    pub determinant: String,
    pub minors_checked: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassJson {
    pub residue: [u64; 4],
    pub rows: usize,
    pub certificate: CertificateJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DmJson {
    pub p: u64,
    pub n_p: u64,
    pub per_class: u64,
    pub bound: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetVerifyReport {
    pub curve: CurveJson,
    pub k: usize,
    pub bound: String,
    pub points_available: usize,
    /// `None` when fewer than `8k` points are available.
    pub height: Option<CertificateJson>,
    pub hadamard: Option<bool>,
    pub class_prime: u64,
    pub classes: Vec<ClassJson>,
    pub dm_upper_bound: DmJson,
    pub verified: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormJson {
    /// Exponents in the original coordinates.
    pub monomials: Vec<[u32; 4]>,
    pub coefficients: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuxFormReport {
    pub curve: CurveJson,
    pub k: usize,
    pub bound: String,
    pub points_used: usize,
    pub form: Option<FormJson>,
    pub enumerated: usize,
    pub vanishing: Option<usize>,
    pub bezout_bound: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundRow {
    pub curve: String,
    #[serde(rename = "B")]
    pub b: u64,
    #[serde(rename = "H")]
    pub h: String,
    #[serde(rename = "absD")]
    pub abs_d: String,
    pub rank_source: String,
    pub rank: f64,
    pub rank_c: Option<f64>,
    pub rank_c0: Option<f64>,
    pub m: u32,
    pub eps: f64,
    pub delta: String,
    pub thm11: Option<f64>,
    pub cor12: Option<f64>,
    pub eq13: Option<f64>,
    pub eq14: Option<f64>,
    pub thm31: Option<f64>,
    pub thm13: Option<f64>,
    #[serde(rename = "NB")]
    pub nb: Option<u64>,
    pub ratios: RatiosJson,
}

/// `N(B) / bound` for each bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatiosJson {
    pub thm11: Option<f64>,
    pub cor12: Option<f64>,
    pub eq13: Option<f64>,
    pub eq14: Option<f64>,
    pub thm31: Option<f64>,
    pub thm13: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    /// Implied constants are set to 1; values are shapes, not certified bounds.
    pub note: String,
    pub rows: Vec<BoundRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateJson {
    pub curve: CurveJson,
    pub height: String,
    pub count: usize,
    pub good_small_primes: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub coeff_box: i64,
    pub coord_limit: u32,
    pub bound: u64,
    pub min_points: usize,
    pub candidates: Vec<CandidateJson>,
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn curve_id(c: &CurveJson) -> String {
    format!("{};{}", join(&c.a), join(&c.b))
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map_or_else(String::new, ToString::to_string)
}

fn csv_out(header: &[&str], rows: Vec<Vec<String>>) -> Result<String, CliError> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(header).map_err(|e| CliError::Io(e.to_string()))?;
    for r in rows {
        w.write_record(&r).map_err(|e| CliError::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv of utf-8 fields"))
}

/// Text, JSON and CSV renderings of one report.
pub trait Render: Serialize {
    fn text(&self) -> String;
    fn csv(&self) -> Result<String, CliError>;

    fn json(&self) -> Result<String, CliError> {
        let mut s = serde_json::to_string_pretty(self).map_err(|e| CliError::Io(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }
}

impl Render for AnalyzeReport {
    fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "curve: {}", curve_id(&self.curve));
        let _ = writeln!(s, "plucker (d01,d02,d03,d12,d13,d23): {}", join(&self.plucker));
        let _ = writeln!(s, "content: {}", self.content);
        let _ = writeln!(s, "H(C): {}", self.height);
        let _ = writeln!(s, "primitive: {}", self.primitive);
        let _ = writeln!(s, "nonsingular: {}", self.nonsingular);
        let _ = writeln!(s, "primitive model: {}", curve_id(&self.primitive_model));
        if let Some(w) = &self.weierstrass {
            let _ = writeln!(s, "quartic: {}", join(&w.quartic));
            let _ = writeln!(s, "I: {}", w.i);
            let _ = writeln!(s, "J: {}", w.j);
            let _ = writeln!(s, "jacobian: y^2 = x^3 + ({})x + ({})", w.a, w.b);
        }
        let _ = writeln!(s, "D: {}", opt(&self.discriminant));
        let bad = self.bad_primes.as_ref().map_or_else(|| "unknown".to_string(), |v| join(v));
        let _ = writeln!(s, "bad primes: {{{bad}}}");
        let _ = writeln!(s, "max-minor frame: {}", join(&self.max_minor_frame));
        if let Some(r) = &self.rank_estimate {
            let _ = writeln!(s, "rank estimate: {} (c = {}, c0 = {})", r.value, r.c, r.c0);
            if let Some(w) = &r.warning {
                let _ = writeln!(s, "warning: {w}");
            }
        }
        s
    }

    fn csv(&self) -> Result<String, CliError> {
        let w = self.weierstrass.as_ref();
        csv_out(
            &["curve", "plucker", "content", "H", "primitive", "nonsingular", "I", "J", "D", "bad_primes"],
            vec![vec![
                curve_id(&self.curve),
                join(&self.plucker),
                self.content.clone(),
                self.height.clone(),
                self.primitive.to_string(),
                self.nonsingular.to_string(),
                w.map_or_else(String::new, |w| w.i.clone()),
                w.map_or_else(String::new, |w| w.j.clone()),
                opt(&self.discriminant),
                self.bad_primes.as_ref().map_or_else(String::new, |v| v.join(" ")),
            ]],
        )
    }
}

impl Render for EnumerateReport {
    fn text(&self) -> String {
        let mut s = format!("N({}) = {}\n", self.bound, self.count);
        for p in &self.points {
            let _ = writeln!(s, "{}", p.join(" "));
        }
        s
    }

    fn csv(&self) -> Result<String, CliError> {
        csv_out(&["x0", "x1", "x2", "x3"], self.points.iter().map(|p| p.to_vec()).collect())
    }
}

impl Render for FpCountReport {
    fn text(&self) -> String {
        let mut s = format!("curve: {}\n", curve_id(&self.curve));
        let _ = writeln!(s, "skipped bad primes: {}", join(&self.skipped_bad_primes));
        for r in &self.rows {
            let _ = writeln!(s, "p = {}: n_p = {}, jacobian = {}, hasse = {}", r.p, r.n_p, r.jacobian, r.hasse);
        }
        s
    }

    fn csv(&self) -> Result<String, CliError> {
        csv_out(
            &["p", "n_p", "jacobian", "hasse"],
            self.rows
                .iter()
                .map(|r| vec![r.p.to_string(), r.n_p.to_string(), r.jacobian.to_string(), r.hasse.to_string()])
                .collect(),
        )
    }
}

fn cert_line(c: &CertificateJson) -> String {
    format!(
        "{}: {}^{} required, valuation {}, verified = {}, det = {}",
        c.kind, c.base, c.required, c.observed, c.verified, c.determinant
    )
}

impl Render for DetVerifyReport {
    fn text(&self) -> String {
        let mut s = format!("curve: {}\nk = {}, B = {}, points = {}\n", curve_id(&self.curve), self.k, self.bound, self.points_available);
        match &self.height {
            Some(c) => {
                let _ = writeln!(s, "{}", cert_line(c));
            }
            None => {
                let _ = writeln!(s, "height: fewer than {} points", 8 * self.k);
            }
        }
        if let Some(h) = self.hadamard {
            let _ = writeln!(s, "hadamard bound holds: {h}");
        }
        let _ = writeln!(s, "classes mod {} with two or more points: {}", self.class_prime, self.classes.len());
        for c in &self.classes {
            let _ = writeln!(s, "  {} ({} rows) {}", join(&c.residue), c.rows, cert_line(&c.certificate));
        }
        let d = &self.dm_upper_bound;
        let _ = writeln!(s, "upper bound: p = {}, n_p = {}, {} per class, N(B) <= {}", d.p, d.n_p, d.per_class, d.bound);
        let _ = writeln!(s, "verified: {}", self.verified);
        s
    }

    fn csv(&self) -> Result<String, CliError> {
        let mut rows = Vec::new();
        let row = |scope: String, c: &CertificateJson| {
            vec![
                scope,
                c.kind.clone(),
                c.base.clone(),
                c.required.to_string(),
                c.observed.clone(),
                c.verified.to_string(),
                c.determinant.clone(),
            ]
        };
        if let Some(c) = &self.height {
            rows.push(row("all".into(), c));
        }
        for c in &self.classes {
            rows.push(row(join(&c.residue), &c.certificate));
        }
        csv_out(&["scope", "kind", "base", "required", "observed", "verified", "determinant"], rows)
    }
}

impl Render for AuxFormReport {
    fn text(&self) -> String {
        let mut s = format!("curve: {}\nk = {}, B = {}, points used = {}\n", curve_id(&self.curve), self.k, self.bound, self.points_used);
        match &self.form {
            Some(f) => {
                for (e, c) in f.monomials.iter().zip(&f.coefficients) {
                    let _ = writeln!(s, "  {c} * x^({})", join(e));
                }
                let _ = writeln!(
                    s,
                    "vanishes at {} of {} enumerated points (at most {})",
                    opt(&self.vanishing),
                    self.enumerated,
                    self.bezout_bound
                );
            }
            None => {
                let _ = writeln!(s, "no form: the evaluation matrix has full rank");
            }
        }
        s
    }

    fn csv(&self) -> Result<String, CliError> {
        let rows = self.form.as_ref().map_or_else(Vec::new, |f| {
            f.monomials.iter().zip(&f.coefficients).map(|(e, c)| vec![join(e), c.clone()]).collect()
        });
        csv_out(&["exponents", "coefficient"], rows)
    }
}

pub const BOUND_COLUMNS: [&str; 12] =
    ["curve", "B", "H", "absD", "rank_source", "thm11", "cor12", "eq13", "eq14", "thm31", "thm13", "NB"];

impl Render for BoundsReport {
    fn text(&self) -> String {
        let mut s = format!("{}\n", self.note);
        for r in &self.rows {
            let _ = writeln!(
                s,
                "B = {}: H = {}, |D| = {}, rank {} ({}), thm11 {}, cor12 {}, eq13 {}, eq14 {}, thm31 {}, thm13 {}, N(B) {}",
                r.b,
                r.h,
                r.abs_d,
                r.rank,
                r.rank_source,
                opt(&r.thm11),
                opt(&r.cor12),
                opt(&r.eq13),
                opt(&r.eq14),
                opt(&r.thm31),
                opt(&r.thm13),
                opt(&r.nb)
            );
        }
        s
    }

    fn csv(&self) -> Result<String, CliError> {
        let rows = self
            .rows
            .iter()
            .map(|r| {
                vec![
                    r.curve.clone(),
                    r.b.to_string(),
                    r.h.clone(),
                    r.abs_d.clone(),
                    r.rank_source.clone(),
                    opt(&r.thm11),
                    opt(&r.cor12),
                    opt(&r.eq13),
                    opt(&r.eq14),
                    opt(&r.thm31),
                    opt(&r.thm13),
                    opt(&r.nb),
                ]
            })
            .collect();
        csv_out(&BOUND_COLUMNS, rows)
    }
}

impl Render for SearchReport {
    fn text(&self) -> String {
        let mut s = format!(
            "box [-{b}, {b}], seeds up to {}, B = {}, at least {} points: {} candidates\n",
            self.coord_limit,
            self.bound,
            self.min_points,
            self.candidates.len(),
            b = self.coeff_box
        );
        for c in &self.candidates {
            let _ = writeln!(
                s,
                "{}  H = {}  N = {}  good in {{3,5,7}}: {}",
                curve_id(&c.curve),
                c.height,
                c.count,
                join(&c.good_small_primes)
            );
        }
        s
    }

    fn csv(&self) -> Result<String, CliError> {
        csv_out(
            &["curve", "H", "N", "good_small_primes"],
            self.candidates
                .iter()
                .map(|c| {
                    let good = c.good_small_primes.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
                    vec![curve_id(&c.curve), c.height.clone(), c.count.to_string(), good]
                })
                .collect(),
        )
    }
}
