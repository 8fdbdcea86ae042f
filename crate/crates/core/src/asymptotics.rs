//! `log A_{λ/μ}` along one-parameter families of product-formula shapes.
//!
//! Each family fixes `(a, b, c, d, e)` as monomials `κ·n^θ` in a growth
//! parameter `n`. At a given `n` the monomials are rounded to naturals and
//!
//! ```text
//! ln A = ln k! + ln f^{λ/μ} − ln f^λ − ln f^μ
//! ```
//!
//! is evaluated as a single [`FactoredRatio`], so the four huge logarithms
//! cancel in exact prime exponents before any floating-point work.

use std::cmp::Ordering;
use std::fmt;

use num_rational::Rational64;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kimoh::{kimoh_shape, KimOhParams};
use crate::logspace::{FactoredRatio, LogReal};
use crate::partitions::Partition;

/// Default limit on the number of cells of `λ`.
pub const DEFAULT_CELL_BUDGET: u128 = 100_000_000;

/// `ln f^p` from exact prime exponents of `|p|! / Π hooks`.
pub fn log_f_lambda(p: &Partition) -> LogReal {
    let mut ratio = FactoredRatio::new();
    ratio.mul_f_lambda(p, 1);
    ratio.ln()
}

/// `κ·n^θ` with rational `θ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Monomial {
    pub coefficient: f64,
    pub exponent: Rational64,
}

impl Monomial {
    pub fn new(coefficient: f64, num: i64, den: i64) -> Self {
        Monomial { coefficient, exponent: Rational64::new(num, den) }
    }

    pub fn exponent_f64(&self) -> f64 {
        self.exponent.to_f64().unwrap_or(f64::NAN)
    }

    pub fn eval(&self, n: f64) -> f64 {
        self.coefficient * n.powf(self.exponent_f64())
    }

    /// Nearest natural (half away from zero, floored at 0).
    pub fn round_at(&self, n: u64) -> u64 {
        let v = self.eval(n as f64).round();
        if v <= 0.0 {
            0
        } else {
            v as u64
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = self.exponent;
        if *e.numer() == 0 {
            return write!(f, "{}", self.coefficient);
        }
        if self.coefficient != 1.0 {
            write!(f, "{}", self.coefficient)?;
        }
        if e == Rational64::from_integer(1) {
            write!(f, "n")
        } else {
            write!(f, "n^({e})")
        }
    }
}

/// A one-parameter family of product-formula shapes and its predicted leading term.
#[derive(Clone, Debug, PartialEq)]
pub struct ShapeFamily {
    pub id: &'static str,
    pub params: [Monomial; 5],
    /// Leading term of `log A` in `n`.
    pub leading: Monomial,
}

impl ShapeFamily {
    pub fn instantiate(&self, n: u64) -> KimOhParams {
        let [a, b, c, d, e] = self.params.map(|m| m.round_at(n));
        KimOhParams::new(a, b, c, d, e)
    }

    pub fn predicted(&self, n: u64) -> f64 {
        self.leading.eval(n as f64)
    }

    /// A family whose parameters do not depend on `n`.
    pub fn constant(id: &'static str, p: KimOhParams) -> Self {
        let m = |v: u64| Monomial::new(v as f64, 0, 1);
        ShapeFamily { id, params: [m(p.a), m(p.b), m(p.c), m(p.d), m(p.e)], leading: Monomial::new(0.0, 0, 1) }
    }
}

/// The thirteen tabulated families, `t1r1..t1r6` (small inner diagram) and `t2r1..t2r7`.
pub fn family_registry() -> Vec<ShapeFamily> {
    let m = Monomial::new;
    let fam = |id, params, leading| ShapeFamily { id, params, leading };
    vec![
        fam("t1r1", [m(1.0, 1, 17), m(2.0, 1, 17), m(1.0, 1, 2), m(2.0, 1, 2), m(1.0, 1, 2)], m(0.25, -11, 34)),
        fam("t1r2", [m(2.0, 1, 13), m(1.0, 1, 13), m(1.0, 1, 2), m(1.0, 1, 2), m(1.0, 1, 3)], m(-0.5, -7, 26)),
        fam("t1r3", [m(2.0, 1, 10), m(1.0, 1, 10), m(1.0, 1, 2), m(1.0, 1, 3), m(1.0, 1, 2)], m(0.5, -1, 5)),
        fam("t1r4", [m(1.0, 1, 6), m(2.0, 1, 6), m(1.0, 1, 2), m(1.0, 1, 2), m(1.0, 1, 3)], m(0.5, 0, 1)),
        fam("t1r5", [m(1.0, 1, 6), m(1.0, 1, 6), m(1.0, 1, 2), m(1.0, 1, 2), m(1.0, 1, 2)], m(2.0 / 27.0, -1, 3)),
        fam("t1r6", [m(1.0, 1, 5), m(3.0, 1, 5), m(1.0, 1, 2), m(1.0, 1, 2), m(1.0, 1, 3)], m(1.5, 1, 10)),
        fam("t2r1", [m(1.0, 1, 4), m(3.0, 1, 4), m(1.0, 1, 2), m(1.0, 1, 2), m(1.0, 1, 3)], m(1.5, 1, 4)),
        fam("t2r2", [m(2000.0, 1, 4), m(400.0, 1, 4), m(1.0, 1, 2), m(1.0, 1, 2), m(2.0, 1, 2)], m(160_000_000.0, 1, 4)),
        fam("t2r3", [m(1.0, 1, 3), m(2.0, 1, 3), m(1.0, 1, 2), m(2.0, 1, 2), m(1.0, 1, 2)], m(0.25, 1, 2)),
        fam("t2r4", [m(1.0, 2, 5), m(2.0, 2, 5), m(1.0, 1, 2), m(2.0, 1, 2), m(1.0, 1, 2)], m(0.25, 7, 10)),
        fam("t2r5", [m(1.0, 2, 5), m(2.0, 2, 5), m(1.0, 1, 2), m(1.0, 1, 2), m(2.0, 1, 2)], m(-0.25, 7, 10)),
        fam("t2r6", [m(1.0, 2, 5), m(1.0, 2, 5), m(1.0, 1, 2), m(1.0, 1, 2), m(1.0, 1, 2)], m(2.0 / 27.0, 2, 5)),
        fam("t2r7", [m(1.0, 1, 2), m(2.0, 1, 2), m(3.0, 1, 2), m(1.0, 1, 2), m(1.0, 1, 2)], m(0.56746, 1, 1)),
    ]
}

pub fn find_family(id: &str) -> Result<ShapeFamily> {
    family_registry()
        .into_iter()
        .find(|f| f.id == id)
        .ok_or_else(|| Error::Precondition(format!("unknown family `{id}`")))
}

/// `log A_{λ/μ}` of one family member, with everything needed to tabulate it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilyRecord {
    pub n: u64,
    pub params: KimOhParams,
    pub mu_size: u128,
    pub lambda_size: u128,
    pub log_a: LogReal,
    pub predicted: f64,
}

/// `ln A_{λ/μ}` for the product-formula shape with parameters `p`.
pub fn log_a_ratio_params(p: &KimOhParams) -> LogReal {
    let shape = kimoh_shape(p);
    let mut ratio = p.factored_count();
    ratio.mul_factorial(shape.inner().size() as u64, 1);
    ratio.mul_f_lambda(shape.outer(), -1);
    ratio.mul_f_lambda(shape.inner(), -1);
    ratio.ln()
}

pub fn log_a_ratio_family(fam: &ShapeFamily, n: u64) -> Result<FamilyRecord> {
    log_a_ratio_family_with_budget(fam, n, DEFAULT_CELL_BUDGET)
}

/// Like [`log_a_ratio_family`], refusing shapes whose outer diagram exceeds `cell_budget` cells.
pub fn log_a_ratio_family_with_budget(fam: &ShapeFamily, n: u64, cell_budget: u128) -> Result<FamilyRecord> {
    let params = fam.instantiate(n);
    let lambda_size = params.outer_cells();
    if lambda_size > cell_budget {
        return Err(Error::Refused(format!(
            "{} at n = {n} has {lambda_size} cells, above the cell budget of {cell_budget}",
            fam.id
        )));
    }
    Ok(FamilyRecord {
        n,
        params,
        mu_size: params.inner_cells(),
        lambda_size,
        log_a: log_a_ratio_params(&params),
        predicted: fam.predicted(n),
    })
}

/// Records for several `n`, evaluated concurrently and returned in input order.
pub fn family_records(fam: &ShapeFamily, ns: &[u64], cell_budget: u128) -> Result<Vec<FamilyRecord>> {
    ns.par_iter().map(|&n| log_a_ratio_family_with_budget(fam, n, cell_budget)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LeadingFit {
    pub constant: f64,
    /// Sum of squared residuals.
    pub residual: f64,
}

/// Least-squares `c` in `log_a ≈ c·n^exponent`.
pub fn fit_leading_term(records: &[FamilyRecord], exponent: f64) -> Result<LeadingFit> {
    if records.len() < 2 {
        return Err(Error::Precondition(format!("fitting needs at least 2 records, got {}", records.len())));
    }
    let mut ns: Vec<u64> = records.iter().map(|r| r.n).collect();
    ns.sort_unstable();
    if ns.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Precondition("fitting needs records at distinct n".into()));
    }
    let points: Vec<(f64, f64)> = records.iter().map(|r| ((r.n as f64).powf(exponent), r.log_a.value)).collect();
    let sxy: f64 = points.iter().map(|(x, y)| x * y).sum();
    let sxx: f64 = points.iter().map(|(x, _)| x * x).sum();
    let constant = sxy / sxx;
    let residual = points.iter().map(|(x, y)| (y - constant * x).powi(2)).sum();
    Ok(LeadingFit { constant, residual })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Positive,
    Negative,
    Zero,
    Mixed,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EnvelopePoint {
    pub n: u64,
    /// `log_a / (k^{3/2} |λ|^{−1/2})`.
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnvelopeReport {
    pub points: Vec<EnvelopePoint>,
    /// `sup |ratio|` over the points.
    pub empirical_constant: Option<f64>,
    pub sign: Option<Sign>,
    /// `|ratio|` grows strictly along at least three points and at least doubles.
    pub diverging: bool,
}

/// Compares `log A` against the scale `k^{3/2}|λ|^{−1/2}`.
pub fn conjecture_envelope_check(records: &[FamilyRecord]) -> EnvelopeReport {
    let mut sorted: Vec<&FamilyRecord> = records.iter().filter(|r| r.mu_size > 0).collect();
    sorted.sort_by_key(|r| r.n);
    let points: Vec<EnvelopePoint> = sorted
        .iter()
        .map(|r| {
            let scale = (r.mu_size as f64).powf(1.5) / (r.lambda_size as f64).sqrt();
            EnvelopePoint { n: r.n, ratio: r.log_a.value / scale }
        })
        .collect();
    let empirical_constant = points.iter().map(|p| p.ratio.abs()).reduce(f64::max);
    let sign = points.iter().map(|p| p.ratio.partial_cmp(&0.0).map(to_sign).unwrap_or(Sign::Mixed)).reduce(
        |acc, s| {
            if acc == s {
                acc
            } else {
                Sign::Mixed
            }
        },
    );
    let mags: Vec<f64> = points.iter().map(|p| p.ratio.abs()).collect();
    let diverging =
        mags.len() >= 3 && mags.windows(2).all(|w| w[1] > w[0]) && mags[mags.len() - 1] >= 2.0 * mags[0];
    EnvelopeReport { points, empirical_constant, sign, diverging }
}

fn to_sign(o: Ordering) -> Sign {
    match o {
        Ordering::Less => Sign::Negative,
        Ordering::Equal => Sign::Zero,
        Ordering::Greater => Sign::Positive,
    }
}
