//! Truncated character sums, pointwise character bounds and the `B_{λ/μ}` upper bound.
//!
//! `A_{λ/μ}` is the class sum
//! `Σ_{ρ ⊢ k} |C_ρ| · χ^λ(ρ ∪ 1^{n−k})/f^λ · χ^μ(ρ)/f^μ`.
//! Everything here slices or bounds that sum: by absolute length of the class
//! (truncations and band diagnostics), or by replacing each normalized
//! character with an upper bound on its absolute value.

use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::asymptotics::log_f_lambda;
use crate::characters::{cycle_types, normalized_character, CycleType};
use crate::error::{Error, Result};
use crate::exact_count::ln_biguint;
use crate::logspace::CompensatedSum;
use crate::partitions::{Partition, SkewShape};

/// Minimum group degree below which the fixed-point bound is refused.
pub const DEFAULT_MSP_FLOOR: usize = 10;

/// An externally supplied upper bound on `|χ^ν(ρ)/f^ν|`.
pub trait CharacterBound: Send + Sync {
    fn bound(&self, nu: &Partition, rho: &CycleType) -> f64;
}

/// Constants and switches for the character bounds.
#[derive(Clone)]
pub struct BoundParams {
    /// Constant of the rows/columns/length bound.
    pub a: f64,
    pub roichman_b: Option<f64>,
    pub roichman_q: Option<f64>,
    /// Enables the fixed-point bound `(f^ν)^{−δ}`.
    pub enable_msp: bool,
    pub msp_floor: usize,
    pub ls_plugin: Option<Arc<dyn CharacterBound>>,
    /// Balancedness constant `L`.
    pub balance: f64,
    pub eta: f64,
}

impl fmt::Debug for BoundParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BoundParams")
            .field("a", &self.a)
            .field("roichman_b", &self.roichman_b)
            .field("roichman_q", &self.roichman_q)
            .field("enable_msp", &self.enable_msp)
            .field("msp_floor", &self.msp_floor)
            .field("ls_plugin", &self.ls_plugin.is_some())
            .field("balance", &self.balance)
            .field("eta", &self.eta)
            .finish()
    }
}

impl BoundParams {
    /// Only the rows/columns/length bound, with constant `a`.
    pub fn fs_only(a: f64) -> Self {
        BoundParams {
            a,
            roichman_b: None,
            roichman_q: None,
            enable_msp: false,
            msp_floor: DEFAULT_MSP_FLOOR,
            ls_plugin: None,
            balance: 1.0,
            eta: 0.125,
        }
    }

    pub fn with_roichman(mut self, b: f64, q: f64) -> Self {
        self.roichman_b = Some(b);
        self.roichman_q = Some(q);
        self
    }

    pub fn with_msp(mut self) -> Self {
        self.enable_msp = true;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a > 0.0) {
            return Err(Error::Precondition(format!("bound constant a must be positive, got {}", self.a)));
        }
        if let Some(b) = self.roichman_b {
            if !(b > 0.0) {
                return Err(Error::Precondition(format!("roichman b must be positive, got {b}")));
            }
        }
        if let Some(q) = self.roichman_q {
            check_q(q)?;
        }
        if !(self.balance > 0.0) {
            return Err(Error::Precondition(format!("balance constant must be positive, got {}", self.balance)));
        }
        if !(self.eta > 0.0 && self.eta < 0.25) {
            return Err(Error::Precondition(format!("eta must lie in (0, 1/4), got {}", self.eta)));
        }
        Ok(())
    }
}

/// Row and column caps plus the truncation order used by the band diagnostics.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DiagnosticSpec {
    /// Cap on rows and columns of `λ`.
    pub alpha_of_n: usize,
    /// Cap on rows and columns of `μ`.
    pub beta_of_k: usize,
    /// Truncation order.
    pub r: usize,
}

impl DiagnosticSpec {
    /// Departures from `√n ≤ α ≤ n` and `√k ≤ β ≤ k`. These are reported, not enforced.
    pub fn range_warnings(&self, n: usize, k: usize) -> Vec<String> {
        let mut out = Vec::new();
        let check = |name: &str, v: usize, size: usize, out: &mut Vec<String>| {
            if v * v < size || v > size {
                out.push(format!("{name} = {v} lies outside [√{size}, {size}]"));
            }
        };
        check("alpha", self.alpha_of_n, n, &mut out);
        check("beta", self.beta_of_k, k, &mut out);
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BandScheme {
    /// Cuts at `r` and `β`.
    Truncation,
    /// Cuts at `β` and `α`.
    Balanced,
}

impl BandScheme {
    pub fn name(self) -> &'static str {
        match self {
            BandScheme::Truncation => "truncation",
            BandScheme::Balanced => "balanced",
        }
    }
}

/// Exact partial class sum over absolute lengths `min_length..=max_length`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Band {
    pub scheme: BandScheme,
    pub min_length: usize,
    pub max_length: usize,
    #[serde(serialize_with = "serialize_ratio")]
    pub sum: BigRational,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TruncationReport {
    /// Bands of both schemes; within one scheme they partition `0..=k`.
    pub bands: Vec<Band>,
    #[serde(serialize_with = "serialize_ratio")]
    pub total: BigRational,
}

impl TruncationReport {
    pub fn scheme(&self, scheme: BandScheme) -> impl Iterator<Item = &Band> {
        self.bands.iter().filter(move |b| b.scheme == scheme)
    }
}

fn serialize_ratio<S: serde::Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&crate::rational::to_fraction(q))
}

/// One summand of the class sum for `A_{λ/μ}`.
#[derive(Clone, Debug)]
pub struct ClassTerm {
    pub class: CycleType,
    pub class_size: BigUint,
    pub term: BigRational,
}

fn checked_shape(lam: &Partition, mu: &Partition) -> Result<SkewShape> {
    SkewShape::new(lam.clone(), mu.clone())
}

/// `|C_ρ| · χ^λ(ρ ∪ 1^{n−k})/f^λ · χ^μ(ρ)/f^μ` for every class `ρ ⊢ k`, in class order.
pub fn class_terms(lam: &Partition, mu: &Partition) -> Result<Vec<ClassTerm>> {
    checked_shape(lam, mu)?;
    let n = lam.size();
    let classes: Vec<CycleType> = cycle_types(mu.size()).collect();
    classes
        .into_par_iter()
        .map(|class| {
            let on_lam = normalized_character(lam, &class.embed(n)?)?;
            let on_mu = normalized_character(mu, &class)?;
            let class_size = class.class_size();
            let term = on_lam * on_mu * BigRational::from(BigInt::from(class_size.clone()));
            Ok(ClassTerm { class, class_size, term })
        })
        .collect()
}

/// Class sum restricted to absolute length `≤ r`.
pub fn truncated_sum(lam: &Partition, mu: &Partition, r: usize) -> Result<BigRational> {
    Ok(class_terms(lam, mu)?
        .into_iter()
        .filter(|t| t.class.absolute_length() <= r)
        .fold(BigRational::zero(), |acc, t| acc + t.term))
}

/// `1 + 2(b(λ′)−b(λ))(b(μ′)−b(μ)) / (n(n−1))`, the length-one truncation in closed form.
pub fn second_order_approx(lam: &Partition, mu: &Partition) -> Result<BigRational> {
    checked_shape(lam, mu)?;
    let (n, k) = (lam.size(), mu.size());
    if n < 2 || k < 2 {
        return Err(Error::Precondition(format!("second-order approximation needs n, k ≥ 2, got n = {n}, k = {k}")));
    }
    let diff = |p: &Partition| BigInt::from(p.conjugate().b_statistic()) - BigInt::from(p.b_statistic());
    let num = diff(lam) * diff(mu) * 2;
    Ok(BigRational::one() + BigRational::new(num, BigInt::from(n * (n - 1))))
}

fn cut_bands(scheme: BandScheme, first: usize, second: usize, k: usize) -> Vec<(BandScheme, usize, usize)> {
    let t1 = first.min(k);
    let t2 = second.max(t1).min(k);
    [(0, t1), (t1 + 1, t2), (t2 + 1, k)]
        .into_iter()
        .filter(|(lo, hi)| lo <= hi)
        .map(|(lo, hi)| (scheme, lo, hi))
        .collect()
}

/// Exact class sums split by absolute length, under both band schemes.
pub fn partial_sums_by_length(lam: &Partition, mu: &Partition, spec: DiagnosticSpec) -> Result<TruncationReport> {
    let terms = class_terms(lam, mu)?;
    let k = mu.size();
    let mut by_length = vec![BigRational::zero(); k + 1];
    for t in terms {
        by_length[t.class.absolute_length()] += t.term;
    }
    let total: BigRational = by_length.iter().cloned().fold(BigRational::zero(), |a, b| a + b);
    let mut ranges = cut_bands(BandScheme::Truncation, spec.r, spec.beta_of_k, k);
    ranges.extend(cut_bands(BandScheme::Balanced, spec.beta_of_k, spec.alpha_of_n, k));
    let bands = ranges
        .into_iter()
        .map(|(scheme, lo, hi)| Band {
            scheme,
            min_length: lo,
            max_length: hi,
            sum: by_length[lo..=hi].iter().cloned().fold(BigRational::zero(), |a, b| a + b),
        })
        .collect();
    Ok(TruncationReport { bands, total })
}

fn check_sizes(nu: &Partition, rho: &CycleType) -> Result<()> {
    if nu.size() != rho.degree() {
        return Err(Error::SizeMismatch { expected: nu.size(), found: rho.degree() });
    }
    Ok(())
}

fn check_q(q: f64) -> Result<()> {
    if q > 0.0 && q < 1.0 {
        Ok(())
    } else {
        Err(Error::Precondition(format!("q must lie in (0, 1), got {q}")))
    }
}

/// `max(r(ν), c(ν), ℓ_T(ρ)) / m`.
fn fs_base(nu: &Partition, rho: &CycleType) -> f64 {
    let m = nu.size() as f64;
    nu.rows().max(nu.cols()).max(rho.absolute_length()) as f64 / m
}

/// `ln` of [`fs_bound`].
pub fn fs_bound_ln(nu: &Partition, rho: &CycleType, a: f64) -> Result<f64> {
    check_sizes(nu, rho)?;
    let l = rho.absolute_length();
    if l == 0 {
        return Ok(0.0);
    }
    Ok(l as f64 * (a * fs_base(nu, rho)).ln())
}

/// `[a · max(r(ν)/m, c(ν)/m, ℓ_T(ρ)/m)]^{ℓ_T(ρ)}`, and 1 on the identity class.
pub fn fs_bound(nu: &Partition, rho: &CycleType, a: f64) -> Result<f64> {
    fs_bound_ln(nu, rho, a).map(f64::exp)
}

/// [`fs_bound`] with an exact rational constant.
pub fn fs_bound_exact(nu: &Partition, rho: &CycleType, a: &BigRational) -> Result<BigRational> {
    check_sizes(nu, rho)?;
    let l = rho.absolute_length() as u32;
    if l == 0 {
        return Ok(BigRational::one());
    }
    let top = nu.rows().max(nu.cols()).max(l as usize);
    let base = a * BigRational::new(BigInt::from(top), BigInt::from(nu.size()));
    Ok(BigRational::new(base.numer().pow(l), base.denom().pow(l)))
}

/// The two-branch form for diagrams with at most `γ` rows and columns:
/// `(aγ/m)^ℓ` when `ℓ ≤ γ`, otherwise `(aℓ/m)^ℓ`.
pub fn fs_bound_specialized(nu: &Partition, rho: &CycleType, gamma: usize, a: f64) -> Result<f64> {
    check_sizes(nu, rho)?;
    let m = nu.size();
    if gamma * gamma < m || gamma > m {
        return Err(Error::Precondition(format!("gamma = {gamma} must satisfy √{m} ≤ gamma ≤ {m}")));
    }
    if nu.rows() > gamma || nu.cols() > gamma {
        return Err(Error::Precondition(format!(
            "diagram ({nu}) has {} rows and {} columns, more than gamma = {gamma}",
            nu.rows(),
            nu.cols()
        )));
    }
    let l = rho.absolute_length();
    if l == 0 {
        return Ok(1.0);
    }
    let top = if l <= gamma { gamma } else { l };
    Ok((a * top as f64 / m as f64).powi(l as i32))
}

fn roichman_ln(nu: &Partition, rho: &CycleType, b: f64, q: f64) -> Result<f64> {
    check_sizes(nu, rho)?;
    check_q(q)?;
    if !(b > 0.0) {
        return Err(Error::Precondition(format!("roichman b must be positive, got {b}")));
    }
    let l = rho.absolute_length();
    if l == 0 {
        return Ok(0.0);
    }
    let m = nu.size() as f64;
    let base = q.max(nu.rows() as f64 / m).max(nu.cols() as f64 / m);
    Ok(b * l as f64 * base.ln())
}

/// `[max(q, r(ν)/m, c(ν)/m)]^{b·ℓ_T(ρ)}`.
pub fn roichman_bound(nu: &Partition, rho: &CycleType, b: f64, q: f64) -> Result<f64> {
    roichman_ln(nu, rho, b, q).map(f64::exp)
}

/// The exponent `δ(ρ, ν)` of the fixed-point bound, natural logs throughout.
pub fn msp_delta(m: usize, fixed_points: usize) -> f64 {
    if fixed_points == 0 {
        return 1.0 / 18.0;
    }
    let lm = (m as f64).ln();
    let ratio = (m as f64 / fixed_points as f64).ln();
    1.0 / (12.0 * lm / ratio / (1.0 - 1.0 / lm) + 18.0)
}

fn msp_ln(nu: &Partition, rho: &CycleType, floor: usize) -> Result<f64> {
    check_sizes(nu, rho)?;
    let m = nu.size();
    if rho.is_identity() {
        return Ok(0.0);
    }
    if m < floor.max(3) {
        return Err(Error::Refused(format!("fixed-point bound needs m ≥ {}, got m = {m}", floor.max(3))));
    }
    Ok(-msp_delta(m, rho.fixed_points()) * log_f_lambda(nu).value)
}

/// `(f^ν)^{−δ(ρ,ν)}`; refused below the validity floor `floor` (and whenever `ln m ≤ 1`).
pub fn msp_bound(nu: &Partition, rho: &CycleType, floor: usize) -> Result<f64> {
    msp_ln(nu, rho, floor).map(f64::exp)
}

/// `ln` of [`u_all`].
pub fn u_all_ln(nu: &Partition, rho: &CycleType, params: &BoundParams) -> Result<f64> {
    check_sizes(nu, rho)?;
    if rho.is_identity() {
        return Ok(0.0);
    }
    let mut best = fs_bound_ln(nu, rho, params.a)?.min(0.0);
    if let (Some(b), Some(q)) = (params.roichman_b, params.roichman_q) {
        best = best.min(roichman_ln(nu, rho, b, q)?);
    }
    if params.enable_msp {
        match msp_ln(nu, rho, params.msp_floor) {
            Ok(v) => best = best.min(v),
            // outside its validity range the bound carries no information
            Err(Error::Refused(_)) => {}
            Err(e) => return Err(e),
        }
    }
    if let Some(plugin) = &params.ls_plugin {
        let v = plugin.bound(nu, rho);
        if v > 0.0 {
            best = best.min(v.ln());
        } else if v == 0.0 {
            best = f64::NEG_INFINITY;
        }
    }
    Ok(best)
}

/// Minimum of every enabled bound, each clamped at 1.
pub fn u_all(nu: &Partition, rho: &CycleType, params: &BoundParams) -> Result<f64> {
    u_all_ln(nu, rho, params).map(f64::exp)
}

/// One class of the `B_{λ/μ}` sum.
#[derive(Clone, Debug, Serialize)]
pub struct BoundRow {
    pub class: CycleType,
    #[serde(serialize_with = "serialize_display")]
    pub class_size: BigUint,
    pub u_lambda: f64,
    pub u_mu: f64,
    /// `class_size · u_lambda · u_mu`.
    pub term: f64,
    /// `ln` of `term`, finite even when `term` overflows.
    pub ln_term: f64,
}

fn serialize_display<S: serde::Serializer, T: fmt::Display>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// Per-class terms of `B_{λ/μ} = Σ_ρ |C_ρ| U(λ, ρ) U(μ, ρ)`.
pub fn bound_rows(lam: &Partition, mu: &Partition, params: &BoundParams) -> Result<Vec<BoundRow>> {
    checked_shape(lam, mu)?;
    params.validate()?;
    let n = lam.size();
    let classes: Vec<CycleType> = cycle_types(mu.size()).collect();
    classes
        .into_par_iter()
        .map(|class| {
            let ln_lam = u_all_ln(lam, &class.embed(n)?, params)?;
            let ln_mu = u_all_ln(mu, &class, params)?;
            let class_size = class.class_size();
            let ln_term = ln_biguint(&class_size) + ln_lam + ln_mu;
            Ok(BoundRow { class, class_size, u_lambda: ln_lam.exp(), u_mu: ln_mu.exp(), term: ln_term.exp(), ln_term })
        })
        .collect()
}

/// `ln B_{λ/μ}`, accumulated by log-sum-exp over the classes.
pub fn b_upper(lam: &Partition, mu: &Partition, params: &BoundParams) -> Result<f64> {
    let rows = bound_rows(lam, mu, params)?;
    Ok(log_sum_exp(rows.iter().map(|r| r.ln_term)))
}

/// `ln Σ e^{x_i}` with a compensated inner sum.
pub fn log_sum_exp(values: impl Iterator<Item = f64> + Clone) -> f64 {
    let top = values.clone().fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return top;
    }
    let mut sum = CompensatedSum::new();
    for v in values {
        sum.add((v - top).exp());
    }
    top + sum.value().ln()
}

/// `B_{λ/μ}` exactly, with only the rows/columns/length bound and a rational constant.
pub fn b_upper_fs_exact(lam: &Partition, mu: &Partition, a: &BigRational) -> Result<BigRational> {
    checked_shape(lam, mu)?;
    let n = lam.size();
    let one = BigRational::one();
    let mut total = BigRational::zero();
    for class in cycle_types(mu.size()) {
        let on_lam = fs_bound_exact(lam, &class.embed(n)?, a)?.min(one.clone());
        let on_mu = fs_bound_exact(mu, &class, a)?.min(one.clone());
        total += on_lam * on_mu * BigRational::from(BigInt::from(class.class_size()));
    }
    Ok(total)
}

/// Largest `n_max` accepted by [`calibrate_a`].
pub const CALIBRATION_LIMIT: usize = 12;

struct Constraint {
    /// `|χ/f|`.
    ratio: BigRational,
    /// `max(r, c, ℓ) / m`.
    base: BigRational,
    length: u32,
}

fn calibration_constraints(n_max: usize) -> Result<Vec<Constraint>> {
    let pairs: Vec<(Partition, CycleType)> = (2..=n_max)
        .flat_map(|m| {
            let classes: Vec<CycleType> = cycle_types(m).filter(|c| !c.is_identity()).collect();
            Partition::all(m).flat_map(move |nu| classes.clone().into_iter().map(move |c| (nu.clone(), c)))
        })
        .collect();
    pairs
        .into_par_iter()
        .map(|(nu, rho)| {
            let ratio = normalized_character(&nu, &rho)?.abs();
            let l = rho.absolute_length();
            let top = nu.rows().max(nu.cols()).max(l);
            let base = BigRational::new(BigInt::from(top), BigInt::from(nu.size()));
            Ok(Constraint { ratio, base, length: l as u32 })
        })
        .filter(|c: &Result<Constraint>| c.as_ref().map_or(true, |c| !c.ratio.is_zero()))
        .collect()
}

fn satisfies(constraints: &[Constraint], a: &BigRational) -> bool {
    constraints.par_iter().all(|c| {
        let x = a * &c.base;
        x.numer().pow(c.length) * c.ratio.denom() >= c.ratio.numer() * x.denom().pow(c.length)
    })
}

/// Smallest positive multiple of `1/1000` for which the rows/columns/length bound holds for
/// every `ν ⊢ m ≤ n_max` and every non-identity class of `S_m`. Exact comparisons throughout.
pub fn calibrate_a_exact(n_max: usize) -> Result<BigRational> {
    if n_max > CALIBRATION_LIMIT {
        return Err(Error::Refused(format!("calibration is limited to n_max ≤ {CALIBRATION_LIMIT}, got {n_max}")));
    }
    let constraints = calibration_constraints(n_max)?;
    let at = |j: u64| BigRational::new(BigInt::from(j), BigInt::from(1000));
    let holds = |j: u64| satisfies(&constraints, &at(j));
    let mut hi = 1000u64;
    while !holds(hi) {
        hi *= 2;
    }
    // invariant: holds(hi); every multiple below lo fails
    let mut lo = 1u64;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if holds(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(at(hi))
}

pub fn calibrate_a(n_max: usize) -> Result<f64> {
    calibrate_a_exact(n_max).map(|a| a.to_f64().unwrap_or(f64::NAN))
}

/// `D_K`, the number of fixed-point-free permutations of `K` elements.
pub fn derangements(count: usize) -> BigUint {
    let (mut prev, mut cur) = (BigUint::one(), BigUint::zero());
    if count == 0 {
        return prev;
    }
    for j in 2..=count {
        let next = (&cur + &prev) * (j - 1);
        prev = cur;
        cur = next;
    }
    cur
}

fn check_eta(eta: &BigRational) -> Result<()> {
    let quarter = BigRational::new(BigInt::one(), BigInt::from(4));
    if !eta.is_positive() || eta >= &quarter {
        return Err(Error::Precondition(format!("eta must lie in (0, 1/4), got {}", crate::rational::to_fraction(eta))));
    }
    Ok(())
}

/// `(⌊ηk⌋, ⌈(1−η)²k⌉)`: the required number of fixed points and the minimum absolute length.
pub fn omega_constraints(k: usize, eta: &BigRational) -> Result<(usize, usize)> {
    check_eta(eta)?;
    let kq = BigRational::from(BigInt::from(k));
    let fixed = (eta * &kq).floor().to_integer();
    let rest = BigRational::one() - eta;
    let min_length = (&rest * &rest * kq).ceil().to_integer();
    Ok((fixed.to_usize().unwrap_or(usize::MAX), min_length.to_usize().unwrap_or(usize::MAX)))
}

/// Number of `σ ∈ S_k` with exactly `⌊ηk⌋` fixed points and `ℓ_T(σ) ≥ ⌈(1−η)²k⌉`.
pub fn count_omega(k: usize, eta: &BigRational) -> Result<BigUint> {
    let (fixed, min_length) = omega_constraints(k, eta)?;
    Ok(cycle_types(k)
        .filter(|c| c.fixed_points() == fixed && c.absolute_length() >= min_length)
        .map(|c| c.class_size())
        .sum())
}

/// `C(k, ⌊ηk⌋)·D_{k−⌊ηk⌋}`: permutations with exactly `⌊ηk⌋` fixed points.
pub fn count_omega_superset(k: usize, eta: &BigRational) -> Result<BigUint> {
    let (fixed, _) = omega_constraints(k, eta)?;
    Ok(binomial(k, fixed) * derangements(k - fixed))
}

/// `n!/(j!(n−j)!)`.
pub fn binomial(n: usize, j: usize) -> BigUint {
    if j > n {
        return BigUint::zero();
    }
    let j = j.min(n - j);
    let mut acc = BigUint::one();
    for i in 0..j {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}
