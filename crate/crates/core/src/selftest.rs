//! Exhaustive invariant checks over all small diagrams, run by the `selftest` subcommand.

use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::characters::{
    absolute_length_distribution, cycle_types, normalized_character, transposition_normalized_character, CycleType,
};
use crate::error::{Error, Result};
use crate::estimates::{
    b_upper_fs_exact, calibrate_a_exact, count_omega, count_omega_superset, fs_bound_exact, partial_sums_by_length,
    second_order_approx, truncated_sum, BandScheme, DiagnosticSpec,
};
use crate::exact_count::{
    a_ratio, enumerate_syt, f_lambda, f_skew_chain_dp, f_skew_charsum, f_skew_determinant, factorial,
    level_set_distribution, skew_counts_from_outer,
};
use crate::kimoh::{kimoh_count, kimoh_shape, KimOhParams};
use crate::partitions::{Partition, SkewShape};

/// Largest size accepted by [`run`].
pub const MAX_SELFTEST_N: usize = 10;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub cases: u64,
    /// First counterexample, if any.
    pub failure: Option<String>,
    pub seconds: f64,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SelfTestReport {
    pub max_n: usize,
    pub checks: Vec<CheckResult>,
}

impl SelfTestReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }
}

/// Counts cases and remembers the first failure.
struct Tally {
    cases: u64,
    failure: Option<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { cases: 0, failure: None }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(describe());
        }
    }
}

fn timed(name: &'static str, body: impl FnOnce(&mut Tally) -> Result<()>) -> Result<CheckResult> {
    let start = Instant::now();
    let mut tally = Tally::new();
    match body(&mut tally) {
        Ok(()) => {}
        Err(e) if e.is_internal() => {
            tally.failure.get_or_insert_with(|| e.to_string());
        }
        Err(e) => return Err(e),
    }
    Ok(CheckResult { name, cases: tally.cases, failure: tally.failure, seconds: start.elapsed().as_secs_f64() })
}

fn pairs(max_n: usize) -> impl Iterator<Item = (Partition, Partition)> {
    (0..=max_n).flat_map(|n| {
        Partition::all(n).flat_map(move |lam| {
            (0..=n).flat_map(move |k| {
                let lam = lam.clone();
                lam.sub_partitions(k).collect::<Vec<_>>().into_iter().map(move |mu| (lam.clone(), mu))
            })
        })
    })
}

fn ratio(v: &BigUint) -> BigRational {
    BigRational::from(BigInt::from(v.clone()))
}

/// Runs every exhaustive invariant over diagrams of size `≤ max_n`.
pub fn run(max_n: usize) -> Result<SelfTestReport> {
    if max_n > MAX_SELFTEST_N {
        return Err(Error::Refused(format!("selftest is limited to max_n ≤ {MAX_SELFTEST_N}, got {max_n}")));
    }
    let mut checks = Vec::new();

    checks.push(timed("conjugation and hook identities", |t| {
        for n in 0..=max_n {
            for p in Partition::all(n) {
                let c = p.conjugate();
                t.check(c.conjugate() == p, || format!("conjugate is not an involution at ({p})"));
                let binom: u64 = p.parts().iter().map(|&x| (x * x.saturating_sub(1) / 2) as u64).sum();
                t.check(c.b_statistic() == binom, || format!("b(p′) ≠ Σ C(p_i, 2) at ({p})"));
                t.check(p.hook_histogram() == c.hook_histogram(), || format!("hook multisets differ at ({p})"));
            }
        }
        Ok(())
    })?);

    checks.push(timed("class sizes and absolute lengths", |t| {
        for k in 0..=max_n {
            let total: BigUint = cycle_types(k).map(|c| c.class_size()).sum();
            t.check(total == factorial(k), || format!("class sizes of S_{k} do not sum to k!"));
            for (i, count) in absolute_length_distribution(k).iter().enumerate() {
                let bound = BigRational::new(BigInt::from(k).pow(2 * i as u32), BigInt::from(factorial(i)));
                t.check(ratio(count) <= bound, || format!("length count exceeds k^(2i)/i! at k={k}, i={i}"));
            }
        }
        Ok(())
    })?);

    checks.push(timed("transposition closed form", |t| {
        for n in 2..=max_n {
            let tau = CycleType::transposition(n)?;
            for nu in Partition::all(n) {
                let closed = transposition_normalized_character(&nu)?;
                t.check(closed == normalized_character(&nu, &tau)?, || format!("closed form differs at ({nu})"));
            }
        }
        Ok(())
    })?);

    checks.push(timed("three-way skew count agreement", |t| {
        for (lam, mu) in pairs(max_n) {
            let shape = SkewShape::new(lam.clone(), mu.clone())?;
            let dp = f_skew_chain_dp(&shape);
            let det = f_skew_determinant(&shape)?;
            let cs = f_skew_charsum(&lam, &mu)?;
            t.check(dp == det && dp == cs, || format!("{shape}: dp {dp}, det {det}, charsum {cs}"));
            if shape.cells() <= 9 {
                let count = enumerate_syt(&shape, 9)?;
                t.check(count == dp, || format!("{shape}: enumeration {count}, dp {dp}"));
            }
        }
        Ok(())
    })?);

    checks.push(timed("level-set normalization", |t| {
        for n in 0..=max_n {
            for lam in Partition::all(n) {
                let f = f_lambda(&lam);
                for k in 0..=n {
                    let counts = skew_counts_from_outer(&lam, k)?;
                    let sum: BigUint = counts.iter().map(|(mu, s)| f_lambda(mu) * s).sum();
                    t.check(sum == f, || format!("Σ f^μ f^(λ/μ) ≠ f^λ at ({lam}), k={k}"));
                    let total = level_set_distribution(&lam, k)?.into_values().fold(BigRational::zero(), |a, b| a + b);
                    t.check(total.is_one(), || format!("level-set law does not sum to 1 at ({lam}), k={k}"));
                }
            }
        }
        Ok(())
    })?);

    checks.push(timed("truncations and bands", |t| {
        for (lam, mu) in pairs(max_n) {
            let (n, k) = (lam.size(), mu.size());
            let exact = a_ratio(&lam, &mu)?;
            let swapped = a_ratio(&lam.conjugate(), &mu.conjugate())?;
            t.check(swapped == exact, || format!("A changes under conjugation at ({lam})/({mu})"));
            t.check(truncated_sum(&lam, &mu, k)? == exact, || format!("full truncation ≠ A at ({lam})/({mu})"));
            if k >= 2 {
                let closed = second_order_approx(&lam, &mu)?;
                t.check(closed == truncated_sum(&lam, &mu, 1)?, || format!("second order differs at ({lam})/({mu})"));
            }
            let spec = DiagnosticSpec { alpha_of_n: isqrt_ceil(n), beta_of_k: isqrt_ceil(k), r: 1 };
            let report = partial_sums_by_length(&lam, &mu, spec)?;
            for scheme in [BandScheme::Truncation, BandScheme::Balanced] {
                let sum = report.scheme(scheme).fold(BigRational::zero(), |acc, b| acc + &b.sum);
                t.check(sum == exact, || format!("{} bands do not sum to A at ({lam})/({mu})", scheme.name()));
            }
        }
        Ok(())
    })?);

    checks.push(timed("calibrated bound and B ≥ A", |t| {
        let a = calibrate_a_exact(max_n)?;
        for m in 2..=max_n {
            for nu in Partition::all(m) {
                for rho in cycle_types(m).filter(|c| !c.is_identity()) {
                    let lhs = crate::characters::normalized_character_abs(&nu, &rho)?;
                    t.check(lhs <= fs_bound_exact(&nu, &rho, &a)?, || format!("bound fails at ({nu}), class {rho}"));
                }
            }
        }
        for (lam, mu) in pairs(max_n) {
            let b = b_upper_fs_exact(&lam, &mu, &a)?;
            t.check(b >= a_ratio(&lam, &mu)?, || format!("B < A at ({lam})/({mu})"));
        }
        Ok(())
    })?);

    checks.push(timed("fixed-point counts", |t| {
        for eta in [BigRational::new(1.into(), 8.into()), BigRational::new(1.into(), 5.into())] {
            for k in 0..=max_n.max(30) {
                t.check(count_omega(k, &eta)? <= count_omega_superset(k, &eta)?, || format!("superset fails at k={k}"));
            }
        }
        Ok(())
    })?);

    checks.push(timed("product formula against chain counts", |t| {
        for code in 0..243u32 {
            let digit = |i: u32| ((code / 3u32.pow(i)) % 3) as u64;
            let p = KimOhParams::new(digit(0), digit(1), digit(2), digit(3), digit(4));
            let dp = f_skew_chain_dp(&kimoh_shape(&p));
            let formula = kimoh_count(&p)?;
            t.check(dp == formula, || format!("({p}): formula {formula}, chain count {dp}"));
        }
        Ok(())
    })?);

    Ok(SelfTestReport { max_n, checks })
}

fn isqrt_ceil(n: usize) -> usize {
    (0..=n).find(|r| r * r >= n).unwrap_or(n)
}
